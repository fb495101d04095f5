#include "warpcone/space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "warpcone/rng.hpp"

namespace warpcone {

std::string to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::torus: return "torus";
    case SpaceKind::sphere3: return "sphere3";
    case SpaceKind::profinite: return "profinite";
    case SpaceKind::compact_cone: return "compact_cone";
    case SpaceKind::one_point_ext: return "one_point_ext";
  }
  return "?";
}

ProfiniteSpec ProfiniteSpec::cyclic_tower(long long base, int level, double lambda) {
  ProfiniteSpec s;
  s.truncation_level = level;
  s.lambda = lambda;
  long long m = 1;
  double a = 1.0;
  for (int j = 1; j <= level; ++j) {
    m *= base;
    a *= lambda;
    s.quotient_sizes.push_back(m);
    s.decay_weights.push_back(a);
  }
  s.validate();
  return s;
}

void ProfiniteSpec::validate() const {
  if (truncation_level < 1) throw std::invalid_argument("profinite: truncation_level < 1");
  if (static_cast<int>(quotient_sizes.size()) != truncation_level ||
      static_cast<int>(decay_weights.size()) != truncation_level)
    throw std::invalid_argument("profinite: sizes/weights length mismatch");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("profinite: lambda outside (0,1)");
  for (int j = 0; j < truncation_level; ++j) {
    if (quotient_sizes[j] < 2) throw std::invalid_argument("profinite: quotient size < 2");
    if (j > 0 && quotient_sizes[j] % quotient_sizes[j - 1] != 0)
      throw std::invalid_argument("profinite: quotient sizes must divide");
    if (decay_weights[j] <= 0.0) throw std::invalid_argument("profinite: weight <= 0");
    if (j > 0 && decay_weights[j] > lambda * decay_weights[j - 1] + 1e-15)
      throw std::invalid_argument("profinite: weights must decay by factor lambda");
  }
}

double ProfiniteSpec::weight_at(int j) const {
  if (j <= truncation_level) return decay_weights[j - 1];
  return decay_weights[truncation_level - 1] * std::pow(lambda, j - truncation_level);
}

namespace {

double torus_dist(const TorusPoint& a, const TorusPoint& b) {
  if (a.x.size() != b.x.size()) throw std::invalid_argument("torus: dimension mismatch");
  Rat total(0);
  for (size_t i = 0; i < a.x.size(); ++i) {
    Rat m = (a.x[i] - b.x[i]).mod1();
    Rat w = Rat(1) - m;
    total = total + (m < w ? m : w);
  }
  return total.to_double();
}

double sphere_dist(const SpherePoint& a, const SpherePoint& b) {
  double dot = 0.0;
  for (int i = 0; i < 4; ++i) dot += a.q[i] * b.q[i];
  dot = std::clamp(dot, -1.0, 1.0);
  return std::acos(dot);
}

}  // namespace

double FiniteSpace::payload_dist(const Payload& pa, const Payload& pb) const {
  double d = 0.0;
  switch (kind) {
    case SpaceKind::torus:
      d = torus_dist(std::get<TorusPoint>(pa), std::get<TorusPoint>(pb));
      break;
    case SpaceKind::sphere3:
      d = sphere_dist(std::get<SpherePoint>(pa), std::get<SpherePoint>(pb));
      break;
    case SpaceKind::profinite: {
      const auto& a = std::get<ProfinitePoint>(pa).digits;
      const auto& b = std::get<ProfinitePoint>(pb).digits;
      if (a.size() != b.size()) throw std::invalid_argument("profinite: depth mismatch");
      d = 0.0;
      for (size_t j = 0; j < a.size(); ++j)
        if (a[j] != b[j]) {
          d = profinite_->weight_at(static_cast<int>(j) + 1);
          break;
        }
      break;
    }
    case SpaceKind::compact_cone: {
      const auto& a = std::get<ConePoint>(pa);
      const auto& b = std::get<ConePoint>(pb);
      d = std::abs(a.theta - b.theta) * base->diameter();
      if (a.y && b.y) d += std::min(a.theta, b.theta) * base->payload_dist(a.y->p, b.y->p);
      break;
    }
    case SpaceKind::one_point_ext: {
      bool sa = std::holds_alternative<StarPoint>(pa);
      bool sb = std::holds_alternative<StarPoint>(pb);
      if (sa && sb)
        d = 0.0;
      else if (sa || sb)
        d = star_distance;
      else
        d = base->payload_dist(pa, pb);
      break;
    }
  }
  return metric_scale * d;
}

std::pair<int, double> FiniteSpace::nearest(const Payload& p) const {
  int best = 0;
  double bd = payload_dist(p, points[0]);
  for (int i = 1; i < size(); ++i) {
    double d = payload_dist(p, points[i]);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return {best, bd};
}

double FiniteSpace::total_weight() const {
  double t = 0.0;
  for (double w : weights) t += w;
  return t;
}

void FiniteSpace::finalize() {
  const int n = size();
  if (n < 1) throw std::invalid_argument("space: empty point set");
  if (static_cast<int>(weights.size()) != n) throw std::invalid_argument("space: weights size");
  for (double w : weights)
    if (w < 0.0) throw std::invalid_argument("space: negative weight");
  if (total_weight() <= 0.0) throw std::invalid_argument("space: total weight not positive");

  dmat_.assign(static_cast<size_t>(n) * n, 0.0);
  diam_ = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = payload_dist(points[i], points[j]);
      if (!(d > 0.0))
        throw std::invalid_argument("space: duplicate points (zero distance at " +
                                    std::to_string(i) + "," + std::to_string(j) + ")");
      dmat_[static_cast<size_t>(i) * n + j] = d;
      dmat_[static_cast<size_t>(j) * n + i] = d;
      diam_ = std::max(diam_, d);
    }

  // Triangle inequality: exhaustive for small spaces, sampled otherwise.
  const double slack = 1e-12 * std::max(1.0, diam_);
  auto check = [&](int i, int j, int k) {
    if (dist(i, j) > dist(i, k) + dist(k, j) + slack)
      throw std::invalid_argument("space: triangle inequality violated at (" + std::to_string(i) +
                                  "," + std::to_string(j) + "," + std::to_string(k) + ")");
  };
  if (n <= 300) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = 0; k < n; ++k) check(i, j, k);
  } else {
    Rng rng(0x7261696e, 1);
    for (int t = 0; t < 200000; ++t) {
      int i = static_cast<int>(rng.next_below(n));
      int j = static_cast<int>(rng.next_below(n));
      int k = static_cast<int>(rng.next_below(n));
      if (i != j) check(i, j, k);
    }
  }
}

namespace {

FiniteSpace build_torus(const NetSpec& spec) {
  if (spec.dim < 1 || spec.dim > 3) throw std::invalid_argument("torus: dim must be 1..3");
  FiniteSpace s;
  s.kind = SpaceKind::torus;
  const int n = spec.resolution;
  long long count = 1;
  for (int a = 0; a < spec.dim; ++a) count *= n;
  if (count > 200000) throw std::invalid_argument("torus: net too large");
  for (long long c = 0; c < count; ++c) {
    TorusPoint p;
    long long rest = c;
    for (int a = 0; a < spec.dim; ++a) {
      p.x.push_back(Rat(rest % n, n));
      rest /= n;
    }
    s.points.emplace_back(std::move(p));
  }
  s.weights.assign(s.points.size(), 1.0 / static_cast<double>(s.points.size()));
  s.mesh = static_cast<double>(spec.dim) / (2.0 * n);
  return s;
}

SpherePoint random_quaternion(Rng& rng) {
  // Four Box-Muller gaussians, normalised.
  for (;;) {
    double g[4];
    for (int i = 0; i < 2; ++i) {
      double u1 = rng.next_double();
      double u2 = rng.next_double();
      if (u1 <= 1e-300) u1 = 1e-300;
      double r = std::sqrt(-2.0 * std::log(u1));
      g[2 * i] = r * std::cos(2.0 * std::numbers::pi * u2);
      g[2 * i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
    }
    double norm = std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2] + g[3] * g[3]);
    if (norm < 1e-12) continue;
    return SpherePoint{{g[0] / norm, g[1] / norm, g[2] / norm, g[3] / norm}};
  }
}

FiniteSpace build_sphere(const NetSpec& spec) {
  FiniteSpace s;
  s.kind = SpaceKind::sphere3;
  const int n = spec.resolution;
  if (n > 2000) throw std::invalid_argument("sphere3: net too large");
  Rng rng(spec.seed, 2);

  // Best-candidate sampling: each new point is the farthest-from-net choice
  // among a fixed number of uniform candidates. Random with a seed, but with
  // a far better covering radius than plain iid sampling.
  auto min_dist_to_net = [&](const SpherePoint& q) {
    double best = 1e300;
    for (const auto& p : s.points) best = std::min(best, sphere_dist(std::get<SpherePoint>(p), q));
    return best;
  };
  s.points.emplace_back(random_quaternion(rng));
  const int kCandidates = 24;
  while (static_cast<int>(s.points.size()) < n) {
    SpherePoint best{};
    double bd = -1.0;
    for (int c = 0; c < kCandidates; ++c) {
      SpherePoint q = random_quaternion(rng);
      double d = min_dist_to_net(q);
      if (d > bd) {
        bd = d;
        best = q;
      }
    }
    s.points.emplace_back(best);
  }
  s.weights.assign(s.points.size(), 1.0 / static_cast<double>(s.points.size()));

  // Mesh certification by rejection sampling, with 10% headroom recorded.
  Rng cert(spec.seed, 3);
  double worst = 0.0;
  for (int t = 0; t < spec.certify_samples; ++t) {
    SpherePoint q = random_quaternion(cert);
    worst = std::max(worst, min_dist_to_net(q));
  }
  s.mesh = 1.1 * worst;
  return s;
}

FiniteSpace build_profinite(const NetSpec& spec) {
  if (!spec.profinite) throw std::invalid_argument("profinite: missing tower spec");
  const ProfiniteSpec& t = *spec.profinite;
  t.validate();
  FiniteSpace s;
  s.kind = SpaceKind::profinite;
  s.profinite_ = std::make_shared<ProfiniteSpec>(t);
  long long m = t.quotient_sizes.back();
  if (m > 100000) throw std::invalid_argument("profinite: net too large");
  for (long long v = 0; v < m; ++v) {
    ProfinitePoint p;
    for (int j = 0; j < t.truncation_level; ++j) p.digits.push_back(v % t.quotient_sizes[j]);
    s.points.emplace_back(std::move(p));
  }
  s.weights.assign(s.points.size(), 1.0 / static_cast<double>(s.points.size()));
  s.mesh = t.weight_at(t.truncation_level + 1);
  return s;
}

}  // namespace

FiniteSpace build_net(const NetSpec& spec) {
  if (spec.kind == SpaceKind::profinite) {
    FiniteSpace s = build_profinite(spec);
    s.finalize();
    return s;
  }
  if (spec.resolution < 2) throw std::invalid_argument("build_net: resolution < 2");
  FiniteSpace s;
  switch (spec.kind) {
    case SpaceKind::torus: s = build_torus(spec); break;
    case SpaceKind::sphere3: s = build_sphere(spec); break;
    default: throw std::invalid_argument("build_net: unsupported kind " + to_string(spec.kind));
  }
  if (s.size() < 3) std::fprintf(stderr, "warpcone: warning: net has only %d points\n", s.size());
  s.finalize();
  return s;
}

double cone_metric(double t1, int y1, double t2, int y2, const FiniteSpace& base, bool compact) {
  if (t1 < 0.0 || t2 < 0.0) throw std::invalid_argument("cone_metric: negative radial coordinate");
  if (compact && (t1 > 1.0 || t2 > 1.0))
    throw std::invalid_argument("cone_metric: theta > 1 with compact flag");
  return std::abs(t1 - t2) * base.diameter() + std::min(t1, t2) * base.dist(y1, y2);
}

FiniteSpace one_point_extension(std::shared_ptr<const FiniteSpace> base, double star_distance) {
  if (star_distance < base->diameter() / 2.0)
    throw std::invalid_argument("one_point_extension: star_distance below diameter/2");
  FiniteSpace s;
  s.kind = SpaceKind::one_point_ext;
  s.base = base;
  s.star_distance = star_distance;
  s.points = base->points;
  s.points.emplace_back(StarPoint{});
  s.weights = base->weights;
  s.weights.push_back(0.0);
  s.mesh = base->mesh;
  s.finalize();
  return s;
}

FiniteSpace compact_cone_space(std::shared_ptr<const FiniteSpace> base,
                               const std::vector<double>& thetas) {
  if (thetas.empty()) throw std::invalid_argument("compact_cone: no slices");
  for (size_t i = 0; i < thetas.size(); ++i) {
    if (!(thetas[i] > 0.0 && thetas[i] <= 1.0))
      throw std::invalid_argument("compact_cone: theta outside (0,1]");
    if (i > 0 && thetas[i] <= thetas[i - 1])
      throw std::invalid_argument("compact_cone: thetas must ascend");
  }
  FiniteSpace s;
  s.kind = SpaceKind::compact_cone;
  s.base = base;
  const int n = base->size();
  for (double t : thetas)
    for (int i = 0; i < n; ++i) {
      s.points.emplace_back(ConePoint{t, box(base->points[i])});
      s.cone_base_index.push_back(i);
      s.cone_thetas.push_back(t);
    }
  s.points.emplace_back(ConePoint{0.0, nullptr});
  s.cone_base_index.push_back(-1);
  s.cone_thetas.push_back(0.0);
  s.weights.assign(s.points.size(), 1.0 / static_cast<double>(s.points.size()));
  double gap = thetas[0];
  for (size_t i = 1; i < thetas.size(); ++i) gap = std::max(gap, thetas[i] - thetas[i - 1]);
  s.mesh = 0.5 * gap * base->diameter() + base->mesh;
  s.finalize();
  return s;
}

FiniteSpace scaled_space(const FiniteSpace& b, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("scaled_space: scale must be positive");
  FiniteSpace s = b;
  s.metric_scale = b.metric_scale * c;
  s.mesh = b.mesh * c;
  s.star_distance = b.star_distance;  // scaling applied via metric_scale
  s.finalize();
  return s;
}

void space_to_csv(const FiniteSpace& s, std::ostream& out) {
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  out << "id,kind,coords,weight\n";
  for (int i = 0; i < s.size(); ++i) {
    out << i << "," << to_string(s.kind) << ",";
    const Payload& p = s.points[i];
    if (std::holds_alternative<TorusPoint>(p)) {
      const auto& t = std::get<TorusPoint>(p);
      for (size_t a = 0; a < t.x.size(); ++a) out << (a ? ";" : "") << t.x[a].str();
    } else if (std::holds_alternative<SpherePoint>(p)) {
      const auto& q = std::get<SpherePoint>(p);
      for (int a = 0; a < 4; ++a) out << (a ? ";" : "") << fmt(q.q[a]);
    } else if (std::holds_alternative<ProfinitePoint>(p)) {
      const auto& d = std::get<ProfinitePoint>(p).digits;
      for (size_t a = 0; a < d.size(); ++a) out << (a ? ";" : "") << d[a];
    } else if (std::holds_alternative<ConePoint>(p)) {
      out << fmt(s.cone_thetas[i]) << ";" << s.cone_base_index[i];
    } else {
      out << "star";
    }
    out << "," << fmt(s.weights[i]) << "\n";
  }
}

}  // namespace warpcone
