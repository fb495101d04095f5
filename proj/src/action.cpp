#include "warpcone/action.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace warpcone {

namespace {

TorusPoint torus_translate(const TorusPoint& p, const std::vector<Rat>& shift) {
  if (p.x.size() != shift.size()) throw std::logic_error("torus shift dimension mismatch");
  TorusPoint q;
  q.x.reserve(p.x.size());
  for (std::size_t i = 0; i < p.x.size(); ++i) q.x.push_back((p.x[i] + shift[i]).mod1());
  return q;
}

TorusPoint mat2_apply(const Mat2El& m, const TorusPoint& p) {
  if (p.x.size() != 2) throw std::logic_error("matrix action needs a 2-torus");
  TorusPoint q;
  q.x.resize(2);
  q.x[0] = (p.x[0] * Rat(m.a) + p.x[1] * Rat(m.b)).mod1();
  q.x[1] = (p.x[0] * Rat(m.c) + p.x[1] * Rat(m.d)).mod1();
  return q;
}

SpherePoint quat_left_mul(const QuatEl& g, const SpherePoint& p) {
  double scale = std::pow(5.0, -0.5 * g.k);
  double a = g.q[0] * scale, b = g.q[1] * scale, c = g.q[2] * scale, d = g.q[3] * scale;
  SpherePoint r;
  r.q[0] = a * p.q[0] - b * p.q[1] - c * p.q[2] - d * p.q[3];
  r.q[1] = a * p.q[1] + b * p.q[0] + c * p.q[3] - d * p.q[2];
  r.q[2] = a * p.q[2] - b * p.q[3] + c * p.q[0] + d * p.q[1];
  r.q[3] = a * p.q[3] + b * p.q[2] - c * p.q[1] + d * p.q[0];
  double n = std::sqrt(r.q[0] * r.q[0] + r.q[1] * r.q[1] + r.q[2] * r.q[2] + r.q[3] * r.q[3]);
  for (auto& x : r.q) x /= n;
  return r;
}

ProfinitePoint profinite_add(const ProfinitePoint& p, long long t,
                             const std::vector<long long>& sizes) {
  ProfinitePoint q = p;
  for (std::size_t j = 0; j < q.digits.size() && j < sizes.size(); ++j) {
    long long m = sizes[j];
    long long r = (q.digits[j] + t) % m;
    q.digits[j] = r < 0 ? r + m : r;
  }
  return q;
}

ActionModel base_model(std::string name, GroupPresentation group,
                       std::shared_ptr<const FiniteSpace> s) {
  ActionModel a;
  a.name = std::move(name);
  a.group = std::move(group);
  a.space = std::move(s);
  return a;
}

}  // namespace

double ActionModel::max_lipschitz() const {
  double m = 1.0;
  for (double v : lip) m = std::max(m, v);
  return m;
}

Payload apply_gen_exact(const ActionModel& a, int gen, const Payload& p) {
  return a.maps.at(static_cast<std::size_t>(gen))(p);
}

Payload apply_word_exact(const ActionModel& a, const std::vector<int>& word, Payload p) {
  for (int idx : word) p = a.maps.at(static_cast<std::size_t>(idx))(p);
  return p;
}

ApplyResult apply_word(const ActionModel& a, const std::vector<int>& word, int point) {
  Payload p = apply_word_exact(a, word, a.space->points.at(static_cast<std::size_t>(point)));
  auto [idx, err] = a.space->nearest(p);
  ApplyResult r;
  r.index = idx;
  r.snap_error = err;
  double bound = 0;
  for (std::size_t i = 0; i < word.size(); ++i) {
    double prod = 1.0;
    for (std::size_t j = i + 1; j < word.size(); ++j)
      prod *= a.lip.at(static_cast<std::size_t>(word[j]));
    bound += prod * a.space->mesh;
  }
  r.error_bound = bound;
  return r;
}

double generator_lipschitz(const ActionModel& a, int gen) {
  const auto& s = *a.space;
  int n = s.size();
  std::vector<Payload> img;
  img.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    img.push_back(apply_gen_exact(a, gen, s.points[static_cast<std::size_t>(i)]));
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d = s.dist(i, j);
      if (d <= 0) continue;
      double di = s.payload_dist(img[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(j)]);
      best = std::max(best, di / d);
    }
  }
  return best == 0.0 ? 1.0 : best;
}

void finalize_lipschitz(ActionModel& a) {
  a.lip.clear();
  for (std::size_t g = 0; g < a.maps.size(); ++g)
    a.lip.push_back(generator_lipschitz(a, static_cast<int>(g)));
}

ActionModel trivial_action(std::shared_ptr<const FiniteSpace> s) {
  ActionModel a = base_model("trivial", trivial_presentation(), std::move(s));
  finalize_lipschitz(a);
  return a;
}

ActionModel rotation_action(std::shared_ptr<const FiniteSpace> s, const std::vector<Rat>& shift) {
  ActionModel a = base_model("rotation", z_presentation(), std::move(s));
  std::vector<Rat> neg;
  neg.reserve(shift.size());
  for (const Rat& r : shift) neg.push_back(Rat(0) - r);
  a.maps = {
      [shift](const Payload& p) -> Payload { return torus_translate(std::get<TorusPoint>(p), shift); },
      [neg](const Payload& p) -> Payload { return torus_translate(std::get<TorusPoint>(p), neg); },
  };
  finalize_lipschitz(a);
  return a;
}

ActionModel cyclic_rotation_action(std::shared_ptr<const FiniteSpace> s, long long mod,
                                   const std::vector<Rat>& shift) {
  for (const Rat& r : shift) {
    Rat scaled = r * Rat(mod);
    if (scaled.den != 1) throw std::invalid_argument("shift * mod must be integral for a cyclic action");
  }
  ActionModel a = base_model("cyclic_rotation", cyclic_presentation(mod), std::move(s));
  std::vector<Rat> neg;
  neg.reserve(shift.size());
  for (const Rat& r : shift) neg.push_back(Rat(0) - r);
  a.maps.push_back(
      [shift](const Payload& p) -> Payload { return torus_translate(std::get<TorusPoint>(p), shift); });
  if (a.group.gens.size() == 2)
    a.maps.push_back(
        [neg](const Payload& p) -> Payload { return torus_translate(std::get<TorusPoint>(p), neg); });
  finalize_lipschitz(a);
  return a;
}

ActionModel double_rotation_action(std::shared_ptr<const FiniteSpace> s, const std::vector<Rat>& s1,
                                   const std::vector<Rat>& s2) {
  ActionModel a = base_model("double_rotation", zd_presentation(2), std::move(s));
  auto make = [](std::vector<Rat> sh) {
    return [sh = std::move(sh)](const Payload& p) -> Payload {
      return torus_translate(std::get<TorusPoint>(p), sh);
    };
  };
  std::vector<Rat> n1, n2;
  for (const Rat& r : s1) n1.push_back(Rat(0) - r);
  for (const Rat& r : s2) n2.push_back(Rat(0) - r);
  a.maps = {make(s1), make(n1), make(s2), make(n2)};
  finalize_lipschitz(a);
  return a;
}

ActionModel sl2_action(std::shared_ptr<const FiniteSpace> s) {
  ActionModel a = base_model("sl2", sl2z_presentation(), std::move(s));
  for (const auto& gen : a.group.gens) {
    Mat2El m = std::get<Mat2El>(gen.g.data);
    a.maps.push_back([m](const Payload& p) -> Payload { return mat2_apply(m, std::get<TorusPoint>(p)); });
  }
  finalize_lipschitz(a);
  return a;
}

ActionModel quaternion_action(std::shared_ptr<const FiniteSpace> s) {
  ActionModel a = base_model("quaternion", quat_f2_presentation(), std::move(s));
  for (const auto& gen : a.group.gens) {
    QuatEl q = std::get<QuatEl>(gen.g.data);
    a.maps.push_back([q](const Payload& p) -> Payload { return quat_left_mul(q, std::get<SpherePoint>(p)); });
  }
  a.free_flag = true;
  finalize_lipschitz(a);
  return a;
}

ActionModel profinite_shift_action(std::shared_ptr<const FiniteSpace> s) {
  if (!s->profinite_) throw std::invalid_argument("profinite shift needs a profinite net");
  std::vector<long long> sizes = s->profinite_->quotient_sizes;
  ActionModel a = base_model("profinite_shift", z_presentation(), std::move(s));
  a.maps = {
      [sizes](const Payload& p) -> Payload { return profinite_add(std::get<ProfinitePoint>(p), 1, sizes); },
      [sizes](const Payload& p) -> Payload { return profinite_add(std::get<ProfinitePoint>(p), -1, sizes); },
  };
  finalize_lipschitz(a);
  return a;
}

ActionModel cone_lift_action(const ActionModel& inner, std::shared_ptr<const FiniteSpace> cone) {
  ActionModel a = base_model(inner.name + "_cone", inner.group, std::move(cone));
  for (const auto& inner_map : inner.maps) {
    a.maps.push_back([inner_map](const Payload& p) -> Payload {
      const auto& cp = std::get<ConePoint>(p);
      if (!cp.y) return p;  // apex is fixed
      ConePoint out;
      out.theta = cp.theta;
      out.y = box(inner_map(cp.y->p));
      return Payload{out};
    });
  }
  a.free_flag = false;
  finalize_lipschitz(a);
  return a;
}

ActionModel star_extension_action(const ActionModel& inner, std::shared_ptr<const FiniteSpace> ext) {
  ActionModel a = base_model(inner.name + "_ext", inner.group, std::move(ext));
  for (const auto& inner_map : inner.maps) {
    a.maps.push_back([inner_map](const Payload& p) -> Payload {
      if (std::holds_alternative<StarPoint>(p)) return p;
      return inner_map(p);
    });
  }
  a.free_flag = false;
  finalize_lipschitz(a);
  return a;
}

}  // namespace warpcone
