#include "warpcone/embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace warpcone {

namespace {

// |x|^p with exact repeated multiplication for small integer p; the integer
// cases keep the dyadic profinite sums exact.
double pow_abs(double x, double p) {
  double a = std::fabs(x);
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  if (p == 4.0) {
    double s = a * a;
    return s * s;
  }
  return std::pow(a, p);
}

double root_p(double s, double p) {
  if (p == 1.0) return s;
  if (p == 2.0) return std::sqrt(s);
  if (p == 4.0) return std::sqrt(std::sqrt(s));
  return std::pow(s, 1.0 / p);
}

void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("norm exponent p must be >= 1");
}

}  // namespace

double EmbeddingTable::norm_diff(int i, int j) const {
  const auto& a = vecs[static_cast<std::size_t>(i)];
  const auto& b = vecs[static_cast<std::size_t>(j)];
  double s = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * pow_abs(a[k] - b[k], p);
  return root_p(s, p);
}

EmbeddingTable kuratowski_embed_matrix(const std::vector<double>& dmat, int n,
                                       const std::vector<double>& weights, double p) {
  check_p(p);
  if (static_cast<int>(weights.size()) != n) throw std::invalid_argument("weight count mismatch");
  double total = 0.0;
  for (double x : weights) total += x;
  if (!(total > 0.0)) throw std::invalid_argument("weights must have positive total mass");
  EmbeddingTable t;
  t.p = p;
  t.w = weights;
  t.vecs.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = t.vecs[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      row[static_cast<std::size_t>(j)] = dmat[static_cast<std::size_t>(i) * n + j];
  }
  return t;
}

EmbeddingTable kuratowski_embed(const FiniteSpace& s, double p) {
  int n = s.size();
  std::vector<double> dmat(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dmat[static_cast<std::size_t>(i) * n + j] = s.dist(i, j);
  return kuratowski_embed_matrix(dmat, n, s.weights, p);
}

EmbeddingTable profinite_embed(const ProfiniteSpec& spec, const std::vector<Payload>& points,
                               double p) {
  check_p(p);
  spec.validate();
  int levels = spec.truncation_level;
  for (int j = 1; j < levels; ++j) {
    if (spec.weight_at(j + 1) > spec.weight_at(j))
      throw std::invalid_argument("decay weights must be nonincreasing");
  }
  std::vector<int> offset(static_cast<std::size_t>(levels) + 1, 0);
  for (int j = 0; j < levels; ++j)
    offset[static_cast<std::size_t>(j) + 1] =
        offset[static_cast<std::size_t>(j)] + static_cast<int>(spec.quotient_sizes[static_cast<std::size_t>(j)]);
  int dim = offset[static_cast<std::size_t>(levels)];

  double tail = root_p(1.0 - pow_abs(spec.lambda, p), p);
  EmbeddingTable t;
  t.p = p;
  t.w.assign(static_cast<std::size_t>(dim), 1.0);
  t.vecs.reserve(points.size());
  double half = root_p(0.5, p);  // 2^{-1/p}
  for (const auto& pt : points) {
    const auto* pp = std::get_if<ProfinitePoint>(&pt);
    if (!pp || static_cast<int>(pp->digits.size()) != levels)
      throw std::invalid_argument("profinite_embed: point/tower mismatch");
    std::vector<double> v(static_cast<std::size_t>(dim), 0.0);
    for (int j = 0; j < levels; ++j) {
      double scale = half * spec.weight_at(j + 1);
      if (j == levels - 1) scale /= tail;
      long long digit = pp->digits[static_cast<std::size_t>(j)];
      v[static_cast<std::size_t>(offset[static_cast<std::size_t>(j)] + digit)] = scale;
    }
    t.vecs.push_back(std::move(v));
  }
  return t;
}

std::vector<Element> cyclic_group_elements(long long mod) {
  std::vector<Element> els;
  for (long long i = 0; i < mod; ++i) els.push_back(Element{CyclicEl{i, mod}});
  return els;
}

std::vector<double> cyclic_circle_metric(int n) {
  std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = std::abs(i - j);
      d[static_cast<std::size_t>(i) * n + j] = static_cast<double>(std::min(k, n - k)) / n;
    }
  return d;
}

KoopmanResult koopman_translation_embed(const std::vector<Element>& elements,
                                        const EmbeddingTable& base) {
  int n = static_cast<int>(elements.size());
  if (base.size() != n) throw std::invalid_argument("base embedding/group size mismatch");
  std::map<Key, int> index;
  for (int i = 0; i < n; ++i) index[elements[static_cast<std::size_t>(i)].key()] = i;
  // mul[h][g] = index of elements[h] * elements[g]
  std::vector<std::vector<int>> mul(static_cast<std::size_t>(n),
                                    std::vector<int>(static_cast<std::size_t>(n)));
  for (int h = 0; h < n; ++h)
    for (int g = 0; g < n; ++g) {
      Element prod = elements[static_cast<std::size_t>(h)].mul(elements[static_cast<std::size_t>(g)]);
      auto it = index.find(prod.key());
      if (it == index.end()) throw std::invalid_argument("element list not closed under products");
      mul[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)] = it->second;
    }

  int bdim = base.dim();
  double haar = 1.0 / n;
  KoopmanResult res;
  res.table.p = base.p;
  res.table.w.resize(static_cast<std::size_t>(n) * bdim);
  for (int h = 0; h < n; ++h)
    for (int k = 0; k < bdim; ++k)
      res.table.w[static_cast<std::size_t>(h) * bdim + k] = haar * base.w[static_cast<std::size_t>(k)];
  res.table.vecs.resize(static_cast<std::size_t>(n));
  for (int g = 0; g < n; ++g) {
    auto& v = res.table.vecs[static_cast<std::size_t>(g)];
    v.resize(static_cast<std::size_t>(n) * bdim);
    for (int h = 0; h < n; ++h) {
      const auto& c = base.vecs[static_cast<std::size_t>(mul[static_cast<std::size_t>(h)][static_cast<std::size_t>(g)])];
      for (int k = 0; k < bdim; ++k) v[static_cast<std::size_t>(h) * bdim + k] = c[static_cast<std::size_t>(k)];
    }
  }

  std::vector<std::vector<double>> norms(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = res.table.norm_diff(i, j);
      norms[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      norms[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = v;
    }
  double defect = 0.0;
  for (int t = 0; t < n; ++t)
    for (int g = 0; g < n; ++g)
      for (int gp = 0; gp < n; ++gp) {
        int a = mul[static_cast<std::size_t>(t)][static_cast<std::size_t>(g)];
        int b = mul[static_cast<std::size_t>(t)][static_cast<std::size_t>(gp)];
        defect = std::max(defect,
                          std::fabs(norms[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] -
                                    norms[static_cast<std::size_t>(g)][static_cast<std::size_t>(gp)]));
      }
  res.invariance_defect = defect;
  return res;
}

DistortionReport distortion(const std::vector<double>& dmat, int n, const EmbeddingTable& table) {
  if (table.size() != n) throw std::invalid_argument("metric/table size mismatch");
  DistortionReport rep;
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = dmat[static_cast<std::size_t>(i) * n + j];
      if (d <= 0.0) continue;
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
  if (!std::isfinite(dmin)) throw std::invalid_argument("no pairs at positive distance");

  const int kBuckets = 32;
  double lmin = std::log(dmin);
  double lmax = std::log(dmax);
  double span = lmax > lmin ? lmax - lmin : 1.0;
  std::vector<double> bmin(kBuckets, std::numeric_limits<double>::infinity());
  std::vector<double> bmax(kBuckets, 0.0);
  std::vector<char> seen(kBuckets, 0);

  double emax = 0.0;
  double cmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d = dmat[static_cast<std::size_t>(i) * n + j];
      if (d <= 0.0) {
        ++rep.zero_pairs;
        continue;
      }
      double nd = table.norm_diff(i, j);
      double ratio = nd / d;
      emax = std::max(emax, ratio);
      cmin = std::min(cmin, ratio);
      int b = static_cast<int>((std::log(d) - lmin) / span * kBuckets);
      b = std::clamp(b, 0, kBuckets - 1);
      bmin[static_cast<std::size_t>(b)] = std::min(bmin[static_cast<std::size_t>(b)], nd);
      bmax[static_cast<std::size_t>(b)] = std::max(bmax[static_cast<std::size_t>(b)], nd);
      seen[static_cast<std::size_t>(b)] = 1;
    }
  rep.expansion_max = emax;
  rep.contraction_min = cmin;
  rep.distortion = std::max(emax, 1.0 / cmin);

  double suffix = std::numeric_limits<double>::infinity();
  for (int b = kBuckets - 1; b >= 0; --b) {
    if (!seen[static_cast<std::size_t>(b)]) continue;
    suffix = std::min(suffix, bmin[static_cast<std::size_t>(b)]);
    bmin[static_cast<std::size_t>(b)] = suffix;
  }
  double prefix = 0.0;
  for (int b = 0; b < kBuckets; ++b) {
    if (!seen[static_cast<std::size_t>(b)]) continue;
    prefix = std::max(prefix, bmax[static_cast<std::size_t>(b)]);
    RhoSample s;
    s.d = std::exp(lmin + (b + 0.5) / kBuckets * span);
    s.rho_minus = bmin[static_cast<std::size_t>(b)];
    s.rho_plus = prefix;
    rep.rho_samples.push_back(s);
  }
  return rep;
}

DistortionReport distortion(const FiniteSpace& s, const EmbeddingTable& table) {
  int n = s.size();
  std::vector<double> dmat(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) dmat[static_cast<std::size_t>(i) * n + j] = s.dist(i, j);
  return distortion(dmat, n, table);
}

}  // namespace warpcone
