#include "warpcone/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "warpcone/rng.hpp"

namespace warpcone {

int KernelData::find(const Element& g) const {
  Key k = g.key();
  for (std::size_t i = 0; i < ball.size(); ++i)
    if (ball[i].g.key() == k) return static_cast<int>(i);
  return -1;
}

KernelData truncated_kernel(const ActionModel& a, const std::vector<double>& levels,
                            const std::vector<EmbeddingTable>& embeddings, int word_radius) {
  if (levels.size() != embeddings.size())
    throw std::invalid_argument("one embedding per level required");
  const FiniteSpace& s = *a.space;
  int n = s.size();
  for (const auto& e : embeddings)
    if (e.size() != n) throw std::invalid_argument("embedding/net size mismatch");

  KernelData k;
  k.word_radius = word_radius;
  k.levels = levels;
  k.ball = word_ball(a.group, word_radius);
  std::size_t b = k.ball.size();
  k.im.assign(b, std::vector<int>(static_cast<std::size_t>(n), 0));
  k.h.assign(b, std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (std::size_t gi = 0; gi < b; ++gi) {
    for (int y = 0; y < n; ++y) {
      ApplyResult ap = apply_word(a, k.ball[gi].word, y);
      k.im[gi][static_cast<std::size_t>(y)] = ap.index;
      k.snap_error_max = std::max(k.snap_error_max, ap.snap_error);
      double hv = 0.0;
      double wgt = 0.5;
      for (std::size_t lv = 0; lv < levels.size(); ++lv) {
        double nd = embeddings[lv].norm_diff(y, ap.index);
        hv += wgt * nd * nd;
        wgt *= 0.5;
      }
      k.h[gi][static_cast<std::size_t>(y)] = hv;
    }
  }
  // symmetry h(g, y) = h(g^{-1}, g y) on exact orbits
  std::map<Key, int> index;
  for (std::size_t gi = 0; gi < b; ++gi) index[k.ball[gi].g.key()] = static_cast<int>(gi);
  for (std::size_t gi = 0; gi < b; ++gi) {
    auto it = index.find(k.ball[gi].g.inverse().key());
    if (it == index.end()) continue;
    std::size_t inv = static_cast<std::size_t>(it->second);
    for (int y = 0; y < n; ++y) {
      double d = std::fabs(k.h[gi][static_cast<std::size_t>(y)] -
                           k.h[inv][static_cast<std::size_t>(k.im[gi][static_cast<std::size_t>(y)])]);
      k.symmetry_defect = std::max(k.symmetry_defect, d);
    }
  }
  return k;
}

std::vector<double> properness_profile(const KernelData& k) {
  std::vector<double> prof(static_cast<std::size_t>(k.word_radius) + 1,
                           std::numeric_limits<double>::infinity());
  for (std::size_t gi = 0; gi < k.ball.size(); ++gi) {
    auto& slot = prof[static_cast<std::size_t>(k.ball[gi].length)];
    for (double v : k.h[gi]) slot = std::min(slot, v);
  }
  return prof;
}

NdcResult negative_definite_check(const KernelData& k, int support_radius, int trials,
                                  std::uint64_t seed) {
  std::vector<int> sup;
  for (std::size_t gi = 0; gi < k.ball.size(); ++gi)
    if (k.ball[gi].length <= support_radius) sup.push_back(static_cast<int>(gi));
  int m = static_cast<int>(sup.size());
  if (m < 2) throw std::invalid_argument("support ball too small for zero-sum vectors");

  std::map<Key, int> index;
  for (std::size_t gi = 0; gi < k.ball.size(); ++gi) index[k.ball[gi].g.key()] = static_cast<int>(gi);
  // prod[j][i] = ball index of g_j * g_i^{-1}
  std::vector<std::vector<int>> prod(static_cast<std::size_t>(m),
                                     std::vector<int>(static_cast<std::size_t>(m), -1));
  bool all_present = true;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      Element p = k.ball[static_cast<std::size_t>(sup[static_cast<std::size_t>(j)])].g.mul(
          k.ball[static_cast<std::size_t>(sup[static_cast<std::size_t>(i)])].g.inverse());
      auto it = index.find(p.key());
      if (it == index.end()) {
        all_present = false;
      } else {
        prod[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = it->second;
      }
    }

  int points = static_cast<int>(k.h.empty() ? 0 : k.h[0].size());
  NdcResult res;
  res.trials = trials;
  res.max_form = -std::numeric_limits<double>::infinity();
  Rng rng(seed, 31);
  std::vector<double> lam(static_cast<std::size_t>(m));
  for (int t = 0; t < trials; ++t) {
    double mean = 0.0;
    for (int i = 0; i < m; ++i) {
      lam[static_cast<std::size_t>(i)] = 2.0 * rng.next_double() - 1.0;
      mean += lam[static_cast<std::size_t>(i)];
    }
    mean /= m;
    for (int i = 0; i < m; ++i) lam[static_cast<std::size_t>(i)] -= mean;
    if (!all_present) {
      ++res.skipped;
      continue;
    }
    for (int y = 0; y < points; ++y) {
      double form = 0.0;
      for (int i = 0; i < m; ++i) {
        int gy = k.im[static_cast<std::size_t>(sup[static_cast<std::size_t>(i)])][static_cast<std::size_t>(y)];
        for (int j = 0; j < m; ++j) {
          form += lam[static_cast<std::size_t>(i)] * lam[static_cast<std::size_t>(j)] *
                  k.h[static_cast<std::size_t>(prod[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)])]
                     [static_cast<std::size_t>(gy)];
        }
      }
      res.max_form = std::max(res.max_form, form);
    }
  }
  if (!std::isfinite(res.max_form)) res.max_form = 0.0;
  return res;
}

PropertyAMaps folner_window(const ActionModel& a, int gen, int half_width) {
  const FiniteSpace& s = *a.space;
  int n = s.size();
  int inv = a.group.gens[static_cast<std::size_t>(gen)].inverse_index;
  PropertyAMaps maps;
  maps.support_radius = half_width;
  maps.a.resize(static_cast<std::size_t>(n));
  double mass = 1.0 / (2 * half_width + 1);
  for (int y = 0; y < n; ++y) {
    std::map<int, double> acc;
    for (int j = -half_width; j <= half_width; ++j) {
      std::vector<int> word(static_cast<std::size_t>(std::abs(j)), j >= 0 ? gen : inv);
      ApplyResult ap = apply_word(a, word, y);
      acc[ap.index] += mass;
    }
    maps.a[static_cast<std::size_t>(y)].assign(acc.begin(), acc.end());
  }
  return maps;
}

PropertyAMaps point_mass_maps(const ActionModel& a) {
  PropertyAMaps maps;
  maps.support_radius = 0;
  int n = a.space->size();
  maps.a.resize(static_cast<std::size_t>(n));
  for (int y = 0; y < n; ++y) maps.a[static_cast<std::size_t>(y)] = {{y, 1.0}};
  return maps;
}

TransferResult roe_transfer(const ActionModel& a, double r, const PropertyAMaps& maps, int n_label,
                            double delta) {
  const FiniteSpace& s = *a.space;
  int n = s.size();
  if (static_cast<int>(maps.a.size()) != n) throw std::invalid_argument("maps/net size mismatch");

  TransferResult res;
  res.n = n_label;
  res.m = maps.support_radius;
  res.r = r;
  res.delta = delta > 0.0 ? delta : 3.0 * s.mesh * r;
  res.ball = word_ball(a.group, res.m + 2);
  std::vector<BallEntry> ball3 = word_ball(a.group, res.m + 3);
  std::size_t b2 = res.ball.size();

  // exact images and the injectivity threshold
  std::vector<std::vector<Payload>> exact(b2);
  std::vector<std::vector<int>> centers(b2, std::vector<int>(static_cast<std::size_t>(n), 0));
  for (std::size_t gi = 0; gi < b2; ++gi) {
    exact[gi].reserve(static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) {
      Payload img = apply_word_exact(a, res.ball[gi].word, s.points[static_cast<std::size_t>(y)]);
      centers[gi][static_cast<std::size_t>(y)] = s.nearest(img).first;
      exact[gi].push_back(std::move(img));
    }
  }
  double eps = std::numeric_limits<double>::infinity();
  for (int y = 0; y < n; ++y)
    for (std::size_t gi = 0; gi < b2; ++gi)
      for (std::size_t gj = gi + 1; gj < b2; ++gj)
        eps = std::min(eps, 0.5 * s.payload_dist(exact[gi][static_cast<std::size_t>(y)],
                                                 exact[gj][static_cast<std::size_t>(y)]));
  res.epsilon = eps;
  if (!(res.delta < r * eps)) {
    std::ostringstream msg;
    msg << "delta " << res.delta << " reaches the injectivity threshold r*epsilon = " << r * eps
        << " for radius m+2 = " << res.m + 2;
    throw std::invalid_argument(msg.str());
  }

  // assign each net point to at most one delta-ball; overlap means the
  // injectivity assumption failed at net resolution
  std::vector<std::vector<int>> owner(static_cast<std::size_t>(n),
                                      std::vector<int>(static_cast<std::size_t>(n), -1));
  for (int y = 0; y < n; ++y)
    for (std::size_t gi = 0; gi < b2; ++gi) {
      int c = centers[gi][static_cast<std::size_t>(y)];
      for (int w = 0; w < n; ++w) {
        if (r * s.dist(w, c) > res.delta) continue;
        int& slot = owner[static_cast<std::size_t>(y)][static_cast<std::size_t>(w)];
        if (slot >= 0) {
          TransferWitness wit;
          wit.y = y;
          wit.ball_a = slot;
          wit.ball_b = static_cast<int>(gi);
          wit.point = w;
          std::ostringstream msg;
          msg << "delta-balls overlap: point " << wit.point << " of base point " << wit.y
              << " lies in the balls of ball entries " << wit.ball_a << " and " << wit.ball_b;
          throw std::invalid_argument(msg.str());
        }
        slot = static_cast<int>(gi);
      }
    }

  res.c.assign(static_cast<std::size_t>(n), std::vector<double>(b2, 0.0));
  for (int y = 0; y < n; ++y) {
    double total = 0.0;
    for (const auto& [w, mass] : maps.a[static_cast<std::size_t>(y)]) {
      int g = owner[static_cast<std::size_t>(y)][static_cast<std::size_t>(w)];
      if (g >= 0) {
        res.c[static_cast<std::size_t>(y)][static_cast<std::size_t>(g)] += mass;
        total += mass;
      }
    }
    res.mass_deficit_max = std::max(res.mass_deficit_max, 1.0 - total);
  }

  std::map<Key, int> idx2;
  for (std::size_t gi = 0; gi < b2; ++gi) idx2[res.ball[gi].g.key()] = static_cast<int>(gi);
  auto row_at = [&](int y, const Element& g) -> double {
    auto it = idx2.find(g.key());
    if (it == idx2.end()) return 0.0;
    return res.c[static_cast<std::size_t>(y)][static_cast<std::size_t>(it->second)];
  };

  for (std::size_t si = 0; si < a.group.gens.size(); ++si) {
    const Element& sg = a.group.gens[si].g;
    for (int y = 0; y < n; ++y) {
      ApplyResult sy = apply_word(a, {static_cast<int>(si)}, y);
      double l1 = 0.0;
      for (const auto& entry : ball3) {
        double lhs = row_at(y, entry.g.mul(sg));    // (C^y s^{-1})(gamma) = C^y(gamma s)
        double rhs = row_at(sy.index, entry.g);
        l1 += std::fabs(lhs - rhs);
      }
      res.defect = std::max(res.defect, l1);

      std::map<int, double> diff;
      for (const auto& [w, mass] : maps.a[static_cast<std::size_t>(y)]) diff[w] += mass;
      for (const auto& [w, mass] : maps.a[static_cast<std::size_t>(sy.index)]) diff[w] -= mass;
      double al1 = 0.0;
      for (const auto& [w, v] : diff) al1 += std::fabs(v);
      res.comparison_rhs = std::max(res.comparison_rhs, al1);
    }
  }
  return res;
}

}  // namespace warpcone
