#include "warpcone/warp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace warpcone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::vector<int>> unit_adjacency(const std::vector<std::vector<int>>& shortcut_to,
                                             int n) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int z = 0; z < n; ++z) {
    for (int w : shortcut_to[static_cast<std::size_t>(z)]) {
      adj[static_cast<std::size_t>(z)].push_back(w);
      if (w != z) adj[static_cast<std::size_t>(w)].push_back(z);
    }
  }
  for (auto& v : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return adj;
}

std::vector<std::vector<int>> neighbor_order(const FiniteSpace& s) {
  int n = s.size();
  std::vector<std::vector<int>> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> cand;
    cand.reserve(static_cast<std::size_t>(n) - 1);
    for (int j = 0; j < n; ++j)
      if (j != i) cand.push_back({s.dist(i, j), j});
    std::sort(cand.begin(), cand.end());
    order[static_cast<std::size_t>(i)].reserve(cand.size());
    for (const auto& [d, j] : cand) order[static_cast<std::size_t>(i)].push_back(j);
  }
  return order;
}

std::vector<std::vector<int>> build_shortcut_table(const ActionModel& a, double* err_max,
                                                   std::vector<std::vector<double>>* errs) {
  const FiniteSpace& s = *a.space;
  int n = s.size();
  std::vector<std::vector<int>> sc(static_cast<std::size_t>(n));
  if (errs) errs->assign(static_cast<std::size_t>(n), {});
  for (int z = 0; z < n; ++z) {
    for (std::size_t g = 0; g < a.maps.size(); ++g) {
      Payload img = apply_gen_exact(a, static_cast<int>(g), s.points[static_cast<std::size_t>(z)]);
      auto [idx, err] = s.nearest(img);
      sc[static_cast<std::size_t>(z)].push_back(idx);
      if (errs) (*errs)[static_cast<std::size_t>(z)].push_back(err);
      if (err_max) *err_max = std::max(*err_max, err);
    }
  }
  return sc;
}

bool graph_connected(int n, const std::vector<std::vector<int>>& base_adj,
                     const std::vector<std::vector<int>>& uadj) {
  if (n == 0) return true;
  std::vector<char> vis(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  vis[0] = 1;
  int seen = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    auto visit = [&](int v) {
      if (!vis[static_cast<std::size_t>(v)]) {
        vis[static_cast<std::size_t>(v)] = 1;
        ++seen;
        stack.push_back(v);
      }
    };
    if (!base_adj.empty())
      for (int v : base_adj[static_cast<std::size_t>(u)]) visit(v);
    if (!uadj.empty())
      for (int v : uadj[static_cast<std::size_t>(u)]) visit(v);
  }
  return seen == n;
}

std::vector<std::vector<int>> knn_base_adjacency(const FiniteSpace& s, int k) {
  int n = s.size();
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> cand;
    cand.reserve(static_cast<std::size_t>(n) - 1);
    for (int j = 0; j < n; ++j)
      if (j != i) cand.push_back({s.dist(i, j), j});
    std::sort(cand.begin(), cand.end());
    int take = std::min<int>(k, static_cast<int>(cand.size()));
    for (int t = 0; t < take; ++t)
      adj[static_cast<std::size_t>(i)].push_back(cand[static_cast<std::size_t>(t)].second);
  }
  for (int i = 0; i < n; ++i)
    for (int j : adj[static_cast<std::size_t>(i)]) adj[static_cast<std::size_t>(j)].push_back(i);
  for (auto& v : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return adj;
}

void dijkstra_row(const WarpedLevel& lvl, const FiniteSpace& s,
                  const std::vector<std::vector<int>>& uadj, int src, double* out) {
  int n = lvl.n;
  std::vector<double> dist(static_cast<std::size_t>(n), kInf);
  dist[static_cast<std::size_t>(src)] = 0.0;
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  pq.push({0.0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    auto relax = [&](int v, double w) {
      double nd = du + w;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        pq.push({nd, v});
      }
    };
    if (lvl.rule == BaseEdgeRule::complete) {
      for (int v = 0; v < n; ++v)
        if (v != u) relax(v, lvl.r * s.dist(u, v));
    } else {
      for (int v : lvl.base_adj[static_cast<std::size_t>(u)]) relax(v, lvl.r * s.dist(u, v));
    }
    for (int v : uadj[static_cast<std::size_t>(u)]) relax(v, 1.0);
  }
  std::copy(dist.begin(), dist.end(), out);
}

void parallel_rows(int n, const std::function<void(int)>& row) {
  unsigned hw = std::thread::hardware_concurrency();
  unsigned workers = std::min(8u, std::max(1u, hw));
  if (n < 64 || workers == 1) {
    for (int i = 0; i < n; ++i) row(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w]() {
      for (int i = static_cast<int>(w); i < n; i += static_cast<int>(workers)) row(i);
    });
  }
  for (auto& t : threads) t.join();
}

}  // namespace

WarpedLevel build_warped_level(const ActionModel& a, double r, BaseEdgeRule rule, int knn_k,
                               std::size_t mem_cap_bytes) {
  if (!(r > 0)) throw std::invalid_argument("warp level must be positive");
  const FiniteSpace& s = *a.space;
  int n = s.size();
  std::size_t need = static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * sizeof(double);
  if (need > mem_cap_bytes)
    throw std::runtime_error("distance matrix would need " + std::to_string(need) +
                             " bytes, over the cap of " + std::to_string(mem_cap_bytes));
  WarpedLevel lvl;
  lvl.r = r;
  lvl.space = a.space;
  lvl.rule = rule;
  lvl.n = n;
  lvl.shortcut_to = build_shortcut_table(a, &lvl.snap_error_max, &lvl.shortcut_err);
  auto uadj = unit_adjacency(lvl.shortcut_to, n);
  if (rule == BaseEdgeRule::knn) {
    int k = std::max(1, knn_k);
    lvl.base_adj = knn_base_adjacency(s, k);
    if (!graph_connected(n, lvl.base_adj, {})) {
      std::fprintf(stderr, "warpcone: knn base graph with k=%d is disconnected, using complete base edges\n", k);
      lvl.rule = BaseEdgeRule::complete;
      lvl.base_adj.clear();
      lvl.knn_fallback_used = true;
    } else {
      lvl.knn_k = k;
    }
  }
  lvl.dmat.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), kInf);
  parallel_rows(n, [&](int src) {
    dijkstra_row(lvl, s, uadj, src, lvl.dmat.data() + static_cast<std::size_t>(src) * n);
  });
  return lvl;
}

LevelGraphLite build_level_lite(const ActionModel& a, double r) {
  if (!(r > 0)) throw std::invalid_argument("warp level must be positive");
  LevelGraphLite g;
  g.action = &a;
  g.r = r;
  g.n = a.space->size();
  g.shortcut_to = build_shortcut_table(a, &g.snap_error_max, nullptr);
  g.uadj = unit_adjacency(g.shortcut_to, g.n);
  g.order = neighbor_order(*a.space);
  return g;
}

std::vector<double> warped_row_cutoff(const LevelGraphLite& g, int src, double cutoff) {
  const FiniteSpace& s = *g.action->space;
  std::vector<double> dist(static_cast<std::size_t>(g.n), kInf);
  dist[static_cast<std::size_t>(src)] = 0.0;
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  pq.push({0.0, src});
  bool bounded = std::isfinite(cutoff);
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    if (bounded && du > cutoff) break;
    auto relax = [&](int v, double w) {
      double nd = du + w;
      if (bounded && nd > cutoff) return;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        pq.push({nd, v});
      }
    };
    for (int v : g.order[static_cast<std::size_t>(u)]) {
      double w = g.r * s.dist(u, v);
      if (bounded && du + w > cutoff) break;  // ascending distances
      relax(v, w);
    }
    for (int v : g.uadj[static_cast<std::size_t>(u)]) relax(v, 1.0);
  }
  return dist;
}

namespace {

struct MileageCtx {
  const FiniteSpace* s = nullptr;
  double r = 1.0;
  int max_hops = 0;
  long long budget = 0;
  long long nodes = 0;
  int n = 0;
  std::vector<std::vector<int>> uadj;
  std::vector<double> best;

  double bound() const { return *std::max_element(best.begin(), best.end()); }

  void dfs(int z, int hops, double cost) {
    if (++nodes > budget)
      throw std::runtime_error("mileage search budget exceeded after " + std::to_string(nodes) +
                               " nodes");
    if (hops == max_hops) return;
    for (int w : uadj[static_cast<std::size_t>(z)]) {
      double c2 = cost + 1.0;
      if (c2 >= bound()) continue;
      for (int v = 0; v < n; ++v) {
        double c3 = c2 + r * s->dist(w, v);
        if (c3 < best[static_cast<std::size_t>(v)]) best[static_cast<std::size_t>(v)] = c3;
      }
      for (int v = 0; v < n; ++v) {
        double c3 = c2 + r * s->dist(w, v);
        if (c3 < bound()) dfs(v, hops + 1, c3);
      }
    }
  }
};

}  // namespace

MileageResult mileage_bruteforce_all(const ActionModel& a, double r, int source, int max_hops,
                                     long long node_budget) {
  if (max_hops > 6) throw std::invalid_argument("mileage search is exponential, max_hops must be <= 6");
  const FiniteSpace& s = *a.space;
  int n = s.size();
  MileageCtx ctx;
  ctx.s = &s;
  ctx.r = r;
  ctx.max_hops = max_hops;
  ctx.budget = node_budget;
  ctx.n = n;
  ctx.uadj = unit_adjacency(build_shortcut_table(a, nullptr, nullptr), n);
  ctx.best.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) ctx.best[static_cast<std::size_t>(v)] = r * s.dist(source, v);
  for (int v = 0; v < n; ++v) ctx.dfs(v, 0, r * s.dist(source, v));
  return {ctx.best, ctx.nodes};
}

double mileage_bruteforce(const ActionModel& a, double r, int x, int xp, int max_hops,
                          long long node_budget) {
  return mileage_bruteforce_all(a, r, x, max_hops, node_budget).dist[static_cast<std::size_t>(xp)];
}

ProductGraph build_product_graph(const ActionModel& a, double r, int group_radius, int hop_cap,
                                 std::size_t ball_cap) {
  ProductGraph pg;
  pg.action = &a;
  pg.r = r;
  pg.hop_cap = hop_cap;
  pg.n = a.space->size();
  pg.ball = word_ball(a.group, group_radius, ball_cap);
  for (std::size_t b = 0; b < pg.ball.size(); ++b)
    pg.ball_index[pg.ball[b].g.key()] = static_cast<int>(b);
  const FiniteSpace& s = *a.space;
  pg.images.resize(pg.ball.size());
  pg.snap_idx.resize(pg.ball.size());
  pg.snap_err.resize(pg.ball.size());
  pg.group_step.resize(pg.ball.size());
  for (std::size_t b = 0; b < pg.ball.size(); ++b) {
    pg.images[b].reserve(static_cast<std::size_t>(pg.n));
    for (int z = 0; z < pg.n; ++z) {
      Payload img = apply_word_exact(a, pg.ball[b].word, s.points[static_cast<std::size_t>(z)]);
      auto [idx, err] = s.nearest(img);
      pg.images[b].push_back(std::move(img));
      pg.snap_idx[b].push_back(idx);
      pg.snap_err[b].push_back(err);
    }
    pg.group_step[b].assign(a.group.gens.size(), -1);
    for (std::size_t g = 0; g < a.group.gens.size(); ++g) {
      Key k = a.group.gens[g].g.mul(pg.ball[b].g).key();
      auto it = pg.ball_index.find(k);
      if (it != pg.ball_index.end()) pg.group_step[b][g] = it->second;
    }
  }
  pg.order = neighbor_order(s);
  pg.lip_floor = std::pow(a.max_lipschitz(), group_radius);
  return pg;
}

std::vector<double> product_dijkstra(const ProductGraph& pg, int b0, int z0, double cutoff) {
  const int nstates = pg.states();
  std::vector<double> dist(static_cast<std::size_t>(nstates), kInf);
  int s0 = pg.state(b0, z0, 0);
  dist[static_cast<std::size_t>(s0)] = 0.0;
  using QE = std::pair<double, int>;
  std::priority_queue<QE, std::vector<QE>, std::greater<QE>> pq;
  pq.push({0.0, s0});
  const int hs = pg.hop_cap + 1;
  const FiniteSpace& s = *pg.action->space;
  bool bounded = std::isfinite(cutoff);
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > dist[static_cast<std::size_t>(u)]) continue;
    if (bounded && du > cutoff) break;
    int h = u % hs;
    int bz = u / hs;
    int z = bz % pg.n;
    int b = bz / pg.n;
    auto relax = [&](int v, double w) {
      double nd = du + w;
      if (bounded && nd > cutoff) return;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        pq.push({nd, v});
      }
    };
    if (h < pg.hop_cap) {
      for (std::size_t g = 0; g < pg.group_step[static_cast<std::size_t>(b)].size(); ++g) {
        int b2 = pg.group_step[static_cast<std::size_t>(b)][g];
        if (b2 >= 0) relax(pg.state(b2, z, h + 1), 1.0);
      }
    }
    const auto& img = pg.images[static_cast<std::size_t>(b)];
    for (int z2 : pg.order[static_cast<std::size_t>(z)]) {
      if (bounded && du + pg.r * s.dist(z, z2) / pg.lip_floor > cutoff) break;
      relax(pg.state(b, z2, h),
            pg.r * s.payload_dist(img[static_cast<std::size_t>(z)],
                                  img[static_cast<std::size_t>(z2)]));
    }
  }
  return dist;
}

double product_state_dist(const ProductGraph& pg, const std::vector<double>& dist, int b, int z) {
  double best = kInf;
  for (int h = 0; h <= pg.hop_cap; ++h)
    best = std::min(best, dist[static_cast<std::size_t>(pg.state(b, z, h))]);
  return best;
}

D1Result d1_distance(const ActionModel& a, double r, const Element& g1, int x1, const Element& g2,
                     int x2, int hop_cap) {
  Key k1 = g1.key(), k2 = g2.key();
  {
    auto ball = word_ball(a.group, hop_cap);
    bool f1 = false, f2 = false;
    for (const auto& e : ball) {
      Key k = e.g.key();
      if (k == k1) f1 = true;
      if (k == k2) f2 = true;
    }
    if (!f1 || !f2)
      throw std::invalid_argument("both group elements must lie in the word ball of the cap");
  }
  // intermediates reachable with <= hop_cap shortcuts from ball(hop_cap) stay
  // inside ball(2 * hop_cap)
  ProductGraph pg = build_product_graph(a, r, 2 * hop_cap, hop_cap);
  auto dist = product_dijkstra(pg, pg.ball_index.at(k1), x1);
  return {product_state_dist(pg, dist, pg.ball_index.at(k2), x2), hop_cap};
}

QuotientCheckResult quotient_metric_check(const ActionModel& a, double r, int hop_cap) {
  WarpedLevel lvl = build_warped_level(a, r);
  int n = lvl.n;
  int L = hop_cap;
  if (L <= 0) {
    double dm = 0;
    for (double v : lvl.dmat)
      if (std::isfinite(v)) dm = std::max(dm, v);
    L = std::max(1, static_cast<int>(std::ceil(dm)));
  }
  ProductGraph pg = build_product_graph(a, r, L, L);
  int e_idx = pg.ball_index.at(a.group.identity.key());
  const FiniteSpace& s = *a.space;
  QuotientCheckResult res;
  res.hop_cap = L;
  res.snap_error_max = lvl.snap_error_max;
  res.tol = 2.0 * L * a.max_lipschitz() * s.mesh * r;
  int nb = static_cast<int>(pg.ball.size());
  for (int x = 0; x < n; ++x) {
    auto dist = product_dijkstra(pg, e_idx, x);
    std::vector<double> md(static_cast<std::size_t>(nb) * static_cast<std::size_t>(n), kInf);
    for (int b = 0; b < nb; ++b)
      for (int z = 0; z < n; ++z)
        md[static_cast<std::size_t>(b) * n + z] = product_state_dist(pg, dist, b, z);
    for (int xp = 0; xp < n; ++xp) {
      double rhs = kInf;
      const Payload& target = s.points[static_cast<std::size_t>(xp)];
      for (int b = 0; b < nb; ++b) {
        for (int z = 0; z < n; ++z) {
          double base = md[static_cast<std::size_t>(b) * n + z];
          if (!std::isfinite(base)) continue;
          double cand =
              base + r * s.payload_dist(
                            pg.images[static_cast<std::size_t>(b)][static_cast<std::size_t>(z)],
                            target);
          if (cand < rhs) rhs = cand;
        }
      }
      double diff = std::fabs(lvl.d(x, xp) - rhs);
      if (diff > res.max_discrepancy) {
        res.max_discrepancy = diff;
        res.argmax_x = x;
        res.argmax_xp = xp;
      }
    }
  }
  return res;
}

FaithfulnessReport faithfulness_radius(const ActionFactory& factory, int radius,
                                       const std::vector<double>& schedule) {
  FaithfulnessReport rep;
  rep.radius = radius;
  if (schedule.empty()) throw std::invalid_argument("empty level schedule");
  {
    ActionModel a0 = factory(schedule.front());
    auto ball = word_ball(a0.group, radius);
    const FiniteSpace& s0 = *a0.space;
    double fp_tol = 1e-9 * std::max(1.0, s0.diameter());
    for (const auto& e : ball) {
      if (e.g.is_identity()) continue;
      for (int y = 0; y < s0.size(); ++y) {
        Payload img = apply_word_exact(a0, e.word, s0.points[static_cast<std::size_t>(y)]);
        if (s0.payload_dist(img, s0.points[static_cast<std::size_t>(y)]) <= fp_tol) {
          rep.status = FaithStatus::failure;
          std::ostringstream w;
          for (std::size_t i = 0; i < e.word.size(); ++i) {
            if (i) w << ".";
            w << a0.group.gens[static_cast<std::size_t>(e.word[i])].label;
          }
          rep.witness_word = w.str();
          rep.witness_point = y;
          return rep;
        }
      }
    }
  }
  for (double lvl : schedule) {
    ActionModel a = factory(lvl);
    const FiniteSpace& s = *a.space;
    int n = s.size();
    LevelGraphLite lite = build_level_lite(a, lvl);
    ProductGraph pg = build_product_graph(a, lvl, radius, radius);
    int e_idx = pg.ball_index.at(a.group.identity.key());
    int nb = static_cast<int>(pg.ball.size());
    double tol_iso = 2.0 * radius * std::pow(a.max_lipschitz(), radius) * s.mesh * lvl;
    double down_cutoff = radius + tol_iso + 1.0;
    bool injective = true;
    double defect = 0.0;
    double min_sep = kInf;
    for (int x = 0; x < n && injective; ++x) {
      auto dist = product_dijkstra(pg, e_idx, x, radius + 1.0);
      std::vector<std::pair<int, int>> members;
      for (int b = 0; b < nb; ++b)
        for (int z = 0; z < n; ++z)
          if (product_state_dist(pg, dist, b, z) <= radius + 1e-9) members.push_back({b, z});
      auto down = warped_row_cutoff(lite, x, down_cutoff);
      std::map<int, std::pair<int, int>> image_owner;
      for (const auto& [b, z] : members) {
        int im = pg.snap_idx[static_cast<std::size_t>(b)][static_cast<std::size_t>(z)];
        if (image_owner.count(im)) {
          injective = false;
          break;
        }
        image_owner.emplace(im, std::make_pair(b, z));
        double d1 = product_state_dist(pg, dist, b, z);
        double dw = down[static_cast<std::size_t>(im)];
        defect = std::max(defect, std::isfinite(dw) ? std::fabs(d1 - dw) : down_cutoff);
      }
      for (std::size_t i = 0; i < members.size() && injective; ++i) {
        for (std::size_t j = i + 1; j < members.size(); ++j) {
          const auto& [b1, z1] = members[i];
          const auto& [b2, z2] = members[j];
          double d = s.payload_dist(
              pg.images[static_cast<std::size_t>(b1)][static_cast<std::size_t>(z1)],
              pg.images[static_cast<std::size_t>(b2)][static_cast<std::size_t>(z2)]);
          if (d > 0) min_sep = std::min(min_sep, d);
        }
      }
    }
    FaithLevelRow row;
    row.level = lvl;
    row.injective = injective;
    row.iso_defect = defect;
    row.tol = tol_iso;
    row.pass = injective && defect <= tol_iso;
    rep.rows.push_back(row);
    if (row.pass && rep.status == FaithStatus::undetermined) {
      rep.status = FaithStatus::faithful_at;
      rep.level = lvl;
      rep.epsilon = std::isfinite(min_sep) ? 0.5 * min_sep : 0.0;
    }
  }
  return rep;
}

}  // namespace warpcone
