#include "warpcone/spectral.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>

#include "warpcone/rng.hpp"

namespace warpcone {

std::vector<int> Graph::degrees() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : edges) {
    if (u == v) {
      deg[static_cast<std::size_t>(u)] += 2;
    } else {
      deg[static_cast<std::size_t>(u)] += 1;
      deg[static_cast<std::size_t>(v)] += 1;
    }
  }
  return deg;
}

long long Graph::nonloop_edge_count() const {
  long long c = 0;
  for (const auto& [u, v] : edges)
    if (u != v) ++c;
  return c;
}

namespace {

std::vector<std::vector<int>> simple_adjacency(const Graph& g) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
  for (const auto& [u, v] : g.edges) {
    if (u == v) continue;
    adj[static_cast<std::size_t>(u)].push_back(v);
    adj[static_cast<std::size_t>(v)].push_back(u);
  }
  return adj;
}

}  // namespace

int Graph::components() const {
  auto adj = simple_adjacency(*this);
  std::vector<char> vis(static_cast<std::size_t>(n), 0);
  int comps = 0;
  for (int s = 0; s < n; ++s) {
    if (vis[static_cast<std::size_t>(s)]) continue;
    ++comps;
    std::vector<int> stack{s};
    vis[static_cast<std::size_t>(s)] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (!vis[static_cast<std::size_t>(v)]) {
          vis[static_cast<std::size_t>(v)] = 1;
          stack.push_back(v);
        }
      }
    }
  }
  return comps;
}

std::vector<int> Graph::bfs_dist(int src) const {
  auto adj = simple_adjacency(*this);
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::queue<int> q;
  dist[static_cast<std::size_t>(src)] = 0;
  q.push(src);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

Graph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least 3 vertices");
  Graph g;
  g.n = n;
  for (int i = 0; i < n; ++i) g.edges.push_back({i, (i + 1) % n});
  return g;
}

Graph complete_graph(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs at least 2 vertices");
  Graph g;
  g.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.edges.push_back({i, j});
  return g;
}

Graph random_connected_graph(int n, int extra_edges, unsigned long long seed) {
  if (n < 2) throw std::invalid_argument("need at least 2 vertices");
  Graph g;
  g.n = n;
  Rng rng(seed, 17);
  for (int v = 1; v < n; ++v) {
    int u = static_cast<int>(rng.next_below(static_cast<unsigned long long>(v)));
    g.edges.push_back({u, v});
  }
  for (int e = 0; e < extra_edges; ++e) {
    int u = static_cast<int>(rng.next_below(static_cast<unsigned long long>(n)));
    int v = static_cast<int>(rng.next_below(static_cast<unsigned long long>(n)));
    g.edges.push_back({std::min(u, v), std::max(u, v)});
  }
  return g;
}

SchreierGraph schreier_graph(const GroupPresentation& g, long long modulus,
                             std::array<long long, 2> basepoint) {
  if (modulus < 2) throw std::invalid_argument("modulus must be >= 2");
  auto norm = [modulus](long long x) {
    long long r = x % modulus;
    return r < 0 ? r + modulus : r;
  };
  basepoint = {norm(basepoint[0]), norm(basepoint[1])};
  if (basepoint[0] == 0 && basepoint[1] == 0)
    throw std::invalid_argument("basepoint must be nonzero");
  std::vector<Mat2El> mats;
  for (const auto& gen : g.gens) {
    const auto* m = std::get_if<Mat2El>(&gen.g.data);
    if (!m) throw std::invalid_argument("schreier_graph needs matrix generators");
    mats.push_back(*m);
  }
  auto apply = [&](const Mat2El& m, std::array<long long, 2> v) -> std::array<long long, 2> {
    return {norm(m.a * v[0] + m.b * v[1]), norm(m.c * v[0] + m.d * v[1])};
  };
  SchreierGraph sg;
  sg.modulus = modulus;
  std::map<std::array<long long, 2>, int> index;
  index[basepoint] = 0;
  sg.vertices.push_back(basepoint);
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (const auto& m : mats) {
      auto img = apply(m, sg.vertices[static_cast<std::size_t>(u)]);
      if (!index.count(img)) {
        index[img] = static_cast<int>(sg.vertices.size());
        sg.vertices.push_back(img);
        q.push(index[img]);
      }
    }
  }
  sg.graph.n = static_cast<int>(sg.vertices.size());
  for (int u = 0; u < sg.graph.n; ++u) {
    for (std::size_t gi = 0; gi < mats.size(); ++gi) {
      auto img = apply(mats[gi], sg.vertices[static_cast<std::size_t>(u)]);
      sg.graph.edges.push_back({u, index.at(img)});
      sg.edge_labels.push_back(g.gens[gi].label);
    }
  }
  return sg;
}

namespace {

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n, g.n);
  for (const auto& [u, v] : g.edges) {
    if (u == v) {
      a(u, u) += 2.0;
    } else {
      a(u, v) += 1.0;
      a(v, u) += 1.0;
    }
  }
  return a;
}

struct DensePair {
  double lambda1 = 0.0;
  double lambda_max = 0.0;
};

DensePair dense_low_eigs(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return {ev(1), ev(m.rows() - 1)};
}

// Deflated power iteration: top eigenpair of shift*I - M after projecting out
// the known kernel direction v0.
double deflated_second_smallest(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& mul,
                                const Eigen::VectorXd& v0, double shift, int n,
                                unsigned long long seed) {
  Rng rng(seed, 23);
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = 2.0 * rng.next_double() - 1.0;
  x -= v0 * v0.dot(x);
  x.normalize();
  double prev = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Eigen::VectorXd y = shift * x - mul(x);
    y -= v0 * v0.dot(y);
    double norm = y.norm();
    if (norm < 1e-300) return shift;  // eigenvalue equals the shift
    y /= norm;
    double ray = y.dot(shift * y - mul(y));
    if (it > 4 && std::fabs(ray - prev) < 1e-12 * std::max(1.0, std::fabs(ray))) {
      prev = ray;
      break;
    }
    prev = ray;
    x = y;
  }
  return shift - prev;
}

}  // namespace

SpectralReport spectral_gap(const Graph& g, int dense_limit) {
  if (g.n < 1) throw std::invalid_argument("empty graph");
  SpectralReport rep;
  rep.vertex_count = g.n;
  rep.components = g.components();
  auto deg = g.degrees();
  if (g.n == 1) {
    rep.lambda1_norm = 0.0;
    rep.lambda1_comb = 0.0;
    return rep;
  }
  Eigen::MatrixXd a = adjacency_matrix(g);
  Eigen::VectorXd d(g.n);
  for (int i = 0; i < g.n; ++i) d(i) = deg[static_cast<std::size_t>(i)];
  Eigen::MatrixXd lcomb = -a;
  for (int i = 0; i < g.n; ++i) lcomb(i, i) += d(i);
  Eigen::VectorXd dis(g.n);
  for (int i = 0; i < g.n; ++i) dis(i) = d(i) > 0 ? 1.0 / std::sqrt(d(i)) : 0.0;
  Eigen::MatrixXd lnorm = dis.asDiagonal() * lcomb * dis.asDiagonal();
  if (g.n <= dense_limit) {
    DensePair c = dense_low_eigs(lcomb);
    DensePair nrm = dense_low_eigs(lnorm);
    rep.lambda1_comb = c.lambda1;
    rep.lambda1_norm = nrm.lambda1;
    rep.lambda_max_norm = nrm.lambda_max;
  } else {
    double dmax = d.maxCoeff();
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.n).normalized();
    rep.lambda1_comb = deflated_second_smallest(
        [&](const Eigen::VectorXd& x) { return lcomb * x; }, ones, 2.0 * dmax + 1.0, g.n, 7);
    Eigen::VectorXd v0(g.n);
    for (int i = 0; i < g.n; ++i) v0(i) = std::sqrt(std::max(0.0, d(i)));
    v0.normalize();
    rep.lambda1_norm = deflated_second_smallest(
        [&](const Eigen::VectorXd& x) { return lnorm * x; }, v0, 2.0, g.n, 11);
    rep.lambda_max_norm = 2.0;
  }
  if (rep.components > 1) {
    rep.lambda1_comb = 0.0;
    rep.lambda1_norm = 0.0;
  }
  rep.cheeger_lower = rep.lambda1_norm / 2.0;
  rep.cheeger_upper = std::sqrt(2.0 * rep.lambda1_norm);
  return rep;
}

CheegerResult cheeger_bounds(const Graph& g, int exhaustive_limit) {
  SpectralReport rep = spectral_gap(g);
  CheegerResult res;
  res.lower = rep.cheeger_lower;
  res.upper = rep.cheeger_upper;
  if (g.n >= 2 && g.n <= exhaustive_limit) {
    auto deg = g.degrees();
    long long vol_total = 0;
    for (int x : deg) vol_total += x;
    double best = std::numeric_limits<double>::infinity();
    unsigned long long full = 1ull << g.n;
    for (unsigned long long mask = 1; mask + 1 < full; ++mask) {
      long long vol = 0;
      for (int v = 0; v < g.n; ++v)
        if (mask >> v & 1) vol += deg[static_cast<std::size_t>(v)];
      long long volc = vol_total - vol;
      if (vol == 0 || volc == 0) continue;
      long long cut = 0;
      for (const auto& [u, v] : g.edges) {
        if (u == v) continue;
        if (((mask >> u) & 1) != ((mask >> v) & 1)) ++cut;
      }
      double phi = static_cast<double>(cut) / static_cast<double>(std::min(vol, volc));
      best = std::min(best, phi);
    }
    if (std::isfinite(best)) res.exact = best;
  }
  return res;
}

double distortion_lower_bound(const Graph& g) {
  SpectralReport rep = spectral_gap(g);
  if (rep.components != 1) throw std::invalid_argument("graph must be connected");
  long long m = g.nonloop_edge_count();
  if (m == 0) throw std::invalid_argument("graph has no non-loop edges");
  double sumd2 = 0.0;
  for (int u = 0; u < g.n; ++u) {
    auto dist = g.bfs_dist(u);
    for (int v = u + 1; v < g.n; ++v) {
      double dd = dist[static_cast<std::size_t>(v)];
      sumd2 += dd * dd;
    }
  }
  return std::sqrt(rep.lambda1_comb * sumd2 /
                   (static_cast<double>(g.n) * static_cast<double>(m)));
}

Graph action_level_graph(const ActionModel& a, int ring_k) {
  const FiniteSpace& s = *a.space;
  int n = s.size();
  Graph g;
  g.n = n;
  // base ring: k nearest neighbors, symmetrized, one edge per unordered pair
  std::vector<std::vector<char>> mark(static_cast<std::size_t>(n),
                                      std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    std::vector<std::pair<double, int>> cand;
    for (int j = 0; j < n; ++j)
      if (j != i) cand.push_back({s.dist(i, j), j});
    std::sort(cand.begin(), cand.end());
    for (int t = 0; t < ring_k && t < static_cast<int>(cand.size()); ++t) {
      int j = cand[static_cast<std::size_t>(t)].second;
      mark[static_cast<std::size_t>(std::min(i, j))][static_cast<std::size_t>(std::max(i, j))] = 1;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (mark[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) g.edges.push_back({i, j});
  for (int z = 0; z < n; ++z) {
    for (std::size_t gi = 0; gi < a.maps.size(); ++gi) {
      Payload img = apply_gen_exact(a, static_cast<int>(gi), s.points[static_cast<std::size_t>(z)]);
      int w = s.nearest(img).first;
      g.edges.push_back({z, w});
    }
  }
  return g;
}

}  // namespace warpcone
