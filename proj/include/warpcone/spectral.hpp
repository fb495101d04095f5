#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "warpcone/action.hpp"
#include "warpcone/group.hpp"

namespace warpcone {

// Undirected multigraph; loops allowed and count 2 toward the degree.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  std::vector<int> degrees() const;
  long long nonloop_edge_count() const;
  int components() const;
  std::vector<int> bfs_dist(int src) const;  // -1 when unreachable, loops ignored
};

Graph cycle_graph(int n);
Graph complete_graph(int n);
// Connected random multigraph: a random spanning tree plus extra edges.
Graph random_connected_graph(int n, int extra_edges, unsigned long long seed);

struct SchreierGraph {
  long long modulus = 0;
  std::vector<std::array<long long, 2>> vertices;  // residue pairs
  Graph graph;
  std::vector<std::string> edge_labels;  // aligned with graph.edges
};

// Orbit graph of the generators acting mod n from the given basepoint; one
// edge per (vertex, generator), loops retained.
SchreierGraph schreier_graph(const GroupPresentation& g, long long modulus,
                             std::array<long long, 2> basepoint);

struct SpectralReport {
  long long n_param = 0;
  int vertex_count = 0;
  int components = 1;
  double lambda1_norm = 0.0;
  double lambda1_comb = 0.0;
  double lambda_max_norm = 0.0;
  double cheeger_lower = 0.0;
  double cheeger_upper = 0.0;
};

// Dense symmetric eigensolve up to dense_limit vertices, deflated power
// iteration beyond. Disconnected input reports lambda1 = 0 with the
// component count.
SpectralReport spectral_gap(const Graph& g, int dense_limit = 5000);

struct CheegerResult {
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> exact;  // exhaustive cut scan, small graphs only
};
CheegerResult cheeger_bounds(const Graph& g, int exhaustive_limit = 20);

// Poincare-type lower bound sqrt(lambda1_comb * sum d^2 / (|V| * |E|)) on the
// distortion of any non-contracting embedding into a space of negative type;
// loops excluded from |E|, multiplicity kept.
double distortion_lower_bound(const Graph& g);

// Unweighted level graph of an action: nearest-neighbor base ring plus one
// shortcut edge per (point, generator).
Graph action_level_graph(const ActionModel& a, int ring_k = 2);

}  // namespace warpcone
