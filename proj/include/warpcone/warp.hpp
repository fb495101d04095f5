#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "warpcone/action.hpp"

namespace warpcone {

enum class BaseEdgeRule { complete, knn };

// Finite model of one warped level: net points, base edges weighted r*d,
// unit shortcut edges x -- snap(s.x), all-pairs shortest paths.
struct WarpedLevel {
  double r = 1.0;
  std::shared_ptr<const FiniteSpace> space;
  BaseEdgeRule rule = BaseEdgeRule::complete;
  int knn_k = 0;
  bool knn_fallback_used = false;
  std::vector<std::vector<int>> shortcut_to;      // [point][gen]
  std::vector<std::vector<double>> shortcut_err;  // snap error per shortcut
  double snap_error_max = 0.0;
  std::vector<std::vector<int>> base_adj;  // knn rule only
  int n = 0;
  std::vector<double> dmat;

  double d(int i, int j) const { return dmat[static_cast<std::size_t>(i) * n + j]; }
};

WarpedLevel build_warped_level(const ActionModel& a, double r,
                               BaseEdgeRule rule = BaseEdgeRule::complete, int knn_k = 0,
                               std::size_t mem_cap_bytes = 512u << 20);

// Lightweight per-level graph for single rows: shortcut tables plus, for each
// point, the other points sorted by base distance so a cutoff search can stop
// relaxing early.
struct LevelGraphLite {
  const ActionModel* action = nullptr;
  double r = 1.0;
  int n = 0;
  std::vector<std::vector<int>> shortcut_to;
  std::vector<std::vector<int>> uadj;   // undirected unit edges
  std::vector<std::vector<int>> order;  // per point, neighbors by ascending d
  double snap_error_max = 0.0;
};
LevelGraphLite build_level_lite(const ActionModel& a, double r);
// Single-source warped distances; entries beyond cutoff stay infinite.
std::vector<double> warped_row_cutoff(const LevelGraphLite& g, int src,
                                      double cutoff = std::numeric_limits<double>::infinity());

// Brute-force mileage oracle: depth-first enumeration over sequences of free
// moves and shortcut hops, shortcut edges traversed either way. Exact on the
// same path space as the graph metric when max_hops covers the optimum.
struct MileageResult {
  std::vector<double> dist;
  long long nodes = 0;
};
MileageResult mileage_bruteforce_all(const ActionModel& a, double r, int source, int max_hops,
                                     long long node_budget = 50000000);
double mileage_bruteforce(const ActionModel& a, double r, int x, int xp, int max_hops,
                          long long node_budget = 50000000);

// Product graph on (word ball) x (net points) with hop-counted states:
// shortcut edges (g,z)--(sg,z) cost 1, free edges (g,z)--(g,z') cost
// r * d(g.z, g.z') evaluated on exact orbit payloads.
struct ProductGraph {
  const ActionModel* action = nullptr;
  double r = 1.0;
  int hop_cap = 0;
  std::vector<BallEntry> ball;
  std::map<Key, int> ball_index;
  std::vector<std::vector<Payload>> images;    // [ball][point] exact payload
  std::vector<std::vector<int>> snap_idx;      // snapped image
  std::vector<std::vector<double>> snap_err;
  std::vector<std::vector<int>> group_step;    // [ball][gen] -> ball index or -1
  std::vector<std::vector<int>> order;         // base-space neighbor order
  double lip_floor = 1.0;  // free move cost >= r * d(z,z') / lip_floor
  int n = 0;

  int states() const { return static_cast<int>(ball.size()) * n * (hop_cap + 1); }
  int state(int b, int z, int h) const { return (b * n + z) * (hop_cap + 1) + h; }
};

ProductGraph build_product_graph(const ActionModel& a, double r, int group_radius, int hop_cap,
                                 std::size_t ball_cap = 200000);

// Single-source distances over product states; entries beyond `cutoff` stay
// infinite when a finite cutoff is given.
std::vector<double> product_dijkstra(const ProductGraph& pg, int b0, int z0,
                                     double cutoff = std::numeric_limits<double>::infinity());

// min over hop layers of the distance to (b, z); infinity if unreached.
double product_state_dist(const ProductGraph& pg, const std::vector<double>& dist, int b, int z);

struct D1Result {
  double dist = std::numeric_limits<double>::infinity();
  int hop_cap = 0;
};
D1Result d1_distance(const ActionModel& a, double r, const Element& g1, int x1, const Element& g2,
                     int x2, int hop_cap);

// Compares warped shortest paths with the orbit identity
// d_warp(x,x') = min_g d1((e,x),(g, g^-1 x')), the right side completed by an
// exact final free move. hop_cap 0 picks ceil(max warped distance).
struct QuotientCheckResult {
  double max_discrepancy = 0.0;
  double tol = 0.0;
  int argmax_x = -1, argmax_xp = -1;
  int hop_cap = 0;
  double snap_error_max = 0.0;
};
QuotientCheckResult quotient_metric_check(const ActionModel& a, double r, int hop_cap = 0);

enum class FaithStatus { faithful_at, failure, undetermined };

struct FaithLevelRow {
  double level = 0.0;
  bool injective = false;
  double iso_defect = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct FaithfulnessReport {
  int radius = 0;  // word ball radius N
  FaithStatus status = FaithStatus::undetermined;
  double level = 0.0;      // first passing level when faithful_at
  double epsilon = 0.0;    // half of the min pairwise image separation
  std::string witness_word;
  int witness_point = -1;
  std::vector<FaithLevelRow> rows;
};

using ActionFactory = std::function<ActionModel(double level)>;

// Dichotomy scan: exact fixed point in the ball -> failure with witness;
// otherwise find the first level where (g,z) -> snap(g.z) is injective and
// radially isometric on every d1 N-ball centred at (e,x).
FaithfulnessReport faithfulness_radius(const ActionFactory& factory, int radius,
                                       const std::vector<double>& schedule);

}  // namespace warpcone
