#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "warpcone/rational.hpp"

namespace warpcone {

enum class SpaceKind { torus, sphere3, profinite, compact_cone, one_point_ext };

std::string to_string(SpaceKind k);

// Point payloads. Torus coordinates are exact rationals in [0,1); sphere
// points are unit quaternions; profinite points are digit sequences along a
// tower of cyclic quotients; cone points pair a radial/angular coordinate
// with a boxed base payload (null at the apex); StarPoint is the added point
// of a one-point extension.
struct TorusPoint {
  std::vector<Rat> x;
};
struct SpherePoint {
  std::array<double, 4> q;
};
struct ProfinitePoint {
  std::vector<long long> digits;
};
struct ConePoint {
  double theta = 0.0;
  std::shared_ptr<const struct PayloadBox> y;  // null = apex
};
struct StarPoint {};

using Payload = std::variant<TorusPoint, SpherePoint, ProfinitePoint, ConePoint, StarPoint>;

struct PayloadBox {
  Payload p;
};

inline std::shared_ptr<const PayloadBox> box(Payload p) {
  return std::make_shared<const PayloadBox>(PayloadBox{std::move(p)});
}

// Tower of cyclic quotients Z/m_1 <- Z/m_2 <- ... with m_j | m_{j+1};
// decay_weights a_j weight the j-th digit disagreement, geometric with
// ratio lambda by default.
struct ProfiniteSpec {
  std::vector<long long> quotient_sizes;
  int truncation_level = 0;
  std::vector<double> decay_weights;
  double lambda = 0.5;

  // Z with subgroups (base^j)Z, truncated at `level`.
  static ProfiniteSpec cyclic_tower(long long base, int level, double lambda = 0.5);
  void validate() const;
  double weight_at(int j) const;  // a_j, 1-indexed, geometric tail beyond the list
};

struct ConeParams {
  double theta = 1.0;
  double scale = 1.0;
  double diameter = 0.0;
};

struct NetSpec {
  SpaceKind kind = SpaceKind::torus;
  int resolution = 2;
  int dim = 1;  // torus only
  std::optional<ProfiniteSpec> profinite;
  std::uint64_t seed = 0;
  int certify_samples = 20000;  // sphere mesh certification sample count
};

class FiniteSpace {
 public:
  SpaceKind kind = SpaceKind::torus;
  std::vector<Payload> points;
  std::vector<double> weights;
  double mesh = 0.0;
  double metric_scale = 1.0;
  std::shared_ptr<const FiniteSpace> base;  // compact_cone / one_point_ext only
  double star_distance = 0.0;               // one_point_ext only
  std::vector<int> cone_base_index;         // compact_cone only, -1 at apex
  std::vector<double> cone_thetas;          // compact_cone only, 0 at apex
  std::shared_ptr<const ProfiniteSpec> profinite_;  // profinite only

  int size() const { return static_cast<int>(points.size()); }
  double dist(int i, int j) const { return dmat_[static_cast<size_t>(i) * points.size() + j]; }
  double payload_dist(const Payload& a, const Payload& b) const;
  std::pair<int, double> nearest(const Payload& p) const;
  double diameter() const { return diam_; }
  double total_weight() const;

  // Fills the pairwise distance matrix from payload_dist and checks metric
  // axioms (exhaustive triangle scan for small spaces, sampled beyond).
  void finalize();

 private:
  std::vector<double> dmat_;
  double diam_ = 0.0;
};

FiniteSpace build_net(const NetSpec& spec);

// l1 cone distance |t1-t2|*diam + min(t1,t2)*d(y1,y2) between (t1, base y1)
// and (t2, base y2). compact restricts t to [0,1].
double cone_metric(double t1, int y1, double t2, int y2, const FiniteSpace& base, bool compact);

FiniteSpace one_point_extension(std::shared_ptr<const FiniteSpace> base, double star_distance);

// Compact cone over `base`: one slice per theta (ascending, in (0,1]) plus
// the apex. Point order is slice-major with the apex last.
FiniteSpace compact_cone_space(std::shared_ptr<const FiniteSpace> base,
                               const std::vector<double>& thetas);

// Scaled copy: identical payloads, distances multiplied by c. Used when a
// level metric must agree bit-for-bit with a cone slice.
FiniteSpace scaled_space(const FiniteSpace& base, double c);

void space_to_csv(const FiniteSpace& s, std::ostream& out);

}  // namespace warpcone
