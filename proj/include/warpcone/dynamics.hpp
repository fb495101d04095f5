#pragma once

#include <cstdint>
#include <vector>

#include "warpcone/action.hpp"
#include "warpcone/embed.hpp"
#include "warpcone/group.hpp"

namespace warpcone {

// Truncated negative-type kernel h(gamma, y) = sum_n 2^{-n} k_n(y, gamma y)
// with k_n(x, x') = ||F_n(x) - F_n(x')||^2 from one embedding per level;
// levels are indexed from n = 1, so a single level carries weight 1/2.
struct KernelData {
  std::vector<BallEntry> ball;  // word ball of radius word_radius
  int word_radius = 0;
  std::vector<double> levels;
  std::vector<std::vector<double>> h;   // h[ball idx][net point]
  std::vector<std::vector<int>> im;     // snapped image of the exact gamma y
  double snap_error_max = 0.0;
  double symmetry_defect = 0.0;  // max |h(g,y) - h(g^{-1}, gy)| where both rows exist

  int find(const Element& g) const;  // ball index, -1 when absent
};

KernelData truncated_kernel(const ActionModel& a, const std::vector<double>& levels,
                            const std::vector<EmbeddingTable>& embeddings, int word_radius);

// min over |gamma| = l (and all y) of h, for l = 0..word_radius. Reported as
// a properness surrogate, never asserted.
std::vector<double> properness_profile(const KernelData& k);

struct NdcResult {
  double max_form = 0.0;  // max of sum lam_g lam_g' h(g' g^{-1}, g y)
  int trials = 0;
  int skipped = 0;  // trials needing a product outside the stored ball
};

// Random zero-sum vectors supported on the sub-ball of the given radius; the
// quadratic form is evaluated at every base point.
NdcResult negative_definite_check(const KernelData& k, int support_radius, int trials,
                                  std::uint64_t seed);

// Per net point, a finitely supported probability vector over net points
// with word-metric support radius N(n).
struct PropertyAMaps {
  int support_radius = 0;
  std::vector<std::vector<std::pair<int, double>>> a;
};

// Uniform measure on the orbit window {s^j y : |j| <= half_width} for the
// named generator; the finite-scale stand-in for property-A data.
PropertyAMaps folner_window(const ActionModel& a, int gen, int half_width);
PropertyAMaps point_mass_maps(const ActionModel& a);

struct TransferWitness {
  int y = -1;
  int ball_a = -1;  // ball(m+2) indices of the overlapping centers
  int ball_b = -1;
  int point = -1;   // net point claimed by both delta-balls
};

struct TransferResult {
  int n = 0;       // schedule label
  int m = 0;       // support radius N(n)
  double r = 0.0;
  double delta = 0.0;    // level-metric units
  double epsilon = 0.0;  // min half-separation of exact ball(m+2) images, base units
  double defect = 0.0;   // max over y, s of ||C^y s^{-1} - C^{sy}||_1
  double mass_deficit_max = 0.0;
  double comparison_rhs = 0.0;  // max over y, s of ||A(ry) - A(r s y)||_1
  std::vector<BallEntry> ball;          // ball(m+2)
  std::vector<std::vector<double>> c;   // C^y rows over ball(m+2)
};

// C^y(gamma) = mass of A(ry) inside the delta-ball (level metric) around the
// snapped gamma y, for gamma in B(e, m+2). Refuses when delta reaches the
// injectivity threshold r*epsilon or when two delta-balls overlap; mass lost
// outside every ball is reported as a deficit, never renormalized.
// delta <= 0 selects the default 3 * mesh * r.
TransferResult roe_transfer(const ActionModel& a, double r, const PropertyAMaps& maps, int n_label,
                            double delta = 0.0);

}  // namespace warpcone
