#pragma once

#include <vector>

#include "warpcone/group.hpp"
#include "warpcone/space.hpp"

namespace warpcone {

// Finite model of an L^p(Y, mu) point map: one coordinate vector per point,
// one measure weight per coordinate. Norms are weighted p-sums.
struct EmbeddingTable {
  double p = 2.0;
  std::vector<std::vector<double>> vecs;
  std::vector<double> w;

  int size() const { return static_cast<int>(vecs.size()); }
  int dim() const { return static_cast<int>(w.size()); }
  double norm_diff(int i, int j) const;
};

// f(x) = (d(x,y))_y with the space's weights as mu.
EmbeddingTable kuratowski_embed(const FiniteSpace& s, double p);

// Same construction over an arbitrary metric matrix (row-major n*n), e.g. a
// warped level dmat or a graph metric.
EmbeddingTable kuratowski_embed_matrix(const std::vector<double>& dmat, int n,
                                       const std::vector<double>& weights, double p);

// Digit-indicator embedding over the disjoint union of the tower quotients,
// block j scaled by 2^{-1/p} a_j. The deepest block additionally carries the
// geometric tail factor (1-lambda^p)^{-1/p}; since a consistent tower that
// disagrees at digit j disagrees at every deeper digit, every pair then gets
// norm exactly a_j (1-lambda^p)^{-1/p} where j is the first disagreement.
EmbeddingTable profinite_embed(const ProfiniteSpec& spec, const std::vector<Payload>& points,
                               double p);

struct KoopmanResult {
  EmbeddingTable table;
  // max over group elements gamma, g, g' of
  // | ||iota(gamma g) - iota(gamma g')|| - ||iota(g) - iota(g')|| |.
  double invariance_defect = 0.0;
};

// iota(g)(h) = c(hg): coordinates indexed by (h, base coordinate), weighted
// by haar(h) * base weight with haar = 1/|G|. `elements` must be closed under
// products and aligned with the rows of `base`.
KoopmanResult koopman_translation_embed(const std::vector<Element>& elements,
                                        const EmbeddingTable& base);

std::vector<Element> cyclic_group_elements(long long mod);

// min(|i-j|, n-|i-j|)/n, the left-invariant circle metric on Z/n.
std::vector<double> cyclic_circle_metric(int n);

struct RhoSample {
  double d = 0.0;
  double rho_minus = 0.0;
  double rho_plus = 0.0;
};

struct DistortionReport {
  double expansion_max = 0.0;    // max ||F(x)-F(y)|| / d(x,y) over pairs d > 0
  double contraction_min = 0.0;  // min of the same ratio
  // Absolute bi-Lipschitz distortion max(expansion_max, 1/contraction_min):
  // 1 for isometric tables, max(c, 1/c) for a uniform c-scaling.
  double distortion = 1.0;
  long long zero_pairs = 0;  // distinct-index pairs at distance 0, excluded from ratios
  std::vector<RhoSample> rho_samples;
};

// Exact pair scan of ||F(x)-F(y)|| against the metric, with 32 logarithmic
// distance buckets; rho_minus is regularized to a nondecreasing lower
// envelope (suffix minimum), rho_plus to a prefix maximum.
DistortionReport distortion(const std::vector<double>& dmat, int n, const EmbeddingTable& table);
DistortionReport distortion(const FiniteSpace& s, const EmbeddingTable& table);

}  // namespace warpcone
