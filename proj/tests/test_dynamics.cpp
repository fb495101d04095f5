#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "warpcone/dynamics.hpp"
#include "warpcone/embed.hpp"
#include "warpcone/warp.hpp"

using namespace warpcone;

namespace {

std::shared_ptr<const FiniteSpace> circle_net(int resolution) {
  NetSpec s;
  s.kind = SpaceKind::torus;
  s.resolution = resolution;
  s.dim = 1;
  return std::make_shared<FiniteSpace>(build_net(s));
}

EmbeddingTable level_embedding(const ActionModel& a, double r) {
  WarpedLevel lvl = build_warped_level(a, r);
  return kuratowski_embed_matrix(lvl.dmat, static_cast<int>(lvl.n), a.space->weights, 2.0);
}

}  // namespace

TEST_CASE("kernel vanishes at the identity and is exactly symmetric") {
  ActionModel a = cyclic_rotation_action(circle_net(8), 8, {Rat(1, 8)});
  KernelData k = truncated_kernel(a, {2.0, 10.0},
                                  {level_embedding(a, 2.0), level_embedding(a, 10.0)}, 3);
  for (double v : k.h[0]) CHECK(v == 0.0);
  CHECK(k.symmetry_defect == 0.0);
  CHECK(k.snap_error_max == 0.0);
}

TEST_CASE("single level kernel is half the squared embedding distance") {
  ActionModel a = cyclic_rotation_action(circle_net(8), 8, {Rat(1, 8)});
  EmbeddingTable t = level_embedding(a, 10.0);
  KernelData k = truncated_kernel(a, {10.0}, {t}, 2);
  int gi = k.find(a.group.gens[0].g);
  REQUIRE(gi >= 0);
  for (int y = 0; y < 8; ++y) {
    int im = k.im[static_cast<std::size_t>(gi)][static_cast<std::size_t>(y)];
    double nd = t.norm_diff(y, im);
    CHECK(k.h[static_cast<std::size_t>(gi)][static_cast<std::size_t>(y)] ==
          doctest::Approx(0.5 * nd * nd));
  }
}

TEST_CASE("level weights halve with tower depth") {
  ActionModel a = cyclic_rotation_action(circle_net(8), 8, {Rat(1, 8)});
  EmbeddingTable t = level_embedding(a, 10.0);
  KernelData one = truncated_kernel(a, {10.0}, {t}, 2);
  KernelData two = truncated_kernel(a, {10.0, 10.0}, {t, t}, 2);
  int gi = one.find(a.group.gens[0].g);
  REQUIRE(gi >= 0);
  for (int y = 0; y < 8; ++y) {
    double h1 = one.h[static_cast<std::size_t>(gi)][static_cast<std::size_t>(y)];
    double h2 = two.h[static_cast<std::size_t>(gi)][static_cast<std::size_t>(y)];
    CHECK(h2 == doctest::Approx(1.5 * h1));
  }
}

TEST_CASE("negative type form stays nonpositive on hilbertian kernels") {
  ActionModel a = cyclic_rotation_action(circle_net(8), 8, {Rat(1, 8)});
  // radius 4 covers the whole group, so every product stays inside the ball
  KernelData k = truncated_kernel(a, {2.0, 10.0},
                                  {level_embedding(a, 2.0), level_embedding(a, 10.0)}, 4);
  NdcResult r = negative_definite_check(k, 4, 100, 5);
  CHECK(r.max_form <= 1e-8);
  CHECK(r.skipped == 0);
  CHECK(r.trials == 100);
}

TEST_CASE("properness profile starts at zero") {
  ActionModel a = cyclic_rotation_action(circle_net(8), 8, {Rat(1, 8)});
  KernelData k = truncated_kernel(a, {10.0}, {level_embedding(a, 10.0)}, 3);
  std::vector<double> prof = properness_profile(k);
  REQUIRE(prof.size() == 4);
  CHECK(prof[0] == 0.0);
  for (double v : prof) CHECK(v >= 0.0);
}

TEST_CASE("averaging windows carry unit mass") {
  ActionModel a = rotation_action(circle_net(16), {Rat(1, 16)});
  PropertyAMaps maps = folner_window(a, 0, 3);
  CHECK(maps.support_radius == 3);
  for (const auto& row : maps.a) {
    double total = 0.0;
    for (const auto& [idx, mass] : row) total += mass;
    CHECK(total == doctest::Approx(1.0));
    CHECK(row.size() == 7);
  }
  PropertyAMaps pm = point_mass_maps(a);
  CHECK(pm.support_radius == 0);
  for (int y = 0; y < 16; ++y) {
    REQUIRE(pm.a[static_cast<std::size_t>(y)].size() == 1);
    CHECK(pm.a[static_cast<std::size_t>(y)][0].first == y);
    CHECK(pm.a[static_cast<std::size_t>(y)][0].second == 1.0);
  }
}

TEST_CASE("window transfer defect is exactly the boundary ratio") {
  ActionModel a = rotation_action(circle_net(16), {Rat(1, 16)});
  PropertyAMaps maps = folner_window(a, 0, 3);
  TransferResult res = roe_transfer(a, 16.0, maps, 1, 0.25);
  CHECK(res.defect == 2.0 / 7.0);
  CHECK(res.defect <= res.comparison_rhs + 1e-12);
  CHECK(res.mass_deficit_max <= 1e-12);
  CHECK(res.epsilon == doctest::Approx(1.0 / 32.0));
}

TEST_CASE("point mass transfer of the trivial action has no defect") {
  ActionModel a = trivial_action(circle_net(8));
  PropertyAMaps maps = point_mass_maps(a);
  TransferResult res = roe_transfer(a, 4.0, maps, 1, 0.05);
  CHECK(res.defect == 0.0);
  CHECK(res.mass_deficit_max == 0.0);
}

TEST_CASE("transfer refuses a delta at the injectivity threshold") {
  ActionModel a = rotation_action(circle_net(16), {Rat(1, 16)});
  PropertyAMaps maps = folner_window(a, 0, 3);
  CHECK_THROWS_WITH_AS(roe_transfer(a, 16.0, maps, 1, 0.0),
                       doctest::Contains("injectivity threshold"), std::invalid_argument);
}

TEST_CASE("transfer refuses overlapping balls with a witness") {
  // y + 3 * 43/128 = y + 1/128 snaps back onto y, so the identity ball and
  // the third-power ball share a net point while the exact images stay apart
  ActionModel a = rotation_action(circle_net(16), {Rat(43, 128)});
  PropertyAMaps maps = folner_window(a, 0, 1);
  try {
    roe_transfer(a, 64.0, maps, 1, 0.125);
    FAIL("expected a refusal");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("overlap") != std::string::npos);
  }
}
