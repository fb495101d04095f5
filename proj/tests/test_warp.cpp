#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "warpcone/warp.hpp"

using namespace warpcone;

namespace {

std::shared_ptr<const FiniteSpace> torus_net(int resolution, int dim) {
  NetSpec s;
  s.kind = SpaceKind::torus;
  s.resolution = resolution;
  s.dim = dim;
  return std::make_shared<FiniteSpace>(build_net(s));
}

}  // namespace

TEST_CASE("shortcuts beat long base moves at large r") {
  ActionModel a = cyclic_rotation_action(torus_net(8, 1), 4, {Rat(1, 4)});
  WarpedLevel lvl = build_warped_level(a, 10.0);
  // one hop replaces a base move of cost 10 * 1/4 = 2.5
  CHECK(lvl.d(0, 2) == 1.0);
  CHECK(lvl.d(0, 4) == 2.0);
  // the nearest neighbour is still cheapest by the base edge
  CHECK(lvl.d(0, 1) == 1.25);
  CHECK(lvl.snap_error_max == 0.0);
}

TEST_CASE("trivial action warps to the scaled base metric") {
  ActionModel a = trivial_action(torus_net(8, 1));
  for (double r : {2.0, 10.0}) {
    WarpedLevel lvl = build_warped_level(a, r);
    for (int i = 0; i < lvl.n; ++i)
      for (int j = 0; j < lvl.n; ++j) CHECK(lvl.d(i, j) == r * a.space->dist(i, j));
  }
}

TEST_CASE("warped matrix is a metric below the scaled base") {
  ActionModel a = sl2_action(torus_net(5, 2));
  WarpedLevel lvl = build_warped_level(a, 10.0);
  const std::size_t n = lvl.n;
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(lvl.d(i, i) == 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(lvl.d(i, j) == lvl.d(j, i));
      CHECK(lvl.d(i, j) <= 10.0 * a.space->dist(i, j));
      if (i != j) CHECK(lvl.d(i, j) > 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        CHECK(lvl.d(i, j) <= lvl.d(i, k) + lvl.d(k, j) + 1e-12);
      }
    }
  }
}

TEST_CASE("mileage oracle agrees with the level matrix bitwise") {
  ActionModel a = cyclic_rotation_action(torus_net(8, 1), 4, {Rat(1, 4)});
  for (double r : {2.0, 10.0}) {
    WarpedLevel lvl = build_warped_level(a, r);
    for (int src = 0; src < 8; ++src) {
      MileageResult mr = mileage_bruteforce_all(a, r, src, 4);
      for (int j = 0; j < 8; ++j) {
        CHECK(mr.dist[static_cast<std::size_t>(j)] ==
              lvl.d(static_cast<std::size_t>(src), static_cast<std::size_t>(j)));
      }
    }
  }
}

TEST_CASE("mileage oracle respects its budget and hop limit") {
  ActionModel a = sl2_action(torus_net(5, 2));
  CHECK_THROWS_AS(mileage_bruteforce_all(a, 10.0, 0, 4, 50), std::runtime_error);
  CHECK_THROWS_AS(mileage_bruteforce_all(a, 10.0, 0, 9), std::invalid_argument);
}

TEST_CASE("more generators can only shorten warped distances") {
  auto s = torus_net(8, 1);
  ActionModel one = rotation_action(s, {Rat(1, 8)});
  ActionModel two = double_rotation_action(s, {Rat(1, 8)}, {Rat(1, 4)});
  WarpedLevel la = build_warped_level(one, 10.0);
  WarpedLevel lb = build_warped_level(two, 10.0);
  for (int i = 0; i < la.n; ++i)
    for (int j = 0; j < la.n; ++j) CHECK(lb.d(i, j) <= la.d(i, j));
}

TEST_CASE("levels grow monotonically in r") {
  ActionModel a = cyclic_rotation_action(torus_net(8, 1), 8, {Rat(1, 8)});
  WarpedLevel small = build_warped_level(a, 2.0);
  WarpedLevel big = build_warped_level(a, 4.0);
  for (int i = 0; i < small.n; ++i)
    for (int j = 0; j < small.n; ++j) CHECK(small.d(i, j) <= big.d(i, j));
}

TEST_CASE("exact orbits are quasi-invariant under the generators") {
  ActionModel a = cyclic_rotation_action(torus_net(8, 1), 8, {Rat(1, 8)});
  WarpedLevel lvl = build_warped_level(a, 10.0);
  for (int i = 0; i < lvl.n; ++i)
    for (int j = 0; j < lvl.n; ++j) {
      int si = lvl.shortcut_to[static_cast<std::size_t>(i)][0];
      int sj = lvl.shortcut_to[static_cast<std::size_t>(j)][0];
      CHECK(std::fabs(lvl.d(si, sj) - lvl.d(i, j)) <= 2.0);
    }
}

TEST_CASE("nearest neighbour rule approximates from above") {
  ActionModel a = cyclic_rotation_action(torus_net(16, 1), 16, {Rat(1, 16)});
  WarpedLevel full = build_warped_level(a, 10.0);
  WarpedLevel knn = build_warped_level(a, 10.0, BaseEdgeRule::knn, 4);
  for (int i = 0; i < full.n; ++i)
    for (int j = 0; j < full.n; ++j) {
      CHECK(knn.d(i, j) >= full.d(i, j));
      CHECK(std::isfinite(knn.d(i, j)));
    }
}

TEST_CASE("product graph distance is symmetric and matches hops") {
  ActionModel a = cyclic_rotation_action(torus_net(8, 1), 8, {Rat(1, 8)});
  Element e = a.group.identity;
  Element s = a.group.gens[0].g;
  D1Result d_es = d1_distance(a, 10.0, e, 3, s, 3, 3);
  CHECK(d_es.dist == 1.0);
  D1Result fwd = d1_distance(a, 10.0, e, 0, s, 5, 3);
  D1Result bwd = d1_distance(a, 10.0, s, 5, e, 0, 3);
  CHECK(fwd.dist == doctest::Approx(bwd.dist));
  // the diagonal embeds 1-Lipschitz against the scaled base metric
  D1Result diag = d1_distance(a, 10.0, e, 0, e, 4, 3);
  CHECK(diag.dist <= 10.0 * a.space->dist(0, 4));
}

TEST_CASE("quotient identity holds exactly on exact orbits") {
  ActionModel rot = cyclic_rotation_action(torus_net(8, 1), 8, {Rat(1, 8)});
  QuotientCheckResult q = quotient_metric_check(rot, 10.0);
  CHECK(q.max_discrepancy == 0.0);
  CHECK(q.snap_error_max == 0.0);

  ActionModel sl2 = sl2_action(torus_net(5, 2));
  QuotientCheckResult q2 = quotient_metric_check(sl2, 10.0);
  CHECK(q2.max_discrepancy == 0.0);
}

TEST_CASE("snapped orbits stay within the announced tolerance") {
  ActionModel a = rotation_action(torus_net(16, 1), {Rat(1, 3)});
  QuotientCheckResult q = quotient_metric_check(a, 4.0);
  CHECK(q.max_discrepancy <= q.tol);
  CHECK(q.snap_error_max > 0.0);
}

TEST_CASE("faithfulness radius grows for a free rotation") {
  auto s = torus_net(128, 1);
  ActionFactory factory = [s](double) { return rotation_action(s, {Rat(2584, 4181)}); };
  std::vector<double> schedule = {4, 8, 16, 32, 64};
  FaithfulnessReport r1 = faithfulness_radius(factory, 1, schedule);
  CHECK(r1.status == FaithStatus::faithful_at);
  CHECK(r1.level == 4.0);
  FaithfulnessReport r2 = faithfulness_radius(factory, 2, schedule);
  CHECK(r2.status == FaithStatus::faithful_at);
  CHECK(r2.level >= r1.level);
  CHECK(r1.epsilon > 0.0);
}

TEST_CASE("fixed points defeat faithfulness with a witness") {
  auto base = torus_net(8, 1);
  ActionModel inner = cyclic_rotation_action(base, 8, {Rat(1, 8)});
  auto ext = std::make_shared<FiniteSpace>(one_point_extension(base, 0.5));
  ActionModel lifted = star_extension_action(inner, ext);
  ActionFactory factory = [lifted](double) { return lifted; };
  FaithfulnessReport rep = faithfulness_radius(factory, 1, {4, 8});
  CHECK(rep.status == FaithStatus::failure);
  CHECK(!rep.witness_word.empty());
  CHECK(rep.witness_point == ext->size() - 1);
}
