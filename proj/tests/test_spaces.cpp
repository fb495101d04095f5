#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "warpcone/space.hpp"

using namespace warpcone;

namespace {

NetSpec torus_spec(int resolution, int dim) {
  NetSpec s;
  s.kind = SpaceKind::torus;
  s.resolution = resolution;
  s.dim = dim;
  return s;
}

}  // namespace

TEST_CASE("circle net distances and mesh") {
  FiniteSpace s = build_net(torus_spec(8, 1));
  CHECK(s.size() == 8);
  CHECK(s.dist(0, 1) == 0.125);
  CHECK(s.dist(0, 4) == 0.5);
  CHECK(s.dist(0, 7) == 0.125);
  CHECK(s.diameter() == 0.5);
  CHECK(s.mesh == doctest::Approx(1.0 / 16.0));
  CHECK(s.total_weight() == doctest::Approx(1.0));
  for (int i = 0; i < s.size(); ++i)
    for (int j = 0; j < s.size(); ++j) CHECK(s.dist(i, j) == s.dist(j, i));
}

TEST_CASE("square torus uses the l1 metric") {
  FiniteSpace s = build_net(torus_spec(5, 2));
  CHECK(s.size() == 25);
  // index = x0 + 5 * x1 with coordinates k/5
  CHECK(s.dist(0, 2 + 2 * 5) == doctest::Approx(0.8));
  CHECK(s.dist(0, 1) == doctest::Approx(0.2));
  CHECK(s.dist(0, 5) == doctest::Approx(0.2));
  CHECK(s.diameter() == doctest::Approx(0.8));
  CHECK(s.mesh == doctest::Approx(0.2));
}

TEST_CASE("nearest snaps to the closest net point") {
  FiniteSpace s = build_net(torus_spec(8, 1));
  Payload p = TorusPoint{{Rat(3, 16)}};
  auto [idx, err] = s.nearest(p);
  CHECK((idx == 1 || idx == 2));
  CHECK(err == doctest::Approx(1.0 / 16.0));
  auto [idx2, err2] = s.nearest(Payload{TorusPoint{{Rat(1, 4)}}});
  CHECK(idx2 == 2);
  CHECK(err2 == 0.0);
}

TEST_CASE("profinite tower metric steps by tower level") {
  NetSpec spec;
  spec.kind = SpaceKind::profinite;
  spec.profinite = ProfiniteSpec::cyclic_tower(2, 3, 0.5);
  FiniteSpace s = build_net(spec);
  CHECK(s.size() == 8);
  // towers of v differ first at the deepest level where v differs mod 2^j
  CHECK(s.dist(0, 1) == 0.5);
  CHECK(s.dist(0, 2) == 0.25);
  CHECK(s.dist(0, 4) == 0.125);
  CHECK(s.dist(2, 6) == 0.125);
  CHECK(s.mesh == doctest::Approx(0.0625));
  CHECK(s.diameter() == 0.5);
}

TEST_CASE("profinite towers validate divisibility and decay") {
  ProfiniteSpec bad;
  bad.truncation_level = 2;
  bad.quotient_sizes = {2, 3};  // 2 does not divide 3
  bad.decay_weights = {0.5, 0.25};
  bad.lambda = 0.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  ProfiniteSpec slow = ProfiniteSpec::cyclic_tower(2, 2, 0.5);
  slow.decay_weights[1] = 0.4;  // decays slower than lambda
  CHECK_THROWS_AS(slow.validate(), std::invalid_argument);
}

TEST_CASE("sphere net certifies a positive mesh") {
  NetSpec spec;
  spec.kind = SpaceKind::sphere3;
  spec.resolution = 64;
  spec.seed = 1;
  spec.certify_samples = 2000;
  FiniteSpace s = build_net(spec);
  CHECK(s.size() == 64);
  CHECK(s.mesh > 0.0);
  CHECK(s.diameter() <= 3.15);
  CHECK(s.dist(0, 1) > 0.0);
}

TEST_CASE("one point extension keeps the base and adds a far star") {
  auto base = std::make_shared<FiniteSpace>(build_net(torus_spec(8, 1)));
  FiniteSpace ext = one_point_extension(base, 0.5);
  CHECK(ext.size() == 9);
  CHECK(ext.dist(0, 8) == 0.5);
  CHECK(ext.dist(3, 8) == 0.5);
  CHECK(ext.dist(0, 4) == base->dist(0, 4));
  CHECK(ext.weights[8] == 0.0);
  CHECK_THROWS_AS(one_point_extension(base, 0.1), std::invalid_argument);
}

TEST_CASE("compact cone slices scale the base metric") {
  auto base = std::make_shared<FiniteSpace>(build_net(torus_spec(8, 1)));
  FiniteSpace cone = compact_cone_space(base, {0.25, 0.5, 1.0});
  CHECK(cone.size() == 25);
  CHECK(cone.cone_base_index[24] == -1);
  // same slice: theta * base distance
  CHECK(cone.dist(0, 4) == doctest::Approx(0.25 * base->dist(0, 4)));
  CHECK(cone.dist(8, 12) == doctest::Approx(0.5 * base->dist(0, 4)));
  // same base point across slices: radial gap times the diameter
  CHECK(cone.dist(0, 8) == doctest::Approx(0.25 * base->diameter()));
  // apex sits at radial distance theta * diameter
  CHECK(cone.dist(16, 24) == doctest::Approx(1.0 * base->diameter()));
  CHECK_THROWS_AS(compact_cone_space(base, {0.5, 0.25}), std::invalid_argument);
  CHECK_THROWS_AS(compact_cone_space(base, {0.0, 0.5}), std::invalid_argument);
}

TEST_CASE("scaled space multiplies distances and mesh") {
  FiniteSpace s = build_net(torus_spec(8, 1));
  FiniteSpace t = scaled_space(s, 3.0);
  CHECK(t.dist(0, 1) == doctest::Approx(3.0 * s.dist(0, 1)));
  CHECK(t.mesh == doctest::Approx(3.0 * s.mesh));
  CHECK(t.diameter() == doctest::Approx(3.0 * s.diameter()));
  CHECK_THROWS_AS(scaled_space(s, 0.0), std::invalid_argument);
}

TEST_CASE("degenerate nets are rejected") {
  NetSpec tiny = torus_spec(1, 1);
  CHECK_THROWS_AS(build_net(tiny), std::invalid_argument);
  NetSpec big = torus_spec(100, 3);
  CHECK_THROWS_AS(build_net(big), std::invalid_argument);
}
