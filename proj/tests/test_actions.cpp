#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>

#include "warpcone/action.hpp"

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

TEST_CASE("rotations are isometries of the circle net") {
  ActionModel a = cyclic_rotation_action(torus_net(8, 1), 8, {Rat(1, 8)});
  CHECK(a.maps.size() == a.group.gens.size());
  for (double l : a.lip) CHECK(l == 1.0);
  CHECK(a.max_lipschitz() == 1.0);
}

TEST_CASE("exact orbits snap with zero error") {
  ActionModel a = cyclic_rotation_action(torus_net(8, 1), 8, {Rat(1, 8)});
  for (int x = 0; x < a.space->size(); ++x) {
    ApplyResult r = apply_word(a, {0, 0, 1}, x);
    CHECK(r.snap_error == 0.0);
    CHECK(r.index == (x + 1) % 8);
  }
}

TEST_CASE("word application composes letter by letter") {
  ActionModel a = rotation_action(torus_net(16, 1), {Rat(3, 16)});
  Payload p = a.space->points[0];
  Payload q = apply_word_exact(a, {0, 0}, p);
  CHECK(a.space->payload_dist(q, a.space->points[6]) == 0.0);
  ApplyResult r = apply_word(a, {0, 1}, 5);
  CHECK(r.index == 5);  // s then s_inv is the identity
  CHECK(r.snap_error == 0.0);
}

TEST_CASE("shear generator doubles l1 lengths on the square torus") {
  ActionModel a = sl2_action(torus_net(5, 2));
  // generators (T, T_inv, R, R_inv): the shears stretch by 2, the rotation
  // permutes coordinates and is an isometry.
  CHECK(a.lip[0] == 2.0);
  CHECK(a.lip[1] == 2.0);
  CHECK(a.lip[2] == 1.0);
  CHECK(a.lip[3] == 1.0);
  CHECK(a.max_lipschitz() == 2.0);
  // lattice points map to lattice points
  for (int x = 0; x < a.space->size(); ++x) {
    ApplyResult r = apply_word(a, {0}, x);
    CHECK(r.snap_error == 0.0);
  }
}

TEST_CASE("profinite shift preserves the tower metric") {
  NetSpec spec;
  spec.kind = SpaceKind::profinite;
  spec.profinite = ProfiniteSpec::cyclic_tower(2, 3, 0.5);
  auto s = std::make_shared<FiniteSpace>(build_net(spec));
  ActionModel a = profinite_shift_action(s);
  CHECK(a.max_lipschitz() == 1.0);
  ApplyResult r = apply_word(a, {0}, 0);
  CHECK(r.snap_error == 0.0);
  CHECK(r.index == 1);
}

TEST_CASE("quaternion generators act freely on the sphere net") {
  NetSpec spec;
  spec.kind = SpaceKind::sphere3;
  spec.resolution = 32;
  spec.seed = 1;
  spec.certify_samples = 500;
  auto s = std::make_shared<FiniteSpace>(build_net(spec));
  ActionModel a = quaternion_action(s);
  CHECK(a.free_flag);
  CHECK(a.max_lipschitz() == doctest::Approx(1.0));
  // left translations move every point off itself
  for (int x = 0; x < s->size(); ++x) {
    Payload img = apply_gen_exact(a, 0, s->points[x]);
    CHECK(s->payload_dist(img, s->points[x]) > 0.1);
  }
}

TEST_CASE("cone lift fixes the radial coordinate and the apex") {
  auto base = torus_net(8, 1);
  ActionModel inner = cyclic_rotation_action(base, 8, {Rat(1, 8)});
  auto cone = std::make_shared<FiniteSpace>(compact_cone_space(base, {0.5, 1.0}));
  ActionModel lifted = cone_lift_action(inner, cone);
  int apex = cone->size() - 1;
  ApplyResult r = apply_word(lifted, {0}, apex);
  CHECK(r.index == apex);
  CHECK(r.snap_error == 0.0);
  ApplyResult q = apply_word(lifted, {0}, 0);
  CHECK(cone->cone_thetas[q.index] == cone->cone_thetas[0]);
  CHECK(q.index == 1);
}

TEST_CASE("star extension fixes the added point") {
  auto base = torus_net(8, 1);
  ActionModel inner = cyclic_rotation_action(base, 8, {Rat(1, 8)});
  auto ext = std::make_shared<FiniteSpace>(one_point_extension(base, 0.5));
  ActionModel lifted = star_extension_action(inner, ext);
  int star = ext->size() - 1;
  ApplyResult r = apply_word(lifted, {0}, star);
  CHECK(r.index == star);
  CHECK(r.snap_error == 0.0);
  ApplyResult q = apply_word(lifted, {0}, 3);
  CHECK(q.index == 4);
}

TEST_CASE("snap error bound covers the measured error") {
  ActionModel a = rotation_action(torus_net(16, 1), {Rat(1, 3)});
  for (int x = 0; x < a.space->size(); ++x) {
    ApplyResult r = apply_word(a, {0, 0}, x);
    CHECK(r.snap_error <= r.error_bound);
    CHECK(r.snap_error <= a.space->mesh);
  }
}
