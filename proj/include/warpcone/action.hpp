#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "warpcone/group.hpp"
#include "warpcone/rational.hpp"
#include "warpcone/space.hpp"

namespace warpcone {

// A finitely generated group acting on a finite net by exact payload maps.
// maps[i] realizes gens[i]; words are applied first letter first.
struct ActionModel {
  std::string name;
  GroupPresentation group;
  std::shared_ptr<const FiniteSpace> space;
  std::vector<std::function<Payload(const Payload&)>> maps;
  std::vector<double> lip;  // per-generator Lipschitz constants on the net
  bool free_flag = false;

  double max_lipschitz() const;
};

struct ApplyResult {
  int index = -1;         // snapped net point
  double snap_error = 0;  // distance from the exact image to the net point
  double error_bound = 0; // budget sum_i (prod_{j>i} lip_j) * mesh
};

Payload apply_gen_exact(const ActionModel& a, int gen, const Payload& p);
Payload apply_word_exact(const ActionModel& a, const std::vector<int>& word, Payload p);
// Applies the whole word exactly on the payload and snaps once at the end.
ApplyResult apply_word(const ActionModel& a, const std::vector<int>& word, int point);

// Max over net pairs of d(s.x, s.y)/d(x, y), images taken before snapping.
double generator_lipschitz(const ActionModel& a, int gen);
void finalize_lipschitz(ActionModel& a);

ActionModel trivial_action(std::shared_ptr<const FiniteSpace> s);
// Z acting on a torus by translation (one rational shift per axis).
ActionModel rotation_action(std::shared_ptr<const FiniteSpace> s, const std::vector<Rat>& shift);
// Z/mod acting on a torus by translation; shift * mod must be integral per axis.
ActionModel cyclic_rotation_action(std::shared_ptr<const FiniteSpace> s, long long mod,
                                   const std::vector<Rat>& shift);
// Z^2 acting on a torus by two commuting translations.
ActionModel double_rotation_action(std::shared_ptr<const FiniteSpace> s, const std::vector<Rat>& s1,
                                   const std::vector<Rat>& s2);
// SL2(Z) <T, R> acting linearly on the 2-torus.
ActionModel sl2_action(std::shared_ptr<const FiniteSpace> s);
// Free quaternion pair acting on S^3 by left translation.
ActionModel quaternion_action(std::shared_ptr<const FiniteSpace> s);
// Z acting on a profinite tower by +1 in every level.
ActionModel profinite_shift_action(std::shared_ptr<const FiniteSpace> s);
// Same group acting on the compact cone, fixing the radial coordinate.
ActionModel cone_lift_action(const ActionModel& inner, std::shared_ptr<const FiniteSpace> cone);
// Same group acting on the one point extension, fixing the star point.
ActionModel star_extension_action(const ActionModel& inner, std::shared_ptr<const FiniteSpace> ext);

}  // namespace warpcone
