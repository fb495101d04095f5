#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "warpcone/action.hpp"
#include "warpcone/config.hpp"

namespace warpcone {

inline constexpr const char* kArtifactVersion = "1.0.0";

// Experiment kinds accepted by run_scenario, in CLI order.
const std::vector<std::string>& experiment_kinds();

struct RunOptions {
  std::string out_dir = ".";
  std::optional<long long> seed;  // overrides [params] seed
  std::optional<long long> cap;   // overrides [params] cap
};

struct RunOutcome {
  int exit_code = 0;  // 0 pass, 1 assertion failure, 2 usage/config error
  std::vector<std::string> failures;
  std::vector<std::string> outputs;  // files written (relative to out_dir)
};

// The [space]/[action] pair of a scenario; `action` is the cone or star lift
// when [space] wrap is set, with `inner` the unwrapped action.
struct BuiltAction {
  std::shared_ptr<const FiniteSpace> inner_space;
  std::shared_ptr<const FiniteSpace> space;
  ActionModel inner;
  ActionModel action;
  std::string wrap;  // none | cone | ext
};

BuiltAction make_built_action(const Config& cfg);

RunOutcome run_scenario(const Config& cfg, const std::string& experiment, const RunOptions& opt);

}  // namespace warpcone
