#pragma once

#include <string>

#include "tamp/core/errors.hpp"

namespace tamp::sched {

enum class ToolType { kThreeFingerGripper, kVacuumGripper };

inline std::string to_string(ToolType t) {
  return t == ToolType::kThreeFingerGripper ? "three-finger-gripper"
                                            : "vacuum-gripper";
}

inline ToolType tool_from_string(const std::string& s) {
  if (s == "three-finger-gripper" || s == "3f-gripper") {
    return ToolType::kThreeFingerGripper;
  }
  if (s == "vacuum-gripper") return ToolType::kVacuumGripper;
  throw ValidationError("unknown tool type: " + s);
}

}  // namespace tamp::sched
