#pragma once

#include <cstddef>

namespace pbprop {

// Caps for every exhaustive search in the library. Exceeding one raises
// LimitExceeded rather than running for an unbounded time.
struct Limits {
  std::size_t max_voters = 16;        // (S,T) searches over 2^n groups
  std::size_t max_projects = 16;      // ... and 2^m bundles
  std::size_t max_pav_projects = 20;  // exhaustive PAV
  std::size_t max_lp_variables = 4096;
  std::size_t max_lp_constraints = 8192;
  std::size_t max_laminar_bundles = 200000;

  // Defaults overridden by PBPROP_MAX_VOTERS, PBPROP_MAX_PROJECTS,
  // PBPROP_MAX_PAV_PROJECTS, PBPROP_MAX_LP_VARIABLES,
  // PBPROP_MAX_LP_CONSTRAINTS and PBPROP_MAX_LAMINAR_BUNDLES.
  static Limits from_environment();
};

} // namespace pbprop
