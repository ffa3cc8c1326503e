#pragma once

#include "pbprop/axioms.hpp"
#include "pbprop/laminar.hpp"

namespace pbprop {

struct CheckOptions {
  BudgetFloor floor = BudgetFloor::Zero;
  LeafRule leaf_rule = LeafRule::Exhaustive;
  Limits limits;
};

// Runs the checker for `axiom`.
AxiomVerdict check_axiom(const PBInstance &instance, const Bundle &w,
                         Axiom axiom, const CheckOptions &options = {});

// Re-derives a verdict's witness or certificate from the instance alone:
// group sizes, utility comparisons, Farkas multipliers, price systems.
// Laminar-proportionality failures are re-derived by recomputation.
ValidationReport validate_verdict(const PBInstance &instance, const Bundle &w,
                                  const AxiomVerdict &verdict,
                                  LeafRule leaf_rule = LeafRule::Exhaustive);

} // namespace pbprop
