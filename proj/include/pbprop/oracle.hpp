#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pbprop/check.hpp"
#include "pbprop/random.hpp"

namespace pbprop {

// Brute-force reference implementations. They follow the definitions
// literally and share no search code with the checkers, so that the two
// can be compared on small instances.

// Every bundle of cost at most l, in canonical order.
std::vector<Bundle> enumerate_affordable(const PBInstance &instance,
                                         const Limits &limits = {});

struct OracleOptions {
  BudgetFloor floor = BudgetFloor::Zero;
  LeafRule leaf_rule = LeafRule::Exhaustive;
  std::size_t max_voters = 8;
  std::size_t max_projects = 8;
};

// Verdict by exhaustive search over the definition. EJR and PJR range alpha
// over the utility values that occur for each project (and 0): the
// conditions only compare sums of alpha against fixed utility totals and
// cohesion only bounds alpha from above by attained values, so a violating
// alpha can be raised to such a grid point. Witnesses are best effort;
// only the status is meant for comparison.
AxiomVerdict oracle_axiom(const PBInstance &instance, const Bundle &w,
                          Axiom axiom, const OracleOptions &options = {});

// Feasibility by enumerating candidate points: every unique intersection
// of d hyperplanes taken from the constraint boundaries and the coordinate
// planes x_j = 0, plus a half-integer grid on [-2, 2]^d. If the system is
// feasible its minimal face is an affine set, and pinning coordinates on it
// yields one of these intersections, so the answer is exact. Meant for at
// most three variables.
bool lp_feasible_by_vertices(const LinearSystem &system);

enum class InstanceKind { Approval, Cardinal, UnitCost, Laminar, LaminarUnitCost };

struct GeneratorSpec {
  InstanceKind kind = InstanceKind::Approval;
  std::size_t min_voters = 2, max_voters = 5;
  std::size_t min_projects = 2, max_projects = 5;
  std::uint64_t approval_num = 1, approval_den = 2; // approval density
  long utility_denominator = 4; // cardinal utilities k / denominator
  long cost_denominator = 4;
  long max_cost_units = 8;
  std::size_t max_depth = 3; // laminar kinds
};

PBInstance random_instance(const GeneratorSpec &spec, Rng &rng);

// Seed of trial `trial` under a master seed; trials are independent.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial);

struct Counterexample {
  std::uint64_t trial = 0;
  PBInstance instance;
  Bundle bundle;
  AxiomVerdict refutation; // the violated conclusion
};

// Looks for (instance, W) with `assume` satisfied and `conclude` violated.
// W ranges over every affordable bundle of each sampled instance. Instances
// outside an axiom's domain (e.g. non-laminar for laminar axioms) are
// skipped. The first hit by trial index, then canonical bundle order, is
// returned.
std::optional<Counterexample>
search_counterexample(const GeneratorSpec &spec, Axiom assume, Axiom conclude,
                      std::uint64_t trials, std::uint64_t seed,
                      const CheckOptions &options = {});

} // namespace pbprop
