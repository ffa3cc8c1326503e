#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pbprop/axioms.hpp"
#include "pbprop/instance.hpp"
#include "pbprop/limits.hpp"

namespace pbprop {

// Certification tree of a laminar approval instance. Every node carries
// its slice: the voters, the projects they still approve (C(P)) and the
// slice budget.
struct LaminarNode {
  enum class Kind { UnanimousLeaf, UnanimousProject, Split };

  Kind kind = Kind::UnanimousLeaf;
  std::vector<Index> voters;
  std::vector<Index> projects;
  Rational budget;
  Index project = 0;                 // the removed project, UnanimousProject
  std::vector<LaminarNode> children; // 1 for UnanimousProject, 2 for Split
};

struct LaminarRecognition {
  std::optional<LaminarNode> root;
  std::string reason; // why recognition failed

  [[nodiscard]] bool laminar() const { return root.has_value(); }
};

// Leaves are tried first, then a unanimously approved project, then a
// split along connected components of the approval graph (first component
// against the rest, budgets proportional to voter counts). The tree is
// unique up to the order in which unanimous projects are peeled off;
// canonical order is used. Throws PreconditionError on cardinal input.
LaminarRecognition recognize_laminar(const PBInstance &instance);

// Throws NotLaminarError with the recognition failure.
LaminarNode require_laminar(const PBInstance &instance);

// Re-checks every node invariant against the instance.
ValidationReport validate_decomposition(const PBInstance &instance,
                                        const LaminarNode &root);

// How a bundle may meet a unanimous leaf. Exhaustive asks for a subset of
// the leaf's projects within the leaf budget to which no further leaf
// project fits; AnySubset drops the last requirement; MaxCardinality asks
// for as many leaf projects as the leaf budget can buy.
enum class LeafRule { Exhaustive, AnySubset, MaxCardinality };

// Empty string when w is certified by the tree, else the first failure.
std::string certify_laminar(const PBInstance &instance, const LaminarNode &root,
                            const Bundle &w,
                            LeafRule rule = LeafRule::Exhaustive);

AxiomVerdict is_laminar_proportional(const PBInstance &instance,
                                     const Bundle &w,
                                     LeafRule rule = LeafRule::Exhaustive);

// All certified bundles in canonical order.
std::vector<Bundle> laminar_bundles(const PBInstance &instance,
                                    LeafRule rule = LeafRule::Exhaustive,
                                    const Limits &limits = {});

// Every c in pool has some t in T with cost(t) >= cost(c).
bool is_u_affordable(const PBInstance &instance, const Bundle &t,
                     const std::vector<Index> &pool);

// Projects removed at unanimous-project nodes whose voter slice meets the
// group.
std::vector<Index> unanimity_pool(const LaminarNode &root,
                                  const std::vector<Index> &group);

// Core in which a pair (S, T) only blocks when T is u-affordable for the
// unanimity pool of S.
AxiomVerdict check_core_u_afford(const PBInstance &instance, const Bundle &w,
                                 const Limits &limits = {});

// Initial budget of a tree-built price system: the bundle's cost, or the
// instance budget.
enum class Endowment { BundleCost, Budget };

// Payments follow the tree: a unanimous project is shared equally by its
// slice, leaf projects equally by the leaf's voters. Throws
// PreconditionError when the tree does not certify w.
PriceSystem constructive_price_system(const PBInstance &instance,
                                      const LaminarNode &root, const Bundle &w,
                                      Endowment endowment);

struct LaminarParams {
  std::size_t voters = 3;
  std::size_t max_depth = 3;
  std::size_t max_leaf_projects = 3;
  std::size_t max_projects = 12; // redraw until the instance fits
  bool unit_cost = false;        // costs 1 and an integral budget
  long committee_size = 4;       // budget in unit-cost mode
  long cost_denominator = 4;     // costs are k / cost_denominator ...
  long max_cost_units = 8;       // ... with 1 <= k <= max_cost_units
  std::uint64_t unanimous_weight = 1; // node odds leaf : unanimous : split = 1 : w : 2
};

// Random laminar instance built top-down from a random certification
// tree. Throws InputError on unsatisfiable parameters.
PBInstance generate_laminar(const LaminarParams &params, std::uint64_t seed);

} // namespace pbprop
