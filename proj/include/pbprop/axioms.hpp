#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pbprop/instance.hpp"
#include "pbprop/limits.hpp"
#include "pbprop/linear_system.hpp"
#include "pbprop/rules.hpp"

namespace pbprop {

enum class Axiom {
  Core,
  Ejr,
  EjrUpToOne,
  Pjr,
  PjrUpToOne,
  MwvPjr,
  StrongBpjr,
  Priceable,
  LaminarProportional,
  CoreUAfford,
};

// Short command-line ids: core, ejr, ejr1, pjr, pjr1, mwvpjr, bpjr,
// priceable, laminarprop, coreuafford.
std::string_view axiom_id(Axiom axiom);
std::optional<Axiom> parse_axiom(std::string_view id);
const std::vector<Axiom> &all_axioms();

enum class Status { Satisfied, Violated };

// A coalition S that can afford T and in which every member strictly
// prefers T to the audited bundle.
struct CoreWitness {
  std::vector<Index> group;
  Bundle target;
};

// S is (alpha, T)-cohesive but under-represented. `alpha` is aligned with
// target.members(); `demand` is sum alpha and `achieved` is what the
// audited bundle gives (best member utility for EJR, the sum of per-project
// maxima over S for PJR).
struct CohesionWitness {
  std::vector<Index> group;
  Bundle target;
  std::vector<Rational> alpha;
  Rational demand;
  Rational achieved;
};

// An l-cohesive group with fewer than l approved winners (unit costs).
struct CommitteeWitness {
  std::vector<Index> group;
  long ell = 0;
};

// A group with common approvals of cost >= ell that the bundle serves with
// less than ell.
struct SpendingWitness {
  std::vector<Index> group;
  Rational ell;
};

// Farkas multipliers, one per constraint of the priceability system for
// the audited bundle (see priceability_system).
struct InfeasibilityWitness {
  std::vector<std::string> labels;
  std::vector<Rational> multipliers;
};

struct TextWitness {
  std::string text;
};

using Witness = std::variant<CoreWitness, CohesionWitness, CommitteeWitness,
                             SpendingWitness, InfeasibilityWitness, TextWitness>;

struct PriceSystem {
  Rational budget;                              // b
  std::vector<std::vector<Rational>> payments; // [voter][project]
};

// Lower bound imposed on b. Zero admits every b >= 0, which decides the
// same bundles as b > 0; One is the b >= 1 of the price-system definition.
enum class BudgetFloor { Zero, One };

struct AxiomVerdict {
  Axiom axiom = Axiom::Core;
  Status status = Status::Satisfied;
  std::optional<Witness> witness;       // iff Violated
  std::optional<PriceSystem> certificate; // priceability only
  std::optional<BudgetFloor> floor;       // priceability only

  [[nodiscard]] bool satisfied() const { return status == Status::Satisfied; }
};

AxiomVerdict check_core(const PBInstance &instance, const Bundle &w,
                        const Limits &limits = {});
AxiomVerdict check_ejr(const PBInstance &instance, const Bundle &w,
                       bool up_to_one, const Limits &limits = {});
AxiomVerdict check_pjr(const PBInstance &instance, const Bundle &w,
                       bool up_to_one, const Limits &limits = {});
// Requires a unit-cost approval instance with integral l / cost.
AxiomVerdict check_mwv_pjr(const PBInstance &instance, const Bundle &w,
                           const Limits &limits = {});
// Approval instances; ell ranges over (0, l].
AxiomVerdict check_strong_bpjr(const PBInstance &instance, const Bundle &w,
                               const Limits &limits = {});
AxiomVerdict check_priceable(const PBInstance &instance, const Bundle &w,
                             BudgetFloor floor = BudgetFloor::Zero,
                             const Limits &limits = {});

// Variables: b first, then p_i(c) for c in W and u_i(c) > 0 in (voter,
// project) order. `vars` receives the (voter, project) of each payment
// variable.
LinearSystem priceability_system(
    const PBInstance &instance, const Bundle &w, BudgetFloor floor,
    std::vector<std::pair<Index, Index>> *vars = nullptr);

// b = n * stop time, payments as recorded. Throws InputError when the
// trace does not fit the instance.
PriceSystem price_system_from_phragmen(const PBInstance &instance,
                                       const PhragmenTrace &trace);

// Every price-system and support condition, checked exactly. The report
// is empty iff ps supports w.
ValidationReport validate_price_system(const PBInstance &instance,
                                       const Bundle &w, const PriceSystem &ps,
                                       BudgetFloor floor = BudgetFloor::Zero);

// Cohesion of (S, T, alpha) plus the violation inequality of the given
// EJR/PJR variant. Used by witness validation and by tests that replay
// hand-picked groups.
ValidationReport validate_cohesion(const PBInstance &instance,
                                   const Bundle &w, Axiom axiom,
                                   const CohesionWitness &witness);

} // namespace pbprop
