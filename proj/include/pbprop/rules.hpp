#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "pbprop/instance.hpp"
#include "pbprop/limits.hpp"

namespace pbprop {

using Payments = std::vector<std::pair<Index, Rational>>; // (voter, amount)

// Phragmen's continuous process, simulated event by event. Every voter
// earns currency at rate 1; a project is bought the moment its supporters
// together hold its cost, and those supporters are reset to zero.
struct PhragmenEvent {
  Rational time;
  Index project;
  Payments payments; // each supporter pays its whole balance
  std::vector<Index> tied; // projects purchasable at the same instant
};

enum class StopReason { BudgetExhausted, NoAffordableProject };

struct PhragmenTrace {
  std::vector<PhragmenEvent> events;
  // Time of the purchase that would have overshot the budget, or of the
  // last purchase when no supported project was left.
  Rational stop_time;
  StopReason stop_reason = StopReason::NoAffordableProject;
  std::optional<Index> blocked_project; // the overshooting project
};

struct PhragmenResult {
  Bundle bundle;
  PhragmenTrace trace;
};

// Approval instances only (PreconditionError otherwise). Equal purchase
// times are broken by canonical project order; the process stops at the
// first purchase that would exceed the budget.
PhragmenResult phragmen(const PBInstance &instance);

// Sum over voters of H(|W ∩ A_i|). Approval instances only.
Rational pav_score(const PBInstance &instance, const Bundle &bundle);

struct PavResult {
  Bundle bundle;
  Rational score;
  std::vector<Bundle> co_winners; // every maximiser, when requested
};

// Exhaustive maximisation over affordable bundles. Among maximisers the
// first in canonical bundle order (size, then lexicographic) wins.
PavResult pav(const PBInstance &instance, bool collect_ties = false,
              const Limits &limits = {});

// Smallest rho with sum_i min(cap_i, u_i(c) * rho) = cost(c), where
// cap_i = l/n - paid[i]. nullopt when the supporters' caps fall short.
std::optional<Rational> min_rho(const PBInstance &instance,
                                const std::vector<Rational> &paid,
                                Index project);

struct RuleXRound {
  Rational rho;
  Index project;
  Payments payments;
  std::vector<Index> tied;
};

struct RuleXTrace {
  std::vector<RuleXRound> rounds;
  Rational remaining; // unspent endowment summed over voters
};

struct RuleXResult {
  Bundle bundle;
  RuleXTrace trace;
};

// Each voter starts with l/n and rounds buy the project of minimal rho.
RuleXResult rule_x(const PBInstance &instance);

} // namespace pbprop
