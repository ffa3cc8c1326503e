#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pbprop/limits.hpp"
#include "pbprop/rational.hpp"

namespace pbprop {

enum class Relation { LessEqual, Equal, GreaterEqual };

enum class Domain { Free, NonNegative };

struct Variable {
  std::string name;
  Domain domain = Domain::Free;
};

struct Term {
  std::size_t variable;
  Rational coefficient;
};

struct Constraint {
  std::vector<Term> terms;
  Relation relation = Relation::LessEqual;
  Rational rhs;
  std::string label;
};

// A finite system of linear (in)equalities over rational variables.
class LinearSystem {
public:
  std::size_t add_variable(std::string name, Domain domain = Domain::Free);
  // Terms naming the same variable twice are summed.
  void add_constraint(std::vector<Term> terms, Relation relation, Rational rhs,
                      std::string label = {});

  [[nodiscard]] const std::vector<Variable> &variables() const {
    return variables_;
  }
  [[nodiscard]] const std::vector<Constraint> &constraints() const {
    return constraints_;
  }

private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
};

struct FeasibilityResult {
  enum class Status { Feasible, Infeasible };
  Status status = Status::Infeasible;
  // One value per variable when Feasible.
  std::vector<Rational> assignment;
  // One multiplier per constraint when Infeasible: a Farkas certificate
  // accepted by certifies_infeasibility.
  std::vector<Rational> farkas;

  [[nodiscard]] bool feasible() const { return status == Status::Feasible; }
};

// Exact feasibility decision by a two-phase-style rational simplex
// (phase one only, Bland's rule). Throws LimitExceeded when the system has
// more variables or constraints than the limits allow, InputError when a
// term names an undeclared variable.
FeasibilityResult lp_feasible(const LinearSystem &system,
                              const Limits &limits = {});

// True iff x satisfies every constraint and domain exactly.
bool satisfies(const LinearSystem &system, std::span<const Rational> x);

// True iff y proves that no assignment satisfies the system: the
// y-weighted combination of the constraints yields 0 >= positive.
bool certifies_infeasibility(const LinearSystem &system,
                             std::span<const Rational> y);

} // namespace pbprop
