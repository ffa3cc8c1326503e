#include "pbprop/linear_system.hpp"

#include <algorithm>
#include <optional>

#include "pbprop/error.hpp"

namespace pbprop {

std::size_t LinearSystem::add_variable(std::string name, Domain domain) {
  variables_.push_back({std::move(name), domain});
  return variables_.size() - 1;
}

void LinearSystem::add_constraint(std::vector<Term> terms, Relation relation,
                                  Rational rhs, std::string label) {
  std::sort(terms.begin(), terms.end(),
            [](const Term &a, const Term &b) { return a.variable < b.variable; });
  std::vector<Term> merged;
  for (auto &t : terms) {
    if (!merged.empty() && merged.back().variable == t.variable)
      merged.back().coefficient += t.coefficient;
    else
      merged.push_back(std::move(t));
  }
  std::erase_if(merged, [](const Term &t) { return t.coefficient.is_zero(); });
  constraints_.push_back(
      {std::move(merged), relation, std::move(rhs), std::move(label)});
}

namespace {

// Dense phase-one tableau over mpq_class. Column layout:
//   [x+ / x- per variable][slack per inequality][artificial per row][rhs]
class PhaseOne {
public:
  explicit PhaseOne(const LinearSystem &sys) : sys_(sys) {
    const auto &vars = sys.variables();
    const auto &cons = sys.constraints();
    for (std::size_t j = 0; j < vars.size(); ++j) {
      pos_col_.push_back(cols_++);
      neg_col_.push_back(vars[j].domain == Domain::Free
                             ? std::optional<std::size_t>(cols_++)
                             : std::nullopt);
    }
    for (const auto &c : cons)
      slack_col_.push_back(c.relation == Relation::Equal
                               ? std::nullopt
                               : std::optional<std::size_t>(cols_++));
    art_begin_ = cols_;
    cols_ += cons.size();
    rhs_ = cols_;

    rows_.assign(cons.size(), std::vector<mpq_class>(cols_ + 1));
    flip_.assign(cons.size(), 1);
    for (std::size_t k = 0; k < cons.size(); ++k) {
      auto &row = rows_[k];
      for (const auto &t : cons[k].terms) {
        row[pos_col_[t.variable]] += t.coefficient.mpq();
        if (neg_col_[t.variable])
          row[*neg_col_[t.variable]] -= t.coefficient.mpq();
      }
      if (slack_col_[k])
        row[*slack_col_[k]] = cons[k].relation == Relation::LessEqual ? 1 : -1;
      row[rhs_] = cons[k].rhs.mpq();
      if (sgn(row[rhs_]) < 0) {
        flip_[k] = -1;
        for (auto &v : row)
          v = -v;
      }
      row[art_begin_ + k] = 1;
      basis_.push_back(art_begin_ + k);
    }
    // Reduced costs for minimising the sum of artificials.
    z_.assign(cols_ + 1, 0);
    for (std::size_t k = 0; k < rows_.size(); ++k)
      for (std::size_t j = 0; j <= cols_; ++j)
        if (j < art_begin_ || j >= art_begin_ + rows_.size() || j == rhs_)
          z_[j] -= rows_[k][j];
  }

  void solve() {
    for (;;) {
      std::optional<std::size_t> entering;
      for (std::size_t j = 0; j < cols_; ++j)
        if (sgn(z_[j]) < 0) {
          entering = j;
          break;
        }
      if (!entering)
        return;
      std::optional<std::size_t> leave;
      mpq_class best;
      for (std::size_t k = 0; k < rows_.size(); ++k) {
        const auto &a = rows_[k][*entering];
        if (sgn(a) <= 0)
          continue;
        mpq_class ratio = rows_[k][rhs_] / a;
        if (!leave || ratio < best ||
            (ratio == best && basis_[k] < basis_[*leave])) {
          leave = k;
          best = ratio;
        }
      }
      // Phase one is bounded below by zero, so a ratio row always exists.
      pivot(*leave, *entering);
    }
  }

  [[nodiscard]] bool feasible() const { return sgn(z_[rhs_]) == 0; }

  [[nodiscard]] std::vector<Rational> assignment() const {
    std::vector<mpq_class> value(cols_);
    for (std::size_t k = 0; k < rows_.size(); ++k)
      value[basis_[k]] = rows_[k][rhs_];
    std::vector<Rational> x;
    for (std::size_t j = 0; j < pos_col_.size(); ++j) {
      mpq_class v = value[pos_col_[j]];
      if (neg_col_[j])
        v -= value[*neg_col_[j]];
      x.emplace_back(v);
    }
    return x;
  }

  [[nodiscard]] std::vector<Rational> farkas() const {
    std::vector<Rational> y;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      mpq_class yk = 1 - z_[art_begin_ + k];
      if (flip_[k] < 0)
        yk = -yk;
      y.emplace_back(yk);
    }
    return y;
  }

private:
  void pivot(std::size_t r, std::size_t c) {
    auto &prow = rows_[r];
    const mpq_class p = prow[c];
    for (auto &v : prow)
      v /= p;
    auto eliminate = [&](std::vector<mpq_class> &row) {
      if (sgn(row[c]) == 0)
        return;
      const mpq_class f = row[c];
      for (std::size_t j = 0; j <= cols_; ++j)
        if (sgn(prow[j]) != 0)
          row[j] -= f * prow[j];
    };
    for (std::size_t k = 0; k < rows_.size(); ++k)
      if (k != r)
        eliminate(rows_[k]);
    eliminate(z_);
    basis_[r] = c;
  }

  const LinearSystem &sys_;
  std::size_t cols_ = 0;
  std::size_t art_begin_ = 0;
  std::size_t rhs_ = 0;
  std::vector<std::size_t> pos_col_;
  std::vector<std::optional<std::size_t>> neg_col_;
  std::vector<std::optional<std::size_t>> slack_col_;
  std::vector<std::vector<mpq_class>> rows_;
  std::vector<int> flip_;
  std::vector<std::size_t> basis_;
  std::vector<mpq_class> z_;
};

void check_well_formed(const LinearSystem &system, const Limits &limits) {
  if (system.variables().size() > limits.max_lp_variables)
    throw LimitExceeded("linear system has " +
                        std::to_string(system.variables().size()) +
                        " variables (cap " +
                        std::to_string(limits.max_lp_variables) + ")");
  if (system.constraints().size() > limits.max_lp_constraints)
    throw LimitExceeded("linear system has " +
                        std::to_string(system.constraints().size()) +
                        " constraints (cap " +
                        std::to_string(limits.max_lp_constraints) + ")");
  for (const auto &c : system.constraints())
    for (const auto &t : c.terms)
      if (t.variable >= system.variables().size())
        throw InputError("constraint '" + c.label +
                         "' references undeclared variable #" +
                         std::to_string(t.variable));
}

} // namespace

FeasibilityResult lp_feasible(const LinearSystem &system, const Limits &limits) {
  check_well_formed(system, limits);
  PhaseOne tableau(system);
  tableau.solve();
  FeasibilityResult result;
  if (tableau.feasible()) {
    result.status = FeasibilityResult::Status::Feasible;
    result.assignment = tableau.assignment();
  } else {
    result.status = FeasibilityResult::Status::Infeasible;
    result.farkas = tableau.farkas();
  }
  return result;
}

bool satisfies(const LinearSystem &system, std::span<const Rational> x) {
  if (x.size() != system.variables().size())
    return false;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (system.variables()[j].domain == Domain::NonNegative && x[j].sign() < 0)
      return false;
  for (const auto &c : system.constraints()) {
    Rational lhs;
    for (const auto &t : c.terms)
      lhs += t.coefficient * x[t.variable];
    const bool ok = c.relation == Relation::LessEqual  ? lhs <= c.rhs
                    : c.relation == Relation::Equal    ? lhs == c.rhs
                                                       : lhs >= c.rhs;
    if (!ok)
      return false;
  }
  return true;
}

bool certifies_infeasibility(const LinearSystem &system,
                             std::span<const Rational> y) {
  const auto &cons = system.constraints();
  if (y.size() != cons.size())
    return false;
  std::vector<Rational> combo(system.variables().size());
  Rational rhs;
  for (std::size_t k = 0; k < cons.size(); ++k) {
    if (cons[k].relation == Relation::LessEqual && y[k].sign() > 0)
      return false;
    if (cons[k].relation == Relation::GreaterEqual && y[k].sign() < 0)
      return false;
    for (const auto &t : cons[k].terms)
      combo[t.variable] += y[k] * t.coefficient;
    rhs += y[k] * cons[k].rhs;
  }
  for (std::size_t j = 0; j < combo.size(); ++j) {
    const bool free = system.variables()[j].domain == Domain::Free;
    if (free ? !combo[j].is_zero() : combo[j].sign() > 0)
      return false;
  }
  return rhs.sign() > 0;
}

} // namespace pbprop
