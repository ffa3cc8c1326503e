#include "pbprop/axioms.hpp"

#include <algorithm>
#include <array>

#include "pbprop/error.hpp"

namespace pbprop {

namespace {

constexpr std::array<std::pair<Axiom, std::string_view>, 10> kAxiomIds{{
    {Axiom::Core, "core"},
    {Axiom::Ejr, "ejr"},
    {Axiom::EjrUpToOne, "ejr1"},
    {Axiom::Pjr, "pjr"},
    {Axiom::PjrUpToOne, "pjr1"},
    {Axiom::MwvPjr, "mwvpjr"},
    {Axiom::StrongBpjr, "bpjr"},
    {Axiom::Priceable, "priceable"},
    {Axiom::LaminarProportional, "laminarprop"},
    {Axiom::CoreUAfford, "coreuafford"},
}};

void require_search_size(const PBInstance &instance, const Limits &limits) {
  const auto n = instance.num_voters(), m = instance.num_projects();
  if (n > limits.max_voters || n >= 64)
    throw LimitExceeded("group search over " + std::to_string(n) +
                        " voters exceeds the cap of " +
                        std::to_string(limits.max_voters));
  if (m > limits.max_projects || m >= 64)
    throw LimitExceeded("bundle search over " + std::to_string(m) +
                        " projects exceeds the cap of " +
                        std::to_string(limits.max_projects));
}

void require_members(const PBInstance &instance, const Bundle &w) {
  for (Index j : w)
    if (j >= instance.num_projects())
      throw InputError("bundle names a project outside the instance");
}

Rational mask_cost(const PBInstance &instance, unsigned long long mask) {
  Rational total;
  for (Index j : mask_members(mask))
    total += instance.cost(j);
  return total;
}

// |S| >= cost(T) * n / l, cross-multiplied.
bool affordable(const PBInstance &instance, std::size_t group_size,
                const Rational &target_cost) {
  return Rational(static_cast<long>(group_size)) * instance.budget() >=
         target_cost * Rational(static_cast<long>(instance.num_voters()));
}

AxiomVerdict violated(Axiom axiom, Witness witness) {
  AxiomVerdict v;
  v.axiom = axiom;
  v.status = Status::Violated;
  v.witness = std::move(witness);
  return v;
}

AxiomVerdict satisfied(Axiom axiom) {
  AxiomVerdict v;
  v.axiom = axiom;
  return v;
}

std::vector<unsigned long long> approval_masks(const PBInstance &instance) {
  std::vector<unsigned long long> masks(instance.num_voters(), 0);
  for (Index i = 0; i < instance.num_voters(); ++i)
    for (Index j = 0; j < instance.num_projects(); ++j)
      if (instance.approves(i, j))
        masks[i] |= 1ULL << j;
  return masks;
}

// Shared (S, T) search for EJR and PJR. For a fixed group the best alpha on
// T is the pointwise minimum of the members' utilities, so only T inside
// the group's positively valued common projects needs visiting: dropping
// a zero-alpha project keeps a violation and comes earlier in canonical
// order.
AxiomVerdict cohesion_search(const PBInstance &instance, const Bundle &w,
                             Axiom axiom, const Limits &limits) {
  require_search_size(instance, limits);
  require_members(instance, w);
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  const bool pjr = axiom == Axiom::Pjr || axiom == Axiom::PjrUpToOne;
  const bool up_to_one = axiom == Axiom::EjrUpToOne || axiom == Axiom::PjrUpToOne;

  std::vector<Rational> in_w(n), best_extra(n);
  for (Index i = 0; i < n; ++i) {
    in_w[i] = utility(instance, i, w);
    for (Index j = 0; j < m; ++j)
      if (!w.contains(j))
        best_extra[i] = max(best_extra[i], instance.utility(i, j));
  }

  std::optional<AxiomVerdict> found;
  for_each_subset_canonical(n, [&](unsigned long long smask) {
    if (smask == 0)
      return true;
    const auto group = mask_members(smask);
    std::vector<Rational> alpha(m);
    std::vector<Index> positive;
    for (Index j = 0; j < m; ++j) {
      Rational a = instance.utility(group.front(), j);
      for (Index i : group)
        a = min(a, instance.utility(i, j));
      alpha[j] = a;
      if (a.sign() > 0)
        positive.push_back(j);
    }

    // What the audited bundle already gives the group, and the most one
    // extra project could add.
    Rational achieved, extra;
    if (pjr) {
      for (Index j = 0; j < m; ++j) {
        Rational top;
        for (Index i : group)
          top = max(top, instance.utility(i, j));
        if (w.contains(j))
          achieved += top;
        else
          extra = max(extra, top);
      }
    } else {
      for (Index i : group)
        achieved = max(achieved, in_w[i]);
    }

    for_each_subset_canonical(positive.size(), [&](unsigned long long tbits) {
      if (tbits == 0)
        return true;
      std::vector<Index> t;
      Rational cost_t, demand;
      for (Index k : mask_members(tbits)) {
        t.push_back(positive[k]);
        cost_t += instance.cost(positive[k]);
        demand += alpha[positive[k]];
      }
      if (!affordable(instance, group.size(), cost_t))
        return true;
      bool violation;
      if (pjr) {
        violation = achieved < demand && (!up_to_one || achieved + extra <= demand);
      } else {
        violation = std::all_of(group.begin(), group.end(), [&](Index i) {
          return in_w[i] < demand &&
                 (!up_to_one || in_w[i] + best_extra[i] <= demand);
        });
      }
      if (!violation)
        return true;
      CohesionWitness witness{group, Bundle(t), {}, demand, achieved};
      for (Index j : t)
        witness.alpha.push_back(alpha[j]);
      found = violated(axiom, std::move(witness));
      return false;
    });
    return !found;
  });
  return found ? *found : satisfied(axiom);
}

std::string issue_subject(const PBInstance &instance, Index voter,
                          Index project) {
  return "voter " + instance.voter_id(voter) + ", project " +
         instance.project_id(project);
}

} // namespace

std::string_view axiom_id(Axiom axiom) {
  for (const auto &[a, id] : kAxiomIds)
    if (a == axiom)
      return id;
  return "unknown";
}

std::optional<Axiom> parse_axiom(std::string_view id) {
  for (const auto &[a, name] : kAxiomIds)
    if (name == id)
      return a;
  return std::nullopt;
}

const std::vector<Axiom> &all_axioms() {
  static const std::vector<Axiom> axioms = [] {
    std::vector<Axiom> out;
    for (const auto &entry : kAxiomIds)
      out.push_back(entry.first);
    return out;
  }();
  return axioms;
}

AxiomVerdict check_core(const PBInstance &instance, const Bundle &w,
                        const Limits &limits) {
  require_search_size(instance, limits);
  require_members(instance, w);
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  std::vector<Rational> in_w(n);
  for (Index i = 0; i < n; ++i)
    in_w[i] = utility(instance, i, w);

  // For a fixed T the largest possible coalition is everyone who strictly
  // prefers T; any blocking coalition is contained in it.
  std::optional<AxiomVerdict> found;
  for_each_subset_canonical(m, [&](unsigned long long tmask) {
    const Bundle t = Bundle::from_mask(tmask);
    std::vector<Index> group;
    for (Index i = 0; i < n; ++i)
      if (utility(instance, i, t) > in_w[i])
        group.push_back(i);
    if (group.empty() || !affordable(instance, group.size(), cost(instance, t)))
      return true;
    found = violated(Axiom::Core, CoreWitness{group, t});
    return false;
  });
  return found ? *found : satisfied(Axiom::Core);
}

AxiomVerdict check_ejr(const PBInstance &instance, const Bundle &w,
                       bool up_to_one, const Limits &limits) {
  return cohesion_search(instance, w, up_to_one ? Axiom::EjrUpToOne : Axiom::Ejr,
                         limits);
}

AxiomVerdict check_pjr(const PBInstance &instance, const Bundle &w,
                       bool up_to_one, const Limits &limits) {
  return cohesion_search(instance, w, up_to_one ? Axiom::PjrUpToOne : Axiom::Pjr,
                         limits);
}

AxiomVerdict check_mwv_pjr(const PBInstance &instance, const Bundle &w,
                           const Limits &limits) {
  const auto k = instance.committee_size();
  if (!k)
    throw PreconditionError(
        "unit-cost PJR needs an approval instance with equal costs and an "
        "integral committee size");
  require_search_size(instance, limits);
  require_members(instance, w);
  const std::size_t n = instance.num_voters();
  const auto approvals = approval_masks(instance);
  const unsigned long long wmask = w.mask();

  std::optional<AxiomVerdict> found;
  for_each_subset_canonical(n, [&](unsigned long long smask) {
    if (smask == 0)
      return true;
    const auto group = mask_members(smask);
    unsigned long long common = ~0ULL, any = 0;
    for (Index i : group) {
      common &= approvals[i];
      any |= approvals[i];
    }
    // Largest ell with |S| >= ell * n / k and ell common approvals.
    long ell = std::min<long>(*k, __builtin_popcountll(common));
    ell = std::min<long>(ell, static_cast<long>(group.size()) * *k /
                                  static_cast<long>(n));
    if (ell < 1 || __builtin_popcountll(any & wmask) >= ell)
      return true;
    found = violated(Axiom::MwvPjr, CommitteeWitness{group, ell});
    return false;
  });
  return found ? *found : satisfied(Axiom::MwvPjr);
}

AxiomVerdict check_strong_bpjr(const PBInstance &instance, const Bundle &w,
                               const Limits &limits) {
  if (!instance.is_approval())
    throw PreconditionError("Strong-BPJR-L is defined for approval instances");
  require_search_size(instance, limits);
  require_members(instance, w);
  const std::size_t n = instance.num_voters();
  const auto approvals = approval_masks(instance);
  const unsigned long long wmask = w.mask();

  // For a group S the most demanding admissible ell is
  // min(cost(common approvals), |S| * l / n); it lies in (0, l] whenever
  // positive, and a violation at any ell implies one there.
  std::optional<AxiomVerdict> found;
  for_each_subset_canonical(n, [&](unsigned long long smask) {
    if (smask == 0)
      return true;
    const auto group = mask_members(smask);
    unsigned long long common = ~0ULL, any = 0;
    for (Index i : group) {
      common &= approvals[i];
      any |= approvals[i];
    }
    const Rational share = Rational(static_cast<long>(group.size())) *
                           instance.budget() /
                           Rational(static_cast<long>(n));
    const Rational ell = min(mask_cost(instance, common), share);
    if (mask_cost(instance, any & wmask) >= ell)
      return true;
    found = violated(Axiom::StrongBpjr, SpendingWitness{group, ell});
    return false;
  });
  return found ? *found : satisfied(Axiom::StrongBpjr);
}

LinearSystem priceability_system(const PBInstance &instance, const Bundle &w,
                                 BudgetFloor floor,
                                 std::vector<std::pair<Index, Index>> *vars) {
  require_members(instance, w);
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  LinearSystem system;
  const std::size_t b = system.add_variable("b", Domain::NonNegative);
  std::vector<std::vector<std::optional<std::size_t>>> pay(
      n, std::vector<std::optional<std::size_t>>(m));
  for (Index i = 0; i < n; ++i)
    for (Index j : w)
      if (instance.approves(i, j)) {
        pay[i][j] = system.add_variable(
            "p[" + instance.voter_id(i) + "," + instance.project_id(j) + "]",
            Domain::NonNegative);
        if (vars)
          vars->emplace_back(i, j);
      }
  const Rational per_voter =
      n == 0 ? Rational(0) : Rational(1) / Rational(static_cast<long>(n));

  for (Index i = 0; i < n; ++i) {
    std::vector<Term> terms{{b, -per_voter}};
    for (Index j : w)
      if (pay[i][j])
        terms.push_back({*pay[i][j], 1});
    system.add_constraint(std::move(terms), Relation::LessEqual, 0,
                          "spending of " + instance.voter_id(i));
  }
  for (Index j : w) {
    std::vector<Term> terms;
    for (Index i = 0; i < n; ++i)
      if (pay[i][j])
        terms.push_back({*pay[i][j], 1});
    system.add_constraint(std::move(terms), Relation::Equal, instance.cost(j),
                          "funding of " + instance.project_id(j));
  }
  for (Index c = 0; c < m; ++c) {
    if (w.contains(c))
      continue;
    // Supporters' leftover budgets may not exceed cost(c).
    std::vector<Term> terms;
    long backers = 0;
    for (Index i = 0; i < n; ++i) {
      if (!instance.approves(i, c))
        continue;
      ++backers;
      for (Index j : w)
        if (pay[i][j])
          terms.push_back({*pay[i][j], -1});
    }
    terms.push_back({b, per_voter * Rational(backers)});
    system.add_constraint(std::move(terms), Relation::LessEqual,
                          instance.cost(c),
                          "leftover of backers of " + instance.project_id(c));
  }
  if (floor == BudgetFloor::One)
    system.add_constraint({{b, 1}}, Relation::GreaterEqual, 1, "b >= 1");
  return system;
}

AxiomVerdict check_priceable(const PBInstance &instance, const Bundle &w,
                             BudgetFloor floor, const Limits &limits) {
  std::vector<std::pair<Index, Index>> vars;
  const LinearSystem system = priceability_system(instance, w, floor, &vars);
  const FeasibilityResult result = lp_feasible(system, limits);

  AxiomVerdict verdict;
  verdict.axiom = Axiom::Priceable;
  verdict.floor = floor;
  if (result.feasible()) {
    PriceSystem ps;
    ps.budget = result.assignment[0];
    ps.payments.assign(instance.num_voters(),
                       std::vector<Rational>(instance.num_projects()));
    for (std::size_t k = 0; k < vars.size(); ++k)
      ps.payments[vars[k].first][vars[k].second] = result.assignment[k + 1];
    verdict.certificate = std::move(ps);
    return verdict;
  }
  InfeasibilityWitness witness;
  for (const auto &c : system.constraints())
    witness.labels.push_back(c.label);
  witness.multipliers = result.farkas;
  verdict.status = Status::Violated;
  verdict.witness = std::move(witness);
  return verdict;
}

PriceSystem price_system_from_phragmen(const PBInstance &instance,
                                       const PhragmenTrace &trace) {
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  PriceSystem ps;
  ps.budget = trace.stop_time * Rational(static_cast<long>(n));
  ps.payments.assign(n, std::vector<Rational>(m));
  for (const auto &event : trace.events) {
    if (event.project >= m)
      throw InputError("trace buys a project outside the instance");
    for (const auto &[voter, amount] : event.payments) {
      if (voter >= n)
        throw InputError("trace charges a voter outside the instance");
      ps.payments[voter][event.project] += amount;
    }
  }
  return ps;
}

ValidationReport validate_price_system(const PBInstance &instance,
                                       const Bundle &w, const PriceSystem &ps,
                                       BudgetFloor floor) {
  ValidationReport report;
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  if (ps.payments.size() != n ||
      std::any_of(ps.payments.begin(), ps.payments.end(),
                  [&](const auto &row) { return row.size() != m; })) {
    report.push_back({"malformed", "payment table is not voters x projects"});
    return report;
  }
  const Rational minimum = floor == BudgetFloor::One ? 1 : 0;
  if (ps.budget < minimum)
    report.push_back({"budget below floor", "b = " + ps.budget.str() +
                                                " is below " + minimum.str()});
  const Rational share =
      n == 0 ? Rational(0) : ps.budget / Rational(static_cast<long>(n));

  std::vector<Rational> spent(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < m; ++j) {
      const Rational &p = ps.payments[i][j];
      if (p.sign() < 0)
        report.push_back({"negative payment",
                          issue_subject(instance, i, j) + " pays " + p.str()});
      if (!p.is_zero() && !instance.utility(i, j).sign())
        report.push_back({"payment without utility",
                          issue_subject(instance, i, j) + " pays " + p.str() +
                              " at zero utility"});
      spent[i] += p;
    }
    if (spent[i] > share)
      report.push_back({"overspent budget", "voter " + instance.voter_id(i) +
                                                " spends " + spent[i].str() +
                                                " > b/n = " + share.str()});
  }
  for (Index j = 0; j < m; ++j) {
    Rational received;
    for (Index i = 0; i < n; ++i)
      received += ps.payments[i][j];
    if (w.contains(j)) {
      if (received != instance.cost(j))
        report.push_back({"funding mismatch",
                          "project " + instance.project_id(j) + " receives " +
                              received.str() + " but costs " +
                              instance.cost(j).str()});
      continue;
    }
    if (!received.is_zero())
      report.push_back({"payment outside bundle",
                        "unselected project " + instance.project_id(j) +
                            " receives " + received.str()});
    Rational leftover;
    for (Index i = 0; i < n; ++i)
      if (instance.utility(i, j).sign() > 0) {
        Rational paid_for_w;
        for (Index c : w)
          paid_for_w += ps.payments[i][c];
        leftover += share - paid_for_w;
      }
    if (leftover > instance.cost(j))
      report.push_back({"affordable outside bundle",
                        "backers of " + instance.project_id(j) + " keep " +
                            leftover.str() + " > cost " +
                            instance.cost(j).str()});
  }
  return report;
}

ValidationReport validate_cohesion(const PBInstance &instance,
                                   const Bundle &w, Axiom axiom,
                                   const CohesionWitness &witness) {
  ValidationReport report;
  const auto &group = witness.group;
  const auto &t = witness.target.members();
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  if (group.empty() || !std::is_sorted(group.begin(), group.end()) ||
      std::adjacent_find(group.begin(), group.end()) != group.end() ||
      group.back() >= n) {
    report.push_back({"bad group", "group must be a nonempty voter set"});
    return report;
  }
  if (!t.empty() && t.back() >= m) {
    report.push_back({"bad target", "target names an unknown project"});
    return report;
  }
  if (witness.alpha.size() != t.size()) {
    report.push_back({"bad alpha", "alpha must give one value per target project"});
    return report;
  }
  Rational demand;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Rational &a = witness.alpha[k];
    if (a.sign() < 0 || a > Rational(1))
      report.push_back({"bad alpha", "alpha(" + instance.project_id(t[k]) +
                                         ") = " + a.str() + " outside [0,1]"});
    for (Index i : group)
      if (instance.utility(i, t[k]) < a)
        report.push_back({"not cohesive", issue_subject(instance, i, t[k]) +
                                              " has utility below alpha"});
    demand += a;
  }
  if (!affordable(instance, group.size(), cost(instance, witness.target)))
    report.push_back({"not affordable", "group of " +
                                            std::to_string(group.size()) +
                                            " cannot afford the target"});
  if (demand != witness.demand)
    report.push_back({"wrong demand", "sum of alpha is " + demand.str() +
                                          ", witness states " +
                                          witness.demand.str()});

  const bool pjr = axiom == Axiom::Pjr || axiom == Axiom::PjrUpToOne;
  const bool up_to_one = axiom == Axiom::EjrUpToOne || axiom == Axiom::PjrUpToOne;
  if (pjr) {
    Rational achieved, extra;
    for (Index j = 0; j < m; ++j) {
      Rational top;
      for (Index i : group)
        top = max(top, instance.utility(i, j));
      if (w.contains(j))
        achieved += top;
      else
        extra = max(extra, top);
    }
    if (achieved != witness.achieved)
      report.push_back({"wrong achieved", "group receives " + achieved.str()});
    if (!(achieved < demand))
      report.push_back({"represented", "group receives " + achieved.str() +
                                           " >= " + demand.str()});
    else if (up_to_one && achieved + extra > demand)
      report.push_back({"represented up to one",
                        "one more project lifts the group above the demand"});
  } else {
    Rational best;
    for (Index i : group) {
      const Rational u = utility(instance, i, w);
      best = max(best, u);
      if (!(u < demand)) {
        report.push_back({"represented", "voter " + instance.voter_id(i) +
                                             " already receives " + u.str()});
        continue;
      }
      if (up_to_one)
        for (Index a = 0; a < m; ++a)
          if (!w.contains(a) && u + instance.utility(i, a) > demand) {
            report.push_back({"represented up to one",
                              "voter " + instance.voter_id(i) + " exceeds " +
                                  demand.str() + " with " +
                                  instance.project_id(a)});
            break;
          }
    }
    if (best != witness.achieved)
      report.push_back({"wrong achieved", "best member receives " + best.str()});
  }
  return report;
}

} // namespace pbprop
