#include "pbprop/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "pbprop/error.hpp"

namespace pbprop {

namespace {

using Mask = unsigned long long;

bool has(Mask m, Index j) { return (m >> j & 1ULL) != 0; }

Rational sum_cost(const PBInstance &instance, Mask m) {
  Rational total;
  for (Index j = 0; j < instance.num_projects(); ++j)
    if (has(m, j))
      total += instance.cost(j);
  return total;
}

Rational sum_utility(const PBInstance &instance, Index i, Mask m) {
  Rational total;
  for (Index j = 0; j < instance.num_projects(); ++j)
    if (has(m, j))
      total += instance.utility(i, j);
  return total;
}

std::vector<Index> members(Mask m, std::size_t size) {
  std::vector<Index> out;
  for (Index j = 0; j < size; ++j)
    if (has(m, j))
      out.push_back(j);
  return out;
}

Mask full(std::size_t size) { return size == 0 ? 0 : (~0ULL >> (64 - size)); }

// |S| >= cost(T) / l * n
bool can_afford(const PBInstance &instance, std::size_t group, const Rational &c) {
  return Rational(static_cast<long>(group)) >=
         c / instance.budget() * Rational(static_cast<long>(instance.num_voters()));
}

AxiomVerdict make(Axiom axiom, std::optional<Witness> witness) {
  AxiomVerdict v;
  v.axiom = axiom;
  if (witness) {
    v.status = Status::Violated;
    v.witness = std::move(witness);
  }
  return v;
}

std::optional<Witness> oracle_core(const PBInstance &instance, Mask w) {
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  for (Mask s = 1; s <= full(n); ++s)
    for (Mask t = 0; t <= full(m); ++t) {
      const auto group = members(s, n);
      if (!can_afford(instance, group.size(), sum_cost(instance, t)))
        continue;
      bool blocks = true;
      for (Index i : group)
        blocks = blocks && sum_utility(instance, i, t) > sum_utility(instance, i, w);
      if (blocks)
        return CoreWitness{group, Bundle::from_mask(t)};
      if (t == full(m))
        break;
    }
  return std::nullopt;
}

std::optional<Witness> oracle_cohesion(const PBInstance &instance, Mask w,
                                       Axiom axiom) {
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  const bool pjr = axiom == Axiom::Pjr || axiom == Axiom::PjrUpToOne;
  const bool up_to_one = axiom == Axiom::EjrUpToOne || axiom == Axiom::PjrUpToOne;

  std::vector<std::vector<Rational>> grid(m);
  for (Index c = 0; c < m; ++c) {
    std::set<Rational> values{Rational(0)};
    for (Index i = 0; i < n; ++i)
      values.insert(instance.utility(i, c));
    grid[c].assign(values.begin(), values.end());
  }

  for (Mask s = 1; s <= full(n); ++s) {
    const auto group = members(s, n);
    // Representation measures of W (and of W with one more project).
    auto measure = [&](Mask bundle) {
      if (pjr) {
        Rational total;
        for (Index c = 0; c < m; ++c)
          if (has(bundle, c)) {
            Rational top;
            for (Index i : group)
              top = max(top, instance.utility(i, c));
            total += top;
          }
        return std::vector<Rational>{total};
      }
      std::vector<Rational> per_voter;
      for (Index i : group)
        per_voter.push_back(sum_utility(instance, i, bundle));
      return per_voter;
    };
    const auto base = measure(w);
    std::vector<std::vector<Rational>> plus_one;
    for (Index a = 0; a < m; ++a)
      plus_one.push_back(measure(w | 1ULL << a));

    for (Mask t = 0;; ++t) {
      if (can_afford(instance, group.size(), sum_cost(instance, t))) {
        const auto target = members(t, m);
        std::vector<std::size_t> pick(target.size(), 0);
        // Odometer over alpha values on T.
        for (;;) {
          bool cohesive = true;
          Rational demand;
          for (std::size_t k = 0; k < target.size(); ++k) {
            const Rational &a = grid[target[k]][pick[k]];
            for (Index i : group)
              cohesive = cohesive && instance.utility(i, target[k]) >= a;
            demand += a;
          }
          if (cohesive) {
            // Violated when every measured entity falls short.
            bool violation = true;
            for (std::size_t e = 0; e < base.size(); ++e) {
              bool short_of = base[e] < demand;
              if (up_to_one)
                for (Index a = 0; a < m; ++a)
                  short_of = short_of && !(plus_one[a][e] > demand);
              violation = violation && short_of;
            }
            if (violation) {
              CohesionWitness witness{group, Bundle(target), {}, demand, {}};
              for (std::size_t k = 0; k < target.size(); ++k)
                witness.alpha.push_back(grid[target[k]][pick[k]]);
              witness.achieved = pjr ? base.front()
                                     : *std::max_element(base.begin(), base.end());
              return witness;
            }
          }
          std::size_t k = 0;
          while (k < pick.size() && ++pick[k] == grid[target[k]].size())
            pick[k++] = 0;
          if (k == pick.size())
            break;
        }
      }
      if (t == full(m))
        break;
    }
  }
  return std::nullopt;
}

std::optional<Witness> oracle_mwv(const PBInstance &instance, Mask w) {
  const auto k = instance.committee_size();
  if (!k)
    throw PreconditionError("unit-cost PJR needs a unit-cost approval instance");
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  for (long ell = 1; ell <= *k; ++ell)
    for (Mask s = 1; s <= full(n); ++s) {
      const auto group = members(s, n);
      if (static_cast<long>(group.size()) * *k < ell * static_cast<long>(n))
        continue;
      long common = 0, served = 0;
      for (Index c = 0; c < m; ++c) {
        bool all = true, any = false;
        for (Index i : group) {
          all = all && instance.approves(i, c);
          any = any || instance.approves(i, c);
        }
        common += all;
        served += any && has(w, c);
      }
      if (common >= ell && served < ell)
        return CommitteeWitness{group, ell};
    }
  return std::nullopt;
}

std::optional<Witness> oracle_bpjr(const PBInstance &instance, Mask w) {
  if (!instance.is_approval())
    throw PreconditionError("Strong-BPJR-L is defined for approval instances");
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  for (Mask s = 1; s <= full(n); ++s) {
    const auto group = members(s, n);
    Mask common = full(m), any = 0;
    for (Index c = 0; c < m; ++c)
      for (Index i : group) {
        if (!instance.approves(i, c))
          common &= ~(1ULL << c);
        else
          any |= 1ULL << c;
      }
    // Breakpoints: costs of common subsets and the group's budget share.
    std::set<Rational> candidates{Rational(static_cast<long>(group.size())) *
                                  instance.budget() /
                                  Rational(static_cast<long>(n))};
    for (Mask sub = common;; sub = (sub - 1) & common) {
      candidates.insert(sum_cost(instance, sub));
      if (sub == 0)
        break;
    }
    for (const Rational &ell : candidates) {
      if (ell.sign() <= 0 || ell > instance.budget())
        continue;
      if (Rational(static_cast<long>(group.size())) <
          ell * Rational(static_cast<long>(n)) / instance.budget())
        continue;
      if (sum_cost(instance, common) >= ell && sum_cost(instance, any & w) < ell)
        return SpendingWitness{group, ell};
    }
  }
  return std::nullopt;
}

std::optional<Witness> oracle_priceable(const PBInstance &instance, Mask w,
                                        BudgetFloor floor) {
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  LinearSystem sys;
  const auto b = sys.add_variable("b", Domain::NonNegative);
  std::vector<std::vector<std::size_t>> p(n, std::vector<std::size_t>(m));
  for (Index i = 0; i < n; ++i)
    for (Index c = 0; c < m; ++c)
      p[i][c] = sys.add_variable("p", Domain::NonNegative);
  const Rational inv_n = Rational(1) / Rational(static_cast<long>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index c = 0; c < m; ++c)
      if (instance.utility(i, c).is_zero())
        sys.add_constraint({{p[i][c], 1}}, Relation::Equal, 0);
    std::vector<Term> spend{{b, -inv_n}};
    for (Index c = 0; c < m; ++c)
      spend.push_back({p[i][c], 1});
    sys.add_constraint(spend, Relation::LessEqual, 0);
  }
  for (Index c = 0; c < m; ++c) {
    std::vector<Term> paid;
    for (Index i = 0; i < n; ++i)
      paid.push_back({p[i][c], 1});
    sys.add_constraint(paid, Relation::Equal, has(w, c) ? instance.cost(c) : Rational(0));
    if (has(w, c))
      continue;
    std::vector<Term> leftover;
    for (Index i = 0; i < n; ++i) {
      if (instance.utility(i, c).is_zero())
        continue;
      leftover.push_back({b, inv_n});
      for (Index d = 0; d < m; ++d)
        if (has(w, d))
          leftover.push_back({p[i][d], -1});
    }
    sys.add_constraint(leftover, Relation::LessEqual, instance.cost(c));
  }
  if (floor == BudgetFloor::One)
    sys.add_constraint({{b, 1}}, Relation::GreaterEqual, 1);

  const auto result = lp_feasible(sys);
  if (result.feasible()) {
    if (!satisfies(sys, result.assignment))
      throw std::logic_error("oracle price system fails its own constraints");
    return std::nullopt;
  }
  if (!certifies_infeasibility(sys, result.farkas))
    throw std::logic_error("oracle infeasibility certificate does not check");
  return TextWitness{"no supporting price system"};
}

// Literal reading of the laminar definitions, trying every way an instance
// can be built: unanimous leaf, any unanimous project, any bipartition of
// the voters.
struct LaminarOracle {
  const PBInstance &instance;
  LeafRule rule;
  std::vector<Mask> approvals;
  // (voters, project) of the unanimous-project steps of the first
  // decomposition found.
  std::vector<std::pair<Mask, Index>> steps;

  Mask projects_of(Mask voters, Mask removed) const {
    Mask all = 0;
    for (Index i = 0; i < approvals.size(); ++i)
      if (has(voters, i))
        all |= approvals[i] & ~removed;
    return all;
  }

  bool unanimous(Mask voters, Mask removed) const {
    std::optional<Mask> first;
    for (Index i = 0; i < approvals.size(); ++i)
      if (has(voters, i)) {
        const Mask a = approvals[i] & ~removed;
        if (first && *first != a)
          return false;
        first = a;
      }
    return true;
  }

  // nullopt bundle: only decide laminarity.
  bool holds(Mask voters, Mask removed, const Rational &l,
             std::optional<Mask> w, bool record) {
    const Mask cp = projects_of(voters, removed);
    if (w && (*w & ~cp))
      return false;
    const long size = __builtin_popcountll(voters);

    if (unanimous(voters, removed) && sum_cost(instance, cp) >= l) {
      if (!w)
        return true;
      const Rational spent = sum_cost(instance, *w);
      bool ok = spent <= l;
      if (ok && rule == LeafRule::Exhaustive)
        for (Index c = 0; c < instance.num_projects(); ++c)
          ok = ok && !(has(cp, c) && !has(*w, c) && spent + instance.cost(c) <= l);
      if (ok && rule == LeafRule::MaxCardinality)
        // no affordable leaf subset is larger
        for (Mask sub = cp;; sub = (sub - 1) & cp) {
          ok = ok && !(__builtin_popcountll(sub) > __builtin_popcountll(*w) &&
                       sum_cost(instance, sub) <= l);
          if (sub == 0)
            break;
        }
      if (ok)
        return true;
    }

    for (Index c = 0; c < instance.num_projects(); ++c) {
      bool everyone = has(cp, c);
      for (Index i = 0; i < approvals.size(); ++i)
        if (has(voters, i))
          everyone = everyone && has(approvals[i], c);
      if (!everyone)
        continue;
      const Mask rest = removed | 1ULL << c;
      const Rational l2 = l - instance.cost(c);
      if (unanimous(voters, rest) || l2.sign() <= 0)
        continue;
      if (w && !has(*w, c))
        continue;
      const auto mark = steps.size();
      if (record)
        steps.emplace_back(voters, c);
      if (holds(voters, rest, l2,
                w ? std::optional<Mask>(*w & ~(1ULL << c)) : std::nullopt, record))
        return true;
      steps.resize(mark);
    }

    for (Mask v1 = (voters - 1) & voters; v1 != 0; v1 = (v1 - 1) & voters) {
      const Mask v2 = voters & ~v1;
      if (v1 < v2)
        continue; // each unordered split once
      const Mask c1 = projects_of(v1, removed), c2 = projects_of(v2, removed);
      if (c1 & c2)
        continue;
      const Rational l1 = l * Rational(__builtin_popcountll(v1)) / Rational(size);
      const Rational l2 = l - l1;
      const auto mark = steps.size();
      if (holds(v1, removed, l1, w ? std::optional<Mask>(*w & c1) : std::nullopt,
                record) &&
          holds(v2, removed, l2, w ? std::optional<Mask>(*w & c2) : std::nullopt,
                record))
        return true;
      steps.resize(mark);
    }
    return false;
  }
};

LaminarOracle laminar_oracle(const PBInstance &instance, LeafRule rule) {
  if (!instance.is_approval())
    throw PreconditionError("laminar instances are approval instances");
  LaminarOracle o{instance, rule, {}, {}};
  for (Index i = 0; i < instance.num_voters(); ++i) {
    Mask a = 0;
    for (Index c = 0; c < instance.num_projects(); ++c)
      if (instance.approves(i, c))
        a |= 1ULL << c;
    o.approvals.push_back(a);
  }
  const Mask everyone = full(instance.num_voters());
  if (everyone == 0 || instance.budget().sign() <= 0 ||
      !o.holds(everyone, 0, instance.budget(), std::nullopt, true))
    throw NotLaminarError("instance is not laminar");
  return o;
}

} // namespace

std::vector<Bundle> enumerate_affordable(const PBInstance &instance,
                                         const Limits &limits) {
  const std::size_t m = instance.num_projects();
  if (m > limits.max_projects || m >= 64)
    throw LimitExceeded("enumerating bundles over " + std::to_string(m) +
                        " projects exceeds the cap");
  std::vector<Bundle> out;
  for_each_subset_canonical(m, [&](Mask mask) {
    if (sum_cost(instance, mask) <= instance.budget())
      out.push_back(Bundle::from_mask(mask));
    return true;
  });
  return out;
}

AxiomVerdict oracle_axiom(const PBInstance &instance, const Bundle &w,
                          Axiom axiom, const OracleOptions &options) {
  if (instance.num_voters() > options.max_voters ||
      instance.num_projects() > options.max_projects)
    throw LimitExceeded("instance exceeds the oracle caps");
  const Mask wm = w.mask();
  switch (axiom) {
  case Axiom::Core:
    return make(axiom, oracle_core(instance, wm));
  case Axiom::Ejr:
  case Axiom::EjrUpToOne:
  case Axiom::Pjr:
  case Axiom::PjrUpToOne:
    return make(axiom, oracle_cohesion(instance, wm, axiom));
  case Axiom::MwvPjr:
    return make(axiom, oracle_mwv(instance, wm));
  case Axiom::StrongBpjr:
    return make(axiom, oracle_bpjr(instance, wm));
  case Axiom::Priceable: {
    auto v = make(axiom, oracle_priceable(instance, wm, options.floor));
    v.floor = options.floor;
    return v;
  }
  case Axiom::LaminarProportional: {
    auto o = laminar_oracle(instance, options.leaf_rule);
    const bool ok = o.holds(full(instance.num_voters()), 0, instance.budget(), wm, false);
    return make(axiom, ok ? std::nullopt
                          : std::optional<Witness>(TextWitness{"no certifying decomposition"}));
  }
  case Axiom::CoreUAfford: {
    const auto o = laminar_oracle(instance, options.leaf_rule);
    const std::size_t n = instance.num_voters(), m = instance.num_projects();
    for (Mask s = 1; s <= full(n); ++s) {
      std::vector<Index> pool;
      for (const auto &[voters, c] : o.steps)
        if (voters & s)
          pool.push_back(c);
      const auto group = members(s, n);
      for (Mask t = 0;; ++t) {
        bool blocks = can_afford(instance, group.size(), sum_cost(instance, t));
        for (Index i : group)
          blocks = blocks && sum_utility(instance, i, t) > sum_utility(instance, i, wm);
        for (Index c : pool) {
          bool matched = false;
          for (Index x = 0; x < m; ++x)
            matched = matched || (has(t, x) && instance.cost(x) >= instance.cost(c));
          blocks = blocks && matched;
        }
        if (blocks)
          return make(axiom, CoreWitness{group, Bundle::from_mask(t)});
        if (t == full(m))
          break;
      }
    }
    return make(axiom, std::nullopt);
  }
  }
  throw InputError("unknown axiom");
}

bool lp_feasible_by_vertices(const LinearSystem &system) {
  const std::size_t d = system.variables().size();
  if (d > 3)
    throw LimitExceeded("vertex enumeration is meant for at most 3 variables");
  if (d == 0)
    return satisfies(system, {});

  // Hyperplanes a . x = r.
  std::vector<std::pair<std::vector<Rational>, Rational>> planes;
  for (const auto &c : system.constraints()) {
    std::vector<Rational> row(d);
    for (const auto &t : c.terms)
      row[t.variable] += t.coefficient;
    planes.emplace_back(row, c.rhs);
  }
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<Rational> row(d);
    row[j] = 1;
    planes.emplace_back(row, Rational(0));
  }

  std::vector<std::size_t> pick(d);
  std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t k,
                                                             std::size_t from) {
    if (k == d) {
      // Gauss-Jordan on the d x d system.
      std::vector<std::vector<Rational>> a(d);
      for (std::size_t r = 0; r < d; ++r) {
        a[r] = planes[pick[r]].first;
        a[r].push_back(planes[pick[r]].second);
      }
      for (std::size_t col = 0; col < d; ++col) {
        std::size_t piv = col;
        while (piv < d && a[piv][col].is_zero())
          ++piv;
        if (piv == d)
          return false; // singular
        std::swap(a[piv], a[col]);
        for (std::size_t r = 0; r < d; ++r) {
          if (r == col || a[r][col].is_zero())
            continue;
          const Rational f = a[r][col] / a[col][col];
          for (std::size_t q = col; q <= d; ++q)
            a[r][q] -= f * a[col][q];
        }
      }
      std::vector<Rational> x(d);
      for (std::size_t r = 0; r < d; ++r)
        x[r] = a[r][d] / a[r][r];
      return satisfies(system, x);
    }
    for (std::size_t p = from; p < planes.size(); ++p) {
      pick[k] = p;
      if (choose(k + 1, p + 1))
        return true;
    }
    return false;
  };
  if (choose(0, 0))
    return true;

  std::vector<Rational> x(d);
  std::function<bool(std::size_t)> grid = [&](std::size_t j) {
    if (j == d)
      return satisfies(system, x);
    for (long k = -4; k <= 4; ++k) {
      x[j] = Rational(k, 2);
      if (grid(j + 1))
        return true;
    }
    return false;
  };
  return grid(0);
}

PBInstance random_instance(const GeneratorSpec &spec, Rng &rng) {
  const auto n = static_cast<std::size_t>(rng.between(
      static_cast<long>(spec.min_voters), static_cast<long>(spec.max_voters)));
  const auto m = static_cast<std::size_t>(rng.between(
      static_cast<long>(spec.min_projects), static_cast<long>(spec.max_projects)));

  if (spec.kind == InstanceKind::Laminar ||
      spec.kind == InstanceKind::LaminarUnitCost) {
    LaminarParams params;
    params.voters = n;
    params.max_depth = spec.max_depth;
    params.max_projects = spec.max_projects;
    params.max_leaf_projects = 3;
    params.unit_cost = spec.kind == InstanceKind::LaminarUnitCost;
    params.cost_denominator = spec.cost_denominator;
    params.unanimous_weight = 2;
    params.max_cost_units = spec.max_cost_units;
    // Unit-cost splits need integral budgets on both sides; k = n or
    // k = n + 1 (room for one unanimous project) admits every split.
    const auto committee = [&] {
      const long n_voters = static_cast<long>(n);
      return rng.chance(1, 2) ? n_voters + rng.between(0, 1) : rng.between(1, 4);
    };
    params.committee_size = committee();
    for (;;) {
      try {
        return generate_laminar(params, rng.next());
      } catch (const InputError &) {
        params.committee_size = committee();
      }
    }
  }

  const auto id = [](char prefix, std::size_t k, std::size_t total) {
    const std::string digits = std::to_string(k);
    const std::size_t width = std::to_string(total).size();
    return std::string(1, prefix) + std::string(width - digits.size(), '0') + digits;
  };
  const bool unit = spec.kind == InstanceKind::UnitCost;
  InstanceBuilder builder;
  long units = 0;
  for (std::size_t j = 0; j < m; ++j) {
    const long k = unit ? spec.cost_denominator : rng.between(1, spec.max_cost_units);
    units += k;
    builder.project(id('c', j + 1, m), Rational(k, spec.cost_denominator));
  }
  builder.budget(unit ? Rational(rng.between(1, static_cast<long>(m)))
                      : Rational(rng.between(1, units), spec.cost_denominator));
  for (std::size_t i = 0; i < n; ++i) {
    std::map<std::string, Rational> u;
    for (std::size_t j = 0; j < m; ++j) {
      Rational value;
      if (spec.kind == InstanceKind::Cardinal)
        value = Rational(rng.between(0, spec.utility_denominator),
                         spec.utility_denominator);
      else
        value = rng.chance(spec.approval_num, spec.approval_den) ? 1 : 0;
      if (!value.is_zero())
        u[id('c', j + 1, m)] = value;
    }
    builder.voter(id('v', i + 1, n), std::move(u));
  }
  builder.description("random instance");
  return builder.build();
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  // splitmix64 finaliser over the combined input
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::optional<Counterexample>
search_counterexample(const GeneratorSpec &spec, Axiom assume, Axiom conclude,
                      std::uint64_t trials, std::uint64_t seed,
                      const CheckOptions &options) {
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng(trial_seed(seed, trial));
    PBInstance instance = random_instance(spec, rng);
    try {
      for (const Bundle &w : enumerate_affordable(instance, options.limits)) {
        if (!check_axiom(instance, w, assume, options).satisfied())
          continue;
        auto verdict = check_axiom(instance, w, conclude, options);
        if (!verdict.satisfied())
          return Counterexample{trial, std::move(instance), w, std::move(verdict)};
      }
    } catch (const PreconditionError &) {
      continue; // outside the domain of one of the axioms
    }
  }
  return std::nullopt;
}

} // namespace pbprop
