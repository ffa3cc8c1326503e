#include "pbprop/rules.hpp"

#include <algorithm>

#include "pbprop/error.hpp"

namespace pbprop {

namespace {

void require_approval(const PBInstance &instance, const char *rule) {
  if (!instance.is_approval())
    throw PreconditionError(std::string(rule) +
                            " is defined for approval instances only");
}

std::vector<Index> supporters(const PBInstance &instance, Index project) {
  std::vector<Index> out;
  for (Index i = 0; i < instance.num_voters(); ++i)
    if (instance.approves(i, project))
      out.push_back(i);
  return out;
}

} // namespace

PhragmenResult phragmen(const PBInstance &instance) {
  require_approval(instance, "Phragmen");
  const std::size_t m = instance.num_projects();
  std::vector<std::vector<Index>> backers(m);
  for (Index j = 0; j < m; ++j)
    backers[j] = supporters(instance, j);

  std::vector<Rational> reset(instance.num_voters()); // time of last payment
  std::vector<bool> selected(m, false);
  Rational spent, now;
  PhragmenResult result;
  auto &trace = result.trace;

  for (;;) {
    // A project's supporters hold sum_i (t - reset_i) at time t.
    std::optional<Rational> best;
    std::vector<Index> tied;
    for (Index j = 0; j < m; ++j) {
      if (selected[j] || backers[j].empty())
        continue;
      Rational owed = instance.cost(j);
      for (Index i : backers[j])
        owed += reset[i];
      Rational t = owed / Rational(static_cast<long>(backers[j].size()));
      if (!best || t < *best) {
        best = t;
        tied.assign(1, j);
      } else if (t == *best) {
        tied.push_back(j);
      }
    }
    if (!best) {
      trace.stop_time = now;
      trace.stop_reason = StopReason::NoAffordableProject;
      break;
    }
    const Index pick = tied.front();
    if (spent + instance.cost(pick) > instance.budget()) {
      trace.stop_time = *best;
      trace.stop_reason = StopReason::BudgetExhausted;
      trace.blocked_project = pick;
      break;
    }
    PhragmenEvent event{*best, pick, {}, tied};
    for (Index i : backers[pick]) {
      event.payments.emplace_back(i, *best - reset[i]);
      reset[i] = *best;
    }
    now = *best;
    spent += instance.cost(pick);
    selected[pick] = true;
    trace.events.push_back(std::move(event));
  }

  std::vector<Index> chosen;
  for (const auto &e : trace.events)
    chosen.push_back(e.project);
  result.bundle = Bundle(std::move(chosen));
  return result;
}

Rational pav_score(const PBInstance &instance, const Bundle &bundle) {
  require_approval(instance, "PAV");
  for (Index j : bundle)
    if (j >= instance.num_projects())
      throw InputError("bundle names a project outside the instance");
  Rational score;
  for (Index i = 0; i < instance.num_voters(); ++i) {
    long hits = 0;
    for (Index j : bundle)
      hits += instance.approves(i, j) ? 1 : 0;
    for (long h = 1; h <= hits; ++h)
      score += Rational(1, h);
  }
  return score;
}

PavResult pav(const PBInstance &instance, bool collect_ties,
              const Limits &limits) {
  require_approval(instance, "PAV");
  const std::size_t m = instance.num_projects();
  const std::size_t n = instance.num_voters();
  if (m > limits.max_pav_projects || m >= 64)
    throw LimitExceeded("PAV enumeration over " + std::to_string(m) +
                        " projects exceeds the cap of " +
                        std::to_string(limits.max_pav_projects));

  // Scores are compared as integers over the common denominator lcm(1..m),
  // and costs over the lcm of their denominators.
  mpz_class scale = 1;
  for (std::size_t h = 2; h <= m; ++h)
    mpz_lcm_ui(scale.get_mpz_t(), scale.get_mpz_t(), h);
  std::vector<mpz_class> harmonic(m + 1);
  for (std::size_t h = 1; h <= m; ++h)
    harmonic[h] = harmonic[h - 1] + scale / static_cast<unsigned long>(h);

  mpz_class denom = 1;
  for (Index j = 0; j < m; ++j)
    mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(),
            instance.cost(j).mpq().get_den_mpz_t());
  std::vector<mpz_class> cost(m);
  for (Index j = 0; j < m; ++j) {
    mpq_class scaled = instance.cost(j).mpq() * denom;
    cost[j] = scaled.get_num();
  }
  mpq_class cap_q = instance.budget().mpq() * denom;
  mpz_class cap;
  mpz_fdiv_q(cap.get_mpz_t(), cap_q.get_num_mpz_t(), cap_q.get_den_mpz_t());

  std::vector<unsigned long long> approvals(n, 0);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j)
      if (instance.approves(i, j))
        approvals[i] |= 1ULL << j;

  mpz_class best = -1;
  unsigned long long best_mask = 0;
  std::vector<unsigned long long> maximisers;
  for_each_subset_canonical(m, [&](unsigned long long mask) {
    mpz_class total = 0;
    for (Index j = 0; j < m; ++j)
      if (mask >> j & 1ULL)
        total += cost[j];
    if (total > cap)
      return true;
    mpz_class score = 0;
    for (Index i = 0; i < n; ++i)
      score += harmonic[static_cast<std::size_t>(
          __builtin_popcountll(mask & approvals[i]))];
    if (score > best) {
      best = score;
      best_mask = mask;
      maximisers.assign(1, mask);
    } else if (score == best && collect_ties) {
      maximisers.push_back(mask);
    }
    return true;
  });

  PavResult result;
  result.bundle = Bundle::from_mask(best_mask);
  result.score = Rational(mpq_class(best, scale));
  if (collect_ties)
    for (auto mask : maximisers)
      result.co_winners.push_back(Bundle::from_mask(mask));
  return result;
}

std::optional<Rational> min_rho(const PBInstance &instance,
                                const std::vector<Rational> &paid,
                                Index project) {
  const std::size_t n = instance.num_voters();
  if (n == 0)
    return std::nullopt;
  const Rational share = instance.budget() / Rational(static_cast<long>(n));

  struct Backer {
    Rational cap, u, breakpoint;
  };
  std::vector<Backer> backers;
  Rational total_cap, total_u;
  for (Index i = 0; i < n; ++i) {
    const Rational &u = instance.utility(i, project);
    if (u.sign() <= 0)
      continue;
    Rational cap = share - paid[i];
    if (cap.sign() < 0)
      throw PreconditionError("voter " + instance.voter_id(i) +
                              " has paid more than l/n");
    backers.push_back({cap, u, cap / u});
    total_cap += cap;
    total_u += u;
  }
  const Rational &cost = instance.cost(project);
  if (total_cap < cost)
    return std::nullopt;

  std::stable_sort(backers.begin(), backers.end(),
                   [](const Backer &a, const Backer &b) {
                     return a.breakpoint < b.breakpoint;
                   });
  // On each linear piece the capped voters contribute their caps and the
  // rest contribute u_i * rho.
  Rational capped;
  for (const auto &b : backers) {
    if (capped + b.breakpoint * total_u >= cost)
      return (cost - capped) / total_u;
    capped += b.cap;
    total_u -= b.u;
  }
  return std::nullopt; // unreachable: total_cap >= cost
}

RuleXResult rule_x(const PBInstance &instance) {
  const std::size_t n = instance.num_voters();
  const std::size_t m = instance.num_projects();
  RuleXResult result;
  if (n == 0)
    return result;
  const Rational share = instance.budget() / Rational(static_cast<long>(n));
  std::vector<Rational> paid(n);
  std::vector<bool> selected(m, false);
  std::vector<Index> chosen;

  for (;;) {
    std::optional<Rational> best;
    std::vector<Index> tied;
    for (Index j = 0; j < m; ++j) {
      if (selected[j])
        continue;
      auto rho = min_rho(instance, paid, j);
      if (!rho)
        continue;
      if (!best || *rho < *best) {
        best = rho;
        tied.assign(1, j);
      } else if (*rho == *best) {
        tied.push_back(j);
      }
    }
    if (!best)
      break;
    const Index pick = tied.front();
    RuleXRound round{*best, pick, {}, tied};
    for (Index i = 0; i < n; ++i) {
      const Rational &u = instance.utility(i, pick);
      if (u.sign() <= 0)
        continue;
      Rational pay = min(share - paid[i], u * *best);
      paid[i] += pay;
      round.payments.emplace_back(i, pay);
    }
    selected[pick] = true;
    chosen.push_back(pick);
    result.trace.rounds.push_back(std::move(round));
  }

  for (Index i = 0; i < n; ++i)
    result.trace.remaining += share - paid[i];
  result.bundle = Bundle(std::move(chosen));
  return result;
}

} // namespace pbprop
