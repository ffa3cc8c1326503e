#include <doctest.h>

#include "pbprop/axioms.hpp"
#include "pbprop/error.hpp"
#include "pbprop/fixtures.hpp"
#include "pbprop/rules.hpp"

using namespace pbprop;
namespace fx = pbprop::fixtures;

namespace {

Rational q(const char *s) { return Rational::parse(s); }

} // namespace

TEST_CASE("phragmen on the binarized four-voter instance") {
  const auto e = binarize(fx::four_voter_cardinal(), q("3/10"));
  const auto r = phragmen(e);
  CHECK(format_bundle(e, r.bundle) == "{c2,c4}");
  REQUIRE(r.trace.events.size() == 2);
  CHECK(r.trace.events[0].time == q("1/10"));
  CHECK(r.trace.events[1].time == q("11/40"));
  // After c4, v1 holds 7/40 and v3 holds 11/40; c1 would be bought at 31/80
  // and overshoot the budget.
  CHECK(r.trace.stop_reason == StopReason::BudgetExhausted);
  CHECK(r.trace.stop_time == q("31/80"));
  CHECK(r.trace.blocked_project == e.project_index("c1"));
  // Each supporter pays its whole balance.
  Rational paid;
  for (const auto &[voter, amount] : r.trace.events[1].payments)
    paid += amount;
  CHECK(paid == q("0.35"));
}

TEST_CASE("phragmen buys the cheap projects before the common one") {
  const auto e = fx::expensive_unanimous();
  const auto r = phragmen(e);
  CHECK(format_bundle(e, r.bundle) == "{c1,c2,c3,c4,c5}");
  std::vector<Rational> times;
  for (const auto &ev : r.trace.events)
    times.push_back(ev.time);
  CHECK(times == std::vector<Rational>{q("0.05"), q("0.1"), q("0.1"), q("0.15"), q("0.2")});
  // c2, c3 (v1, v2) and c4, c5 (v3) become affordable together;
  // canonical order buys c2 first and the tie is reported.
  CHECK(r.trace.events[1].project == e.project_index("c2"));
  CHECK(format_bundle(e, Bundle(r.trace.events[1].tied)) == "{c2,c3,c4,c5}");
  CHECK(r.trace.blocked_project == e.project_index("c6"));
  CHECK(r.trace.stop_time == q("2/5"));

  // Read as a price system, the run gives b = 3 * 2/5 and supports W.
  const auto ps = price_system_from_phragmen(e, r.trace);
  CHECK(ps.budget == q("6/5"));
  CHECK(validate_price_system(e, r.bundle, ps).empty());
}

TEST_CASE("phragmen stops when nothing is left to buy") {
  InstanceBuilder b;
  b.budget(10).project("a", 1).project("b", 2).project("c", 5);
  b.approval_voter("v1", {"a", "b"}).approval_voter("v2", {"b"});
  const auto e = b.build();
  const auto r = phragmen(e);
  CHECK(r.bundle.size() == 2); // c has no supporter
  CHECK(r.trace.stop_reason == StopReason::NoAffordableProject);
  CHECK_FALSE(r.trace.blocked_project);
  CHECK(r.trace.stop_time == r.trace.events.back().time);
}

TEST_CASE("approval rules refuse cardinal utilities") {
  const auto e = fx::four_voter_cardinal();
  CHECK_THROWS_AS(phragmen(e), PreconditionError);
  CHECK_THROWS_AS(pav(e), PreconditionError);
  CHECK_THROWS_AS(pav_score(e, Bundle()), PreconditionError);
}

TEST_CASE("pav scores and winner on the binarized four-voter instance") {
  const auto e = binarize(fx::four_voter_cardinal(), q("3/10"));
  CHECK(pav_score(e, fx::bundle(e, {"c1", "c4"})) == q("7/2"));
  CHECK(pav_score(e, fx::bundle(e, {"c1", "c2"})) == 4);
  CHECK(pav_score(e, fx::bundle(e, {"c2", "c3"})) == q("9/2"));
  CHECK(pav_score(e, fx::bundle(e, {"c2", "c4"})) == 4);
  CHECK(pav_score(e, Bundle()) == 0);
  const auto r = pav(e, true);
  CHECK(format_bundle(e, r.bundle) == "{c2,c3}");
  CHECK(r.score == q("9/2"));
  CHECK(r.co_winners == std::vector<Bundle>{r.bundle});
}

TEST_CASE("pav reports every co-winner and picks the canonical first") {
  InstanceBuilder b;
  b.budget(1).project("a", 1).project("b", 1);
  b.approval_voter("v1", {"a"}).approval_voter("v2", {"b"});
  const auto e = b.build();
  const auto r = pav(e, true);
  CHECK(format_bundle(e, r.bundle) == "{a}");
  CHECK(r.co_winners.size() == 2);
  CHECK(pav(e).co_winners.empty());
}

TEST_CASE("pav enforces its enumeration cap") {
  InstanceBuilder b;
  for (int k = 0; k < 6; ++k)
    b.project("c" + std::to_string(k), 1);
  b.approval_voter("v", {"c0"});
  Limits tight;
  tight.max_pav_projects = 5;
  CHECK_THROWS_AS(pav(b.build(), false, tight), LimitExceeded);
}

TEST_CASE("rule x on the four-voter instance") {
  const auto e = fx::four_voter_cardinal();
  const std::vector<Rational> nothing(4);
  CHECK(min_rho(e, nothing, e.project_index("c4")) == q("7/32"));
  const auto r = rule_x(e);
  REQUIRE(r.trace.rounds.size() == 2);
  CHECK(r.trace.rounds[0].project == e.project_index("c4"));
  CHECK(r.trace.rounds[0].rho == q("7/32"));
  CHECK(r.trace.rounds[1].project == e.project_index("c1"));
  CHECK(r.trace.rounds[1].rho == q("2/9"));
  CHECK(r.trace.remaining == q("1/4"));
  CHECK(format_bundle(e, r.bundle) == "{c1,c4}");
}

TEST_CASE("rule x never charges a voter for a project of zero utility") {
  for (const auto &f : fx::all()) {
    const auto e = f.build();
    const auto r = rule_x(e);
    for (const auto &round : r.trace.rounds)
      for (const auto &[voter, amount] : round.payments) {
        INFO(f.name);
        CHECK(amount.sign() > 0);
        CHECK(e.approves(voter, round.project));
      }
  }
}

TEST_CASE("min_rho is absent when supporters cannot cover the cost") {
  InstanceBuilder b;
  b.budget(1).project("a", 1).project("b", Rational(1, 2));
  b.approval_voter("v1", {"a", "b"}).approval_voter("v2", {});
  const auto e = b.build();
  CHECK_FALSE(min_rho(e, {0, 0}, e.project_index("a")));
  CHECK(min_rho(e, {0, 0}, e.project_index("b")) == q("1/2"));
}

TEST_CASE("rule x skips the expensive common project") {
  const auto e = fx::expensive_unanimous();
  const auto r = rule_x(e);
  CHECK(format_bundle(e, r.bundle) == "{c1,c2,c3,c4,c5}");
  CHECK(r.trace.rounds.front().rho == q("1/20"));
}
