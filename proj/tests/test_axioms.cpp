#include <doctest.h>

#include <algorithm>

#include "pbprop/check.hpp"
#include "pbprop/error.hpp"
#include "pbprop/fixtures.hpp"

using namespace pbprop;
namespace fx = pbprop::fixtures;

namespace {

Rational q(const char *s) { return Rational::parse(s); }

bool has_issue(const ValidationReport &r, const std::string &kind) {
  return std::any_of(r.begin(), r.end(), [&](const auto &i) { return i.kind == kind; });
}

} // namespace

TEST_CASE("axiom ids round-trip") {
  for (Axiom a : all_axioms())
    CHECK(parse_axiom(axiom_id(a)) == a);
  CHECK_FALSE(parse_axiom("jr"));
  CHECK(all_axioms().size() == 10);
}

TEST_CASE("pjr witness on the four-voter instance") {
  const auto e = fx::four_voter_cardinal();
  const auto w = fx::bundle(e, {"c2", "c3"});
  const auto v = check_pjr(e, w, false);
  REQUIRE_FALSE(v.satisfied());
  const auto &x = std::get<CohesionWitness>(*v.witness);
  CHECK(x.group == std::vector<Index>{0, 1});
  CHECK(format_bundle(e, x.target) == "{c1}");
  CHECK(x.alpha == std::vector<Rational>{q("7/10")});
  CHECK(x.achieved == q("3/5"));
  CHECK(validate_verdict(e, w, v).empty());

  // The same pair also breaks EJR (best member gets 1/2) and the core.
  CHECK_FALSE(check_ejr(e, w, false).satisfied());
  CHECK_FALSE(check_core(e, w).satisfied());
}

TEST_CASE("tampered cohesion witnesses are caught") {
  const auto e = fx::four_voter_cardinal();
  const auto w = fx::bundle(e, {"c2", "c3"});
  CohesionWitness good{{0, 1}, fx::bundle(e, {"c1"}), {q("7/10")}, q("7/10"), q("3/5")};
  CHECK(validate_cohesion(e, w, Axiom::Pjr, good).empty());

  auto greedy = good;
  greedy.alpha = {q("9/10")}; // v2 values c1 at 7/10 only
  greedy.demand = q("9/10");
  CHECK_FALSE(validate_cohesion(e, w, Axiom::Pjr, greedy).empty());

  auto alone = good;
  alone.group = {0}; // one voter cannot afford c1
  CHECK_FALSE(validate_cohesion(e, w, Axiom::Pjr, alone).empty());

  // Up to one: adding c1 gives 3/5 + 1 > 7/10.
  CHECK_FALSE(validate_cohesion(e, w, Axiom::PjrUpToOne, good).empty());
}

TEST_CASE("unit-cost bundle with every cohesion property but no price system") {
  const auto e = fx::unit_cost_unpriceable();
  const auto w = fx::bundle(e, {"c1", "c2", "c3", "c4"});
  CHECK(check_core(e, w).satisfied());
  CHECK(check_ejr(e, w, false).satisfied());
  CHECK(check_pjr(e, w, false).satisfied());
  CHECK(check_mwv_pjr(e, w).satisfied());
  const auto v = check_priceable(e, w);
  REQUIRE_FALSE(v.satisfied());
  CHECK(std::holds_alternative<InfeasibilityWitness>(*v.witness));
  CHECK(validate_verdict(e, w, v).empty());
}

TEST_CASE("priceable bundle that fails pjr") {
  const auto e = fx::priceable_not_pjr();
  const auto w = fx::bundle(e, {"t2", "c1", "c2", "c3"});

  // The hand-built system: b = 1, s-voters pay 1/10 for t2, v-voters 1/15
  // for each c.
  PriceSystem ps{1, std::vector<std::vector<Rational>>(5, std::vector<Rational>(5))};
  for (const char *s : {"s1", "s2"})
    ps.payments[e.voter_index(s)][e.project_index("t2")] = q("1/10");
  for (const char *v : {"v1", "v2", "v3"})
    for (const char *c : {"c1", "c2", "c3"})
      ps.payments[e.voter_index(v)][e.project_index(c)] = q("1/15");
  CHECK(validate_price_system(e, w, ps, BudgetFloor::One).empty());

  const auto v = check_priceable(e, w, BudgetFloor::One);
  REQUIRE(v.satisfied());
  CHECK(validate_price_system(e, w, *v.certificate, BudgetFloor::One).empty());
  CHECK_FALSE(check_pjr(e, w, false).satisfied());
}

TEST_CASE("price-system validation names each defect") {
  const auto e = fx::priceable_not_pjr();
  const auto w = fx::bundle(e, {"t2", "c1", "c2", "c3"});
  const auto base = *check_priceable(e, w).certificate;
  const Index s1 = e.voter_index("s1"), v1 = e.voter_index("v1");
  const Index t1 = e.project_index("t1"), t2 = e.project_index("t2"),
              c1 = e.project_index("c1");

  auto ps = base;
  ps.payments[s1][t2] += 1;
  CHECK(has_issue(validate_price_system(e, w, ps), "overspent budget"));
  CHECK(has_issue(validate_price_system(e, w, ps), "funding mismatch"));

  ps = base;
  ps.payments[v1][t2] = q("1/100");
  CHECK(has_issue(validate_price_system(e, w, ps), "payment without utility"));

  ps = base;
  ps.payments[s1][t1] = q("1/100");
  CHECK(has_issue(validate_price_system(e, w, ps), "payment outside bundle"));

  ps = base;
  ps.payments[v1][c1] = Rational(-1, 100);
  CHECK(has_issue(validate_price_system(e, w, ps), "negative payment"));

  ps = base;
  ps.payments.pop_back();
  CHECK(has_issue(validate_price_system(e, w, ps), "malformed"));

  ps = base;
  ps.budget = 0;
  CHECK_FALSE(validate_price_system(e, w, ps).empty());
  ps.budget = q("1/2");
  if (validate_price_system(e, w, ps).empty())
    CHECK(has_issue(validate_price_system(e, w, ps, BudgetFloor::One), "budget below floor"));

  // Too generous a budget leaves t1 affordable for s1 and s2.
  ps = base;
  ps.budget = 5;
  CHECK(has_issue(validate_price_system(e, w, ps), "affordable outside bundle"));
}

TEST_CASE("the budget floor matters for tiny bundles") {
  InstanceBuilder b;
  b.budget(1).project("a", Rational(1, 10));
  b.approval_voter("v1", {"a"}).approval_voter("v2", {});
  const auto e = b.build();
  // With b = 0 nothing is ever affordable, so the empty bundle is
  // priceable; with b >= 1, v1 alone holds 1/2 >= cost(a).
  CHECK(check_priceable(e, Bundle(), BudgetFloor::Zero).satisfied());
  const auto v = check_priceable(e, Bundle(), BudgetFloor::One);
  CHECK_FALSE(v.satisfied());
  CHECK(validate_verdict(e, Bundle(), v).empty());
}

TEST_CASE("priceable bundle outside ejr and the core") {
  const auto e = fx::priceable_not_ejr();
  const auto w = fx::bundle(e, {"c1", "c2", "c3"});
  CHECK(check_priceable(e, w, BudgetFloor::One).satisfied());
  const auto ejr = check_ejr(e, w, false);
  REQUIRE_FALSE(ejr.satisfied());
  // The first witness in canonical order: two voters share c4 and c5.
  const auto &x = std::get<CohesionWitness>(*ejr.witness);
  CHECK(format_voters(e, x.group) == "{v1,v2}");
  CHECK(format_bundle(e, x.target) == "{c4,c5}");
  CHECK(x.demand == 2);
  CHECK(x.achieved == 1);
  // The whole electorate is 3-cohesive over {c4,c5,c6}.
  CohesionWitness all{{0, 1, 2}, fx::bundle(e, {"c4", "c5", "c6"}), {1, 1, 1}, 3, 1};
  CHECK(validate_cohesion(e, w, Axiom::Ejr, all).empty());
  CHECK_FALSE(check_core(e, w).satisfied());
  // Every member already has one approved winner, so adding one project
  // reaches 2 < 3: EJR up to one fails as well.
  CHECK_FALSE(check_ejr(e, w, true).satisfied());
  // Three common approvals are served by three winners in the union:
  // the unit-cost PJR test passes.
  CHECK(check_mwv_pjr(e, w).satisfied());
}

TEST_CASE("unit-cost pjr needs a unit-cost instance") {
  CHECK_THROWS_AS(check_mwv_pjr(fx::three_voter_laminar(), Bundle()), PreconditionError);
  const auto e = fx::unit_cost_unpriceable();
  const auto v = check_mwv_pjr(e, fx::bundle(e, {"c3", "c4"}));
  REQUIRE_FALSE(v.satisfied());
  const auto &x = std::get<CommitteeWitness>(*v.witness);
  CHECK(x.ell == 1); // v1 alone deserves one of c1, c2, c5
  CHECK(x.group == std::vector<Index>{0});
  CHECK(validate_verdict(e, fx::bundle(e, {"c3", "c4"}), v).empty());
}

TEST_CASE("strong budget pjr") {
  const auto e = fx::three_voter_laminar();
  // v3 alone deserves 10/3 and shares c4, c5, c6 (cost 7) with itself.
  const auto w = fx::bundle(e, {"c1", "c2", "c3", "c6"});
  const auto v = check_strong_bpjr(e, w);
  REQUIRE_FALSE(v.satisfied());
  CHECK(validate_verdict(e, w, v).empty());
  // The laminar proportional bundle gives v3 only c4 and c6 (cost 3).
  CHECK_FALSE(check_strong_bpjr(e, fx::bundle(e, {"c1", "c2", "c4", "c6"})).satisfied());
  InstanceBuilder b;
  b.budget(2).project("a", 1).project("b", 1);
  b.approval_voter("v1", {"a"}).approval_voter("v2", {"b"});
  const auto split = b.build();
  CHECK(check_strong_bpjr(split, fx::bundle(split, {"a", "b"})).satisfied());
  CHECK_FALSE(check_strong_bpjr(split, fx::bundle(split, {"a"})).satisfied());
  CHECK_THROWS_AS(check_strong_bpjr(fx::four_voter_cardinal(), Bundle()), PreconditionError);
}

TEST_CASE("check_axiom dispatches and every witness revalidates") {
  for (const auto &f : fx::all()) {
    const auto e = f.build();
    const auto w = phragmen(binarize(e, 1)).bundle;
    for (Axiom a : all_axioms()) {
      INFO(f.name << " " << axiom_id(a));
      try {
        const auto v = check_axiom(e, w, a);
        CHECK(v.axiom == a);
        CHECK(v.witness.has_value() == !v.satisfied());
        CHECK(validate_verdict(e, w, v).empty());
      } catch (const PreconditionError &) {
      }
    }
  }
}

TEST_CASE("search caps are enforced") {
  const auto e = fx::lp_not_core();
  Limits tight;
  tight.max_projects = 10;
  CHECK_THROWS_AS(check_core(e, Bundle(), tight), LimitExceeded);
}
