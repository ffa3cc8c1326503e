#include <doctest.h>

#include <algorithm>

#include "pbprop/check.hpp"
#include "pbprop/error.hpp"
#include "pbprop/fixtures.hpp"
#include "pbprop/laminar.hpp"

using namespace pbprop;
namespace fx = pbprop::fixtures;

namespace {

Rational q(const char *s) { return Rational::parse(s); }

// Budgets along the shape common project -> split.
struct Shape {
  Rational top, after, left, right;
};

Shape shape_of(const LaminarNode &root) {
  REQUIRE(root.kind == LaminarNode::Kind::UnanimousProject);
  const auto &split = root.children.at(0);
  REQUIRE(split.kind == LaminarNode::Kind::Split);
  return {root.budget, split.budget, split.children.at(0).budget,
          split.children.at(1).budget};
}

bool has_issue(const ValidationReport &r, const std::string &kind) {
  return std::any_of(r.begin(), r.end(), [&](const auto &i) { return i.kind == kind; });
}

} // namespace

TEST_CASE("recognition reproduces the worked budgets") {
  struct Case {
    PBInstance e;
    Shape want;
  };
  const Case cases[] = {
      {fx::three_voter_laminar(), {10, 9, 6, 3}},
      {fx::lp_not_core(), {q("11/3"), q("8/3"), 2, q("2/3")}},
      {fx::unit_cost_unpriceable(), {4, 3, 2, 1}},
      {fx::expensive_unanimous(), {1, q("3/10"), q("1/5"), q("1/10")}},
  };
  for (const auto &c : cases) {
    const auto root = require_laminar(c.e);
    const auto got = shape_of(root);
    CHECK(got.top == c.want.top);
    CHECK(got.after == c.want.after);
    CHECK(got.left == c.want.left);
    CHECK(got.right == c.want.right);
    CHECK(validate_decomposition(c.e, root).empty());
  }
}

TEST_CASE("unanimous leaves and non-laminar instances") {
  InstanceBuilder b;
  b.budget(2).project("a", 1).project("b", 1).project("c", 1);
  b.approval_voter("v1", {"a", "b", "c"}).approval_voter("v2", {"a", "b", "c"});
  const auto root = require_laminar(b.build());
  CHECK(root.kind == LaminarNode::Kind::UnanimousLeaf);

  // Overlapping approvals without a common project.
  InstanceBuilder o;
  o.budget(2).project("a", 1).project("b", 1).project("c", 1);
  o.approval_voter("v1", {"a", "b"}).approval_voter("v2", {"b", "c"});
  o.approval_voter("v3", {"a", "c"});
  const auto rec = recognize_laminar(o.build());
  CHECK_FALSE(rec.laminar());
  CHECK_FALSE(rec.reason.empty());
  CHECK_THROWS_AS(require_laminar(o.build()), NotLaminarError);

  // Removing the common b leaves two single-voter leaves.
  InstanceBuilder chain;
  chain.budget(2).project("a", 1).project("b", 1).project("c", 1);
  chain.approval_voter("v1", {"a", "b"}).approval_voter("v2", {"b", "c"});
  CHECK(recognize_laminar(chain.build()).laminar());

  // A unanimous profile whose projects cost less than the budget.
  InstanceBuilder cheap;
  cheap.budget(5).project("a", 1).approval_voter("v1", {"a"});
  CHECK_FALSE(recognize_laminar(cheap.build()).laminar());

  CHECK_THROWS_AS(recognize_laminar(fx::four_voter_cardinal()), PreconditionError);
  CHECK_FALSE(recognize_laminar(fx::priceable_not_ejr()).laminar());
}

TEST_CASE("decomposition validation catches tampering") {
  const auto e = fx::three_voter_laminar();
  auto root = require_laminar(e);
  root.children[0].children[0].budget = 5;
  const auto report = validate_decomposition(e, root);
  CHECK(has_issue(report, "disproportional split"));

  auto other = require_laminar(e);
  other.project = e.project_index("c1");
  CHECK_FALSE(validate_decomposition(e, other).empty());
}

TEST_CASE("laminar proportional bundles of the three-voter instance") {
  const auto e = fx::three_voter_laminar();
  std::vector<std::string> names;
  for (const auto &w : laminar_bundles(e))
    names.push_back(format_bundle(e, w));
  CHECK(names == std::vector<std::string>{"{c1,c2,c4,c6}", "{c1,c3,c4,c6}", "{c2,c3,c4,c6}"});
  CHECK(laminar_bundles(e, LeafRule::MaxCardinality).size() == 3);
  // Any subset of {c1,c2,c3} within 6, times any subset of {c4,c5} within 3.
  CHECK(laminar_bundles(e, LeafRule::AnySubset).size() == 7 * 2);

  CHECK(is_laminar_proportional(e, fx::bundle(e, {"c1", "c2", "c4", "c6"})).satisfied());
  const auto missing = is_laminar_proportional(e, fx::bundle(e, {"c1", "c2", "c4"}));
  REQUIRE_FALSE(missing.satisfied());
  CHECK(std::get<TextWitness>(*missing.witness).text.find("c6") != std::string::npos);
  // {c1,c6}: the leaf could still add c2 or c3.
  CHECK_FALSE(is_laminar_proportional(e, fx::bundle(e, {"c1", "c4", "c6"})).satisfied());
  CHECK(is_laminar_proportional(e, fx::bundle(e, {"c1", "c4", "c6"}), LeafRule::AnySubset)
            .satisfied());
}

TEST_CASE("leaf rules differ on uneven costs") {
  InstanceBuilder b;
  b.budget(Rational(3, 2)).project("a", Rational(5, 4)).project("b", Rational(1, 4));
  b.project("c", Rational(3, 2));
  b.approval_voter("v1", {"a", "b", "c"}).approval_voter("v2", {"a", "b", "c"});
  const auto e = b.build();
  const auto only_c = fx::bundle(e, {"c"});
  CHECK(is_laminar_proportional(e, only_c).satisfied());
  CHECK_FALSE(is_laminar_proportional(e, only_c, LeafRule::MaxCardinality).satisfied());
  // {a,b} costs the same and gives everyone two projects.
  CHECK_FALSE(check_core_u_afford(e, only_c).satisfied());
  CHECK(check_core_u_afford(e, fx::bundle(e, {"a", "b"})).satisfied());
}

TEST_CASE("u-affordability and the unanimity pool") {
  const auto e = fx::lp_not_core();
  const auto root = require_laminar(e);
  const Index c = e.project_index("c");
  CHECK(unanimity_pool(root, {0}) == std::vector<Index>{c});
  const std::vector<Index> pool{c};
  CHECK_FALSE(is_u_affordable(e, fx::bundle(e, {"t1", "t2", "t3"}), pool));
  CHECK(is_u_affordable(e, fx::bundle(e, {"c", "t1"}), pool));
  CHECK(is_u_affordable(e, Bundle(), {}));

  const auto w = fx::bundle(e, {"c", "t1", "t2", "t3", "t4", "t5", "t6", "x1", "x2"});
  CHECK(is_laminar_proportional(e, w).satisfied());
  CHECK_FALSE(check_core(e, w).satisfied());
  const auto v = check_core_u_afford(e, w);
  CHECK(v.satisfied());
  CHECK_THROWS_AS(check_core_u_afford(fx::priceable_not_ejr(), Bundle()), NotLaminarError);
}

TEST_CASE("tree-built price systems") {
  const auto e = fx::three_voter_laminar();
  const auto root = require_laminar(e);
  const auto w = fx::bundle(e, {"c1", "c2", "c4", "c6"});

  const auto with_budget = constructive_price_system(e, root, w, Endowment::Budget);
  CHECK(with_budget.budget == 10);
  CHECK(validate_price_system(e, w, with_budget).empty());

  // With b = cost(W) = 8 each voter holds 8/3, but v1 owes 1/3 + 5/2.
  const auto with_cost = constructive_price_system(e, root, w, Endowment::BundleCost);
  CHECK(with_cost.budget == 8);
  CHECK(with_cost.payments[0][e.project_index("c6")] == q("1/3"));
  CHECK(has_issue(validate_price_system(e, w, with_cost), "overspent budget"));

  CHECK_THROWS_AS(constructive_price_system(e, root, fx::bundle(e, {"c1"}), Endowment::Budget),
                  PreconditionError);
}

TEST_CASE("no price system with b = cost(W) exists for some laminar bundles") {
  InstanceBuilder b;
  b.budget(2).project("a", 1).project("x", Rational(3, 5)).project("y", Rational(3, 5));
  b.approval_voter("v1", {"a"}).approval_voter("v2", {"x", "y"});
  const auto e = b.build();
  const auto w = fx::bundle(e, {"a", "x"});
  CHECK(is_laminar_proportional(e, w).satisfied());
  CHECK(check_priceable(e, w).satisfied());
  LinearSystem sys = priceability_system(e, w, BudgetFloor::Zero);
  sys.add_constraint({{0, 1}}, Relation::Equal, cost(e, w));
  CHECK_FALSE(lp_feasible(sys).feasible()); // v1 alone must pay 1 > 4/5
}

TEST_CASE("generated instances are laminar and reproducible") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    LaminarParams p;
    p.voters = 2 + seed % 5;
    p.unit_cost = seed % 2 == 1;
    p.committee_size = static_cast<long>(p.voters);
    const auto e = generate_laminar(p, seed);
    INFO("seed " << seed);
    const auto root = require_laminar(e);
    CHECK(validate_decomposition(e, root).empty());
    CHECK(e.num_projects() <= p.max_projects);
    CHECK(e.num_voters() == p.voters);
    if (p.unit_cost)
      CHECK(e.committee_size() == p.committee_size);
    CHECK(e == generate_laminar(p, seed));
  }
  LaminarParams bad;
  bad.voters = 0;
  CHECK_THROWS_AS(generate_laminar(bad, 1), InputError);
}
