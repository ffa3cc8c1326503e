#include "pbprop/fixtures.hpp"

#include <sstream>

#include "pbprop/check.hpp"
#include "pbprop/laminar.hpp"
#include "pbprop/rules.hpp"

namespace pbprop::fixtures {

namespace {

Rational q(const char *text) { return Rational::parse(text); }

PBInstance laminar_shape(const char *cheap, const char *c6_cost, const char *l,
                         const char *description,
                         std::initializer_list<const char *> costs) {
  InstanceBuilder b;
  b.budget(q(l)).description(description);
  int k = 1;
  for (const char *cost : costs)
    b.project("c" + std::to_string(k++), q(cheap ? cheap : cost));
  b.project("c6", q(c6_cost));
  b.approval_voter("v1", {"c1", "c2", "c3", "c6"});
  b.approval_voter("v2", {"c1", "c2", "c3", "c6"});
  b.approval_voter("v3", {"c4", "c5", "c6"});
  return b.build();
}

std::string rounds_of(const RuleXResult &r) {
  std::ostringstream out;
  for (const auto &round : r.trace.rounds)
    out << round.rho << " ";
  return out.str();
}

std::string status(const AxiomVerdict &v) {
  return v.satisfied() ? "satisfied" : "violated";
}

} // namespace

PBInstance four_voter_cardinal() {
  InstanceBuilder b;
  b.budget(1).description("four voters, cardinal utilities, l = 1");
  b.project("c1", q("0.4")).project("c2", q("0.3"));
  b.project("c3", q("0.7")).project("c4", q("0.35"));
  b.voter("v1", {{"c1", 1}, {"c2", q("0.3")}, {"c3", q("0.1")}});
  b.voter("v2", {{"c1", q("0.7")}, {"c2", q("0.4")}, {"c3", q("0.2")}, {"c4", q("0.4")}});
  b.voter("v3", {{"c1", q("0.1")}, {"c3", q("0.4")}, {"c4", q("0.2")}});
  b.voter("v4", {{"c2", q("0.4")}, {"c3", q("0.4")}, {"c4", 1}});
  return b.build();
}

PBInstance three_voter_laminar() {
  return laminar_shape(nullptr, "1", "10", "laminar instance, l = 10",
                       {"2", "3", "3", "2", "4"});
}

PBInstance expensive_unanimous() {
  return laminar_shape("1/10", "7/10", "1",
                       "cheap split projects and an expensive common one",
                       {"", "", "", "", ""});
}

PBInstance unit_cost_unpriceable() {
  InstanceBuilder b;
  b.budget(4).description("unit costs, k = 4, bundle {c1,c2,c3,c4} not priceable");
  for (const char *c : {"c1", "c2", "c3", "c4", "c5"})
    b.project(c, 1);
  b.approval_voter("v1", {"c1", "c2", "c5"});
  b.approval_voter("v2", {"c1", "c2", "c5"});
  b.approval_voter("v3", {"c3", "c4", "c5"});
  return b.build();
}

PBInstance priceable_not_pjr() {
  InstanceBuilder b;
  b.budget(1).description("priceable bundle that fails PJR");
  for (const char *c : {"t1", "t2", "c1", "c2", "c3"})
    b.project(c, q("1/5"));
  for (const char *s : {"s1", "s2"})
    b.voter(s, {{"t1", q("3/5")}, {"t2", q("3/5")}});
  for (const char *v : {"v1", "v2", "v3"})
    b.approval_voter(v, {"c1", "c2", "c3"});
  return b.build();
}

PBInstance lp_not_core() {
  InstanceBuilder b;
  b.budget(q("11/3")).description("laminar proportional bundle outside the core");
  b.project("c", 1);
  std::vector<std::string> t, x;
  for (int k = 1; k <= 8; ++k) {
    t.push_back("t" + std::to_string(k));
    b.project(t.back(), q("1/3"));
  }
  for (int k = 1; k <= 4; ++k) {
    x.push_back("x" + std::to_string(k));
    b.project(x.back(), q("1/3"));
  }
  t.push_back("c");
  x.push_back("c");
  for (const char *v : {"v1", "v2", "v3"})
    b.approval_voter(v, t);
  b.approval_voter("v4", x);
  return b.build();
}

PBInstance priceable_not_ejr() {
  InstanceBuilder b;
  b.budget(3).description("unit costs, k = 3, priceable bundle {c1,c2,c3} fails EJR");
  for (const char *c : {"c1", "c2", "c3", "c4", "c5", "c6"})
    b.project(c, 1);
  b.approval_voter("v1", {"c1", "c4", "c5", "c6"});
  b.approval_voter("v2", {"c2", "c4", "c5", "c6"});
  b.approval_voter("v3", {"c3", "c4", "c5", "c6"});
  return b.build();
}

const std::vector<Named> &all() {
  static const std::vector<Named> list{
      {"four_voter_cardinal", four_voter_cardinal},
      {"three_voter_laminar", three_voter_laminar},
      {"expensive_unanimous", expensive_unanimous},
      {"unit_cost_unpriceable", unit_cost_unpriceable},
      {"priceable_not_pjr", priceable_not_pjr},
      {"lp_not_core", lp_not_core},
      {"priceable_not_ejr", priceable_not_ejr},
  };
  return list;
}

Bundle bundle(const PBInstance &instance, std::initializer_list<const char *> ids) {
  std::vector<std::string> names(ids.begin(), ids.end());
  return Bundle::from_ids(instance, names);
}

std::vector<FixtureCheck> worked_example_checks() {
  std::vector<FixtureCheck> out;
  auto record = [&](std::string name, bool passed, std::string detail) {
    out.push_back({std::move(name), passed, std::move(detail)});
  };

  {
    const PBInstance e = four_voter_cardinal();
    const PBInstance a = binarize(e, q("3/10"));
    const auto ph = phragmen(a);
    const bool times = ph.trace.events.size() == 2 &&
                       ph.trace.events[0].time == q("1/10") &&
                       ph.trace.events[1].time == q("11/40");
    record("phragmen on the binarized four-voter instance buys c2 at 1/10 and c4 at 11/40",
           ph.bundle == bundle(a, {"c2", "c4"}) && times,
           format_bundle(a, ph.bundle));

    const auto pav_result = pav(a);
    const bool scores = pav_score(a, bundle(a, {"c1", "c4"})) == q("7/2") &&
                        pav_score(a, bundle(a, {"c1", "c2"})) == 4 &&
                        pav_score(a, bundle(a, {"c2", "c3"})) == q("9/2") &&
                        pav_score(a, bundle(a, {"c2", "c4"})) == 4;
    record("pav on the binarized four-voter instance picks {c2,c3} with score 9/2",
           pav_result.bundle == bundle(a, {"c2", "c3"}) && pav_result.score == q("9/2") &&
               scores,
           format_bundle(a, pav_result.bundle) + " score " + pav_result.score.str());

    const auto rx = rule_x(e);
    const auto &rounds = rx.trace.rounds;
    const bool order = rounds.size() == 2 && rounds[0].project == e.project_index("c4") &&
                       rounds[0].rho == q("7/32") &&
                       rounds[1].project == e.project_index("c1") &&
                       rounds[1].rho == q("2/9");
    record("rule x buys c4 at rho 7/32, then c1 at 2/9, leaving 1/4",
           order && rx.trace.remaining == q("1/4"),
           "rho " + rounds_of(rx) + "remaining " + rx.trace.remaining.str());

    const auto v = check_pjr(e, bundle(e, {"c2", "c3"}), false);
    bool witness = false;
    if (!v.satisfied())
      if (const auto *w = std::get_if<CohesionWitness>(&*v.witness))
        witness = w->group == std::vector<Index>{0, 1} &&
                  w->target == bundle(e, {"c1"}) && w->alpha.size() == 1 &&
                  w->alpha[0] == q("7/10") && w->achieved == q("3/5") &&
                  w->demand == q("7/10") && validate_verdict(e, bundle(e, {"c2", "c3"}), v).empty();
    record("pjr fails for {c2,c3}: S={v1,v2}, T={c1}, 3/5 < 7/10", witness, status(v));
  }

  {
    const PBInstance e = three_voter_laminar();
    const auto rec = recognize_laminar(e);
    bool split = false;
    if (rec.laminar() && rec.root->kind == LaminarNode::Kind::UnanimousProject &&
        rec.root->children.size() == 1) {
      const LaminarNode &s = rec.root->children[0];
      if (s.kind == LaminarNode::Kind::Split && s.children.size() == 2) {
        const auto &n1 = s.children[0], &n2 = s.children[1];
        split = n1.budget * Rational(static_cast<long>(n2.voters.size())) ==
                    n2.budget * Rational(static_cast<long>(n1.voters.size())) &&
                n1.voters.size() == 2 && n2.budget == 3;
      }
    }
    record("three-voter instance is laminar with the split 2*3 = 1*6", split,
           rec.laminar() ? "laminar" : rec.reason);
    const auto v = is_laminar_proportional(e, bundle(e, {"c1", "c2", "c4", "c6"}));
    record("{c1,c2,c4,c6} is laminar proportional", v.satisfied(), status(v));
  }

  {
    const PBInstance e = expensive_unanimous();
    const Bundle cheap = bundle(e, {"c1", "c2", "c3", "c4", "c5"});
    const auto ph = phragmen(e);
    const auto rx = rule_x(e);
    const auto v = is_laminar_proportional(e, cheap);
    record("phragmen and rule x skip the expensive common project",
           ph.bundle == cheap && rx.bundle == cheap,
           format_bundle(e, ph.bundle) + " / " + format_bundle(e, rx.bundle));
    record("{c1..c5} is not laminar proportional", !v.satisfied(), status(v));
  }

  {
    const PBInstance e = unit_cost_unpriceable();
    const Bundle w = bundle(e, {"c1", "c2", "c3", "c4"});
    const auto pjr_v = check_pjr(e, w, false);
    const auto ejr_v = check_ejr(e, w, false);
    const auto core_v = check_core(e, w);
    const auto price = check_priceable(e, w);
    const auto lp = is_laminar_proportional(e, w);
    record("unit-cost bundle {c1..c4} satisfies pjr, ejr and core",
           pjr_v.satisfied() && ejr_v.satisfied() && core_v.satisfied(),
           status(pjr_v) + " " + status(ejr_v) + " " + status(core_v));
    record("unit-cost bundle {c1..c4} has no price system",
           !price.satisfied() && std::holds_alternative<InfeasibilityWitness>(*price.witness) &&
               validate_verdict(e, w, price).empty(),
           status(price));
    record("unit-cost bundle {c1..c4} is not laminar proportional", !lp.satisfied(),
           status(lp));
  }

  {
    const PBInstance e = priceable_not_pjr();
    const Bundle w = bundle(e, {"t2", "c1", "c2", "c3"});
    const auto price = check_priceable(e, w);
    record("{t2,c1,c2,c3} is priceable with a checked certificate",
           price.satisfied() && price.certificate &&
               validate_price_system(e, w, *price.certificate).empty(),
           status(price));

    // The hand-picked alpha = 2/5 on both t-projects.
    CohesionWitness mine{{e.voter_index("s1"), e.voter_index("s2")},
                         bundle(e, {"t1", "t2"}),
                         {q("2/5"), q("2/5")},
                         q("4/5"),
                         q("3/5")};
    const auto pjr_v = check_pjr(e, w, false);
    record("{t2,c1,c2,c3} fails pjr: 3/5 < 4/5 for S={s1,s2}, T={t1,t2}",
           !pjr_v.satisfied() && validate_cohesion(e, w, Axiom::Pjr, mine).empty() &&
               validate_verdict(e, w, pjr_v).empty(),
           status(pjr_v));
  }

  {
    const PBInstance e = lp_not_core();
    const Bundle w = bundle(e, {"c", "t1", "t2", "t3", "t4", "t5", "t6", "x1", "x2"});
    const auto core_v = check_core(e, w);
    bool witness = false;
    if (!core_v.satisfied())
      if (const auto *cw = std::get_if<CoreWitness>(&*core_v.witness))
        witness = cw->group == std::vector<Index>{0, 1, 2} &&
                  cw->target == bundle(e, {"t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8"});
    record("laminar proportional bundle is blocked by S={v1,v2,v3}, T={t1..t8}", witness,
           status(core_v));
    const auto ua = check_core_u_afford(e, w);
    const auto lp = is_laminar_proportional(e, w);
    record("the same bundle is in the u-affordable core and laminar proportional",
           ua.satisfied() && lp.satisfied(), status(ua) + " " + status(lp));
  }

  {
    const PBInstance e = priceable_not_ejr();
    const Bundle w = bundle(e, {"c1", "c2", "c3"});
    const auto price = check_priceable(e, w);
    const auto ejr_v = check_ejr(e, w, false);
    const auto core_v = check_core(e, w);
    record("priceable {c1,c2,c3} fails ejr and core",
           price.satisfied() && !ejr_v.satisfied() && !core_v.satisfied(),
           status(price) + " " + status(ejr_v) + " " + status(core_v));
  }
  return out;
}

} // namespace pbprop::fixtures
