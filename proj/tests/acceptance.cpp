// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "pbprop/check.hpp"
#include "pbprop/error.hpp"
#include "pbprop/fixtures.hpp"
#include "pbprop/oracle.hpp"

using namespace pbprop;
namespace fx = pbprop::fixtures;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr std::uint64_t kTrials = 1000;

struct Outcome {
  bool passed = true;
  std::size_t failing = 0;
  std::string detail; // first failure
  void fail(const std::string &why) {
    if (passed)
      detail = why;
    passed = false;
    ++failing;
  }
};

int failures = 0;

void report(const char *id, const char *what, const std::function<Outcome()> &run) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception &e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s  %-5s %s (%.2fs)%s%s\n", o.passed ? "PASS" : "FAIL", id, what, secs,
              o.detail.empty() ? "" : "  -- ", o.detail.c_str());
  std::fflush(stdout);
  failures += !o.passed;
}

Outcome from_checks(std::initializer_list<const char *> prefixes) {
  Outcome o;
  for (const auto &c : fx::worked_example_checks())
    for (const char *p : prefixes)
      if (c.name.rfind(p, 0) == 0) {
        if (!c.passed)
          o.fail(c.name + " [" + c.detail + "]");
        if (o.detail.empty() && o.passed)
          o.detail.clear();
      }
  return o;
}

GeneratorSpec spec(InstanceKind kind, std::size_t max_n = 7, std::size_t max_m = 7) {
  GeneratorSpec s;
  s.kind = kind;
  s.min_voters = 2;
  s.max_voters = max_n;
  s.min_projects = 2;
  s.max_projects = max_m;
  return s;
}

// A few affordable bundles per instance: the rule outputs callers add,
// plus random draws.
std::vector<Bundle> sample_bundles(const PBInstance &instance, Rng &rng, std::size_t count) {
  const auto all = enumerate_affordable(instance);
  std::vector<Bundle> out;
  for (std::size_t k = 0; k < count && !all.empty(); ++k)
    out.push_back(all[rng.below(all.size())]);
  return out;
}

std::string where(std::uint64_t trial, const PBInstance &e, const Bundle &w) {
  return "trial " + std::to_string(trial) + ", W=" + format_bundle(e, w);
}

bool has_kind(const LaminarNode &node, LaminarNode::Kind kind) {
  if (node.kind == kind)
    return true;
  for (const auto &child : node.children)
    if (has_kind(child, kind))
      return true;
  return false;
}

// Runs `body` on kTrials instances of `kind`.
Outcome suite(InstanceKind kind, std::uint64_t salt,
              const std::function<void(std::uint64_t, const PBInstance &, Rng &, Outcome &)> &body,
              std::size_t max_n = 7, std::size_t max_m = 7) {
  Outcome o;
  const auto s = spec(kind, max_n, max_m);
  for (std::uint64_t t = 0; t < kTrials; ++t) {
    Rng rng(trial_seed(kSeed + salt, t));
    const PBInstance e = random_instance(s, rng);
    body(t, e, rng, o);
  }
  if (o.passed)
    o.detail = std::to_string(kTrials) + " instances";
  else
    o.detail += "; " + std::to_string(o.failing) + " failing cases in all";
  if (o.passed && (kind == InstanceKind::Laminar || kind == InstanceKind::LaminarUnitCost)) {
    std::size_t unanimous = 0, split = 0;
    for (std::uint64_t t = 0; t < kTrials; ++t) {
      Rng rng(trial_seed(kSeed + salt, t));
      const auto root = require_laminar(random_instance(s, rng));
      unanimous += has_kind(root, LaminarNode::Kind::UnanimousProject);
      split += has_kind(root, LaminarNode::Kind::Split);
    }
    o.detail += ", " + std::to_string(unanimous) + " with a unanimous project, " +
                std::to_string(split) + " with a split";
  }
  return o;
}

} // namespace

int main() {
  report("1", "four-voter instance: phragmen, pav and rule x reproduce the worked example", [] {
    return from_checks({"phragmen on the binarized", "pav on the binarized", "rule x buys"});
  });
  report("2", "pjr witness S={v1,v2}, T={c1}, alpha 7/10, 3/5 < 7/10",
         [] { return from_checks({"pjr fails for {c2,c3}"}); });
  report("3", "laminar recognition with split 2*3 = 1*6 and {c1,c2,c4,c6} laminar proportional",
         [] { return from_checks({"three-voter instance", "{c1,c2,c4,c6}"}); });
  report("4", "expensive common project: phragmen = rule x = {c1..c5}, not laminar proportional",
         [] { return from_checks({"phragmen and rule x skip", "{c1..c5}"}); });
  report("5", "unit-cost {c1..c4}: pjr, ejr, core hold; not priceable; not laminar proportional",
         [] { return from_checks({"unit-cost bundle"}); });
  report("6", "{t2,c1,c2,c3}: priceable with certificate, pjr fails 3/5 < 4/5",
         [] { return from_checks({"{t2,c1,c2,c3}"}); });
  report("7", "laminar bundle blocked in the core, kept by the u-affordable core",
         [] { return from_checks({"laminar proportional bundle is blocked", "the same bundle"}); });
  report("8", "priceable {c1,c2,c3} fails ejr and core",
         [] { return from_checks({"priceable {c1,c2,c3}"}); });

  report("9a", "ejr and ejr up to one coincide on unit-cost instances", [] {
    return suite(InstanceKind::UnitCost, 1, [](auto t, const PBInstance &e, Rng &rng, Outcome &o) {
      for (const auto &w : sample_bundles(e, rng, 4))
        if (check_ejr(e, w, false).satisfied() != check_ejr(e, w, true).satisfied())
          o.fail(where(t, e, w));
    });
  });
  report("9b", "pjr and unit-cost pjr coincide on unit-cost instances", [] {
    return suite(InstanceKind::UnitCost, 2, [](auto t, const PBInstance &e, Rng &rng, Outcome &o) {
      for (const auto &w : sample_bundles(e, rng, 4))
        if (check_pjr(e, w, false).satisfied() != check_mwv_pjr(e, w).satisfied())
          o.fail(where(t, e, w));
    });
  });
  report("9c", "ejr implies pjr and ejr up to one implies pjr up to one", [] {
    return suite(InstanceKind::Cardinal, 3, [](auto t, const PBInstance &e, Rng &rng, Outcome &o) {
      for (const auto &w : sample_bundles(e, rng, 4)) {
        if (check_ejr(e, w, false).satisfied() && !check_pjr(e, w, false).satisfied())
          o.fail("ejr without pjr, " + where(t, e, w));
        if (check_ejr(e, w, true).satisfied() && !check_pjr(e, w, true).satisfied())
          o.fail("ejr1 without pjr1, " + where(t, e, w));
      }
    });
  });
  report("9d", "every phragmen output satisfies pjr and is priceable", [] {
    return suite(InstanceKind::Approval, 4, [](auto t, const PBInstance &e, Rng &, Outcome &o) {
      const auto r = phragmen(e);
      if (!check_pjr(e, r.bundle, false).satisfied())
        o.fail("pjr, " + where(t, e, r.bundle));
      const auto price = check_priceable(e, r.bundle);
      if (!price.satisfied() || !validate_price_system(e, r.bundle, *price.certificate).empty())
        o.fail("priceable, " + where(t, e, r.bundle));
      if (!validate_price_system(e, r.bundle, price_system_from_phragmen(e, r.trace)).empty())
        o.fail("price system from the run, " + where(t, e, r.bundle));
    });
  });
  report("9e", "every rule x output satisfies ejr and pjr up to one", [] {
    return suite(InstanceKind::Cardinal, 5, [](auto t, const PBInstance &e, Rng &, Outcome &o) {
      const auto r = rule_x(e);
      if (!check_ejr(e, r.bundle, true).satisfied())
        o.fail("ejr1, " + where(t, e, r.bundle));
      if (!check_pjr(e, r.bundle, true).satisfied())
        o.fail("pjr1, " + where(t, e, r.bundle));
    });
  });
  report("9f.1", "every laminar proportional bundle is priceable", [] {
    return suite(InstanceKind::Laminar, 6, [](auto t, const PBInstance &e, Rng &, Outcome &o) {
      for (const auto &w : laminar_bundles(e))
        if (!check_priceable(e, w).satisfied())
          o.fail(where(t, e, w));
    });
  });
  report("9f.2", "the tree-built price system with b = cost(W) validates", [] {
    std::size_t impossible = 0;
    Outcome o = suite(InstanceKind::Laminar, 6, [&](auto t, const PBInstance &e, Rng &, Outcome &o) {
      const auto root = require_laminar(e);
      for (const auto &w : laminar_bundles(e)) {
        const auto issues =
            validate_price_system(e, w, constructive_price_system(e, root, w, Endowment::BundleCost));
        if (issues.empty())
          continue;
        o.fail(where(t, e, w) + ": " + issues.front().kind + " (" + issues.front().message + ")");
        // Is any price system with this b possible?
        LinearSystem sys = priceability_system(e, w, BudgetFloor::Zero);
        sys.add_constraint({{0, 1}}, Relation::Equal, cost(e, w), "b = cost(W)");
        impossible += !lp_feasible(sys).feasible();
      }
    });
    if (!o.passed)
      o.detail += "; in " + std::to_string(impossible) + " of them no price system with b = cost(W) exists";
    return o;
  });
  report("9f.3", "the tree-built price system with b = l validates (supplementary)", [] {
    return suite(InstanceKind::Laminar, 6, [](auto t, const PBInstance &e, Rng &, Outcome &o) {
      const auto root = require_laminar(e);
      for (const auto &w : laminar_bundles(e)) {
        const auto issues =
            validate_price_system(e, w, constructive_price_system(e, root, w, Endowment::Budget));
        if (!issues.empty())
          o.fail(where(t, e, w) + ": " + issues.front().kind);
      }
    });
  });
  report("9g", "on laminar unit-cost instances laminar bundles and phragmen are in the core and ejr", [] {
    return suite(InstanceKind::LaminarUnitCost, 7, [](auto t, const PBInstance &e, Rng &, Outcome &o) {
      auto bundles = laminar_bundles(e);
      bundles.push_back(phragmen(e).bundle);
      for (const auto &w : bundles) {
        if (!check_core(e, w).satisfied())
          o.fail("core, " + where(t, e, w));
        if (!check_ejr(e, w, false).satisfied())
          o.fail("ejr, " + where(t, e, w));
      }
    });
  });
  report("9h", "every laminar proportional bundle is in the u-affordable core", [] {
    return suite(InstanceKind::Laminar, 8, [](auto t, const PBInstance &e, Rng &, Outcome &o) {
      for (const auto &w : laminar_bundles(e))
        if (!check_core_u_afford(e, w).satisfied())
          o.fail(where(t, e, w));
    });
  });

  report("9h.2", "with maximum-cardinality leaves every such bundle is in the u-affordable core (supplementary)", [] {
    return suite(InstanceKind::Laminar, 8, [](auto t, const PBInstance &e, Rng &, Outcome &o) {
      for (const auto &w : laminar_bundles(e, LeafRule::MaxCardinality))
        if (!check_core_u_afford(e, w).satisfied())
          o.fail(where(t, e, w));
    });
  });

  report("10", "brute-force definitions agree with every checker; pav is the best affordable bundle", [] {
    Outcome o;
    const InstanceKind kinds[] = {InstanceKind::Approval, InstanceKind::Cardinal,
                                  InstanceKind::UnitCost, InstanceKind::Laminar,
                                  InstanceKind::LaminarUnitCost};
    std::size_t comparisons = 0;
    for (std::uint64_t t = 0; t < kTrials && o.passed; ++t) {
      Rng rng(trial_seed(kSeed + 10, t));
      const auto s = spec(kinds[t % 5], 5, 5);
      const PBInstance e = random_instance(s, rng);
      if (e.num_projects() > 8 || e.num_voters() > 8)
        continue;
      const auto all = enumerate_affordable(e);
      const Bundle w = all[rng.below(all.size())];
      for (Axiom a : all_axioms()) {
        bool skip = false;
        AxiomVerdict mine, theirs;
        try {
          mine = check_axiom(e, w, a);
        } catch (const PreconditionError &) {
          skip = true;
        }
        bool oracle_skip = false;
        try {
          theirs = oracle_axiom(e, w, a);
        } catch (const PreconditionError &) {
          oracle_skip = true;
        }
        if (skip != oracle_skip) {
          o.fail("domain mismatch on " + std::string(axiom_id(a)) + ", " + where(t, e, w));
          continue;
        }
        if (skip)
          continue;
        ++comparisons;
        if (mine.status != theirs.status)
          o.fail(std::string(axiom_id(a)) + ", " + where(t, e, w));
        else if (!validate_verdict(e, w, mine).empty())
          o.fail("witness of " + std::string(axiom_id(a)) + ", " + where(t, e, w));
        if (a == Axiom::LaminarProportional)
          for (LeafRule rule : {LeafRule::AnySubset, LeafRule::MaxCardinality}) {
            ++comparisons;
            CheckOptions c;
            c.leaf_rule = rule;
            OracleOptions oc;
            oc.leaf_rule = rule;
            if (check_axiom(e, w, a, c).status != oracle_axiom(e, w, a, oc).status)
              o.fail("laminarprop under another leaf rule, " + where(t, e, w));
          }
        if (a == Axiom::Priceable) {
          ++comparisons;
          CheckOptions c;
          c.floor = BudgetFloor::One;
          OracleOptions oc;
          oc.floor = BudgetFloor::One;
          if (check_axiom(e, w, a, c).status != oracle_axiom(e, w, a, oc).status)
            o.fail("priceable with b >= 1, " + where(t, e, w));
        }
      }
      if (e.is_approval()) {
        Rational best = -1;
        for (const auto &b : all)
          best = max(best, pav_score(e, b));
        const auto p = pav(e);
        if (p.score != best || pav_score(e, p.bundle) != best)
          o.fail("pav, trial " + std::to_string(t));
      }
    }
    if (o.passed)
      o.detail = std::to_string(kTrials) + " pairs, " + std::to_string(comparisons) + " verdicts";
    return o;
  });
  report("11", "every worked example replays", [] {
    Outcome o;
    std::size_t n = 0;
    for (const auto &c : fx::worked_example_checks()) {
      ++n;
      if (!c.passed)
        o.fail(c.name);
    }
    if (o.passed)
      o.detail = std::to_string(n) + " checks";
    return o;
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
