// Command-line front end: run rules, audit bundles, inspect laminar
// structure, generate instances and search for counterexamples.
//
// Exit status: 0 ok / satisfied, 1 violated (check, laminar, search,
// paper-verify), 2 usage or input error.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pbprop/check.hpp"
#include "pbprop/fixtures.hpp"
#include "pbprop/io.hpp"
#include "pbprop/oracle.hpp"

using namespace pbprop;

namespace {

constexpr int kViolated = 1;
constexpr int kUsage = 2;

void drop_ties(Json &j) {
  for (const char *key : {"events", "rounds"})
    if (j.contains(key))
      for (auto &step : j[key])
        step.erase("tied");
}

void print(const Json &j) { std::cout << j.dump(2) << "\n"; }

std::vector<std::string> split_ids(const std::string &list) {
  std::vector<std::string> out;
  std::stringstream in(list);
  std::string id;
  while (std::getline(in, id, ','))
    if (!id.empty())
      out.push_back(id);
  return out;
}

LeafRule leaf_rule(const std::string &name) {
  if (name == "any")
    return LeafRule::AnySubset;
  return name == "max" ? LeafRule::MaxCardinality : LeafRule::Exhaustive;
}

InstanceKind instance_kind(const std::string &name) {
  if (name == "cardinal")
    return InstanceKind::Cardinal;
  if (name == "unit")
    return InstanceKind::UnitCost;
  if (name == "laminar")
    return InstanceKind::Laminar;
  if (name == "laminar-unit")
    return InstanceKind::LaminarUnitCost;
  return InstanceKind::Approval;
}

const std::vector<std::string> kKinds{"approval", "cardinal", "unit", "laminar",
                                      "laminar-unit"};

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Participatory-budgeting rules and exact proportionality audits"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  const Limits limits = Limits::from_environment();

  std::vector<std::string> axiom_ids;
  for (Axiom a : all_axioms())
    axiom_ids.emplace_back(axiom_id(a));

  // run
  std::string rule, file, threshold;
  bool all_ties = false;
  auto *run = app.add_subcommand("run", "Compute the winning bundle of a rule");
  run->add_option("rule", rule, "phragmen | pav | rulex")
      ->required()
      ->check(CLI::IsMember({"phragmen", "pav", "rulex"}));
  run->add_option("file", file, "instance (.json, or .pb for Pabulib)")->required();
  run->add_option("--threshold", threshold,
                  "binarize first: utility >= p/q counts as approval");
  run->add_flag("--all-ties", all_ties, "report tied choices and every PAV co-winner");

  // check
  std::string axiom_name, bundle_list, b_min = "0", leaf = "exhaustive";
  auto *check = app.add_subcommand("check", "Audit a bundle against an axiom");
  check->add_option("axiom", axiom_name)->required()->check(CLI::IsMember(axiom_ids));
  check->add_option("file", file)->required();
  check->add_option("--bundle", bundle_list, "comma-separated project ids")->required();
  check->add_option("--b-min", b_min, "lower bound on the price-system budget")
      ->check(CLI::IsMember({"0", "1"}));
  check->add_option("--leaf", leaf, "leaf rule for laminar proportionality")
      ->check(CLI::IsMember({"exhaustive", "any", "max"}));
  check->add_option("--threshold", threshold, "binarize first");

  // laminar
  bool list_bundles = false;
  auto *laminar = app.add_subcommand("laminar", "Recognize a laminar instance");
  laminar->add_option("file", file)->required();
  laminar->add_flag("--bundles", list_bundles, "also list laminar proportional bundles");
  laminar->add_option("--threshold", threshold, "binarize first");
  laminar->add_option("--leaf", leaf)->check(CLI::IsMember({"exhaustive", "any", "max"}));

  // gen
  std::string gen_kind, kind = "approval";
  std::uint64_t seed = 1;
  std::size_t voters = 4, projects = 5, depth = 3;
  long committee = 4;
  bool unit = false;
  auto *gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("what", gen_kind)->required()->check(CLI::IsMember({"laminar", "random"}));
  gen->add_option("--seed", seed);
  gen->add_option("--voters", voters);
  gen->add_option("--projects", projects, "exact count (random) or cap (laminar)");
  gen->add_option("--kind", kind, "random instances")->check(CLI::IsMember(kKinds));
  gen->add_option("--depth", depth, "laminar tree depth");
  gen->add_flag("--unit-cost", unit, "laminar: unit costs");
  gen->add_option("--committee", committee, "laminar unit-cost budget");

  // search
  std::string assume, conclude;
  std::uint64_t trials = 1000;
  std::size_t max_voters = 5, max_projects = 5;
  auto *search = app.add_subcommand("search", "Look for an instance where A holds and B fails");
  search->add_option("--assume", assume)->required()->check(CLI::IsMember(axiom_ids));
  search->add_option("--conclude", conclude)->required()->check(CLI::IsMember(axiom_ids));
  search->add_option("--trials", trials);
  search->add_option("--seed", seed);
  search->add_option("--kind", kind)->check(CLI::IsMember(kKinds));
  search->add_option("--max-voters", max_voters);
  search->add_option("--max-projects", max_projects);
  search->add_option("--b-min", b_min)->check(CLI::IsMember({"0", "1"}));

  auto *verify = app.add_subcommand("paper-verify", "Replay the worked examples");

  std::string fixture_name;
  auto *fixture = app.add_subcommand("fixture", "Print a worked-example instance");
  fixture->add_option("name", fixture_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    const BudgetFloor floor = b_min == "1" ? BudgetFloor::One : BudgetFloor::Zero;

    if (*run || *check || *laminar) {
      PBInstance instance = load_instance(file);
      if (!threshold.empty())
        instance = binarize(instance, Rational::parse(threshold));

      if (*run) {
        Json report = report_header(instance, "run " + rule);
        Json result;
        if (rule == "phragmen")
          result = phragmen_json(instance, phragmen(instance));
        else if (rule == "pav")
          result = pav_json(instance, pav(instance, all_ties, limits));
        else
          result = rule_x_json(instance, rule_x(instance));
        if (!all_ties)
          drop_ties(result);
        report["result"] = result;
        print(report);
        return 0;
      }

      if (*check) {
        const Axiom axiom = *parse_axiom(axiom_name);
        const Bundle w = Bundle::from_ids(instance, split_ids(bundle_list));
        const auto verdict =
            check_axiom(instance, w, axiom, CheckOptions{floor, leaf_rule(leaf), limits});
        Json report = report_header(instance, "check " + axiom_name);
        report["bundle"] = bundle_json(instance, w);
        report["verdict"] = verdict_json(instance, verdict);
        print(report);
        return verdict.satisfied() ? 0 : kViolated;
      }

      const auto rec = recognize_laminar(instance);
      Json report = report_header(instance, "laminar");
      report["laminar"] = rec.laminar();
      if (!rec.laminar()) {
        report["reason"] = rec.reason;
        print(report);
        return kViolated;
      }
      report["decomposition"] = decomposition_json(instance, *rec.root);
      if (list_bundles) {
        Json all = Json::array();
        for (const auto &b : laminar_bundles(instance, leaf_rule(leaf), limits))
          all.push_back(bundle_json(instance, b));
        report["laminar_proportional_bundles"] = all;
      }
      print(report);
      return 0;
    }

    if (*gen) {
      if (gen_kind == "laminar") {
        LaminarParams params;
        params.voters = voters;
        params.max_depth = depth;
        params.max_projects = projects;
        params.unit_cost = unit;
        params.committee_size = committee;
        std::cout << write_instance(generate_laminar(params, seed));
      } else {
        GeneratorSpec spec;
        spec.kind = instance_kind(kind);
        spec.min_voters = spec.max_voters = voters;
        spec.min_projects = spec.max_projects = projects;
        Rng rng(seed);
        std::cout << write_instance(random_instance(spec, rng));
      }
      return 0;
    }

    if (*search) {
      GeneratorSpec spec;
      spec.kind = instance_kind(kind);
      spec.max_voters = max_voters;
      spec.max_projects = max_projects;
      spec.min_voters = std::min(spec.min_voters, max_voters);
      spec.min_projects = std::min(spec.min_projects, max_projects);
      const auto hit = search_counterexample(spec, *parse_axiom(assume),
                                             *parse_axiom(conclude), trials, seed,
                                             CheckOptions{floor, LeafRule::Exhaustive, limits});
      Json report{{"report_version", kReportVersion},
                  {"tool_version", std::string(kToolVersion)},
                  {"command", "search"},
                  {"config",
                   {{"assume", assume},
                    {"conclude", conclude},
                    {"kind", kind},
                    {"trials", trials},
                    {"seed", seed},
                    {"max_voters", max_voters},
                    {"max_projects", max_projects}}}};
      if (!hit) {
        report["counterexample"] = nullptr;
        print(report);
        return 0;
      }
      report["counterexample"] = {
          {"trial", hit->trial},
          {"instance", Json::parse(write_instance(hit->instance))},
          {"bundle", bundle_json(hit->instance, hit->bundle)},
          {"refutation", verdict_json(hit->instance, hit->refutation)}};
      print(report);
      return kViolated;
    }

    if (*verify) {
      const auto checks = fixtures::worked_example_checks();
      std::size_t failed = 0;
      for (const auto &c : checks) {
        std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  [" << c.detail << "]\n";
        failed += !c.passed;
      }
      std::cout << checks.size() - failed << "/" << checks.size() << " worked examples pass\n";
      return failed == 0 ? 0 : kViolated;
    }

    if (*fixture) {
      for (const auto &f : fixtures::all())
        if (f.name == fixture_name) {
          std::cout << write_instance(f.build());
          return 0;
        }
      std::cerr << "unknown fixture " << fixture_name << "; known:";
      for (const auto &f : fixtures::all())
        std::cerr << " " << f.name;
      std::cerr << "\n";
      return kUsage;
    }
  } catch (const InputError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const LimitExceeded &e) {
    std::cerr << "error: " << e.what() << " (raise the PBPROP_MAX_* caps)\n";
    return kUsage;
  }
  return 0;
}
