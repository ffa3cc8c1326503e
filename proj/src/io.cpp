#include "pbprop/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pbprop/error.hpp"

namespace pbprop {

namespace {

std::string position_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const Json &field(const Json &j, const char *key, const std::string &where) {
  if (!j.is_object() || !j.contains(key))
    throw InputError(where + ": missing \"" + key + "\"");
  return j.at(key);
}

Rational rational_at(const Json &j, const std::string &where) {
  try {
    return json_rational(j);
  } catch (const InputError &e) {
    throw InputError(where + ": " + e.what());
  }
}

std::string string_at(const Json &j, const std::string &where) {
  if (!j.is_string())
    throw InputError(where + ": expected a string");
  return j.get<std::string>();
}

std::vector<std::string> ids_of(const PBInstance &instance,
                                const std::vector<Index> &voters) {
  std::vector<std::string> out;
  for (Index i : voters)
    out.push_back(instance.voter_id(i));
  return out;
}

std::vector<Index> voters_from(const PBInstance &instance, const Json &j) {
  if (!j.is_array())
    throw InputError("expected a list of voter ids");
  std::vector<Index> out;
  for (const auto &id : j)
    out.push_back(instance.voter_index(string_at(id, "voter list")));
  return out;
}

Json payments_json(const PBInstance &instance, const Payments &payments) {
  Json out = Json::object();
  for (const auto &[voter, amount] : payments)
    out[instance.voter_id(voter)] = rational_json(amount);
  return out;
}

Json projects_json(const PBInstance &instance, const std::vector<Index> &projects) {
  Json out = Json::array();
  for (Index c : projects)
    out.push_back(instance.project_id(c));
  return out;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto end = line.find(sep, start);
    out.push_back(trim(line.substr(start, end - start)));
    if (end == std::string_view::npos)
      return out;
    start = end + 1;
  }
}

std::string_view kind_name(LaminarNode::Kind kind) {
  switch (kind) {
  case LaminarNode::Kind::UnanimousLeaf:
    return "unanimous-leaf";
  case LaminarNode::Kind::UnanimousProject:
    return "unanimous-project";
  case LaminarNode::Kind::Split:
    return "split";
  }
  return "?";
}

} // namespace

Json rational_json(const Rational &r) { return r.str(); }

Rational json_rational(const Json &j) {
  if (j.is_string())
    return Rational::parse(j.get<std::string>());
  if (j.is_number_integer())
    return Rational(j.get<long>());
  if (j.is_number())
    throw InputError("write non-integral numbers as strings so they stay exact");
  throw InputError("expected a number");
}

PBInstance parse_instance(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error &e) {
    throw InputError("syntax error at " + position_of(text, e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object())
    throw InputError("instance: expected an object");

  InstanceBuilder builder;
  const Json &meta = field(doc, "meta", "instance");
  builder.budget(rational_at(field(meta, "budget", "meta"), "meta.budget"));
  if (meta.contains("description"))
    builder.description(string_at(meta.at("description"), "meta.description"));

  const Json &projects = field(doc, "projects", "instance");
  if (!projects.is_array())
    throw InputError("projects: expected a list");
  std::set<std::string> known;
  for (std::size_t k = 0; k < projects.size(); ++k) {
    const std::string where = "projects[" + std::to_string(k) + "]";
    std::string id = string_at(field(projects[k], "id", where), where + ".id");
    known.insert(id);
    builder.project(std::move(id),
                    rational_at(field(projects[k], "cost", where), where + ".cost"));
  }

  const Json &voters = field(doc, "voters", "instance");
  if (!voters.is_array())
    throw InputError("voters: expected a list");
  for (std::size_t k = 0; k < voters.size(); ++k) {
    const std::string where = "voters[" + std::to_string(k) + "]";
    std::string id = string_at(field(voters[k], "id", where), where + ".id");
    std::map<std::string, Rational> utilities;
    if (voters[k].contains("utilities")) {
      const Json &u = voters[k].at("utilities");
      if (!u.is_object())
        throw InputError(where + ".utilities: expected an object");
      for (const auto &[project, value] : u.items()) {
        if (!known.contains(project))
          throw InputError(where + ".utilities: unknown project \"" + project + "\"");
        utilities[project] = rational_at(value, where + ".utilities." + project);
      }
    }
    builder.voter(std::move(id), std::move(utilities));
  }

  PBInstance instance = builder.build();
  auto issues = validate(instance);
  if (!issues.empty()) {
    std::string what = "invalid instance:";
    for (const auto &issue : issues)
      what += "\n  " + issue.kind + ": " + issue.message;
    throw InvalidInstance(what, std::move(issues));
  }
  return instance;
}

std::string write_instance(const PBInstance &instance) {
  Json doc;
  doc["meta"]["budget"] = rational_json(instance.budget());
  doc["meta"]["description"] = instance.description();
  doc["projects"] = Json::array();
  for (const auto &p : instance.projects())
    doc["projects"].push_back({{"id", p.id}, {"cost", rational_json(p.cost)}});
  doc["voters"] = Json::array();
  for (Index i = 0; i < instance.num_voters(); ++i) {
    Json u = Json::object();
    for (Index c = 0; c < instance.num_projects(); ++c)
      if (!instance.utility(i, c).is_zero())
        u[instance.project_id(c)] = rational_json(instance.utility(i, c));
    doc["voters"].push_back({{"id", instance.voter_id(i)}, {"utilities", u}});
  }
  return doc.dump(2) + "\n";
}

PBInstance parse_pabulib(std::string_view text) {
  enum class Section { None, Meta, Projects, Votes };
  Section section = Section::None;
  bool header_pending = false;
  std::vector<std::string> header;
  std::set<Section> seen;
  std::map<std::string, std::string> meta;
  InstanceBuilder builder;
  std::set<std::string> projects;
  std::vector<std::pair<std::string, std::vector<std::string>>> votes;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos)
      end = text.size();
    const std::string line = trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    const std::string where = "line " + std::to_string(line_no);
    if (line.empty())
      continue;

    std::string upper = line;
    std::transform(upper.begin(), upper.end(), upper.begin(), ::toupper);
    if (upper == "META" || upper == "PROJECTS" || upper == "VOTES") {
      section = upper == "META" ? Section::Meta
                : upper == "PROJECTS" ? Section::Projects
                                      : Section::Votes;
      if (!seen.insert(section).second)
        throw InputError(where + ": repeated section " + upper);
      header_pending = true;
      continue;
    }
    if (section == Section::None)
      throw InputError(where + ": content before the META section");

    auto cells = split(line, ';');
    if (header_pending) {
      header = cells;
      header_pending = false;
      continue;
    }
    auto column = [&](const char *name) -> std::string {
      const auto it = std::find(header.begin(), header.end(), name);
      if (it == header.end())
        throw InputError(where + ": section has no \"" + name + "\" column");
      const auto k = static_cast<std::size_t>(it - header.begin());
      return k < cells.size() ? cells[k] : std::string();
    };
    switch (section) {
    case Section::Meta:
      if (cells.size() < 2)
        throw InputError(where + ": expected key;value");
      meta[cells[0]] = cells[1];
      break;
    case Section::Projects: {
      std::string id = column("project_id");
      try {
        builder.project(id, Rational::parse(column("cost")));
      } catch (const InputError &e) {
        throw InputError(where + ": " + e.what());
      }
      projects.insert(std::move(id));
      break;
    }
    case Section::Votes: {
      const std::string vote = column("vote");
      std::vector<std::string> approved;
      if (!vote.empty())
        for (auto &id : split(vote, ','))
          if (!id.empty())
            approved.push_back(std::move(id));
      votes.emplace_back(column("voter_id"), std::move(approved));
      break;
    }
    case Section::None:
      break;
    }
  }

  for (Section s : {Section::Meta, Section::Projects, Section::Votes})
    if (!seen.contains(s))
      throw InputError(std::string("missing section ") +
                       (s == Section::Meta ? "META"
                        : s == Section::Projects ? "PROJECTS"
                                                 : "VOTES"));
  if (meta.contains("vote_type") && meta["vote_type"] != "approval")
    throw InputError("unsupported vote type \"" + meta["vote_type"] +
                     "\": only approval ballots are read");
  if (!meta.contains("budget"))
    throw InputError("META: missing budget");
  builder.budget(Rational::parse(meta["budget"]));
  if (meta.contains("description"))
    builder.description(meta["description"]);
  for (auto &[voter, approved] : votes) {
    for (const auto &id : approved)
      if (!projects.contains(id))
        throw InputError("vote of " + voter + " names unknown project " + id);
    builder.approval_voter(voter, approved);
  }

  PBInstance instance = builder.build();
  auto issues = validate(instance);
  if (!issues.empty())
    throw InvalidInstance("invalid instance: " + issues.front().message,
                          std::move(issues));
  return instance;
}

PBInstance load_instance(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const bool pabulib = path.size() >= 3 && path.substr(path.size() - 3) == ".pb";
  try {
    return pabulib ? parse_pabulib(buffer.str()) : parse_instance(buffer.str());
  } catch (const InvalidInstance &) {
    throw;
  } catch (const InputError &e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string instance_digest(const PBInstance &instance) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : write_instance(instance)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static const char *hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k, h >>= 4)
    out[static_cast<std::size_t>(k)] = hex[h & 0xF];
  return out;
}

Json bundle_json(const PBInstance &instance, const Bundle &bundle) {
  return projects_json(instance, bundle.members());
}

Bundle json_bundle(const PBInstance &instance, const Json &j) {
  if (!j.is_array())
    throw InputError("expected a list of project ids");
  std::vector<Index> members;
  for (const auto &id : j)
    members.push_back(instance.project_index(string_at(id, "bundle")));
  return Bundle(std::move(members));
}

Json price_system_json(const PBInstance &instance, const PriceSystem &ps) {
  Json payments = Json::object();
  for (Index i = 0; i < ps.payments.size(); ++i) {
    Json row = Json::object();
    for (Index c = 0; c < ps.payments[i].size(); ++c)
      if (!ps.payments[i][c].is_zero())
        row[instance.project_id(c)] = rational_json(ps.payments[i][c]);
    if (!row.empty())
      payments[instance.voter_id(i)] = row;
  }
  return {{"budget", rational_json(ps.budget)}, {"payments", payments}};
}

PriceSystem json_price_system(const PBInstance &instance, const Json &j) {
  PriceSystem ps;
  ps.budget = rational_at(field(j, "budget", "certificate"), "certificate.budget");
  ps.payments.assign(instance.num_voters(),
                     std::vector<Rational>(instance.num_projects()));
  for (const auto &[voter, row] : field(j, "payments", "certificate").items()) {
    const Index i = instance.voter_index(voter);
    for (const auto &[project, amount] : row.items())
      ps.payments[i][instance.project_index(project)] =
          rational_at(amount, "certificate.payments");
  }
  return ps;
}

Json verdict_json(const PBInstance &instance, const AxiomVerdict &verdict) {
  Json out;
  out["axiom"] = std::string(axiom_id(verdict.axiom));
  out["status"] = verdict.satisfied() ? "satisfied" : "violated";
  if (verdict.floor)
    out["b_min"] = *verdict.floor == BudgetFloor::One ? 1 : 0;
  if (verdict.witness) {
    Json w;
    std::visit(
        [&](const auto &x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, CoreWitness>) {
            w["kind"] = "coalition";
            w["group"] = ids_of(instance, x.group);
            w["target"] = bundle_json(instance, x.target);
          } else if constexpr (std::is_same_v<T, CohesionWitness>) {
            w["kind"] = "cohesive-group";
            w["group"] = ids_of(instance, x.group);
            w["target"] = bundle_json(instance, x.target);
            Json alpha = Json::object();
            for (std::size_t k = 0; k < x.alpha.size(); ++k)
              alpha[instance.project_id(x.target.members()[k])] =
                  rational_json(x.alpha[k]);
            w["alpha"] = alpha;
            w["demand"] = rational_json(x.demand);
            w["achieved"] = rational_json(x.achieved);
          } else if constexpr (std::is_same_v<T, CommitteeWitness>) {
            w["kind"] = "cohesive-committee-group";
            w["group"] = ids_of(instance, x.group);
            w["ell"] = x.ell;
          } else if constexpr (std::is_same_v<T, SpendingWitness>) {
            w["kind"] = "underfunded-group";
            w["group"] = ids_of(instance, x.group);
            w["ell"] = rational_json(x.ell);
          } else if constexpr (std::is_same_v<T, InfeasibilityWitness>) {
            w["kind"] = "farkas";
            Json rows = Json::array();
            for (std::size_t k = 0; k < x.labels.size(); ++k)
              rows.push_back({{"constraint", x.labels[k]},
                              {"multiplier", rational_json(x.multipliers[k])}});
            w["multipliers"] = rows;
          } else {
            w["kind"] = "text";
            w["text"] = x.text;
          }
        },
        *verdict.witness);
    out["witness"] = w;
  }
  if (verdict.certificate)
    out["certificate"] = price_system_json(instance, *verdict.certificate);
  return out;
}

AxiomVerdict json_verdict(const PBInstance &instance, const Json &j) {
  AxiomVerdict v;
  const auto axiom = parse_axiom(string_at(field(j, "axiom", "verdict"), "axiom"));
  if (!axiom)
    throw InputError("verdict: unknown axiom");
  v.axiom = *axiom;
  const std::string status = string_at(field(j, "status", "verdict"), "status");
  if (status != "satisfied" && status != "violated")
    throw InputError("verdict: unknown status " + status);
  v.status = status == "satisfied" ? Status::Satisfied : Status::Violated;
  if (j.contains("b_min"))
    v.floor = j.at("b_min").get<int>() == 1 ? BudgetFloor::One : BudgetFloor::Zero;
  if (j.contains("certificate"))
    v.certificate = json_price_system(instance, j.at("certificate"));
  if (!j.contains("witness"))
    return v;

  const Json &w = j.at("witness");
  const std::string kind = string_at(field(w, "kind", "witness"), "witness.kind");
  if (kind == "coalition") {
    v.witness = CoreWitness{voters_from(instance, field(w, "group", "witness")),
                            json_bundle(instance, field(w, "target", "witness"))};
  } else if (kind == "cohesive-group") {
    CohesionWitness x;
    x.group = voters_from(instance, field(w, "group", "witness"));
    x.target = json_bundle(instance, field(w, "target", "witness"));
    const Json &alpha = field(w, "alpha", "witness");
    for (Index c : x.target)
      x.alpha.push_back(rational_at(field(alpha, instance.project_id(c).c_str(),
                                          "witness.alpha"),
                                    "witness.alpha"));
    x.demand = rational_at(field(w, "demand", "witness"), "witness.demand");
    x.achieved = rational_at(field(w, "achieved", "witness"), "witness.achieved");
    v.witness = x;
  } else if (kind == "cohesive-committee-group") {
    v.witness = CommitteeWitness{voters_from(instance, field(w, "group", "witness")),
                                 field(w, "ell", "witness").get<long>()};
  } else if (kind == "underfunded-group") {
    v.witness = SpendingWitness{voters_from(instance, field(w, "group", "witness")),
                                rational_at(field(w, "ell", "witness"), "witness.ell")};
  } else if (kind == "farkas") {
    InfeasibilityWitness x;
    for (const auto &row : field(w, "multipliers", "witness")) {
      x.labels.push_back(string_at(field(row, "constraint", "multiplier"), "constraint"));
      x.multipliers.push_back(
          rational_at(field(row, "multiplier", "multiplier"), "multiplier"));
    }
    v.witness = x;
  } else if (kind == "text") {
    v.witness = TextWitness{string_at(field(w, "text", "witness"), "witness.text")};
  } else {
    throw InputError("witness: unknown kind " + kind);
  }
  return v;
}

Json phragmen_json(const PBInstance &instance, const PhragmenResult &result) {
  Json events = Json::array();
  for (const auto &e : result.trace.events) {
    Json event{{"time", rational_json(e.time)},
               {"project", instance.project_id(e.project)},
               {"payments", payments_json(instance, e.payments)}};
    if (!e.tied.empty())
      event["tied"] = projects_json(instance, e.tied);
    events.push_back(event);
  }
  Json out{{"rule", "phragmen"},
           {"bundle", bundle_json(instance, result.bundle)},
           {"events", events},
           {"stop_time", rational_json(result.trace.stop_time)},
           {"stop_reason", result.trace.stop_reason == StopReason::BudgetExhausted
                               ? "budget-exhausted"
                               : "no-affordable-project"}};
  if (result.trace.blocked_project)
    out["blocked_project"] = instance.project_id(*result.trace.blocked_project);
  return out;
}

Json pav_json(const PBInstance &instance, const PavResult &result) {
  Json out{{"rule", "pav"},
           {"bundle", bundle_json(instance, result.bundle)},
           {"score", rational_json(result.score)}};
  if (!result.co_winners.empty()) {
    Json all = Json::array();
    for (const auto &b : result.co_winners)
      all.push_back(bundle_json(instance, b));
    out["co_winners"] = all;
  }
  return out;
}

Json rule_x_json(const PBInstance &instance, const RuleXResult &result) {
  Json rounds = Json::array();
  for (const auto &r : result.trace.rounds) {
    Json round{{"rho", rational_json(r.rho)},
               {"project", instance.project_id(r.project)},
               {"payments", payments_json(instance, r.payments)}};
    if (!r.tied.empty())
      round["tied"] = projects_json(instance, r.tied);
    rounds.push_back(round);
  }
  return {{"rule", "rulex"},
          {"bundle", bundle_json(instance, result.bundle)},
          {"rounds", rounds},
          {"remaining", rational_json(result.trace.remaining)}};
}

Json decomposition_json(const PBInstance &instance, const LaminarNode &node) {
  Json out{{"kind", kind_name(node.kind)},
           {"voters", ids_of(instance, node.voters)},
           {"projects", projects_json(instance, node.projects)},
           {"budget", rational_json(node.budget)}};
  if (node.kind == LaminarNode::Kind::UnanimousProject)
    out["project"] = instance.project_id(node.project);
  if (!node.children.empty()) {
    Json children = Json::array();
    for (const auto &child : node.children)
      children.push_back(decomposition_json(instance, child));
    out["children"] = children;
  }
  return out;
}

LaminarNode json_decomposition(const PBInstance &instance, const Json &j) {
  LaminarNode node;
  const std::string kind = string_at(field(j, "kind", "node"), "node.kind");
  if (kind == kind_name(LaminarNode::Kind::UnanimousLeaf))
    node.kind = LaminarNode::Kind::UnanimousLeaf;
  else if (kind == kind_name(LaminarNode::Kind::UnanimousProject))
    node.kind = LaminarNode::Kind::UnanimousProject;
  else if (kind == kind_name(LaminarNode::Kind::Split))
    node.kind = LaminarNode::Kind::Split;
  else
    throw InputError("node: unknown kind " + kind);
  node.voters = voters_from(instance, field(j, "voters", "node"));
  node.projects = json_bundle(instance, field(j, "projects", "node")).members();
  node.budget = rational_at(field(j, "budget", "node"), "node.budget");
  if (node.kind == LaminarNode::Kind::UnanimousProject)
    node.project = instance.project_index(
        string_at(field(j, "project", "node"), "node.project"));
  if (j.contains("children"))
    for (const auto &child : j.at("children"))
      node.children.push_back(json_decomposition(instance, child));
  return node;
}

Json report_header(const PBInstance &instance, std::string_view command) {
  return {{"report_version", kReportVersion},
          {"tool_version", std::string(kToolVersion)},
          {"command", std::string(command)},
          {"instance",
           {{"digest", instance_digest(instance)},
            {"description", instance.description()},
            {"voters", instance.num_voters()},
            {"projects", instance.num_projects()},
            {"budget", rational_json(instance.budget())}}}};
}

} // namespace pbprop
