#include "pbprop/laminar.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "pbprop/error.hpp"
#include "pbprop/random.hpp"

namespace pbprop {

namespace {

using Mask = unsigned long long;

Mask to_mask(const std::vector<Index> &items) {
  Mask m = 0;
  for (Index j : items)
    m |= 1ULL << j;
  return m;
}

Rational mask_cost(const PBInstance &instance, Mask mask) {
  Rational total;
  for (Index j : mask_members(mask))
    total += instance.cost(j);
  return total;
}

std::vector<Mask> approval_masks(const PBInstance &instance) {
  std::vector<Mask> masks(instance.num_voters(), 0);
  for (Index i = 0; i < instance.num_voters(); ++i)
    for (Index j = 0; j < instance.num_projects(); ++j)
      if (instance.approves(i, j))
        masks[i] |= 1ULL << j;
  return masks;
}

void require_bitmask_size(const PBInstance &instance) {
  if (instance.num_voters() >= 64 || instance.num_projects() >= 64)
    throw LimitExceeded("laminar analysis supports at most 63 voters and projects");
}

struct Recognizer {
  const PBInstance &instance;
  std::vector<Mask> approvals;
  std::string failure;

  std::optional<LaminarNode> visit(const std::vector<Index> &voters,
                                   Mask removed, const Rational &budget) {
    LaminarNode node;
    node.voters = voters;
    node.budget = budget;
    Mask all = 0, common = ~0ULL;
    bool unanimous = true;
    const Mask first = approvals[voters.front()] & ~removed;
    for (Index i : voters) {
      const Mask a = approvals[i] & ~removed;
      all |= a;
      common &= a;
      unanimous = unanimous && a == first;
    }
    node.projects = mask_members(all);

    if (unanimous) {
      if (mask_cost(instance, all) >= budget) {
        node.kind = LaminarNode::Kind::UnanimousLeaf;
        return node;
      }
      failure = "unanimous voters " + format_voters(instance, voters) +
                " approve projects costing less than their budget " +
                budget.str();
      return std::nullopt;
    }

    if (common != 0) {
      const Index c = mask_members(common).front();
      const Rational rest = budget - instance.cost(c);
      if (rest.sign() <= 0) {
        failure = "unanimous project " + instance.project_id(c) +
                  " leaves no budget for " + format_voters(instance, voters);
        return std::nullopt;
      }
      auto child = visit(voters, removed | 1ULL << c, rest);
      if (!child)
        return std::nullopt;
      node.kind = LaminarNode::Kind::UnanimousProject;
      node.project = c;
      node.children.push_back(std::move(*child));
      return node;
    }

    // Voters sharing a project must land on the same side, so the only
    // candidate parts are unions of connected components.
    std::vector<Index> part{voters.front()};
    Mask reach = approvals[voters.front()] & ~removed;
    for (bool grew = true; grew;) {
      grew = false;
      for (Index i : voters) {
        const Mask a = approvals[i] & ~removed;
        if ((a & reach) && std::find(part.begin(), part.end(), i) == part.end()) {
          part.push_back(i);
          reach |= a;
          grew = true;
        }
      }
    }
    if (part.size() == voters.size()) {
      failure = "voters " + format_voters(instance, voters) +
                " are connected, not unanimous and share no project";
      return std::nullopt;
    }
    std::sort(part.begin(), part.end());
    std::vector<Index> rest;
    std::set_difference(voters.begin(), voters.end(), part.begin(), part.end(),
                        std::back_inserter(rest));
    const Rational left = budget * Rational(static_cast<long>(part.size())) /
                          Rational(static_cast<long>(voters.size()));
    auto a = visit(part, removed, left);
    if (!a)
      return std::nullopt;
    auto b = visit(rest, removed, budget - left);
    if (!b)
      return std::nullopt;
    node.kind = LaminarNode::Kind::Split;
    node.children.push_back(std::move(*a));
    node.children.push_back(std::move(*b));
    return node;
  }
};

void collect_pool(const LaminarNode &node, Mask group, Mask &pool) {
  if (node.kind == LaminarNode::Kind::UnanimousProject &&
      (to_mask(node.voters) & group))
    pool |= 1ULL << node.project;
  for (const auto &child : node.children)
    collect_pool(child, group, pool);
}

// Largest number of the given projects that fit in the budget together.
std::size_t most_affordable(const PBInstance &instance,
                            const std::vector<Index> &projects,
                            const Rational &budget) {
  std::vector<Rational> costs;
  for (Index c : projects)
    costs.push_back(instance.cost(c));
  std::sort(costs.begin(), costs.end());
  Rational spent;
  std::size_t k = 0;
  while (k < costs.size() && spent + costs[k] <= budget)
    spent += costs[k++];
  return k;
}

std::string certify(const PBInstance &instance, const LaminarNode &node,
                    Mask w, LeafRule rule) {
  switch (node.kind) {
  case LaminarNode::Kind::UnanimousLeaf: {
    const Rational spent = mask_cost(instance, w);
    if (spent > node.budget)
      return "leaf of " + format_voters(instance, node.voters) + " spends " +
             spent.str() + " > budget " + node.budget.str();
    if (rule == LeafRule::Exhaustive)
      for (Index c : node.projects)
        if (!(w >> c & 1ULL) && spent + instance.cost(c) <= node.budget)
          return "leaf of " + format_voters(instance, node.voters) +
                 " could still add " + instance.project_id(c);
    if (rule == LeafRule::MaxCardinality) {
      const auto most = most_affordable(instance, node.projects, node.budget);
      const auto got = static_cast<std::size_t>(__builtin_popcountll(w));
      if (got < most)
        return "leaf of " + format_voters(instance, node.voters) + " buys " +
               std::to_string(got) + " projects where " + std::to_string(most) +
               " fit";
    }
    return {};
  }
  case LaminarNode::Kind::UnanimousProject:
    if (!(w >> node.project & 1ULL))
      return "unanimous project " + instance.project_id(node.project) +
             " of " + format_voters(instance, node.voters) + " is missing";
    return certify(instance, node.children.front(),
                   w & ~(1ULL << node.project), rule);
  case LaminarNode::Kind::Split:
    for (const auto &child : node.children) {
      auto why = certify(instance, child, w & to_mask(child.projects), rule);
      if (!why.empty())
        return why;
    }
    return {};
  }
  return {};
}

void enumerate(const PBInstance &instance, const LaminarNode &node,
               LeafRule rule, std::size_t cap, std::vector<Mask> &out) {
  switch (node.kind) {
  case LaminarNode::Kind::UnanimousLeaf: {
    if (node.projects.size() > 24)
      throw LimitExceeded("unanimous leaf with more than 24 projects");
    for_each_subset_canonical(node.projects.size(), [&](Mask bits) {
      Mask w = 0;
      for (Index k : mask_members(bits))
        w |= 1ULL << node.projects[k];
      if (certify(instance, node, w, rule).empty()) {
        out.push_back(w);
        if (out.size() > cap)
          throw LimitExceeded("more than " + std::to_string(cap) +
                              " laminar proportional bundles");
      }
      return true;
    });
    return;
  }
  case LaminarNode::Kind::UnanimousProject:
    enumerate(instance, node.children.front(), rule, cap, out);
    for (auto &w : out)
      w |= 1ULL << node.project;
    return;
  case LaminarNode::Kind::Split: {
    std::vector<Mask> left, right;
    enumerate(instance, node.children[0], rule, cap, left);
    enumerate(instance, node.children[1], rule, cap, right);
    if (left.size() * right.size() > cap)
      throw LimitExceeded("more than " + std::to_string(cap) +
                          " laminar proportional bundles");
    for (Mask a : left)
      for (Mask b : right)
        out.push_back(a | b);
    return;
  }
  }
}

void pay_along(const PBInstance &instance, const LaminarNode &node, Mask w,
               std::vector<std::vector<Rational>> &payments) {
  const Rational size(static_cast<long>(node.voters.size()));
  switch (node.kind) {
  case LaminarNode::Kind::UnanimousLeaf:
    for (Index c : mask_members(w))
      for (Index i : node.voters)
        payments[i][c] += instance.cost(c) / size;
    return;
  case LaminarNode::Kind::UnanimousProject:
    for (Index i : node.voters)
      payments[i][node.project] += instance.cost(node.project) / size;
    pay_along(instance, node.children.front(), w & ~(1ULL << node.project),
              payments);
    return;
  case LaminarNode::Kind::Split:
    for (const auto &child : node.children)
      pay_along(instance, child, w & to_mask(child.projects), payments);
    return;
  }
}

void check_node(const PBInstance &instance, const std::vector<Mask> &approvals,
                const LaminarNode &node, Mask removed, ValidationReport &report) {
  const std::string where = "node " + format_voters(instance, node.voters);
  if (node.voters.empty()) {
    report.push_back({"empty slice", "a node has no voters"});
    return;
  }
  Mask all = 0, common = ~0ULL;
  bool unanimous = true;
  const Mask first = approvals[node.voters.front()] & ~removed;
  for (Index i : node.voters) {
    const Mask a = approvals[i] & ~removed;
    all |= a;
    common &= a;
    unanimous = unanimous && a == first;
  }
  if (all != to_mask(node.projects))
    report.push_back({"wrong projects", where + " lists projects other than its voters approve"});
  if (node.budget.sign() <= 0)
    report.push_back({"nonpositive budget", where + " has budget " + node.budget.str()});

  switch (node.kind) {
  case LaminarNode::Kind::UnanimousLeaf:
    if (!node.children.empty())
      report.push_back({"bad shape", where + " is a leaf with children"});
    if (!unanimous)
      report.push_back({"leaf not unanimous", where + " has differing approval sets"});
    if (mask_cost(instance, all) < node.budget)
      report.push_back({"leaf too cheap", where + " approves less than its budget"});
    return;
  case LaminarNode::Kind::UnanimousProject: {
    if (node.children.size() != 1) {
      report.push_back({"bad shape", where + " needs exactly one child"});
      return;
    }
    const auto &child = node.children.front();
    if (!(common >> node.project & 1ULL))
      report.push_back({"not unanimous", instance.project_id(node.project) +
                                             " is not approved by all of " + where});
    if (child.voters != node.voters)
      report.push_back({"bad shape", where + " changes voters below a unanimous project"});
    if (child.budget != node.budget - instance.cost(node.project))
      report.push_back({"wrong budget", where + " child budget is not budget - cost(c)"});
    const Mask rest = removed | 1ULL << node.project;
    bool child_unanimous = true;
    for (Index i : node.voters)
      child_unanimous = child_unanimous &&
                        (approvals[i] & ~rest) == (first & ~rest);
    if (child_unanimous)
      report.push_back({"child unanimous", where + " leaves a unanimous profile"});
    check_node(instance, approvals, child, rest, report);
    return;
  }
  case LaminarNode::Kind::Split: {
    if (node.children.size() != 2) {
      report.push_back({"bad shape", where + " needs exactly two children"});
      return;
    }
    const auto &a = node.children[0], &b = node.children[1];
    std::vector<Index> joined = a.voters;
    joined.insert(joined.end(), b.voters.begin(), b.voters.end());
    std::sort(joined.begin(), joined.end());
    if (joined != node.voters)
      report.push_back({"bad partition", where + " children do not partition its voters"});
    if (to_mask(a.projects) & to_mask(b.projects))
      report.push_back({"overlapping projects", where + " children share projects"});
    const Rational na(static_cast<long>(a.voters.size()));
    const Rational nb(static_cast<long>(b.voters.size()));
    if (na * b.budget != nb * a.budget)
      report.push_back({"disproportional split", where + " violates |P1| l2 = |P2| l1"});
    if (a.budget + b.budget != node.budget)
      report.push_back({"wrong budget", where + " child budgets do not add up"});
    check_node(instance, approvals, a, removed, report);
    check_node(instance, approvals, b, removed, report);
    return;
  }
  }
}

std::string padded(char prefix, std::size_t k, std::size_t total) {
  const std::size_t width = std::to_string(total).size();
  std::string digits = std::to_string(k);
  return std::string(1, prefix) + std::string(width - digits.size(), '0') + digits;
}

struct Generator {
  const LaminarParams &params;
  Rng &rng;
  std::vector<Rational> costs;
  std::vector<std::vector<Index>> approvals;

  Rational draw_cost() {
    if (params.unit_cost)
      return 1;
    return Rational(rng.between(1, params.max_cost_units), params.cost_denominator);
  }

  void grant(std::size_t first, std::size_t count, Index project) {
    for (std::size_t i = first; i < first + count; ++i)
      approvals[i].push_back(project);
  }

  void leaf(std::size_t first, std::size_t count, const Rational &budget) {
    long r = rng.between(1, static_cast<long>(params.max_leaf_projects));
    if (params.unit_cost)
      r = std::max(r, budget.mpq().get_num().get_si());
    Rational total;
    for (long k = 0; k < r; ++k) {
      costs.push_back(draw_cost());
      total += costs.back();
      grant(first, count, costs.size() - 1);
    }
    if (total < budget)
      costs.back() += budget - total;
  }

  // Sizes of the first part that keep both budgets admissible.
  std::vector<std::size_t> split_sizes(std::size_t count, const Rational &budget) {
    std::vector<std::size_t> sizes;
    for (std::size_t n1 = 1; n1 < count; ++n1) {
      const Rational l1 = budget * Rational(static_cast<long>(n1)) /
                          Rational(static_cast<long>(count));
      if (params.unit_cost &&
          (!l1.is_integer() || l1 < Rational(1) || budget - l1 < Rational(1)))
        continue;
      sizes.push_back(n1);
    }
    return sizes;
  }

  bool split(std::size_t first, std::size_t count, const Rational &budget,
             std::size_t depth) {
    const auto sizes = split_sizes(count, budget);
    if (sizes.empty())
      return false;
    const std::size_t n1 = sizes[rng.below(sizes.size())];
    const Rational l1 = budget * Rational(static_cast<long>(n1)) /
                        Rational(static_cast<long>(count));
    node(first, n1, l1, depth + 1);
    node(first + n1, count - n1, budget - l1, depth + 1);
    return true;
  }

  void node(std::size_t first, std::size_t count, const Rational &budget,
            std::size_t depth) {
    if (depth >= params.max_depth) {
      leaf(first, count, budget);
      return;
    }
    // leaf : unanimous project : split = 1 : w : 2
    const auto w = params.unanimous_weight;
    const auto roll = rng.below(3 + w);
    if (roll >= 1 && roll <= w && count >= 2) {
      Rational c = draw_cost();
      if (c >= budget)
        c = params.unit_cost ? Rational(0) : budget / Rational(2);
      if (c.sign() > 0 && !split_sizes(count, budget - c).empty()) {
        costs.push_back(c);
        grant(first, count, costs.size() - 1);
        split(first, count, budget - c, depth);
        return;
      }
    }
    if (roll > w && count >= 2 && split(first, count, budget, depth))
      return;
    leaf(first, count, budget);
  }
};

} // namespace

LaminarRecognition recognize_laminar(const PBInstance &instance) {
  if (!instance.is_approval())
    throw PreconditionError("laminar instances are approval instances");
  require_bitmask_size(instance);
  LaminarRecognition result;
  if (instance.num_voters() == 0) {
    result.reason = "the instance has no voters";
    return result;
  }
  if (instance.budget().sign() <= 0) {
    result.reason = "the budget is not positive";
    return result;
  }
  Recognizer r{instance, approval_masks(instance), {}};
  std::vector<Index> everyone(instance.num_voters());
  std::iota(everyone.begin(), everyone.end(), Index{0});
  result.root = r.visit(everyone, 0, instance.budget());
  if (!result.root)
    result.reason = r.failure;
  return result;
}

LaminarNode require_laminar(const PBInstance &instance) {
  auto recognition = recognize_laminar(instance);
  if (!recognition.root)
    throw NotLaminarError("instance is not laminar: " + recognition.reason);
  return std::move(*recognition.root);
}

ValidationReport validate_decomposition(const PBInstance &instance,
                                        const LaminarNode &root) {
  require_bitmask_size(instance);
  ValidationReport report;
  std::vector<Index> everyone(instance.num_voters());
  std::iota(everyone.begin(), everyone.end(), Index{0});
  if (root.voters != everyone)
    report.push_back({"bad root", "root slice must hold every voter"});
  if (root.budget != instance.budget())
    report.push_back({"bad root", "root budget must equal the instance budget"});
  check_node(instance, approval_masks(instance), root, 0, report);
  return report;
}

std::string certify_laminar(const PBInstance &instance, const LaminarNode &root,
                            const Bundle &w, LeafRule rule) {
  const Mask wm = w.mask();
  const Mask outside = wm & ~to_mask(root.projects);
  if (outside)
    return "project " + instance.project_id(mask_members(outside).front()) +
           " is approved by nobody";
  return certify(instance, root, wm, rule);
}

AxiomVerdict is_laminar_proportional(const PBInstance &instance,
                                     const Bundle &w, LeafRule rule) {
  const LaminarNode root = require_laminar(instance);
  AxiomVerdict verdict;
  verdict.axiom = Axiom::LaminarProportional;
  auto why = certify_laminar(instance, root, w, rule);
  if (!why.empty()) {
    verdict.status = Status::Violated;
    verdict.witness = TextWitness{std::move(why)};
  }
  return verdict;
}

std::vector<Bundle> laminar_bundles(const PBInstance &instance, LeafRule rule,
                                    const Limits &limits) {
  const LaminarNode root = require_laminar(instance);
  std::vector<Mask> masks;
  enumerate(instance, root, rule, limits.max_laminar_bundles, masks);
  std::vector<Bundle> out;
  out.reserve(masks.size());
  for (Mask m : masks)
    out.push_back(Bundle::from_mask(m));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_u_affordable(const PBInstance &instance, const Bundle &t,
                     const std::vector<Index> &pool) {
  return std::all_of(pool.begin(), pool.end(), [&](Index c) {
    return std::any_of(t.begin(), t.end(), [&](Index x) {
      return instance.cost(x) >= instance.cost(c);
    });
  });
}

std::vector<Index> unanimity_pool(const LaminarNode &root,
                                  const std::vector<Index> &group) {
  Mask pool = 0;
  collect_pool(root, to_mask(group), pool);
  return mask_members(pool);
}

AxiomVerdict check_core_u_afford(const PBInstance &instance, const Bundle &w,
                                 const Limits &limits) {
  const LaminarNode root = require_laminar(instance);
  const std::size_t n = instance.num_voters(), m = instance.num_projects();
  if (n > limits.max_voters || m > limits.max_projects)
    throw LimitExceeded("core search exceeds the voter or project cap");
  std::vector<Rational> in_w(n);
  for (Index i = 0; i < n; ++i)
    in_w[i] = utility(instance, i, w);

  // The pool grows with the group, so every affordable sub-coalition of
  // the voters preferring T is tried, not only the largest.
  AxiomVerdict verdict;
  verdict.axiom = Axiom::CoreUAfford;
  for_each_subset_canonical(m, [&](Mask tmask) {
    const Bundle t = Bundle::from_mask(tmask);
    std::vector<Index> keen;
    for (Index i = 0; i < n; ++i)
      if (utility(instance, i, t) > in_w[i])
        keen.push_back(i);
    const Rational need = cost(instance, t);
    bool found = false;
    for_each_subset_canonical(keen.size(), [&](Mask bits) {
      if (bits == 0)
        return true;
      std::vector<Index> group;
      for (Index k : mask_members(bits))
        group.push_back(keen[k]);
      if (Rational(static_cast<long>(group.size())) * instance.budget() <
          need * Rational(static_cast<long>(n)))
        return true;
      if (!is_u_affordable(instance, t, unanimity_pool(root, group)))
        return true;
      verdict.status = Status::Violated;
      verdict.witness = CoreWitness{std::move(group), t};
      found = true;
      return false;
    });
    return !found;
  });
  return verdict;
}

PriceSystem constructive_price_system(const PBInstance &instance,
                                      const LaminarNode &root, const Bundle &w,
                                      Endowment endowment) {
  if (auto why = certify_laminar(instance, root, w); !why.empty())
    throw PreconditionError("bundle is not certified by the tree: " + why);
  PriceSystem ps;
  ps.budget = endowment == Endowment::Budget ? instance.budget() : cost(instance, w);
  ps.payments.assign(instance.num_voters(),
                     std::vector<Rational>(instance.num_projects()));
  pay_along(instance, root, w.mask(), ps.payments);
  return ps;
}

PBInstance generate_laminar(const LaminarParams &params, std::uint64_t seed) {
  if (params.voters == 0 || params.voters >= 64)
    throw InputError("laminar generator needs between 1 and 63 voters");
  if (params.max_leaf_projects == 0 || params.cost_denominator <= 0 ||
      params.max_cost_units <= 0)
    throw InputError("laminar generator needs positive project and cost ranges");
  if (params.unit_cost && params.committee_size <= 0)
    throw InputError("unit-cost laminar generation needs a positive committee size");

  Rng rng(seed);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Generator g{params, rng, {}, std::vector<std::vector<Index>>(params.voters)};
    const Rational budget =
        params.unit_cost
            ? Rational(params.committee_size)
            : Rational(rng.between(1, params.max_cost_units) *
                           static_cast<long>(params.voters),
                       params.cost_denominator);
    g.node(0, params.voters, budget, 1);
    const std::size_t m = g.costs.size();
    if (m > params.max_projects || m >= 64)
      continue;

    InstanceBuilder builder;
    builder.budget(budget).description("random laminar instance, seed " +
                                       std::to_string(seed));
    for (std::size_t j = 0; j < m; ++j)
      builder.project(padded('c', j + 1, m), g.costs[j]);
    for (std::size_t i = 0; i < params.voters; ++i) {
      std::vector<std::string> ids;
      for (Index j : g.approvals[i])
        ids.push_back(padded('c', j + 1, m));
      builder.approval_voter(padded('v', i + 1, params.voters), ids);
    }
    return builder.build();
  }
  throw InputError("laminar generator could not meet the project cap of " +
                   std::to_string(params.max_projects));
}

} // namespace pbprop
