#include "pbprop/instance.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pbprop/error.hpp"

namespace pbprop {

PBInstance::PBInstance(std::vector<std::string> voters,
                       std::vector<Project> projects,
                       std::vector<std::vector<Rational>> utilities,
                       Rational budget, std::string description)
    : budget_(std::move(budget)), description_(std::move(description)) {
  if (utilities.size() != voters.size())
    throw InputError("utility table has " + std::to_string(utilities.size()) +
                     " rows for " + std::to_string(voters.size()) + " voters");
  for (const auto &row : utilities)
    if (row.size() != projects.size())
      throw InputError("utility row length does not match project count");

  std::vector<Index> vorder(voters.size());
  std::vector<Index> porder(projects.size());
  std::iota(vorder.begin(), vorder.end(), 0);
  std::iota(porder.begin(), porder.end(), 0);
  std::stable_sort(vorder.begin(), vorder.end(),
                   [&](Index a, Index b) { return voters[a] < voters[b]; });
  std::stable_sort(porder.begin(), porder.end(), [&](Index a, Index b) {
    return projects[a].id < projects[b].id;
  });

  for (Index i : vorder)
    voters_.push_back(voters[i]);
  for (Index j : porder)
    projects_.push_back(projects[j]);
  utilities_.reserve(voters.size() * projects.size());
  for (Index i : vorder)
    for (Index j : porder)
      utilities_.push_back(utilities[i][j]);
}

std::optional<Index> PBInstance::find_voter(std::string_view id) const {
  auto it = std::lower_bound(voters_.begin(), voters_.end(), id);
  if (it == voters_.end() || *it != id)
    return std::nullopt;
  return static_cast<Index>(it - voters_.begin());
}

std::optional<Index> PBInstance::find_project(std::string_view id) const {
  auto it = std::lower_bound(
      projects_.begin(), projects_.end(), id,
      [](const Project &p, std::string_view key) { return p.id < key; });
  if (it == projects_.end() || it->id != id)
    return std::nullopt;
  return static_cast<Index>(it - projects_.begin());
}

Index PBInstance::voter_index(std::string_view id) const {
  if (auto i = find_voter(id))
    return *i;
  throw InputError("unknown voter id \"" + std::string(id) + "\"");
}

Index PBInstance::project_index(std::string_view id) const {
  if (auto j = find_project(id))
    return *j;
  throw InputError("unknown project id \"" + std::string(id) + "\"");
}

bool PBInstance::is_approval() const {
  return std::all_of(utilities_.begin(), utilities_.end(), [](const Rational &u) {
    return u.is_zero() || u == Rational(1);
  });
}

bool PBInstance::is_mwv() const {
  if (!is_approval())
    return false;
  for (const auto &p : projects_)
    if (p.cost != projects_.front().cost)
      return false;
  return true;
}

std::optional<long> PBInstance::committee_size() const {
  if (!is_mwv() || projects_.empty())
    return std::nullopt;
  const Rational k = budget_ / projects_.front().cost;
  if (!k.is_integer() || k.sign() <= 0 || !k.mpq().get_num().fits_slong_p())
    return std::nullopt;
  return k.mpq().get_num().get_si();
}

InstanceBuilder &InstanceBuilder::budget(Rational l) {
  budget_ = std::move(l);
  return *this;
}

InstanceBuilder &InstanceBuilder::description(std::string text) {
  description_ = std::move(text);
  return *this;
}

InstanceBuilder &InstanceBuilder::project(std::string id, Rational cost) {
  projects_.push_back({std::move(id), std::move(cost)});
  return *this;
}

InstanceBuilder &InstanceBuilder::voter(std::string id,
                                        std::map<std::string, Rational> utilities) {
  voters_.emplace_back(std::move(id), std::move(utilities));
  return *this;
}

InstanceBuilder &
InstanceBuilder::approval_voter(std::string id,
                                const std::vector<std::string> &approved) {
  std::map<std::string, Rational> u;
  for (const auto &c : approved)
    u[c] = 1;
  return voter(std::move(id), std::move(u));
}

PBInstance InstanceBuilder::build() const {
  std::vector<std::string> ids;
  std::vector<std::vector<Rational>> table;
  for (const auto &[id, utilities] : voters_) {
    ids.push_back(id);
    std::vector<Rational> row(projects_.size());
    for (const auto &[pid, value] : utilities) {
      auto it = std::find_if(projects_.begin(), projects_.end(),
                             [&](const auto &p) { return p.id == pid; });
      if (it == projects_.end())
        throw InputError("voter \"" + id + "\" rates unknown project \"" + pid +
                         "\"");
      row[static_cast<Index>(it - projects_.begin())] = value;
    }
    table.push_back(std::move(row));
  }
  return PBInstance(std::move(ids), projects_, std::move(table), budget_,
                    description_);
}

Bundle::Bundle(std::vector<Index> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

Bundle Bundle::from_mask(unsigned long long mask) {
  Bundle b;
  b.members_ = mask_members(mask);
  return b;
}

Bundle Bundle::from_ids(const PBInstance &instance,
                        std::span<const std::string> ids) {
  std::vector<Index> members;
  for (const auto &id : ids)
    members.push_back(instance.project_index(id));
  return Bundle(std::move(members));
}

bool Bundle::contains(Index j) const {
  return std::binary_search(members_.begin(), members_.end(), j);
}

Bundle Bundle::with(Index j) const {
  auto m = members_;
  m.push_back(j);
  return Bundle(std::move(m));
}

Bundle Bundle::without(Index j) const {
  auto m = members_;
  std::erase(m, j);
  return Bundle(std::move(m));
}

unsigned long long Bundle::mask() const {
  unsigned long long m = 0;
  for (Index j : members_) {
    if (j >= 64)
      throw LimitExceeded("bundle member index beyond 63 in a bitmask search");
    m |= 1ULL << j;
  }
  return m;
}

std::strong_ordering operator<=>(const Bundle &a, const Bundle &b) {
  if (auto c = a.members_.size() <=> b.members_.size(); c != 0)
    return c;
  return std::lexicographical_compare_three_way(
      a.members_.begin(), a.members_.end(), b.members_.begin(),
      b.members_.end());
}

std::vector<Index> mask_members(unsigned long long mask) {
  std::vector<Index> out;
  for (Index j = 0; mask != 0; ++j, mask >>= 1)
    if (mask & 1ULL)
      out.push_back(j);
  return out;
}

Rational cost(const PBInstance &instance, const Bundle &bundle) {
  Rational total;
  for (Index j : bundle)
    total += instance.cost(j);
  return total;
}

Rational utility(const PBInstance &instance, Index voter, const Bundle &bundle) {
  Rational total;
  for (Index j : bundle)
    total += instance.utility(voter, j);
  return total;
}

std::string format_bundle(const PBInstance &instance, const Bundle &bundle) {
  std::string out = "{";
  for (std::size_t k = 0; k < bundle.size(); ++k) {
    if (k)
      out += ",";
    out += instance.project_id(bundle.members()[k]);
  }
  return out + "}";
}

std::string format_voters(const PBInstance &instance,
                          std::span<const Index> voters) {
  std::string out = "{";
  for (std::size_t k = 0; k < voters.size(); ++k) {
    if (k)
      out += ",";
    out += instance.voter_id(voters[k]);
  }
  return out + "}";
}

std::vector<std::string> bundle_ids(const PBInstance &instance,
                                    const Bundle &bundle) {
  std::vector<std::string> ids;
  for (Index j : bundle)
    ids.push_back(instance.project_id(j));
  return ids;
}

ValidationReport validate(const PBInstance &instance) {
  ValidationReport report;
  if (instance.budget().sign() <= 0)
    report.push_back({"nonpositive budget",
                      "budget " + instance.budget().str() + " is not positive"});
  for (std::size_t i = 1; i < instance.num_voters(); ++i)
    if (instance.voter_id(i) == instance.voter_id(i - 1))
      report.push_back({"duplicate id",
                        "voter id \"" + instance.voter_id(i) + "\" repeats"});
  for (std::size_t j = 1; j < instance.num_projects(); ++j)
    if (instance.project_id(j) == instance.project_id(j - 1))
      report.push_back({"duplicate id",
                        "project id \"" + instance.project_id(j) + "\" repeats"});
  for (std::size_t j = 0; j < instance.num_projects(); ++j)
    if (instance.cost(j).sign() <= 0)
      report.push_back({"nonpositive cost", "project \"" +
                                                instance.project_id(j) +
                                                "\" has cost " +
                                                instance.cost(j).str()});
  for (std::size_t i = 0; i < instance.num_voters(); ++i)
    for (std::size_t j = 0; j < instance.num_projects(); ++j) {
      const auto &u = instance.utility(i, j);
      if (u.sign() < 0 || u > Rational(1))
        report.push_back({"utility out of [0,1]",
                          "voter \"" + instance.voter_id(i) + "\", project \"" +
                              instance.project_id(j) + "\": " + u.str()});
    }
  return report;
}

PBInstance binarize(const PBInstance &instance, const Rational &threshold) {
  if (threshold.sign() <= 0 || threshold > Rational(1))
    throw InputError("binarization threshold must lie in (0,1], got " +
                     threshold.str());
  std::vector<std::vector<Rational>> table(
      instance.num_voters(), std::vector<Rational>(instance.num_projects()));
  for (Index i = 0; i < instance.num_voters(); ++i)
    for (Index j = 0; j < instance.num_projects(); ++j)
      table[i][j] = instance.utility(i, j) >= threshold ? 1 : 0;
  return PBInstance(instance.voter_ids(), instance.projects(), std::move(table),
                    instance.budget(), instance.description());
}

Rational group_utility(const PBInstance &instance,
                       const GroupUtilityQuery &query) {
  std::vector<Index> group;
  for (const auto &id : query.group)
    group.push_back(instance.voter_index(id));
  return group_utility(instance, group,
                       Bundle::from_ids(instance, query.target));
}

Rational group_utility(const PBInstance &instance, std::span<const Index> group,
                       const Bundle &target) {
  Rational total;
  for (Index i : group)
    total += utility(instance, i, target);
  return total;
}

} // namespace pbprop
