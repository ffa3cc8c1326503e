#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <string>
#include <vector>

#include "pbprop/rational.hpp"

namespace pbprop {

using Index = std::size_t;

// A participatory-budgeting instance: voters, projects with positive
// rational costs, per-voter utilities in [0,1] and a budget.
// 
// Voters and projects are stored in canonical order (ids sorted
// lexicographically); every index in the library refers to that order and
// every tie-break follows it. Instances are immutable once built.
class PBInstance {
public:
  struct Project {
    std::string id;
    Rational cost;
    friend bool operator==(const Project &, const Project &) = default;
  };

  // utilities[i][j] is the utility of voters[i] for projects[j] in the
  // order given; both lists are re-sorted into canonical order. Value
  // checks are left to validate() so that malformed instances can be
  // reported on.
  PBInstance(std::vector<std::string> voters, std::vector<Project> projects,
             std::vector<std::vector<Rational>> utilities, Rational budget,
             std::string description = {});

  [[nodiscard]] std::size_t num_voters() const { return voters_.size(); }
  [[nodiscard]] std::size_t num_projects() const { return projects_.size(); }
  [[nodiscard]] const std::string &voter_id(Index i) const { return voters_[i]; }
  [[nodiscard]] const std::string &project_id(Index j) const {
    return projects_[j].id;
  }
  [[nodiscard]] const Rational &cost(Index j) const { return projects_[j].cost; }
  [[nodiscard]] const Rational &utility(Index i, Index j) const {
    return utilities_[i * projects_.size() + j];
  }
  [[nodiscard]] bool approves(Index i, Index j) const {
    return utility(i, j).sign() > 0;
  }
  [[nodiscard]] const Rational &budget() const { return budget_; }
  [[nodiscard]] const std::string &description() const { return description_; }
  [[nodiscard]] const std::vector<std::string> &voter_ids() const {
    return voters_;
  }
  [[nodiscard]] const std::vector<Project> &projects() const { return projects_; }

  [[nodiscard]] std::optional<Index> find_voter(std::string_view id) const;
  [[nodiscard]] std::optional<Index> find_project(std::string_view id) const;
  // Like find_*, but throws InputError for unknown ids.
  [[nodiscard]] Index voter_index(std::string_view id) const;
  [[nodiscard]] Index project_index(std::string_view id) const;

  // All utilities are 0 or 1.
  [[nodiscard]] bool is_approval() const;
  // Approval instance in which every project has the same cost.
  [[nodiscard]] bool is_mwv() const;
  // budget / unit cost for MWV instances when it is a positive integer.
  [[nodiscard]] std::optional<long> committee_size() const;

  friend bool operator==(const PBInstance &, const PBInstance &) = default;

private:
  std::vector<std::string> voters_;
  std::vector<Project> projects_;
  std::vector<Rational> utilities_; // row-major, voters x projects
  Rational budget_;
  std::string description_;
};

// Incremental construction by id, resolving utility maps against the
// declared projects. Omitted utilities are 0.
class InstanceBuilder {
public:
  InstanceBuilder &budget(Rational l);
  InstanceBuilder &description(std::string text);
  InstanceBuilder &project(std::string id, Rational cost);
  InstanceBuilder &voter(std::string id,
                         std::map<std::string, Rational> utilities = {});
  // Approval shorthand: utility 1 for each listed project.
  InstanceBuilder &approval_voter(std::string id,
                                  const std::vector<std::string> &approved);
  // Throws InputError on utilities naming undeclared projects.
  [[nodiscard]] PBInstance build() const;

private:
  Rational budget_ = 1;
  std::string description_;
  std::vector<PBInstance::Project> projects_;
  std::vector<std::pair<std::string, std::map<std::string, Rational>>> voters_;
};

// A set of projects, stored as sorted canonical indices.
class Bundle {
public:
  Bundle() = default;
  explicit Bundle(std::vector<Index> members);
  static Bundle from_mask(unsigned long long mask);
  static Bundle from_ids(const PBInstance &instance,
                         std::span<const std::string> ids);

  [[nodiscard]] const std::vector<Index> &members() const { return members_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] bool contains(Index j) const;
  [[nodiscard]] Bundle with(Index j) const;
  [[nodiscard]] Bundle without(Index j) const;
  // Requires every member < 64.
  [[nodiscard]] unsigned long long mask() const;

  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  friend bool operator==(const Bundle &, const Bundle &) = default;
  // Canonical order: by cardinality, then lexicographically by index.
  friend std::strong_ordering operator<=>(const Bundle &a, const Bundle &b);

private:
  std::vector<Index> members_;
};

[[nodiscard]] Rational cost(const PBInstance &instance, const Bundle &bundle);
// u_i(T) for a single voter.
[[nodiscard]] Rational utility(const PBInstance &instance, Index voter,
                               const Bundle &bundle);
// "{c1,c2}" using project ids.
[[nodiscard]] std::string format_bundle(const PBInstance &instance,
                                        const Bundle &bundle);
[[nodiscard]] std::string format_voters(const PBInstance &instance,
                                        std::span<const Index> voters);
[[nodiscard]] std::vector<std::string> bundle_ids(const PBInstance &instance,
                                                  const Bundle &bundle);

struct ValidationIssue {
  std::string kind;
  std::string message;
};
using ValidationReport = std::vector<ValidationIssue>;

// Lists every violated instance invariant; empty iff well-formed.
[[nodiscard]] ValidationReport validate(const PBInstance &instance);

// Approval instance with utility 1 exactly where the input utility is at
// least `threshold`. Throws InputError unless 0 < threshold <= 1.
[[nodiscard]] PBInstance binarize(const PBInstance &instance,
                                  const Rational &threshold);

struct GroupUtilityQuery {
  std::vector<std::string> group;
  std::vector<std::string> target;
};

// u_S(T) = sum over i in S and c in T of u_i(c). Throws InputError on
// unknown ids.
[[nodiscard]] Rational group_utility(const PBInstance &instance,
                                     const GroupUtilityQuery &query);
[[nodiscard]] Rational group_utility(const PBInstance &instance,
                                     std::span<const Index> group,
                                     const Bundle &target);

// Visits every subset of {0..n-1} as a bitmask, ordered by cardinality and
// then lexicographically by member indices. Stops early when the visitor
// returns false. n must be below 64.
template <typename Visitor>
bool for_each_subset_canonical(std::size_t n, Visitor &&visit);

// Indices of set bits, ascending.
[[nodiscard]] std::vector<Index> mask_members(unsigned long long mask);

} // namespace pbprop

#include "pbprop/detail/subsets.hpp"
