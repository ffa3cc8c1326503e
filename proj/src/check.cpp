#include "pbprop/check.hpp"

#include <algorithm>

#include "pbprop/error.hpp"

namespace pbprop {

namespace {

bool valid_group(const PBInstance &instance, const std::vector<Index> &group) {
  return !group.empty() && std::is_sorted(group.begin(), group.end()) &&
         std::adjacent_find(group.begin(), group.end()) == group.end() &&
         group.back() < instance.num_voters();
}

bool valid_bundle(const PBInstance &instance, const Bundle &b) {
  return b.empty() || b.members().back() < instance.num_projects();
}

void validate_core_witness(const PBInstance &instance, const Bundle &w,
                           const CoreWitness &witness, ValidationReport &report) {
  if (!valid_group(instance, witness.group) ||
      !valid_bundle(instance, witness.target)) {
    report.push_back({"bad witness", "group or target outside the instance"});
    return;
  }
  const Rational n(static_cast<long>(instance.num_voters()));
  const Rational size(static_cast<long>(witness.group.size()));
  if (size * instance.budget() < cost(instance, witness.target) * n)
    report.push_back({"not affordable", "group cannot afford the target"});
  for (Index i : witness.group)
    if (!(utility(instance, i, witness.target) > utility(instance, i, w)))
      report.push_back({"no strict gain", "voter " + instance.voter_id(i) +
                                              " does not prefer the target"});
}

// Common and joint approvals of a group.
std::pair<Bundle, Bundle> approval_span(const PBInstance &instance,
                                        const std::vector<Index> &group) {
  std::vector<Index> common, any;
  for (Index j = 0; j < instance.num_projects(); ++j) {
    bool all = true, some = false;
    for (Index i : group) {
      all = all && instance.approves(i, j);
      some = some || instance.approves(i, j);
    }
    if (all)
      common.push_back(j);
    if (some)
      any.push_back(j);
  }
  return {Bundle(common), Bundle(any)};
}

Bundle intersect(const Bundle &a, const Bundle &b) {
  std::vector<Index> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return Bundle(out);
}

} // namespace

AxiomVerdict check_axiom(const PBInstance &instance, const Bundle &w,
                         Axiom axiom, const CheckOptions &options) {
  switch (axiom) {
  case Axiom::Core:
    return check_core(instance, w, options.limits);
  case Axiom::Ejr:
    return check_ejr(instance, w, false, options.limits);
  case Axiom::EjrUpToOne:
    return check_ejr(instance, w, true, options.limits);
  case Axiom::Pjr:
    return check_pjr(instance, w, false, options.limits);
  case Axiom::PjrUpToOne:
    return check_pjr(instance, w, true, options.limits);
  case Axiom::MwvPjr:
    return check_mwv_pjr(instance, w, options.limits);
  case Axiom::StrongBpjr:
    return check_strong_bpjr(instance, w, options.limits);
  case Axiom::Priceable:
    return check_priceable(instance, w, options.floor, options.limits);
  case Axiom::LaminarProportional:
    return is_laminar_proportional(instance, w, options.leaf_rule);
  case Axiom::CoreUAfford:
    return check_core_u_afford(instance, w, options.limits);
  }
  throw InputError("unknown axiom");
}

ValidationReport validate_verdict(const PBInstance &instance, const Bundle &w,
                                  const AxiomVerdict &verdict,
                                  LeafRule leaf_rule) {
  ValidationReport report;
  if (verdict.satisfied()) {
    if (verdict.witness)
      report.push_back({"stray witness", "a satisfied verdict carries a witness"});
    if (verdict.axiom == Axiom::Priceable) {
      if (!verdict.certificate)
        report.push_back({"missing certificate", "no price system attached"});
      else
        report = validate_price_system(instance, w, *verdict.certificate,
                                       verdict.floor.value_or(BudgetFloor::Zero));
    }
    return report;
  }
  if (!verdict.witness) {
    report.push_back({"missing witness", "a violated verdict carries no witness"});
    return report;
  }
  const Witness &witness = *verdict.witness;

  switch (verdict.axiom) {
  case Axiom::Core:
  case Axiom::CoreUAfford: {
    const auto *core = std::get_if<CoreWitness>(&witness);
    if (!core)
      break;
    validate_core_witness(instance, w, *core, report);
    if (verdict.axiom == Axiom::CoreUAfford && report.empty()) {
      const auto root = require_laminar(instance);
      if (!is_u_affordable(instance, core->target,
                           unanimity_pool(root, core->group)))
        report.push_back({"not u-affordable",
                          "target misses a project as costly as a unanimous one"});
    }
    return report;
  }
  case Axiom::Ejr:
  case Axiom::EjrUpToOne:
  case Axiom::Pjr:
  case Axiom::PjrUpToOne:
    if (const auto *c = std::get_if<CohesionWitness>(&witness))
      return validate_cohesion(instance, w, verdict.axiom, *c);
    break;
  case Axiom::MwvPjr: {
    const auto *c = std::get_if<CommitteeWitness>(&witness);
    if (!c)
      break;
    const auto k = instance.committee_size();
    if (!k || !valid_group(instance, c->group)) {
      report.push_back({"bad witness", "not a unit-cost instance or bad group"});
      return report;
    }
    const auto [common, any] = approval_span(instance, c->group);
    const long n = static_cast<long>(instance.num_voters());
    if (c->ell < 1 || c->ell > *k)
      report.push_back({"bad ell", "ell outside 1..k"});
    if (static_cast<long>(c->group.size()) * *k < c->ell * n)
      report.push_back({"not cohesive", "group smaller than ell * n / k"});
    if (static_cast<long>(common.size()) < c->ell)
      report.push_back({"not cohesive", "fewer than ell common approvals"});
    if (static_cast<long>(intersect(any, w).size()) >= c->ell)
      report.push_back({"represented", "group already has ell approved winners"});
    return report;
  }
  case Axiom::StrongBpjr: {
    const auto *s = std::get_if<SpendingWitness>(&witness);
    if (!s)
      break;
    if (!valid_group(instance, s->group)) {
      report.push_back({"bad witness", "bad group"});
      return report;
    }
    const auto [common, any] = approval_span(instance, s->group);
    const Rational n(static_cast<long>(instance.num_voters()));
    const Rational size(static_cast<long>(s->group.size()));
    if (s->ell.sign() <= 0 || s->ell > instance.budget())
      report.push_back({"bad ell", "ell outside (0, l]"});
    if (size * instance.budget() < s->ell * n)
      report.push_back({"not cohesive", "group smaller than ell * n / l"});
    if (cost(instance, common) < s->ell)
      report.push_back({"not cohesive", "common approvals cost less than ell"});
    if (cost(instance, intersect(any, w)) >= s->ell)
      report.push_back({"represented", "approved winners cost at least ell"});
    return report;
  }
  case Axiom::Priceable: {
    const auto *f = std::get_if<InfeasibilityWitness>(&witness);
    if (!f)
      break;
    const auto system = priceability_system(
        instance, w, verdict.floor.value_or(BudgetFloor::Zero));
    std::vector<std::string> labels;
    for (const auto &c : system.constraints())
      labels.push_back(c.label);
    if (labels != f->labels)
      report.push_back({"wrong system", "multipliers refer to other constraints"});
    else if (!certifies_infeasibility(system, f->multipliers))
      report.push_back({"not a certificate",
                        "multipliers do not combine to a contradiction"});
    return report;
  }
  case Axiom::LaminarProportional:
    if (std::holds_alternative<TextWitness>(witness)) {
      const auto root = require_laminar(instance);
      if (certify_laminar(instance, root, w, leaf_rule).empty())
        report.push_back({"certified", "the bundle is laminar proportional"});
      return report;
    }
    break;
  }
  report.push_back({"wrong witness kind", "witness does not match the axiom"});
  return report;
}

} // namespace pbprop
