#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pbprop/axioms.hpp"
#include "pbprop/error.hpp"
#include "pbprop/laminar.hpp"
#include "pbprop/rules.hpp"

namespace pbprop {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportVersion = 1;

// Thrown when a file parses but describes an ill-formed instance.
class InvalidInstance : public InputError {
public:
  InvalidInstance(const std::string &what, ValidationReport issues)
      : InputError(what), issues_(std::move(issues)) {}
  [[nodiscard]] const ValidationReport &issues() const { return issues_; }

private:
  ValidationReport issues_;
};

// Instance files are JSON:
//   {"meta": {"budget": "1", "description": "..."},
//    "projects": [{"id": "c1", "cost": "2/5"}, ...],
//    "voters": [{"id": "v1", "utilities": {"c1": "0.3", ...}}, ...]}
// Numbers are strings ("p", "p/q" or a decimal read exactly); plain JSON
// integers are accepted too. Omitted utilities are 0.
PBInstance parse_instance(std::string_view text);
std::string write_instance(const PBInstance &instance);

// Pabulib .pb files (META / PROJECTS / VOTES, semicolon separated) with
// approval ballots. Other vote types are rejected.
PBInstance parse_pabulib(std::string_view text);

// Reads a file, choosing the parser by extension (.pb is Pabulib).
PBInstance load_instance(const std::string &path);

// FNV-1a over the canonical JSON encoding, as 16 hex digits.
std::string instance_digest(const PBInstance &instance);

Json rational_json(const Rational &r);
Rational json_rational(const Json &j);

Json bundle_json(const PBInstance &instance, const Bundle &bundle);
Bundle json_bundle(const PBInstance &instance, const Json &j);

Json verdict_json(const PBInstance &instance, const AxiomVerdict &verdict);
// Inverse of verdict_json; throws InputError on malformed input.
AxiomVerdict json_verdict(const PBInstance &instance, const Json &j);

Json price_system_json(const PBInstance &instance, const PriceSystem &ps);
PriceSystem json_price_system(const PBInstance &instance, const Json &j);

Json phragmen_json(const PBInstance &instance, const PhragmenResult &result);
Json pav_json(const PBInstance &instance, const PavResult &result);
Json rule_x_json(const PBInstance &instance, const RuleXResult &result);

Json decomposition_json(const PBInstance &instance, const LaminarNode &node);
LaminarNode json_decomposition(const PBInstance &instance, const Json &j);

// Envelope shared by every report: versions and the instance digest.
Json report_header(const PBInstance &instance, std::string_view command);

} // namespace pbprop
