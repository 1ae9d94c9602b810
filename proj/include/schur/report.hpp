#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "schur/falsify.hpp"
#include "schur/gfun.hpp"
#include "schur/verifier.hpp"

namespace schur {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportVersion = "1.0.0";

Json element_json(const OrderedElement& e);
Json instance_json(CaseId id, const SchurInstance& inst);
Json witness_json(CaseId id, const Witness& w);

/// Report with the fixed leading keys {version, command, case, structure,
/// dim, trials, seed, tol, min_margin, violations, wall_time_ms}; an infinite
/// min_margin serializes as null.
Json campaign_json(const VerificationReport& rep);

Json certification_json(const GFunctionSpec& g, GClass target, const CertReport& rep);

Json falsify_json(const FalsifyConfig& cfg, const FalsifyResult& res, double wall_time_ms);

Json necessity_json(const NecessityWitness& nw);

/// One campaign of the suite.
struct SuiteEntry {
  CaseId id;
  StructureId structure;
  std::size_t dim;
  std::size_t trials;
};

/// Campaign sizes run by `suite`.
std::vector<SuiteEntry> suite_plan();

/// Library members certified by `suite`, each against its claimed class.
std::vector<GFunctionSpec> suite_certification_members();

struct SuiteResult {
  Json report;
  bool passed = true;
};

SuiteResult run_suite(std::uint64_t seed);

/// Multi-line human-readable summary of a report produced by this module.
std::string report_text(const Json& report);

}  // namespace schur
