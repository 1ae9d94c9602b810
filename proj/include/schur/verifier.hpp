#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "schur/engine.hpp"
#include "schur/random.hpp"

namespace schur {

/// How instances of a case are drawn.
struct GenConfig {
  StructureDescriptor structure = StructureDescriptor::real_mul();
  std::size_t dim = 1;
  /// g candidates; empty means the library matching the case's requirement.
  std::vector<GFunctionSpec> g_pool;
  /// Star exponents for C3P and R cases; empty means the case default.
  std::vector<unsigned> n_pool;
  /// S3F statement; empty means drawn per trial.
  std::optional<S3FForm> form;
  /// Share of S4/S6 trials weighted by x_i^t instead of free coefficients.
  double finta_fraction = 0.25;
  /// Commuting chains use the identity basis (diagonal data).
  bool identity_basis = false;
};

/// Structure from (id, dim) plus the case's default pools.
GenConfig default_gen_config(CaseId id, StructureId structure, std::size_t dim);

/// A hypothesis-satisfying instance; ConfigError when the case/structure pair
/// has no generator.
SchurInstance generate_instance(CaseId id, const GenConfig& cfg, Rng& rng);

struct Witness {
  SchurInstance instance;
  /// Raw margin value (sum, or λ_min of the sum).
  double margin = 0.0;
  double scale = 1.0;
  bool hypothesis_satisfied = true;
  std::vector<std::string> failed_clauses;
  std::size_t trial = 0;
  /// Set when evaluation raised instead of producing a margin.
  std::string error;
};

struct VerificationReport {
  CaseId case_id = CaseId::S3;
  StructureId structure = StructureId::RealMul;
  std::size_t dim = 1;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double tol = kScalarTol;
  /// Smallest margin/scale over evaluated trials; +∞ when none.
  double min_margin = std::numeric_limits<double>::infinity();
  std::optional<Witness> min_margin_witness;
  std::vector<Witness> violations;
  /// Trials excluded by a definition's proviso.
  std::size_t skipped = 0;
  double wall_time_ms = 0.0;

  bool passed() const { return violations.empty(); }
};

/// Worker threads for campaigns: THREADS if set, else hardware concurrency.
std::size_t campaign_threads();

/// Runs `fn(i)` for i in [0, n) on `threads` workers.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn);

VerificationReport run_campaign(CaseId id, const GenConfig& cfg, std::size_t trials, std::uint64_t seed, double tol);

}  // namespace schur
