#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "schur/verifier.hpp"

namespace schur {

struct NelderMeadResult {
  std::vector<double> x;
  double fx = 0.0;
  std::size_t evaluations = 0;
};

/// Simplex descent (reflection 1, expansion 2, contraction 0.5, shrink 0.5)
/// from x0 with axis steps of `step`, stopping after `budget` evaluations or
/// when the simplex spread falls below `ftol`.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             double step, std::size_t budget, double ftol = 1e-14);

enum class Region { Satisfying, Violating };

struct FalsifyConfig {
  CaseId id = CaseId::S3;
  Region region = Region::Satisfying;
  /// The clause dropped in the violating region (a hypothesis_clauses id).
  std::string clause;
  std::size_t budget = 10000;
  std::uint64_t seed = 0;
  double tol = kScalarTol;
  /// Defaults to the identity.
  std::optional<GFunctionSpec> g;
  /// Coefficients x_i^t instead of free ones; S4 and S6 only.
  std::optional<double> finta_t;
  /// Each start gets budget/starts evaluations; starts continue until the
  /// budget is spent.
  std::size_t starts = 16;
};

struct FalsifyResult {
  /// Set when the best point has margin < −10·tol·scale.
  std::optional<Witness> witness;
  double best_relative = std::numeric_limits<double>::infinity();
  SchurInstance best_instance;
  std::size_t evaluations = 0;
};

/// Multistart simplex search for a negative margin over the region's
/// parametrization. Coefficient cases S2–S7 over REAL_MUL.
FalsifyResult falsify(const FalsifyConfig& cfg);

/// Maps a parameter vector to an instance of the configured region; exposed
/// for tests. `param_count` gives the vector length.
std::size_t param_count(const FalsifyConfig& cfg);
SchurInstance instance_from_params(const FalsifyConfig& cfg, const std::vector<double>& p);

struct NecessityWitness {
  std::string name;
  CaseId id = CaseId::S3;
  Witness witness;
  /// Closed form of the margin when one is known.
  std::string exact;
  double expected = 0.0;
};

/// The clause-violation witnesses: S3 coefficient clause, S4 with Finta
/// weights and the sum clause dropped, and the Q_g failure of the
/// Godunova–Levin function.
std::vector<NecessityWitness> necessity_suite(std::uint64_t seed);

}  // namespace schur
