#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "schur/engine.hpp"
#include "schur/linalg.hpp"
#include "schur/random.hpp"

namespace schur {

/// λ_min of a symmetric matrix.
double loewner_margin(const Matrix& m);

struct ChainCondition {
  std::size_t m = 3;
  /// x₁+x_m ⪰ x₂+x_{m−1} (m = 4, 5); x₁+x₆ ⪰ x₂+x₅ ⪰ x₃+x₄ (m = 6, 7).
  bool sum_chain = false;
  bool require_invertible_x2_xm = false;
};

/// Probability that an increment or slack is set to exactly zero.
inline constexpr double kBoundaryProbability = 0.2;
/// Identity shift making x₂ − x₆ positive definite.
inline constexpr double kInvertibleShift = 1e-3;
inline constexpr std::size_t kMaxGeneratorDim = 8;

/// Random PSD Gram matrix GᵀG/dim with G of random rank; zero with
/// probability `p_zero`.
Matrix random_psd(Rng& rng, std::size_t dim, double p_zero = kBoundaryProbability);
Matrix random_symmetric(Rng& rng, std::size_t dim);

/// Nonincreasing Loewner chain x₁ ⪰ … ⪰ x_m from PSD increments.
std::vector<Matrix> gen_ordered_chain(const ChainCondition& cond, std::size_t dim, Rng& rng);
std::vector<Matrix> gen_ordered_chain(const ChainCondition& cond, std::size_t dim, std::uint64_t seed);

/// The same construction at dimension 1.
std::vector<double> gen_scalar_chain(const ChainCondition& cond, Rng& rng);

/// x_i = Q·diag(d_i)·Qᵀ from the given spectra (one vector per variable).
std::vector<Matrix> commuting_from_spectra(const Matrix& q, const std::vector<std::vector<double>>& spectra);

/// Shared-eigenbasis chain whose spectra are scalar chains per coordinate.
/// With `identity_basis` the outputs are diagonal.
struct CommutingChain {
  Matrix basis;
  std::vector<Matrix> xs;
};
CommutingChain gen_commuting_chain(const ChainCondition& cond, std::size_t dim, Rng& rng,
                                   bool identity_basis = false);

/// Coefficient chain of a ring case (C3P, R4–R7).
struct CoeffPattern {
  CaseId id = CaseId::R4;
  std::size_t dim = 2;
  /// Even-slot coefficients are drawn sign-indefinite under their hats.
  bool signed_coeffs = true;
};

struct CoeffChain {
  std::vector<Matrix> coeffs;
  /// One slot per coefficient; even (1-based) slots hold the upper bounds.
  std::vector<Matrix> hats;
};

/// With a basis, every coefficient is diagonal in it (so it commutes with
/// chains built on the same basis); without one, PSD increments are general.
CoeffChain gen_coeff_chain(const CoeffPattern& pat, Rng& rng, const std::optional<Matrix>& basis = std::nullopt);

/// Real coefficients satisfying the case's clauses (S2–S7, C3).
std::vector<double> gen_scalar_coeffs(CaseId id, Rng& rng);

}  // namespace schur
