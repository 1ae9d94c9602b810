#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schur/gfun.hpp"
#include "schur/ordered.hpp"

namespace schur {

enum class CaseId { S2, S3, S3F, S3V, S3VG, S4, S5, S6, S7, QEQ, C3, C3P, R4, R5, R6, R7 };

std::string_view to_string(CaseId id);
std::optional<CaseId> parse_case_id(std::string_view name);

enum class GRequirement { None, G, G2, OddG };

/// Which 3-variable f-weighted statement an S3F instance exercises.
enum class S3FForm { Wright, ConvexCorollary, Finta };

std::string_view to_string(S3FForm form);

struct TheoremCase {
  CaseId id = CaseId::S3;
  /// Number of x variables (QEQ: x and z; y is derived from λ).
  std::size_t arity = 3;
  GRequirement g_req = GRequirement::None;
  /// Scalar-only statement over REAL_MUL.
  bool scalar = true;
  /// Coefficients live in the ring carrier and differences are star-powers.
  bool ring = false;
  /// Needs (x₂ − x₆)⁻¹ ≻ 0.
  bool needs_inverse = false;
  std::string_view anchor;
};

std::span<const TheoremCase> registry();
const TheoremCase& theorem_case(CaseId id);

/// Whether `s` is a structure the case's statement covers.
bool supports_structure(const TheoremCase& c, const StructureDescriptor& s);

struct SchurInstance {
  StructureDescriptor structure = StructureDescriptor::real_mul();
  std::vector<OrderedElement> xs;
  /// Real scalars for S- and C3 cases, ring elements for C3P and R cases.
  /// May be left empty for f-weighted cases; they are then built from f.
  std::vector<OrderedElement> coeffs;
  /// Upper bounds of {a_i, −a_i}; empty, or one slot per variable with only
  /// the even (1-based) slots read.
  std::vector<OrderedElement> hats;
  std::optional<GFunctionSpec> g;
  std::optional<CoeffFunctionSpec> f;
  S3FForm form = S3FForm::ConvexCorollary;
  /// Star exponent for C3P and R cases.
  unsigned n = 1;
  /// C3P polynomial p(x) = Σ poly[k]·x^k; empty means p(x) = x^n.
  std::vector<double> poly;
  /// S3V: (a, b, c). S3VG: (a, ·, c) with b derived from alpha.
  std::array<double, 3> abc{};
  double alpha = 0.5;
  /// QEQ: y = λx + (1 − λ)z.
  double lambda = 0.5;
};

struct Margin {
  double value = 0.0;
  std::optional<OrderedElement> element;
  double scale = 1.0;

  bool violates(double tol) const { return value < -tol * scale; }
  double relative() const { return value / scale; }
};

/// The cited left-hand side (S-cases, C3, C3P, R-cases) or the Q_g defining
/// inequality (QEQ), with the scale used for tolerance decisions.
Margin eval_margin(CaseId id, const SchurInstance& inst);

struct HypothesisResult {
  bool satisfied = true;
  std::vector<std::string> failed;
};

HypothesisResult check_hypothesis(CaseId id, const SchurInstance& inst, double tol);

/// Clause identifiers check_hypothesis may report for `id`.
std::vector<std::string> hypothesis_clauses(CaseId id);

struct Reduction {
  /// Reduced sum over the first m−2 tilde terms, the (ã − αã) correction,
  /// and the tail a_m(γ_m + αγ_{m−1}).
  std::array<Margin, 3> parts;
  Margin direct;
  double residual = 0.0;
  SchurInstance normalized;
};

Reduction decompose_reduction(CaseId id, const SchurInstance& inst);

/// Coefficients actually used by the evaluator: explicit ones, or f applied
/// per the case's recipe.
std::vector<OrderedElement> resolved_coeffs(CaseId id, const SchurInstance& inst);

/// Even-slot upper bounds, given or derived (|a| for scalars, ±a when a is
/// comparable with 0). ConfigError when neither is possible.
std::vector<OrderedElement> resolved_hats(const SchurInstance& inst, double tol);

struct CoeffBuild {
  enum class Kind { FintaPower, FromF, VornicuFromF, VornicuGeneral };
  Kind kind = Kind::FromF;
  double t = 1.0;
  std::optional<CoeffFunctionSpec> f;
  double a = 0.0, b = 0.0, c = 0.0, alpha = 0.5;

  static CoeffBuild finta(double t) { return {Kind::FintaPower, t, std::nullopt}; }
  static CoeffBuild from_f(CoeffFunctionSpec f) { return {Kind::FromF, 1.0, std::move(f)}; }
  static CoeffBuild vornicu(CoeffFunctionSpec f, double a, double b, double c) {
    return {Kind::VornicuFromF, 1.0, std::move(f), a, b, c};
  }
  static CoeffBuild vornicu_general(CoeffFunctionSpec f, double a, double c, double alpha) {
    return {Kind::VornicuGeneral, 1.0, std::move(f), a, 0.0, c, alpha};
  }
};

std::vector<double> build_coeffs(const CoeffBuild& build, std::span<const double> xs);

struct QeqCheck {
  Margin schur;
  Margin qg;
  bool signs_agree = true;
};

/// Evaluates the 3-variable f-weighted sum at (x, λx + (1−λ)z, z) and the Q_g
/// inequality at (x, z, λ). SkippedSample when g vanishes at λ(x−z) or
/// (1−λ)(x−z).
QeqCheck qeq_cross_check(const CoeffFunctionSpec& f, const GFunctionSpec& g, double x, double z, double lambda,
                         double tol);

}  // namespace schur
