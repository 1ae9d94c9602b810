#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace schur {

// ---------------------------------------------------------------------------
// G-class functions

enum class GBaseKind { Const, Sign, AbsPow, ExpAbs, Identity };
enum class Parity { Even, Odd };
enum class GClass { G, G2 };

std::string_view to_string(Parity p);
std::string_view to_string(GClass c);

struct GBase {
  GBaseKind kind = GBaseKind::Identity;
  double param = 0.0;  // Const: the value a; AbsPow: the exponent s
  friend bool operator==(const GBase&, const GBase&) = default;
};

/// A scalar function built as a pointwise product of primitive factors:
/// constants a >= 0, sign(x), |x|^s, e^{|x|} and x. Every constructible spec
/// is even or odd, nonnegative at 0 and nondecreasing on [0, ∞), so it is in
/// the G-class; the G2 claim holds only when every factor is a G2 member.
class GFunctionSpec {
 public:
  static GFunctionSpec constant(double a);
  static GFunctionSpec sign();
  static GFunctionSpec abs_pow(double s);
  static GFunctionSpec exp_abs();
  static GFunctionSpec identity();
  /// x^k for integer k >= 0: |x|^k for even k, sign(x)|x|^k for odd k.
  static GFunctionSpec power(unsigned k);

  std::span<const GBase> factors() const { return factors_; }
  Parity parity() const;
  GClass claimed() const;
  bool odd() const { return parity() == Parity::Odd; }

  double operator()(double x) const;

  /// Canonical text form, e.g. "sign*abspow(0.5)"; parse_gfunction inverts it.
  std::string name() const;

  friend GFunctionSpec product(const GFunctionSpec& a, const GFunctionSpec& b);
  friend bool operator==(const GFunctionSpec&, const GFunctionSpec&) = default;

 private:
  explicit GFunctionSpec(std::vector<GBase> factors) : factors_(std::move(factors)) {}
  std::vector<GBase> factors_;
};

double eval_g(const GFunctionSpec& g, double x);
GFunctionSpec product(const GFunctionSpec& a, const GFunctionSpec& b);
std::optional<GFunctionSpec> parse_gfunction(std::string_view text);

/// If g is c·sign(x)^σ·|x|^k with integer k, its decomposition.
struct IntegerPowerForm {
  double coefficient = 1.0;
  unsigned sign_count = 0;
  unsigned degree = 0;
};
std::optional<IntegerPowerForm> integer_power_form(const GFunctionSpec& g);

/// True when g is exactly x ↦ x^k for some integer k (no extra constant).
bool is_monomial(const GFunctionSpec& g);

/// The corollary's members: constants, sign, |x|^s (s >= 1) and e^{|x|}.
std::vector<GFunctionSpec> g2_base_library();
/// Base members plus all pairwise products (including squares).
std::vector<GFunctionSpec> g2_library();
/// G2 library plus G-only members (|x|^s for 0 < s < 1 and their signed forms).
std::vector<GFunctionSpec> g_library();

// ---------------------------------------------------------------------------
// Coefficient functions f (Wright, Godunova–Levin, Finta weights)

enum class CoeffKind { PowerWeight, ConvexPiecewiseLinear, MonotonePiecewiseLinear, BoundedRatio, TableFunction };

std::string_view to_string(CoeffKind k);

class CoeffFunctionSpec {
 public:
  using Point = std::pair<double, double>;

  /// x ↦ x^t on [0, ∞), with 0^t := 0 for t > 0.
  static CoeffFunctionSpec power_weight(double t);
  /// Linear interpolation with linear extrapolation; slopes must be nondecreasing.
  static CoeffFunctionSpec convex_pwl(std::vector<Point> points);
  /// Linear interpolation, flat beyond the end points; slopes must share a sign.
  static CoeffFunctionSpec monotone_pwl(std::vector<Point> points);
  /// c0 + amp·sin(freq·x + phase) with 0 <= amp < 3c0/5, so max f < 4 min f.
  static CoeffFunctionSpec bounded_ratio(double c0, double amp, double freq, double phase);
  /// f(x) = value at an exactly matching key, default otherwise, on [lo, hi].
  static CoeffFunctionSpec table(std::vector<Point> points, double default_value, double lo, double hi);

  CoeffKind kind() const { return kind_; }
  std::span<const Point> points() const { return points_; }
  std::span<const double> params() const { return params_; }
  double domain_lo() const { return lo_; }
  double domain_hi() const { return hi_; }
  bool in_domain(double x) const { return x >= lo_ && x <= hi_; }

  /// DomainError outside [domain_lo, domain_hi].
  double operator()(double x) const;

  bool is_convex() const;
  bool is_monotone() const;
  /// Greatest lower bound over the domain (−∞ when unbounded below).
  double infimum() const;
  /// Least upper bound over the domain (+∞ when unbounded above).
  double supremum() const;

  std::string describe() const;

 private:
  CoeffKind kind_ = CoeffKind::PowerWeight;
  std::vector<Point> points_;
  std::vector<double> params_;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
};

/// Godunova–Levin's example on [0, 1]: 4 at x = 1/2, 1 elsewhere.
CoeffFunctionSpec godunova_levin_example();

// ---------------------------------------------------------------------------
// Certification

struct CheckResult {
  std::string id;
  /// Worst margin divided by (1 + largest term magnitude) at that sample.
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> witness;
  std::size_t evaluated = 0;
  /// Samples with non-finite values or excluded by a proviso.
  std::size_t skipped = 0;
};

struct CertReport {
  bool passed = true;
  std::vector<CheckResult> checks;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;

  const CheckResult* find(std::string_view id) const;
};

/// Tolerance on relative margins for a certification check to pass.
inline constexpr double kCertTol = 1e-9;

struct GridPlan {
  std::vector<double> magnitudes;
  std::size_t random_triples = 256;
  double random_max = 10.0;
  std::size_t lemma3_samples = 4096;
  bool finite_difference = false;

  /// 64 log-spaced magnitudes in [1e-3, 1e3] and 256 seeded uniform triples.
  static GridPlan defaults();
};

CertReport certify_class(const GFunctionSpec& g, GClass target, const GridPlan& grid, std::uint64_t seed);

/// Members of g2_library (G2) or g_library (G) that pass certify_class on the
/// default grid with seed 0. Computed once per target.
const std::vector<GFunctionSpec>& certified_library(GClass target);

enum class QVariantKind { Q, Qg, Qk };

struct QVariant {
  QVariantKind kind = QVariantKind::Q;
  std::optional<GFunctionSpec> g;  // Qg
  double k = 1.0;                  // Qk

  static QVariant q() { return {}; }
  static QVariant qg(GFunctionSpec g) { return {QVariantKind::Qg, std::move(g), 1.0}; }
  static QVariant qk(double k) { return {QVariantKind::Qk, std::nullopt, k}; }
};

struct QSample {
  double x = 0.0;
  double z = 0.0;
  double lambda = 0.5;
};

struct QSamplePlan {
  std::size_t random = 4096;
  /// Structured points (domain ends, quarter points, table keys) crossed
  /// with λ ∈ {1/4, 1/2, 3/4}.
  bool structured = true;
  std::vector<QSample> extra;

  static QSamplePlan defaults() { return {}; }
};

CertReport certify_qclass(const CoeffFunctionSpec& f, const QVariant& variant, const QSamplePlan& samples,
                          std::uint64_t seed);

/// Margin of the defining inequality at one sample: RHS − LHS (unnormalised),
/// with the scale used for normalisation. SkippedSample when the proviso
/// excludes the point.
struct QMargin {
  double margin = 0.0;
  double scale = 1.0;
};
QMargin qclass_margin(const CoeffFunctionSpec& f, const QVariant& variant, const QSample& s);

}  // namespace schur
