#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "schur/linalg.hpp"

namespace schur {

/// Default comparison tolerances: scalar band and Loewner PSD threshold.
inline constexpr double kScalarTol = 1e-9;
inline constexpr double kMatrixTol = 1e-8;

enum class ElementKind { Scalar, Vector, Matrix };

std::string_view to_string(ElementKind kind);

/// A value in one of the carriers: a real scalar, a real vector (optionally
/// carrying quadrature weights), or a real symmetric matrix. Immutable once
/// built; arithmetic returns new elements.
class OrderedElement {
 public:
  OrderedElement() : OrderedElement(scalar(0.0)) {}

  static OrderedElement scalar(double v);
  static OrderedElement vector(std::vector<double> values, std::vector<double> weights = {});
  /// Symmetrises its argument; a non-square matrix is a DimensionError.
  static OrderedElement matrix(const Matrix& m);
  static OrderedElement zero_like(const OrderedElement& e);

  ElementKind kind() const;
  std::size_t dim() const;

  double as_scalar() const;
  std::span<const double> values() const;
  std::span<const double> weights() const;
  const Matrix& as_matrix() const;

  /// Frobenius/Euclidean norm (|v| for scalars).
  double norm() const;
  double max_abs() const;

  OrderedElement operator-() const;
  friend OrderedElement operator+(const OrderedElement& a, const OrderedElement& b);
  friend OrderedElement operator-(const OrderedElement& a, const OrderedElement& b);
  friend OrderedElement operator*(double s, const OrderedElement& a);

  friend bool operator==(const OrderedElement& a, const OrderedElement& b);

 private:
  struct VectorPayload {
    std::vector<double> values;
    std::vector<double> weights;
    friend bool operator==(const VectorPayload&, const VectorPayload&) = default;
  };
  using Payload = std::variant<double, VectorPayload, Matrix>;

  explicit OrderedElement(Payload p) : payload_(std::move(p)) {}
  Payload payload_;
};

enum class StructureId {
  RealMul,
  VecDot,
  VecBilinear,
  FuncQuad,
  MatmulCommuting,
  Frobenius,
  Hadamard,
  Kronecker,
  RKronecker,
};

enum class OrderKind { Total, ElementwiseCone, Loewner };

std::string_view to_string(StructureId id);
std::optional<StructureId> parse_structure_id(std::string_view name);

/// One row of the (I, J, K, ∗, ⪯) table: carriers, their orders, and what
/// the star product is allowed to do.
struct StructureDescriptor {
  StructureId id = StructureId::RealMul;
  ElementKind carrier_i = ElementKind::Scalar;
  ElementKind carrier_j = ElementKind::Scalar;
  ElementKind carrier_k = ElementKind::Scalar;
  OrderKind order_i = OrderKind::Total;
  OrderKind order_k = OrderKind::Total;
  bool symmetric_star = true;
  bool associative_star = true;
  bool is_ring = true;
  bool is_real_vector_space = true;
  Matrix bilinear;              // VecBilinear only; entrywise nonnegative
  std::vector<double> weights;  // FuncQuad only; quadrature weights, >= 0

  static StructureDescriptor real_mul();
  static StructureDescriptor vec_dot();
  static StructureDescriptor vec_bilinear(Matrix a);
  static StructureDescriptor func_quad(std::vector<double> weights);
  static StructureDescriptor matmul_commuting();
  static StructureDescriptor frobenius();
  static StructureDescriptor hadamard();
  static StructureDescriptor kronecker();
  static StructureDescriptor rkronecker();

  /// Builds the descriptor for `id`; structures with parameters get the
  /// defaults for `dim` (all-ones bilinear form, trapezoid weights on [0,1]).
  static StructureDescriptor from_id(StructureId id, std::size_t dim);

  /// ∗ is commutative and associative on the ring carrier.
  bool commutative_ring() const { return is_ring && symmetric_star && associative_star; }
  double default_tol() const { return carrier_k == ElementKind::Matrix ? kMatrixTol : kScalarTol; }
};

/// Trapezoid weights for `n` equally spaced nodes on [0, 1].
std::vector<double> trapezoid_weights(std::size_t n);

enum class OrderTag { Greater, Less, Equal, Incomparable };

std::string_view to_string(OrderTag tag);

struct OrderResult {
  OrderTag tag = OrderTag::Equal;
  /// Signed smallest entry/eigenvalue of a − b (a − b itself for scalars).
  double margin = 0.0;
  /// Absolute threshold the comparison used.
  double threshold = 0.0;

  bool at_least() const { return tag == OrderTag::Greater || tag == OrderTag::Equal; }
  bool at_most() const { return tag == OrderTag::Less || tag == OrderTag::Equal; }
};

/// Scalars: sign of a − b with an absolute band ±tol. Vectors: elementwise
/// cone with threshold tol·(1 + max |entry|). Matrices: Loewner order through
/// the extreme eigenvalues of a − b with threshold tol·(1 + max ‖·‖_F).
OrderResult cmp(const OrderedElement& a, const OrderedElement& b, double tol);

/// a ⪰ 0 within tolerance.
bool nonnegative(const OrderedElement& a, double tol);

/// Trusted skips the MATMUL_COMMUTING commutator guard; for products of
/// quantities derived from inputs already checked by require_commuting.
enum class StarCheck { Checked, Trusted };

/// The star product a ∗ b of structure `s`.
OrderedElement star(const StructureDescriptor& s, const OrderedElement& a, const OrderedElement& b,
                    StarCheck check = StarCheck::Checked);

/// Pairwise commutator guard over `elems` (MATMUL_COMMUTING only; no-op
/// elsewhere). ConfigError on the first non-commuting pair.
void require_commuting(const StructureDescriptor& s, std::span<const OrderedElement> elems);

/// Star-identity for elements shaped like `like`, when the structure has one.
std::optional<OrderedElement> star_identity(const StructureDescriptor& s, const OrderedElement& like);

/// n-fold star product a ∗ a ∗ … ∗ a (left to right); n = 0 gives the
/// star-identity.
OrderedElement pow_star(const StructureDescriptor& s, const OrderedElement& a, unsigned n,
                        StarCheck check = StarCheck::Checked);

/// u is an upper bound of {b, −b}.
bool is_upper_bound(const StructureDescriptor& s, const OrderedElement& u, const OrderedElement& b, double tol);

/// Loewner-style margin of an element against 0: the value itself for
/// scalars, the smallest entry for vectors, λ_min for matrices.
double element_margin(const OrderedElement& e);

}  // namespace schur
