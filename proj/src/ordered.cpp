#include "schur/ordered.hpp"

#include <algorithm>
#include <cmath>

#include "schur/errors.hpp"

namespace schur {

std::string_view to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Scalar: return "scalar";
    case ElementKind::Vector: return "vector";
    case ElementKind::Matrix: return "matrix";
  }
  return "?";
}

OrderedElement OrderedElement::scalar(double v) { return OrderedElement(Payload{v}); }

OrderedElement OrderedElement::vector(std::vector<double> values, std::vector<double> weights) {
  if (values.empty()) throw DimensionError("empty vector element");
  if (!weights.empty()) {
    if (weights.size() != values.size()) throw DimensionError("weight vector length differs from values");
    for (double w : weights)
      if (!(w >= 0.0)) throw DomainError("quadrature weights must be nonnegative");
  }
  return OrderedElement(Payload{VectorPayload{std::move(values), std::move(weights)}});
}

OrderedElement OrderedElement::matrix(const Matrix& m) {
  if (!m.square() || m.rows() == 0) throw DimensionError("matrix element must be square and nonempty");
  return OrderedElement(Payload{symmetrize(m)});
}

OrderedElement OrderedElement::zero_like(const OrderedElement& e) {
  switch (e.kind()) {
    case ElementKind::Scalar: return scalar(0.0);
    case ElementKind::Vector:
      return vector(std::vector<double>(e.dim(), 0.0), std::vector<double>(e.weights().begin(), e.weights().end()));
    case ElementKind::Matrix: return matrix(Matrix(e.dim(), e.dim()));
  }
  return scalar(0.0);
}

ElementKind OrderedElement::kind() const { return static_cast<ElementKind>(payload_.index()); }

std::size_t OrderedElement::dim() const {
  switch (kind()) {
    case ElementKind::Scalar: return 1;
    case ElementKind::Vector: return std::get<VectorPayload>(payload_).values.size();
    case ElementKind::Matrix: return std::get<Matrix>(payload_).rows();
  }
  return 0;
}

double OrderedElement::as_scalar() const {
  if (kind() != ElementKind::Scalar) throw DimensionError("element is not a scalar");
  return std::get<double>(payload_);
}

std::span<const double> OrderedElement::values() const {
  switch (kind()) {
    case ElementKind::Scalar: return {&std::get<double>(payload_), 1};
    case ElementKind::Vector: return std::get<VectorPayload>(payload_).values;
    case ElementKind::Matrix: return std::get<Matrix>(payload_).data();
  }
  return {};
}

std::span<const double> OrderedElement::weights() const {
  if (kind() != ElementKind::Vector) return {};
  return std::get<VectorPayload>(payload_).weights;
}

const Matrix& OrderedElement::as_matrix() const {
  if (kind() != ElementKind::Matrix) throw DimensionError("element is not a matrix");
  return std::get<Matrix>(payload_);
}

double OrderedElement::norm() const {
  double s = 0.0;
  for (double v : values()) s += v * v;
  return std::sqrt(s);
}

double OrderedElement::max_abs() const {
  double m = 0.0;
  for (double v : values()) m = std::max(m, std::abs(v));
  return m;
}

namespace {

void require_same_shape(const OrderedElement& a, const OrderedElement& b, const char* what) {
  if (a.kind() != b.kind() || a.dim() != b.dim()) {
    throw DimensionError(std::string(what) + ": " + std::string(to_string(a.kind())) + "[" +
                         std::to_string(a.dim()) + "] vs " + std::string(to_string(b.kind())) + "[" +
                         std::to_string(b.dim()) + "]");
  }
}

std::vector<double> pick_weights(const OrderedElement& a, const OrderedElement& b) {
  auto w = a.weights().empty() ? b.weights() : a.weights();
  return {w.begin(), w.end()};
}

template <typename Op>
OrderedElement combine(const OrderedElement& a, const OrderedElement& b, Op op) {
  require_same_shape(a, b, "element arithmetic");
  switch (a.kind()) {
    case ElementKind::Scalar: return OrderedElement::scalar(op(a.as_scalar(), b.as_scalar()));
    case ElementKind::Vector: {
      std::vector<double> out(a.dim());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a.values()[i], b.values()[i]);
      return OrderedElement::vector(std::move(out), pick_weights(a, b));
    }
    case ElementKind::Matrix: {
      Matrix out(a.dim(), a.dim());
      const auto& ma = a.as_matrix();
      const auto& mb = b.as_matrix();
      for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = op(ma(i, j), mb(i, j));
      return OrderedElement::matrix(out);
    }
  }
  return a;
}

}  // namespace

OrderedElement OrderedElement::operator-() const { return -1.0 * *this; }

OrderedElement operator+(const OrderedElement& a, const OrderedElement& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}

OrderedElement operator-(const OrderedElement& a, const OrderedElement& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}

OrderedElement operator*(double s, const OrderedElement& a) {
  switch (a.kind()) {
    case ElementKind::Scalar: return OrderedElement::scalar(s * a.as_scalar());
    case ElementKind::Vector: {
      std::vector<double> out(a.values().begin(), a.values().end());
      for (double& v : out) v *= s;
      return OrderedElement::vector(std::move(out), pick_weights(a, a));
    }
    case ElementKind::Matrix: return OrderedElement::matrix(s * a.as_matrix());
  }
  return a;
}

bool operator==(const OrderedElement& a, const OrderedElement& b) { return a.payload_ == b.payload_; }

// ---------------------------------------------------------------------------
// Structures

std::string_view to_string(StructureId id) {
  switch (id) {
    case StructureId::RealMul: return "REAL_MUL";
    case StructureId::VecDot: return "VEC_DOT";
    case StructureId::VecBilinear: return "VEC_BILINEAR";
    case StructureId::FuncQuad: return "FUNC_QUAD";
    case StructureId::MatmulCommuting: return "MATMUL_COMMUTING";
    case StructureId::Frobenius: return "FROBENIUS";
    case StructureId::Hadamard: return "HADAMARD";
    case StructureId::Kronecker: return "KRONECKER";
    case StructureId::RKronecker: return "RKRONECKER";
  }
  return "?";
}

std::optional<StructureId> parse_structure_id(std::string_view name) {
  for (auto id : {StructureId::RealMul, StructureId::VecDot, StructureId::VecBilinear, StructureId::FuncQuad,
                  StructureId::MatmulCommuting, StructureId::Frobenius, StructureId::Hadamard,
                  StructureId::Kronecker, StructureId::RKronecker}) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

StructureDescriptor StructureDescriptor::real_mul() { return {}; }

StructureDescriptor StructureDescriptor::vec_dot() {
  StructureDescriptor s;
  s.id = StructureId::VecDot;
  s.carrier_i = s.carrier_j = ElementKind::Vector;
  s.carrier_k = ElementKind::Scalar;
  s.order_i = OrderKind::ElementwiseCone;
  s.order_k = OrderKind::Total;
  s.associative_star = false;
  s.is_ring = false;
  return s;
}

StructureDescriptor StructureDescriptor::vec_bilinear(Matrix a) {
  if (!a.square()) throw DimensionError("bilinear form must be square");
  for (double v : a.data())
    if (!(v >= 0.0)) throw DomainError("bilinear form must be entrywise nonnegative");
  StructureDescriptor s = vec_dot();
  s.id = StructureId::VecBilinear;
  s.symmetric_star = asymmetry(a) == 0.0;
  s.bilinear = std::move(a);
  return s;
}

StructureDescriptor StructureDescriptor::func_quad(std::vector<double> weights) {
  if (weights.empty()) throw DimensionError("quadrature needs at least one node");
  for (double w : weights)
    if (!(w >= 0.0)) throw DomainError("quadrature weights must be nonnegative");
  StructureDescriptor s = vec_dot();
  s.id = StructureId::FuncQuad;
  s.weights = std::move(weights);
  return s;
}

StructureDescriptor StructureDescriptor::matmul_commuting() {
  StructureDescriptor s;
  s.id = StructureId::MatmulCommuting;
  s.carrier_i = s.carrier_j = s.carrier_k = ElementKind::Matrix;
  s.order_i = s.order_k = OrderKind::Loewner;
  return s;
}

StructureDescriptor StructureDescriptor::frobenius() {
  StructureDescriptor s;
  s.id = StructureId::Frobenius;
  s.carrier_i = s.carrier_j = ElementKind::Matrix;
  s.carrier_k = ElementKind::Scalar;
  s.order_i = OrderKind::Loewner;
  s.order_k = OrderKind::Total;
  s.associative_star = false;
  s.is_ring = false;
  return s;
}

StructureDescriptor StructureDescriptor::hadamard() {
  StructureDescriptor s = matmul_commuting();
  s.id = StructureId::Hadamard;
  return s;
}

StructureDescriptor StructureDescriptor::kronecker() {
  StructureDescriptor s = matmul_commuting();
  s.id = StructureId::Kronecker;
  s.symmetric_star = false;
  return s;
}

StructureDescriptor StructureDescriptor::rkronecker() {
  StructureDescriptor s = kronecker();
  s.id = StructureId::RKronecker;
  return s;
}

std::vector<double> trapezoid_weights(std::size_t n) {
  if (n == 0) throw DimensionError("trapezoid rule needs at least one node");
  if (n == 1) return {1.0};
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

StructureDescriptor StructureDescriptor::from_id(StructureId id, std::size_t dim) {
  switch (id) {
    case StructureId::RealMul: return real_mul();
    case StructureId::VecDot: return vec_dot();
    case StructureId::VecBilinear: return vec_bilinear(Matrix(dim, dim, 1.0));
    case StructureId::FuncQuad: return func_quad(trapezoid_weights(dim));
    case StructureId::MatmulCommuting: return matmul_commuting();
    case StructureId::Frobenius: return frobenius();
    case StructureId::Hadamard: return hadamard();
    case StructureId::Kronecker: return kronecker();
    case StructureId::RKronecker: return rkronecker();
  }
  throw ConfigError("unknown structure");
}

// ---------------------------------------------------------------------------
// Order

std::string_view to_string(OrderTag tag) {
  switch (tag) {
    case OrderTag::Greater: return "Greater";
    case OrderTag::Less: return "Less";
    case OrderTag::Equal: return "Equal";
    case OrderTag::Incomparable: return "Incomparable";
  }
  return "?";
}

OrderResult cmp(const OrderedElement& a, const OrderedElement& b, double tol) {
  if (!(tol >= 0.0)) throw DomainError("tolerance must be nonnegative");
  require_same_shape(a, b, "cmp");
  OrderResult r;
  double lo = 0.0;
  double hi = 0.0;
  switch (a.kind()) {
    case ElementKind::Scalar: {
      lo = hi = a.as_scalar() - b.as_scalar();
      r.threshold = tol;
      break;
    }
    case ElementKind::Vector: {
      lo = INFINITY;
      hi = -INFINITY;
      for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = a.values()[i] - b.values()[i];
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
      r.threshold = tol * (1.0 + std::max(a.max_abs(), b.max_abs()));
      break;
    }
    case ElementKind::Matrix: {
      const auto ev = symmetric_eigenvalues(a.as_matrix() - b.as_matrix());
      lo = ev.front();
      hi = ev.back();
      r.threshold = tol * (1.0 + std::max(a.norm(), b.norm()));
      break;
    }
  }
  r.margin = lo;
  const double t = r.threshold;
  if (lo >= -t && hi <= t) {
    r.tag = OrderTag::Equal;
  } else if (lo >= -t) {
    r.tag = OrderTag::Greater;
  } else if (hi <= t) {
    r.tag = OrderTag::Less;
  } else {
    r.tag = OrderTag::Incomparable;
  }
  return r;
}

bool nonnegative(const OrderedElement& a, double tol) { return cmp(a, OrderedElement::zero_like(a), tol).at_least(); }

double element_margin(const OrderedElement& e) {
  switch (e.kind()) {
    case ElementKind::Scalar: return e.as_scalar();
    case ElementKind::Vector: return *std::min_element(e.values().begin(), e.values().end());
    case ElementKind::Matrix: return min_eigenvalue(e.as_matrix());
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Star products

namespace {

void require_carrier(const OrderedElement& e, ElementKind kind, const char* slot) {
  if (e.kind() != kind) {
    throw DimensionError(std::string("star: ") + slot + " operand is " + std::string(to_string(e.kind())) +
                         ", carrier expects " + std::string(to_string(kind)));
  }
}

void require_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DimensionError(std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

namespace {

void require_commuting_pair(const Matrix& a, const Matrix& b, const Matrix& ab) {
  const double comm = (ab - matmul(b, a)).frobenius_norm();
  if (comm > kMatrixTol * (1.0 + a.frobenius_norm() * b.frobenius_norm())) {
    throw ConfigError("MATMUL_COMMUTING operands do not commute (‖ab−ba‖_F = " + std::to_string(comm) + ")");
  }
}

}  // namespace

void require_commuting(const StructureDescriptor& s, std::span<const OrderedElement> elems) {
  if (s.id != StructureId::MatmulCommuting) return;
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (std::size_t j = i + 1; j < elems.size(); ++j) {
      require_dim(elems[i].dim(), elems[j].dim(), "matrix product");
      const auto& a = elems[i].as_matrix();
      const auto& b = elems[j].as_matrix();
      require_commuting_pair(a, b, matmul(a, b));
    }
}

OrderedElement star(const StructureDescriptor& s, const OrderedElement& a, const OrderedElement& b, StarCheck check) {
  require_carrier(a, s.carrier_i, "left");
  require_carrier(b, s.carrier_j, "right");
  switch (s.id) {
    case StructureId::RealMul: return OrderedElement::scalar(a.as_scalar() * b.as_scalar());
    case StructureId::VecDot: {
      require_dim(a.dim(), b.dim(), "dot product");
      double sum = 0.0;
      for (std::size_t i = 0; i < a.dim(); ++i) sum += a.values()[i] * b.values()[i];
      return OrderedElement::scalar(sum);
    }
    case StructureId::VecBilinear: {
      require_dim(a.dim(), b.dim(), "bilinear form");
      require_dim(a.dim(), s.bilinear.rows(), "bilinear form size");
      double sum = 0.0;
      for (std::size_t i = 0; i < a.dim(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < b.dim(); ++j) row += s.bilinear(i, j) * b.values()[j];
        sum += a.values()[i] * row;
      }
      return OrderedElement::scalar(sum);
    }
    case StructureId::FuncQuad: {
      require_dim(a.dim(), b.dim(), "quadrature");
      require_dim(a.dim(), s.weights.size(), "quadrature nodes");
      double sum = 0.0;
      for (std::size_t i = 0; i < a.dim(); ++i) sum += s.weights[i] * a.values()[i] * b.values()[i];
      return OrderedElement::scalar(sum);
    }
    case StructureId::MatmulCommuting: {
      require_dim(a.dim(), b.dim(), "matrix product");
      const auto& ma = a.as_matrix();
      const auto& mb = b.as_matrix();
      Matrix p = matmul(ma, mb);
      if (check == StarCheck::Checked) require_commuting_pair(ma, mb, p);
      return OrderedElement::matrix(p);
    }
    case StructureId::Frobenius:
      require_dim(a.dim(), b.dim(), "Frobenius inner product");
      return OrderedElement::scalar(frobenius_inner(a.as_matrix(), b.as_matrix()));
    case StructureId::Hadamard:
      require_dim(a.dim(), b.dim(), "Hadamard product");
      return OrderedElement::matrix(hadamard(a.as_matrix(), b.as_matrix()));
    case StructureId::Kronecker: return OrderedElement::matrix(kronecker(a.as_matrix(), b.as_matrix()));
    case StructureId::RKronecker: return OrderedElement::matrix(kronecker(b.as_matrix(), a.as_matrix()));
  }
  throw ConfigError("unknown structure");
}

std::optional<OrderedElement> star_identity(const StructureDescriptor& s, const OrderedElement& like) {
  switch (s.id) {
    case StructureId::RealMul: return OrderedElement::scalar(1.0);
    case StructureId::MatmulCommuting: return OrderedElement::matrix(Matrix::identity(like.dim()));
    case StructureId::Hadamard: return OrderedElement::matrix(Matrix::ones(like.dim()));
    case StructureId::Kronecker:
    case StructureId::RKronecker: return OrderedElement::matrix(Matrix::identity(1));
    default: return std::nullopt;
  }
}

OrderedElement pow_star(const StructureDescriptor& s, const OrderedElement& a, unsigned n, StarCheck check) {
  require_carrier(a, s.carrier_i, "power");
  if (n == 1) return a;
  if (n == 0) {
    auto id = star_identity(s, a);
    if (!id) throw UnsupportedPower(std::string(to_string(s.id)) + " has no star-identity");
    return *id;
  }
  if (!s.is_ring || !s.associative_star) {
    throw UnsupportedPower(std::string(to_string(s.id)) + " is not an associative ring; a^" + std::to_string(n) +
                           " is undefined");
  }
  OrderedElement out = a;
  for (unsigned k = 1; k < n; ++k) out = star(s, out, a, check);
  return out;
}

bool is_upper_bound(const StructureDescriptor& s, const OrderedElement& u, const OrderedElement& b, double tol) {
  require_carrier(u, s.carrier_i, "upper bound");
  require_carrier(b, s.carrier_i, "bounded");
  return cmp(u, b, tol).at_least() && cmp(u, -b, tol).at_least();
}

}  // namespace schur
