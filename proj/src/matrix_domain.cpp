#include "schur/matrix_domain.hpp"

#include <algorithm>
#include <cmath>

#include "schur/errors.hpp"

namespace schur {

double loewner_margin(const Matrix& m) {
  if (!m.square()) throw DimensionError("loewner_margin needs a square matrix");
  if (m.rows() == 0) return 0.0;
  return min_eigenvalue(m);
}

Matrix random_psd(Rng& rng, std::size_t dim, double p_zero) {
  if (rng.bernoulli(p_zero)) return Matrix(dim, dim);
  const auto rank = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(dim)));
  Matrix g(rank, dim);
  for (std::size_t i = 0; i < rank; ++i)
    for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.normal();
  Matrix d = matmul(g.transpose(), g);
  d *= 1.0 / static_cast<double>(dim);
  return symmetrize(d);
}

Matrix random_symmetric(Rng& rng, std::size_t dim) {
  Matrix a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) a(i, j) = a(j, i) = rng.normal();
  return a;
}

std::vector<Matrix> gen_ordered_chain(const ChainCondition& cond, std::size_t dim, Rng& rng) {
  if (dim == 0 || dim > kMaxGeneratorDim) throw DimensionError("generator dimension must be in [1, 8]");
  if (cond.m < 2) throw ConfigError("a chain needs at least two variables");
  if (cond.sum_chain && cond.m < 4) throw ConfigError("sum-chain conditions start at four variables");
  if (cond.require_invertible_x2_xm && cond.m < 6) throw ConfigError("x2 - x6 needs six variables");

  const std::size_t m = cond.m;
  std::vector<Matrix> d;
  for (std::size_t i = 0; i + 1 < m; ++i) d.push_back(random_psd(rng, dim));
  if (cond.sum_chain) {
    if (m <= 5) {
      d[0] = d[2] + random_psd(rng, dim);
    } else {
      d[1] = d[3] + random_psd(rng, dim);
      d[0] = d[4] + random_psd(rng, dim);
    }
  }
  if (cond.require_invertible_x2_xm) d[1] += kInvertibleShift * Matrix::identity(dim);

  std::vector<Matrix> xs(m);
  xs[m - 1] = random_symmetric(rng, dim);
  for (std::size_t i = m - 1; i-- > 0;) xs[i] = xs[i + 1] + d[i];
  return xs;
}

std::vector<Matrix> gen_ordered_chain(const ChainCondition& cond, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  return gen_ordered_chain(cond, dim, rng);
}

std::vector<double> gen_scalar_chain(const ChainCondition& cond, Rng& rng) {
  std::vector<double> out;
  for (const auto& x : gen_ordered_chain(cond, 1, rng)) out.push_back(x(0, 0));
  return out;
}

std::vector<Matrix> commuting_from_spectra(const Matrix& q, const std::vector<std::vector<double>>& spectra) {
  std::vector<Matrix> out;
  for (const auto& d : spectra) {
    if (d.size() != q.rows()) throw DimensionError("spectrum length must match the basis");
    out.push_back(symmetrize(matmul(matmul(q, Matrix::diag(d)), q.transpose())));
  }
  return out;
}

namespace {

Matrix random_basis(Rng& rng, std::size_t dim) {
  Matrix g(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) g(i, j) = rng.normal();
  return orthonormal_basis(g);
}

}  // namespace

CommutingChain gen_commuting_chain(const ChainCondition& cond, std::size_t dim, Rng& rng, bool identity_basis) {
  if (dim == 0 || dim > kMaxGeneratorDim) throw DimensionError("generator dimension must be in [1, 8]");
  CommutingChain out;
  out.basis = identity_basis ? Matrix::identity(dim) : random_basis(rng, dim);
  std::vector<std::vector<double>> spectra(cond.m, std::vector<double>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    const auto chain = gen_scalar_chain(cond, rng);
    for (std::size_t i = 0; i < cond.m; ++i) spectra[i][k] = chain[i];
  }
  out.xs = commuting_from_spectra(out.basis, spectra);
  return out;
}

// ---------------------------------------------------------------------------
// Coefficient chains

namespace {

class CoeffSource {
 public:
  CoeffSource(Rng& rng, std::size_t dim, const std::optional<Matrix>& basis) : rng_(rng), dim_(dim), basis_(basis) {}

  Matrix psd() {
    if (!basis_) return random_psd(rng_, dim_);
    if (rng_.bernoulli(kBoundaryProbability)) return Matrix(dim_, dim_);
    std::vector<double> d(dim_);
    for (auto& v : d) {
      const double z = rng_.normal();
      v = rng_.bernoulli(0.1) ? 0.0 : z * z;
    }
    return in_basis(d);
  }

  /// a with â ± a ⪰ 0.
  Matrix signed_under(const Matrix& hat) {
    const double u = rng_.uniform();
    if (u < 0.1) return hat;
    if (u < 0.2) return -1.0 * hat;
    if (basis_) {
      const Matrix h = matmul(matmul(basis_->transpose(), hat), *basis_);
      std::vector<double> d(dim_);
      for (std::size_t k = 0; k < dim_; ++k) d[k] = rng_.uniform(-1.0, 1.0) * std::max(h(k, k), 0.0);
      return in_basis(d);
    }
    const double floor = std::max(min_eigenvalue(hat), 0.0);
    Matrix s = random_symmetric(rng_, dim_);
    const auto ev = symmetric_eigenvalues(s);
    const double radius = std::max(std::abs(ev.front()), std::abs(ev.back()));
    if (radius == 0.0) return Matrix(dim_, dim_);
    s *= rng_.uniform() * floor / radius;
    return s;
  }

  double uniform() { return rng_.uniform(); }
  bool coin(double p) { return rng_.bernoulli(p); }

 private:
  Matrix in_basis(const std::vector<double>& d) const {
    return symmetrize(matmul(matmul(*basis_, Matrix::diag(d)), basis_->transpose()));
  }

  Rng& rng_;
  std::size_t dim_;
  const std::optional<Matrix>& basis_;
};

}  // namespace

CoeffChain gen_coeff_chain(const CoeffPattern& pat, Rng& rng, const std::optional<Matrix>& basis) {
  if (pat.dim == 0 || pat.dim > kMaxGeneratorDim) throw DimensionError("generator dimension must be in [1, 8]");
  if (basis && basis->rows() != pat.dim) throw DimensionError("basis does not match the pattern dimension");
  CoeffSource src(rng, pat.dim, basis);
  auto under = [&](const Matrix& hat) { return pat.signed_coeffs ? src.signed_under(hat) : hat; };

  CoeffChain out;
  auto& a = out.coeffs;
  auto& h = out.hats;
  switch (pat.id) {
    case CaseId::C3P: {
      a.resize(3);
      a[0] = src.psd();
      a[2] = src.psd();
      const double cut = src.coin(kBoundaryProbability) ? 0.0 : src.uniform();
      const Matrix bh = (1.0 - cut) * (a[0] + a[2]);
      a[1] = under(bh);
      h = a;
      h[1] = bh;
      break;
    }
    case CaseId::R4: {
      a.resize(4);
      h.resize(4);
      h[3] = src.psd();
      a[2] = h[3] + src.psd();
      h[1] = a[2] + src.psd();
      a[0] = h[1] + src.psd();
      break;
    }
    case CaseId::R5: {
      a.resize(5);
      h.resize(5);
      if (src.coin(0.5)) {
        // a₃ + a₅ ⪰ â₄ ⪰ a₅ ⪰ 0
        a[4] = src.psd();
        const Matrix gap = src.psd();
        h[3] = a[4] + gap;
        a[2] = gap + src.psd();
      } else {
        // a₅ ⪰ â₄ ⪰ 0
        h[3] = src.psd();
        a[4] = h[3] + src.psd();
        a[2] = src.psd();
      }
      h[1] = a[2] + src.psd();
      a[0] = h[1] + src.psd();
      break;
    }
    case CaseId::R6:
    case CaseId::R7: {
      const std::size_t m = pat.id == CaseId::R6 ? 6 : 7;
      a.resize(m);
      h.resize(m);
      if (m == 7 && src.coin(0.5)) {
        // a₅ + a₇ ⪰ â₆ ⪰ a₇ ⪰ 0 (a₅ ⪰ â₆ makes the first part automatic)
        a[6] = src.psd();
        h[5] = a[6] + src.psd();
      } else {
        h[5] = src.psd();
        if (m == 7) a[6] = h[5] + src.psd();
      }
      a[4] = h[5] + src.psd();
      h[1] = a[4] + src.psd();
      a[0] = h[1] + src.psd();
      h[3] = src.psd();
      a[2] = h[3] + src.psd();
      break;
    }
    default: throw ConfigError(std::string(to_string(pat.id)) + " has no ring coefficient pattern");
  }
  if (pat.id != CaseId::C3P) {
    for (std::size_t i = 1; i < a.size(); i += 2) a[i] = under(h[i]);
    for (std::size_t i = 0; i < a.size(); i += 2) h[i] = a[i];
  }
  return out;
}

std::vector<double> gen_scalar_coeffs(CaseId id, Rng& rng) {
  auto slack = [&] { return rng.bernoulli(kBoundaryProbability) ? 0.0 : rng.uniform(0.0, 2.0); };
  auto free = [&] { return 1.5 * rng.normal(); };
  switch (id) {
    case CaseId::S2: {
      const double a2 = free();
      return {std::abs(a2) + slack(), a2};
    }
    case CaseId::S3:
    case CaseId::C3: {
      const double b = free();
      const double total = std::abs(b) + slack();
      const double theta = rng.bernoulli(0.1) ? std::round(rng.uniform()) : rng.uniform();
      return {theta * total, b, (1.0 - theta) * total};
    }
    case CaseId::S4: {
      const double a2 = free(), a4 = free();
      return {std::max(std::abs(a2), std::abs(a4)) + slack(), a2, std::abs(a4) + slack(), a4};
    }
    case CaseId::S5: {
      const double a2 = free(), a4 = free();
      const double a5 = rng.bernoulli(0.25) ? std::abs(a4) + slack() : slack();
      const double a3 = std::max(0.0, std::abs(a4) - a5) + slack();
      const double a1 = std::max(std::abs(a2), std::abs(a4) - a5) + slack();
      return {a1, a2, a3, a4, a5};
    }
    case CaseId::S6:
    case CaseId::S7: {
      const double a6 = free();
      const double a7 = id == CaseId::S7 ? (rng.bernoulli(0.25) ? std::abs(a6) + slack() : slack()) : 0.0;
      const double a5 = std::max(0.0, std::abs(a6) - a7) + slack();
      const double a2 = rng.sign() * (a5 + slack());
      const double a1 = std::abs(a2) + slack();
      const double a4 = free();
      const double a3 = std::abs(a4) + slack();
      if (id == CaseId::S6) return {a1, a2, a3, a4, a5, a6};
      return {a1, a2, a3, a4, a5, a6, a7};
    }
    default: throw ConfigError(std::string(to_string(id)) + " has no scalar coefficient pattern");
  }
}

}  // namespace schur
