#include "schur/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "schur/errors.hpp"

namespace schur {

mpq_class exact(double x) {
  if (!std::isfinite(x)) throw ConfigError("the exact oracle needs finite inputs");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);  // exact: every finite double is a dyadic rational
  return q;
}

namespace {

constexpr unsigned kMaxDegree = 5;

bool below(const mpq_class& x, double lo) { return std::isfinite(lo) ? x < exact(lo) : lo > 0; }
bool above(const mpq_class& x, double hi) { return std::isfinite(hi) ? x > exact(hi) : hi < 0; }

mpq_class ipow(const mpq_class& x, unsigned k) {
  mpq_class r = 1;
  for (unsigned i = 0; i < k; ++i) r *= x;
  return r;
}

mpq_class lerp(const CoeffFunctionSpec::Point& p0, const CoeffFunctionSpec::Point& p1, const mpq_class& x) {
  const mpq_class x0 = exact(p0.first), y0 = exact(p0.second);
  const mpq_class x1 = exact(p1.first), y1 = exact(p1.second);
  if (x == x0) return y0;
  if (x == x1) return y1;
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

mpq_class piecewise(std::span<const CoeffFunctionSpec::Point> pts, const mpq_class& x, bool extrapolate) {
  if (pts.size() == 1) return exact(pts.front().second);
  if (x <= exact(pts.front().first))
    return extrapolate ? lerp(pts[0], pts[1], x) : exact(pts.front().second);
  if (x >= exact(pts.back().first))
    return extrapolate ? lerp(pts[pts.size() - 2], pts.back(), x) : exact(pts.back().second);
  std::size_t seg = 0;
  while (exact(pts[seg + 1].first) <= x) ++seg;
  return lerp(pts[seg], pts[seg + 1], x);
}

std::vector<mpq_class> exact_xs(const SchurInstance& inst) {
  std::vector<mpq_class> out;
  for (const auto& x : inst.xs) {
    if (x.kind() != ElementKind::Scalar) throw ConfigError("the exact oracle covers scalar cases only");
    out.push_back(exact(x.as_scalar()));
  }
  return out;
}

std::vector<mpq_class> exact_coeffs(CaseId id, const SchurInstance& inst, const std::vector<mpq_class>& xs) {
  std::vector<mpq_class> a;
  if (!inst.coeffs.empty()) {
    for (const auto& c : inst.coeffs) a.push_back(exact(c.as_scalar()));
    return a;
  }
  if (!inst.f) throw ConfigError("instance has no coefficients");
  const auto& f = *inst.f;
  const mpq_class ea = exact(inst.abc[0]), eb = exact(inst.abc[1]), ec = exact(inst.abc[2]);
  switch (id) {
    case CaseId::S3V: return {exact_f(f, ea), exact_f(f, eb), exact_f(f, ec)};
    case CaseId::S3VG: {
      const mpq_class al = exact(inst.alpha);
      if (al < 0 || al > 1) throw DomainError("alpha must lie in [0, 1]");
      return {al * exact_f(f, ea), exact_f(f, al * ea + (1 - al) * ec), (1 - al) * exact_f(f, ec)};
    }
    default:
      for (const auto& x : xs) a.push_back(exact_f(f, x));
      return a;
  }
}

mpq_class qeq_exact(const SchurInstance& inst) {
  if (!inst.f || !inst.g) throw ConfigError("QEQ needs f and g");
  const auto xs = exact_xs(inst);
  const mpq_class lam = exact(inst.lambda);
  if (lam <= 0 || lam >= 1) throw DomainError("λ must lie in (0, 1)");
  const auto& f = *inst.f;
  mpq_class mid = lam * xs[0] + (1 - lam) * xs[1];
  if (below(mid, f.domain_lo())) mid = exact(f.domain_lo());
  if (above(mid, f.domain_hi())) mid = exact(f.domain_hi());
  const mpq_class d = xs[0] - xs[1];
  const mpq_class den1 = exact_g(*inst.g, lam * d), den2 = exact_g(*inst.g, (1 - lam) * d);
  if (den1 == 0 || den2 == 0) throw SkippedSample("g vanishes at λ(x−z) or (1−λ)(x−z)");
  const mpq_class gd = exact_g(*inst.g, d);
  return exact_f(f, xs[0]) * gd / den1 + exact_f(f, xs[1]) * gd / den2 - exact_f(f, mid);
}

}  // namespace

mpq_class exact_g(const GFunctionSpec& g, const mpq_class& x) {
  const auto form = integer_power_form(g);
  if (!form || form->degree > kMaxDegree)
    throw ConfigError("the exact oracle needs g of integer power form with degree <= 5, got " + g.name());
  mpq_class r = exact(form->coefficient);
  if (form->sign_count > 0) {
    const int s = mpq_sgn(x.get_mpq_t());
    if (s == 0) return 0;
    if (s < 0 && form->sign_count % 2 == 1) r = -r;
  }
  return r * ipow(abs(x), form->degree);
}

mpq_class exact_f(const CoeffFunctionSpec& f, const mpq_class& x) {
  if (below(x, f.domain_lo()) || above(x, f.domain_hi())) throw DomainError(f.describe() + " evaluated outside its domain");
  switch (f.kind()) {
    case CoeffKind::PowerWeight: {
      const double t = f.params()[0];
      if (t != std::floor(t) || t > 64) throw ConfigError("the exact oracle needs an integer power weight");
      if (t == 0) return 1;
      return ipow(x, static_cast<unsigned>(t));
    }
    case CoeffKind::ConvexPiecewiseLinear: return piecewise(f.points(), x, true);
    case CoeffKind::MonotonePiecewiseLinear: return piecewise(f.points(), x, false);
    case CoeffKind::TableFunction:
      for (const auto& [k, v] : f.points())
        if (exact(k) == x) return exact(v);
      return exact(f.params()[0]);
    case CoeffKind::BoundedRatio: break;
  }
  throw ConfigError(f.describe() + " has no exact rational form");
}

mpq_class oracle_margin_exact(CaseId id, const SchurInstance& inst) {
  const auto& c = theorem_case(id);
  if (!c.scalar) throw ConfigError(std::string(to_string(id)) + " is not a scalar case");
  if (inst.xs.size() != c.arity) throw DimensionError(std::string(to_string(id)) + " arity mismatch");
  if (!inst.g) throw ConfigError("scalar cases need g");
  if (id == CaseId::QEQ) return qeq_exact(inst);

  const auto xs = exact_xs(inst);
  const auto a = exact_coeffs(id, inst, xs);
  if (a.size() != xs.size()) throw DimensionError("coefficient count mismatch");
  mpq_class sum = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mpq_class term = a[i];
    for (std::size_t j = 0; j < xs.size(); ++j)
      if (j != i) term *= exact_g(*inst.g, xs[i] - xs[j]);
    sum += term;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Rational instances

namespace {

double rational01(Rng& rng) {
  const auto q = rng.integer(1, 16);
  return static_cast<double>(rng.integer(0, q)) / static_cast<double>(q);
}

double rational_signed(Rng& rng) { return rng.sign() * rational01(rng); }

GFunctionSpec rational_g(Rng& rng, bool odd_only) {
  if (odd_only) {
    const unsigned k = 2 * static_cast<unsigned>(rng.integer(0, 2)) + 1;
    return GFunctionSpec::power(k);
  }
  switch (rng.integer(0, 3)) {
    case 0: return GFunctionSpec::power(static_cast<unsigned>(rng.integer(0, 5)));
    case 1: return GFunctionSpec::abs_pow(static_cast<double>(rng.integer(1, 3)));
    case 2: return product(GFunctionSpec::constant(rational01(rng) + 1.0), GFunctionSpec::power(static_cast<unsigned>(rng.integer(1, 3))));
    default: return GFunctionSpec::sign();
  }
}

std::vector<CoeffFunctionSpec::Point> rational_points(Rng& rng, std::size_t k) {
  std::vector<double> xs;
  while (xs.size() < k) {
    const double x = rational01(rng) * 2.0 - 0.5;
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<CoeffFunctionSpec::Point> pts;
  for (double x : xs) pts.emplace_back(x, 0.0);
  return pts;
}

CoeffFunctionSpec rational_f(Rng& rng) {
  switch (rng.integer(0, 2)) {
    case 0: {
      auto pts = rational_points(rng, static_cast<std::size_t>(rng.integer(2, 4)));
      double y = rational01(rng);
      for (auto& p : pts) {
        p.second = y;
        y += rational01(rng);
      }
      return CoeffFunctionSpec::monotone_pwl(std::move(pts));
    }
    case 1: {
      // Samples of a quadratic at dyadic nodes: exact in binary, so the
      // validator sees nondecreasing slopes without rounding.
      auto pts = rational_points(rng, static_cast<std::size_t>(rng.integer(2, 4)));
      const double c = static_cast<double>(rng.integer(-8, 24)) / 16.0;
      const double base = static_cast<double>(rng.integer(0, 16)) / 16.0;
      for (auto& p : pts) {
        p.first = std::round(p.first * 16.0) / 16.0;
        p.second = (p.first - c) * (p.first - c) + base;
      }
      pts.erase(std::unique(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                pts.end());
      if (pts.size() == 1) pts.emplace_back(pts[0].first + 1.0, (pts[0].first + 1.0 - c) * (pts[0].first + 1.0 - c) + base);
      return CoeffFunctionSpec::convex_pwl(std::move(pts));
    }
    default: return CoeffFunctionSpec::power_weight(static_cast<double>(rng.integer(0, 3)));
  }
}

}  // namespace

SchurInstance gen_rational_instance(CaseId id, Rng& rng) {
  const auto& c = theorem_case(id);
  if (!c.scalar) throw ConfigError(std::string(to_string(id)) + " is not a scalar case");
  SchurInstance inst;
  inst.g = rational_g(rng, id == CaseId::QEQ);

  std::vector<double> xs(c.arity);
  for (auto& x : xs) x = rational01(rng);
  std::sort(xs.begin(), xs.end(), std::greater<>());
  if (id == CaseId::QEQ && xs[0] == xs[1]) xs[0] = std::min(1.0, xs[1] + 0.0625);
  for (double x : xs) inst.xs.push_back(OrderedElement::scalar(x));

  switch (id) {
    case CaseId::QEQ: {
      inst.f = rational_f(rng);
      const auto q = rng.integer(2, 16);
      inst.lambda = static_cast<double>(rng.integer(1, q - 1)) / static_cast<double>(q);
      break;
    }
    case CaseId::S3F:
      inst.f = rational_f(rng);
      break;
    case CaseId::S3V:
    case CaseId::S3VG:
      inst.f = rational_f(rng);
      if (inst.f->kind() == CoeffKind::PowerWeight) {
        inst.abc = {rational01(rng), rational01(rng), rational01(rng)};
      } else {
        inst.abc = {rational_signed(rng), rational_signed(rng), rational_signed(rng)};
      }
      inst.alpha = rational01(rng);
      break;
    default:
      for (std::size_t i = 0; i < c.arity; ++i) inst.coeffs.push_back(OrderedElement::scalar(rational_signed(rng)));
      break;
  }
  return inst;
}

}  // namespace schur
