#include "schur/engine.hpp"

#include <algorithm>
#include <cmath>

#include "schur/errors.hpp"

namespace schur {

namespace {

const TheoremCase kCases[] = {
    {CaseId::S2, 2, GRequirement::G, true, false, false, "two variables: x >= y, a >= |b|"},
    {CaseId::S3, 3, GRequirement::G, true, false, false, "three variables: a, c >= 0, a+c >= |b|"},
    {CaseId::S3F, 3, GRequirement::G, true, false, false, "three variables with f-weights f(x_i)"},
    {CaseId::S3V, 3, GRequirement::G, true, false, false, "weights f(a), f(b), f(c) with a, b, c monotone"},
    {CaseId::S3VG, 3, GRequirement::G, true, false, false, "weights af(a), f(aa+(1-a)c), (1-a)f(c), f convex"},
    {CaseId::S4, 4, GRequirement::G, true, false, false, "four variables: x1+x4 >= x2+x3"},
    {CaseId::S5, 5, GRequirement::G, true, false, false, "five variables: a3+a5 >= |a4|"},
    {CaseId::S6, 6, GRequirement::G2, true, false, false, "six variables: a1 >= |a2| >= a5 >= |a6|"},
    {CaseId::S7, 7, GRequirement::G2, true, false, false, "seven variables: a5, a7 >= 0"},
    {CaseId::QEQ, 2, GRequirement::OddG, true, false, false, "Q_g-class inequality at y = lx+(1-l)z"},
    {CaseId::C3, 3, GRequirement::None, false, false, false, "three variables over a structure, real a, b, c"},
    {CaseId::C3P, 3, GRequirement::None, false, true, false, "three variables in a ring, star powers or p(x)"},
    {CaseId::R4, 4, GRequirement::None, false, true, false, "ring, four variables: a1 >= ^a2 >= a3 >= ^a4 >= 0"},
    {CaseId::R5, 5, GRequirement::None, false, true, false, "ring, five variables: a5 >= ^a4 branches"},
    {CaseId::R6, 6, GRequirement::None, false, true, true, "ring, six variables: (x2-x6)^-1 > 0"},
    {CaseId::R7, 7, GRequirement::None, false, true, true, "ring, seven variables: a7 >= ^a6 branches"},
};

bool is_f_case(CaseId id) { return id == CaseId::S3F || id == CaseId::S3V || id == CaseId::S3VG; }

void require_shape(CaseId id, const SchurInstance& inst) {
  const auto& c = theorem_case(id);
  if (inst.xs.size() != c.arity) {
    throw ConfigError(std::string(to_string(id)) + " expects " + std::to_string(c.arity) + " variables, got " +
                      std::to_string(inst.xs.size()));
  }
  if (!supports_structure(c, inst.structure)) {
    throw ConfigError(std::string(to_string(id)) + " is not stated for structure " +
                      std::string(to_string(inst.structure.id)));
  }
  for (const auto& x : inst.xs)
    if (x.kind() != inst.structure.carrier_i) throw DimensionError("variable outside the structure's carrier");
  if (c.scalar && !inst.g) throw ConfigError(std::string(to_string(id)) + " needs a g function");
}

double sval(const OrderedElement& e) { return e.as_scalar(); }

/// Left-to-right star product of f(i, j) over j != i, j in [0, limit), j != skip.
template <class F>
std::optional<OrderedElement> fold(const StructureDescriptor& s, std::optional<OrderedElement> acc, std::size_t i,
                                   std::size_t limit, std::size_t skip, const F& factor) {
  for (std::size_t j = 0; j < limit; ++j) {
    if (j == i || j == skip) continue;
    auto fj = factor(i, j);
    acc = acc ? star(s, *acc, fj, StarCheck::Trusted) : fj;
  }
  return acc;
}

/// The difference factor between x_i and x_j for the case family.
struct DiffFactor {
  CaseId id;
  const SchurInstance& inst;

  OrderedElement operator()(std::size_t i, std::size_t j) const {
    const auto& s = inst.structure;
    const auto d = inst.xs[i] - inst.xs[j];
    if (theorem_case(id).scalar) return OrderedElement::scalar((*inst.g)(sval(d)));
    if (id == CaseId::C3) return d;
    if (id == CaseId::C3P && !inst.poly.empty()) {
      std::optional<OrderedElement> sum;
      for (std::size_t k = 0; k < inst.poly.size(); ++k) {
        if (inst.poly[k] == 0.0) continue;
        auto term = inst.poly[k] * pow_star(s, d, static_cast<unsigned>(k), StarCheck::Trusted);
        if (sum && sum->dim() != term.dim())
          throw ConfigError("polynomial terms of different degree have different dimensions under this product");
        sum = sum ? *sum + term : term;
      }
      if (!sum) throw ConfigError("polynomial p is identically zero");
      return *sum;
    }
    return pow_star(s, d, inst.n, StarCheck::Trusted);
  }
};

Margin margin_of(const OrderedElement& total, double max_term) {
  Margin m;
  m.value = element_margin(total);
  m.element = total;
  m.scale = 1.0 + max_term;
  return m;
}

Margin sum_terms(const std::vector<OrderedElement>& terms) {
  OrderedElement total = terms.front();
  double mx = terms.front().norm();
  for (std::size_t i = 1; i < terms.size(); ++i) {
    total = total + terms[i];
    mx = std::max(mx, terms[i].norm());
  }
  return margin_of(total, mx);
}

std::vector<OrderedElement> scalars(const std::vector<double>& v) {
  std::vector<OrderedElement> out;
  for (double x : v) out.push_back(OrderedElement::scalar(x));
  return out;
}

std::vector<double> scalar_xs(const SchurInstance& inst) {
  std::vector<double> xs;
  for (const auto& x : inst.xs) xs.push_back(sval(x));
  return xs;
}

Margin qeq_margin(const SchurInstance& inst) {
  if (!inst.f) throw ConfigError("QEQ needs f");
  const QSample s{sval(inst.xs[0]), sval(inst.xs[1]), inst.lambda};
  auto q = qclass_margin(*inst.f, QVariant::qg(*inst.g), s);
  Margin m;
  m.value = q.margin;
  m.element = OrderedElement::scalar(q.margin);
  m.scale = q.scale;
  return m;
}

}  // namespace

std::string_view to_string(CaseId id) {
  switch (id) {
    case CaseId::S2: return "S2";
    case CaseId::S3: return "S3";
    case CaseId::S3F: return "S3F";
    case CaseId::S3V: return "S3V";
    case CaseId::S3VG: return "S3VG";
    case CaseId::S4: return "S4";
    case CaseId::S5: return "S5";
    case CaseId::S6: return "S6";
    case CaseId::S7: return "S7";
    case CaseId::QEQ: return "QEQ";
    case CaseId::C3: return "C3";
    case CaseId::C3P: return "C3P";
    case CaseId::R4: return "R4";
    case CaseId::R5: return "R5";
    case CaseId::R6: return "R6";
    case CaseId::R7: return "R7";
  }
  return "?";
}

std::optional<CaseId> parse_case_id(std::string_view name) {
  for (const auto& c : kCases)
    if (to_string(c.id) == name) return c.id;
  return std::nullopt;
}

std::string_view to_string(S3FForm form) {
  switch (form) {
    case S3FForm::Wright: return "Wright";
    case S3FForm::ConvexCorollary: return "ConvexCorollary";
    case S3FForm::Finta: return "Finta";
  }
  return "?";
}

std::span<const TheoremCase> registry() { return kCases; }

const TheoremCase& theorem_case(CaseId id) {
  for (const auto& c : kCases)
    if (c.id == id) return c;
  throw ConfigError("unknown case");
}

bool supports_structure(const TheoremCase& c, const StructureDescriptor& s) {
  if (c.scalar) return s.id == StructureId::RealMul;
  if (c.id == CaseId::C3) return true;
  if (c.id == CaseId::C3P) return s.is_ring;
  return s.commutative_ring();
}

// ---------------------------------------------------------------------------
// Coefficients

std::vector<double> build_coeffs(const CoeffBuild& b, std::span<const double> xs) {
  switch (b.kind) {
    case CoeffBuild::Kind::FintaPower: {
      if (!(b.t > 0.0)) throw DomainError("Finta weights need t > 0");
      const auto f = CoeffFunctionSpec::power_weight(b.t);
      std::vector<double> out;
      for (double x : xs) out.push_back(f(x));
      return out;
    }
    case CoeffBuild::Kind::FromF: {
      if (!b.f) throw ConfigError("FromF needs f");
      std::vector<double> out;
      for (double x : xs) out.push_back((*b.f)(x));
      return out;
    }
    case CoeffBuild::Kind::VornicuFromF:
      if (!b.f) throw ConfigError("Vornicu weights need f");
      return {(*b.f)(b.a), (*b.f)(b.b), (*b.f)(b.c)};
    case CoeffBuild::Kind::VornicuGeneral: {
      if (!b.f) throw ConfigError("Vornicu weights need f");
      if (!(b.alpha >= 0.0 && b.alpha <= 1.0)) throw DomainError("alpha must lie in [0, 1]");
      const double mid = b.alpha * b.a + (1.0 - b.alpha) * b.c;
      return {b.alpha * (*b.f)(b.a), (*b.f)(mid), (1.0 - b.alpha) * (*b.f)(b.c)};
    }
  }
  return {};
}

std::vector<OrderedElement> resolved_coeffs(CaseId id, const SchurInstance& inst) {
  const auto& c = theorem_case(id);
  if (id == CaseId::QEQ) return {};
  if (!inst.coeffs.empty()) {
    if (inst.coeffs.size() != c.arity)
      throw ConfigError(std::string(to_string(id)) + " expects " + std::to_string(c.arity) + " coefficients");
    return inst.coeffs;
  }
  if (!inst.f || !c.scalar) throw ConfigError(std::string(to_string(id)) + " instance has no coefficients");
  const auto& [a, b, cc] = inst.abc;
  switch (id) {
    case CaseId::S3V: return scalars(build_coeffs(CoeffBuild::vornicu(*inst.f, a, b, cc), {}));
    case CaseId::S3VG: return scalars(build_coeffs(CoeffBuild::vornicu_general(*inst.f, a, cc, inst.alpha), {}));
    default: return scalars(build_coeffs(CoeffBuild::from_f(*inst.f), scalar_xs(inst)));
  }
}

std::vector<OrderedElement> resolved_hats(const SchurInstance& inst, double tol) {
  const std::size_t m = inst.xs.size();
  const auto coeffs = inst.coeffs;
  if (coeffs.size() != m) throw ConfigError("hats need one coefficient per variable");
  if (!inst.hats.empty()) {
    if (inst.hats.size() != m) throw ConfigError("hats need one slot per variable");
    return inst.hats;
  }
  std::vector<OrderedElement> hats = coeffs;
  for (std::size_t i = 1; i < m; i += 2) {
    const auto& a = coeffs[i];
    if (a.kind() == ElementKind::Scalar) {
      hats[i] = OrderedElement::scalar(std::abs(a.as_scalar()));
      continue;
    }
    const auto r = cmp(a, OrderedElement::zero_like(a), tol);
    if (r.at_least()) {
      hats[i] = a;
    } else if (r.at_most()) {
      hats[i] = -a;
    } else {
      throw ConfigError("coefficient a" + std::to_string(i + 1) +
                        " is not comparable with 0; supply its upper bound explicitly");
    }
  }
  return hats;
}

// ---------------------------------------------------------------------------
// Margins

Margin eval_margin(CaseId id, const SchurInstance& inst) {
  require_shape(id, inst);
  if (id == CaseId::QEQ) return qeq_margin(inst);

  const auto& s = inst.structure;
  const auto coeffs = resolved_coeffs(id, inst);
  if (s.id == StructureId::MatmulCommuting) {
    // Products below are trusted; intermediate differences lose exact
    // commutation to cancellation, so the guard runs on the inputs only.
    std::vector<OrderedElement> inputs = inst.xs;
    if (id != CaseId::C3) inputs.insert(inputs.end(), coeffs.begin(), coeffs.end());
    require_commuting(s, inputs);
  }
  const DiffFactor factor{id, inst};
  const std::size_t m = inst.xs.size();

  std::vector<OrderedElement> terms;
  for (std::size_t i = 0; i < m; ++i) {
    if (id == CaseId::C3) {
      if (coeffs[i].kind() != ElementKind::Scalar) throw ConfigError("C3 coefficients are real numbers");
      auto p = fold(s, std::nullopt, i, m, m, factor);
      terms.push_back(coeffs[i].as_scalar() * *p);
    } else {
      terms.push_back(*fold(s, coeffs[i], i, m, m, factor));
    }
  }
  return sum_terms(terms);
}

// ---------------------------------------------------------------------------
// Hypotheses

std::vector<std::string> hypothesis_clauses(CaseId id) {
  const std::string order = "x nonincreasing";
  switch (id) {
    case CaseId::S2: return {order, "a1>=|a2|"};
    case CaseId::S3:
    case CaseId::C3: return {order, "a>=0", "c>=0", "a+c>=|b|"};
    case CaseId::S3F: return {order, "f domain", "f>=0", "f class", "g=x^k", "z>=0"};
    case CaseId::S3V: return {order, "f domain", "a>=b>=c or a<=b<=c", "f convex or monotone", "f>=0"};
    case CaseId::S3VG: return {order, "f domain", "a>=c", "alpha in [0,1]", "f convex", "f>=0"};
    case CaseId::S4: return {order, "x1+x4>=x2+x3", "a1>=max(|a2|,|a4|)", "a3>=|a4|"};
    case CaseId::S5:
      return {order, "x1+x4>=x2+x3", "a1>=max(|a2|,|a4|-a5)", "a3>=0", "a5>=0", "a3+a5>=|a4|"};
    case CaseId::S6:
      return {order, "x1+x6>=x2+x5", "x2+x5>=x3+x4", "a1>=|a2|", "|a2|>=a5", "a5>=|a6|", "a3>=|a4|", "g in G2"};
    case CaseId::S7:
      return {order,       "x1+x6>=x2+x5", "x2+x5>=x3+x4", "a1>=|a2|", "|a2|>=a5", "a5>=|a6|-a7",
              "a3>=|a4|",  "a5>=0",        "a7>=0",       "g in G2"};
    case CaseId::QEQ: return {"x>=z", "lambda in (0,1)", "g odd", "f domain", "f>=0", "f convex or monotone"};
    case CaseId::C3P: return {order, "a>=0", "c>=0", "a+c bounds +-b", "p in G"};
    case CaseId::R4: return {order, "x1+x4>=x2+x3", "hats bound +-a", "a1>=^a2", "^a2>=a3", "a3>=^a4", "^a4>=0"};
    case CaseId::R5:
      return {order, "x1+x4>=x2+x3", "hats bound +-a", "a1>=^a2", "^a2>=a3", "a3>=0", "a5 branch"};
    case CaseId::R6:
      return {order,     "x1+x6>=x2+x5", "x2+x5>=x3+x4", "(x2-x6)^-1>0", "hats bound +-a", "a1>=^a2", "^a2>=a5",
              "a5>=^a6", "^a6>=0",       "a3>=^a4",      "^a4>=0"};
    case CaseId::R7:
      return {order,     "x1+x6>=x2+x5", "x2+x5>=x3+x4", "(x2-x6)^-1>0", "hats bound +-a", "a1>=^a2", "^a2>=a5",
              "a5>=^a6", "^a6>=0",       "a3>=^a4",      "^a4>=0",       "a7 branch"};
  }
  return {};
}

namespace {

class ClauseSink {
 public:
  void check(bool ok, std::string name) {
    if (!ok) {
      result_.satisfied = false;
      result_.failed.push_back(std::move(name));
    }
  }
  HypothesisResult take() { return std::move(result_); }

 private:
  HypothesisResult result_;
};

bool invertible_positive(const StructureDescriptor& s, const OrderedElement& d, double tol) {
  switch (s.id) {
    case StructureId::RealMul: return d.as_scalar() > tol;
    case StructureId::MatmulCommuting: return min_eigenvalue(d.as_matrix()) > tol * (1.0 + d.norm());
    case StructureId::Hadamard: {
      const auto& m = d.as_matrix();
      Matrix r(m.rows(), m.cols());
      for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
          if (std::abs(m(i, j)) <= tol * (1.0 + d.max_abs())) return false;
          r(i, j) = 1.0 / m(i, j);
        }
      return min_eigenvalue(r) > tol * (1.0 + r.frobenius_norm());
    }
    default: return false;
  }
}

}  // namespace

HypothesisResult check_hypothesis(CaseId id, const SchurInstance& inst, double tol) {
  require_shape(id, inst);
  const auto& s = inst.structure;
  const auto& c = theorem_case(id);
  const auto& xs = inst.xs;
  const std::size_t m = xs.size();
  ClauseSink sink;

  auto ge = [&](const OrderedElement& a, const OrderedElement& b) { return cmp(a, b, tol).at_least(); };
  auto geq = [&](double a, double b) { return a - b >= -tol; };

  if (id == CaseId::QEQ) {
    const double x = sval(xs[0]), z = sval(xs[1]);
    sink.check(geq(x, z), "x>=z");
    sink.check(inst.lambda > 0.0 && inst.lambda < 1.0, "lambda in (0,1)");
    sink.check(inst.g->odd(), "g odd");
    if (!inst.f) throw ConfigError("QEQ needs f");
    const auto& f = *inst.f;
    const double y = inst.lambda * x + (1.0 - inst.lambda) * z;
    const bool dom = f.in_domain(x) && f.in_domain(y) && f.in_domain(z);
    sink.check(dom, "f domain");
    sink.check(f.infimum() >= 0.0, "f>=0");
    sink.check(f.is_convex() || f.is_monotone(), "f convex or monotone");
    return sink.take();
  }

  bool chain = true;
  for (std::size_t i = 0; i + 1 < m; ++i) chain = chain && ge(xs[i], xs[i + 1]);
  sink.check(chain, "x nonincreasing");

  if (m == 4 || m == 5) sink.check(ge(xs[0] + xs[3], xs[1] + xs[2]), "x1+x4>=x2+x3");
  if (m == 6 || m == 7) {
    sink.check(ge(xs[0] + xs[5], xs[1] + xs[4]), "x1+x6>=x2+x5");
    sink.check(ge(xs[1] + xs[4], xs[2] + xs[3]), "x2+x5>=x3+x4");
  }
  if (c.g_req == GRequirement::G2) sink.check(inst.g->claimed() == GClass::G2, "g in G2");

  if (c.scalar) {
    // f-weighted three-variable forms check f itself; the weights follow.
    if (is_f_case(id)) {
      if (!inst.f) throw ConfigError(std::string(to_string(id)) + " needs f");
      const auto& f = *inst.f;
      std::vector<double> pts;
      if (id == CaseId::S3F) {
        pts = scalar_xs(inst);
      } else {
        const double a = inst.abc[0], cc = inst.abc[2];
        const double b = id == CaseId::S3V ? inst.abc[1] : inst.alpha * a + (1.0 - inst.alpha) * cc;
        pts = {a, b, cc};
      }
      const bool dom = std::all_of(pts.begin(), pts.end(), [&](double p) { return f.in_domain(p); });
      sink.check(dom, "f domain");
      bool nonneg = dom;
      if (dom)
        for (double p : pts) nonneg = nonneg && f(p) >= -tol;
      const bool conv_mono = f.is_convex() || f.is_monotone();
      switch (id) {
        case CaseId::S3F:
          sink.check(nonneg, "f>=0");
          if (inst.form == S3FForm::Wright) {
            const bool ratio = f.infimum() > 0.0 && f.supremum() < 4.0 * f.infimum();
            sink.check(conv_mono || ratio, "f class");
            sink.check(is_monomial(*inst.g), "g=x^k");
          } else if (inst.form == S3FForm::ConvexCorollary) {
            sink.check(conv_mono, "f class");
          } else {
            const bool power = f.kind() == CoeffKind::PowerWeight && f.params()[0] > 0.0;
            sink.check(power, "f class");
            sink.check(sval(xs[2]) >= 0.0, "z>=0");
          }
          break;
        case CaseId::S3V: {
          const double a = pts[0], b = pts[1], cc = pts[2];
          sink.check((geq(a, b) && geq(b, cc)) || (geq(b, a) && geq(cc, b)), "a>=b>=c or a<=b<=c");
          sink.check(conv_mono, "f convex or monotone");
          sink.check(nonneg, "f>=0");
          break;
        }
        default:
          sink.check(geq(inst.abc[0], inst.abc[2]), "a>=c");
          sink.check(inst.alpha >= 0.0 && inst.alpha <= 1.0, "alpha in [0,1]");
          sink.check(f.is_convex(), "f convex");
          sink.check(nonneg, "f>=0");
          break;
      }
      return sink.take();
    }

    std::vector<double> a;
    if (inst.f && inst.coeffs.empty()) {
      bool dom = true;
      for (const auto& x : xs) dom = dom && inst.f->in_domain(sval(x));
      sink.check(dom, "f domain");
      if (!dom) return sink.take();
    }
    for (const auto& e : resolved_coeffs(id, inst)) a.push_back(sval(e));
    switch (id) {
      case CaseId::S2: sink.check(geq(a[0], std::abs(a[1])), "a1>=|a2|"); break;
      case CaseId::S3:
        sink.check(geq(a[0], 0.0), "a>=0");
        sink.check(geq(a[2], 0.0), "c>=0");
        sink.check(geq(a[0] + a[2], std::abs(a[1])), "a+c>=|b|");
        break;
      case CaseId::S4:
        sink.check(geq(a[0], std::max(std::abs(a[1]), std::abs(a[3]))), "a1>=max(|a2|,|a4|)");
        sink.check(geq(a[2], std::abs(a[3])), "a3>=|a4|");
        break;
      case CaseId::S5:
        sink.check(geq(a[0], std::max(std::abs(a[1]), std::abs(a[3]) - a[4])), "a1>=max(|a2|,|a4|-a5)");
        sink.check(geq(a[2], 0.0), "a3>=0");
        sink.check(geq(a[4], 0.0), "a5>=0");
        sink.check(geq(a[2] + a[4], std::abs(a[3])), "a3+a5>=|a4|");
        break;
      case CaseId::S6:
      case CaseId::S7:
        sink.check(geq(a[0], std::abs(a[1])), "a1>=|a2|");
        sink.check(geq(std::abs(a[1]), a[4]), "|a2|>=a5");
        if (id == CaseId::S6) {
          sink.check(geq(a[4], std::abs(a[5])), "a5>=|a6|");
        } else {
          sink.check(geq(a[4], std::abs(a[5]) - a[6]), "a5>=|a6|-a7");
        }
        sink.check(geq(a[2], std::abs(a[3])), "a3>=|a4|");
        if (id == CaseId::S7) {
          sink.check(geq(a[4], 0.0), "a5>=0");
          sink.check(geq(a[6], 0.0), "a7>=0");
        }
        break;
      default: break;
    }
    return sink.take();
  }

  const auto a = resolved_coeffs(id, inst);
  if (id == CaseId::C3) {
    for (const auto& e : a)
      if (e.kind() != ElementKind::Scalar) throw ConfigError("C3 coefficients are real numbers");
    const double ra = sval(a[0]), rb = sval(a[1]), rc = sval(a[2]);
    sink.check(geq(ra, 0.0), "a>=0");
    sink.check(geq(rc, 0.0), "c>=0");
    sink.check(geq(ra + rc, std::abs(rb)), "a+c>=|b|");
    return sink.take();
  }
  for (const auto& e : a)
    if (e.kind() != s.carrier_i) throw DimensionError("ring coefficient outside the carrier");

  auto nonneg = [&](const OrderedElement& e) { return ge(e, OrderedElement::zero_like(e)); };

  if (id == CaseId::C3P) {
    sink.check(nonneg(a[0]), "a>=0");
    sink.check(nonneg(a[2]), "c>=0");
    sink.check(is_upper_bound(s, a[0] + a[2], a[1], tol), "a+c bounds +-b");
    bool poly_ok = true;
    int parity = -1;
    for (std::size_t k = 0; k < inst.poly.size(); ++k) {
      if (inst.poly[k] < 0.0) poly_ok = false;
      if (inst.poly[k] == 0.0) continue;
      if (parity >= 0 && parity != static_cast<int>(k % 2)) poly_ok = false;
      parity = static_cast<int>(k % 2);
    }
    sink.check(poly_ok, "p in G");
    return sink.take();
  }

  SchurInstance with_coeffs = inst;
  with_coeffs.coeffs = a;
  const auto h = resolved_hats(with_coeffs, tol);
  bool bounds = true;
  for (std::size_t i = 1; i < m; i += 2) bounds = bounds && is_upper_bound(s, h[i], a[i], tol);
  sink.check(bounds, "hats bound +-a");

  if (c.needs_inverse) sink.check(invertible_positive(s, xs[1] - xs[5], tol), "(x2-x6)^-1>0");

  switch (id) {
    case CaseId::R4:
      sink.check(ge(a[0], h[1]), "a1>=^a2");
      sink.check(ge(h[1], a[2]), "^a2>=a3");
      sink.check(ge(a[2], h[3]), "a3>=^a4");
      sink.check(nonneg(h[3]), "^a4>=0");
      break;
    case CaseId::R5: {
      sink.check(ge(a[0], h[1]), "a1>=^a2");
      sink.check(ge(h[1], a[2]), "^a2>=a3");
      sink.check(nonneg(a[2]), "a3>=0");
      const bool first = ge(a[2] + a[4], h[3]) && ge(h[3], a[4]) && nonneg(a[4]);
      const bool second = ge(a[4], h[3]) && nonneg(h[3]);
      sink.check(first || second, "a5 branch");
      break;
    }
    case CaseId::R6:
    case CaseId::R7:
      sink.check(ge(a[0], h[1]), "a1>=^a2");
      sink.check(ge(h[1], a[4]), "^a2>=a5");
      sink.check(ge(a[4], h[5]), "a5>=^a6");
      sink.check(nonneg(h[5]), "^a6>=0");
      sink.check(ge(a[2], h[3]), "a3>=^a4");
      sink.check(nonneg(h[3]), "^a4>=0");
      if (id == CaseId::R7) {
        const bool first = ge(a[4] + a[6], h[5]) && ge(h[5], a[6]) && nonneg(a[6]);
        const bool second = ge(a[6], h[5]) && nonneg(h[5]);
        sink.check(first || second, "a7 branch");
      }
      break;
    default: break;
  }
  return sink.take();
}

// ---------------------------------------------------------------------------
// 2n -> 2n+1 reduction

Reduction decompose_reduction(CaseId id, const SchurInstance& inst) {
  if (id != CaseId::S5 && id != CaseId::S7 && id != CaseId::R5 && id != CaseId::R7)
    throw ConfigError("decompose_reduction applies to S5, S7, R5 and R7 only");
  require_shape(id, inst);

  Reduction red;
  red.normalized = inst;
  auto& norm = red.normalized;
  norm.coeffs = resolved_coeffs(id, inst);
  norm.f.reset();
  const auto& s = norm.structure;
  const std::size_t m = norm.xs.size();
  const std::size_t last = m - 1, prev = m - 2;
  const bool scalar_case = theorem_case(id).scalar;

  // A larger last coefficient only adds a nonnegative multiple of γ_m.
  double alpha = 1.0;
  if (scalar_case) {
    const double a_prev = sval(norm.coeffs[prev]);
    const double bound = std::abs(a_prev);
    if (sval(norm.coeffs[last]) > bound) norm.coeffs[last] = OrderedElement::scalar(bound);
    alpha = a_prev > 0.0 ? 1.0 : (a_prev < 0.0 ? -1.0 : 0.0);
  } else {
    const double tol = s.default_tol();
    const auto hats = resolved_hats(norm, tol);
    const auto r = cmp(norm.coeffs[last], hats[prev], tol);
    if (r.tag == OrderTag::Greater) norm.coeffs[last] = hats[prev];
  }

  red.direct = eval_margin(id, norm);

  const DiffFactor factor{id, norm};
  const auto& a = norm.coeffs;
  std::vector<OrderedElement> tilde;
  for (std::size_t i = 0; i < last; ++i) tilde.push_back(star(s, a[i], factor(i, last), StarCheck::Trusted));
  tilde.push_back(star(s, a[last], factor(prev, last), StarCheck::Trusted));

  std::vector<OrderedElement> reduced;
  for (std::size_t i = 0; i < prev; ++i) reduced.push_back(*fold(s, tilde[i], i, last, last, factor));
  red.parts[0] = sum_terms(reduced);

  const auto corr = *fold(s, tilde[prev] - alpha * tilde[last], prev, prev, last, factor);
  red.parts[1] = margin_of(corr, corr.norm());

  const auto gamma_last = *fold(s, std::nullopt, last, m, m, factor);
  const auto gamma_prev = *fold(s, std::nullopt, prev, m, m, factor);
  const auto tail = star(s, a[last], gamma_last + alpha * gamma_prev, StarCheck::Trusted);
  // Product rounding scales with ‖a‖·‖γ‖, not with ‖a∗γ‖; a_m may nearly
  // annihilate the dominant eigendirection of γ.
  red.parts[2] = margin_of(tail, a[last].norm() * (gamma_last.norm() + gamma_prev.norm()));

  const auto total = *red.parts[0].element + *red.parts[1].element + *red.parts[2].element;
  red.residual = (*red.direct.element - total).norm();
  return red;
}

// ---------------------------------------------------------------------------

QeqCheck qeq_cross_check(const CoeffFunctionSpec& f, const GFunctionSpec& g, double x, double z, double lambda,
                         double tol) {
  if (!(x > z)) throw ConfigError("cross-check needs x > z");
  SchurInstance q;
  q.xs = {OrderedElement::scalar(x), OrderedElement::scalar(z)};
  q.f = f;
  q.g = g;
  q.lambda = lambda;
  QeqCheck out;
  out.qg = eval_margin(CaseId::QEQ, q);

  SchurInstance s3;
  s3.xs = {OrderedElement::scalar(x), OrderedElement::scalar(lambda * x + (1.0 - lambda) * z),
           OrderedElement::scalar(z)};
  s3.f = f;
  s3.g = g;
  s3.form = S3FForm::ConvexCorollary;
  out.schur = eval_margin(CaseId::S3F, s3);
  out.signs_agree = out.schur.violates(tol) == out.qg.violates(tol);
  return out;
}

}  // namespace schur
