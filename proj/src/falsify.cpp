#include "schur/falsify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "schur/errors.hpp"
#include "schur/oracle.hpp"

namespace schur {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                             double step, std::size_t budget, double ftol) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };

  std::vector<std::vector<double>> simplex{x0};
  for (std::size_t i = 0; i < n; ++i) {
    auto v = x0;
    v[i] += step;
    simplex.push_back(std::move(v));
  }
  std::vector<double> fv;
  for (const auto& v : simplex) fv.push_back(eval(v));

  std::vector<std::size_t> order(n + 1);
  auto point = [&](const std::vector<double>& c, const std::vector<double>& w, double t) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = c[k] + t * (w[k] - c[k]);
    return out;
  };

  while (res.evaluations + 2 <= budget) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (std::isfinite(fv[worst]) && fv[worst] - fv[best] <= ftol * (1.0 + std::abs(fv[best]))) break;

    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i)
      if (i != worst)
        for (std::size_t k = 0; k < n; ++k) c[k] += simplex[i][k] / static_cast<double>(n);

    const auto xr = point(c, simplex[worst], -1.0);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      const auto xe = point(c, simplex[worst], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const auto xc = outside ? point(c, xr, 0.5) : point(c, simplex[worst], 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fv[worst])) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        if (res.evaluations + n > budget) break;
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          simplex[i] = point(simplex[best], simplex[i], 0.5);
          fv[i] = eval(simplex[i]);
        }
      }
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  res.x = simplex[static_cast<std::size_t>(it - fv.begin())];
  res.fx = *it;
  return res;
}

// ---------------------------------------------------------------------------
// Parametrizations

namespace {

double free_param(double p) { return 5.0 * std::tanh(p / 5.0); }
double nonneg_param(double p) { return 5.0 * p * p / (1.0 + p * p); }

bool is_coefficient_case(CaseId id) {
  switch (id) {
    case CaseId::S2:
    case CaseId::S3:
    case CaseId::S4:
    case CaseId::S5:
    case CaseId::S6:
    case CaseId::S7: return true;
    default: return false;
  }
}

bool is_x_clause(const std::string& clause) {
  return clause == "x nonincreasing" || clause == "x1+x4>=x2+x3" || clause == "x1+x6>=x2+x5" ||
         clause == "x2+x5>=x3+x4";
}

/// Coefficient slots kept nonnegative when coefficients are raw.
std::vector<std::size_t> sign_constrained(CaseId id) {
  switch (id) {
    case CaseId::S3: return {0, 2};
    case CaseId::S5: return {2, 4};
    case CaseId::S7: return {4, 6};
    default: return {};
  }
}

/// The clause that makes slot i nonnegative.
std::string sign_clause(CaseId id, std::size_t i) {
  switch (id) {
    case CaseId::S3: return i == 0 ? "a>=0" : "c>=0";
    case CaseId::S5: return i == 2 ? "a3>=0" : "a5>=0";
    case CaseId::S7: return i == 4 ? "a5>=0" : "a7>=0";
    default: return "";
  }
}

bool raw_coeffs(const FalsifyConfig& cfg) {
  return cfg.region == Region::Violating && !cfg.finta_t && !is_x_clause(cfg.clause) && cfg.clause != "g in G2";
}

std::size_t coeff_params(const FalsifyConfig& cfg) {
  if (cfg.finta_t) return 0;
  return theorem_case(cfg.id).arity;
}

void validate(const FalsifyConfig& cfg) {
  if (!is_coefficient_case(cfg.id))
    throw ConfigError("the falsifier covers the coefficient cases S2-S7; got " + std::string(to_string(cfg.id)));
  if (cfg.budget < 1) throw ConfigError("falsifier budget must be at least 1");
  if (cfg.starts < 1) throw ConfigError("falsifier needs at least one start");
  if (cfg.finta_t) {
    if (cfg.id != CaseId::S4 && cfg.id != CaseId::S6) throw ConfigError("x_i^t weights apply to S4 and S6");
    if (!(*cfg.finta_t > 0.0)) throw ConfigError("x_i^t weights need t > 0");
  }
  if (cfg.region == Region::Violating) {
    const auto clauses = hypothesis_clauses(cfg.id);
    if (std::find(clauses.begin(), clauses.end(), cfg.clause) == clauses.end())
      throw ConfigError("'" + cfg.clause + "' is not a clause of " + std::string(to_string(cfg.id)));
    if (cfg.finta_t && !is_x_clause(cfg.clause))
      throw ConfigError("with x_i^t weights only variable clauses can be dropped");
  }
}

std::vector<double> satisfying_coeffs(CaseId id, const double* p) {
  auto fr = [&](std::size_t k) { return free_param(p[k]); };
  auto nn = [&](std::size_t k) { return nonneg_param(p[k]); };
  switch (id) {
    case CaseId::S2: return {std::abs(fr(0)) + nn(1), fr(0)};
    case CaseId::S3: {
      const double b = fr(0), total = std::abs(b) + nn(1);
      const double theta = 0.5 * (1.0 + std::tanh(p[2]));
      return {theta * total, b, (1.0 - theta) * total};
    }
    case CaseId::S4: {
      const double a2 = fr(0), a4 = fr(1);
      return {std::max(std::abs(a2), std::abs(a4)) + nn(2), a2, std::abs(a4) + nn(3), a4};
    }
    case CaseId::S5: {
      const double a2 = fr(0), a4 = fr(1), a5 = nn(2);
      return {std::max(std::abs(a2), std::abs(a4) - a5) + nn(4), a2, std::max(0.0, std::abs(a4) - a5) + nn(3), a4, a5};
    }
    case CaseId::S6:
    case CaseId::S7: {
      const double a6 = fr(0);
      const double a7 = id == CaseId::S7 ? nn(6) : 0.0;
      const double a5 = std::max(0.0, std::abs(a6) - a7) + nn(1);
      const double a2 = (p[2] < 0.0 ? -1.0 : 1.0) * (a5 + nn(2));
      const double a1 = std::abs(a2) + nn(3);
      const double a4 = fr(4);
      const double a3 = std::abs(a4) + nn(5);
      if (id == CaseId::S6) return {a1, a2, a3, a4, a5, a6};
      return {a1, a2, a3, a4, a5, a6, a7};
    }
    default: throw ConfigError("no coefficient pattern");
  }
}

}  // namespace

std::size_t param_count(const FalsifyConfig& cfg) {
  validate(cfg);
  return theorem_case(cfg.id).arity + coeff_params(cfg);
}

SchurInstance instance_from_params(const FalsifyConfig& cfg, const std::vector<double>& p) {
  const std::size_t total = param_count(cfg);
  if (p.size() != total) throw DimensionError("parameter vector length mismatch");
  const std::size_t m = theorem_case(cfg.id).arity;
  const bool drop = cfg.region == Region::Violating;
  auto dropped = [&](const char* clause) { return drop && cfg.clause == clause; };

  // d[i] = x_{i+1} − x_{i+2} (0-based: x[i] − x[i+1]).
  std::vector<double> d(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i)
    d[i] = dropped("x nonincreasing") ? free_param(p[1 + i]) : nonneg_param(p[1 + i]);
  if (m == 4 || m == 5) {
    if (!dropped("x1+x4>=x2+x3")) d[0] += d[2];
  } else if (m >= 6) {
    if (!dropped("x1+x6>=x2+x5")) d[0] += d[4];
    if (!dropped("x2+x5>=x3+x4")) d[1] += d[3];
  }
  std::vector<double> xs(m);
  xs[m - 1] = cfg.finta_t ? nonneg_param(p[0]) : free_param(p[0]);
  for (std::size_t i = m - 1; i-- > 0;) xs[i] = xs[i + 1] + d[i];

  SchurInstance inst;
  for (double x : xs) inst.xs.push_back(OrderedElement::scalar(x));
  inst.g = cfg.g ? *cfg.g : GFunctionSpec::identity();
  if (cfg.finta_t) {
    inst.f = CoeffFunctionSpec::power_weight(*cfg.finta_t);
    return inst;
  }

  const double* cp = p.data() + m;
  std::vector<double> a;
  if (raw_coeffs(cfg)) {
    const auto nonneg = sign_constrained(cfg.id);
    for (std::size_t i = 0; i < m; ++i) {
      const bool keep = std::find(nonneg.begin(), nonneg.end(), i) != nonneg.end() && sign_clause(cfg.id, i) != cfg.clause;
      a.push_back(keep ? nonneg_param(cp[i]) : free_param(cp[i]));
    }
  } else {
    a = satisfying_coeffs(cfg.id, cp);
  }
  for (double v : a) inst.coeffs.push_back(OrderedElement::scalar(v));
  return inst;
}

FalsifyResult falsify(const FalsifyConfig& cfg) {
  const std::size_t n = param_count(cfg);
  FalsifyResult out;
  std::vector<double> best_p;

  auto objective = [&](const std::vector<double>& p) {
    try {
      return eval_margin(cfg.id, instance_from_params(cfg, p)).relative();
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const std::size_t per_start = std::max<std::size_t>(1, cfg.budget / cfg.starts);
  // Fresh starts continue past cfg.starts while budget for a simplex remains.
  for (std::size_t s = 0; out.evaluations < cfg.budget && (s < cfg.starts || cfg.budget - out.evaluations >= n + 3);
       ++s) {
    Rng rng(cfg.seed, s);
    std::vector<double> x(n);
    for (auto& v : x) v = 1.5 * rng.normal();
    const std::size_t limit = std::min(per_start, cfg.budget - out.evaluations);
    std::size_t used = 0;
    double fx = std::numeric_limits<double>::infinity();
    // Restart from the best point while restarts keep improving.
    while (used + n + 3 <= limit) {
      auto r = nelder_mead(objective, x, 1.0, limit - used);
      used += r.evaluations;
      const bool improved = r.fx < fx - 1e-12 * (1.0 + std::abs(fx));
      if (r.fx < fx) {
        fx = r.fx;
        x = r.x;
      }
      if (!improved) break;
    }
    if (used == 0) {
      fx = objective(x);
      used = 1;
    }
    out.evaluations += used;
    if (fx < out.best_relative) {
      out.best_relative = fx;
      best_p = x;
    }
  }

  if (best_p.empty()) return out;
  out.best_instance = instance_from_params(cfg, best_p);
  const auto m = eval_margin(cfg.id, out.best_instance);
  if (m.violates(10.0 * cfg.tol)) {
    Witness w;
    w.instance = out.best_instance;
    w.margin = m.value;
    w.scale = m.scale;
    const auto hyp = check_hypothesis(cfg.id, w.instance, cfg.tol);
    w.hypothesis_satisfied = hyp.satisfied;
    w.failed_clauses = hyp.failed;
    out.witness = std::move(w);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Necessity suite

namespace {

Witness evaluate(CaseId id, SchurInstance inst, double tol) {
  Witness w;
  const auto m = eval_margin(id, inst);
  const auto hyp = check_hypothesis(id, inst, tol);
  w.margin = m.value;
  w.scale = m.scale;
  w.hypothesis_satisfied = hyp.satisfied;
  w.failed_clauses = hyp.failed;
  w.instance = std::move(inst);
  return w;
}

std::vector<OrderedElement> scalars(std::initializer_list<double> v) {
  std::vector<OrderedElement> out;
  for (double x : v) out.push_back(OrderedElement::scalar(x));
  return out;
}

}  // namespace

std::vector<NecessityWitness> necessity_suite(std::uint64_t seed) {
  std::vector<NecessityWitness> out;

  {
    SchurInstance inst;
    inst.xs = scalars({2.0, 1.0, 0.0});
    inst.coeffs = scalars({1.0, 5.0, 1.0});
    inst.g = GFunctionSpec::identity();
    NecessityWitness nw{"S3 without a+c>=|b|", CaseId::S3, evaluate(CaseId::S3, inst, kScalarTol), "", -1.0};
    nw.exact = oracle_margin_exact(CaseId::S3, nw.witness.instance).get_str();
    out.push_back(std::move(nw));
  }

  {
    FalsifyConfig cfg;
    cfg.id = CaseId::S4;
    cfg.region = Region::Violating;
    cfg.clause = "x1+x4>=x2+x3";
    cfg.budget = 100000;
    cfg.seed = seed;
    cfg.finta_t = 0.01;
    auto r = falsify(cfg);
    NecessityWitness nw{"S4 with x_i^t weights (t=0.01) without x1+x4>=x2+x3", CaseId::S4, {}, "",
                        std::numeric_limits<double>::quiet_NaN()};
    if (r.witness) {
      nw.witness = *r.witness;
    } else {
      nw.witness = evaluate(CaseId::S4, r.best_instance, kScalarTol);
    }
    out.push_back(std::move(nw));
  }

  {
    SchurInstance inst;
    inst.xs = scalars({1.0, 0.5, 0.0});
    inst.g = product(GFunctionSpec::sign(), GFunctionSpec::abs_pow(0.5));
    inst.f = godunova_levin_example();
    inst.form = S3FForm::ConvexCorollary;
    out.push_back({"S3F with the Godunova-Levin f and g=sign*sqrt|x|", CaseId::S3F, evaluate(CaseId::S3F, inst, kScalarTol),
                   "sqrt(2)-2", std::sqrt(2.0) - 2.0});
  }
  return out;
}

}  // namespace schur
