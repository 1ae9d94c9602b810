#include "schur/verifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "schur/errors.hpp"
#include "schur/matrix_domain.hpp"

namespace schur {

namespace {

OrderedElement as_element(const StructureDescriptor& s, const Matrix& m) {
  if (s.carrier_i == ElementKind::Scalar) return OrderedElement::scalar(m(0, 0));
  return OrderedElement::matrix(m);
}

std::vector<OrderedElement> scalar_elements(const std::vector<double>& v) {
  std::vector<OrderedElement> out;
  for (double x : v) out.push_back(OrderedElement::scalar(x));
  return out;
}

std::size_t ipow(std::size_t b, unsigned e) {
  std::size_t r = 1;
  for (unsigned k = 0; k < e; ++k) r *= b;
  return r;
}

// ---------------------------------------------------------------------------
// Coefficient functions

CoeffFunctionSpec random_convex_pwl(Rng& rng) {
  const auto k = static_cast<std::size_t>(rng.integer(3, 5));
  std::vector<double> xs;
  while (xs.size() < k) {
    const double x = rng.uniform(-8.0, 8.0);
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> slopes(k - 1);
  for (auto& s : slopes) s = rng.uniform(-3.0, 3.0);
  std::sort(slopes.begin(), slopes.end());
  slopes.front() = std::min(slopes.front(), 0.0);
  slopes.back() = std::max(slopes.back(), 0.0);
  std::vector<double> ys{0.0};
  for (std::size_t i = 1; i < k; ++i) ys.push_back(ys.back() + slopes[i - 1] * (xs[i] - xs[i - 1]));
  const double lift = (rng.bernoulli(kBoundaryProbability) ? 0.0 : rng.uniform()) - *std::min_element(ys.begin(), ys.end());
  std::vector<CoeffFunctionSpec::Point> pts;
  for (std::size_t i = 0; i < k; ++i) pts.emplace_back(xs[i], std::max(ys[i] + lift, 0.0));
  return CoeffFunctionSpec::convex_pwl(std::move(pts));
}

CoeffFunctionSpec random_monotone_pwl(Rng& rng) {
  const auto k = static_cast<std::size_t>(rng.integer(2, 5));
  std::vector<double> xs;
  while (xs.size() < k) {
    const double x = rng.uniform(-8.0, 8.0);
    if (std::find(xs.begin(), xs.end(), x) == xs.end()) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  std::vector<double> ys{rng.bernoulli(kBoundaryProbability) ? 0.0 : rng.uniform()};
  for (std::size_t i = 1; i < k; ++i) ys.push_back(ys.back() + (rng.bernoulli(0.2) ? 0.0 : rng.uniform(0.0, 3.0)));
  if (rng.bernoulli(0.5)) std::reverse(ys.begin(), ys.end());
  std::vector<CoeffFunctionSpec::Point> pts;
  for (std::size_t i = 0; i < k; ++i) pts.emplace_back(xs[i], ys[i]);
  return CoeffFunctionSpec::monotone_pwl(std::move(pts));
}

CoeffFunctionSpec random_bounded_ratio(Rng& rng) {
  const double c0 = rng.uniform(0.5, 2.0);
  return CoeffFunctionSpec::bounded_ratio(c0, rng.uniform(0.0, 0.59) * c0, rng.uniform(0.5, 5.0),
                                          rng.uniform(0.0, 6.283185307179586));
}

CoeffFunctionSpec convex_or_monotone(Rng& rng) {
  return rng.bernoulli(0.5) ? random_convex_pwl(rng) : random_monotone_pwl(rng);
}

template <class T>
const T& pick(const std::vector<T>& pool, Rng& rng) {
  return pool[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(pool.size()) - 1))];
}

/// Shifts a scalar chain so that its last entry is a nonnegative draw.
void shift_nonnegative(std::vector<double>& xs, Rng& rng) {
  const double target = rng.bernoulli(kBoundaryProbability) ? 0.0 : rng.uniform(0.0, 2.0);
  const double delta = target - xs.back();
  for (auto& x : xs) x += delta;
  xs.back() = target;
}

// ---------------------------------------------------------------------------
// Variables

struct Chain {
  std::vector<OrderedElement> xs;
  std::optional<Matrix> basis;
};

Chain gen_chain(const StructureDescriptor& s, const ChainCondition& cond, std::size_t dim, bool identity_basis,
                Rng& rng) {
  Chain out;
  switch (s.id) {
    case StructureId::RealMul:
      out.xs = scalar_elements(gen_scalar_chain(cond, rng));
      break;
    case StructureId::VecDot:
    case StructureId::VecBilinear:
    case StructureId::FuncQuad: {
      std::vector<std::vector<double>> v(cond.m, std::vector<double>(dim));
      for (std::size_t k = 0; k < dim; ++k) {
        const auto c = gen_scalar_chain(cond, rng);
        for (std::size_t i = 0; i < cond.m; ++i) v[i][k] = c[i];
      }
      for (auto& x : v) out.xs.push_back(OrderedElement::vector(std::move(x)));
      break;
    }
    case StructureId::MatmulCommuting: {
      auto c = gen_commuting_chain(cond, dim, rng, identity_basis);
      out.basis = c.basis;
      for (const auto& x : c.xs) out.xs.push_back(OrderedElement::matrix(x));
      break;
    }
    default:
      for (const auto& x : gen_ordered_chain(cond, dim, rng)) out.xs.push_back(OrderedElement::matrix(x));
      break;
  }
  return out;
}

std::vector<GFunctionSpec> odd_members(const std::vector<GFunctionSpec>& lib) {
  std::vector<GFunctionSpec> out;
  for (const auto& g : lib)
    if (g.odd()) out.push_back(g);
  return out;
}

std::vector<GFunctionSpec> monomials() {
  std::vector<GFunctionSpec> out;
  for (unsigned k = 0; k <= 4; ++k) out.push_back(GFunctionSpec::power(k));
  return out;
}

}  // namespace

GenConfig default_gen_config(CaseId id, StructureId structure, std::size_t dim) {
  GenConfig cfg;
  cfg.structure = StructureDescriptor::from_id(structure, dim);
  cfg.dim = structure == StructureId::RealMul ? 1 : dim;
  const auto& c = theorem_case(id);
  switch (c.g_req) {
    case GRequirement::G: cfg.g_pool = certified_library(GClass::G); break;
    case GRequirement::G2: cfg.g_pool = certified_library(GClass::G2); break;
    case GRequirement::OddG: cfg.g_pool = odd_members(certified_library(GClass::G)); break;
    case GRequirement::None: break;
  }
  switch (id) {
    case CaseId::C3P: cfg.n_pool = {0, 1, 2, 3}; break;
    case CaseId::R4:
    case CaseId::R5: cfg.n_pool = {1, 2, 3}; break;
    case CaseId::R6:
    case CaseId::R7: cfg.n_pool = {1, 2}; break;
    default: break;
  }
  return cfg;
}

SchurInstance generate_instance(CaseId id, const GenConfig& cfg, Rng& rng) {
  const auto& c = theorem_case(id);
  const auto& s = cfg.structure;
  if (!supports_structure(c, s))
    throw ConfigError(std::string(to_string(id)) + " is not stated for structure " + std::string(to_string(s.id)));
  const std::size_t dim = s.id == StructureId::RealMul ? 1 : cfg.dim;

  SchurInstance inst;
  inst.structure = s;
  ChainCondition cond;
  cond.m = c.arity;
  cond.sum_chain = c.arity >= 4;
  cond.require_invertible_x2_xm = c.needs_inverse;

  if (c.scalar) {
    if (cfg.g_pool.empty()) throw ConfigError("empty g pool");
    inst.g = pick(cfg.g_pool, rng);

    if (id == CaseId::QEQ) {
      const double z = 2.0 * rng.normal();
      const double x = z + 0.01 + 2.0 * std::abs(rng.normal());
      inst.xs = scalar_elements({x, z});
      inst.lambda = rng.uniform(1e-6, 1.0 - 1e-6);
      inst.f = convex_or_monotone(rng);
      return inst;
    }

    auto xs = gen_scalar_chain(cond, rng);
    switch (id) {
      case CaseId::S3F: {
        const S3FForm form = cfg.form ? *cfg.form : static_cast<S3FForm>(rng.integer(0, 2));
        inst.form = form;
        if (form == S3FForm::Wright) {
          inst.g = pick(monomials(), rng);
          const auto k = rng.integer(0, 2);
          inst.f = k == 0 ? random_convex_pwl(rng) : (k == 1 ? random_monotone_pwl(rng) : random_bounded_ratio(rng));
        } else if (form == S3FForm::ConvexCorollary) {
          inst.f = convex_or_monotone(rng);
        } else {
          shift_nonnegative(xs, rng);
          inst.f = CoeffFunctionSpec::power_weight(rng.uniform(0.01, 3.0));
        }
        break;
      }
      case CaseId::S3V: {
        std::vector<double> abc{2.0 * rng.normal(), 2.0 * rng.normal(), 2.0 * rng.normal()};
        if (rng.bernoulli(0.1)) abc[1] = abc[0];
        std::sort(abc.begin(), abc.end());
        if (rng.bernoulli(0.5)) std::reverse(abc.begin(), abc.end());
        inst.abc = {abc[0], abc[1], abc[2]};
        inst.f = convex_or_monotone(rng);
        break;
      }
      case CaseId::S3VG: {
        double a = 2.0 * rng.normal(), cc = 2.0 * rng.normal();
        if (a < cc) std::swap(a, cc);
        const double u = rng.uniform();
        inst.alpha = u < 0.1 ? 0.0 : (u < 0.2 ? 1.0 : rng.uniform());
        inst.abc = {a, 0.0, cc};
        inst.f = random_convex_pwl(rng);
        break;
      }
      case CaseId::S4:
      case CaseId::S6:
        if (rng.bernoulli(cfg.finta_fraction)) {
          shift_nonnegative(xs, rng);
          inst.f = CoeffFunctionSpec::power_weight(rng.uniform(0.01, 3.0));
        } else {
          inst.coeffs = scalar_elements(gen_scalar_coeffs(id, rng));
        }
        break;
      default:
        inst.coeffs = scalar_elements(gen_scalar_coeffs(id, rng));
        break;
    }
    inst.xs = scalar_elements(xs);
    return inst;
  }

  if (id == CaseId::C3) {
    auto chain = gen_chain(s, cond, dim, cfg.identity_basis, rng);
    inst.xs = std::move(chain.xs);
    inst.coeffs = scalar_elements(gen_scalar_coeffs(CaseId::C3, rng));
    return inst;
  }

  // Ring cases.
  // M ⪰ 0 with entrywise reciprocal ≻ 0 forces m_ij² = m_ii·m_jj and m_ij² < m_ii·m_jj at once.
  if (c.needs_inverse && s.id == StructureId::Hadamard && dim > 1)
    throw ConfigError("under HADAMARD the invertibility clause is unsatisfiable for dim > 1");
  auto chain = gen_chain(s, cond, dim, cfg.identity_basis, rng);
  inst.xs = std::move(chain.xs);

  std::vector<unsigned> pool = cfg.n_pool.empty() ? std::vector<unsigned>{1} : cfg.n_pool;
  const bool kron = s.id == StructureId::Kronecker || s.id == StructureId::RKronecker;
  if (kron) {
    std::erase_if(pool, [&](unsigned n) { return ipow(dim, 1 + 2 * n) > 64; });
    if (pool.empty()) throw ConfigError("Kronecker powers exceed the dimension cap at this dim");
  }
  inst.n = pick(pool, rng);
  if (id == CaseId::C3P && !kron && rng.bernoulli(0.25)) {
    // p with nonnegative coefficients on degrees of one parity.
    const unsigned parity = static_cast<unsigned>(rng.integer(0, 1));
    inst.poly.assign(4, 0.0);
    for (unsigned k = parity; k < 4; k += 2) inst.poly[k] = rng.bernoulli(0.3) ? 0.0 : rng.uniform(0.0, 2.0);
    inst.poly[parity + 2 * static_cast<unsigned>(rng.integer(0, 1))] += 0.5;
  }

  std::optional<Matrix> basis = chain.basis;
  if (s.id == StructureId::RealMul) basis = Matrix::identity(1);
  CoeffPattern pat{id, s.id == StructureId::RealMul ? 1 : dim, true};
  auto cc = gen_coeff_chain(pat, rng, basis);
  for (std::size_t i = 0; i < cc.coeffs.size(); ++i) {
    inst.coeffs.push_back(as_element(s, cc.coeffs[i]));
    inst.hats.push_back(as_element(s, cc.hats[i]));
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Campaigns

std::size_t campaign_threads() {
  if (const char* env = std::getenv("THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

namespace {

struct TrialOutcome {
  double relative = std::numeric_limits<double>::infinity();
  bool evaluated = false;
  bool skipped = false;
  std::optional<Witness> violation;
};

}  // namespace

VerificationReport run_campaign(CaseId id, const GenConfig& cfg, std::size_t trials, std::uint64_t seed, double tol) {
  if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
  if (!supports_structure(theorem_case(id), cfg.structure))
    throw ConfigError(std::string(to_string(id)) + " is not stated for structure " +
                      std::string(to_string(cfg.structure.id)));
  const auto start = std::chrono::steady_clock::now();

  VerificationReport rep;
  rep.case_id = id;
  rep.structure = cfg.structure.id;
  rep.dim = cfg.dim;
  rep.trials = trials;
  rep.seed = seed;
  rep.tol = tol;

  std::vector<TrialOutcome> out(trials);
  parallel_for(trials, campaign_threads(), [&](std::size_t i) {
    Rng rng(seed, i);
    auto& o = out[i];
    SchurInstance inst = generate_instance(id, cfg, rng);
    Witness w;
    w.trial = i;
    try {
      const auto hyp = check_hypothesis(id, inst, tol);
      const auto m = eval_margin(id, inst);
      o.evaluated = true;
      o.relative = m.relative();
      w.margin = m.value;
      w.scale = m.scale;
      w.hypothesis_satisfied = hyp.satisfied;
      w.failed_clauses = hyp.failed;
      if (!hyp.satisfied || m.violates(tol) || !std::isfinite(m.value)) o.violation = w;
    } catch (const SkippedSample&) {
      o.skipped = true;
    } catch (const Error& e) {
      w.margin = std::numeric_limits<double>::quiet_NaN();
      w.error = e.what();
      o.violation = w;
    }
    if (o.violation) o.violation->instance = std::move(inst);
  });

  std::size_t arg = trials;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto& o = out[i];
    if (o.skipped) ++rep.skipped;
    if (o.evaluated && o.relative < rep.min_margin) {
      rep.min_margin = o.relative;
      arg = i;
    }
    if (o.violation) rep.violations.push_back(*o.violation);
  }
  if (arg < trials) {
    Rng rng(seed, arg);
    Witness w;
    w.trial = arg;
    w.instance = generate_instance(id, cfg, rng);
    const auto m = eval_margin(id, w.instance);
    w.margin = m.value;
    w.scale = m.scale;
    w.hypothesis_satisfied = check_hypothesis(id, w.instance, tol).satisfied;
    rep.min_margin_witness = std::move(w);
  }
  rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace schur
