#include "schur/gfun.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "schur/errors.hpp"
#include "schur/random.hpp"

namespace schur {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool factor_odd(const GBase& b) { return b.kind == GBaseKind::Sign || b.kind == GBaseKind::Identity; }

bool factor_g2(const GBase& b) {
  if (b.kind == GBaseKind::AbsPow) return b.param == 0.0 || b.param >= 1.0;
  return true;
}

double eval_factor(const GBase& b, double x) {
  switch (b.kind) {
    case GBaseKind::Const: return b.param;
    case GBaseKind::Sign: return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    case GBaseKind::AbsPow: return std::pow(std::abs(x), b.param);
    case GBaseKind::ExpAbs: return std::exp(std::abs(x));
    case GBaseKind::Identity: return x;
  }
  return 0.0;
}

}  // namespace

std::string_view to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }
std::string_view to_string(GClass c) { return c == GClass::G ? "G" : "G2"; }

GFunctionSpec GFunctionSpec::constant(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("G-class constant must be finite and >= 0");
  return GFunctionSpec({{GBaseKind::Const, a}});
}
GFunctionSpec GFunctionSpec::sign() { return GFunctionSpec({{GBaseKind::Sign, 0.0}}); }
GFunctionSpec GFunctionSpec::abs_pow(double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("|x|^s needs finite s >= 0");
  return GFunctionSpec({{GBaseKind::AbsPow, s}});
}
GFunctionSpec GFunctionSpec::exp_abs() { return GFunctionSpec({{GBaseKind::ExpAbs, 0.0}}); }
GFunctionSpec GFunctionSpec::identity() { return GFunctionSpec({{GBaseKind::Identity, 0.0}}); }

GFunctionSpec GFunctionSpec::power(unsigned k) {
  auto base = abs_pow(static_cast<double>(k));
  return k % 2 == 0 ? base : product(sign(), base);
}

Parity GFunctionSpec::parity() const {
  const auto odd = std::count_if(factors_.begin(), factors_.end(), factor_odd);
  return odd % 2 == 0 ? Parity::Even : Parity::Odd;
}

GClass GFunctionSpec::claimed() const {
  return std::all_of(factors_.begin(), factors_.end(), factor_g2) ? GClass::G2 : GClass::G;
}

double GFunctionSpec::operator()(double x) const {
  double v = 1.0;
  for (const auto& f : factors_) v *= eval_factor(f, x);
  return v;
}

std::string GFunctionSpec::name() const {
  std::string out;
  for (const auto& f : factors_) {
    if (!out.empty()) out += '*';
    switch (f.kind) {
      case GBaseKind::Const: out += "const(" + format_number(f.param) + ")"; break;
      case GBaseKind::Sign: out += "sign"; break;
      case GBaseKind::AbsPow: out += "abspow(" + format_number(f.param) + ")"; break;
      case GBaseKind::ExpAbs: out += "expabs"; break;
      case GBaseKind::Identity: out += "identity"; break;
    }
  }
  return out;
}

double eval_g(const GFunctionSpec& g, double x) { return g(x); }

GFunctionSpec product(const GFunctionSpec& a, const GFunctionSpec& b) {
  std::vector<GBase> f(a.factors_);
  f.insert(f.end(), b.factors_.begin(), b.factors_.end());
  return GFunctionSpec(std::move(f));
}

std::optional<GFunctionSpec> parse_gfunction(std::string_view text) {
  std::optional<GFunctionSpec> acc;
  while (!text.empty()) {
    const auto star = text.find('*');
    std::string_view tok = text.substr(0, star);
    text = star == std::string_view::npos ? std::string_view{} : text.substr(star + 1);

    std::optional<GFunctionSpec> factor;
    auto param = [&](std::string_view prefix) -> std::optional<double> {
      if (!tok.starts_with(prefix) || !tok.ends_with(")")) return std::nullopt;
      auto inner = tok.substr(prefix.size(), tok.size() - prefix.size() - 1);
      double v = 0.0;
      auto res = std::from_chars(inner.data(), inner.data() + inner.size(), v);
      if (res.ec != std::errc{} || res.ptr != inner.data() + inner.size()) return std::nullopt;
      return v;
    };
    try {
      if (tok == "sign") {
        factor = GFunctionSpec::sign();
      } else if (tok == "expabs") {
        factor = GFunctionSpec::exp_abs();
      } else if (tok == "identity" || tok == "x") {
        factor = GFunctionSpec::identity();
      } else if (auto v = param("const(")) {
        factor = GFunctionSpec::constant(*v);
      } else if (auto s = param("abspow(")) {
        factor = GFunctionSpec::abs_pow(*s);
      }
    } catch (const DomainError&) {
      return std::nullopt;
    }
    if (!factor) return std::nullopt;
    acc = acc ? product(*acc, *factor) : *factor;
  }
  return acc;
}

std::optional<IntegerPowerForm> integer_power_form(const GFunctionSpec& g) {
  IntegerPowerForm form;
  for (const auto& f : g.factors()) {
    switch (f.kind) {
      case GBaseKind::Const: form.coefficient *= f.param; break;
      case GBaseKind::Sign: ++form.sign_count; break;
      case GBaseKind::Identity:
        ++form.sign_count;
        ++form.degree;
        break;
      case GBaseKind::AbsPow:
        if (f.param != std::floor(f.param)) return std::nullopt;
        form.degree += static_cast<unsigned>(f.param);
        break;
      case GBaseKind::ExpAbs: return std::nullopt;
    }
  }
  return form;
}

bool is_monomial(const GFunctionSpec& g) {
  auto form = integer_power_form(g);
  if (!form || form->coefficient != 1.0) return false;
  // sign(x)^σ|x|^k equals x^k iff σ ≡ k (mod 2), and at x = 0 the sign
  // factors vanish, which matches x^k only for k >= 1 (or σ = 0).
  if (form->sign_count % 2 != form->degree % 2) return false;
  return form->sign_count == 0 || form->degree >= 1;
}

std::vector<GFunctionSpec> g2_base_library() {
  return {GFunctionSpec::constant(2.0), GFunctionSpec::sign(),      GFunctionSpec::abs_pow(1.0),
          GFunctionSpec::abs_pow(1.5),  GFunctionSpec::abs_pow(2.0), GFunctionSpec::abs_pow(3.0),
          GFunctionSpec::exp_abs()};
}

std::vector<GFunctionSpec> g2_library() {
  auto base = g2_base_library();
  std::vector<GFunctionSpec> out = base;
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = i; j < base.size(); ++j) out.push_back(product(base[i], base[j]));
  return out;
}

std::vector<GFunctionSpec> g_library() {
  auto out = g2_library();
  for (double s : {0.25, 0.5}) {
    out.push_back(GFunctionSpec::abs_pow(s));
    out.push_back(product(GFunctionSpec::sign(), GFunctionSpec::abs_pow(s)));
    out.push_back(product(GFunctionSpec::abs_pow(s), GFunctionSpec::exp_abs()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coefficient functions

std::string_view to_string(CoeffKind k) {
  switch (k) {
    case CoeffKind::PowerWeight: return "PowerWeight";
    case CoeffKind::ConvexPiecewiseLinear: return "ConvexPiecewiseLinear";
    case CoeffKind::MonotonePiecewiseLinear: return "MonotonePiecewiseLinear";
    case CoeffKind::BoundedRatio: return "BoundedRatio";
    case CoeffKind::TableFunction: return "TableFunction";
  }
  return "?";
}

namespace {

void require_sorted(const std::vector<CoeffFunctionSpec::Point>& pts, std::size_t min_count) {
  if (pts.size() < min_count) throw ConfigError("piecewise-linear function needs more breakpoints");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!std::isfinite(pts[i].first) || !std::isfinite(pts[i].second)) throw ConfigError("non-finite breakpoint");
    if (i > 0 && !(pts[i].first > pts[i - 1].first)) throw ConfigError("breakpoints must be strictly increasing");
  }
}

std::vector<double> slopes(const std::vector<CoeffFunctionSpec::Point>& pts) {
  std::vector<double> s;
  for (std::size_t i = 1; i < pts.size(); ++i)
    s.push_back((pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first));
  return s;
}

double interpolate(std::span<const CoeffFunctionSpec::Point> pts, double x, bool extrapolate) {
  if (pts.size() == 1) return pts.front().second;
  std::size_t seg = 0;
  if (x <= pts.front().first) {
    if (!extrapolate) return pts.front().second;
    seg = 0;
  } else if (x >= pts.back().first) {
    if (!extrapolate) return pts.back().second;
    seg = pts.size() - 2;
  } else {
    auto it = std::upper_bound(pts.begin(), pts.end(), x,
                               [](double v, const CoeffFunctionSpec::Point& p) { return v < p.first; });
    seg = static_cast<std::size_t>(it - pts.begin()) - 1;
  }
  const auto& [x0, y0] = pts[seg];
  const auto& [x1, y1] = pts[seg + 1];
  if (x == x0) return y0;
  if (x == x1) return y1;
  return y0 + (y1 - y0) * ((x - x0) / (x1 - x0));
}

}  // namespace

CoeffFunctionSpec CoeffFunctionSpec::power_weight(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("power weight needs finite t >= 0");
  CoeffFunctionSpec f;
  f.kind_ = CoeffKind::PowerWeight;
  f.params_ = {t};
  f.lo_ = 0.0;
  return f;
}

CoeffFunctionSpec CoeffFunctionSpec::convex_pwl(std::vector<Point> points) {
  require_sorted(points, 2);
  auto s = slopes(points);
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i] < s[i - 1]) throw ConfigError("convex piecewise-linear slopes must be nondecreasing");
  CoeffFunctionSpec f;
  f.kind_ = CoeffKind::ConvexPiecewiseLinear;
  f.points_ = std::move(points);
  return f;
}

CoeffFunctionSpec CoeffFunctionSpec::monotone_pwl(std::vector<Point> points) {
  require_sorted(points, 1);
  auto s = slopes(points);
  const bool up = std::all_of(s.begin(), s.end(), [](double v) { return v >= 0.0; });
  const bool down = std::all_of(s.begin(), s.end(), [](double v) { return v <= 0.0; });
  if (!up && !down) throw ConfigError("monotone piecewise-linear slopes must share a sign");
  CoeffFunctionSpec f;
  f.kind_ = CoeffKind::MonotonePiecewiseLinear;
  f.points_ = std::move(points);
  return f;
}

CoeffFunctionSpec CoeffFunctionSpec::bounded_ratio(double c0, double amp, double freq, double phase) {
  if (!(c0 > 0.0) || !(amp >= 0.0) || !(5.0 * amp < 3.0 * c0))
    throw ConfigError("bounded-ratio function needs c0 > 0 and 0 <= amp < 3c0/5");
  CoeffFunctionSpec f;
  f.kind_ = CoeffKind::BoundedRatio;
  f.params_ = {c0, amp, freq, phase};
  return f;
}

CoeffFunctionSpec CoeffFunctionSpec::table(std::vector<Point> points, double default_value, double lo, double hi) {
  if (!(lo <= hi)) throw ConfigError("table domain is empty");
  std::sort(points.begin(), points.end());
  for (std::size_t i = 1; i < points.size(); ++i)
    if (points[i].first == points[i - 1].first) throw ConfigError("duplicate table key");
  CoeffFunctionSpec f;
  f.kind_ = CoeffKind::TableFunction;
  f.points_ = std::move(points);
  f.params_ = {default_value};
  f.lo_ = lo;
  f.hi_ = hi;
  return f;
}

double CoeffFunctionSpec::operator()(double x) const {
  if (!in_domain(x)) throw DomainError(describe() + " evaluated outside its domain at " + format_number(x));
  switch (kind_) {
    case CoeffKind::PowerWeight: {
      const double t = params_[0];
      if (x == 0.0) return t > 0.0 ? 0.0 : 1.0;
      return std::pow(x, t);
    }
    case CoeffKind::ConvexPiecewiseLinear: return interpolate(points_, x, true);
    case CoeffKind::MonotonePiecewiseLinear: return interpolate(points_, x, false);
    case CoeffKind::BoundedRatio: return params_[0] + params_[1] * std::sin(params_[2] * x + params_[3]);
    case CoeffKind::TableFunction: {
      for (const auto& [k, v] : points_)
        if (k == x) return v;
      return params_[0];
    }
  }
  return 0.0;
}

bool CoeffFunctionSpec::is_convex() const {
  switch (kind_) {
    case CoeffKind::PowerWeight: return params_[0] >= 1.0 || params_[0] == 0.0;
    case CoeffKind::ConvexPiecewiseLinear: return true;
    case CoeffKind::MonotonePiecewiseLinear: return points_.size() <= 1;
    case CoeffKind::BoundedRatio: return params_[1] == 0.0;
    case CoeffKind::TableFunction: return points_.empty();
  }
  return false;
}

bool CoeffFunctionSpec::is_monotone() const {
  switch (kind_) {
    case CoeffKind::PowerWeight:
    case CoeffKind::MonotonePiecewiseLinear: return true;
    case CoeffKind::ConvexPiecewiseLinear: {
      auto s = slopes(points_);
      return s.front() >= 0.0 || s.back() <= 0.0;
    }
    case CoeffKind::BoundedRatio: return params_[1] == 0.0;
    case CoeffKind::TableFunction: return points_.empty();
  }
  return false;
}

double CoeffFunctionSpec::infimum() const {
  switch (kind_) {
    case CoeffKind::PowerWeight: return params_[0] > 0.0 ? 0.0 : 1.0;
    case CoeffKind::ConvexPiecewiseLinear: {
      auto s = slopes(points_);
      if (s.front() > 0.0 || s.back() < 0.0) return -kInf;
      double m = kInf;
      for (const auto& p : points_) m = std::min(m, p.second);
      return m;
    }
    case CoeffKind::MonotonePiecewiseLinear: {
      double m = kInf;
      for (const auto& p : points_) m = std::min(m, p.second);
      return m;
    }
    case CoeffKind::BoundedRatio: return params_[0] - params_[1];
    case CoeffKind::TableFunction: {
      double m = params_[0];
      for (const auto& p : points_) m = std::min(m, p.second);
      return m;
    }
  }
  return -kInf;
}

double CoeffFunctionSpec::supremum() const {
  switch (kind_) {
    case CoeffKind::PowerWeight: return params_[0] > 0.0 ? kInf : 1.0;
    case CoeffKind::ConvexPiecewiseLinear: return kInf;
    case CoeffKind::MonotonePiecewiseLinear: {
      double m = -kInf;
      for (const auto& p : points_) m = std::max(m, p.second);
      return m;
    }
    case CoeffKind::BoundedRatio: return params_[0] + params_[1];
    case CoeffKind::TableFunction: {
      double m = params_[0];
      for (const auto& p : points_) m = std::max(m, p.second);
      return m;
    }
  }
  return kInf;
}

std::string CoeffFunctionSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind_);
  switch (kind_) {
    case CoeffKind::PowerWeight: os << "(t=" << format_number(params_[0]) << ")"; break;
    case CoeffKind::BoundedRatio:
      os << "(c0=" << format_number(params_[0]) << ",amp=" << format_number(params_[1])
         << ",freq=" << format_number(params_[2]) << ",phase=" << format_number(params_[3]) << ")";
      break;
    default: {
      os << "(";
      for (std::size_t i = 0; i < points_.size(); ++i)
        os << (i ? "," : "") << "[" << format_number(points_[i].first) << "," << format_number(points_[i].second)
           << "]";
      if (kind_ == CoeffKind::TableFunction)
        os << ";default=" << format_number(params_[0]) << ";domain=[" << format_number(lo_) << ","
           << format_number(hi_) << "]";
      os << ")";
    }
  }
  return os.str();
}

CoeffFunctionSpec godunova_levin_example() { return CoeffFunctionSpec::table({{0.5, 4.0}}, 1.0, 0.0, 1.0); }

// ---------------------------------------------------------------------------
// Certification

const CheckResult* CertReport::find(std::string_view id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

GridPlan GridPlan::defaults() {
  GridPlan g;
  for (int i = 0; i < 64; ++i) g.magnitudes.push_back(std::pow(10.0, -3.0 + 6.0 * i / 63.0));
  return g;
}

namespace {

class CheckAccumulator {
 public:
  explicit CheckAccumulator(std::string id) { result_.id = std::move(id); }

  /// Records margin/scale; non-finite inputs count as skipped.
  void add(double margin, double scale, std::initializer_list<double> witness) {
    if (!std::isfinite(margin) || !std::isfinite(scale)) {
      ++result_.skipped;
      return;
    }
    ++result_.evaluated;
    const double rel = margin / scale;
    if (rel < result_.worst_margin) {
      result_.worst_margin = rel;
      result_.witness.assign(witness.begin(), witness.end());
    }
  }
  void skip() { ++result_.skipped; }

  CheckResult take() { return std::move(result_); }

 private:
  CheckResult result_;
};

double max_abs(std::initializer_list<double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void finish(CertReport& r) {
  r.passed = true;
  r.sample_count = 0;
  for (const auto& c : r.checks) {
    r.sample_count += c.evaluated;
    if (c.worst_margin < -kCertTol) r.passed = false;
  }
}

}  // namespace

CertReport certify_class(const GFunctionSpec& g, GClass target, const GridPlan& grid, std::uint64_t seed) {
  if (grid.magnitudes.empty() && grid.random_triples == 0) throw ConfigError("certification grid is empty");

  // Nonnegative sample values: zero, the log grid, and seeded uniforms.
  std::vector<double> values{0.0};
  values.insert(values.end(), grid.magnitudes.begin(), grid.magnitudes.end());

  struct Triple {
    double x, y, z;
  };
  std::vector<Triple> triples;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (double z : values) {
        const double x = std::max(values[i], values[j]);
        const double y = std::min(values[i], values[j]);
        triples.push_back({x, y, z});
      }
  for (std::size_t k = 0; k < grid.random_triples; ++k) {
    Rng rng(seed, k);
    double a = rng.uniform(0.0, grid.random_max);
    double b = rng.uniform(0.0, grid.random_max);
    double z = rng.uniform(0.0, grid.random_max);
    if (k % 8 == 1) b = 0.0;  // y = 0 boundary
    if (k % 8 == 2) z = 0.0;
    triples.push_back({std::max(a, b), std::min(a, b), z});
  }

  CertReport report;
  report.seed = seed;

  {
    CheckAccumulator acc("g0_nonneg");
    const double g0 = g(0.0);
    acc.add(g0, 1.0 + std::abs(g0), {0.0});
    report.checks.push_back(acc.take());
  }
  {
    CheckAccumulator acc("monotone");
    for (const auto& t : triples) {
      const double gx = g(t.x), gy = g(t.y);
      acc.add(gx - gy, 1.0 + max_abs({gx, gy}), {t.x, t.y});
    }
    report.checks.push_back(acc.take());
  }
  {
    CheckAccumulator acc("parity");
    const double sgn = g.odd() ? -1.0 : 1.0;
    for (const auto& t : triples) {
      for (double x : {t.x, t.y, t.z}) {
        const double pos = g(x), neg = g(-x);
        if (!std::isfinite(pos) && !std::isfinite(neg)) {
          acc.skip();
          continue;
        }
        acc.add(neg == sgn * pos ? 0.0 : -1.0, 1.0, {x});
      }
    }
    report.checks.push_back(acc.take());
  }

  if (target == GClass::G2) {
    CheckAccumulator prod("product"), sum("sum"), mid("midpoint");
    for (const auto& t : triples) {
      const double gx = g(t.x), gy = g(t.y), gyz = g(t.y + t.z), gxz = g(t.x + t.z);
      prod.add(gx * gyz - gy * gxz, 1.0 + max_abs({gx * gyz, gy * gxz}), {t.x, t.y, t.z});
      sum.add(gy + gxz - gx - gyz, 1.0 + max_abs({gx, gy, gyz, gxz}), {t.x, t.y, t.z});
    }
    // g(x)² >= g(x−z)g(x+z) for 0 <= z <= x.
    for (const auto& t : triples) {
      const double x = t.x, z = t.y;
      const double gx = g(x), gm = g(x - z), gp = g(x + z);
      mid.add(gx * gx - gm * gp, 1.0 + max_abs({gx * gx, gm * gp}), {x, z});
    }
    report.checks.push_back(prod.take());
    report.checks.push_back(sum.take());
    report.checks.push_back(mid.take());

    CheckAccumulator l3("lemma3");
    for (std::size_t k = 0; k < grid.lemma3_samples; ++k) {
      Rng rng(seed ^ 0x4c454d4d41ULL, k);
      auto draw = [&] {
        if (!grid.magnitudes.empty() && rng.bernoulli(0.5))
          return grid.magnitudes[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(grid.magnitudes.size()) - 1))];
        return rng.uniform(0.0, grid.random_max);
      };
      auto pair = [&] {
        double a = draw(), b = rng.bernoulli(0.15) ? 0.0 : draw();
        return std::pair{std::max(a, b), std::min(a, b)};
      };
      auto [x, y] = pair();
      auto [z, w] = pair();
      auto [t, u] = pair();
      const double lhs1 = g(x + t) * g(z + t), lhs2 = g(x) * g(z);
      const double rhs1 = g(y + u) * g(w + u), rhs2 = g(y) * g(w);
      l3.add((lhs1 - lhs2) - (rhs1 - rhs2), 1.0 + max_abs({lhs1, lhs2, rhs1, rhs2}), {x, y, z, w, t, u});
    }
    report.checks.push_back(l3.take());

    if (grid.finite_difference) {
      CheckAccumulator logc("fd_log_concave"), conv("fd_convex");
      for (double x : grid.magnitudes) {
        const double h = 1e-3 * x;
        const double gm = g(x - h), g0 = g(x), gp = g(x + h);
        const double d2 = (gp - 2.0 * g0 + gm) / (h * h);
        conv.add(d2, 1.0 + (std::abs(gp) + 2.0 * std::abs(g0) + std::abs(gm)) / (h * h), {x});
        if (gm > 0.0 && g0 > 0.0 && gp > 0.0) {
          const double lm = std::log(gm), l0 = std::log(g0), lp = std::log(gp);
          const double dl2 = (lp - 2.0 * l0 + lm) / (h * h);
          logc.add(-dl2, 1.0 + (std::abs(lp) + 2.0 * std::abs(l0) + std::abs(lm)) / (h * h), {x});
        } else {
          logc.skip();
        }
      }
      report.checks.push_back(logc.take());
      report.checks.push_back(conv.take());
    }
  }

  finish(report);
  return report;
}

namespace {

std::vector<GFunctionSpec> filter_certified(std::vector<GFunctionSpec> pool, GClass target) {
  std::erase_if(pool, [&](const GFunctionSpec& g) { return !certify_class(g, target, GridPlan::defaults(), 0).passed; });
  return pool;
}

}  // namespace

const std::vector<GFunctionSpec>& certified_library(GClass target) {
  static const auto g2 = filter_certified(g2_library(), GClass::G2);
  static const auto g = filter_certified(g_library(), GClass::G);
  return target == GClass::G2 ? g2 : g;
}

QMargin qclass_margin(const CoeffFunctionSpec& f, const QVariant& variant, const QSample& s) {
  const double lam = s.lambda;
  if (!(lam > 0.0 && lam < 1.0)) throw DomainError("λ must lie in (0, 1)");
  const double mid = std::clamp(lam * s.x + (1.0 - lam) * s.z, f.domain_lo(), f.domain_hi());
  const double fm = f(mid), fx = f(s.x), fz = f(s.z);
  double t1 = 0.0, t2 = 0.0;
  switch (variant.kind) {
    case QVariantKind::Q:
      t1 = fx / lam;
      t2 = fz / (1.0 - lam);
      break;
    case QVariantKind::Qk:
      if (s.x == s.z) throw SkippedSample("Qk requires x != z");
      t1 = fx / std::pow(lam, variant.k);
      t2 = fz / std::pow(1.0 - lam, variant.k);
      break;
    case QVariantKind::Qg: {
      const auto& g = *variant.g;
      const double d = s.x - s.z;
      const double den1 = g(lam * d), den2 = g((1.0 - lam) * d);
      if (den1 == 0.0 || den2 == 0.0) throw SkippedSample("g vanishes at λ(x−z) or (1−λ)(x−z)");
      const double gd = g(d);
      t1 = fx * gd / den1;
      t2 = fz * gd / den2;
      break;
    }
  }
  return {t1 + t2 - fm, 1.0 + max_abs({t1, t2, fm})};
}

CertReport certify_qclass(const CoeffFunctionSpec& f, const QVariant& variant, const QSamplePlan& plan,
                          std::uint64_t seed) {
  if (variant.kind == QVariantKind::Qg) {
    if (!variant.g) throw ConfigError("Qg certification needs g");
    if (!variant.g->odd()) throw ConfigError("Qg certification needs an odd g");
  }
  if (variant.kind == QVariantKind::Qk && !(variant.k >= 0.0)) throw ConfigError("Qk needs k >= 0");

  const double lo = std::max(f.domain_lo(), -8.0);
  const double hi = std::min(f.domain_hi(), 8.0);

  std::vector<QSample> samples = plan.extra;
  if (plan.structured) {
    std::vector<double> pts{lo, hi};
    for (double q : {0.25, 0.5, 0.75}) pts.push_back(lo + q * (hi - lo));
    for (const auto& p : f.points())
      if (f.in_domain(p.first)) pts.push_back(p.first);
    for (double x : pts)
      for (double z : pts)
        for (double lam : {0.25, 0.5, 0.75}) samples.push_back({x, z, lam});
  }
  for (std::size_t k = 0; k < plan.random; ++k) {
    Rng rng(seed, k);
    samples.push_back({rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(1e-6, 1.0 - 1e-6)});
  }
  if (samples.empty()) throw ConfigError("Q-class sample plan is empty");

  std::string id = variant.kind == QVariantKind::Q ? "Q" : (variant.kind == QVariantKind::Qg ? "Qg" : "Qk");
  CheckAccumulator acc(id);
  for (const auto& s : samples) {
    try {
      auto m = qclass_margin(f, variant, s);
      acc.add(m.margin, m.scale, {s.x, s.z, s.lambda});
    } catch (const SkippedSample&) {
      acc.skip();
    }
  }
  CertReport report;
  report.seed = seed;
  report.checks.push_back(acc.take());
  finish(report);
  return report;
}

}  // namespace schur
