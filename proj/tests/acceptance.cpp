// Acceptance criteria 1-7. One PASS/FAIL line per criterion.
// Exit code is 0 when the failing set equals the --expect-fail list.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "schur/errors.hpp"
#include "schur/oracle.hpp"
#include "schur/report.hpp"
#include "support.hpp"

using namespace schur;

namespace {

constexpr double kScalarAccept = 1e-9;
constexpr double kMatrixAccept = 1e-8;
constexpr double kReductionTol = 1e-9;
constexpr double kOracleTol = 1e-9;
constexpr double kDiagonalTol = 1e-12;
constexpr double kNecessityTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Sweep {
  CaseId id;
  StructureId structure;
  std::size_t dim;
  std::size_t trials;
  std::vector<unsigned> n_pool = {};
  std::optional<S3FForm> form = std::nullopt;
};

Outcome soundness(std::uint64_t seed) {
  std::vector<Sweep> plan;
  for (CaseId id : {CaseId::S2, CaseId::S3, CaseId::S3V, CaseId::S3VG, CaseId::S4, CaseId::S5, CaseId::S6, CaseId::S7})
    plan.push_back({id, StructureId::RealMul, 1, 10000});
  for (S3FForm f : {S3FForm::Wright, S3FForm::ConvexCorollary, S3FForm::Finta})
    plan.push_back({CaseId::S3F, StructureId::RealMul, 1, 10000, {}, f});

  for (StructureId s : {StructureId::VecDot, StructureId::VecBilinear, StructureId::FuncQuad, StructureId::Frobenius,
                        StructureId::Hadamard, StructureId::MatmulCommuting}) {
    for (std::size_t d = 1; d <= 5; ++d) plan.push_back({CaseId::C3, s, d, 200});
  }
  for (StructureId s : {StructureId::Kronecker, StructureId::RKronecker}) {
    plan.push_back({CaseId::C3, s, 1, 334});
    plan.push_back({CaseId::C3, s, 2, 333});
    plan.push_back({CaseId::C3, s, 3, 333});
  }
  for (CaseId id : {CaseId::R4, CaseId::R5}) {
    plan.push_back({id, StructureId::RealMul, 1, 1000, {1, 2, 3}});
    plan.push_back({id, StructureId::Hadamard, 3, 1000, {1, 2, 3}});
    for (std::size_t d = 2; d <= 5; ++d) plan.push_back({id, StructureId::MatmulCommuting, d, 250, {1, 2, 3}});
  }
  for (CaseId id : {CaseId::R6, CaseId::R7}) {
    plan.push_back({id, StructureId::RealMul, 1, 1000, {1, 2}});
    plan.push_back({id, StructureId::Hadamard, 1, 1000, {1, 2}});
    for (std::size_t d = 1; d <= 4; ++d) plan.push_back({id, StructureId::MatmulCommuting, d, 250, {1, 2}});
  }

  Outcome out;
  std::size_t trials = 0, campaigns = 0;
  double worst = INFINITY;
  for (const auto& sw : plan) {
    auto cfg = default_gen_config(sw.id, sw.structure, sw.dim);
    if (!sw.n_pool.empty()) cfg.n_pool = sw.n_pool;
    cfg.form = sw.form;
    const double tol = cfg.structure.default_tol() == kMatrixTol ? kMatrixAccept : kScalarAccept;
    const auto rep = run_campaign(sw.id, cfg, sw.trials, seed, tol);
    trials += sw.trials;
    ++campaigns;
    worst = std::min(worst, rep.min_margin);
    if (!rep.passed()) {
      out.pass = false;
      out.detail += std::string(" ") + std::string(to_string(sw.id)) + "/" + std::string(to_string(sw.structure)) +
                    "/d" + std::to_string(sw.dim) + ":" + std::to_string(rep.violations.size());
    }
  }
  std::ostringstream os;
  os << campaigns << " campaigns, " << trials << " trials, worst relative margin " << worst;
  out.detail = os.str() + out.detail;
  return out;
}

Outcome certification() {
  std::vector<GFunctionSpec> members = g2_library();
  for (unsigned k : {1u, 3u, 5u})
    members.push_back(product(GFunctionSpec::abs_pow(k), GFunctionSpec::sign()));
  Outcome out;
  std::size_t failed = 0;
  std::string names;
  for (const auto& g : members) {
    if (!certify_class(g, GClass::G2, GridPlan::defaults(), 0).passed) {
      ++failed;
      names += " " + g.name();
    }
  }
  out.pass = failed == 0;
  out.detail = std::to_string(members.size() - failed) + "/" + std::to_string(members.size()) + " pass G2";
  if (failed) out.detail += "; failing:" + names;
  return out;
}

Outcome necessity(std::uint64_t seed) {
  const auto suite = necessity_suite(seed);
  Outcome out;
  std::ostringstream os;
  if (suite.size() != 3) return {false, "expected 3 witnesses"};
  const auto& s3 = suite[0];
  const bool ok1 = oracle_margin_exact(s3.id, s3.witness.instance) == -1 && !s3.witness.hypothesis_satisfied;
  const auto& finta = suite[1];
  const auto& xs = finta.witness.instance.xs;
  const bool ok2 = finta.witness.margin < -0.1 &&
                   xs[0].as_scalar() + xs[3].as_scalar() < xs[1].as_scalar() + xs[2].as_scalar();
  const auto& gl = suite[2];
  const bool ok3 = std::abs(gl.witness.margin - (std::sqrt(2.0) - 2.0)) <= kNecessityTol;
  out.pass = ok1 && ok2 && ok3;
  os.precision(17);
  os << "S3 exact " << (ok1 ? "-1" : "mismatch") << "; Finta " << finta.witness.margin << "; Q_g "
     << gl.witness.margin;
  out.detail = os.str();
  return out;
}

Outcome reduction(std::uint64_t seed) {
  Outcome out;
  double worst_res = 0.0, worst_tail = INFINITY;
  for (CaseId id : {CaseId::S5, CaseId::S7, CaseId::R5, CaseId::R7}) {
    const bool ring = !theorem_case(id).scalar;
    auto cfg = default_gen_config(id, ring ? StructureId::MatmulCommuting : StructureId::RealMul, 3);
    if (ring) cfg.n_pool = {1, 2, 3};
    for (std::uint64_t i = 0; i < 1000; ++i) {
      Rng rng(seed, i);
      const auto inst = generate_instance(id, cfg, rng);
      const auto r = decompose_reduction(id, inst);
      const double scale = std::max(r.direct.scale, 1e-300);
      worst_res = std::max(worst_res, r.residual / scale);
      worst_tail = std::min(worst_tail, r.parts[2].value / scale);
      if (r.residual > kReductionTol * r.direct.scale || r.parts[2].value < -kReductionTol * r.direct.scale)
        out.pass = false;
    }
  }
  std::ostringstream os;
  os << "4000 instances, worst residual/scale " << worst_res << ", worst tail/scale " << worst_tail;
  out.detail = os.str();
  return out;
}

Outcome oracle(std::uint64_t seed) {
  Outcome out;
  double worst = 0.0;
  std::size_t compared = 0, skipped = 0;
  for (CaseId id : {CaseId::S2, CaseId::S3, CaseId::S3F, CaseId::S3V, CaseId::S3VG, CaseId::S4, CaseId::S5,
                    CaseId::S6, CaseId::S7, CaseId::QEQ}) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
      Rng rng(seed, i);
      const auto inst = gen_rational_instance(id, rng);
      try {
        const auto m = eval_margin(id, inst);
        const double e = oracle_margin_exact(id, inst).get_d();
        const double rel = std::abs(m.value - e) / m.scale;
        worst = std::max(worst, rel);
        if (!(rel <= kOracleTol)) out.pass = false;
        ++compared;
      } catch (const SkippedSample&) {
        ++skipped;
      }
    }
  }
  std::ostringstream os;
  os << compared << " compared, " << skipped << " skipped by proviso, worst relative gap " << worst;
  out.detail = os.str();
  return out;
}

Outcome diagonal(std::uint64_t seed) {
  Outcome out;
  double worst = 0.0;
  for (CaseId id : {CaseId::R4, CaseId::R5, CaseId::R6, CaseId::R7}) {
    auto cfg = default_gen_config(id, StructureId::MatmulCommuting, 3);
    cfg.identity_basis = true;
    cfg.n_pool = {1, 2, 3};
    for (std::uint64_t i = 0; i < 100; ++i) {
      Rng rng(seed, i);
      const double e = testing::diagonal_reduction_error(id, generate_instance(id, cfg, rng));
      worst = std::max(worst, e);
      if (!(e <= kDiagonalTol)) out.pass = false;
    }
  }
  std::ostringstream os;
  os << "400 diagonal instances, worst relative gap " << worst;
  out.detail = os.str();
  return out;
}

void strip_wall_time(Json& j) {
  if (j.is_object()) {
    j.erase("wall_time_ms");
    for (auto& [k, v] : j.items()) strip_wall_time(v);
  } else if (j.is_array()) {
    for (auto& v : j) strip_wall_time(v);
  }
}

Outcome determinism() {
  auto a = run_suite(1).report;
  auto b = run_suite(1).report;
  strip_wall_time(a);
  strip_wall_time(b);
  const std::string da = a.dump(2), db = b.dump(2);
  return {da == db, "suite --seed 1 twice, " + std::to_string(da.size()) + " bytes, " + (da == db ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::uint64_t seed = 1;
  std::vector<int> expect_fail;
  app.add_option("--seed", seed);
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"soundness sweeps", [&] { return soundness(seed); }},
      {"g library certification", [] { return certification(); }},
      {"necessity witnesses", [&] { return necessity(seed); }},
      {"reduction identities", [&] { return reduction(seed); }},
      {"oracle equivalence", [&] { return oracle(seed); }},
      {"diagonal reduction", [&] { return diagonal(seed); }},
      {"determinism", [] { return determinism(); }},
  };

  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) failed.insert(static_cast<int>(i + 1));
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), s);
    std::fflush(stdout);
  }
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  if (failed != expected) {
    std::printf("failing set differs from the expected one\n");
    return 1;
  }
  return 0;
}
