#include "schur/report.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "schur/errors.hpp"

namespace schur {

Json element_json(const OrderedElement& e) {
  switch (e.kind()) {
    case ElementKind::Scalar: return e.as_scalar();
    case ElementKind::Vector: {
      Json out = Json::array();
      for (double v : e.values()) out.push_back(v);
      return out;
    }
    case ElementKind::Matrix: {
      const auto& m = e.as_matrix();
      Json out = Json::array();
      for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        out.push_back(std::move(row));
      }
      return out;
    }
  }
  return nullptr;
}

namespace {

Json elements_json(const std::vector<OrderedElement>& v) {
  Json out = Json::array();
  for (const auto& e : v) out.push_back(element_json(e));
  return out;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

Json base_report(std::string_view command) {
  Json r;
  r["version"] = kReportVersion;
  r["command"] = command;
  r["case"] = nullptr;
  r["structure"] = nullptr;
  r["dim"] = nullptr;
  r["trials"] = nullptr;
  r["seed"] = nullptr;
  r["tol"] = nullptr;
  r["min_margin"] = nullptr;
  r["violations"] = Json::array();
  r["wall_time_ms"] = 0.0;
  return r;
}

}  // namespace

Json instance_json(CaseId id, const SchurInstance& inst) {
  Json j;
  j["structure"] = to_string(inst.structure.id);
  j["xs"] = elements_json(inst.xs);
  if (!inst.coeffs.empty()) j["coeffs"] = elements_json(inst.coeffs);
  if (!inst.hats.empty()) {
    Json hats = Json::array();
    for (std::size_t i = 0; i < inst.hats.size(); ++i)
      hats.push_back(i % 2 == 1 ? element_json(inst.hats[i]) : Json(nullptr));
    j["hats"] = std::move(hats);
  }
  if (inst.g) j["g"] = inst.g->name();
  if (inst.f) j["f"] = inst.f->describe();
  if (id == CaseId::S3F) j["form"] = to_string(inst.form);
  const auto& c = theorem_case(id);
  if (c.ring) j["n"] = inst.n;
  if (!inst.poly.empty()) j["poly"] = inst.poly;
  if (id == CaseId::S3V || id == CaseId::S3VG) j["abc"] = inst.abc;
  if (id == CaseId::S3VG) j["alpha"] = inst.alpha;
  if (id == CaseId::QEQ) j["lambda"] = inst.lambda;
  return j;
}

Json witness_json(CaseId id, const Witness& w) {
  Json j;
  j["case"] = to_string(id);
  j["trial"] = w.trial;
  j["instance"] = instance_json(id, w.instance);
  j["margin"] = w.margin;
  j["scale"] = w.scale;
  j["hypothesis_satisfied"] = w.hypothesis_satisfied;
  j["failed_clauses"] = w.failed_clauses;
  if (!w.error.empty()) j["error"] = w.error;
  return j;
}

Json campaign_json(const VerificationReport& rep) {
  Json r = base_report("verify");
  r["case"] = to_string(rep.case_id);
  r["structure"] = to_string(rep.structure);
  r["dim"] = rep.dim;
  r["trials"] = rep.trials;
  r["seed"] = rep.seed;
  r["tol"] = rep.tol;
  r["min_margin"] = std::isfinite(rep.min_margin) ? Json(rep.min_margin) : Json(nullptr);
  for (const auto& w : rep.violations) r["violations"].push_back(witness_json(rep.case_id, w));
  r["wall_time_ms"] = rep.wall_time_ms;
  r["skipped"] = rep.skipped;
  r["min_margin_witness"] =
      rep.min_margin_witness ? witness_json(rep.case_id, *rep.min_margin_witness) : Json(nullptr);
  return r;
}

Json certification_json(const GFunctionSpec& g, GClass target, const CertReport& rep) {
  Json j;
  j["function"] = g.name();
  j["target"] = to_string(target);
  j["passed"] = rep.passed;
  j["seed"] = rep.seed;
  j["samples"] = rep.sample_count;
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json cj;
    cj["id"] = c.id;
    cj["worst_margin"] = std::isfinite(c.worst_margin) ? Json(c.worst_margin) : Json(nullptr);
    cj["witness"] = c.witness;
    cj["evaluated"] = c.evaluated;
    cj["skipped"] = c.skipped;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  return j;
}

Json falsify_json(const FalsifyConfig& cfg, const FalsifyResult& res, double wall_time_ms) {
  Json r = base_report("falsify");
  r["case"] = to_string(cfg.id);
  r["structure"] = to_string(StructureId::RealMul);
  r["dim"] = 1;
  r["trials"] = cfg.budget;
  r["seed"] = cfg.seed;
  r["tol"] = cfg.tol;
  r["min_margin"] = std::isfinite(res.best_relative) ? Json(res.best_relative) : Json(nullptr);
  // A witness inside the hypothesis would contradict the theorem.
  if (res.witness && res.witness->hypothesis_satisfied) r["violations"].push_back(witness_json(cfg.id, *res.witness));
  r["wall_time_ms"] = wall_time_ms;
  r["region"] = cfg.region == Region::Satisfying ? "satisfying" : "violating";
  r["clause"] = cfg.region == Region::Violating ? Json(cfg.clause) : Json(nullptr);
  r["evaluations"] = res.evaluations;
  r["witness"] = res.witness ? witness_json(cfg.id, *res.witness) : Json(nullptr);
  return r;
}

Json necessity_json(const NecessityWitness& nw) {
  Json j;
  j["name"] = nw.name;
  j["margin"] = nw.witness.margin;
  j["exact"] = nw.exact.empty() ? Json(nullptr) : Json(nw.exact);
  j["expected"] = std::isfinite(nw.expected) ? Json(nw.expected) : Json(nullptr);
  j["hypothesis_satisfied"] = nw.witness.hypothesis_satisfied;
  j["failed_clauses"] = nw.witness.failed_clauses;
  j["case"] = to_string(nw.id);
  j["instance"] = instance_json(nw.id, nw.witness.instance);
  return j;
}

// ---------------------------------------------------------------------------
// Suite

std::vector<SuiteEntry> suite_plan() {
  std::vector<SuiteEntry> plan;
  for (CaseId id : {CaseId::S2, CaseId::S3, CaseId::S3F, CaseId::S3V, CaseId::S3VG, CaseId::S4, CaseId::S5,
                    CaseId::S6, CaseId::S7, CaseId::QEQ})
    plan.push_back({id, StructureId::RealMul, 1, 2000});
  for (StructureId s : {StructureId::RealMul, StructureId::VecDot, StructureId::VecBilinear, StructureId::FuncQuad,
                        StructureId::MatmulCommuting, StructureId::Frobenius, StructureId::Hadamard,
                        StructureId::Kronecker, StructureId::RKronecker}) {
    const bool kron = s == StructureId::Kronecker || s == StructureId::RKronecker;
    plan.push_back({CaseId::C3, s, s == StructureId::RealMul ? 1u : (kron ? 2u : 3u), 300});
  }
  for (StructureId s : {StructureId::RealMul, StructureId::MatmulCommuting, StructureId::Hadamard,
                        StructureId::Kronecker, StructureId::RKronecker}) {
    const bool kron = s == StructureId::Kronecker || s == StructureId::RKronecker;
    plan.push_back({CaseId::C3P, s, s == StructureId::RealMul ? 1u : (kron ? 2u : 3u), 300});
  }
  for (CaseId id : {CaseId::R4, CaseId::R5, CaseId::R6, CaseId::R7})
    for (StructureId s : {StructureId::RealMul, StructureId::MatmulCommuting, StructureId::Hadamard}) {
      std::size_t dim = s == StructureId::RealMul ? 1 : 3;
      if (theorem_case(id).needs_inverse && s == StructureId::Hadamard) dim = 1;
      plan.push_back({id, s, dim, 300});
    }
  return plan;
}

std::vector<GFunctionSpec> suite_certification_members() {
  auto out = g_library();
  out.push_back(product(GFunctionSpec::sign(), GFunctionSpec::abs_pow(5.0)));
  return out;
}

namespace {

bool necessity_ok(const NecessityWitness& nw, std::size_t index) {
  const auto& w = nw.witness;
  if (w.hypothesis_satisfied || !(w.margin < 0.0)) return false;
  switch (index) {
    case 0: return nw.exact == "-1";
    case 1: return w.margin < -0.1;
    case 2: return std::abs(w.margin - nw.expected) <= 1e-12;
    default: return true;
  }
}

}  // namespace

SuiteResult run_suite(std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  SuiteResult out;
  Json r = base_report("suite");
  r["case"] = "all";
  r["structure"] = "all";
  r["seed"] = seed;

  Json campaigns = Json::array();
  std::size_t trials = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  for (const auto& e : suite_plan()) {
    auto cfg = default_gen_config(e.id, e.structure, e.dim);
    const auto rep = run_campaign(e.id, cfg, e.trials, seed, cfg.structure.default_tol());
    trials += e.trials;
    min_margin = std::min(min_margin, rep.min_margin);
    for (const auto& w : rep.violations) r["violations"].push_back(witness_json(e.id, w));
    if (!rep.passed()) out.passed = false;
    campaigns.push_back(campaign_json(rep));
  }
  r["trials"] = trials;
  r["min_margin"] = std::isfinite(min_margin) ? Json(min_margin) : Json(nullptr);

  Json necessity = Json::array();
  const auto witnesses = necessity_suite(seed);
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    auto j = necessity_json(witnesses[i]);
    const bool ok = necessity_ok(witnesses[i], i);
    j["ok"] = ok;
    out.passed = out.passed && ok;
    necessity.push_back(std::move(j));
  }

  Json certification = Json::array();
  for (const auto& g : suite_certification_members()) {
    const auto target = g.claimed();
    const auto rep = certify_class(g, target, GridPlan::defaults(), seed);
    out.passed = out.passed && rep.passed;
    certification.push_back(certification_json(g, target, rep));
  }

  r["wall_time_ms"] = elapsed_ms(start);
  r["passed"] = out.passed;
  r["campaigns"] = std::move(campaigns);
  r["necessity"] = std::move(necessity);
  r["certification"] = std::move(certification);
  out.report = std::move(r);
  return out;
}

// ---------------------------------------------------------------------------
// Text

namespace {

std::string num(const Json& v) {
  if (v.is_null()) return "none";
  std::ostringstream os;
  os.precision(6);
  os << v.get<double>();
  return os.str();
}

std::string campaign_line(const Json& c) {
  std::ostringstream os;
  os << c["case"].get<std::string>() << " " << c["structure"].get<std::string>() << " dim=" << c["dim"]
     << " trials=" << c["trials"] << " min_margin=" << num(c["min_margin"])
     << " violations=" << c["violations"].size();
  return os.str();
}

}  // namespace

std::string report_text(const Json& r) {
  std::ostringstream os;
  const auto cmd = r["command"].get<std::string>();
  if (cmd == "verify") {
    os << campaign_line(r) << "\n";
  } else if (cmd == "falsify") {
    os << "falsify " << r["case"].get<std::string>() << " region=" << r["region"].get<std::string>();
    if (!r["clause"].is_null()) os << " clause=" << r["clause"].get<std::string>();
    os << " evaluations=" << r["evaluations"] << " best=" << num(r["min_margin"]);
    if (!r["witness"].is_null()) os << " witness_margin=" << num(r["witness"]["margin"]);
    os << "\n";
  } else if (cmd == "certify") {
    for (const auto& c : r["certification"]) {
      os << c["function"].get<std::string>() << " " << c["target"].get<std::string>() << " "
         << (c["passed"].get<bool>() ? "passed" : "FAILED");
      for (const auto& ch : c["checks"])
        if (!ch["worst_margin"].is_null() && ch["worst_margin"].get<double>() < -kCertTol)
          os << " " << ch["id"].get<std::string>() << "=" << num(ch["worst_margin"]);
      os << "\n";
    }
  } else if (cmd == "suite") {
    for (const auto& c : r["campaigns"]) os << campaign_line(c) << "\n";
    for (const auto& n : r["necessity"])
      os << "necessity: " << n["name"].get<std::string>() << " margin=" << num(n["margin"])
         << (n["ok"].get<bool>() ? " ok" : " FAILED") << "\n";
    for (const auto& c : r["certification"])
      if (!c["passed"].get<bool>())
        os << "certification FAILED: " << c["function"].get<std::string>() << " " << c["target"].get<std::string>()
           << "\n";
    os << (r["passed"].get<bool>() ? "suite passed" : "suite FAILED") << "\n";
  }
  return os.str();
}

}  // namespace schur
