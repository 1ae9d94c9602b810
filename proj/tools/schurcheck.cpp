// schurcheck: campaigns, certification, falsification and the full suite.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "schur/errors.hpp"
#include "schur/report.hpp"

using namespace schur;

namespace {

struct Options {
  std::string case_id;
  std::string structure = "REAL_MUL";
  std::size_t dim = 3;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::optional<double> tol;
  std::string out;
  std::string format = "json";
  // verify
  std::vector<unsigned> n;
  std::string form;
  // certify
  std::string function;
  std::string target;
  // falsify
  std::string region = "satisfying";
  std::string clause;
  std::size_t budget = 10000;
  std::optional<double> finta_t;
};

CaseId need_case(const Options& o) {
  auto id = parse_case_id(o.case_id);
  if (!id) throw ConfigError("unknown case '" + o.case_id + "'");
  return *id;
}

GFunctionSpec need_function(const std::string& text) {
  auto g = parse_gfunction(text);
  if (!g) throw ConfigError("cannot parse g function '" + text + "'");
  return *g;
}

StructureId need_structure(const Options& o) {
  auto id = parse_structure_id(o.structure);
  if (!id) throw ConfigError("unknown structure '" + o.structure + "'");
  return *id;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

struct Outcome {
  Json report;
  bool passed = true;
};

Outcome run_verify(const Options& o) {
  const CaseId id = need_case(o);
  auto cfg = default_gen_config(id, need_structure(o), o.dim);
  if (!o.n.empty()) cfg.n_pool = o.n;
  if (!o.form.empty()) {
    if (o.form == "wright") cfg.form = S3FForm::Wright;
    else if (o.form == "convex") cfg.form = S3FForm::ConvexCorollary;
    else if (o.form == "finta") cfg.form = S3FForm::Finta;
    else throw ConfigError("unknown form '" + o.form + "'");
  }
  const double tol = o.tol.value_or(cfg.structure.default_tol());
  const auto rep = run_campaign(id, cfg, o.trials, o.seed, tol);
  return {campaign_json(rep), rep.passed()};
}

Outcome run_certify(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<GFunctionSpec> members;
  if (o.function.empty()) {
    members = suite_certification_members();
  } else {
    members.push_back(need_function(o.function));
  }
  std::optional<GClass> target;
  if (o.target == "G") target = GClass::G;
  else if (o.target == "G2") target = GClass::G2;
  else if (!o.target.empty()) throw ConfigError("unknown class '" + o.target + "'");

  Outcome out;
  Json r;
  r["version"] = kReportVersion;
  r["command"] = "certify";
  r["case"] = nullptr;
  r["structure"] = nullptr;
  r["dim"] = nullptr;
  r["trials"] = nullptr;
  r["seed"] = o.seed;
  r["tol"] = kCertTol;
  double worst = std::numeric_limits<double>::infinity();
  Json certs = Json::array();
  Json failures = Json::array();
  for (const auto& g : members) {
    const auto cls = target.value_or(g.claimed());
    const auto rep = certify_class(g, cls, GridPlan::defaults(), o.seed);
    for (const auto& c : rep.checks) worst = std::min(worst, c.worst_margin);
    auto j = certification_json(g, cls, rep);
    if (!rep.passed) {
      out.passed = false;
      failures.push_back(j);
    }
    certs.push_back(std::move(j));
  }
  r["min_margin"] = std::isfinite(worst) ? Json(worst) : Json(nullptr);
  r["violations"] = std::move(failures);
  r["wall_time_ms"] = elapsed_ms(start);
  r["certification"] = std::move(certs);
  out.report = std::move(r);
  return out;
}

Outcome run_falsify(const Options& o) {
  const auto start = std::chrono::steady_clock::now();
  FalsifyConfig cfg;
  cfg.id = need_case(o);
  if (o.region == "satisfying") cfg.region = Region::Satisfying;
  else if (o.region == "violating") cfg.region = Region::Violating;
  else throw ConfigError("unknown region '" + o.region + "'");
  cfg.clause = o.clause;
  cfg.budget = o.budget;
  cfg.seed = o.seed;
  cfg.tol = o.tol.value_or(kScalarTol);
  if (!o.function.empty()) cfg.g = need_function(o.function);
  cfg.finta_t = o.finta_t;
  const auto res = falsify(cfg);
  auto j = falsify_json(cfg, res, elapsed_ms(start));
  const bool passed = j["violations"].empty();
  return {std::move(j), passed};
}

Outcome run_suite_cmd(const Options& o) {
  auto r = run_suite(o.seed);
  return {std::move(r.report), r.passed};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Schur inequality checker"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "RNG seed");
    sub->add_option("--out", o.out, "write the report here instead of stdout");
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  auto cases = [&](CLI::App* sub, bool required) {
    auto opt = sub->add_option("--case", o.case_id, "case id (S2..S7, S3F, S3V, S3VG, QEQ, C3, C3P, R4..R7)");
    opt->check([](const std::string& v) { return parse_case_id(v) ? std::string() : "unknown case '" + v + "'"; });
    if (required) opt->required();
  };

  auto* verify = app.add_subcommand("verify", "randomized soundness campaign");
  cases(verify, true);
  verify->add_option("--structure", o.structure, "ordered structure id")->check([](const std::string& v) {
    return parse_structure_id(v) ? std::string() : "unknown structure '" + v + "'";
  });
  verify->add_option("--dim", o.dim, "carrier dimension");
  verify->add_option("--trials", o.trials, "number of trials");
  verify->add_option("--tol", o.tol, "violation tolerance (relative to scale)")->check(CLI::PositiveNumber);
  verify->add_option("--n", o.n, "star exponents to draw from");
  verify->add_option("--form", o.form, "S3F statement: wright, convex or finta");
  common(verify);

  auto* certify = app.add_subcommand("certify", "certify g functions against G or G2");
  certify->add_option("--function", o.function, "g spec, e.g. sign*abspow(3); default: the whole library");
  certify->add_option("--class", o.target, "G or G2; default: the claimed class");
  common(certify);

  auto* fals = app.add_subcommand("falsify", "simplex search for a negative margin");
  cases(fals, true);
  fals->add_option("--region", o.region, "satisfying or violating");
  fals->add_option("--clause", o.clause, "hypothesis clause dropped in the violating region");
  fals->add_option("--budget", o.budget, "margin evaluations");
  fals->add_option("--tol", o.tol, "violation tolerance")->check(CLI::PositiveNumber);
  fals->add_option("--function", o.function, "g spec; default identity");
  fals->add_option("--finta-t", o.finta_t, "use x_i^t weights (S4, S6)");
  common(fals);

  auto* suite = app.add_subcommand("suite", "all campaigns, necessity witnesses and library certification");
  common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e, std::cerr, std::cerr);
    std::cerr << app.help();
    return 2;
  }

  Outcome outcome;
  try {
    if (verify->parsed()) outcome = run_verify(o);
    else if (certify->parsed()) outcome = run_certify(o);
    else if (fals->parsed()) outcome = run_falsify(o);
    else outcome = run_suite_cmd(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::string text = o.format == "json" ? outcome.report.dump(2) + "\n" : report_text(outcome.report);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot write " << o.out << "\n";
      return 2;
    }
    f << text;
  }
  return outcome.passed ? 0 : 1;
}
