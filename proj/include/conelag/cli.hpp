// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "conelag/reports.hpp"

namespace conelag::cli {

/// Run configuration: a single JSON document; command line flags override
/// file values. Unknown keys are rejected and serialize/parse round-trips.
struct RunConfig {
  uint64_t seed = 20240807;
  std::string problem = "qp2";
  std::string family = "hpr";
  std::string construction = "hpr";
  std::string cone;  // e.g. "orthant:2", "soc:3+zero:1", "psd:2"
  double alpha = 1.0;
  double kappa = 3.0;
  double c = 10.0;
  std::vector<double> c_list = {0.5, 1.0, 2.0, 5.0};
  std::vector<double> radius_schedule = {1, 2, 4, 8, 16, 32, 64};
  double kkt_tolerance = 1e-6;
  double radius = 3.0;
  int budget = 10000;
  int multistart = 16;
  bool full_dual = false;
  std::string phi;     // named scalar function override for the family
  std::string psi;     // named rescaling function override
  double b = 1.0;      // p-th power shift
  std::vector<double> lambda;  // explicit multiplier (flat), empty = reference
  std::string out = "./reports";

  Json to_json() const {
    Json j;
    j["seed"] = seed;
    j["problem"] = problem;
    j["family"] = family;
    j["construction"] = construction;
    j["cone"] = cone;
    j["alpha"] = alpha;
    j["kappa"] = kappa;
    j["c"] = c;
    j["c_list"] = c_list;
    j["radius_schedule"] = radius_schedule;
    j["kkt_tolerance"] = kkt_tolerance;
    j["radius"] = radius;
    j["budget"] = budget;
    j["multistart"] = multistart;
    j["full_dual"] = full_dual;
    j["phi"] = phi;
    j["psi"] = psi;
    j["b"] = b;
    j["lambda"] = lambda;
    j["out"] = out;
    return j;
  }

  static RunConfig from_json(const Json& j) {
    static const std::vector<std::string> known = {
        "seed",   "problem",        "family",        "construction", "cone",
        "alpha",  "kappa",          "c",             "c_list",       "radius_schedule",
        "kkt_tolerance", "radius",  "budget",        "multistart",   "full_dual",
        "phi",    "psi",            "b",             "lambda",       "out"};
    for (auto it = j.begin(); it != j.end(); ++it) {
      bool ok = false;
      for (const auto& k : known) ok = ok || k == it.key();
      if (!ok) throw std::invalid_argument("RunConfig: unknown key '" + it.key() + "'");
    }
    RunConfig c;
    if (j.contains("seed")) c.seed = j.at("seed").get<uint64_t>();
    if (j.contains("problem")) c.problem = j.at("problem").get<std::string>();
    if (j.contains("family")) c.family = j.at("family").get<std::string>();
    if (j.contains("construction")) c.construction = j.at("construction").get<std::string>();
    if (j.contains("cone")) c.cone = j.at("cone").get<std::string>();
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
    if (j.contains("c")) c.c = j.at("c").get<double>();
    if (j.contains("c_list")) c.c_list = j.at("c_list").get<std::vector<double>>();
    if (j.contains("radius_schedule"))
      c.radius_schedule = j.at("radius_schedule").get<std::vector<double>>();
    if (j.contains("kkt_tolerance")) c.kkt_tolerance = j.at("kkt_tolerance").get<double>();
    if (j.contains("radius")) c.radius = j.at("radius").get<double>();
    if (j.contains("budget")) c.budget = j.at("budget").get<int>();
    if (j.contains("multistart")) c.multistart = j.at("multistart").get<int>();
    if (j.contains("full_dual")) c.full_dual = j.at("full_dual").get<bool>();
    if (j.contains("phi")) c.phi = j.at("phi").get<std::string>();
    if (j.contains("psi")) c.psi = j.at("psi").get<std::string>();
    if (j.contains("b")) c.b = j.at("b").get<double>();
    if (j.contains("lambda")) c.lambda = j.at("lambda").get<std::vector<double>>();
    if (j.contains("out")) c.out = j.at("out").get<std::string>();
    return c;
  }
};

/// Named scalar functions selectable from the configuration.
inline ScalarFunction named_scalar_function(const std::string& name) {
  if (name == "exp") return ScalarFunction::exp_minus_one();
  if (name == "log-sigmoid") return ScalarFunction::log_sigmoid();
  if (name == "frisch") return ScalarFunction::modified_frisch();
  if (name == "carroll") return ScalarFunction::modified_carroll();
  if (name == "cosh") return ScalarFunction::cosh_minus_one();
  if (name == "max0") return ScalarFunction::positive_part();
  if (name == "max0-cubed") return ScalarFunction::cubed_positive_part();
  throw std::invalid_argument("unknown scalar function '" + name + "'");
}

inline ConeSpec parse_cone(const std::string& text) {
  ConeSpec cone;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, '+')) {
    const auto colon = token.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("cone: expected kind:dim, got '" + token + "'");
    const std::string kind = token.substr(0, colon);
    const int n = std::stoi(token.substr(colon + 1));
    if (kind == "orthant") cone.blocks.push_back(ConeBlock::orthant(n));
    else if (kind == "zero") cone.blocks.push_back(ConeBlock::zero(n));
    else if (kind == "soc") cone.blocks.push_back(ConeBlock::second_order(n));
    else if (kind == "psd") cone.blocks.push_back(ConeBlock::psd(n));
    else throw std::invalid_argument("cone: unknown block kind '" + kind + "'");
  }
  if (cone.blocks.empty()) throw std::invalid_argument("cone: empty spec");
  return cone;
}

namespace detail {

inline std::string family_alias(const std::string& id) {
  if (id == "exp") return "exponential";
  if (id == "rw") return "rw-quadratic";
  return id;
}

/// Instantiate the configured family; the full-dual variant is implied when
/// the target problem carries a saddle multiplier outside K*.
inline PhiFamily configured_family(const RunConfig& cfg,
                                   const ProblemInstance* problem = nullptr) {
  FamilyParams params;
  params.full_dual = cfg.full_dual;
  params.b = cfg.b;
  if (!cfg.phi.empty()) params.phi = named_scalar_function(cfg.phi);
  if (!cfg.psi.empty()) params.psi = named_scalar_function(cfg.psi);
  if (problem && problem->reference && !problem->reference->multiplier_in_polar_cone)
    params.full_dual = true;
  return make_family(family_alias(cfg.family), params);
}

inline BlockVector configured_multiplier(const RunConfig& cfg,
                                          const ProblemInstance& problem,
                                          const PhiFamily& family) {
  BlockVector lambda = problem.reference->lambda;
  if (!cfg.lambda.empty()) {
    Vector flat(static_cast<int>(cfg.lambda.size()));
    for (size_t i = 0; i < cfg.lambda.size(); ++i) flat(static_cast<int>(i)) = cfg.lambda[i];
    lambda = BlockVector::from_flat(problem.cone, flat);
  }
  if (family.multiplier_cone == MultiplierCone::PolarK)
    lambda = project_polar(problem.cone, lambda);
  return lambda;
}

struct Emitter {
  std::filesystem::path dir;
  Json meta;

  Emitter(const RunConfig& cfg, const std::string& command) {
    dir = cfg.out;
    std::filesystem::create_directories(dir);
    meta["version"] = kVersion;
    meta["seed"] = cfg.seed;
    meta["command"] = command;
    meta["config_hash"] = fnv1a(cfg.to_json().dump());
  }

  void emit(const std::string& name, Json body, const std::string& csv) const {
    body["meta"] = meta;
    write_file((dir / (name + ".json")).string(), body.dump(2) + "\n");
    write_file((dir / (name + ".csv")).string(), csv);
  }
};

}  // namespace detail

/// Entry point used by the binary and the tests. Exit codes: 0 success,
/// 1 analysis fail / mismatch / non-convergence, 2 usage or config error.
inline int run(std::vector<std::string> args) {
  CLI::App app{"conelag - augmented Lagrangians for cone constrained optimization"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  RunConfig cfg;
  std::string config_path;
  if (const char* env_seed = std::getenv("CONE_AUGLAG_SEED"))
    cfg.seed = std::strtoull(env_seed, nullptr, 10);

  app.add_option("--config", config_path, "JSON configuration file");
  // flags override file values; parse the file first inside the callback
  std::optional<uint64_t> seed_flag;
  std::optional<std::string> problem_flag, family_flag, cone_flag, construction_flag,
      out_flag;
  std::optional<double> alpha_flag, kappa_flag, c_flag, radius_flag, tol_flag;
  std::optional<int> budget_flag, multistart_flag;
  std::optional<bool> full_dual_flag;
  app.add_option("--seed", seed_flag, "sampling seed");
  app.add_option("--problem", problem_flag, "catalog problem name");
  app.add_option("--family", family_flag, "Phi family id");
  app.add_option("--cone", cone_flag, "cone spec, e.g. orthant:2+zero:1");
  app.add_option("--construction", construction_flag, "exact AL construction id");
  app.add_option("--alpha", alpha_flag, "barrier level");
  app.add_option("--kappa", kappa_flag, "barrier exponent");
  app.add_option("--c", c_flag, "penalty parameter");
  app.add_option("--radius", radius_flag, "search radius");
  app.add_option("--kkt-tolerance", tol_flag, "KKT tolerance");
  app.add_option("--budget", budget_flag, "sample budget");
  app.add_option("--multistart", multistart_flag, "multistart count");
  app.add_flag("--full-dual", [&](int64_t) { full_dual_flag = true; },
               "multipliers range over all of Y*");
  std::vector<double> lambda_flag;
  app.add_option("--lambda", lambda_flag, "explicit multiplier entries (flat)");
  app.add_option("--out", out_flag, "output directory (default ./reports)");

  auto* cmd_axioms = app.add_subcommand("axioms", "audit the axiom claims of a family");
  auto* cmd_solve = app.add_subcommand("solve", "augmented Lagrangian method");
  auto* cmd_exact = app.add_subcommand("exact", "joint minimization of the exact AL");
  auto* cmd_saddle = app.add_subcommand("saddle", "local saddle point check");
  auto* cmd_dual = app.add_subcommand("dual", "augmented dual function probe");
  auto* cmd_sublevel = app.add_subcommand("sublevel", "localization sublevel probe");
  auto* cmd_alternance = app.add_subcommand("alternance", "alternance certificate search");
  auto* cmd_kkt = app.add_subcommand("kkt", "KKT residual at the reference pair");
  auto* cmd_catalog = app.add_subcommand("catalog", "list the problem catalog");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    std::cerr << (e.get_exit_code() == 0 ? "" : "usage error: ") << e.what() << "\n";
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot read config " + config_path);
      Json j = Json::parse(in);
      cfg = RunConfig::from_json(j);
      if (const char* env_seed = std::getenv("CONE_AUGLAG_SEED"))
        if (!j.contains("seed")) cfg.seed = std::strtoull(env_seed, nullptr, 10);
    }
    if (seed_flag) cfg.seed = *seed_flag;
    if (problem_flag) cfg.problem = *problem_flag;
    if (family_flag) cfg.family = *family_flag;
    if (cone_flag) cfg.cone = *cone_flag;
    if (construction_flag) cfg.construction = *construction_flag;
    if (alpha_flag) cfg.alpha = *alpha_flag;
    if (kappa_flag) cfg.kappa = *kappa_flag;
    if (c_flag) cfg.c = *c_flag;
    if (radius_flag) cfg.radius = *radius_flag;
    if (tol_flag) cfg.kkt_tolerance = *tol_flag;
    if (budget_flag) cfg.budget = *budget_flag;
    if (multistart_flag) cfg.multistart = *multistart_flag;
    if (full_dual_flag) cfg.full_dual = *full_dual_flag;
    if (!lambda_flag.empty()) cfg.lambda = lambda_flag;
    if (out_flag) cfg.out = *out_flag;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (cmd_catalog->parsed()) {
      detail::Emitter emitter(cfg, "catalog");
      Json rows = Json::array();
      std::ostringstream csv;
      csv << "name,dim,fstar\n";
      for (const auto& name : catalog_names()) {
        ProblemInstance p = catalog_get(name);
        Json row;
        row["name"] = name;
        row["dim"] = p.dim;
        row["fstar"] = num_cell(p.reference->f);
        row["note"] = p.reference->note;
        rows.push_back(row);
        csv << name << ',' << p.dim << ',' << csv_cell(p.reference->f) << '\n';
        std::cout << name << "  (d=" << p.dim << ", f*=" << p.reference->f << ")\n";
      }
      Json body;
      body["problems"] = rows;
      emitter.emit("catalog", body, csv.str());
      return 0;
    }

    if (cmd_axioms->parsed()) {
      PhiFamily family = detail::configured_family(cfg);
      ConeSpec cone = cfg.cone.empty() ? default_cone_for(family) : parse_cone(cfg.cone);
      SamplingPlan plan;
      plan.seed = cfg.seed;
      AxiomReport report = check_all(family, cone, plan);
      detail::Emitter emitter(cfg, "axioms");
      emitter.emit("axioms", to_json(report), to_csv(report));
      std::cout << to_text_matrix(report);
      return report.mismatch_count() == 0 ? 0 : 1;
    }

    ProblemInstance problem = catalog_get(cfg.problem);

    if (cmd_kkt->parsed()) {
      detail::Emitter emitter(cfg, "kkt");
      KKTOptions opts;
      opts.full_dual_multipliers =
          cfg.full_dual || !problem.reference->multiplier_in_polar_cone;
      KKTResidual r =
          kkt_residual(problem, problem.reference->x, problem.reference->lambda, opts);
      emitter.emit("kkt", to_json(r), to_csv(r));
      std::cout << "kkt total " << r.total() << "\n";
      return 0;
    }

    if (cmd_solve->parsed()) {
      PhiFamily family = detail::configured_family(cfg, &problem);
      AlmConfig alm;
      alm.c0 = cfg.c;
      alm.kkt_tolerance = cfg.kkt_tolerance;
      SolverReport rep = alm_solve(problem, family, Vector::Zero(problem.dim),
                                   BlockVector::zeros(problem.cone), alm);
      detail::Emitter emitter(cfg, "solve");
      emitter.emit("solve", to_json(rep), to_csv(rep));
      std::cout << "solve " << status_name(rep.status) << " value " << rep.value
                << " kkt " << rep.kkt_total << "\n";
      return rep.status == SolveStatus::Converged ? 0 : 1;
    }

    if (cmd_exact->parsed()) {
      auto construction = construction_from_name(detail::family_alias(cfg.construction));
      if (!construction)
        throw std::invalid_argument("unknown construction '" + cfg.construction + "'");
      ExactALInstance inst =
          make_exact_al(problem, *construction, BarrierConfig{cfg.alpha, cfg.kappa});
      Vector x0 = Vector::Zero(problem.dim);
      BlockVector l0 = BlockVector::zeros(problem.cone);
      if (!exact_al_value(inst, x0, l0, 1.0).is_finite()) x0 = problem.reference->x;
      ExactSolveConfig scfg;
      scfg.kkt_tolerance = cfg.kkt_tolerance;
      if (c_flag) scfg.c0 = cfg.c;  // start of the escalation schedule
      SolverReport rep = exact_al_solve(inst, x0, l0, scfg);
      detail::Emitter emitter(cfg, "exact");
      emitter.emit("exact", to_json(rep), to_csv(rep));
      std::cout << "exact " << status_name(rep.status) << " value " << rep.value
                << " kkt " << rep.kkt_total << "\n";
      return rep.status == SolveStatus::Converged ? 0 : 1;
    }

    if (cmd_saddle->parsed()) {
      PhiFamily family = detail::configured_family(cfg, &problem);
      SaddleCheckConfig scfg;
      scfg.c_list = cfg.c_list;
      scfg.radius = cfg.radius;
      scfg.lambda_samples = cfg.budget;
      scfg.multistart = cfg.multistart;
      scfg.seed = cfg.seed;
      SaddleCheckReport rep = local_saddle_check(problem, family, problem.reference->x,
                                                 problem.reference->lambda, scfg);
      detail::Emitter emitter(cfg, "saddle");
      emitter.emit("saddle", to_json(rep), to_csv(rep));
      for (const auto& row : rep.per_c)
        std::cout << "c=" << row.c << " value " << row.value << " margins ["
                  << row.sup_margin << ", " << row.inf_margin << "] "
                  << (row.pass ? "pass" : "fail") << "\n";
      return rep.pass ? 0 : 1;
    }

    if (cmd_dual->parsed()) {
      PhiFamily family = detail::configured_family(cfg, &problem);
      BlockVector lambda = detail::configured_multiplier(cfg, problem, family);
      DualValueResult res =
          dual_value(problem, family, lambda, cfg.c, cfg.multistart, cfg.seed);
      detail::Emitter emitter(cfg, "dual");
      Json body = to_json(res);
      body["fstar"] = num_cell(problem.reference->f);
      std::ostringstream csv;
      csv << "field,value\ntheta_hat," << csv_cell(res.theta_hat) << "\nfstar,"
          << csv_cell(problem.reference->f) << "\n";
      emitter.emit("dual", body, csv.str());
      std::cout << "theta_hat " << res.theta_hat << " (f* = " << problem.reference->f
                << ")\n";
      return 0;
    }

    if (cmd_sublevel->parsed()) {
      PhiFamily family = detail::configured_family(cfg, &problem);
      BlockVector lambda = detail::configured_multiplier(cfg, problem, family);
      ProbeResult res = sublevel_probe(problem, family, lambda, cfg.c,
                                       cfg.radius_schedule, cfg.budget / 10, cfg.seed);
      detail::Emitter emitter(cfg, "sublevel");
      emitter.emit("sublevel", to_json(res), to_csv(res));
      std::cout << "sublevel " << probe_verdict_name(res.verdict) << "\n";
      return 0;
    }

    if (cmd_alternance->parsed()) {
      AlternanceReport rep = alternance_check(problem, problem.reference->x,
                                              Matrix::Identity(problem.dim, problem.dim));
      detail::Emitter emitter(cfg, "alternance");
      emitter.emit("alternance", to_json(rep), to_csv(rep));
      std::cout << "alternance " << (rep.found ? "found" : "not found") << " p=" << rep.p
                << "\n";
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace conelag::cli
