// conelag - augmented Lagrangian toolkit for cone constrained optimization
// Copyright 2026 conelag contributors
// Licensed under Apache 2.0

#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "conelag/analysis.hpp"
#include "conelag/axioms.hpp"
#include "conelag/solvers.hpp"

namespace conelag {

using Json = nlohmann::json;

inline const char* kVersion = "0.1.0";

/// Numeric cell: finite value, or the literal string "inf" (JSON has no
/// infinity and the CSV dialect mirrors the JSON payload).
inline Json num_cell(double v) {
  if (std::isfinite(v)) return v;
  return "inf";
}

inline std::string csv_cell(double v) {
  if (!std::isfinite(v)) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

/// FNV-1a over the canonical config dump; stable across platforms.
inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline Json to_json(const BlockVector& v) {
  Json out = Json::array();
  for (const auto& b : v.blocks) {
    Json blk = Json::array();
    for (int i = 0; i < b.size(); ++i) blk.push_back(num_cell(b(i)));
    out.push_back(blk);
  }
  return out;
}

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(num_cell(v(i)));
  return out;
}

inline Json to_json(const AxiomReport& r) {
  Json entries = Json::array();
  auto entry_json = [](const AxiomEntry& e) {
    Json j;
    j["axiom"] = axiom_name(e.axiom);
    j["verdict"] = verdict_name(e.verdict);
    j["claim"] = e.claim.kind == ClaimKind::Holds
                     ? "Holds"
                     : (e.claim.kind == ClaimKind::Fails ? "Fails"
                                                         : "HoldsIf(" + e.claim.condition + ")");
    j["match"] = e.match;
    if (e.witness) {
      Json w;
      if (e.witness->y) w["y"] = to_json(*e.witness->y);
      if (e.witness->y2) w["y2"] = to_json(*e.witness->y2);
      if (e.witness->lambda) w["lambda"] = to_json(*e.witness->lambda);
      w["c"] = num_cell(e.witness->c);
      if (e.witness->c2 != 0.0) w["c2"] = num_cell(e.witness->c2);
      w["detail"] = e.witness->detail;
      j["witness"] = w;
    }
    return j;
  };
  // mismatches first, then axiom order
  for (const auto& e : r.entries)
    if (!e.match) entries.push_back(entry_json(e));
  for (const auto& e : r.entries)
    if (e.match) entries.push_back(entry_json(e));
  Json j;
  j["family"] = r.family_id;
  j["seed"] = r.seed;
  j["mismatches"] = r.mismatch_count();
  j["entries"] = entries;
  return j;
}

inline std::string to_csv(const AxiomReport& r) {
  std::ostringstream os;
  os << "axiom,verdict,claim,match\n";
  for (const auto& e : r.entries) {
    const std::string claim =
        e.claim.kind == ClaimKind::Holds
            ? "Holds"
            : (e.claim.kind == ClaimKind::Fails ? "Fails" : "HoldsIf");
    os << axiom_name(e.axiom) << ',' << verdict_name(e.verdict) << ',' << claim << ','
       << (e.match ? "Match" : "Mismatch") << '\n';
  }
  return os.str();
}

/// Plain-text verdict matrix for the terminal.
inline std::string to_text_matrix(const AxiomReport& r) {
  std::ostringstream os;
  os << "family " << r.family_id << " (seed " << r.seed << ")\n";
  for (const auto& e : r.entries) {
    os << "  " << axiom_name(e.axiom);
    for (size_t k = axiom_name(e.axiom).size(); k < 4; ++k) os << ' ';
    os << verdict_name(e.verdict) << (e.match ? "" : "  <-- MISMATCH") << '\n';
  }
  return os.str();
}

inline Json to_json(const KKTResidual& r) {
  Json j;
  j["stationarity"] = num_cell(r.stationarity);
  j["primal"] = num_cell(r.primal);
  j["complementarity"] = num_cell(r.complementarity);
  j["dual"] = num_cell(r.dual);
  j["total"] = num_cell(r.total());
  j["dual_flagged"] = r.dual_flagged;
  j["heuristic_weights"] = r.heuristic_weights;
  return j;
}

inline std::string to_csv(const KKTResidual& r) {
  std::ostringstream os;
  os << "component,value\n";
  os << "stationarity," << csv_cell(r.stationarity) << '\n';
  os << "primal," << csv_cell(r.primal) << '\n';
  os << "complementarity," << csv_cell(r.complementarity) << '\n';
  os << "dual," << csv_cell(r.dual) << '\n';
  os << "total," << csv_cell(r.total()) << '\n';
  return os.str();
}

inline Json to_json(const SaddleCheckReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.per_c) {
    Json j;
    j["c"] = num_cell(row.c);
    j["value"] = num_cell(row.value);
    j["sup_value"] = num_cell(row.sup_value);
    j["inf_value"] = num_cell(row.inf_value);
    j["sup_margin"] = num_cell(row.sup_margin);
    j["inf_margin"] = num_cell(row.inf_margin);
    j["pass"] = row.pass;
    rows.push_back(j);
  }
  Json j;
  j["pass"] = r.pass;
  j["lambda_samples"] = r.lambda_samples;
  j["multistart"] = r.multistart;
  j["per_c"] = rows;
  return j;
}

inline std::string to_csv(const SaddleCheckReport& r) {
  std::ostringstream os;
  os << "c,value,sup_value,inf_value,sup_margin,inf_margin,pass\n";
  for (const auto& row : r.per_c)
    os << csv_cell(row.c) << ',' << csv_cell(row.value) << ',' << csv_cell(row.sup_value)
       << ',' << csv_cell(row.inf_value) << ',' << csv_cell(row.sup_margin) << ','
       << csv_cell(row.inf_margin) << ',' << (row.pass ? "pass" : "fail") << '\n';
  return os.str();
}

inline Json to_json(const SolverReport& r) {
  Json j;
  j["status"] = status_name(r.status);
  j["x"] = to_json(r.x);
  j["lambda"] = to_json(r.lambda);
  j["value"] = num_cell(r.value);
  j["kkt_total"] = num_cell(r.kkt_total);
  j["outer_iterations"] = r.outer_iterations;
  j["inner_iterations"] = r.inner_iterations;
  j["skipped_multiplier_updates"] = r.skipped_multiplier_updates;
  Json cs = Json::array();
  for (double c : r.c_trajectory) cs.push_back(num_cell(c));
  j["c_trajectory"] = cs;
  return j;
}

inline std::string to_csv(const SolverReport& r) {
  std::ostringstream os;
  os << "field,value\n";
  os << "status," << status_name(r.status) << '\n';
  os << "value," << csv_cell(r.value) << '\n';
  os << "kkt_total," << csv_cell(r.kkt_total) << '\n';
  os << "outer_iterations," << r.outer_iterations << '\n';
  os << "inner_iterations," << r.inner_iterations << '\n';
  return os.str();
}

inline const char* probe_verdict_name(ProbeVerdict v) {
  switch (v) {
    case ProbeVerdict::BoundedWithin: return "BoundedWithin";
    case ProbeVerdict::EscapeDetected: return "EscapeDetected";
    case ProbeVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline Json to_json(const ProbeResult& r) {
  Json j;
  j["verdict"] = probe_verdict_name(r.verdict);
  j["radius"] = num_cell(r.radius);
  j["hits"] = r.hits;
  if (r.verdict == ProbeVerdict::EscapeDetected) {
    j["witness_x"] = to_json(r.witness_x);
    j["witness_lambda"] = to_json(r.witness_lambda);
    j["witness_value"] = num_cell(r.witness_value);
  }
  return j;
}

inline std::string to_csv(const ProbeResult& r) {
  std::ostringstream os;
  os << "field,value\n";
  os << "verdict," << probe_verdict_name(r.verdict) << '\n';
  os << "radius," << csv_cell(r.radius) << '\n';
  os << "hits," << r.hits << '\n';
  return os.str();
}

inline Json to_json(const DualValueResult& r) {
  Json j;
  j["theta_hat"] = num_cell(r.theta_hat);
  j["argmin"] = to_json(r.argmin);
  j["diverged"] = r.diverged;
  j["starts"] = r.starts;
  return j;
}

inline Json to_json(const AlternanceReport& r) {
  Json j;
  j["found"] = r.found;
  j["p"] = r.p;
  Json dets = Json::array();
  for (double d : r.determinants) dets.push_back(num_cell(d));
  j["determinants"] = dets;
  Json vecs = Json::array();
  for (const auto& v : r.vectors) vecs.push_back(to_json(v));
  j["vectors"] = vecs;
  return j;
}

inline std::string to_csv(const AlternanceReport& r) {
  std::ostringstream os;
  os << "s,determinant\n";
  for (size_t s = 0; s < r.determinants.size(); ++s)
    os << (s + 1) << ',' << csv_cell(r.determinants[s]) << '\n';
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace conelag
