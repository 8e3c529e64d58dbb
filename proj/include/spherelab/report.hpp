#pragma once

#include "spherelab/algebra.hpp"
#include "spherelab/common.hpp"
#include "spherelab/hspace.hpp"
#include "spherelab/parallelism.hpp"
#include "spherelab/verify.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace spherelab {

using Json = nlohmann::ordered_json;

/// Provenance envelope present in every emitted report.
inline Json report_envelope(const RunConfig& cfg, const std::string& kind) {
  Json j;
  j["version"] = kVersion;
  j["kind"] = kind;
  j["config"] = {{"level", cfg.level},   {"model", cfg.model},
                 {"h", cfg.h},           {"eps_pole", cfg.eps_pole},
                 {"samples", cfg.samples}, {"seed", cfg.seed},
                 {"format", cfg.format}};
  j["seed"] = cfg.seed;
  return j;
}

/// Comment preamble giving CSV reports the same provenance as the JSON ones.
inline std::string csv_preamble(const RunConfig& cfg, const std::string& kind) {
  std::ostringstream out;
  out << "# version=" << kVersion << " kind=" << kind << '\n';
  out << "# seed=" << cfg.seed << '\n';
  out << "# config level=" << cfg.level << " model=" << cfg.model << " h=" << cfg.h
      << " eps_pole=" << cfg.eps_pole << " samples=" << cfg.samples << '\n';
  return out.str();
}

inline Json tables_report(const RunConfig& cfg, const StructureConstants& table) {
  Json j = report_envelope(cfg, "tables");
  Json triples = Json::array();
  for (const auto& t : table.triples())
    triples.push_back(Json::array({t.i, t.j, t.k, static_cast<int>(t.sign)}));
  j["triples"] = triples;
  return j;
}

inline std::string tables_csv(const RunConfig& cfg, const StructureConstants& table) {
  std::ostringstream out;
  out << csv_preamble(cfg, "tables");
  out << "i,j,k,sign\n";
  for (const auto& t : table.triples())
    out << t.i << ',' << t.j << ',' << t.k << ',' << static_cast<int>(t.sign) << '\n';
  return out.str();
}

inline Json verification_report(const RunConfig& cfg, const VerificationSummary& summary,
                                const std::string& kind) {
  Json j = report_envelope(cfg, kind);
  j["model"] = summary.model;
  Json checks = Json::array();
  for (const auto& c : summary.checks)
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"bound", c.bound},
                      {"comparison", c.lower_bound ? ">=" : "<="},
                      {"pass", c.pass}});
  j["identities"] = checks;
  j["all_pass"] = summary.all_pass;
  return j;
}

inline std::string verification_csv(const RunConfig& cfg, const VerificationSummary& summary) {
  std::ostringstream out;
  out << csv_preamble(cfg, "verification");
  out << "name,value,bound,comparison,pass\n";
  for (const auto& c : summary.checks) {
    Json v = c.value, b = c.bound;  // shortest round-trip formatting
    out << c.name << ',' << v.dump() << ',' << b.dump() << ','
        << (c.lower_bound ? ">=" : "<=") << ',' << (c.pass ? 1 : 0) << '\n';
  }
  return out.str();
}

/// Component rows use 1-based indices and only j < k; the j > k half is
/// determined by antisymmetry.
inline Json constancy_report_json(const RunConfig& cfg, const std::string& frame_name,
                                  const ConstancyReport& report) {
  Json j = report_envelope(cfg, "parallelism-scan");
  j["frame"] = frame_name;
  j["level"] = cfg.level;
  j["h"] = cfg.h;
  j["eps_pole"] = cfg.eps_pole;
  j["samples"] = report.samples;
  j["max_deviation"] = report.max_deviation;
  j["max_residual"] = report.max_residual;
  Json comps = Json::array();
  const int m = report.mean.extent();
  for (int i = 0; i < m; ++i)
    for (int jj = 0; jj < m; ++jj)
      for (int k = jj + 1; k < m; ++k)
        comps.push_back({{"i", i + 1},
                         {"j", jj + 1},
                         {"k", k + 1},
                         {"mean", report.mean(i, jj, k)},
                         {"max_dev", report.max_dev(i, jj, k)}});
  j["components"] = comps;
  return j;
}

inline std::string constancy_report_csv(const RunConfig& cfg, const ConstancyReport& report) {
  std::ostringstream out;
  out << csv_preamble(cfg, "parallelism-scan");
  out << "i,j,k,mean,max_dev\n";
  const int m = report.mean.extent();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        Json mean = report.mean(i, j, k), dev = report.max_dev(i, j, k);
        out << i + 1 << ',' << j + 1 << ',' << k + 1 << ',' << mean.dump() << ','
            << dev.dump() << '\n';
      }
  return out.str();
}

inline Json defect_report_json(const RunConfig& cfg, const std::string& op,
                               const DefectReport& report) {
  Json j = report_envelope(cfg, "hspace-defects");
  j["model"] = cfg.model;
  j["op"] = op;
  j["seed"] = report.seed;
  j["n"] = report.n;
  j["max"] = report.max;
  j["mean"] = report.mean;
  Json hist = Json::array();
  for (int c : report.hist) hist.push_back(c);
  j["hist"] = hist;
  return j;
}

inline std::string defect_report_csv(const RunConfig& cfg, const DefectReport& report) {
  std::ostringstream out;
  out << csv_preamble(cfg, "hspace-defects");
  Json mx = report.max, mn = report.mean;
  out << "n,max,mean\n" << report.n << ',' << mx.dump() << ',' << mn.dump() << '\n';
  out << "bin,count\n";
  for (std::size_t b = 0; b < report.hist.size(); ++b) out << b << ',' << report.hist[b] << '\n';
  return out.str();
}

/// Gram residual of the frame at sampled points, one row per point.
struct FrameScanRow {
  int index;
  Vec point;
  double gram_residual;
};

inline Json frame_scan_json(const RunConfig& cfg, const std::vector<FrameScanRow>& rows) {
  Json j = report_envelope(cfg, "frame-scan");
  Json out_rows = Json::array();
  for (const auto& r : rows) {
    Json pt = Json::array();
    for (int i = 0; i < r.point.size(); ++i) pt.push_back(r.point[i]);
    out_rows.push_back({{"index", r.index}, {"point", pt}, {"gram_residual", r.gram_residual}});
  }
  j["rows"] = out_rows;
  return j;
}

inline std::string frame_scan_csv(const RunConfig& cfg, const std::vector<FrameScanRow>& rows) {
  std::ostringstream out;
  out << csv_preamble(cfg, "frame-scan");
  out << "index";
  if (!rows.empty())
    for (int i = 0; i < rows.front().point.size(); ++i) out << ",x" << i;
  out << ",gram_residual\n";
  for (const auto& r : rows) {
    out << r.index;
    for (int i = 0; i < r.point.size(); ++i) {
      Json v = r.point[i];
      out << ',' << v.dump();
    }
    Json g = r.gram_residual;
    out << ',' << g.dump() << '\n';
  }
  return out.str();
}

/// Resolve a report path against LAB_OUT_DIR when the path is relative.
inline std::filesystem::path resolve_out_path(const std::string& out) {
  std::filesystem::path p(out);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("LAB_OUT_DIR"); dir != nullptr && *dir != '\0')
      p = std::filesystem::path(dir) / p;
  }
  return p;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

}  // namespace spherelab
