// Command-line front end: model selection, verification suites, scans and
// report emission. The one place in the project with side effects.

#include "spherelab/acs.hpp"
#include "spherelab/algebra.hpp"
#include "spherelab/common.hpp"
#include "spherelab/geometry.hpp"
#include "spherelab/hspace.hpp"
#include "spherelab/kirchhoff.hpp"
#include "spherelab/parallelism.hpp"
#include "spherelab/report.hpp"
#include "spherelab/rng.hpp"
#include "spherelab/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace spherelab;

constexpr int kExitOk = 0;
constexpr int kExitIdentityFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

void emit(const std::string& content, const std::string& out) {
  if (out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  write_text_file(resolve_out_path(out), content);
}

void emit_json(const Json& j, const std::string& out) { emit(j.dump(2) + "\n", out); }

Vec parse_point(const std::string& csv, int expected_len) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("cannot parse point coordinate '" + item + "'");
    }
  }
  if (static_cast<int>(values.size()) != expected_len) {
    throw UsageError("expected " + std::to_string(expected_len) + " comma-separated coordinates, got " +
                     std::to_string(values.size()));
  }
  Vec x(expected_len);
  for (int i = 0; i < expected_len; ++i) x[i] = values[static_cast<std::size_t>(i)];
  return x;
}

void print_verification_table(const VerificationSummary& summary) {
  std::printf("model: %s  (seed %llu, samples %d, h %g)\n", summary.model.c_str(),
              static_cast<unsigned long long>(summary.config.seed), summary.config.samples,
              summary.config.h);
  std::printf("%-34s %12s %2s %9s  %s\n", "identity", "value", "", "bound", "result");
  for (const auto& c : summary.checks)
    std::printf("%-34s %12.3e %2s %9.0e  %s\n", c.name.c_str(), c.value,
                c.lower_bound ? ">=" : "<=", c.bound, c.pass ? "pass" : "FAIL");
  std::printf("overall: %s\n", summary.all_pass ? "pass" : "FAIL");
}

int cmd_tables(const RunConfig& cfg) {
  const StructureConstants table = StructureConstants::frozen(AlgebraLevel(cfg.level));
  if (cfg.format == "csv")
    emit(tables_csv(cfg, table), cfg.out);
  else
    emit_json(tables_report(cfg, table), cfg.out);
  return kExitOk;
}

int cmd_acs_check(const RunConfig& cfg) {
  const VerificationSummary summary = run_acs_check(cfg);
  if (cfg.format == "csv")
    emit(verification_csv(cfg, summary), cfg.out);
  else
    emit_json(verification_report(cfg, summary, "acs-check"), cfg.out);
  return summary.all_pass ? kExitOk : kExitIdentityFailure;
}

int cmd_verify(const RunConfig& cfg) {
  const VerificationSummary summary = run_verification(cfg);
  print_verification_table(summary);
  if (!cfg.out.empty()) {
    if (cfg.format == "csv")
      emit(verification_csv(cfg, summary), cfg.out);
    else
      emit_json(verification_report(cfg, summary, "verify"), cfg.out);
  }
  return summary.all_pass ? kExitOk : kExitIdentityFailure;
}

int cmd_frame_eval(const RunConfig& cfg, const std::string& point_csv, int index) {
  const AcsField J = make_model(cfg.model, cfg.seed);
  const int len = J.sphere().vec_len();
  const Vec raw = parse_point(point_csv, len);
  if (raw.norm() < 1e-12) throw UsageError("point must be nonzero");
  const SpherePoint x(Sphere::unit(len), raw);
  const TangentVector field = frame_field(J, index, x);
  const Decomposition d = decompose(x.vec(), axis_vector(len, 0));

  Json j = report_envelope(cfg, "frame-eval");
  Json pt = Json::array(), fv = Json::array();
  for (int i = 0; i < len; ++i) {
    pt.push_back(x.vec()[i]);
    fv.push_back(field.v[i]);
  }
  j["point"] = pt;
  j["index"] = index;
  j["alpha"] = d.alpha;
  j["beta"] = d.beta;
  j["field"] = fv;
  emit_json(j, cfg.out);
  return kExitOk;
}

std::vector<FrameScanRow> run_frame_scan(const RunConfig& cfg) {
  const AcsField J = make_model(cfg.model, cfg.seed);
  const int len = J.sphere().vec_len();
  const Sphere fs = Sphere::unit(len);
  std::vector<FrameScanRow> rows;
  rows.reserve(static_cast<std::size_t>(cfg.samples));
  for (int idx = 0; idx < cfg.samples; ++idx) {
    SplitMix64 rng(derive_stream_seed(cfg.seed, idx));
    const SpherePoint p = sample_point_outside_caps(rng, fs, cfg.eps_pole);
    Mat F(len, len - 1);
    for (int i = 1; i < len; ++i) F.col(i - 1) = frame_field(J, i, p).v;
    const double residual =
        (F.transpose() * F - Mat::Identity(len - 1, len - 1)).cwiseAbs().maxCoeff();
    rows.push_back({idx, p.vec(), residual});
  }
  return rows;
}

int cmd_frame_scan(const RunConfig& cfg) {
  const auto rows = run_frame_scan(cfg);
  if (cfg.format == "json")
    emit_json(frame_scan_json(cfg, rows), cfg.out);
  else
    emit(frame_scan_csv(cfg, rows), cfg.out);
  return kExitOk;
}

int cmd_parallelism_scan(const RunConfig& cfg, const std::string& frame_name) {
  const AlgebraLevel level(cfg.level);
  std::vector<VectorFieldMap> frame;
  if (frame_name == "classical") {
    frame = classical_frame(level);
  } else if (frame_name == "kirchhoff") {
    frame = kirchhoff_frame(AcsField::right_multiplication(level));
  } else {
    throw UsageError("unknown frame '" + frame_name + "' (expected classical or kirchhoff)");
  }
  const ConstancyReport report = constancy_scan(frame, Sphere::frame_sphere(level), cfg.samples,
                                                cfg.seed, cfg.h, cfg.eps_pole);
  if (cfg.format == "csv")
    emit(constancy_report_csv(cfg, report), cfg.out);
  else
    emit_json(constancy_report_json(cfg, frame_name, report), cfg.out);
  return kExitOk;
}

int cmd_hspace_defects(const RunConfig& cfg, const std::string& op, const std::string& mult) {
  const AcsField J = make_model(cfg.model, cfg.seed);
  const HMultiplication m =
      (mult == "sphere") ? sphere_multiplication(J) : ambient_multiplication(J);
  DefectReport report{};
  if (op == "assoc")
    report = associativity_defect(m, cfg.samples, cfg.seed);
  else if (op == "moufang")
    report = moufang_defect(m, cfg.samples, cfg.seed);
  else
    throw UsageError("unknown op '" + op + "' (expected assoc or moufang)");
  if (cfg.format == "csv")
    emit(defect_report_csv(cfg, report), cfg.out);
  else
    emit_json(defect_report_json(cfg, op, report), cfg.out);
  return kExitOk;
}

int cmd_report(RunConfig cfg, const std::string& out_dir) {
  std::string dir = out_dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("LAB_OUT_DIR"); env != nullptr && *env != '\0')
      dir = env;
    else
      throw UsageError("report needs --out-dir or the LAB_OUT_DIR environment variable");
  }
  const std::string ext = cfg.format == "csv" ? ".csv" : ".json";
  int rc = kExitOk;

  {
    RunConfig c = cfg;
    c.out = dir + "/acs_check" + ext;
    if (cmd_acs_check(c) != kExitOk) rc = kExitIdentityFailure;
  }
  for (const char* frame : {"classical", "kirchhoff"}) {
    RunConfig c = cfg;
    c.out = dir + "/parallelism_" + frame + ext;
    cmd_parallelism_scan(c, frame);
  }
  for (const char* op : {"assoc", "moufang"}) {
    RunConfig c = cfg;
    c.out = dir + "/defects_" + op + ext;
    cmd_hspace_defects(c, op, "ambient");
  }
  {
    RunConfig c = cfg;
    c.out = dir + "/frame_scan" + ext;
    cmd_frame_scan(c);
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for sphere frames, almost complex structures "
               "and induced sphere multiplications"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string frame_name = "classical";
  std::string op = "assoc";
  std::string mult = "ambient";
  std::string point_csv;
  std::string out_dir;
  int field_index = 1;

  const auto add_common = [&cfg](CLI::App* cmd, bool with_model = true) {
    cmd->add_option("--samples", cfg.samples, "sample count");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--step", cfg.h, "finite-difference step h");
    cmd->add_option("--eps-pole", cfg.eps_pole, "cap radius excluded around the poles");
    cmd->add_option("--out", cfg.out, "output path (stdout when omitted)");
    cmd->add_option("--format", cfg.format, "output format: json or csv");
    if (with_model)
      cmd->add_option("--model", cfg.model, "model: octonion, quaternion or rotated");
  };

  auto* tables = app.add_subcommand("tables", "structure-constant tables");
  auto* tables_export = tables->add_subcommand("export", "emit the a_ijk table");
  tables->require_subcommand(1);
  tables_export->add_option("--level", cfg.level, "algebra level 1, 2 or 3");
  add_common(tables_export, /*with_model=*/false);

  auto* acs = app.add_subcommand("acs", "almost complex structure checks");
  auto* acs_check = acs->add_subcommand("check", "residuals of the field identities");
  acs->require_subcommand(1);
  add_common(acs_check);

  auto* frame = app.add_subcommand("frame", "frame construction");
  frame->require_subcommand(1);
  auto* frame_eval = frame->add_subcommand("eval", "evaluate one frame field at a point");
  frame_eval->add_option("--point", point_csv, "comma-separated ambient coordinates")->required();
  frame_eval->add_option("--index", field_index, "frame field index (1-based)");
  add_common(frame_eval);
  auto* frame_scan = frame->add_subcommand("scan", "per-point Gram residuals of the frame");
  add_common(frame_scan);

  auto* par = app.add_subcommand("parallelism", "structure functions of global frames");
  auto* par_scan = par->add_subcommand("scan", "constancy scan of the structure functions");
  par->require_subcommand(1);
  par_scan->add_option("--frame", frame_name, "frame: classical or kirchhoff");
  par_scan->add_option("--level", cfg.level, "algebra level 2 or 3");
  add_common(par_scan, /*with_model=*/false);

  auto* hspace = app.add_subcommand("hspace", "induced sphere multiplications");
  auto* defects = hspace->add_subcommand("defects", "associativity / Moufang defect statistics");
  hspace->require_subcommand(1);
  defects->add_option("--op", op, "op: assoc or moufang");
  defects->add_option("--mult", mult, "multiplication: ambient or sphere");
  add_common(defects);

  auto* verify = app.add_subcommand("verify", "run the full identity suite for a model");
  add_common(verify);

  auto* report = app.add_subcommand("report", "write the standard report bundle");
  report->add_option("--out-dir", out_dir, "directory for the emitted files");
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.validate();
    if (tables_export->parsed()) return cmd_tables(cfg);
    if (acs_check->parsed()) return cmd_acs_check(cfg);
    if (frame_eval->parsed()) return cmd_frame_eval(cfg, point_csv, field_index);
    if (frame_scan->parsed()) {
      // gram residual rows are tabular by nature; CSV unless JSON was asked for
      if (frame_scan->count("--format") == 0) cfg.format = "csv";
      return cmd_frame_scan(cfg);
    }
    if (par_scan->parsed()) return cmd_parallelism_scan(cfg, frame_name);
    if (defects->parsed()) return cmd_hspace_defects(cfg, op, mult);
    if (verify->parsed()) return cmd_verify(cfg);
    if (report->parsed()) return cmd_report(cfg, out_dir);
    throw UsageError("no subcommand selected");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIdentityFailure;
  }
}
