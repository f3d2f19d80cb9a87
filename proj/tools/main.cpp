// Copyright 2026 The lra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver for contour subspace fitting, coding, and the
// evaluation harness. Exit codes: 0 success, 1 configuration error, 2 data
// error, 3 numerical error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lra/assignment.hpp"
#include "lra/codec.hpp"
#include "lra/corpus.hpp"
#include "lra/geometry.hpp"
#include "lra/hashing.hpp"
#include "lra/robustness.hpp"
#include "lra/run_config.hpp"

namespace {

using namespace lra;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "flat key = value config file");
  cmd->add_option("--set", opts.overrides, "override a config key (key=value)");
}

RunConfig load_config(const CommonOpts& opts) {
  RunConfig config = RunConfig::from_file(opts.config_path);
  for (const std::string& assignment : opts.overrides) {
    config.apply_override(assignment);
  }
  return config;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string describe_corpus(const CorpusSpec& spec, const Corpus& corpus) {
  const std::string source = spec.is_file() ? "file:" + spec.jsonl_path
                                            : "synthetic:" + spec.family;
  return source + ";fp=" + corpus.fingerprint;
}

void print_diagnostics(const Corpus& corpus) {
  for (const IngestDiagnostic& diag : corpus.diagnostics) {
    std::cerr << "skip (line " << diag.line << "): " << diag.message << "\n";
  }
  if (!corpus.diagnostics.empty()) {
    std::cout << "skipped " << corpus.diagnostics.size()
              << " malformed lines/polygons\n";
  }
}

std::string cell(double value, bool three_decimals) {
  if (std::isnan(value)) return "-";
  char buf[48];
  std::snprintf(buf, sizeof(buf), three_decimals ? "%.3f" : "%.6g", value);
  return std::string(buf);
}

void print_report(const Report& report) {
  std::printf("%-11s %-10s %-8s %4s %7s %9s %9s %12s %12s %9s\n", "op",
              "condition", "method", "dim", "noise", "mean_iou", "iou_q50",
              "mean_sq_err", "objective", "runtime");
  for (const ReportRow& row : report.rows) {
    std::printf("%-11s %-10s %-8s %4d %7s %9s %9s %12s %12s %9s\n",
                row.op.c_str(), row.condition.c_str(), row.method.c_str(),
                row.dim, cell(row.noise, true).c_str(),
                cell(row.mean_iou, true).c_str(), cell(row.iou_q50, true).c_str(),
                cell(row.mean_sq_err, false).c_str(),
                cell(row.objective, false).c_str(),
                cell(row.runtime_s, true).c_str());
  }
  std::printf("corpus_hash=%s", report.corpus_hash.c_str());
  if (!report.corpus_hash_b.empty()) {
    std::printf(" corpus_hash_b=%s", report.corpus_hash_b.c_str());
  }
  std::printf(" seed=%llu config_hash=%s\n",
              static_cast<unsigned long long>(report.seed),
              report.config_hash.c_str());
}

void emit_report(const Report& report, const std::string& csv_path,
                 const std::string& json_path, bool with_runtime) {
  if (!csv_path.empty()) report.write_csv(csv_path, with_runtime);
  if (!json_path.empty()) report.write_json(json_path, with_runtime);
  print_report(report);
}

FocalParams focal_from_config(const RunConfig& config) {
  FocalParams params;
  params.alpha = config.get_double("focal_alpha", params.alpha);
  params.gamma = config.get_double("focal_gamma", params.gamma);
  params.clamp = config.get_double("focal_clamp", params.clamp);
  return params;
}

RegressionNorm norm_from_config(const RunConfig& config) {
  const std::string name = config.get_string("regression_norm", "l2");
  if (name == "l2") return RegressionNorm::kPerVertexL2;
  if (name == "l1") return RegressionNorm::kPerCoordL1;
  throw ConfigError("regression_norm must be l2 or l1, got '" + name + "'");
}

// ---------------------------------------------------------------------------
// fit

struct FitOpts : CommonOpts {
  std::string out_basis;
  std::string trace_path;
};

int cmd_fit(const FitOpts& opts) {
  const RunConfig config = load_config(opts);
  const CorpusSpec spec = config.corpus_spec();
  const auto start = Clock::now();
  const Corpus corpus = load_corpus(spec);
  print_diagnostics(corpus);

  const ContourMatrix matrix = build_matrix(corpus.contours, spec.flags);
  const int m = config.get_int("m", 14);
  const FitMethod method =
      fit_method_from_string(config.get_string("method", "fms"));
  const FmsParams fms = config.fms_params();

  Basis basis;
  FmsResult fms_result;
  if (method == FitMethod::kSvd) {
    basis = svd_subspace(matrix, m);
  } else {
    fms_result = fms_subspace(matrix, m, fms);
    basis = fms_result.basis;
  }

  OrthanchorBasis packaged;
  packaged.basis = basis;
  packaged.n_vertices = spec.n_vertices;
  packaged.provenance.corpus_id = describe_corpus(spec, corpus);
  packaged.provenance.params =
      "method=" + to_string(method) + ";m=" + std::to_string(m) +
      ";n=" + std::to_string(spec.n_vertices) +
      ";center=" + (spec.flags.center ? "1" : "0") +
      ";scale=" + (spec.flags.normalize_scale ? "1" : "0") +
      ";config=" + config.hash();
  save_basis(packaged, opts.out_basis);
  if (!opts.trace_path.empty()) {
    if (method != FitMethod::kFms) {
      throw ConfigError("--trace requires method = fms");
    }
    write_fms_trace_csv(fms_result, opts.trace_path);
  }

  std::cout << "samples: " << corpus.contours.size() << "\n"
            << "method: " << to_string(method) << "  m: " << m << "\n";
  if (method == FitMethod::kFms) {
    std::cout << "iterations: " << fms_result.iterations
              << (fms_result.converged ? " (converged)" : " (iteration cap)")
              << "\n";
  }
  std::cout << "objective: " << format_double17(l12_objective(matrix, basis)) << "\n"
            << "orthonormality_residual: "
            << format_double17(orthonormality_residual(basis.u)) << "\n"
            << "basis: " << opts.out_basis << "\n"
            << "elapsed_s: " << cell(seconds_since(start), true) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// encode / decode

struct EncodeOpts : CommonOpts {
  std::string basis_path;
  std::string input_path;
  std::string out_codes;
};

int cmd_encode(const EncodeOpts& opts) {
  const OrthanchorBasis basis = load_basis(opts.basis_path);
  const IngestResult ingest = read_annotations_jsonl(opts.input_path);
  for (const IngestDiagnostic& diag : ingest.diagnostics) {
    std::cerr << "skip (line " << diag.line << "): " << diag.message << "\n";
  }

  std::vector<std::string> ids;
  std::vector<ShapeCode> codes;
  int skipped = ingest.skipped_lines + ingest.skipped_polygons;
  for (const AnnotationRecord& record : ingest.records) {
    for (std::size_t i = 0; i < record.polygons.size(); ++i) {
      const std::string id = record.id + "#" + std::to_string(i);
      try {
        const Contour contour =
            resample_contour(record.polygons[i], basis.n_vertices);
        codes.push_back(encode(basis, contour));
        ids.push_back(id);
      } catch (const DataError& err) {
        std::cerr << "skip (line " << record.line << "): polygon '" << id
                  << "': " << err.what() << "\n";
        ++skipped;
      }
    }
  }
  if (codes.empty()) throw DataError("no encodable polygons in " + opts.input_path);
  write_codes_jsonl(ids, codes, opts.out_codes);
  std::cout << "encoded: " << codes.size() << "\nskipped: " << skipped
            << "\ncodes: " << opts.out_codes << "\n";
  return 0;
}

struct DecodeOpts : CommonOpts {
  std::string basis_path;
  std::string codes_path;
  std::string out_path;
};

int cmd_decode(const DecodeOpts& opts) {
  const OrthanchorBasis basis = load_basis(opts.basis_path);
  std::ifstream in(opts.codes_path, std::ios::binary);
  if (!in) throw DataError("cannot open codes file: " + opts.codes_path);
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw DataError("cannot open output file for writing: " + opts.out_path);

  std::string line;
  int line_no = 0;
  int decoded = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object() || !record.contains("id") ||
        !record.contains("coefficients") || !record.contains("frame")) {
      throw DataError("codes line " + std::to_string(line_no) + " is malformed");
    }
    try {
      const json& coeffs = record["coefficients"];
      ShapeCode code;
      code.coefficients.resize(static_cast<Eigen::Index>(coeffs.size()));
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        code.coefficients[static_cast<Eigen::Index>(i)] =
            coeffs[i].is_string() ? parse_double_strict(coeffs[i].get<std::string>())
                                  : coeffs[i].get<double>();
      }
      const json& frame = record["frame"];
      const auto frame_field = [&](const char* key) {
        return frame.at(key).is_string()
                   ? parse_double_strict(frame.at(key).get<std::string>())
                   : frame.at(key).get<double>();
      };
      code.frame.tx = frame_field("tx");
      code.frame.ty = frame_field("ty");
      code.frame.scale = frame_field("scale");

      const Contour contour = decode(basis, code);
      json out_record;
      out_record["id"] = record["id"];
      json poly = json::array();
      for (const Point& p : contour.points) poly.push_back({p.x, p.y});
      out_record["polygons"] = json::array({poly});
      out << out_record.dump() << '\n';
      ++decoded;
    } catch (const json::exception& err) {
      throw DataError("codes line " + std::to_string(line_no) + ": " + err.what());
    }
  }
  if (!out.good()) throw DataError("failed while writing " + opts.out_path);
  std::cout << "decoded: " << decoded << "\noutput: " << opts.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOpts : CommonOpts {
  std::string basis_path;
  std::string input_path;
  std::string out_csv;
  std::string out_json;
  std::string per_contour;
  std::string profile_csv;
  bool with_runtime = false;
};

int cmd_eval(const EvalOpts& opts) {
  const RunConfig config = load_config(opts);
  const OrthanchorBasis basis = load_basis(opts.basis_path);

  CorpusSpec spec = config.corpus_spec();
  if (!opts.input_path.empty()) {
    spec.jsonl_path = opts.input_path;
    spec.n_vertices = basis.n_vertices;
  }
  if (spec.n_vertices != basis.n_vertices) {
    throw DataError("corpus n_vertices " + std::to_string(spec.n_vertices) +
                    " does not match the basis (" +
                    std::to_string(basis.n_vertices) + ")");
  }
  spec.flags = basis.basis.flags;

  const Corpus corpus = load_corpus(spec);
  print_diagnostics(corpus);

  const auto start = Clock::now();
  const EvalStats stats =
      evaluate_reconstruction(basis, corpus.contours, config.resolution());
  const ContourMatrix matrix = build_matrix(corpus.contours, basis.basis.flags);

  Report report;
  report.corpus_hash = corpus.fingerprint;
  report.seed = spec.seed;
  report.config_hash = config.hash();
  ReportRow row;
  row.op = "eval";
  row.condition = "all";
  row.method = to_string(basis.basis.method);
  row.dim = basis.m();
  row.mean_iou = stats.mean_iou;
  row.iou_q25 = stats.iou_q25;
  row.iou_q50 = stats.iou_q50;
  row.iou_q75 = stats.iou_q75;
  row.mean_sq_err = stats.mean_sq_err;
  row.objective = l12_objective(matrix, basis.basis);
  row.explained_var = explained_variance(matrix, basis.basis).sum();
  row.runtime_s = seconds_since(start);
  report.rows.push_back(row);

  if (!opts.per_contour.empty()) {
    write_per_contour_csv(corpus.ids, stats.per_contour_iou, opts.per_contour);
  }
  if (!opts.profile_csv.empty()) {
    Report profile = importance_profile(spec, basis);
    profile.config_hash = config.hash();
    profile.write_csv(opts.profile_csv, opts.with_runtime);
  }
  emit_report(report, opts.out_csv, opts.out_json, opts.with_runtime);
  return 0;
}

// ---------------------------------------------------------------------------
// harness commands

struct HarnessOpts : CommonOpts {
  std::string out_csv;
  std::string out_json;
  bool with_runtime = false;
};

int cmd_sweep(const HarnessOpts& opts) {
  const RunConfig config = load_config(opts);
  const std::vector<int> dims =
      config.get_int_list("dims", {6, 10, 14, 18, 28});
  const std::string method = config.get_string("method", "fms");
  Report report = dim_sweep(config.corpus_spec(), dims, method,
                            config.fms_params(), config.resolution());
  report.config_hash = config.hash();
  emit_report(report, opts.out_csv, opts.out_json, opts.with_runtime);
  return 0;
}

int cmd_noise(const HarnessOpts& opts) {
  const RunConfig config = load_config(opts);
  Report report =
      noise_benchmark(config.corpus_spec(), config.noise_spec(),
                      config.get_int("m", 14), config.fms_params(),
                      config.resolution());
  report.config_hash = config.hash();
  emit_report(report, opts.out_csv, opts.out_json, opts.with_runtime);
  return 0;
}

int cmd_generalize(const HarnessOpts& opts) {
  const RunConfig config = load_config(opts);
  const FitMethod method =
      fit_method_from_string(config.get_string("method", "fms"));
  Report report = generalization_check(
      config.corpus_spec(/*eval_variant=*/false),
      config.corpus_spec(/*eval_variant=*/true), config.get_int("m", 14),
      method, config.fms_params(), config.resolution());
  report.config_hash = config.hash();
  emit_report(report, opts.out_csv, opts.out_json, opts.with_runtime);
  return 0;
}

// ---------------------------------------------------------------------------
// assign-sim

struct AssignOpts : CommonOpts {
  std::string scenario_path;
  std::string out_path;
};

int cmd_assign_sim(const AssignOpts& opts) {
  const RunConfig config = load_config(opts);
  const ScenarioSpec scenario = load_scenario(opts.scenario_path);
  const PredictionGrid grid = simulate_grid(scenario);
  const Assignment assignment =
      sparse_assign(grid, scenario.gts, scenario.k, scenario.lambda,
                    focal_from_config(config), norm_from_config(config));
  if (!opts.out_path.empty()) {
    write_assignment_json(assignment, grid, scenario, config.hash(), opts.out_path);
  }

  int in_region = 0;
  for (std::uint8_t flag : grid.in_text_region) in_region += flag;
  std::cout << "grid: " << grid.height << "x" << grid.width << " ("
            << in_region << " cells in text region)\n"
            << "instances: " << scenario.gts.size() << "  k: " << scenario.k
            << "  lambda: " << scenario.lambda << "\n"
            << "pairs: " << assignment.pairs.size() << "\n"
            << "total_cost: " << format_double17(assignment.total_cost) << "\n"
            << "complete: " << (assignment.complete ? "yes" : "no") << "\n";
  if (!assignment.unmatched_instances.empty()) {
    std::cout << "unmatched_instances:";
    for (int j : assignment.unmatched_instances) std::cout << ' ' << j;
    std::cout << "\n";
  }
  if (!opts.out_path.empty()) std::cout << "output: " << opts.out_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// inspect-basis

struct InspectOpts {
  std::string basis_path;
};

int cmd_inspect(const InspectOpts& opts) {
  const OrthanchorBasis basis = load_basis(opts.basis_path);
  std::cout << "n_vertices: " << basis.n_vertices << "\n"
            << "m: " << basis.m() << "\n"
            << "fit_method: " << to_string(basis.basis.method) << "\n"
            << "center: " << (basis.basis.flags.center ? "true" : "false") << "\n"
            << "normalize_scale: "
            << (basis.basis.flags.normalize_scale ? "true" : "false") << "\n"
            << "orthonormality_residual: "
            << format_double17(orthonormality_residual(basis.basis.u)) << "\n"
            << "matrix_hash: " << basis_matrix_hash(basis.basis.u) << "\n"
            << "corpus_id: " << basis.provenance.corpus_id << "\n"
            << "params: " << basis.provenance.params << "\n";
  return 0;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  } catch (const DataError& err) {
    std::cerr << "data error: " << err.what() << "\n";
    return 2;
  } catch (const NumericalError& err) {
    std::cerr << "numerical error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank contour representation toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  FitOpts fit_opts;
  CLI::App* fit = app.add_subcommand("fit", "fit a subspace basis on a corpus");
  add_common(fit, fit_opts);
  fit->add_option("--out-basis", fit_opts.out_basis, "basis JSON output")->required();
  fit->add_option("--trace", fit_opts.trace_path, "iteration trace CSV (fms only)");
  fit->callback([&] { exit_code = guarded([&] { return cmd_fit(fit_opts); }); });

  EncodeOpts encode_opts;
  CLI::App* encode = app.add_subcommand("encode", "encode annotation polygons");
  add_common(encode, encode_opts);
  encode->add_option("--basis", encode_opts.basis_path, "basis JSON")->required();
  encode->add_option("--input", encode_opts.input_path, "annotation JSONL")->required();
  encode->add_option("--out-codes", encode_opts.out_codes, "codes JSONL output")->required();
  encode->callback([&] { exit_code = guarded([&] { return cmd_encode(encode_opts); }); });

  DecodeOpts decode_opts;
  CLI::App* decode = app.add_subcommand("decode", "decode codes to polygons");
  add_common(decode, decode_opts);
  decode->add_option("--basis", decode_opts.basis_path, "basis JSON")->required();
  decode->add_option("--codes", decode_opts.codes_path, "codes JSONL")->required();
  decode->add_option("--out", decode_opts.out_path, "reconstructed JSONL output")->required();
  decode->callback([&] { exit_code = guarded([&] { return cmd_decode(decode_opts); }); });

  EvalOpts eval_opts;
  CLI::App* eval = app.add_subcommand("eval", "reconstruction quality report");
  add_common(eval, eval_opts);
  eval->add_option("--basis", eval_opts.basis_path, "basis JSON")->required();
  eval->add_option("--input", eval_opts.input_path, "annotation JSONL (else config corpus)");
  eval->add_option("--out-csv", eval_opts.out_csv, "report CSV output");
  eval->add_option("--out-json", eval_opts.out_json, "report JSON output");
  eval->add_option("--per-contour", eval_opts.per_contour, "per-contour IoU CSV");
  eval->add_option("--profile", eval_opts.profile_csv, "importance profile CSV");
  eval->add_flag("--with-runtime", eval_opts.with_runtime, "include wall-clock columns");
  eval->callback([&] { exit_code = guarded([&] { return cmd_eval(eval_opts); }); });

  HarnessOpts sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "reconstruction vs dimension");
  add_common(sweep, sweep_opts);
  sweep->add_option("--out-csv", sweep_opts.out_csv, "report CSV output");
  sweep->add_option("--out-json", sweep_opts.out_json, "report JSON output");
  sweep->add_flag("--with-runtime", sweep_opts.with_runtime, "include wall-clock columns");
  sweep->callback([&] { exit_code = guarded([&] { return cmd_sweep(sweep_opts); }); });

  HarnessOpts noise_opts;
  CLI::App* noise = app.add_subcommand("noise", "spike-noise robustness benchmark");
  add_common(noise, noise_opts);
  noise->add_option("--out-csv", noise_opts.out_csv, "report CSV output");
  noise->add_option("--out-json", noise_opts.out_json, "report JSON output");
  noise->add_flag("--with-runtime", noise_opts.with_runtime, "include wall-clock columns");
  noise->callback([&] { exit_code = guarded([&] { return cmd_noise(noise_opts); }); });

  HarnessOpts gen_opts;
  CLI::App* gen = app.add_subcommand("generalize", "held-out generalization check");
  add_common(gen, gen_opts);
  gen->add_option("--out-csv", gen_opts.out_csv, "report CSV output");
  gen->add_option("--out-json", gen_opts.out_json, "report JSON output");
  gen->add_flag("--with-runtime", gen_opts.with_runtime, "include wall-clock columns");
  gen->callback([&] { exit_code = guarded([&] { return cmd_generalize(gen_opts); }); });

  AssignOpts assign_opts;
  CLI::App* assign = app.add_subcommand("assign-sim", "matching on a simulated grid");
  add_common(assign, assign_opts);
  assign->add_option("--scenario", assign_opts.scenario_path, "scenario JSON")->required();
  assign->add_option("--out", assign_opts.out_path, "assignment JSON output");
  assign->callback([&] { exit_code = guarded([&] { return cmd_assign_sim(assign_opts); }); });

  InspectOpts inspect_opts;
  CLI::App* inspect = app.add_subcommand("inspect-basis", "print basis metadata");
  inspect->add_option("--basis", inspect_opts.basis_path, "basis JSON")->required();
  inspect->callback([&] { exit_code = guarded([&] { return cmd_inspect(inspect_opts); }); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 1;
  }
  return exit_code;
}
