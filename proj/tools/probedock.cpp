// probedock: run, batch and analyze docking simulations.
//
//   probedock run     [--config FILE] [--seed N] [--controller standard|proposed] [--set k=v]...
//   probedock batch   [--config FILE] [--seed N] [--n-runs N] [--set k=v]...
//   probedock analyze DIR [--out-dir DIR]
//
// Outputs land in <out-root>/<config-hash>_s<first>-<last>/, where out-root is --out-dir,
// else $PROBEDOCK_OUT_ROOT, else ./runs.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "probedock/analysis.hpp"
#include "probedock/config.hpp"
#include "probedock/format.hpp"
#include "probedock/harness.hpp"

namespace fs = std::filesystem;
using namespace probedock;

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kSimulationAbort = 2, kAnalysisError = 3 };

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_runs;
  std::string controller;
};

fs::path output_root(const CommonOptions& opt) {
  if (!opt.out_dir.empty()) return opt.out_dir;
  if (const char* env = std::getenv("PROBEDOCK_OUT_ROOT"); env && *env) return env;
  return "runs";
}

LoadedConfig load(const CommonOptions& opt, std::vector<std::string> extra) {
  std::vector<std::string> overrides = opt.overrides;
  overrides.insert(overrides.end(), extra.begin(), extra.end());
  if (opt.config_path.empty()) return parse_config(default_config_text(), overrides);
  return load_config_file(opt.config_path, overrides);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string run_stem(const RunRecord& r) { return "run_" + to_string(r.controller) + "_" + std::to_string(r.seed); }

void write_record(const fs::path& dir, const RunRecord& r) {
  std::ostringstream csv;
  write_run_csv(csv, r);
  write_text(dir / (run_stem(r) + ".csv"), csv.str());
  write_text(dir / (run_stem(r) + ".json"), run_to_json(r).dump(2) + "\n");
}

fs::path prepare_dir(const CommonOptions& opt, const RunConfig& config, std::uint64_t first, std::uint64_t last) {
  const fs::path dir =
      output_root(opt) / (config_hash(config) + "_s" + std::to_string(first) + "-" + std::to_string(last));
  fs::create_directories(dir);
  write_text(dir / "config.json", config_to_json(config).dump(2) + "\n");
  return dir;
}

int cmd_run(const CommonOptions& opt) {
  std::vector<std::string> extra;
  if (opt.seed) extra.push_back("seed=" + std::to_string(*opt.seed));
  if (!opt.controller.empty()) extra.push_back("controller=" + opt.controller);
  const LoadedConfig cfg = load(opt, extra);

  const RunRecord r = run_once(cfg.run);
  const fs::path dir = prepare_dir(opt, cfg.run, cfg.run.seed, cfg.run.seed);
  write_record(dir, r);
  std::cout << dir.string() << "\n";
  if (r.aborted) {
    std::cerr << "run aborted: " << r.abort_reason << "\n";
    return kSimulationAbort;
  }
  std::cout << to_string(r.controller) << " seed " << r.seed << ": docking error " << fmt_num(r.docking_error)
            << " m, " << (r.success ? "success" : "miss") << "\n";
  return kOk;
}

int cmd_batch(const CommonOptions& opt) {
  std::vector<std::string> extra;
  if (opt.seed) extra.push_back("batch.seed0=" + std::to_string(*opt.seed));
  if (opt.n_runs) extra.push_back("batch.n_runs=" + std::to_string(*opt.n_runs));
  if (!opt.controller.empty()) extra.push_back("controller=" + opt.controller);
  const LoadedConfig cfg = load(opt, extra);

  const BatchResult result = run_batch(cfg.run, cfg.batch);
  const std::uint64_t last = cfg.batch.seed0 + cfg.batch.n_runs - 1;
  const fs::path dir = prepare_dir(opt, cfg.run, cfg.batch.seed0, last);
  for (const auto& r : result.standard_runs) write_record(dir, r);
  for (const auto& r : result.proposed_runs) write_record(dir, r);
  write_text(dir / "summary.json", summary_to_json(result.summary).dump(2) + "\n");
  std::cout << dir.string() << "\n";
  print_summary(std::cout, result.summary);
  return kOk;
}

// analyze ------------------------------------------------------------------

struct CurveRecord {
  std::string name;
  double delta_R = 0.0;
  double docking_error = std::numeric_limits<double>::quiet_NaN();
  std::vector<TimedError> errors;
  std::vector<double> e_norm;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
  return out;
}

double parse_cell(const std::string& cell, const fs::path& file, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (used != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw AnalysisError(file.string() + ":" + std::to_string(line) + ": bad number '" + cell + "'");
  }
}

CurveRecord read_record(const fs::path& csv_path) {
  CurveRecord rec;
  rec.name = csv_path.stem().string();

  const fs::path json_path = fs::path(csv_path).replace_extension(".json");
  std::ifstream jin(json_path);
  if (!jin) throw AnalysisError("missing run record " + json_path.string());
  nlohmann::json j;
  try {
    jin >> j;
    rec.delta_R = j.at("delta_R_measured").get<double>();
    if (!j.at("docking_error").is_null()) rec.docking_error = j.at("docking_error").get<double>();
  } catch (const nlohmann::json::exception& ex) {
    throw AnalysisError("corrupt run record " + json_path.string() + ": " + ex.what());
  }

  std::ifstream in(csv_path);
  std::string line;
  if (!std::getline(in, line)) throw AnalysisError("empty record " + csv_path.string());
  const auto header = split_csv(line);
  const std::vector<std::string> needed{"t", "e_x", "e_y", "e_z", "e_dot_x", "e_dot_y", "e_dot_z", "e_norm"};
  std::vector<std::size_t> col;
  for (const auto& name : needed) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw AnalysisError(csv_path.string() + ": missing column " + name);
    col.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw AnalysisError(csv_path.string() + ":" + std::to_string(lineno) + ": wrong column count");
    }
    double v[8];
    for (std::size_t i = 0; i < 8; ++i) v[i] = parse_cell(cells[col[i]], csv_path, lineno);
    TimedError te;
    te.t = v[0];
    te.E.e = Vec3(v[1], v[2], v[3]);
    te.E.e_dot = Vec3(v[4], v[5], v[6]);
    rec.errors.push_back(te);
    rec.e_norm.push_back(v[7]);
  }
  if (rec.errors.empty()) throw AnalysisError("record has no samples: " + csv_path.string());
  return rec;
}

int cmd_analyze(const std::string& records_dir, const std::string& out_dir) {
  const fs::path dir(records_dir);
  if (!fs::is_directory(dir)) throw AnalysisError("not a directory: " + records_dir);

  std::vector<fs::path> csvs;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && name.rfind("run_", 0) == 0 && entry.path().extension() == ".csv") {
      csvs.push_back(entry.path());
    }
  }
  if (csvs.empty()) throw AnalysisError("no run records in " + records_dir);
  std::sort(csvs.begin(), csvs.end());

  const fs::path config_path = dir / "config.json";
  if (!fs::exists(config_path)) throw AnalysisError("missing " + config_path.string());
  RunConfig config;
  try {
    config = load_config_file(config_path.string()).run;
  } catch (const ConfigError& ex) {
    throw AnalysisError(std::string("corrupt config.json: ") + ex.what());
  }
  const LyapunovParams lyap = make_lyapunov_params(config.gains);

  std::vector<CurveRecord> records;
  for (const auto& p : csvs) records.push_back(read_record(p));

  double max_delta_R = 0.0;
  for (const auto& r : records) max_delta_R = std::max(max_delta_R, r.delta_R);
  const InvariantSetBound aggregate = invariant_set_level(config.gains, {config.bounds.delta_D, max_delta_R});

  nlohmann::json runs = nlohmann::json::array();
  std::size_t compliant = 0;
  for (const auto& r : records) {
    const InvariantSetBound bound = invariant_set_level(config.gains, {config.bounds.delta_D, r.delta_R});
    BoundednessVerdict verdict;
    try {
      verdict = boundedness_verdict(r.errors, bound, lyap);
    } catch (const std::invalid_argument& ex) {
      throw AnalysisError(r.name + ": " + ex.what());
    }
    const bool docking_ok = !std::isfinite(r.docking_error) || r.docking_error <= bound.e_norm_ceiling;
    const bool ok = verdict.within_ceiling() && docking_ok;
    if (ok) ++compliant;
    nlohmann::json jr;
    jr["run"] = r.name;
    jr["delta_R_measured"] = r.delta_R;
    jr["bound"] = bound;
    jr["verdict"] = verdict;
    jr["docking_error"] = std::isfinite(r.docking_error) ? nlohmann::json(r.docking_error) : nlohmann::json();
    jr["compliant"] = ok;
    runs.push_back(jr);
  }

  nlohmann::json report;
  report["config_hash"] = config_hash(config);
  report["delta_D"] = config.bounds.delta_D;
  report["max_delta_R_measured"] = max_delta_R;
  report["aggregate_bound"] = aggregate;
  report["runs_total"] = records.size();
  report["runs_compliant"] = compliant;
  report["compliance_rate"] = static_cast<double>(compliant) / static_cast<double>(records.size());
  report["runs"] = runs;

  const fs::path out = out_dir.empty() ? dir : fs::path(out_dir);
  fs::create_directories(out);
  write_text(out / "bound_report.json", report.dump(2) + "\n");

  // One e_norm column per run plus the constant ceiling.
  std::ostringstream curves;
  curves << "t";
  for (const auto& r : records) curves << "," << r.name;
  curves << ",ceiling\n";
  std::size_t longest = 0;
  const CurveRecord* time_source = nullptr;
  for (const auto& r : records) {
    if (r.errors.size() > longest) {
      longest = r.errors.size();
      time_source = &r;
    }
  }
  const std::string ceiling = fmt_num(aggregate.e_norm_ceiling);
  for (std::size_t i = 0; i < longest; ++i) {
    curves << fmt_num(time_source->errors[i].t);
    for (const auto& r : records) {
      curves << ",";
      if (i < r.e_norm.size()) curves << fmt_num(r.e_norm[i]);
    }
    curves << "," << ceiling << "\n";
  }
  write_text(out / "e_norm_curves.csv", curves.str());

  std::cout << "bound compliance: " << compliant << "/" << records.size() << " runs, ceiling " << ceiling
            << " m (delta_D " << fmt_num(config.bounds.delta_D) << ", max delta_R " << fmt_num(max_delta_R) << ")\n";
  return kOk;
}

void add_config_flags(CLI::App* sub, CommonOptions& opt) {
  sub->add_option("--config", opt.config_path, "YAML config file (built-in defaults if omitted)");
  sub->add_option("--out-dir", opt.out_dir, "Output root (default $PROBEDOCK_OUT_ROOT or ./runs)");
  sub->add_option("--set", opt.overrides, "Override a config key, e.g. gains.Kp.x=0.5")->take_all();
  sub->add_option("--controller", opt.controller, "standard or proposed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Helicopter probe-and-drogue docking simulator"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::uint64_t seed = 0;
  std::size_t n_runs = 0;

  auto* run = app.add_subcommand("run", "Simulate one docking approach");
  add_config_flags(run, opt);
  run->add_option("--seed", seed, "Run seed");

  auto* batch = app.add_subcommand("batch", "Paired Monte Carlo batch over both controllers");
  add_config_flags(batch, opt);
  batch->add_option("--seed", seed, "First seed (seeds run seed..seed+n-1)");
  batch->add_option("--n-runs", n_runs, "Runs per controller");

  std::string records_dir;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Bound-compliance report over a records directory");
  analyze->add_option("dir", records_dir, "Directory written by run or batch")->required();
  analyze->add_option("--out-dir", analyze_out, "Where to write the report (default: the records directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  if (run->count("--seed") || batch->count("--seed")) opt.seed = seed;
  if (batch->count("--n-runs")) opt.n_runs = n_runs;

  try {
    if (*run) return cmd_run(opt);
    if (*batch) return cmd_batch(opt);
    return cmd_analyze(records_dir, analyze_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis error: " << e.what() << "\n";
    return kAnalysisError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return *analyze ? kAnalysisError : kSimulationAbort;
  }
}
