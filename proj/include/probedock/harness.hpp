// Closed-loop docking runs and the paired-seed Monte Carlo batch.

#ifndef PROBEDOCK_HARNESS_HPP
#define PROBEDOCK_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "probedock/analysis.hpp"
#include "probedock/controllers.hpp"
#include "probedock/drogue.hpp"
#include "probedock/plant.hpp"
#include "probedock/reference.hpp"
#include "probedock/state.hpp"

namespace probedock {

struct RunConfig {
  std::uint64_t seed = 1;
  ControllerKind controller = ControllerKind::kProposed;
  PlantParams plant{};
  ControllerGains gains{};
  ProbeGeometry geometry{Vec3(3.0, 0.0, 0.0)};
  UncertaintyBounds bounds{};
  PerturbationParams perturbation{};

  /// Nominal CG start; each axis is offset by U[-initial_offset_range, +initial_offset_range].
  Vec3 helicopter_initial{0.0, 0.0, -1000.0};
  double initial_offset_range = 0.2;
  Vec3 drogue_initial{5.0, 0.0, -1000.0};
  /// Crosswind magnitude is drawn from U[-wind_range_kt, +wind_range_kt].
  double wind_range_kt = 5.0;

  double approach_duration = 30.0;
  double docking_tolerance = 0.2;
  double horizon = 35.0;
  double dt = 0.01;

  /// Keep the full time series in the RunRecord.
  bool record_series = true;

  void validate() const;
};

/// Per-run random draws, all derived from the run seed.
struct RunDraws {
  Vec3 initial_offset{Vec3::Zero()};
  WindCondition wind{};
  std::uint64_t drogue_seed = 0;
};
RunDraws draw_run(const RunConfig& config);

/// Probe-to-drogue closure that the helicopter starts from at the nominal (un-offset) CG.
ClosureSchedule nominal_schedule(const RunConfig& config);

struct RunSample {
  double t = 0.0;
  HelicopterState state;
  Vec3 probe{Vec3::Zero()};
  DrogueState drogue;
  ErrorState error;
};

struct RunRecord {
  ControllerKind controller = ControllerKind::kProposed;
  std::uint64_t seed = 0;
  RunDraws draws;
  std::vector<RunSample> series;

  bool aborted = false;
  std::string abort_reason;
  double contact_time = 0.0;
  double docking_error = std::numeric_limits<double>::quiet_NaN();
  bool success = false;

  /// max_t ||(R_ddot_ref - R_ddot) x_bar|| from second differences of the attitude history.
  double delta_R_measured = 0.0;
  InvariantSetBound bound;
  BoundednessVerdict verdict;
};

RunRecord run_once(const RunConfig& config);

struct ControllerSummary {
  ControllerKind controller = ControllerKind::kProposed;
  std::size_t runs = 0;
  std::size_t completed = 0;
  double mean_docking_error = 0.0;
  double std_docking_error = 0.0;
  double success_rate = 0.0;
  std::size_t bound_compliant_runs = 0;
  double max_delta_R_measured = 0.0;
};

struct BatchSummary {
  std::size_t n_runs = 0;
  std::uint64_t seed0 = 0;
  bool paired = true;
  double docking_tolerance = 0.0;
  ControllerSummary standard;
  ControllerSummary proposed;
  /// Pairs in which the proposed docking error is no larger than the standard one.
  std::size_t proposed_dominates = 0;
};

struct BatchResult {
  BatchSummary summary;
  std::vector<RunRecord> standard_runs;
  std::vector<RunRecord> proposed_runs;
};

struct BatchOptions {
  std::size_t n_runs = 50;
  std::uint64_t seed0 = 1;
  /// Paired: both controllers see identical draws per seed. Independent: the proposed run
  /// draws from a decorrelated seed.
  bool paired = true;
  /// 0 selects std::thread::hardware_concurrency().
  unsigned workers = 0;
};

BatchResult run_batch(const RunConfig& config_template, const BatchOptions& options);

ControllerSummary summarize(ControllerKind kind, const std::vector<RunRecord>& runs, double docking_tolerance);

/// Seed used by the proposed controller when randomisation is independent.
std::uint64_t independent_seed(std::uint64_t seed);

// Serialisation -------------------------------------------------------------

nlohmann::json config_to_json(const RunConfig& config);
/// FNV-1a hash of the canonical config JSON, seed and controller excluded.
std::string config_hash(const RunConfig& config);

nlohmann::json run_to_json(const RunRecord& record);
nlohmann::json summary_to_json(const BatchSummary& summary);

/// Header for the per-run CSV.
std::string run_csv_header();
void write_run_csv(std::ostream& os, const RunRecord& record);

/// Plain-text comparison table.
void print_summary(std::ostream& os, const BatchSummary& summary);

}  // namespace probedock

#endif  // PROBEDOCK_HARNESS_HPP
