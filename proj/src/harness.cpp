#include "probedock/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "probedock/format.hpp"

namespace probedock {

void RunConfig::validate() const {
  plant.validate();
  gains.validate();
  if (!(dt > 0.0) || dt > kMaxTimeStep) throw std::invalid_argument("simulation.dt must lie in (0, 0.05]");
  if (!(approach_duration > 0.0)) throw std::invalid_argument("reference.approach_duration must be positive");
  if (!(horizon > approach_duration)) {
    throw std::invalid_argument("simulation.horizon must exceed reference.approach_duration");
  }
  if (!(docking_tolerance > 0.0)) throw std::invalid_argument("simulation.docking_tolerance must be positive");
  if (initial_offset_range < 0.0) throw std::invalid_argument("helicopter.initial_offset_range must be >= 0");
  if (wind_range_kt < 0.0) throw std::invalid_argument("drogue.wind_range_kt must be >= 0");
  if (bounds.delta_D < 0.0 || bounds.delta_R < 0.0) throw std::invalid_argument("bounds must be non-negative");
  if (!(geometry.x_bar.allFinite())) throw std::invalid_argument("geometry.x_bar must be finite");
}

RunDraws draw_run(const RunConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RunDraws d;
  for (int i = 0; i < 3; ++i) d.initial_offset(i) = config.initial_offset_range * (2.0 * unit(rng) - 1.0);
  d.wind.magnitude_kt = config.wind_range_kt * (2.0 * unit(rng) - 1.0);
  d.wind.direction_rad = 2.0 * std::numbers::pi * unit(rng);
  d.drogue_seed = rng();
  return d;
}

ClosureSchedule nominal_schedule(const RunConfig& config) {
  ClosureSchedule s;
  const Vec3 probe0 = config.helicopter_initial + rotation_matrix(config.plant.trim(0.0)) * config.geometry.x_bar;
  s.initial_closure = probe0 - config.drogue_initial;
  s.duration = config.approach_duration;
  return s;
}

RunRecord run_once(const RunConfig& config) {
  config.validate();
  RunRecord rec;
  rec.controller = config.controller;
  rec.seed = config.seed;
  rec.draws = draw_run(config);

  const DroguePerturbation perturbation(rec.draws.wind, config.bounds, rec.draws.drogue_seed, config.perturbation);
  const ClosureSchedule schedule = nominal_schedule(config);
  DrogueState drogue_initial;
  drogue_initial.position = config.drogue_initial;
  drogue_initial.velocity = Vec3(config.plant.tanker_speed, 0.0, 0.0);

  HelicopterState state;
  state.position = config.helicopter_initial + rec.draws.initial_offset;
  state.velocity = Vec3(config.plant.tanker_speed, 0.0, 0.0);
  state.attitude = config.plant.trim(0.0);
  double psi_c = state.attitude.psi;

  const auto steps = static_cast<std::size_t>(std::llround(config.approach_duration / config.dt));
  const Vec3 planned_lever = rotation_matrix(config.plant.trim(0.0)) * config.geometry.x_bar;
  std::vector<Vec3> lever_residual;
  lever_residual.reserve(steps + 1);
  std::vector<TimedError> errors;
  errors.reserve(steps + 1);
  if (config.record_series) rec.series.reserve(steps + 1);

  try {
    for (std::size_t k = 0;; ++k) {
      const double t = static_cast<double>(k) * config.dt;
      const DrogueState drogue = perturbed_trajectory(t, config.plant, drogue_initial, perturbation);
      const ReferenceSample ref = reference_at(t, schedule, config.plant, drogue_initial, config.geometry);
      const Vec3 probe = probe_position(state, config.geometry);
      const Vec3 probe_vel = probe_velocity(state, config.geometry);

      ErrorState E;
      E.e = (ref.probe_position - ref.drogue_position) - (probe - drogue.position);
      E.e_dot = (ref.probe_velocity - ref.drogue_velocity) - (probe_vel - drogue.velocity);
      errors.push_back({t, E});
      lever_residual.push_back(rotation_matrix(state.attitude) * config.geometry.x_bar - planned_lever);
      if (config.record_series) rec.series.push_back({t, state, probe, drogue, E});

      if (k == steps) {
        rec.contact_time = t;
        rec.docking_error = (probe - drogue.position).norm();
        break;
      }
      const AccelCommand cmd =
          saturate(command(config.controller, state, config.geometry, drogue, ref, config.gains), config.plant);
      const Attitude<double> att_cmd = invert_to_attitude(cmd, psi_c, config.plant);
      state = step(state, cmd, att_cmd, config.dt, config.plant);
      psi_c += cmd.psi_dot * config.dt;
      if (!state.finite()) throw std::runtime_error("non-finite helicopter state");
    }
  } catch (const std::exception& ex) {
    rec.aborted = true;
    rec.abort_reason = ex.what();
  }

  rec.success = !rec.aborted && rec.docking_error <= config.docking_tolerance;

  const double inv_dt2 = 1.0 / (config.dt * config.dt);
  for (std::size_t k = 1; k + 1 < lever_residual.size(); ++k) {
    const Vec3 second = (lever_residual[k + 1] - 2.0 * lever_residual[k] + lever_residual[k - 1]) * inv_dt2;
    rec.delta_R_measured = std::max(rec.delta_R_measured, second.norm());
  }
  UncertaintyBounds measured = config.bounds;
  measured.delta_R = rec.delta_R_measured;
  rec.bound = invariant_set_level(config.gains, measured);
  if (!errors.empty()) rec.verdict = boundedness_verdict(errors, rec.bound, make_lyapunov_params(config.gains));
  return rec;
}

std::uint64_t independent_seed(std::uint64_t seed) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

ControllerSummary summarize(ControllerKind kind, const std::vector<RunRecord>& runs, double docking_tolerance) {
  (void)docking_tolerance;
  ControllerSummary s;
  s.controller = kind;
  s.runs = runs.size();
  std::vector<double> errs;
  std::size_t successes = 0;
  for (const auto& r : runs) {
    if (r.success) ++successes;
    if (!r.aborted) errs.push_back(r.docking_error);
    if (r.verdict.within_ceiling()) ++s.bound_compliant_runs;
    s.max_delta_R_measured = std::max(s.max_delta_R_measured, r.delta_R_measured);
  }
  s.completed = errs.size();
  s.success_rate = runs.empty() ? 0.0 : static_cast<double>(successes) / static_cast<double>(runs.size());
  if (!errs.empty()) {
    double sum = 0.0;
    for (double e : errs) sum += e;
    s.mean_docking_error = sum / static_cast<double>(errs.size());
    if (errs.size() > 1) {
      double ss = 0.0;
      for (double e : errs) ss += (e - s.mean_docking_error) * (e - s.mean_docking_error);
      s.std_docking_error = std::sqrt(ss / static_cast<double>(errs.size() - 1));
    }
  }
  return s;
}

BatchResult run_batch(const RunConfig& config_template, const BatchOptions& options) {
  if (options.n_runs < 1) throw std::invalid_argument("batch requires n_runs >= 1");
  config_template.validate();
  const std::size_t n = options.n_runs;
  std::vector<RunRecord> records(2 * n);

  auto task = [&](std::size_t i) {
    RunConfig cfg = config_template;
    const std::uint64_t seed = options.seed0 + (i % n);
    cfg.controller = i < n ? ControllerKind::kStandard : ControllerKind::kProposed;
    cfg.seed = (i >= n && !options.paired) ? independent_seed(seed) : seed;
    records[i] = run_once(cfg);
    records[i].seed = seed;
  };

  unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, records.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < records.size(); ++i) task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < records.size(); i = next++) task(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  BatchResult out;
  out.standard_runs.assign(std::make_move_iterator(records.begin()),
                           std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(n)));
  out.proposed_runs.assign(std::make_move_iterator(records.begin() + static_cast<std::ptrdiff_t>(n)),
                           std::make_move_iterator(records.end()));
  BatchSummary& s = out.summary;
  s.n_runs = n;
  s.seed0 = options.seed0;
  s.paired = options.paired;
  s.docking_tolerance = config_template.docking_tolerance;
  s.standard = summarize(ControllerKind::kStandard, out.standard_runs, config_template.docking_tolerance);
  s.proposed = summarize(ControllerKind::kProposed, out.proposed_runs, config_template.docking_tolerance);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = out.standard_runs[i];
    const auto& b = out.proposed_runs[i];
    if (!b.aborted && (a.aborted || b.docking_error <= a.docking_error)) ++s.proposed_dominates;
  }
  return out;
}

namespace {

nlohmann::json vec_json(const Vec3& v) { return nlohmann::json{{"x", v(0)}, {"y", v(1)}, {"z", v(2)}}; }

nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["seed"] = c.seed;
  j["controller"] = to_string(c.controller);
  j["simulation"] = {{"dt", c.dt}, {"horizon", c.horizon}, {"docking_tolerance", c.docking_tolerance}};
  j["plant"] = {{"g", c.plant.g},
                {"theta_trim", c.plant.theta_trim},
                {"phi_trim", c.plant.phi_trim},
                {"tanker_speed", c.plant.tanker_speed},
                {"inner_loop_tau", c.plant.inner_loop_tau},
                {"inner_loop_mode", to_string(c.plant.inner_loop_mode)},
                {"accel_limit", vec_json(c.plant.accel_limit)}};
  j["gains"] = {{"Kp", vec_json(c.gains.kp)}, {"Kd", vec_json(c.gains.kd)}};
  j["geometry"] = {{"x_bar", vec_json(c.geometry.x_bar)}};
  j["bounds"] = {{"delta_D", c.bounds.delta_D}, {"delta_R", c.bounds.delta_R}};
  j["drogue"] = {{"initial_position", vec_json(c.drogue_initial)},
                 {"wind_range_kt", c.wind_range_kt},
                 {"components_per_axis", c.perturbation.components_per_axis},
                 {"min_frequency_hz", c.perturbation.min_frequency_hz},
                 {"max_frequency_hz", c.perturbation.max_frequency_hz},
                 {"full_scale_wind_kt", c.perturbation.full_scale_wind_kt},
                 {"vertical_fraction", c.perturbation.vertical_fraction}};
  j["helicopter"] = {{"initial_position", vec_json(c.helicopter_initial)},
                     {"initial_offset_range", c.initial_offset_range}};
  j["reference"] = {{"approach_duration", c.approach_duration}};
  return j;
}

std::string config_hash(const RunConfig& config) {
  nlohmann::json j = config_to_json(config);
  j.erase("seed");
  j.erase("controller");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 12);
}

nlohmann::json run_to_json(const RunRecord& r) {
  nlohmann::json j;
  j["controller"] = to_string(r.controller);
  j["seed"] = r.seed;
  j["initial_offset"] = vec_json(r.draws.initial_offset);
  j["wind"] = {{"magnitude_kt", r.draws.wind.magnitude_kt}, {"direction_rad", r.draws.wind.direction_rad}};
  j["drogue_seed"] = r.draws.drogue_seed;
  j["aborted"] = r.aborted;
  j["abort_reason"] = r.abort_reason;
  j["contact_time"] = r.contact_time;
  j["docking_error"] = finite_or_null(r.docking_error);
  j["success"] = r.success;
  j["delta_R_measured"] = r.delta_R_measured;
  j["bound"] = r.bound;
  j["verdict"] = r.verdict;
  return j;
}

namespace {

nlohmann::json controller_json(const ControllerSummary& s) {
  return nlohmann::json{{"controller", to_string(s.controller)},
                        {"runs", s.runs},
                        {"completed", s.completed},
                        {"mean_docking_error", s.mean_docking_error},
                        {"std_docking_error", s.std_docking_error},
                        {"success_rate", s.success_rate},
                        {"bound_compliant_runs", s.bound_compliant_runs},
                        {"max_delta_R_measured", s.max_delta_R_measured}};
}

}  // namespace

nlohmann::json summary_to_json(const BatchSummary& s) {
  return nlohmann::json{{"n_runs", s.n_runs},
                        {"seed0", s.seed0},
                        {"paired", s.paired},
                        {"docking_tolerance", s.docking_tolerance},
                        {"standard", controller_json(s.standard)},
                        {"proposed", controller_json(s.proposed)},
                        {"proposed_dominates", s.proposed_dominates}};
}

std::string run_csv_header() {
  return "t,X,Y,Z,X_dot,Y_dot,Z_dot,phi,theta,psi,phi_dot,theta_dot,psi_dot,X_P,Y_P,Z_P,"
         "X_D,Y_D,Z_D,u_D,v_D,w_D,e_x,e_y,e_z,e_dot_x,e_dot_y,e_dot_z,e_norm";
}

void write_run_csv(std::ostream& os, const RunRecord& record) {
  os << run_csv_header() << '\n';
  for (const auto& s : record.series) {
    const auto& st = s.state;
    const double cols[] = {s.t,
                           st.position(0), st.position(1), st.position(2),
                           st.velocity(0), st.velocity(1), st.velocity(2),
                           st.attitude.phi, st.attitude.theta, st.attitude.psi,
                           st.rates.phi_dot, st.rates.theta_dot, st.rates.psi_dot,
                           s.probe(0), s.probe(1), s.probe(2),
                           s.drogue.position(0), s.drogue.position(1), s.drogue.position(2),
                           s.drogue.velocity(0), s.drogue.velocity(1), s.drogue.velocity(2),
                           s.error.e(0), s.error.e(1), s.error.e(2),
                           s.error.e_dot(0), s.error.e_dot(1), s.error.e_dot(2),
                           s.error.e.norm()};
    bool first = true;
    for (double v : cols) {
      if (!first) os << ',';
      os << fmt_num(v);
      first = false;
    }
    os << '\n';
  }
}

void print_summary(std::ostream& os, const BatchSummary& s) {
  char line[160];
  std::snprintf(line, sizeof(line), "Results from %zu simulated docking maneuvers (%s seeds, tolerance %.3g m)\n",
                s.n_runs, s.paired ? "paired" : "independent", s.docking_tolerance);
  os << line;
  std::snprintf(line, sizeof(line), "%-28s %12s %12s\n", "Criterion", "Standard", "Proposed");
  os << line;
  std::snprintf(line, sizeof(line), "%-28s %12.4f %12.4f\n", "Mean docking error (m)", s.standard.mean_docking_error,
                s.proposed.mean_docking_error);
  os << line;
  std::snprintf(line, sizeof(line), "%-28s %12.4f %12.4f\n", "Docking error St. dev. (m)",
                s.standard.std_docking_error, s.proposed.std_docking_error);
  os << line;
  std::snprintf(line, sizeof(line), "%-28s %11.0f%% %11.0f%%\n", "Docking success rate",
                100.0 * s.standard.success_rate, 100.0 * s.proposed.success_rate);
  os << line;
  std::snprintf(line, sizeof(line), "%-28s %12zu %12zu\n", "Bound-compliant runs", s.standard.bound_compliant_runs,
                s.proposed.bound_compliant_runs);
  os << line;
  std::snprintf(line, sizeof(line), "Proposed error <= standard in %zu of %zu pairs\n", s.proposed_dominates,
                s.n_runs);
  os << line;
}

}  // namespace probedock
