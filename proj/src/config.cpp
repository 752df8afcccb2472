#include "probedock/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace probedock {

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error(line > 0 ? key + " (line " + std::to_string(line) + "): " + message : key + ": " + message),
      key_(std::move(key)),
      line_(line) {}

std::string default_config_text() {
  return R"(# Default docking scenario.
seed: 1
controller: proposed
simulation:
  dt: 0.01
  horizon: 35.0
  docking_tolerance: 0.2
plant:
  g: 9.81
  theta_trim: -0.035
  phi_trim: -0.02
  tanker_speed: 56.58
  inner_loop_tau: 0.3
  inner_loop_mode: first-order-lag
  accel_limit: {x: 5.0, y: 5.0, z: 5.0}
gains:
  Kp: {x: 0.41, y: 0.37, z: 35.0}
  Kd: {x: 0.75, y: 0.75, z: 8.8}
geometry:
  x_bar: {x: 3.0, y: 0.0, z: 0.0}
bounds:
  delta_D: 0.18
  delta_R: 0.51
drogue:
  initial_position: {x: 5.0, y: 0.0, z: -1000.0}
  wind_range_kt: 5.0
  components_per_axis: 3
  min_frequency_hz: 0.1
  max_frequency_hz: 0.8
  full_scale_wind_kt: 5.0
  vertical_fraction: 0.3
helicopter:
  initial_position: {x: 0.0, y: 0.0, z: -1000.0}
  initial_offset_range: 0.2
reference:
  approach_duration: 30.0
batch:
  n_runs: 50
  seed0: 1
  paired: true
  workers: 0
)";
}

namespace {

int line_of(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  return m.is_null() ? 0 : m.line + 1;
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

class Reader {
 public:
  explicit Reader(YAML::Node root) : root_(std::move(root)) {}

  // Checks that every key of the map at `path` is in `allowed`.
  void check_keys(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) const {
    if (!node) return;
    if (!node.IsMap()) throw ConfigError(path.empty() ? "<root>" : path, line_of(node), "expected a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) throw ConfigError(join(path, key), line_of(kv.first), "unknown key");
    }
  }

  template <typename T>
  T scalar(const YAML::Node& parent, const std::string& path, const std::string& key, const T& fallback) const {
    if (!parent) return fallback;
    const YAML::Node n = parent[key];
    if (!n) return fallback;
    return convert<T>(n, join(path, key));
  }

  template <typename T>
  T convert(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) throw ConfigError(key, line_of(n), "expected a scalar value");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(key, line_of(n), "cannot convert '" + n.Scalar() + "'");
    }
  }

  Vec3 vec3(const YAML::Node& parent, const std::string& path, const std::string& key, const Vec3& fallback,
            bool required = false) const {
    const std::string full = join(path, key);
    if (!parent) {
      if (required) throw ConfigError(full, 0, "missing required key");
      return fallback;
    }
    const YAML::Node n = parent[key];
    if (!n) {
      if (required) throw ConfigError(full, line_of(parent), "missing required key");
      return fallback;
    }
    Vec3 out = fallback;
    if (n.IsSequence()) {
      if (n.size() != 3) throw ConfigError(full, line_of(n), "expected three components");
      for (int i = 0; i < 3; ++i) out(i) = convert<double>(n[i], full + "[" + std::to_string(i) + "]");
      return out;
    }
    check_keys(n, full, {"x", "y", "z"});
    static const char* names[] = {"x", "y", "z"};
    for (int i = 0; i < 3; ++i) {
      const YAML::Node c = n[names[i]];
      if (!c) {
        if (required) throw ConfigError(join(full, names[i]), line_of(n), "missing required key");
        continue;
      }
      out(i) = convert<double>(c, join(full, names[i]));
    }
    return out;
  }

  const YAML::Node& root() const { return root_; }

 private:
  YAML::Node root_;
};

void apply_override(YAML::Node root, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, 0, "override must have the form dotted.key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError(path, 0, "empty path component in override");
    parts.push_back(part);
  }

  YAML::Node cur = root;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    const bool last = i + 1 == parts.size();
    if (cur.IsSequence()) {
      static const std::map<std::string, std::size_t> index{{"x", 0}, {"y", 1}, {"z", 2}, {"0", 0}, {"1", 1}, {"2", 2}};
      const auto it = index.find(part);
      if (it == index.end() || it->second >= cur.size()) throw ConfigError(path, 0, "bad sequence index '" + part + "'");
      if (last) {
        cur[it->second] = YAML::Load(value);
        return;
      }
      YAML::Node next = cur[it->second];
      cur.reset(next);
      continue;
    }
    if (last) {
      cur[part] = YAML::Load(value);
      return;
    }
    if (!cur[part] || cur[part].IsNull()) cur[part] = YAML::Node(YAML::NodeType::Map);
    YAML::Node next = cur[part];
    cur.reset(next);
  }
}

LoadedConfig build(const YAML::Node& root) {
  const Reader r(root);
  r.check_keys(root, "", {"seed", "controller", "simulation", "plant", "gains", "geometry", "bounds", "drogue",
                          "helicopter", "reference", "batch"});
  LoadedConfig out;
  RunConfig& c = out.run;

  c.seed = r.scalar<std::uint64_t>(root, "", "seed", c.seed);
  const std::string controller = r.scalar<std::string>(root, "", "controller", to_string(c.controller));
  try {
    c.controller = controller_kind_from_string(controller);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("controller", line_of(root["controller"]), ex.what());
  }

  const YAML::Node sim = root["simulation"];
  r.check_keys(sim, "simulation", {"dt", "horizon", "docking_tolerance"});
  c.dt = r.scalar(sim, "simulation", "dt", c.dt);
  c.horizon = r.scalar(sim, "simulation", "horizon", c.horizon);
  c.docking_tolerance = r.scalar(sim, "simulation", "docking_tolerance", c.docking_tolerance);

  const YAML::Node plant = root["plant"];
  r.check_keys(plant, "plant",
               {"g", "theta_trim", "phi_trim", "tanker_speed", "inner_loop_tau", "inner_loop_mode", "accel_limit"});
  c.plant.g = r.scalar(plant, "plant", "g", c.plant.g);
  c.plant.theta_trim = r.scalar(plant, "plant", "theta_trim", c.plant.theta_trim);
  c.plant.phi_trim = r.scalar(plant, "plant", "phi_trim", c.plant.phi_trim);
  c.plant.tanker_speed = r.scalar(plant, "plant", "tanker_speed", c.plant.tanker_speed);
  c.plant.inner_loop_tau = r.scalar(plant, "plant", "inner_loop_tau", c.plant.inner_loop_tau);
  const std::string mode = r.scalar<std::string>(plant, "plant", "inner_loop_mode", to_string(c.plant.inner_loop_mode));
  try {
    c.plant.inner_loop_mode = inner_loop_mode_from_string(mode);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError("plant.inner_loop_mode", line_of(plant["inner_loop_mode"]), ex.what());
  }
  c.plant.accel_limit = r.vec3(plant, "plant", "accel_limit", c.plant.accel_limit);

  const YAML::Node gains = root["gains"];
  if (!gains) throw ConfigError("gains.Kp", line_of(root), "missing required key");
  r.check_keys(gains, "gains", {"Kp", "Kd"});
  c.gains.kp = r.vec3(gains, "gains", "Kp", c.gains.kp, true);
  c.gains.kd = r.vec3(gains, "gains", "Kd", c.gains.kd, true);

  const YAML::Node geometry = root["geometry"];
  r.check_keys(geometry, "geometry", {"x_bar"});
  c.geometry.x_bar = r.vec3(geometry, "geometry", "x_bar", c.geometry.x_bar);

  const YAML::Node bounds = root["bounds"];
  r.check_keys(bounds, "bounds", {"delta_D", "delta_R"});
  c.bounds.delta_D = r.scalar(bounds, "bounds", "delta_D", c.bounds.delta_D);
  c.bounds.delta_R = r.scalar(bounds, "bounds", "delta_R", c.bounds.delta_R);

  const YAML::Node drogue = root["drogue"];
  r.check_keys(drogue, "drogue",
               {"initial_position", "wind_range_kt", "components_per_axis", "min_frequency_hz", "max_frequency_hz",
                "full_scale_wind_kt", "vertical_fraction"});
  c.drogue_initial = r.vec3(drogue, "drogue", "initial_position", c.drogue_initial);
  c.wind_range_kt = r.scalar(drogue, "drogue", "wind_range_kt", c.wind_range_kt);
  c.perturbation.components_per_axis =
      r.scalar(drogue, "drogue", "components_per_axis", c.perturbation.components_per_axis);
  c.perturbation.min_frequency_hz = r.scalar(drogue, "drogue", "min_frequency_hz", c.perturbation.min_frequency_hz);
  c.perturbation.max_frequency_hz = r.scalar(drogue, "drogue", "max_frequency_hz", c.perturbation.max_frequency_hz);
  c.perturbation.full_scale_wind_kt =
      r.scalar(drogue, "drogue", "full_scale_wind_kt", c.perturbation.full_scale_wind_kt);
  c.perturbation.vertical_fraction = r.scalar(drogue, "drogue", "vertical_fraction", c.perturbation.vertical_fraction);

  const YAML::Node heli = root["helicopter"];
  r.check_keys(heli, "helicopter", {"initial_position", "initial_offset_range"});
  c.helicopter_initial = r.vec3(heli, "helicopter", "initial_position", c.helicopter_initial);
  c.initial_offset_range = r.scalar(heli, "helicopter", "initial_offset_range", c.initial_offset_range);

  const YAML::Node ref = root["reference"];
  r.check_keys(ref, "reference", {"approach_duration"});
  c.approach_duration = r.scalar(ref, "reference", "approach_duration", c.approach_duration);

  const YAML::Node batch = root["batch"];
  r.check_keys(batch, "batch", {"n_runs", "seed0", "paired", "workers"});
  out.batch.n_runs = r.scalar<std::size_t>(batch, "batch", "n_runs", out.batch.n_runs);
  out.batch.seed0 = r.scalar<std::uint64_t>(batch, "batch", "seed0", out.batch.seed0);
  out.batch.paired = r.scalar(batch, "batch", "paired", out.batch.paired);
  out.batch.workers = r.scalar(batch, "batch", "workers", out.batch.workers);

  // Map validation failures back onto the config key they came from.
  try {
    c.validate();
  } catch (const std::invalid_argument& ex) {
    const std::string msg = ex.what();
    const auto space = msg.find(' ');
    throw ConfigError(space == std::string::npos ? "<config>" : msg.substr(0, space), 0, msg);
  }
  if (out.batch.n_runs < 1) throw ConfigError("batch.n_runs", line_of(batch["n_runs"]), "must be >= 1");
  return out;
}

}  // namespace

LoadedConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& ex) {
    throw ConfigError("<yaml>", ex.mark.line + 1, ex.msg);
  }
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  for (const auto& o : overrides) {
    try {
      apply_override(root, o);
    } catch (const YAML::Exception& ex) {
      throw ConfigError(o, 0, std::string("invalid override: ") + ex.what());
    }
  }
  return build(root);
}

LoadedConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), overrides);
}

}  // namespace probedock
