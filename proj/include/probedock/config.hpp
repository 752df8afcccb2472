// YAML run configuration with dotted-path overrides (e.g. gains.Kp.x=0.5).

#ifndef PROBEDOCK_CONFIG_HPP
#define PROBEDOCK_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "probedock/harness.hpp"

namespace probedock {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);

  const std::string& key() const { return key_; }
  /// 1-based line in the source document, or 0 when unknown (e.g. an override).
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

struct LoadedConfig {
  RunConfig run;
  BatchOptions batch;
};

/// Parses `text`; `overrides` are "dotted.key=value" strings applied before validation.
LoadedConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
LoadedConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides = {});

/// The shipped default configuration (mirrors configs/default.yaml).
std::string default_config_text();

}  // namespace probedock

#endif  // PROBEDOCK_CONFIG_HPP
