#include <gtest/gtest.h>

#include <fstream>

#include "probedock/config.hpp"

using namespace probedock;

namespace {

std::string without_gains(const std::string& text) {
  std::string out;
  std::istringstream is(text);
  bool skipping = false;
  for (std::string line; std::getline(is, line);) {
    if (line.rfind("gains:", 0) == 0) {
      skipping = true;
      continue;
    }
    if (skipping && line.rfind("  ", 0) == 0) continue;
    skipping = false;
    out += line + "\n";
  }
  return out;
}

}  // namespace

TEST(Config, DefaultsMatchBuiltInStructs) {
  const LoadedConfig c = parse_config(default_config_text());
  const RunConfig d;
  EXPECT_EQ(config_hash(c.run), config_hash(d));
  EXPECT_EQ(c.run.seed, 1u);
  EXPECT_EQ(c.run.controller, ControllerKind::kProposed);
  EXPECT_EQ(c.batch.n_runs, 50u);
  EXPECT_TRUE(c.batch.paired);
}

TEST(Config, ShippedFileMatchesBuiltInText) {
  std::ifstream in(PROBEDOCK_SOURCE_DIR "/configs/default.yaml");
  ASSERT_TRUE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), default_config_text());
}

TEST(Config, MissingGainsNamesKp) {
  try {
    parse_config(without_gains(default_config_text()));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "gains.Kp");
  }
}

TEST(Config, MissingKdNamesKd) {
  try {
    parse_config("gains:\n  Kp: {x: 1, y: 1, z: 1}\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "gains.Kd");
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Config, BadValueReportsKeyAndLine) {
  try {
    parse_config("gains:\n  Kp: {x: 1, y: 1, z: 1}\n  Kd: {x: 1, y: oops, z: 1}\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "gains.Kd.y");
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Config, UnknownKeyRejected) {
  try {
    parse_config(default_config_text() + "extra: 1\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "extra");
  }
  EXPECT_THROW(parse_config(default_config_text(), {"plant.mass=5"}), ConfigError);
}

TEST(Config, SequenceVectorsAccepted) {
  const LoadedConfig c = parse_config("gains:\n  Kp: [1, 2, 3]\n  Kd: [4, 5, 6]\n");
  EXPECT_EQ(c.run.gains.kp, Vec3(1, 2, 3));
  EXPECT_EQ(c.run.gains.kd, Vec3(4, 5, 6));
  const LoadedConfig o = parse_config("gains:\n  Kp: [1, 2, 3]\n  Kd: [4, 5, 6]\n", {"gains.Kp.y=7"});
  EXPECT_EQ(o.run.gains.kp, Vec3(1, 7, 3));
}

TEST(Config, DottedOverrides) {
  const LoadedConfig c = parse_config(default_config_text(), {"gains.Kp.x=0.5", "controller=standard",
                                                              "plant.inner_loop_mode=ideal", "batch.n_runs=3"});
  EXPECT_EQ(c.run.gains.kp(0), 0.5);
  EXPECT_EQ(c.run.controller, ControllerKind::kStandard);
  EXPECT_EQ(c.run.plant.inner_loop_mode, InnerLoopMode::kIdeal);
  EXPECT_EQ(c.batch.n_runs, 3u);
}

TEST(Config, OverrideCreatesMissingSections) {
  const LoadedConfig c =
      parse_config("gains:\n  Kp: [1, 2, 3]\n  Kd: [4, 5, 6]\n", {"geometry.x_bar.x=2.5", "bounds.delta_R=0.3"});
  EXPECT_EQ(c.run.geometry.x_bar, Vec3(2.5, 0.0, 0.0));
  EXPECT_EQ(c.run.bounds.delta_R, 0.3);
}

TEST(Config, MalformedOverride) {
  EXPECT_THROW(parse_config(default_config_text(), {"gains.Kp.x"}), ConfigError);
  EXPECT_THROW(parse_config(default_config_text(), {"=3"}), ConfigError);
  EXPECT_THROW(parse_config(default_config_text(), {"gains..x=3"}), ConfigError);
}

TEST(Config, ValidationFailureNamesKey) {
  try {
    parse_config(default_config_text(), {"simulation.horizon=20"});
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "simulation.horizon");
  }
  EXPECT_THROW(parse_config(default_config_text(), {"controller=pid"}), ConfigError);
  EXPECT_THROW(parse_config(default_config_text(), {"batch.n_runs=0"}), ConfigError);
}

TEST(Config, YamlSyntaxErrorHasLine) {
  try {
    parse_config("gains:\n  Kp: [1, 2\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_GT(e.line(), 0);
  }
}

TEST(Config, ReadsBackEmittedJson) {
  RunConfig r;
  r.seed = 17;
  r.geometry.x_bar = Vec3(4.0, 0.1, -0.2);
  r.plant.inner_loop_mode = InnerLoopMode::kIdeal;
  const LoadedConfig back = parse_config(config_to_json(r).dump(2));
  EXPECT_EQ(config_to_json(back.run), config_to_json(r));
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config_file("/nonexistent/probedock.yaml"), ConfigError); }
