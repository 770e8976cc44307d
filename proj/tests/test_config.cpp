// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>

#include "gesturegen/errors.hpp"
#include "gesturegen/models/config.hpp"
#include "helpers.hpp"

using namespace gesturegen;

TEST_CASE("defaults switch with the model kind") {
  ModelConfig pose = default_config("aud2pose");
  CHECK(pose.batch_size == 2056);
  CHECK(pose.epochs == 120);
  CHECK(pose.predict_velocity);
  CHECK(pose.C == 30);
  CHECK(pose.hidden == 256);

  ModelConfig motion = default_config("aud2motion");
  CHECK(motion.batch_size == 256);
  CHECK(motion.epochs == 500);
  CHECK(!motion.predict_velocity);

  ModelConfig chained = default_config("aud2repr2pose");
  CHECK(chained.bottleneck == 325);
  CHECK(chained.batch_size == 2056);

  CHECK_THROWS_AS(default_config("aud2banana"), ConfigError);
}

TEST_CASE("validate_config rejects out-of-range values") {
  ModelConfig c = default_config("aud2pose");
  validate_config(c);

  auto broken = [&](auto mutate) {
    ModelConfig bad = c;
    mutate(bad);
    CHECK_THROWS_AS(validate_config(bad), ConfigError);
  };
  broken([](ModelConfig& b) { b.model_kind = "x"; });
  broken([](ModelConfig& b) { b.feature_kind = "cepstrum"; });
  broken([](ModelConfig& b) { b.C = -1; });
  broken([](ModelConfig& b) { b.hidden = 0; });
  broken([](ModelConfig& b) { b.fc_layers = 0; });
  broken([](ModelConfig& b) { b.dropout = 1.0; });
  broken([](ModelConfig& b) { b.lr = 0.0; });
  broken([](ModelConfig& b) { b.batch_size = 0; });
  broken([](ModelConfig& b) { b.epochs = -1; });
  broken([](ModelConfig& b) { b.bottleneck = 0; });
  broken([](ModelConfig& b) { b.chunk_len = 1; });
  broken([](ModelConfig& b) { b.noise_scale = -0.1; });
}

TEST_CASE("config json round trip") {
  ModelConfig c = default_config("aud2repr2pose");
  c.feature_kind = "mfcc+pros";
  c.C = 5;
  c.lr = 0.003;
  c.seed = 99;
  ModelConfig back = config_from_json(config_to_json(c));
  CHECK(back.model_kind == c.model_kind);
  CHECK(back.feature_kind == c.feature_kind);
  CHECK(back.C == 5);
  CHECK(back.lr == 0.003);
  CHECK(back.seed == 99);
  CHECK(back.bottleneck == c.bottleneck);
}

TEST_CASE("unknown json keys are ignored") {
  nlohmann::json j = {{"model_kind", "aud2motion"}, {"hidden", 64}, {"manifest", "x.json"},
                      {"out", "dir"}, {"histogram_bins", 40}};
  ModelConfig c = config_from_json(j);
  CHECK(c.model_kind == "aud2motion");
  CHECK(c.hidden == 64);
  CHECK(c.batch_size == 256);  // aud2motion default came through
}

TEST_CASE("apply_override parses each value type") {
  ModelConfig c = default_config("aud2pose");
  apply_override(c, "hidden=32");
  apply_override(c, "lr=0.01");
  apply_override(c, "predict_velocity=false");
  apply_override(c, "feature_kind=prosodic");
  CHECK(c.hidden == 32);
  CHECK(c.lr == 0.01);
  CHECK(!c.predict_velocity);
  CHECK(c.feature_kind == "prosodic");

  CHECK_THROWS_AS(apply_override(c, "hidden"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "=3"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "banana=3"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "hidden=large"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "hidden=0"), ConfigError);
}

TEST_CASE("switching model kind resets that model's defaults") {
  ModelConfig c = default_config("aud2pose");
  c.feature_kind = "prosodic";
  c.seed = 42;
  c.hidden = 16;  // would be stale for the new model

  apply_override(c, "model_kind=aud2motion");
  CHECK(c.model_kind == "aud2motion");
  CHECK(c.batch_size == 256);
  CHECK(c.epochs == 500);
  CHECK(c.hidden == 256);           // reset to the model's default
  CHECK(c.feature_kind == "prosodic");  // user intent survives
  CHECK(c.seed == 42);
}

TEST_CASE("load_config reads a file and validates") {
  testutil::TempDir dir("config_file");
  std::ofstream(dir.file("c.json"))
      << R"({"model_kind": "aud2repr2pose", "bottleneck": 48, "seed": 3})";
  ModelConfig c = load_config(dir.file("c.json"));
  CHECK(c.model_kind == "aud2repr2pose");
  CHECK(c.bottleneck == 48);
  CHECK(c.seed == 3);

  std::ofstream(dir.file("bad.json")) << "{ nope";
  CHECK_THROWS_AS(load_config(dir.file("bad.json")), ConfigError);
  CHECK_THROWS_AS(load_config(dir.file("absent.json")), ConfigError);

  std::ofstream(dir.file("range.json")) << R"({"model_kind": "aud2pose", "dropout": 2.0})";
  CHECK_THROWS_AS(load_config(dir.file("range.json")), ConfigError);
}
