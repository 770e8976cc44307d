// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "gesturegen/dataset/fixture.hpp"
#include "gesturegen/dataset/loader.hpp"
#include "gesturegen/errors.hpp"
#include "helpers.hpp"

using namespace gesturegen;

TEST_CASE("parse_feature_kinds handles names, aliases and combos") {
  CHECK(parse_feature_kinds("mfcc") == std::vector<FeatureKind>{FeatureKind::Mfcc});
  CHECK(parse_feature_kinds("spectrogram") == std::vector<FeatureKind>{FeatureKind::Spectrogram});
  CHECK(parse_feature_kinds("spec") == std::vector<FeatureKind>{FeatureKind::Spectrogram});
  CHECK(parse_feature_kinds("prosodic") == std::vector<FeatureKind>{FeatureKind::Prosodic});
  CHECK(parse_feature_kinds("pros") == std::vector<FeatureKind>{FeatureKind::Prosodic});
  CHECK(parse_feature_kinds("mfcc+pros") ==
        std::vector<FeatureKind>{FeatureKind::Mfcc, FeatureKind::Prosodic});
  CHECK(parse_feature_kinds("all") ==
        std::vector<FeatureKind>{FeatureKind::Mfcc, FeatureKind::Spectrogram,
                                 FeatureKind::Prosodic});

  CHECK_THROWS_AS(parse_feature_kinds(""), ConfigError);
  CHECK_THROWS_AS(parse_feature_kinds("mel"), ConfigError);
  CHECK_THROWS_AS(parse_feature_kinds("mfcc++pros"), ConfigError);
  CHECK_THROWS_AS(parse_feature_kinds("mfcc+mfcc"), ConfigError);
}

TEST_CASE("feature_dim adds up component widths") {
  CHECK(feature_dim("mfcc") == 26);
  CHECK(feature_dim("spectrogram") == 64);
  CHECK(feature_dim("prosodic") == 4);
  CHECK(feature_dim("mfcc+pros") == 30);
  CHECK(feature_dim("spec+pros") == 68);
  CHECK(feature_dim("mfcc+spec") == 90);
  CHECK(feature_dim("all") == 94);
}

TEST_CASE("extract_features_20fps lands on the motion rate") {
  AudioClip clip;
  clip.sample_rate = 16000;
  clip.samples.resize(16000 * 2);
  for (std::size_t i = 0; i < clip.samples.size(); ++i)
    clip.samples[i] = 0.4 * std::sin(2.0 * M_PI * 180.0 * i / 16000.0);

  for (const char* kind : {"mfcc", "spectrogram", "prosodic", "all"}) {
    FeatureSequence f = extract_features_20fps(clip, kind);
    CHECK(f.fps == 20);
    CHECK(f.dim() == feature_dim(kind));
    // 2 s of audio: within a frame or two of 40 once windows are accounted for.
    CHECK(f.frames() >= 36);
    CHECK(f.frames() <= 40);
  }
}

namespace {

struct FixtureOnDisk {
  testutil::TempDir dir{"loader"};
  DatasetManifest manifest;

  explicit FixtureOnDisk(double seconds = 10.0) {
    FixtureSpec base;
    base.joints = 4;
    base.seed = 77;
    manifest = generate_fixture_dataset(base, {{"clip0", "train", seconds}}, dir.path.string());
  }
};

}  // namespace

TEST_CASE("load_pair truncates audio and motion to a common length") {
  FixtureOnDisk fx;
  LoadedPair pair = load_pair(fx.manifest, fx.manifest.entries[0], "prosodic");
  CHECK(pair.id == "clip0");
  CHECK(pair.features.fps == 20);
  CHECK(pair.motion.fps == 20);
  CHECK(pair.features.frames() == pair.motion.frames());
  CHECK(pair.features.frames() <= 200);  // 10 s at 20 fps
  CHECK(pair.features.frames() >= 190);  // windowing trims only the tail
}

TEST_CASE("load_pair hip-centers when the manifest names a hip") {
  FixtureOnDisk fx;
  LoadedPair pair = load_pair(fx.manifest, fx.manifest.entries[0], "prosodic");
  REQUIRE(pair.motion.joint_names[0] == "root");
  CHECK(pair.motion.positions.leftCols(3).cwiseAbs().maxCoeff() == 0.0);
  // The other joints actually move.
  CHECK(pair.motion.positions.rightCols(3).cwiseAbs().maxCoeff() > 1.0);
}

TEST_CASE("load_pair reports missing files") {
  FixtureOnDisk fx;
  ManifestEntry bad = fx.manifest.entries[0];
  bad.audio_path = "audio/absent.wav";
  CHECK_THROWS_AS(load_pair(fx.manifest, bad, "prosodic"), DataError);
}

TEST_CASE("loading is deterministic") {
  FixtureOnDisk fx(5.0);
  LoadedPair a = load_pair(fx.manifest, fx.manifest.entries[0], "mfcc+pros");
  LoadedPair b = load_pair(fx.manifest, fx.manifest.entries[0], "mfcc+pros");
  CHECK((a.features.data - b.features.data).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.motion.positions - b.motion.positions).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("load_split returns pairs in manifest order") {
  testutil::TempDir dir("loader_split");
  FixtureSpec base;
  base.joints = 4;
  base.seed = 5;
  DatasetManifest manifest = generate_fixture_dataset(
      base, {{"a", "train", 4.0}, {"b", "val", 4.0}, {"c", "train", 4.0}}, dir.path.string());

  auto train = load_split(manifest, "train", "prosodic");
  REQUIRE(train.size() == 2);
  CHECK(train[0].id == "a");
  CHECK(train[1].id == "c");
  CHECK(load_split(manifest, "val", "prosodic").size() == 1);
  CHECK(load_split(manifest, "test", "prosodic").empty());
}

TEST_CASE("resolve_joint_groups maps names to indices") {
  DatasetManifest manifest;
  manifest.joint_groups["arms"] = {"l_arm", "r_arm"};
  manifest.joint_groups["head"] = {"skull"};
  std::vector<std::string> names = {"hips", "skull", "l_arm", "r_arm"};

  auto groups = resolve_joint_groups(manifest, names);
  CHECK(groups["arms"] == std::vector<int>{2, 3});
  CHECK(groups["head"] == std::vector<int>{1});

  manifest.joint_groups["bad"] = {"tail"};
  CHECK_THROWS_WITH_AS(resolve_joint_groups(manifest, names),
                       doctest::Contains("tail"), DataError);
}
