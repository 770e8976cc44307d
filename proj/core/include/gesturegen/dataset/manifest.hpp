// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <vector>

namespace gesturegen {

struct ManifestEntry {
  std::string id;
  std::string audio_path;   // as written in the manifest
  std::string motion_path;  // as written in the manifest
  std::string split;        // train | val | test
};

/// Pairing of audio and motion files plus split assignment. Relative paths
/// resolve against the manifest's directory; resolution never absolutizes,
/// so runs from different working directories stay byte-compatible.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::map<std::string, std::vector<std::string>> joint_groups;  // name -> joint names
  std::string hip_joint;
  std::string base_dir;

  std::vector<const ManifestEntry*> split(const std::string& name) const;
  std::string resolve(const std::string& path) const;
};

/// JSON manifest {entries: [{id, audio, motion, split}], joint_groups,
/// hip_joint}. Ids must be unique and every referenced file must exist.
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

}  // namespace gesturegen
