// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/dataset/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <set>

#include "gesturegen/errors.hpp"

namespace gesturegen {

namespace fs = std::filesystem;

std::vector<const ManifestEntry*> DatasetManifest::split(const std::string& name) const {
  std::vector<const ManifestEntry*> out;
  for (const ManifestEntry& e : entries)
    if (e.split == name) out.push_back(&e);
  return out;
}

std::string DatasetManifest::resolve(const std::string& path) const {
  fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / p).generic_string();
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": invalid JSON: " + e.what(), 0);
  }

  DatasetManifest m;
  m.base_dir = fs::path(path).parent_path().generic_string();
  try {
    for (const nlohmann::json& entry : j.at("entries")) {
      ManifestEntry e;
      e.id = entry.at("id").get<std::string>();
      e.audio_path = entry.at("audio").get<std::string>();
      e.motion_path = entry.at("motion").get<std::string>();
      e.split = entry.at("split").get<std::string>();
      m.entries.push_back(std::move(e));
    }
    if (j.contains("joint_groups"))
      m.joint_groups =
          j.at("joint_groups").get<std::map<std::string, std::vector<std::string>>>();
    m.hip_joint = j.value("hip_joint", std::string{});
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": malformed manifest: " + e.what());
  }

  std::set<std::string> ids;
  for (const ManifestEntry& e : m.entries) {
    if (!ids.insert(e.id).second)
      throw DataError(path + ": duplicate entry id '" + e.id + "'");
    if (e.split != "train" && e.split != "val" && e.split != "test")
      throw DataError(path + ": entry '" + e.id + "' has unknown split '" + e.split + "'");
    for (const std::string& file : {m.resolve(e.audio_path), m.resolve(e.motion_path)})
      if (!fs::exists(file))
        throw DataError(path + ": entry '" + e.id + "' references missing file '" + file + "'");
  }
  return m;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
  nlohmann::json j;
  j["entries"] = nlohmann::json::array();
  for (const ManifestEntry& e : manifest.entries)
    j["entries"].push_back(
        {{"id", e.id}, {"audio", e.audio_path}, {"motion", e.motion_path}, {"split", e.split}});
  j["joint_groups"] = manifest.joint_groups;
  j["hip_joint"] = manifest.hip_joint;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << j.dump(1) << "\n";
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace gesturegen
