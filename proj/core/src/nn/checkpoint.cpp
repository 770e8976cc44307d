// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/nn/checkpoint.hpp"

#include <fstream>

#include "gesturegen/errors.hpp"

namespace gesturegen::nn {
namespace {

nlohmann::json spec_to_json(const LayerSpec& s) {
  nlohmann::json j;
  j["kind"] = s.kind;
  j["in_dim"] = s.in_dim;
  j["out_dim"] = s.out_dim;
  if (s.kind == "dropout") j["dropout_p"] = s.dropout_p;
  if (s.kind == "gru") {
    j["direction"] = s.bidirectional ? "bidirectional" : "forward";
    j["return_sequences"] = s.return_sequences;
  }
  if (s.kind == "batch_norm") {
    j["momentum"] = s.momentum;
    j["eps"] = s.eps;
  }
  return j;
}

LayerSpec spec_from_json(const nlohmann::json& j) {
  LayerSpec s;
  s.kind = j.at("kind").get<std::string>();
  s.in_dim = j.at("in_dim").get<int>();
  s.out_dim = j.at("out_dim").get<int>();
  if (s.kind == "dropout") s.dropout_p = j.at("dropout_p").get<double>();
  if (s.kind == "gru") {
    std::string dir = j.at("direction").get<std::string>();
    if (dir != "forward" && dir != "bidirectional")
      throw DataError("bad gru direction '" + dir + "'");
    s.bidirectional = dir == "bidirectional";
    s.return_sequences = j.at("return_sequences").get<bool>();
  }
  if (s.kind == "batch_norm") {
    s.momentum = j.at("momentum").get<double>();
    s.eps = j.at("eps").get<double>();
  }
  return s;
}

}  // namespace

void save_checkpoint(const Network& net, const std::string& model_kind,
                     const nlohmann::json& meta, const std::string& path) {
  nlohmann::json j;
  j["format_version"] = kCheckpointVersion;
  j["model_kind"] = model_kind;
  j["rng_seed"] = net.seed();

  j["layers"] = nlohmann::json::array();
  for (const LayerSpec& s : net.specs()) j["layers"].push_back(spec_to_json(s));

  nlohmann::json params = nlohmann::json::object();
  for (const ParamTensor* p : net.parameters()) {
    nlohmann::json entry;
    entry["shape"] = {p->values.rows(), p->values.cols()};
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(p->values.size()));
    for (Eigen::Index r = 0; r < p->values.rows(); ++r)
      for (Eigen::Index c = 0; c < p->values.cols(); ++c) values.push_back(p->values(r, c));
    entry["values"] = std::move(values);
    params[p->name] = std::move(entry);
  }
  j["params"] = std::move(params);
  j["meta"] = meta;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open checkpoint '" + path + "' for writing");
  out << j.dump(1) << "\n";
  if (!out) throw DataError("failed writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": invalid JSON: " + e.what(), 0);
  }

  try {
    int version = j.at("format_version").get<int>();
    if (version != kCheckpointVersion)
      throw DataError(path + ": unsupported checkpoint format_version " +
                      std::to_string(version) + " (expected " +
                      std::to_string(kCheckpointVersion) + ")");

    Checkpoint ckpt;
    ckpt.model_kind = j.at("model_kind").get<std::string>();
    uint64_t seed = j.at("rng_seed").get<uint64_t>();

    std::vector<LayerSpec> specs;
    for (const nlohmann::json& entry : j.at("layers")) specs.push_back(spec_from_json(entry));
    ckpt.net = Network(std::move(specs), seed);

    const nlohmann::json& params = j.at("params");
    for (ParamTensor* p : ckpt.net.parameters()) {
      if (!params.contains(p->name))
        throw DataError(path + ": checkpoint is missing parameter '" + p->name + "'");
      const nlohmann::json& entry = params.at(p->name);
      auto shape = entry.at("shape").get<std::vector<Eigen::Index>>();
      if (shape.size() != 2 || shape[0] != p->values.rows() || shape[1] != p->values.cols())
        throw DataError(path + ": parameter '" + p->name + "' has the wrong shape");
      auto values = entry.at("values").get<std::vector<double>>();
      if (static_cast<Eigen::Index>(values.size()) != p->values.size())
        throw DataError(path + ": parameter '" + p->name + "' has the wrong value count");
      std::size_t i = 0;
      for (Eigen::Index r = 0; r < p->values.rows(); ++r)
        for (Eigen::Index c = 0; c < p->values.cols(); ++c) p->values(r, c) = values[i++];
    }

    ckpt.meta = j.value("meta", nlohmann::json::object());
    ckpt.net.set_mode(Mode::Eval);
    return ckpt;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": malformed checkpoint: " + e.what());
  }
}

}  // namespace gesturegen::nn
