// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/dataset/standardizer.hpp"

#include "gesturegen/errors.hpp"

namespace gesturegen {

NormalizationStats fit_standardizer(const Eigen::MatrixXd& train_frames,
                                    std::vector<std::string> labels) {
  if (train_frames.rows() == 0) throw DataError("cannot fit standardizer on an empty set");
  if (!labels.empty() && static_cast<Eigen::Index>(labels.size()) != train_frames.cols())
    throw DataError("standardizer label count does not match dimensions");

  NormalizationStats stats;
  stats.labels = std::move(labels);
  stats.mean = train_frames.colwise().mean();
  Eigen::RowVectorXd max_abs =
      (train_frames.rowwise() - stats.mean).cwiseAbs().colwise().maxCoeff();
  stats.scale = max_abs;
  for (Eigen::Index c = 0; c < max_abs.size(); ++c) {
    if (max_abs(c) <= 0.0) {
      stats.scale(c) = 1.0;
      stats.degenerate_dims.push_back(static_cast<int>(c));
    }
  }
  return stats;
}

namespace {
void check_dim(const NormalizationStats& stats, const Eigen::MatrixXd& x) {
  if (x.cols() != stats.mean.size())
    throw DataError("standardizer dimension mismatch: stats have " +
                    std::to_string(stats.mean.size()) + " dims, data has " +
                    std::to_string(x.cols()));
}
}  // namespace

Eigen::MatrixXd apply_standardizer(const NormalizationStats& stats, const Eigen::MatrixXd& x) {
  check_dim(stats, x);
  return (x.rowwise() - stats.mean).array().rowwise() / stats.scale.array();
}

Eigen::MatrixXd invert_standardizer(const NormalizationStats& stats, const Eigen::MatrixXd& x) {
  check_dim(stats, x);
  return (x.array().rowwise() * stats.scale.array()).matrix().rowwise() + stats.mean;
}

NormalizationStats slice_stats(const NormalizationStats& stats, int offset, int count) {
  if (offset < 0 || count < 1 || offset + count > stats.dim())
    throw DataError("stats slice out of range");
  NormalizationStats out;
  out.mean = stats.mean.segment(offset, count);
  out.scale = stats.scale.segment(offset, count);
  for (int d : stats.degenerate_dims)
    if (d >= offset && d < offset + count) out.degenerate_dims.push_back(d - offset);
  if (!stats.labels.empty())
    out.labels.assign(stats.labels.begin() + offset, stats.labels.begin() + offset + count);
  return out;
}

nlohmann::json stats_to_json(const NormalizationStats& stats) {
  nlohmann::json j;
  j["mean"] = std::vector<double>(stats.mean.data(), stats.mean.data() + stats.mean.size());
  j["scale"] = std::vector<double>(stats.scale.data(), stats.scale.data() + stats.scale.size());
  j["degenerate_dims"] = stats.degenerate_dims;
  j["labels"] = stats.labels;
  return j;
}

NormalizationStats stats_from_json(const nlohmann::json& j) {
  NormalizationStats stats;
  auto mean = j.at("mean").get<std::vector<double>>();
  auto scale = j.at("scale").get<std::vector<double>>();
  if (mean.size() != scale.size()) throw DataError("stats mean/scale size mismatch");
  stats.mean = Eigen::Map<const Eigen::RowVectorXd>(mean.data(),
                                                    static_cast<Eigen::Index>(mean.size()));
  stats.scale = Eigen::Map<const Eigen::RowVectorXd>(scale.data(),
                                                     static_cast<Eigen::Index>(scale.size()));
  stats.degenerate_dims = j.value("degenerate_dims", std::vector<int>{});
  stats.labels = j.value("labels", std::vector<std::string>{});
  return stats;
}

}  // namespace gesturegen
