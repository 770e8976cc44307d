// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <string>
#include <vector>

namespace gesturegen {

/// Normalization to mean zero and maximum absolute value one, fitted on the
/// training split only. Constant (degenerate) dimensions keep scale 1 and are
/// flagged rather than rejected.
struct NormalizationStats {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;  // max |value - mean| per dim; 1 for degenerate dims
  std::vector<int> degenerate_dims;
  std::vector<std::string> labels;

  int dim() const { return static_cast<int>(mean.size()); }
};

NormalizationStats fit_standardizer(const Eigen::MatrixXd& train_frames,
                                    std::vector<std::string> labels = {});

Eigen::MatrixXd apply_standardizer(const NormalizationStats& stats, const Eigen::MatrixXd& x);
Eigen::MatrixXd invert_standardizer(const NormalizationStats& stats, const Eigen::MatrixXd& x);

/// Slice of the stats covering dims [offset, offset + count), for models that
/// train on a prefix of the standardized space.
NormalizationStats slice_stats(const NormalizationStats& stats, int offset, int count);

nlohmann::json stats_to_json(const NormalizationStats& stats);
NormalizationStats stats_from_json(const nlohmann::json& j);

}  // namespace gesturegen
