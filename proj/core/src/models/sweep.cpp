// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/models/sweep.hpp"

#include "gesturegen/errors.hpp"
#include "gesturegen/metrics.hpp"
#include "gesturegen/models/inference.hpp"

namespace gesturegen {

std::vector<SweepRow> sweep_bottleneck(const std::vector<LoadedPair>& train,
                                       const std::vector<LoadedPair>& val,
                                       const ModelConfig& base,
                                       const std::vector<int>& dims) {
  if (val.empty()) throw DataError("bottleneck sweep needs a validation split");
  std::vector<SweepRow> rows;
  for (int dim : dims) {
    ModelConfig config = base;
    config.model_kind = "aud2repr2pose";
    config.bottleneck = dim;
    GestureModel model = train_gesture_model(train, val, config);

    SweepRow row;
    row.dim = dim;
    row.dae_val_mse = model.dae_log.val_mse;
    for (const LoadedPair& pair : val) {
      MotionSequence pred = predict(model, pair.features);
      row.val_ape += ape(pair.motion, pred);
      row.mean_jerk += mean_magnitude(derivative_series(pred, 3));
    }
    row.val_ape /= static_cast<double>(val.size());
    row.mean_jerk /= static_cast<double>(val.size());
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gesturegen
