// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gesturegen/audio_features.hpp"
#include "gesturegen/models/training.hpp"
#include "gesturegen/motion.hpp"

namespace gesturegen {

/// Runs the trained system over a feature sequence and returns global joint
/// positions in cm at the model frame rate. The velocity half of the output,
/// when present, is dropped. Deterministic: equal inputs give equal bytes.
MotionSequence predict(const GestureModel& model, const FeatureSequence& features);

}  // namespace gesturegen
