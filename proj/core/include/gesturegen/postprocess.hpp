// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gesturegen/motion.hpp"

namespace gesturegen {

struct OneEuroParams {
  double min_cutoff = 1.0;  // Hz
  double beta = 0.01;
  double d_cutoff = 1.0;  // Hz
};

/// Per-coordinate mean over frames [t - w/2, t + w/2] clipped to the sequence
/// bounds, so the window shrinks at the edges. Window must be odd.
MotionSequence moving_average(const MotionSequence& m, int window = 5);

/// One-Euro filter per coordinate: adaptive low-pass whose cutoff grows with
/// the smoothed derivative, cutoff = min_cutoff + beta * |dx_hat|. The first
/// output frame equals the first input frame.
MotionSequence one_euro(const MotionSequence& m, const OneEuroParams& params = {});

struct SmoothOptions {
  bool hip_center = false;
  int hip_joint = 0;
  bool one_euro = false;
  OneEuroParams one_euro_params;
  bool moving_average = false;
  int ma_window = 5;
};

/// Hip-centering first, then One-Euro, then moving average, per enabled flag.
MotionSequence smooth_pipeline(const MotionSequence& m, const SmoothOptions& opts);

}  // namespace gesturegen
