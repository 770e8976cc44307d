// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/postprocess.hpp"

#include <algorithm>
#include <cmath>

#include "gesturegen/errors.hpp"

namespace gesturegen {

MotionSequence moving_average(const MotionSequence& m, int window) {
  if (window < 1 || window % 2 == 0)
    throw DataError("moving average window must be odd and >= 1, got " +
                    std::to_string(window));
  if (window == 1) return m;
  int half = window / 2;
  MotionSequence out = m;
  for (int t = 0; t < m.frames(); ++t) {
    int lo = std::max(0, t - half);
    int hi = std::min(m.frames() - 1, t + half);
    out.positions.row(t) = m.positions.middleRows(lo, hi - lo + 1).colwise().mean();
  }
  return out;
}

MotionSequence one_euro(const MotionSequence& m, const OneEuroParams& params) {
  if (m.fps <= 0) throw DataError("one_euro needs a positive fps");
  if (params.min_cutoff <= 0.0 || params.d_cutoff <= 0.0 || params.beta < 0.0)
    throw DataError("one_euro parameters out of range");
  if (m.frames() == 0) return m;

  double te = 1.0 / m.fps;
  auto alpha = [te](double cutoff) {
    double tau = 1.0 / (2.0 * M_PI * cutoff);
    return 1.0 / (1.0 + tau / te);
  };
  double alpha_d = alpha(params.d_cutoff);

  MotionSequence out = m;
  for (int c = 0; c < m.positions.cols(); ++c) {
    double x_hat = m.positions(0, c);
    double dx_hat = 0.0;
    out.positions(0, c) = x_hat;
    for (int t = 1; t < m.frames(); ++t) {
      double x = m.positions(t, c);
      double dx = (x - x_hat) / te;
      dx_hat += alpha_d * (dx - dx_hat);
      double cutoff = params.min_cutoff + params.beta * std::abs(dx_hat);
      x_hat += alpha(cutoff) * (x - x_hat);
      out.positions(t, c) = x_hat;
    }
  }
  return out;
}

MotionSequence smooth_pipeline(const MotionSequence& m, const SmoothOptions& opts) {
  MotionSequence cur = m;
  if (opts.hip_center) cur = hip_center(cur, opts.hip_joint);
  if (opts.one_euro) cur = one_euro(cur, opts.one_euro_params);
  if (opts.moving_average) cur = moving_average(cur, opts.ma_window);
  return cur;
}

}  // namespace gesturegen
