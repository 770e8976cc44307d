// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "gesturegen/motion.hpp"

namespace gesturegen {

/// Average position error in cm: (1/KT) sum over frames and joints of the
/// Euclidean distance. Lengths are truncated to the shorter sequence; joint
/// layouts must match.
double ape(const MotionSequence& truth, const MotionSequence& pred);

/// Per-joint magnitudes of the order-th backward difference of position,
/// each difference divided by the frame period, so units are cm/s, cm/s^2,
/// cm/s^3 for orders 1..3. The first `order` frames are dropped; the result
/// is (frames - order) x joints. Restricted to `joints` when given.
Eigen::MatrixXd derivative_series(const MotionSequence& m, int order,
                                  const std::vector<int>& joints = {});

/// Mean over every entry of a derivative series.
double mean_magnitude(const Eigen::MatrixXd& series);

struct Histogram {
  Eigen::VectorXd bin_edges;  // ascending, equal widths, size bins+1
  Eigen::VectorXd mass;       // sums to 1
};

/// Equal-width bins over [lo, hi]; values outside are clipped into the edge
/// bins; counts normalized to total mass 1. A degenerate range (hi <= lo)
/// widens to [lo, lo + 1] so every value lands in bin 0.
Histogram histogram(const std::vector<double>& values, int n_bins, double lo, double hi);

/// Upper edge used by default for speed histograms: the q-th percentile
/// (linear interpolation between order statistics).
double percentile(std::vector<double> values, double q);

/// sqrt(1 - sum_i sqrt(h1_i * h2_i)); requires identical bin edges.
double hellinger(const Histogram& h1, const Histogram& h2);

inline constexpr int kDefaultHistogramBins = 30;

/// Speed histogram over the named joints (empty = all), with the range taken
/// from the reference sequence: [0, 99th percentile of reference speeds].
struct SpeedHistogramPair {
  Histogram reference;
  Histogram predicted;
  double hellinger = 0.0;
};
SpeedHistogramPair speed_histograms(const MotionSequence& reference,
                                    const MotionSequence& predicted,
                                    const std::vector<int>& joints = {},
                                    int n_bins = kDefaultHistogramBins);

/// The per-coordinate mean pose of the training motion, repeated.
Eigen::RowVectorXd mean_pose(const MotionSequence& training_motion);
MotionSequence static_mean_pose_motion(const MotionSequence& training_motion, int frames);

struct SequenceMetrics {
  std::string id;
  double ape = 0.0;
  double mean_speed = 0.0;
  double mean_accel = 0.0;
  double mean_jerk = 0.0;
  std::map<std::string, double> hellinger_speed;  // "all" plus named joint groups
};

/// Full per-sequence evaluation against ground truth, including per-group
/// speed-histogram Hellinger distances.
SequenceMetrics evaluate_sequence(const std::string& id, const MotionSequence& truth,
                                  const MotionSequence& pred,
                                  const std::map<std::string, std::vector<int>>& joint_groups,
                                  int n_bins = kDefaultHistogramBins);

struct MetricAggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample std (n-1); 0 for a single report
};

/// Mean and sample std per metric field across reports.
std::map<std::string, MetricAggregate> aggregate_runs(const std::vector<SequenceMetrics>& runs);

}  // namespace gesturegen
