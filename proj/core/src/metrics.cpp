// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "gesturegen/errors.hpp"

namespace gesturegen {

double ape(const MotionSequence& truth, const MotionSequence& pred) {
  if (truth.fps != pred.fps)
    throw DataError("ape fps mismatch: " + std::to_string(truth.fps) + " vs " +
                    std::to_string(pred.fps));
  if (truth.joint_names != pred.joint_names)
    throw DataError("ape joint layout mismatch");
  int frames = std::min(truth.frames(), pred.frames());
  if (frames == 0) throw DataError("ape on empty sequences");
  int joints = truth.joints();

  double acc = 0.0;
  for (int t = 0; t < frames; ++t)
    for (int j = 0; j < joints; ++j)
      acc += (truth.positions.block<1, 3>(t, 3 * j) - pred.positions.block<1, 3>(t, 3 * j))
                 .norm();
  return acc / (static_cast<double>(frames) * joints);
}

Eigen::MatrixXd derivative_series(const MotionSequence& m, int order,
                                  const std::vector<int>& joints) {
  if (order < 1 || order > 3) throw DataError("derivative order must be 1, 2 or 3");
  if (m.fps <= 0) throw DataError("derivative_series needs a positive fps");
  if (m.frames() <= order)
    throw DataError("sequence of " + std::to_string(m.frames()) +
                    " frames too short for order " + std::to_string(order));

  std::vector<int> selected = joints;
  if (selected.empty()) {
    selected.resize(static_cast<std::size_t>(m.joints()));
    for (int j = 0; j < m.joints(); ++j) selected[static_cast<std::size_t>(j)] = j;
  }
  for (int j : selected)
    if (j < 0 || j >= m.joints())
      throw DataError("joint index " + std::to_string(j) + " out of range");

  Eigen::MatrixXd diff = m.positions;
  for (int k = 0; k < order; ++k) {
    Eigen::MatrixXd next =
        (diff.bottomRows(diff.rows() - 1) - diff.topRows(diff.rows() - 1)) * m.fps;
    diff = std::move(next);
  }

  Eigen::MatrixXd out(diff.rows(), static_cast<Eigen::Index>(selected.size()));
  for (std::size_t s = 0; s < selected.size(); ++s)
    for (Eigen::Index t = 0; t < diff.rows(); ++t)
      out(t, static_cast<Eigen::Index>(s)) = diff.block<1, 3>(t, 3 * selected[s]).norm();
  return out;
}

double mean_magnitude(const Eigen::MatrixXd& series) {
  if (series.size() == 0) throw DataError("mean of an empty series");
  return series.mean();
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw DataError("percentile of no samples");
  if (q < 0.0 || q > 100.0) throw DataError("percentile out of [0, 100]");
  std::sort(values.begin(), values.end());
  double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

Histogram histogram(const std::vector<double>& values, int n_bins, double lo, double hi) {
  if (values.empty()) throw DataError("histogram: no samples");
  if (n_bins < 1) throw DataError("histogram needs at least one bin");
  if (hi <= lo) hi = lo + 1.0;

  Histogram h;
  h.bin_edges.resize(n_bins + 1);
  double width = (hi - lo) / n_bins;
  for (int i = 0; i <= n_bins; ++i) h.bin_edges(i) = lo + width * i;

  h.mass = Eigen::VectorXd::Zero(n_bins);
  for (double v : values) {
    int idx = static_cast<int>(std::floor((v - lo) / width));
    idx = std::clamp(idx, 0, n_bins - 1);
    h.mass(idx) += 1.0;
  }
  h.mass /= static_cast<double>(values.size());
  return h;
}

double hellinger(const Histogram& h1, const Histogram& h2) {
  if (h1.bin_edges.size() != h2.bin_edges.size() || h1.bin_edges != h2.bin_edges)
    throw DataError("hellinger: histograms have different bin edges");
  double bc = (h1.mass.array() * h2.mass.array()).sqrt().sum();
  return std::sqrt(std::max(0.0, 1.0 - bc));
}

namespace {
std::vector<double> to_vector(const Eigen::MatrixXd& m) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index t = 0; t < m.rows(); ++t)
    for (Eigen::Index c = 0; c < m.cols(); ++c) v.push_back(m(t, c));
  return v;
}
}  // namespace

SpeedHistogramPair speed_histograms(const MotionSequence& reference,
                                    const MotionSequence& predicted,
                                    const std::vector<int>& joints, int n_bins) {
  std::vector<double> ref_speeds = to_vector(derivative_series(reference, 1, joints));
  std::vector<double> pred_speeds = to_vector(derivative_series(predicted, 1, joints));
  double hi = percentile(ref_speeds, 99.0);

  SpeedHistogramPair out;
  out.reference = histogram(ref_speeds, n_bins, 0.0, hi);
  out.predicted = histogram(pred_speeds, n_bins, 0.0, hi);
  out.hellinger = hellinger(out.reference, out.predicted);
  return out;
}

Eigen::RowVectorXd mean_pose(const MotionSequence& training_motion) {
  if (training_motion.frames() == 0) throw DataError("mean pose of an empty sequence");
  return training_motion.positions.colwise().mean();
}

MotionSequence static_mean_pose_motion(const MotionSequence& training_motion, int frames) {
  if (frames < 0) throw DataError("negative frame count");
  MotionSequence out;
  out.fps = training_motion.fps;
  out.joint_names = training_motion.joint_names;
  out.positions = mean_pose(training_motion).replicate(frames, 1);
  return out;
}

SequenceMetrics evaluate_sequence(const std::string& id, const MotionSequence& truth,
                                  const MotionSequence& pred,
                                  const std::map<std::string, std::vector<int>>& joint_groups,
                                  int n_bins) {
  SequenceMetrics sm;
  sm.id = id;
  sm.ape = ape(truth, pred);
  sm.mean_speed = mean_magnitude(derivative_series(pred, 1));
  sm.mean_accel = mean_magnitude(derivative_series(pred, 2));
  sm.mean_jerk = mean_magnitude(derivative_series(pred, 3));
  sm.hellinger_speed["all"] = speed_histograms(truth, pred, {}, n_bins).hellinger;
  for (const auto& [name, joints] : joint_groups) {
    if (joints.empty()) throw DataError("joint group '" + name + "' is empty");
    sm.hellinger_speed[name] = speed_histograms(truth, pred, joints, n_bins).hellinger;
  }
  return sm;
}

namespace {
MetricAggregate aggregate_values(const std::vector<double>& v) {
  MetricAggregate a;
  if (v.empty()) throw DataError("aggregate of no runs");
  double sum = 0.0;
  for (double x : v) sum += x;
  a.mean = sum / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - a.mean) * (x - a.mean);
    a.stddev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return a;
}
}  // namespace

std::map<std::string, MetricAggregate> aggregate_runs(const std::vector<SequenceMetrics>& runs) {
  if (runs.empty()) throw DataError("aggregate of no runs");
  std::map<std::string, std::vector<double>> columns;
  for (const SequenceMetrics& r : runs) {
    columns["ape"].push_back(r.ape);
    columns["mean_speed"].push_back(r.mean_speed);
    columns["mean_accel"].push_back(r.mean_accel);
    columns["mean_jerk"].push_back(r.mean_jerk);
    for (const auto& [name, value] : r.hellinger_speed)
      columns["hellinger_" + name].push_back(value);
  }
  std::map<std::string, MetricAggregate> out;
  for (const auto& [name, vals] : columns) out[name] = aggregate_values(vals);
  return out;
}

}  // namespace gesturegen
