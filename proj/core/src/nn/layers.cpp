// SPDX-License-Identifier: Apache-2.0
#include "gesturegen/nn/layers.hpp"

#include <cmath>

#include "gesturegen/errors.hpp"

namespace gesturegen::nn {
namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, int fan_in, Rng& rng) {
  double bound = std::sqrt(1.0 / fan_in);
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform(-bound, bound);
  return m;
}

ParamTensor make_param(const std::string& name, Eigen::MatrixXd values, bool trainable = true) {
  ParamTensor p;
  p.name = name;
  p.values = std::move(values);
  p.grad = Eigen::MatrixXd::Zero(p.values.rows(), p.values.cols());
  p.trainable = trainable;
  return p;
}

Eigen::MatrixXd sigmoid(const Eigen::MatrixXd& x) {
  return (1.0 + (-x.array()).exp()).inverse().matrix();
}

class AffineLayer : public Layer {
 public:
  AffineLayer(LayerSpec spec, const std::string& prefix, Rng& rng)
      : Layer(std::move(spec)),
        w_(make_param(prefix + "W", random_matrix(spec_.out_dim, spec_.in_dim, spec_.in_dim, rng))),
        b_(make_param(prefix + "b", Eigen::MatrixXd::Zero(1, spec_.out_dim))) {}

  SeqBatch forward_train(const SeqBatch& x, Rng&) override {
    check_input(x);
    cached_input_ = x.data;
    have_cache_ = true;
    return apply(x);
  }

  SeqBatch forward_eval(const SeqBatch& x) const override {
    check_input(x);
    return apply(x);
  }

  SeqBatch backward(const SeqBatch& dy) override {
    require_cache(have_cache_);
    have_cache_ = false;
    w_.grad += dy.data.transpose() * cached_input_;
    b_.grad += dy.data.colwise().sum();
    return {dy.data * w_.values, dy.time, dy.batch};
  }

  std::vector<ParamTensor*> params() override { return {&w_, &b_}; }

  std::unique_ptr<Layer> clone() const override {
    return std::unique_ptr<Layer>(new AffineLayer(*this));
  }

 private:
  SeqBatch apply(const SeqBatch& x) const {
    Eigen::MatrixXd y = x.data * w_.values.transpose();
    y.rowwise() += b_.values.row(0);
    return {std::move(y), x.time, x.batch};
  }

  ParamTensor w_, b_;
  Eigen::MatrixXd cached_input_;
  bool have_cache_ = false;
};

class ReluLayer : public Layer {
 public:
  ReluLayer(LayerSpec spec) : Layer(std::move(spec)) {}

  SeqBatch forward_train(const SeqBatch& x, Rng&) override {
    check_input(x);
    mask_ = (x.data.array() > 0.0).cast<double>();
    have_cache_ = true;
    return {x.data.cwiseMax(0.0), x.time, x.batch};
  }

  SeqBatch forward_eval(const SeqBatch& x) const override {
    check_input(x);
    return {x.data.cwiseMax(0.0), x.time, x.batch};
  }

  SeqBatch backward(const SeqBatch& dy) override {
    require_cache(have_cache_);
    have_cache_ = false;
    return {dy.data.cwiseProduct(mask_), dy.time, dy.batch};
  }

  std::unique_ptr<Layer> clone() const override {
    return std::unique_ptr<Layer>(new ReluLayer(*this));
  }

 private:
  Eigen::MatrixXd mask_;
  bool have_cache_ = false;
};

class BatchNormLayer : public Layer {
 public:
  BatchNormLayer(LayerSpec spec, const std::string& prefix)
      : Layer(std::move(spec)),
        gamma_(make_param(prefix + "gamma", Eigen::MatrixXd::Ones(1, spec_.out_dim))),
        beta_(make_param(prefix + "beta", Eigen::MatrixXd::Zero(1, spec_.out_dim))),
        running_mean_(
            make_param(prefix + "running_mean", Eigen::MatrixXd::Zero(1, spec_.out_dim), false)),
        running_var_(
            make_param(prefix + "running_var", Eigen::MatrixXd::Ones(1, spec_.out_dim), false)) {}

  SeqBatch forward_train(const SeqBatch& x, Rng&) override {
    check_input(x);
    int n = static_cast<int>(x.data.rows());
    if (n < 2) throw DataError("batch_norm needs at least 2 rows in train mode");

    Eigen::RowVectorXd mean = x.data.colwise().mean();
    Eigen::MatrixXd centered = x.data.rowwise() - mean;
    Eigen::RowVectorXd var = centered.array().square().colwise().mean();

    inv_std_ = (var.array() + spec_.eps).sqrt().inverse();
    xhat_ = centered.array().rowwise() * inv_std_.array();
    rows_ = n;
    have_cache_ = true;

    double m = spec_.momentum;
    running_mean_.values.row(0) = (1.0 - m) * running_mean_.values.row(0) + m * mean;
    running_var_.values.row(0) = (1.0 - m) * running_var_.values.row(0) + m * var;

    Eigen::MatrixXd y = xhat_.array().rowwise() * gamma_.values.row(0).array();
    y.rowwise() += beta_.values.row(0);
    return {std::move(y), x.time, x.batch};
  }

  SeqBatch forward_eval(const SeqBatch& x) const override {
    check_input(x);
    Eigen::RowVectorXd inv_std =
        (running_var_.values.row(0).array() + spec_.eps).sqrt().inverse();
    Eigen::MatrixXd y =
        (x.data.rowwise() - running_mean_.values.row(0)).array().rowwise() *
        (inv_std.array() * gamma_.values.row(0).array());
    y.rowwise() += beta_.values.row(0);
    return {std::move(y), x.time, x.batch};
  }

  SeqBatch backward(const SeqBatch& dy) override {
    require_cache(have_cache_);
    have_cache_ = false;

    gamma_.grad += dy.data.cwiseProduct(xhat_).colwise().sum();
    beta_.grad += dy.data.colwise().sum();

    Eigen::MatrixXd dxhat = dy.data.array().rowwise() * gamma_.values.row(0).array();
    Eigen::RowVectorXd sum_dxhat = dxhat.colwise().sum();
    Eigen::RowVectorXd sum_dxhat_xhat = dxhat.cwiseProduct(xhat_).colwise().sum();

    Eigen::MatrixXd dx =
        (rows_ * dxhat.array() -
         (Eigen::MatrixXd::Ones(rows_, 1) * sum_dxhat).array() -
         xhat_.array() * (Eigen::MatrixXd::Ones(rows_, 1) * sum_dxhat_xhat).array())
            .rowwise() *
        (inv_std_.array() / rows_);
    return {std::move(dx), dy.time, dy.batch};
  }

  std::vector<ParamTensor*> params() override {
    return {&gamma_, &beta_, &running_mean_, &running_var_};
  }

  std::unique_ptr<Layer> clone() const override {
    return std::unique_ptr<Layer>(new BatchNormLayer(*this));
  }

 private:
  ParamTensor gamma_, beta_, running_mean_, running_var_;
  Eigen::MatrixXd xhat_;
  Eigen::RowVectorXd inv_std_;
  int rows_ = 0;
  bool have_cache_ = false;
};

class DropoutLayer : public Layer {
 public:
  DropoutLayer(LayerSpec spec) : Layer(std::move(spec)) {}

  SeqBatch forward_train(const SeqBatch& x, Rng& rng) override {
    check_input(x);
    double keep = 1.0 - spec_.dropout_p;
    scaled_mask_.resize(x.data.rows(), x.data.cols());
    for (int r = 0; r < scaled_mask_.rows(); ++r)
      for (int c = 0; c < scaled_mask_.cols(); ++c)
        scaled_mask_(r, c) = rng.uniform() < keep ? 1.0 / keep : 0.0;
    have_cache_ = true;
    return {x.data.cwiseProduct(scaled_mask_), x.time, x.batch};
  }

  SeqBatch forward_eval(const SeqBatch& x) const override {
    check_input(x);
    return x;
  }

  SeqBatch backward(const SeqBatch& dy) override {
    require_cache(have_cache_);
    have_cache_ = false;
    return {dy.data.cwiseProduct(scaled_mask_), dy.time, dy.batch};
  }

  std::unique_ptr<Layer> clone() const override {
    return std::unique_ptr<Layer>(new DropoutLayer(*this));
  }

 private:
  Eigen::MatrixXd scaled_mask_;
  bool have_cache_ = false;
};

/// One direction of GRU weights plus the per-step cache for BPTT.
struct GruDirection {
  ParamTensor wr, wz, wn, ur, uz, un, br, bz, bn;
  std::vector<Eigen::MatrixXd> r, z, n, uh_n, h_prev, h;

  GruDirection(int in, int hidden, const std::string& prefix, Rng& rng)
      : wr(make_param(prefix + "W_r", random_matrix(hidden, in, in, rng))),
        wz(make_param(prefix + "W_z", random_matrix(hidden, in, in, rng))),
        wn(make_param(prefix + "W_n", random_matrix(hidden, in, in, rng))),
        ur(make_param(prefix + "U_r", random_matrix(hidden, hidden, hidden, rng))),
        uz(make_param(prefix + "U_z", random_matrix(hidden, hidden, hidden, rng))),
        un(make_param(prefix + "U_n", random_matrix(hidden, hidden, hidden, rng))),
        br(make_param(prefix + "b_r", Eigen::MatrixXd::Zero(1, hidden))),
        bz(make_param(prefix + "b_z", Eigen::MatrixXd::Zero(1, hidden))),
        bn(make_param(prefix + "b_n", Eigen::MatrixXd::Zero(1, hidden))) {}

  /// Runs the recurrence over steps `order[0], order[1], ...` and fills
  /// h[order[i]] with the state after consuming that step.
  void run(const SeqBatch& x, const std::vector<int>& order, int hidden, bool cache) {
    int batch = x.batch;
    std::size_t steps = order.size();
    if (cache) {
      r.assign(steps, {});
      z.assign(steps, {});
      n.assign(steps, {});
      uh_n.assign(steps, {});
      h_prev.assign(steps, {});
    }
    h.assign(steps, {});

    Eigen::MatrixXd state = Eigen::MatrixXd::Zero(batch, hidden);
    for (std::size_t i = 0; i < steps; ++i) {
      int t = order[i];
      Eigen::MatrixXd xt = x.step(t);
      Eigen::MatrixXd rt =
          sigmoid(((xt * wr.values.transpose() + state * ur.values.transpose()).rowwise() +
                   br.values.row(0)));
      Eigen::MatrixXd zt =
          sigmoid(((xt * wz.values.transpose() + state * uz.values.transpose()).rowwise() +
                   bz.values.row(0)));
      Eigen::MatrixXd uhn = state * un.values.transpose();
      Eigen::MatrixXd nt =
          ((xt * wn.values.transpose() + rt.cwiseProduct(uhn)).rowwise() + bn.values.row(0))
              .array()
              .tanh();
      Eigen::MatrixXd next = (1.0 - zt.array()) * nt.array() + zt.array() * state.array();
      if (cache) {
        r[i] = rt;
        z[i] = zt;
        n[i] = nt;
        uh_n[i] = uhn;
        h_prev[i] = state;
      }
      h[i] = next;
      state = std::move(next);
    }
  }

  /// Backward through the same step order; dh_out[i] is the loss gradient
  /// arriving directly at h[order[i]]. Returns per-step input gradients.
  std::vector<Eigen::MatrixXd> run_backward(const SeqBatch& x, const std::vector<int>& order,
                                            const std::vector<Eigen::MatrixXd>& dh_out) {
    std::size_t steps = order.size();
    std::vector<Eigen::MatrixXd> dx(steps);
    Eigen::MatrixXd dh_next = Eigen::MatrixXd::Zero(x.batch, wr.values.rows());
    for (std::size_t i = steps; i-- > 0;) {
      int t = order[i];
      Eigen::MatrixXd xt = x.step(t);
      Eigen::MatrixXd dh = dh_next;
      if (dh_out[i].size() > 0) dh += dh_out[i];

      Eigen::ArrayXXd dn = dh.array() * (1.0 - z[i].array());
      Eigen::ArrayXXd dz = dh.array() * (h_prev[i].array() - n[i].array());
      Eigen::MatrixXd dh_prev = dh.cwiseProduct(z[i]);

      Eigen::MatrixXd da_n = (dn * (1.0 - n[i].array().square())).matrix();
      wn.grad += da_n.transpose() * xt;
      bn.grad += da_n.colwise().sum();
      Eigen::MatrixXd da_n_r = da_n.cwiseProduct(r[i]);
      un.grad += da_n_r.transpose() * h_prev[i];
      dh_prev += da_n_r * un.values;
      Eigen::MatrixXd dr = da_n.cwiseProduct(uh_n[i]);

      Eigen::MatrixXd da_r =
          (dr.array() * r[i].array() * (1.0 - r[i].array())).matrix();
      wr.grad += da_r.transpose() * xt;
      ur.grad += da_r.transpose() * h_prev[i];
      br.grad += da_r.colwise().sum();
      dh_prev += da_r * ur.values;

      Eigen::MatrixXd da_z = (dz * z[i].array() * (1.0 - z[i].array())).matrix();
      wz.grad += da_z.transpose() * xt;
      uz.grad += da_z.transpose() * h_prev[i];
      bz.grad += da_z.colwise().sum();
      dh_prev += da_z * uz.values;

      dx[i] = da_n * wn.values + da_r * wr.values + da_z * wz.values;
      dh_next = std::move(dh_prev);
    }
    return dx;
  }

  std::vector<ParamTensor*> params() {
    return {&wr, &wz, &wn, &ur, &uz, &un, &br, &bz, &bn};
  }
};

class GruLayer : public Layer {
 public:
  GruLayer(LayerSpec spec, const std::string& prefix, Rng& rng) : Layer(std::move(spec)) {
    fwd_ = std::make_unique<GruDirection>(spec_.in_dim, spec_.out_dim, prefix + "fwd.", rng);
    if (spec_.bidirectional)
      bwd_ = std::make_unique<GruDirection>(spec_.in_dim, spec_.out_dim, prefix + "bwd.", rng);
  }

  GruLayer(const GruLayer& other) : Layer(other.spec_) {
    fwd_ = std::make_unique<GruDirection>(*other.fwd_);
    if (other.bwd_) bwd_ = std::make_unique<GruDirection>(*other.bwd_);
    cached_input_ = other.cached_input_;
    have_cache_ = other.have_cache_;
  }

  SeqBatch forward_train(const SeqBatch& x, Rng&) override {
    check_input(x);
    cached_input_ = x;
    have_cache_ = true;
    return run(x, true);
  }

  SeqBatch forward_eval(const SeqBatch& x) const override {
    check_input(x);
    // The per-direction cache is scratch space, so eval runs on copies.
    GruDirection fwd = *fwd_;
    if (!bwd_) return run_on(x, fwd, nullptr);
    GruDirection bwd = *bwd_;
    return run_on(x, fwd, &bwd);
  }

  SeqBatch backward(const SeqBatch& dy) override {
    require_cache(have_cache_);
    have_cache_ = false;

    const SeqBatch& x = cached_input_;
    int hidden = spec_.out_dim;
    int time = x.time, batch = x.batch;

    // Split the output gradient into per-direction, per-step pieces.
    std::vector<Eigen::MatrixXd> dh_fwd(time), dh_bwd(time);
    if (spec_.return_sequences) {
      for (int t = 0; t < time; ++t) {
        Eigen::MatrixXd step = dy.step(t);
        dh_fwd[t] = step.leftCols(hidden);
        if (bwd_) dh_bwd[time - 1 - t] = step.rightCols(hidden);
      }
    } else {
      dh_fwd[time - 1] = dy.data.leftCols(hidden);
      if (bwd_) dh_bwd[time - 1] = dy.data.rightCols(hidden);
    }

    std::vector<int> order(static_cast<std::size_t>(time));
    for (int t = 0; t < time; ++t) order[t] = t;
    std::vector<Eigen::MatrixXd> dx_fwd = fwd_->run_backward(x, order, dh_fwd);

    Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(x.data.rows(), x.data.cols());
    for (int t = 0; t < time; ++t) dx.middleRows(t * batch, batch) = dx_fwd[t];

    if (bwd_) {
      std::vector<int> rev(order.rbegin(), order.rend());
      std::vector<Eigen::MatrixXd> dx_bwd = bwd_->run_backward(x, rev, dh_bwd);
      for (int i = 0; i < time; ++i)
        dx.middleRows(rev[i] * batch, batch) += dx_bwd[i];
    }
    return {std::move(dx), time, batch};
  }

  std::vector<ParamTensor*> params() override {
    std::vector<ParamTensor*> p = fwd_->params();
    if (bwd_) {
      std::vector<ParamTensor*> q = bwd_->params();
      p.insert(p.end(), q.begin(), q.end());
    }
    return p;
  }

  std::unique_ptr<Layer> clone() const override {
    return std::unique_ptr<Layer>(new GruLayer(*this));
  }

 private:
  SeqBatch run(const SeqBatch& x, bool cache) {
    return run_on(x, *fwd_, bwd_.get(), cache);
  }

  SeqBatch run_on(const SeqBatch& x, GruDirection& fwd, GruDirection* bwd,
                  bool cache = false) const {
    int hidden = spec_.out_dim;
    int time = x.time, batch = x.batch;
    std::vector<int> order(static_cast<std::size_t>(time));
    for (int t = 0; t < time; ++t) order[t] = t;
    fwd.run(x, order, hidden, cache);
    if (bwd) {
      std::vector<int> rev(order.rbegin(), order.rend());
      bwd->run(x, rev, hidden, cache);
    }

    int width = bwd ? 2 * hidden : hidden;
    SeqBatch out;
    out.batch = batch;
    if (spec_.return_sequences) {
      out.time = time;
      out.data.resize(static_cast<Eigen::Index>(time) * batch, width);
      for (int t = 0; t < time; ++t) {
        out.step(t).leftCols(hidden) = fwd.h[t];
        if (bwd) out.step(t).rightCols(hidden) = bwd->h[time - 1 - t];
      }
    } else {
      out.time = 1;
      out.data.resize(batch, width);
      out.data.leftCols(hidden) = fwd.h[time - 1];
      if (bwd) out.data.rightCols(hidden) = bwd->h[time - 1];
    }
    return out;
  }

  std::unique_ptr<GruDirection> fwd_, bwd_;
  SeqBatch cached_input_;
  bool have_cache_ = false;
};

}  // namespace

void Layer::check_input(const SeqBatch& x) const {
  if (x.dim() != spec_.in_dim)
    throw DataError("layer '" + spec_.kind + "' expects input dim " +
                    std::to_string(spec_.in_dim) + ", got " + std::to_string(x.dim()));
  if (x.batch <= 0 || x.time <= 0 ||
      x.data.rows() != static_cast<Eigen::Index>(x.time) * x.batch)
    throw DataError("batch rows must equal time * batch");
}

void Layer::require_cache(bool have) const {
  if (!have)
    throw Error("backward on layer '" + spec_.kind + "' without a cached train-mode forward");
}

namespace {
LayerSpec make_spec(std::string kind, int in, int out) {
  LayerSpec s;
  s.kind = std::move(kind);
  s.in_dim = in;
  s.out_dim = out;
  return s;
}
}  // namespace

LayerSpec affine(int in, int out) { return make_spec("affine", in, out); }
LayerSpec relu(int dim) { return make_spec("relu", dim, dim); }

LayerSpec batch_norm(int dim, double momentum, double eps) {
  LayerSpec s = make_spec("batch_norm", dim, dim);
  s.momentum = momentum;
  s.eps = eps;
  return s;
}

LayerSpec dropout(int dim, double p) {
  LayerSpec s = make_spec("dropout", dim, dim);
  s.dropout_p = p;
  return s;
}

LayerSpec gru(int in, int hidden, bool bidirectional, bool return_sequences) {
  LayerSpec s = make_spec("gru", in, hidden);
  s.bidirectional = bidirectional;
  s.return_sequences = return_sequences;
  return s;
}

LayerSpec linear_out(int in, int out) { return make_spec("linear_out", in, out); }

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const std::string& prefix, Rng& rng) {
  if (spec.in_dim <= 0 || spec.out_dim <= 0)
    throw ConfigError("layer '" + spec.kind + "' dims must be positive");
  if (spec.kind == "affine" || spec.kind == "linear_out")
    return std::make_unique<AffineLayer>(spec, prefix, rng);
  if (spec.kind == "relu") {
    if (spec.in_dim != spec.out_dim) throw ConfigError("relu dims must match");
    return std::make_unique<ReluLayer>(spec);
  }
  if (spec.kind == "batch_norm") {
    if (spec.in_dim != spec.out_dim) throw ConfigError("batch_norm dims must match");
    return std::make_unique<BatchNormLayer>(spec, prefix);
  }
  if (spec.kind == "dropout") {
    if (spec.in_dim != spec.out_dim) throw ConfigError("dropout dims must match");
    if (spec.dropout_p < 0.0 || spec.dropout_p >= 1.0)
      throw ConfigError("dropout_p must be in [0, 1)");
    return std::make_unique<DropoutLayer>(spec);
  }
  if (spec.kind == "gru") return std::make_unique<GruLayer>(spec, prefix, rng);
  throw ConfigError("unknown layer kind '" + spec.kind + "'");
}

}  // namespace gesturegen::nn
