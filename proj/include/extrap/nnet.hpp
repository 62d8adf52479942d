#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "extrap/analysis.hpp"
#include "extrap/bases.hpp"
#include "extrap/datagen.hpp"
#include "extrap/domains.hpp"
#include "extrap/rng.hpp"

namespace extrap {

enum class Activation { identity, relu, tanh_act, snake };

inline const char* activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh_act: return "tanh";
    case Activation::snake: return "snake";
  }
  return "?";
}

inline Activation activation_from_name(const std::string& s) {
  if (s == "identity") return Activation::identity;
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh_act;
  if (s == "snake") return Activation::snake;
  throw std::invalid_argument("unknown activation: " + s);
}

struct Layer {
  Eigen::MatrixXd w;  // in x out
  Eigen::VectorXd b;  // out
  Activation act = Activation::identity;
  double snake_beta = 1.0;
  bool snake_beta_learnable = false;
};

/// Feed-forward network mapping sample values to basis coefficients.
/// Rows are samples: Z^(l) = A^(l-1) W^(l) + b^(l), A^(l) = act(Z^(l)).
/// The output layer is always an identity regression head.
struct Mlp {
  std::vector<Layer> layers;

  int input_size() const { return static_cast<int>(layers.front().w.rows()); }
  int output_size() const { return static_cast<int>(layers.back().w.cols()); }

  /// sizes = [input, hidden..., output]; hidden layers use `hidden_act`.
  /// Weights start uniform in +-1/sqrt(fan_in), biases at zero.
  static Mlp create(const std::vector<int>& sizes, Activation hidden_act, std::uint64_t seed,
                    bool snake_learnable = false, double snake_beta = 1.0) {
    if (sizes.size() < 2) throw std::invalid_argument("mlp: need at least two sizes");
    for (int s : sizes)
      if (s < 1) throw std::invalid_argument("mlp: layer sizes must be positive");
    Mlp net;
    Rng rng = Rng::stream(seed, 0x1417u);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
      Layer layer;
      layer.w.resize(sizes[l], sizes[l + 1]);
      double bound = 1.0 / std::sqrt(static_cast<double>(sizes[l]));
      for (Eigen::Index i = 0; i < layer.w.rows(); ++i)
        for (Eigen::Index j = 0; j < layer.w.cols(); ++j)
          layer.w(i, j) = rng.uniform(-bound, bound);
      layer.b = Eigen::VectorXd::Zero(sizes[l + 1]);
      bool last = l + 2 == sizes.size();
      layer.act = last ? Activation::identity : hidden_act;
      layer.snake_beta = snake_beta;
      layer.snake_beta_learnable = !last && hidden_act == Activation::snake && snake_learnable;
      net.layers.push_back(std::move(layer));
    }
    return net;
  }
};

namespace detail {

inline Eigen::MatrixXd apply_activation(Activation act, const Eigen::MatrixXd& z, double beta) {
  switch (act) {
    case Activation::identity:
      return z;
    case Activation::relu:
      return z.cwiseMax(0.0);
    case Activation::tanh_act:
      return z.array().tanh().matrix();
    case Activation::snake:
      return (z.array() + (beta * z.array()).sin().square()).matrix();
  }
  throw std::logic_error("bad activation");
}

inline Eigen::MatrixXd activation_derivative(Activation act, const Eigen::MatrixXd& z,
                                             double beta) {
  switch (act) {
    case Activation::identity:
      return Eigen::MatrixXd::Ones(z.rows(), z.cols());
    case Activation::relu:
      // subgradient 0 at the kink
      return (z.array() > 0.0).cast<double>().matrix();
    case Activation::tanh_act:
      return (1.0 - z.array().tanh().square()).matrix();
    case Activation::snake:
      return (1.0 + beta * (2.0 * beta * z.array()).sin()).matrix();
  }
  throw std::logic_error("bad activation");
}

}  // namespace detail

struct ForwardCache {
  std::vector<Eigen::MatrixXd> z;  // pre-activations, one per layer
  std::vector<Eigen::MatrixXd> a;  // a[0] = input, a[l] = activation of layer l
};

/// Batched forward pass; rows of x are samples.
inline Eigen::MatrixXd forward(const Mlp& net, const Eigen::MatrixXd& x,
                               ForwardCache* cache = nullptr) {
  if (x.cols() != net.input_size())
    throw std::invalid_argument("forward: input size mismatch");
  if (cache) {
    cache->z.clear();
    cache->a.clear();
    cache->a.push_back(x);
  }
  Eigen::MatrixXd a = x;
  for (const Layer& layer : net.layers) {
    Eigen::MatrixXd z = (a * layer.w).rowwise() + layer.b.transpose();
    a = detail::apply_activation(layer.act, z, layer.snake_beta);
    if (!a.allFinite()) throw std::runtime_error("forward: non-finite intermediate");
    if (cache) {
      cache->z.push_back(std::move(z));
      cache->a.push_back(a);
    }
  }
  return a;
}

/// Single-sample forward pass.
inline Eigen::VectorXd forward(const Mlp& net, const Eigen::VectorXd& x,
                               ForwardCache* cache = nullptr) {
  return forward(net, Eigen::MatrixXd(x.transpose()), cache).row(0).transpose();
}

struct Gradients {
  std::vector<Eigen::MatrixXd> dw;
  std::vector<Eigen::VectorXd> db;
  std::vector<double> dbeta;  // zero for non-snake layers
};

/// Reverse pass from dL/d(output); the cache must come from the matching
/// forward call.
inline Gradients backward(const Mlp& net, const ForwardCache& cache,
                          const Eigen::MatrixXd& dloss_dout) {
  std::size_t n_layers = net.layers.size();
  if (cache.z.size() != n_layers || cache.a.size() != n_layers + 1)
    throw std::invalid_argument("backward: stale or mismatched cache");
  if (dloss_dout.rows() != cache.a.back().rows() || dloss_dout.cols() != cache.a.back().cols())
    throw std::invalid_argument("backward: gradient shape mismatch");
  Gradients g;
  g.dw.resize(n_layers);
  g.db.resize(n_layers);
  g.dbeta.assign(n_layers, 0.0);
  Eigen::MatrixXd da = dloss_dout;
  for (std::size_t l = n_layers; l-- > 0;) {
    const Layer& layer = net.layers[l];
    Eigen::MatrixXd dz;
    if (layer.act == Activation::identity) {
      dz = std::move(da);
    } else {
      if (layer.act == Activation::snake) {
        double beta = layer.snake_beta;
        g.dbeta[l] = (da.array() * cache.z[l].array() *
                      (2.0 * beta * cache.z[l].array()).sin())
                         .sum();
      }
      dz = da.cwiseProduct(detail::activation_derivative(layer.act, cache.z[l], layer.snake_beta));
    }
    g.dw[l].noalias() = cache.a[l].transpose() * dz;
    g.db[l] = dz.colwise().sum();
    if (l > 0) da.noalias() = dz * layer.w.transpose();
  }
  return g;
}

/// The extrapolation-weighted coefficient loss delta^T G_xi delta with its
/// gradient 2 G_xi delta with respect to the prediction.
inline std::pair<double, Eigen::VectorXd> loss_core(const Eigen::VectorXd& pred,
                                                    const Eigen::VectorXd& truth,
                                                    const GramMatrix& gram_xi) {
  if (pred.size() != truth.size() || pred.size() != gram_xi.rows())
    throw std::invalid_argument("loss_core: dimension mismatch");
  Eigen::VectorXd delta = pred - truth;
  Eigen::VectorXd gd = gram_xi * delta;
  return {delta.dot(gd), 2.0 * gd};
}

/// Endpoint monotonicity penalty relu(g(x_start) - g(x_end)) on the basis
/// expansion of the predicted coefficients; subgradient 0 at the kink.
inline std::pair<double, Eigen::VectorXd> loss_ext_monotone(const BasisFamily& family,
                                                            const Eigen::VectorXd& pred,
                                                            const Point& x_start,
                                                            const Point& x_end) {
  Eigen::VectorXd diff = family.eval_all(x_start) - family.eval_all(x_end);
  double v = pred.dot(diff);
  if (v > 0.0) return {v, diff};
  return {0.0, Eigen::VectorXd::Zero(pred.size())};
}

/// Grid variant: sum of relu(g(x_i) - g(x_{i+1})) over consecutive points.
inline std::pair<double, Eigen::VectorXd> loss_ext_monotone_grid(
    const BasisFamily& family, const Eigen::VectorXd& pred, const std::vector<Point>& grid) {
  double total = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(pred.size());
  if (grid.size() < 2) return {total, grad};
  Eigen::VectorXd prev = family.eval_all(grid.front());
  for (std::size_t i = 1; i < grid.size(); ++i) {
    Eigen::VectorXd cur = family.eval_all(grid[i]);
    Eigen::VectorXd diff = prev - cur;
    double v = pred.dot(diff);
    if (v > 0.0) {
      total += v;
      grad += diff;
    }
    prev = std::move(cur);
  }
  return {total, grad};
}

struct TrainConfig {
  std::vector<int> hidden = {256, 256};
  Activation activation = Activation::relu;
  bool snake_learnable = false;
  double snake_beta = 1.0;
  double lambda_core = 1.0;
  double lambda_ext = 0.0;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int max_steps = 12000;
  int conv_window = 200;   // moving-average window for the stop rule
  double conv_tol = 1e-5;  // relative improvement threshold; <= 0 disables
  // Endpoints of the extrapolation penalty; NaN means "ends of xi".
  double ext_x_start = std::numeric_limits<double>::quiet_NaN();
  double ext_x_end = std::numeric_limits<double>::quiet_NaN();

  void validate() const {
    if (!(lambda_core > 0.0)) throw std::invalid_argument("train config: need lambda_core > 0");
    if (lambda_ext < 0.0) throw std::invalid_argument("train config: need lambda_ext >= 0");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("train config: need step size > 0");
    if (max_steps < 1) throw std::invalid_argument("train config: need max_steps >= 1");
    if (conv_window < 1) throw std::invalid_argument("train config: need conv_window >= 1");
  }
};

/// Mean batch loss lambda_core * L_core + lambda_ext * L_ext for a batch of
/// training pairs.
inline double total_loss(const std::vector<TrainingPair>& batch, const Mlp& net,
                         const GramMatrix& gram_xi, const TrainConfig& cfg,
                         const BasisFamily& family, const Point& ext_start,
                         const Point& ext_end) {
  if (batch.empty()) throw std::invalid_argument("total_loss: empty batch");
  double acc = 0.0;
  for (const auto& [samples, truth] : batch) {
    Eigen::VectorXd pred = forward(net, samples.values);
    acc += cfg.lambda_core * loss_core(pred, truth, gram_xi).first;
    if (cfg.lambda_ext > 0.0)
      acc += cfg.lambda_ext * loss_ext_monotone(family, pred, ext_start, ext_end).first;
  }
  return acc / static_cast<double>(batch.size());
}

struct AdamState {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<Eigen::MatrixXd> mw, vw;
  std::vector<Eigen::VectorXd> mb, vb;
  std::vector<double> mbeta, vbeta;

  static AdamState init(const Mlp& net, double lr, double b1, double b2, double eps_) {
    AdamState st;
    st.learning_rate = lr;
    st.beta1 = b1;
    st.beta2 = b2;
    st.eps = eps_;
    for (const Layer& layer : net.layers) {
      st.mw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
      st.vw.push_back(Eigen::MatrixXd::Zero(layer.w.rows(), layer.w.cols()));
      st.mb.push_back(Eigen::VectorXd::Zero(layer.b.size()));
      st.vb.push_back(Eigen::VectorXd::Zero(layer.b.size()));
      st.mbeta.push_back(0.0);
      st.vbeta.push_back(0.0);
    }
    return st;
  }
};

/// One bias-corrected adaptive moment update over all learnable parameters.
inline void adam_step(Mlp& net, const Gradients& grads, AdamState& st) {
  if (grads.dw.size() != net.layers.size())
    throw std::invalid_argument("adam_step: gradient/parameter mismatch");
  st.step++;
  double c1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.step));
  double c2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.step));
  auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
    m = st.beta1 * m + (1.0 - st.beta1) * g;
    v = st.beta2 * v + (1.0 - st.beta2) * g.cwiseProduct(g);
    param.array() -=
        st.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + st.eps);
  };
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    update(net.layers[l].w, st.mw[l], st.vw[l], grads.dw[l]);
    update(net.layers[l].b, st.mb[l], st.vb[l], grads.db[l]);
    if (net.layers[l].snake_beta_learnable) {
      double g = grads.dbeta[l];
      st.mbeta[l] = st.beta1 * st.mbeta[l] + (1.0 - st.beta1) * g;
      st.vbeta[l] = st.beta2 * st.vbeta[l] + (1.0 - st.beta2) * g * g;
      net.layers[l].snake_beta -=
          st.learning_rate * (st.mbeta[l] / c1) / (std::sqrt(st.vbeta[l] / c2) + st.eps);
    }
  }
}

struct TrainResult {
  Mlp net;
  std::vector<double> loss_history;  // one entry per step
  int steps = 0;
  bool converged_early = false;
};

// Training pair substreams start here so validation sets drawn from low
// stream ids never collide with them.
inline constexpr std::uint64_t kTrainStreamBase = 1ull << 32;

/// Trains the network of Algorithm style: fresh synthetic batches each step,
/// extrapolation-weighted coefficient loss, Adam updates. Stops at max_steps
/// or when the conv_window moving average of the loss improves by less than
/// conv_tol relative to the previous window.
inline TrainResult train(const GenConfig& gen_cfg, const TrainConfig& train_cfg,
                         const BasisFamily& family, const Domain& omega, const Domain& xi,
                         const std::shared_ptr<const std::vector<Point>>& sample_points,
                         std::uint64_t seed) {
  train_cfg.validate();
  gen_cfg.validate(family.dimension());
  if (!sample_points || sample_points->empty())
    throw std::invalid_argument("train: empty sample point set");
  int n_in = static_cast<int>(sample_points->size());
  int d = family.dimension();

  GramMatrix gram_xi = gram_matrix(xi, family);
  GramMatrix gram_omega;
  if (gen_cfg.norm == NormMode::function_omega) gram_omega = gram_matrix(omega, family);
  Domain monotone_dom = gen_cfg.monotone && omega.is_interval() && xi.is_interval()
                            ? Domain::unite(omega, xi)
                            : omega;
  if (gen_cfg.monotone && !(omega.is_interval() && xi.is_interval()))
    throw std::invalid_argument("train: monotone projection needs interval domains");

  Eigen::VectorXd ext_diff = Eigen::VectorXd::Zero(d);
  if (train_cfg.lambda_ext > 0.0) {
    if (!xi.is_interval())
      throw std::invalid_argument("train: endpoint penalty needs an interval domain");
    double x0 = std::isnan(train_cfg.ext_x_start) ? xi.left_end() : train_cfg.ext_x_start;
    double x1 = std::isnan(train_cfg.ext_x_end) ? xi.right_end() : train_cfg.ext_x_end;
    if (!xi.contains(Point::interval(x0)) || !xi.contains(Point::interval(x1)))
      throw std::invalid_argument("train: penalty points outside the extrapolation domain");
    ext_diff = family.eval_all(Point::interval(x0)) - family.eval_all(Point::interval(x1));
  }

  std::vector<int> sizes;
  sizes.push_back(n_in);
  for (int h : train_cfg.hidden) sizes.push_back(h);
  sizes.push_back(d);
  Mlp net = Mlp::create(sizes, train_cfg.activation, seed, train_cfg.snake_learnable,
                        train_cfg.snake_beta);
  AdamState adam = AdamState::init(net, train_cfg.learning_rate, train_cfg.adam_beta1,
                                   train_cfg.adam_beta2, train_cfg.adam_eps);

  TrainResult result;
  int n = gen_cfg.n_batch;
  Eigen::MatrixXd x(n, n_in), truth(n, d);
  for (int step = 0; step < train_cfg.max_steps; ++step) {
    std::uint64_t offset = kTrainStreamBase + static_cast<std::uint64_t>(step) *
                                                  static_cast<std::uint64_t>(n);
    auto batch = make_batch(gen_cfg, family, sample_points, seed, offset,
                            &monotone_dom, gen_cfg.norm == NormMode::function_omega
                                               ? &gram_omega
                                               : nullptr);
    for (int j = 0; j < n; ++j) {
      x.row(j) = batch[static_cast<std::size_t>(j)].first.values.transpose();
      truth.row(j) = batch[static_cast<std::size_t>(j)].second.transpose();
    }
    ForwardCache cache;
    Eigen::MatrixXd pred = forward(net, x, &cache);
    Eigen::MatrixXd delta = pred - truth;
    Eigen::MatrixXd delta_g = delta * gram_xi;
    double loss = train_cfg.lambda_core *
                  delta_g.cwiseProduct(delta).sum() / static_cast<double>(n);
    Eigen::MatrixXd dloss = (2.0 * train_cfg.lambda_core / n) * delta_g;
    if (train_cfg.lambda_ext > 0.0) {
      Eigen::VectorXd v = pred * ext_diff;
      for (int j = 0; j < n; ++j)
        if (v[j] > 0.0) {
          loss += train_cfg.lambda_ext * v[j] / static_cast<double>(n);
          dloss.row(j) += (train_cfg.lambda_ext / n) * ext_diff.transpose();
        }
    }
    if (!std::isfinite(loss))
      throw std::runtime_error("train: loss diverged at step " + std::to_string(step));
    adam_step(net, backward(net, cache, dloss), adam);
    result.loss_history.push_back(loss);
    result.steps = step + 1;
    int w = train_cfg.conv_window;
    if (train_cfg.conv_tol > 0.0 && result.steps % w == 0 && result.steps >= 2 * w) {
      auto window_mean = [&](int from) {
        double s = 0.0;
        for (int i = from; i < from + w; ++i) s += result.loss_history[static_cast<std::size_t>(i)];
        return s / w;
      };
      double prev = window_mean(result.steps - 2 * w);
      double cur = window_mean(result.steps - w);
      if (prev > 0.0 && (prev - cur) / prev < train_cfg.conv_tol) {
        result.converged_early = true;
        break;
      }
    }
  }
  result.net = std::move(net);
  return result;
}

/// Runs the network on a sample set and evaluates the predicted coefficient
/// expansion at the given points.
inline Eigen::VectorXd predict_extrapolation(const Mlp& net, const SampleSet& samples,
                                             const BasisFamily& family,
                                             const std::vector<Point>& eval_points) {
  if (samples.size() != net.input_size())
    throw std::invalid_argument("predict: sample count does not match the network input");
  Eigen::VectorXd coeffs = forward(net, Eigen::VectorXd(samples.values));
  Eigen::VectorXd out(static_cast<Eigen::Index>(eval_points.size()));
  for (std::size_t i = 0; i < eval_points.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = family.eval_function(coeffs, eval_points[i]);
  return out;
}

/// Network output coefficients for a sample set.
inline Eigen::VectorXd predict_coefficients(const Mlp& net, const SampleSet& samples) {
  if (samples.size() != net.input_size())
    throw std::invalid_argument("predict: sample count does not match the network input");
  return forward(net, Eigen::VectorXd(samples.values));
}

}  // namespace extrap
