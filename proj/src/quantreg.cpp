#include "polarcp/quantreg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "polarcp/errors.hpp"
#include "polarcp/geometry.hpp"

namespace polarcp {

namespace {

// Output order: [angle_lo, angle_hi, mag_lo, mag_hi].
double output_activation(int unit, double z) {
  if (unit < 2) return kPi * std::tanh(z);
  return kMaxMagnitude / (1.0 + std::exp(-z));
}

// Derivative of the output activation expressed through the activated value,
// which the backward pass already has.
double output_activation_grad(int unit, double o) {
  if (unit < 2) return kPi - o * o / kPi;       // pi * (1 - tanh^2)
  return o * (1.0 - o / kMaxMagnitude);         // sqrt2 * sigma * (1 - sigma)
}

void check_feature_dim(const QuantileHeads& heads,
                       std::span<const double> features) {
  if (static_cast<int>(features.size()) != heads.feature_dim()) {
    throw ValidationError("quantile heads: feature size " +
                          std::to_string(features.size()) + " does not match " +
                          std::to_string(heads.feature_dim()));
  }
}

std::array<double, 2> taus(double alpha) {
  return {alpha / 2.0, 1.0 - alpha / 2.0};
}

}  // namespace

std::array<double, 4> QuantileHeads::raw_outputs(
    std::span<const double> features) const {
  return forward_trace(features).outputs;
}

ForwardTrace QuantileHeads::forward_trace(
    std::span<const double> features) const {
  check_feature_dim(*this, features);
  ForwardTrace trace;
  trace.inputs.reserve(layers.size());
  trace.pre.reserve(layers.size());

  std::vector<double> x(features.begin(), features.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const DenseLayer& layer = layers[l];
    trace.inputs.push_back(x);
    std::vector<double> z(layer.out_dim, 0.0);
    for (int o = 0; o < layer.out_dim; ++o) {
      const double* row = layer.weights.data() +
                          static_cast<std::size_t>(o) * layer.in_dim;
      double acc = layer.biases[o];
      for (int i = 0; i < layer.in_dim; ++i) acc += row[i] * x[i];
      z[o] = acc;
    }
    trace.pre.push_back(z);
    if (l + 1 < layers.size()) {
      x.assign(layer.out_dim, 0.0);
      for (int o = 0; o < layer.out_dim; ++o) x[o] = std::max(0.0, z[o]);
    } else {
      for (int o = 0; o < 4; ++o) trace.outputs[o] = output_activation(o, z[o]);
    }
  }
  return trace;
}

QuantilePrediction QuantileHeads::predict(
    std::span<const double> features) const {
  auto out = raw_outputs(features);
  QuantilePrediction p{out[0], out[1], out[2], out[3]};
  if (p.angle_lo > p.angle_hi) std::swap(p.angle_lo, p.angle_hi);
  if (p.mag_lo > p.mag_hi) std::swap(p.mag_lo, p.mag_hi);
  return p;
}

double pinball_loss(double y, double y_hat, double tau) {
  if (y > y_hat) return tau * (y - y_hat);
  return (1.0 - tau) * (y_hat - y);
}

double pinball_gradient(double y, double y_hat, double tau) {
  if (y > y_hat) return -tau;
  return 1.0 - tau;
}

double sample_loss(const QuantileHeads& heads, std::span<const double> features,
                   double gt_angle, double gt_mag) {
  const auto out = heads.raw_outputs(features);
  const auto [tau_lo, tau_hi] = taus(heads.alpha);
  return 0.25 * (pinball_loss(gt_angle, out[0], tau_lo) +
                 pinball_loss(gt_angle, out[1], tau_hi) +
                 pinball_loss(gt_mag, out[2], tau_lo) +
                 pinball_loss(gt_mag, out[3], tau_hi));
}

std::vector<LayerGrad> sample_gradient(const QuantileHeads& heads,
                                       std::span<const double> features,
                                       double gt_angle, double gt_mag) {
  const ForwardTrace trace = heads.forward_trace(features);
  const std::size_t n_layers = heads.layers.size();
  std::vector<LayerGrad> grads(n_layers);
  for (std::size_t l = 0; l < n_layers; ++l) {
    grads[l].weights.assign(heads.layers[l].weights.size(), 0.0);
    grads[l].biases.assign(heads.layers[l].biases.size(), 0.0);
  }

  // Delta at the output layer: dL/dz through the pinball terms and output
  // activations.
  const auto [tau_lo, tau_hi] = taus(heads.alpha);
  const std::array<double, 4> target{gt_angle, gt_angle, gt_mag, gt_mag};
  const std::array<double, 4> tau{tau_lo, tau_hi, tau_lo, tau_hi};
  std::vector<double> delta(4, 0.0);
  for (int o = 0; o < 4; ++o) {
    const double d_loss =
        0.25 * pinball_gradient(target[o], trace.outputs[o], tau[o]);
    delta[o] = d_loss * output_activation_grad(o, trace.outputs[o]);
  }

  for (std::size_t l = n_layers; l-- > 0;) {
    const DenseLayer& layer = heads.layers[l];
    const std::vector<double>& x = trace.inputs[l];
    for (int o = 0; o < layer.out_dim; ++o) {
      double* grow = grads[l].weights.data() +
                     static_cast<std::size_t>(o) * layer.in_dim;
      for (int i = 0; i < layer.in_dim; ++i) grow[i] = delta[o] * x[i];
      grads[l].biases[o] = delta[o];
    }
    if (l == 0) break;
    std::vector<double> prev(layer.in_dim, 0.0);
    for (int i = 0; i < layer.in_dim; ++i) {
      double acc = 0.0;
      for (int o = 0; o < layer.out_dim; ++o) {
        acc += delta[o] * layer.weights[static_cast<std::size_t>(o) * layer.in_dim + i];
      }
      // ReLU mask from the previous layer's pre-activation; the kink at 0
      // takes the inactive branch.
      prev[i] = trace.pre[l - 1][i] > 0.0 ? acc : 0.0;
    }
    delta = std::move(prev);
  }
  return grads;
}

double mean_loss(const QuantileHeads& heads, std::span<const Sample> data) {
  if (data.empty()) throw ValidationError("mean_loss: empty dataset");
  double acc = 0.0;
  for (const Sample& s : data) {
    acc += sample_loss(heads, s.features, s.gt_angle, s.gt_mag);
  }
  return acc / static_cast<double>(data.size());
}

QuantileHeads train_quantile_heads(std::span<const Sample> data, double alpha,
                                   const TrainConfig& config) {
  if (data.empty()) throw ValidationError("train: empty dataset");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValidationError("train: alpha must be in (0, 1)");
  if (config.epochs < 1) throw ValidationError("train: epochs must be >= 1");
  if (config.batch_size < 1)
    throw ValidationError("train: batch_size must be >= 1");
  if (!(config.learning_rate > 0.0))
    throw ValidationError("train: learning_rate must be > 0");
  if (!(config.momentum >= 0.0 && config.momentum < 1.0))
    throw ValidationError("train: momentum must be in [0, 1)");
  if (!(config.anneal_fraction >= 0.0 && config.anneal_fraction <= 1.0))
    throw ValidationError("train: anneal_fraction must be in [0, 1]");
  for (int h : config.hidden_sizes) {
    if (h < 1) throw ValidationError("train: hidden layer sizes must be >= 1");
  }
  const int feature_dim = static_cast<int>(data.front().features.size());
  if (feature_dim < 1) throw ValidationError("train: empty feature vectors");
  for (const Sample& s : data) {
    if (static_cast<int>(s.features.size()) != feature_dim)
      throw ValidationError("train: inconsistent feature dimensions");
  }

  std::mt19937_64 rng(config.seed);

  QuantileHeads heads;
  heads.alpha = alpha;
  int in_dim = feature_dim;
  std::vector<int> dims = config.hidden_sizes;
  dims.push_back(4);
  for (int out_dim : dims) {
    DenseLayer layer;
    layer.in_dim = in_dim;
    layer.out_dim = out_dim;
    const double r = 1.0 / std::sqrt(static_cast<double>(in_dim));
    std::uniform_real_distribution<double> u(-r, r);
    layer.weights.resize(static_cast<std::size_t>(out_dim) * in_dim);
    for (double& w : layer.weights) w = u(rng);
    layer.biases.assign(out_dim, 0.0);
    heads.layers.push_back(std::move(layer));
    in_dim = out_dim;
  }

  std::vector<LayerGrad> velocity(heads.layers.size());
  std::vector<LayerGrad> batch_grad(heads.layers.size());
  for (std::size_t l = 0; l < heads.layers.size(); ++l) {
    velocity[l].weights.assign(heads.layers[l].weights.size(), 0.0);
    velocity[l].biases.assign(heads.layers[l].biases.size(), 0.0);
    batch_grad[l].weights.assign(heads.layers[l].weights.size(), 0.0);
    batch_grad[l].biases.assign(heads.layers[l].biases.size(), 0.0);
  }

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  const int n_anneal = static_cast<int>(
      std::floor(config.anneal_fraction * static_cast<double>(config.epochs)));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double lr = config.learning_rate;
    if (n_anneal > 0 && epoch >= config.epochs - n_anneal) {
      lr *= static_cast<double>(config.epochs - epoch) /
            static_cast<double>(n_anneal);
    }
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const double inv_batch = 1.0 / static_cast<double>(stop - start);
      for (auto& g : batch_grad) {
        std::fill(g.weights.begin(), g.weights.end(), 0.0);
        std::fill(g.biases.begin(), g.biases.end(), 0.0);
      }
      for (std::size_t k = start; k < stop; ++k) {
        const Sample& s = data[order[k]];
        const auto g = sample_gradient(heads, s.features, s.gt_angle, s.gt_mag);
        for (std::size_t l = 0; l < g.size(); ++l) {
          for (std::size_t i = 0; i < g[l].weights.size(); ++i)
            batch_grad[l].weights[i] += g[l].weights[i];
          for (std::size_t i = 0; i < g[l].biases.size(); ++i)
            batch_grad[l].biases[i] += g[l].biases[i];
        }
      }
      for (std::size_t l = 0; l < heads.layers.size(); ++l) {
        for (std::size_t i = 0; i < heads.layers[l].weights.size(); ++i) {
          velocity[l].weights[i] = config.momentum * velocity[l].weights[i] -
                                   lr * batch_grad[l].weights[i] * inv_batch;
          heads.layers[l].weights[i] += velocity[l].weights[i];
        }
        for (std::size_t i = 0; i < heads.layers[l].biases.size(); ++i) {
          velocity[l].biases[i] = config.momentum * velocity[l].biases[i] -
                                  lr * batch_grad[l].biases[i] * inv_batch;
          heads.layers[l].biases[i] += velocity[l].biases[i];
        }
      }
    }
  }
  return heads;
}

nlohmann::json heads_to_json(const QuantileHeads& heads) {
  nlohmann::json layers = nlohmann::json::array();
  for (const DenseLayer& layer : heads.layers) {
    layers.push_back({{"in_dim", layer.in_dim},
                      {"out_dim", layer.out_dim},
                      {"weights", layer.weights},
                      {"biases", layer.biases}});
  }
  return {{"alpha", heads.alpha}, {"layers", layers}};
}

QuantileHeads heads_from_json(const nlohmann::json& j) {
  QuantileHeads heads;
  try {
    heads.alpha = j.at("alpha").get<double>();
    for (const auto& jl : j.at("layers")) {
      DenseLayer layer;
      layer.in_dim = jl.at("in_dim").get<int>();
      layer.out_dim = jl.at("out_dim").get<int>();
      layer.weights = jl.at("weights").get<std::vector<double>>();
      layer.biases = jl.at("biases").get<std::vector<double>>();
      if (layer.in_dim < 1 || layer.out_dim < 1 ||
          layer.weights.size() !=
              static_cast<std::size_t>(layer.in_dim) * layer.out_dim ||
          layer.biases.size() != static_cast<std::size_t>(layer.out_dim)) {
        throw ValidationError("heads_from_json: inconsistent layer shape");
      }
      heads.layers.push_back(std::move(layer));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("heads_from_json: ") + e.what());
  }
  if (heads.layers.empty() || heads.layers.back().out_dim != 4)
    throw ValidationError("heads_from_json: output layer must have 4 units");
  for (std::size_t l = 1; l < heads.layers.size(); ++l) {
    if (heads.layers[l].in_dim != heads.layers[l - 1].out_dim)
      throw ValidationError("heads_from_json: layer dimensions do not chain");
  }
  return heads;
}

void save_heads(const std::filesystem::path& path, const QuantileHeads& heads) {
  std::ofstream os(path);
  if (!os) throw IoError("save_heads: cannot open for writing: " + path.string());
  os << heads_to_json(heads).dump(2) << "\n";
  os.flush();
  if (!os) throw IoError("save_heads: write failed: " + path.string());
}

QuantileHeads load_heads(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("load_heads: cannot open for reading: " + path.string());
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("load_heads: bad JSON: ") + e.what());
  }
  return heads_from_json(j);
}

}  // namespace polarcp
