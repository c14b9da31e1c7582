#pragma once

// Quantile heads: a small dense network trained with pinball loss to emit
// per-sample lower/upper quantile estimates for angle and magnitude. Four
// outputs: (angle_lo, angle_hi, mag_lo, mag_hi). Angle outputs are squashed
// to (-pi, pi) with pi*tanh, magnitude outputs to (0, sqrt(2)) with a scaled
// sigmoid, so the heads can never leave the representable range.

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include <json.hpp>

#include "polarcp/dataset.hpp"

namespace polarcp {

struct TrainConfig {
  int epochs = 500;
  int batch_size = 64;
  double learning_rate = 0.01;
  double momentum = 0.9;
  // Final fraction of epochs over which the learning rate decays linearly to
  // zero. Plain constant-rate SGD with momentum keeps hopping across the
  // pinball kink near convergence; the short anneal settles it without
  // changing where the optimum is.
  double anneal_fraction = 0.4;
  std::vector<int> hidden_sizes = {32, 32};
  std::uint64_t seed = 0;
};

struct DenseLayer {
  int in_dim = 0;
  int out_dim = 0;
  std::vector<double> weights;  // row-major [out_dim][in_dim]
  std::vector<double> biases;   // [out_dim]
};

struct QuantilePrediction {
  double angle_lo = 0.0;
  double angle_hi = 0.0;
  double mag_lo = 0.0;
  double mag_hi = 0.0;
};

// Everything the backward pass (and the finite-difference tests) need from a
// forward pass: pre-activations and the input fed to each layer.
struct ForwardTrace {
  std::vector<std::vector<double>> inputs;  // inputs[l] = input to layer l
  std::vector<std::vector<double>> pre;     // pre[l] = W*x + b at layer l
  std::array<double, 4> outputs{};          // after output activations
};

struct QuantileHeads {
  std::vector<DenseLayer> layers;  // hidden layers (ReLU) then 4-unit output
  double alpha = 0.1;              // miscoverage level the heads target

  int feature_dim() const {
    return layers.empty() ? 0 : layers.front().in_dim;
  }

  // Raw head outputs in network order, no crossing repair.
  std::array<double, 4> raw_outputs(std::span<const double> features) const;

  ForwardTrace forward_trace(std::span<const double> features) const;

  // Crossed pairs (lo > hi) are swapped before returning, so the prediction
  // always satisfies angle_lo <= angle_hi and mag_lo <= mag_hi.
  QuantilePrediction predict(std::span<const double> features) const;
};

// Pinball (quantile) loss at level tau and its derivative in the prediction.
// At the kink y == y_hat the derivative takes the y <= y_hat branch, (1-tau).
double pinball_loss(double y, double y_hat, double tau);
double pinball_gradient(double y, double y_hat, double tau);

// Per-sample training loss: mean of the four pinball terms, lower heads at
// tau = alpha/2 and upper heads at tau = 1 - alpha/2.
double sample_loss(const QuantileHeads& heads, std::span<const double> features,
                   double gt_angle, double gt_mag);

struct LayerGrad {
  std::vector<double> weights;
  std::vector<double> biases;
};

// Analytic gradient of sample_loss in every weight and bias, via
// backpropagation. Shapes mirror heads.layers.
std::vector<LayerGrad> sample_gradient(const QuantileHeads& heads,
                                       std::span<const double> features,
                                       double gt_angle, double gt_mag);

double mean_loss(const QuantileHeads& heads, std::span<const Sample> data);

// Minibatch SGD with momentum; weight init uniform in [-r, r], r =
// 1/sqrt(fan_in), biases zero, all randomness from config.seed. Training is
// bit-reproducible: same data, alpha and config give identical weights.
QuantileHeads train_quantile_heads(std::span<const Sample> data, double alpha,
                                   const TrainConfig& config);

// JSON round trip is exact: doubles survive serialize/parse bit-for-bit.
nlohmann::json heads_to_json(const QuantileHeads& heads);
QuantileHeads heads_from_json(const nlohmann::json& j);
void save_heads(const std::filesystem::path& path, const QuantileHeads& heads);
QuantileHeads load_heads(const std::filesystem::path& path);

}  // namespace polarcp
