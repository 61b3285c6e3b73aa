#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace dapcal {

enum class Activation { tanh_act, relu };

enum class Loss { cross_entropy, gaussian_nll, mse };

/// Feed-forward network. All parameters live in one flat vector; per layer the
/// weight matrix comes first (out x in, row-major), then the bias. Hidden
/// layers are activated, the output layer is linear.
struct MlpModel {
  std::vector<int> layer_sizes;  // input dim first, output dim last
  Activation activation = Activation::tanh_act;
  Eigen::VectorXd params;

  int input_dim() const { return layer_sizes.front(); }
  int output_dim() const { return layer_sizes.back(); }
  int num_layers() const { return static_cast<int>(layer_sizes.size()) - 1; }
};

/// Training or validation data. Targets hold class indices (as doubles) for
/// classification and real scalars for regression.
struct Dataset {
  Eigen::MatrixXd inputs;   // N x D
  Eigen::VectorXd targets;  // N

  Eigen::Index size() const { return inputs.rows(); }
};

int param_count(const std::vector<int>& layer_sizes);

MlpModel make_mlp(std::vector<int> layer_sizes, Activation activation);

/// Per-layer scaled-uniform init in +-sqrt(6/(fan_in+fan_out)); biases zero.
void init_params(MlpModel& model, std::uint64_t seed);

/// Batch forward pass, B x output_dim. Row results do not depend on which
/// other rows are in the batch, so distances computed from features are
/// reproducible across batch compositions.
Eigen::MatrixXd forward(const MlpModel& model, const Eigen::MatrixXd& inputs);

/// Post-activation values of the last hidden layer (B x H). Requires >= 2 layers.
Eigen::MatrixXd features(const MlpModel& model, const Eigen::MatrixXd& inputs);

/// Forward pass that keeps every layer's post-activation for backprop.
struct ForwardCache {
  std::vector<Eigen::MatrixXd> acts;  // acts[0] = inputs, acts[k] = layer k output
};

Eigen::MatrixXd forward_cached(const MlpModel& model, const Eigen::MatrixXd& inputs,
                               ForwardCache& cache);

/// Reverse-mode vector-Jacobian product: gradient of sum_ij out_grad(i,j) *
/// output(i,j) with respect to the flat parameter vector.
Eigen::VectorXd backward(const MlpModel& model, const ForwardCache& cache,
                         const Eigen::MatrixXd& out_grad);

struct LossGrad {
  double loss = 0.0;
  Eigen::VectorXd grad;
};

/// Mean batch loss and its exact gradient.
///   cross_entropy: mean softmax cross-entropy, targets are class indices.
///   gaussian_nll:  heteroscedastic Gaussian negative log-likelihood; the
///                  model must have two outputs, [mean, log_std].
///   mse:           mean squared error, single-output models.
LossGrad grad_loss(const MlpModel& model, const Dataset& batch, Loss loss);

}  // namespace dapcal
