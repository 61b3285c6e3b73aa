#pragma once

#include <Eigen/Core>

#include "dapcal/nnet.hpp"

namespace dapcal {

enum class TaskKind { classification, regression };

enum class NoiseKind { fixed, learned };

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// A likelihood-complete model: networks plus the observation model.
///   classification            p(y|theta,x) = Categorical(softmax(net(x)))
///   regression, fixed noise   p(y|theta,x) = N(net(x), fixed_noise_std^2)
///   regression, learned noise p(y|theta,x) = N(net(x), exp(2 logstd_net(x)))
/// The flat parameter vector is [net params, logstd_net params].
struct PredictiveModel {
  TaskKind task = TaskKind::classification;
  MlpModel net;
  NoiseKind noise = NoiseKind::fixed;
  double fixed_noise_std = 1.0;
  MlpModel logstd_net;  // used only when noise == learned

  int param_count() const;
  int num_classes() const { return net.output_dim(); }
  bool has_noise_net() const { return task == TaskKind::regression && noise == NoiseKind::learned; }
};

PredictiveModel make_classifier(MlpModel net);
PredictiveModel make_regressor(MlpModel mean_net, double fixed_noise_std);
PredictiveModel make_regressor(MlpModel mean_net, MlpModel logstd_net);

Eigen::VectorXd get_params(const PredictiveModel& model);
void set_params(PredictiveModel& model, const Eigen::VectorXd& theta);

/// Mask marking the parameters that participate in DAP reweighting. For
/// regression only the mean network's parameters are marked; for
/// classification every parameter is.
BoolArray default_mask(const PredictiveModel& model);

/// Mean negative log-likelihood of the batch at theta.
double mean_nll(const PredictiveModel& model, const Eigen::VectorXd& theta, const Dataset& batch);

/// Mean NLL plus its gradient with respect to theta.
double mean_nll_grad(const PredictiveModel& model, const Eigen::VectorXd& theta,
                     const Dataset& batch, Eigen::VectorXd& grad);

/// Diagonal of the generalized Gauss-Newton / Fisher information of the
/// negative log-likelihood, summed over the whole dataset. Always >= 0.
Eigen::VectorXd fisher_diag(const PredictiveModel& model, const Eigen::VectorXd& theta,
                            const Dataset& data);

/// Class probabilities (B x m) at theta; classification only.
Eigen::MatrixXd class_probs(const PredictiveModel& model, const Eigen::VectorXd& theta,
                            const Eigen::MatrixXd& inputs);

/// Predictive mean and observation variance per input; regression only.
void regression_params(const PredictiveModel& model, const Eigen::VectorXd& theta,
                       const Eigen::MatrixXd& inputs, Eigen::VectorXd& mean,
                       Eigen::VectorXd& var);

}  // namespace dapcal
