#include "dapcal/nnet.hpp"

#include <cmath>
#include <string>

#include "dapcal/errors.hpp"
#include "dapcal/rng.hpp"

namespace dapcal {

namespace {

void check_architecture(const std::vector<int>& layer_sizes) {
  if (layer_sizes.size() < 2) throw ConfigError("MlpModel needs at least one layer (two sizes)");
  for (int s : layer_sizes) {
    if (s <= 0) throw ConfigError("layer sizes must be positive");
  }
}

inline double activate(double z, Activation a) {
  return a == Activation::tanh_act ? std::tanh(z) : (z > 0.0 ? z : 0.0);
}

// Derivative expressed through the post-activation value.
inline double activate_deriv(double out, Activation a) {
  return a == Activation::tanh_act ? 1.0 - out * out : (out > 0.0 ? 1.0 : 0.0);
}

// One linear layer, plain loops. The accumulation order per output element is
// fixed by the inner loop, so a row's result is bit-identical whether it is
// evaluated alone or inside a larger batch.
void linear_layer(const Eigen::MatrixXd& in, const double* w, const double* b, int n_in,
                  int n_out, Eigen::MatrixXd& out) {
  const Eigen::Index rows = in.rows();
  out.resize(rows, n_out);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (int o = 0; o < n_out; ++o) {
      const double* wrow = w + static_cast<std::ptrdiff_t>(o) * n_in;
      double z = b[o];
      for (int i = 0; i < n_in; ++i) z += in(r, i) * wrow[i];
      out(r, o) = z;
    }
  }
}

}  // namespace

int param_count(const std::vector<int>& layer_sizes) {
  check_architecture(layer_sizes);
  int n = 0;
  for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
    n += (layer_sizes[k] + 1) * layer_sizes[k + 1];
  }
  return n;
}

MlpModel make_mlp(std::vector<int> layer_sizes, Activation activation) {
  MlpModel m;
  m.layer_sizes = std::move(layer_sizes);
  m.activation = activation;
  m.params = Eigen::VectorXd::Zero(param_count(m.layer_sizes));
  return m;
}

void init_params(MlpModel& model, std::uint64_t seed) {
  int off = 0;
  for (int k = 0; k < model.num_layers(); ++k) {
    const int n_in = model.layer_sizes[k];
    const int n_out = model.layer_sizes[k + 1];
    const double limit = std::sqrt(6.0 / static_cast<double>(n_in + n_out));
    Rng rng(stream_seed(seed, static_cast<std::uint64_t>(k)));
    for (int i = 0; i < n_in * n_out; ++i) model.params[off + i] = rng.uniform(-limit, limit);
    for (int i = 0; i < n_out; ++i) model.params[off + n_in * n_out + i] = 0.0;
    off += (n_in + 1) * n_out;
  }
}

Eigen::MatrixXd forward_cached(const MlpModel& model, const Eigen::MatrixXd& inputs,
                               ForwardCache& cache) {
  check_architecture(model.layer_sizes);
  if (inputs.cols() != model.input_dim()) {
    throw ConfigError("forward: input dim " + std::to_string(inputs.cols()) +
                      " != layer_sizes[0] = " + std::to_string(model.input_dim()));
  }
  if (model.params.size() != param_count(model.layer_sizes)) {
    throw ConfigError("forward: parameter vector length does not match architecture");
  }
  const int L = model.num_layers();
  cache.acts.assign(static_cast<std::size_t>(L) + 1, Eigen::MatrixXd());
  cache.acts[0] = inputs;
  int off = 0;
  for (int k = 0; k < L; ++k) {
    const int n_in = model.layer_sizes[k];
    const int n_out = model.layer_sizes[k + 1];
    const double* w = model.params.data() + off;
    const double* b = w + n_in * n_out;
    linear_layer(cache.acts[k], w, b, n_in, n_out, cache.acts[k + 1]);
    if (k + 1 < L) {
      auto& a = cache.acts[k + 1];
      for (Eigen::Index r = 0; r < a.rows(); ++r) {
        for (int o = 0; o < n_out; ++o) a(r, o) = activate(a(r, o), model.activation);
      }
    }
    off += (n_in + 1) * n_out;
  }
  return cache.acts.back();
}

Eigen::MatrixXd forward(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  ForwardCache cache;
  return forward_cached(model, inputs, cache);
}

Eigen::MatrixXd features(const MlpModel& model, const Eigen::MatrixXd& inputs) {
  if (model.num_layers() < 2) {
    throw ConfigError("features: model has a single layer, no hidden representation");
  }
  ForwardCache cache;
  forward_cached(model, inputs, cache);
  return cache.acts[cache.acts.size() - 2];
}

Eigen::VectorXd backward(const MlpModel& model, const ForwardCache& cache,
                         const Eigen::MatrixXd& out_grad) {
  const int L = model.num_layers();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(model.params.size());

  std::vector<int> offsets(static_cast<std::size_t>(L), 0);
  int off = 0;
  for (int k = 0; k < L; ++k) {
    offsets[static_cast<std::size_t>(k)] = off;
    off += (model.layer_sizes[k] + 1) * model.layer_sizes[k + 1];
  }

  Eigen::MatrixXd delta = out_grad;  // d loss / d (layer output), B x n_out
  for (int k = L - 1; k >= 0; --k) {
    const int n_in = model.layer_sizes[k];
    const int n_out = model.layer_sizes[k + 1];
    const Eigen::MatrixXd& a_in = cache.acts[static_cast<std::size_t>(k)];
    double* gw = grad.data() + offsets[static_cast<std::size_t>(k)];
    double* gb = gw + n_in * n_out;
    const Eigen::Index rows = delta.rows();
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (int o = 0; o < n_out; ++o) {
        const double d = delta(r, o);
        if (d == 0.0) continue;
        double* gwrow = gw + static_cast<std::ptrdiff_t>(o) * n_in;
        for (int i = 0; i < n_in; ++i) gwrow[i] += d * a_in(r, i);
        gb[o] += d;
      }
    }
    if (k > 0) {
      const double* w = model.params.data() + offsets[static_cast<std::size_t>(k)];
      Eigen::MatrixXd prev(rows, n_in);
      for (Eigen::Index r = 0; r < rows; ++r) {
        for (int i = 0; i < n_in; ++i) {
          double s = 0.0;
          for (int o = 0; o < n_out; ++o) s += delta(r, o) * w[o * n_in + i];
          prev(r, i) = s * activate_deriv(a_in(r, i), model.activation);
        }
      }
      delta = std::move(prev);
    }
  }
  return grad;
}

LossGrad grad_loss(const MlpModel& model, const Dataset& batch, Loss loss) {
  if (batch.size() == 0) throw ConfigError("grad_loss: empty batch");
  ForwardCache cache;
  const Eigen::MatrixXd out = forward_cached(model, batch.inputs, cache);
  const Eigen::Index B = out.rows();
  const int m = static_cast<int>(out.cols());
  const double inv_b = 1.0 / static_cast<double>(B);

  double total = 0.0;
  Eigen::MatrixXd og(B, m);

  switch (loss) {
    case Loss::cross_entropy: {
      for (Eigen::Index r = 0; r < B; ++r) {
        const int y = static_cast<int>(batch.targets[r]);
        if (y < 0 || y >= m) {
          throw ConfigError("cross_entropy: class index " + std::to_string(y) +
                            " out of range [0, " + std::to_string(m) + ")");
        }
        double zmax = out(r, 0);
        for (int c = 1; c < m; ++c) zmax = std::max(zmax, out(r, c));
        double sum = 0.0;
        for (int c = 0; c < m; ++c) sum += std::exp(out(r, c) - zmax);
        const double lse = zmax + std::log(sum);
        const double nll = lse - out(r, y);
        if (!std::isfinite(nll)) {
          throw NumericalError("cross_entropy: non-finite loss at batch index " +
                               std::to_string(r));
        }
        total += nll;
        for (int c = 0; c < m; ++c) {
          og(r, c) = (std::exp(out(r, c) - lse) - (c == y ? 1.0 : 0.0)) * inv_b;
        }
      }
      break;
    }
    case Loss::gaussian_nll: {
      if (m != 2) throw ConfigError("gaussian_nll: model must output [mean, log_std]");
      constexpr double half_log_2pi = 0.9189385332046727;
      for (Eigen::Index r = 0; r < B; ++r) {
        const double mean = out(r, 0);
        const double log_std = out(r, 1);
        const double inv_var = std::exp(-2.0 * log_std);
        const double resid = batch.targets[r] - mean;
        const double nll = half_log_2pi + log_std + 0.5 * inv_var * resid * resid;
        if (!std::isfinite(nll)) {
          throw NumericalError("gaussian_nll: non-finite loss at batch index " +
                               std::to_string(r));
        }
        total += nll;
        og(r, 0) = -inv_var * resid * inv_b;
        og(r, 1) = (1.0 - inv_var * resid * resid) * inv_b;
      }
      break;
    }
    case Loss::mse: {
      if (m != 1) throw ConfigError("mse: model must have a single output");
      for (Eigen::Index r = 0; r < B; ++r) {
        const double resid = out(r, 0) - batch.targets[r];
        const double l = resid * resid;
        if (!std::isfinite(l)) {
          throw NumericalError("mse: non-finite loss at batch index " + std::to_string(r));
        }
        total += l;
        og(r, 0) = 2.0 * resid * inv_b;
      }
      break;
    }
  }

  LossGrad result;
  result.loss = total * inv_b;
  result.grad = backward(model, cache, og);
  return result;
}

}  // namespace dapcal
