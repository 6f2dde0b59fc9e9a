#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "salmap/errors.hpp"

namespace salmap {

// Fixed architecture: 20 inputs, two rectified hidden layers of 120, softmax
// over 5 classes.
inline constexpr int kMlpInput = 20;
inline constexpr int kMlpHidden = 120;
inline constexpr int kMlpClasses = 5;

struct Mlp {
  // Row-major [in][out] weight matrices in declaration order.
  std::vector<double> w1, b1;  // 20x120, 120
  std::vector<double> w2, b2;  // 120x120, 120
  std::vector<double> w3, b3;  // 120x5, 5
  std::uint64_t seed = 0;

  // Training bookkeeping, kept in memory only (not written to model files).
  int epochs_trained = 0;
  double train_accuracy = 0.0;
};

bool same_parameters(const Mlp& a, const Mlp& b);

// Glorot-uniform weights (limit sqrt(6 / (fan_in + fan_out))), zero biases,
// drawn in declaration order from a generator seeded with `seed`.
Mlp init_mlp(std::uint64_t seed);

// Softmax class probabilities for one 20-feature sample.
std::array<double, kMlpClasses> mlp_forward(const Mlp& m, const double* x);

// Argmax class; ties resolve to the lowest index.
int mlp_predict(const Mlp& m, const double* x);

struct MlpGradients {
  std::vector<double> w1, b1, w2, b2, w3, b3;
};

// Mean cross-entropy over a batch (xs = n rows of 20), plus, when `grad` is
// non-null, its analytic gradient and, when `correct` is non-null, the number
// of argmax hits. This is the training step's core, exposed for gradient
// verification.
double mlp_batch_loss(const Mlp& m, const double* xs, const int* ys, int n, MlpGradients* grad,
                      int* correct);

// Fraction of samples whose argmax matches the label.
double mlp_accuracy(const Mlp& m, const double* xs, const int* ys, int n);

struct TrainOptions {
  double learning_rate = 0.01;
  int batch_size = 32;
  int epochs = 500;
};

struct EpochStats {
  double loss = 0.0;      // mean cross-entropy over the epoch's forward passes
  double accuracy = 0.0;  // running argmax accuracy over the same passes
};

// Plain mini-batch SGD with a per-epoch Fisher-Yates shuffle; the shuffle
// stream continues from the draws used by init_mlp when the model came from
// init_mlp(seed), so a (seed, data) pair fixes the whole run. On return the
// model carries epochs_trained and a final full-pass train_accuracy. Throws
// DivergedLoss the moment a batch loss stops being finite.
std::vector<EpochStats> train_mlp(Mlp& m, const double* xs, const int* ys, int n,
                                  const TrainOptions& opt,
                                  const std::function<void(int, const EpochStats&)>& on_epoch = {});

// Text model file: header `CTXMODEL v1 20 120 120 5 <seed>`, then each tensor
// in declaration order as shortest-round-trip decimals. Round-trips bitwise.
void save_model(const Mlp& m, const std::string& path);
Mlp load_model(const std::string& path);

}  // namespace salmap
