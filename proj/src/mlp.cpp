#include "salmap/mlp.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>

#include "salmap/rng.hpp"

namespace salmap {
namespace {

constexpr int kW1 = kMlpInput * kMlpHidden;
constexpr int kW2 = kMlpHidden * kMlpHidden;
constexpr int kW3 = kMlpHidden * kMlpClasses;
constexpr int kParamCount = kW1 + kMlpHidden + kW2 + kMlpHidden + kW3 + kMlpClasses;
// uniform() draws consumed by init_mlp; train_mlp skips these to continue the
// same stream.
constexpr int kInitDraws = kW1 + kW2 + kW3;

struct Workspace {
  std::array<double, kMlpHidden> z1, h1, z2, h2;
  std::array<double, kMlpClasses> logits, probs;
};

void forward_into(const Mlp& m, const double* x, Workspace& ws) {
  for (int j = 0; j < kMlpHidden; ++j) ws.z1[j] = m.b1[j];
  for (int i = 0; i < kMlpInput; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;  // area features are sparse
    const double* row = m.w1.data() + static_cast<std::size_t>(i) * kMlpHidden;
    for (int j = 0; j < kMlpHidden; ++j) ws.z1[j] += xi * row[j];
  }
  for (int j = 0; j < kMlpHidden; ++j) ws.h1[j] = ws.z1[j] > 0.0 ? ws.z1[j] : 0.0;

  for (int j = 0; j < kMlpHidden; ++j) ws.z2[j] = m.b2[j];
  for (int i = 0; i < kMlpHidden; ++i) {
    const double hi = ws.h1[i];
    if (hi == 0.0) continue;
    const double* row = m.w2.data() + static_cast<std::size_t>(i) * kMlpHidden;
    for (int j = 0; j < kMlpHidden; ++j) ws.z2[j] += hi * row[j];
  }
  for (int j = 0; j < kMlpHidden; ++j) ws.h2[j] = ws.z2[j] > 0.0 ? ws.z2[j] : 0.0;

  for (int j = 0; j < kMlpClasses; ++j) ws.logits[j] = m.b3[j];
  for (int i = 0; i < kMlpHidden; ++i) {
    const double hi = ws.h2[i];
    if (hi == 0.0) continue;
    const double* row = m.w3.data() + static_cast<std::size_t>(i) * kMlpClasses;
    for (int j = 0; j < kMlpClasses; ++j) ws.logits[j] += hi * row[j];
  }

  double mx = ws.logits[0];
  for (int j = 1; j < kMlpClasses; ++j) mx = std::max(mx, ws.logits[j]);
  double sum = 0.0;
  for (int j = 0; j < kMlpClasses; ++j) {
    ws.probs[j] = std::exp(ws.logits[j] - mx);
    sum += ws.probs[j];
  }
  for (int j = 0; j < kMlpClasses; ++j) ws.probs[j] /= sum;
}

int argmax_probs(const std::array<double, kMlpClasses>& p) {
  int best = 0;
  for (int j = 1; j < kMlpClasses; ++j)
    if (p[j] > p[best]) best = j;
  return best;
}

template <typename V>
bool sized(const V& v, int n) {
  return v.size() == static_cast<std::size_t>(n);
}

void check_model_shape(const Mlp& m) {
  if (!sized(m.w1, kW1) || !sized(m.b1, kMlpHidden) || !sized(m.w2, kW2) ||
      !sized(m.b2, kMlpHidden) || !sized(m.w3, kW3) || !sized(m.b3, kMlpClasses))
    throw Error("model parameter vectors have the wrong shape");
}

}  // namespace

bool same_parameters(const Mlp& a, const Mlp& b) {
  return a.w1 == b.w1 && a.b1 == b.b1 && a.w2 == b.w2 && a.b2 == b.b2 && a.w3 == b.w3 &&
         a.b3 == b.b3;
}

Mlp init_mlp(std::uint64_t seed) {
  Mlp m;
  m.seed = seed;
  Rng rng(seed);
  auto glorot = [&rng](std::vector<double>& w, int count, int fan_in, int fan_out) {
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    w.resize(count);
    for (double& v : w) v = rng.uniform(-limit, limit);
  };
  glorot(m.w1, kW1, kMlpInput, kMlpHidden);
  m.b1.assign(kMlpHidden, 0.0);
  glorot(m.w2, kW2, kMlpHidden, kMlpHidden);
  m.b2.assign(kMlpHidden, 0.0);
  glorot(m.w3, kW3, kMlpHidden, kMlpClasses);
  m.b3.assign(kMlpClasses, 0.0);
  return m;
}

std::array<double, kMlpClasses> mlp_forward(const Mlp& m, const double* x) {
  check_model_shape(m);
  Workspace ws;
  forward_into(m, x, ws);
  return ws.probs;
}

int mlp_predict(const Mlp& m, const double* x) {
  const auto p = mlp_forward(m, x);
  return argmax_probs(p);
}

double mlp_batch_loss(const Mlp& m, const double* xs, const int* ys, int n, MlpGradients* grad,
                      int* correct) {
  check_model_shape(m);
  if (n < 1) throw Error("batch must contain at least one sample");
  if (grad) {
    grad->w1.assign(kW1, 0.0);
    grad->b1.assign(kMlpHidden, 0.0);
    grad->w2.assign(kW2, 0.0);
    grad->b2.assign(kMlpHidden, 0.0);
    grad->w3.assign(kW3, 0.0);
    grad->b3.assign(kMlpClasses, 0.0);
  }
  Workspace ws;
  std::array<double, kMlpClasses> dz3;
  std::array<double, kMlpHidden> dz2, dz1, dh;
  double loss_sum = 0.0;
  int hits = 0;
  for (int s = 0; s < n; ++s) {
    const double* x = xs + static_cast<std::size_t>(s) * kMlpInput;
    const int y = ys[s];
    if (y < 0 || y >= kMlpClasses) throw Error("label out of range");
    forward_into(m, x, ws);
    loss_sum += -std::log(ws.probs[y]);
    if (argmax_probs(ws.probs) == y) ++hits;
    if (!grad) continue;

    for (int j = 0; j < kMlpClasses; ++j) dz3[j] = ws.probs[j] - (j == y ? 1.0 : 0.0);
    for (int j = 0; j < kMlpClasses; ++j) grad->b3[j] += dz3[j];
    for (int i = 0; i < kMlpHidden; ++i) {
      const double hi = ws.h2[i];
      double acc = 0.0;
      const double* wrow = m.w3.data() + static_cast<std::size_t>(i) * kMlpClasses;
      double* grow = grad->w3.data() + static_cast<std::size_t>(i) * kMlpClasses;
      for (int j = 0; j < kMlpClasses; ++j) {
        grow[j] += hi * dz3[j];
        acc += wrow[j] * dz3[j];
      }
      dh[i] = acc;
    }
    for (int i = 0; i < kMlpHidden; ++i) dz2[i] = ws.z2[i] > 0.0 ? dh[i] : 0.0;

    for (int j = 0; j < kMlpHidden; ++j) grad->b2[j] += dz2[j];
    for (int i = 0; i < kMlpHidden; ++i) {
      const double hi = ws.h1[i];
      if (hi != 0.0) {
        double* grow = grad->w2.data() + static_cast<std::size_t>(i) * kMlpHidden;
        for (int j = 0; j < kMlpHidden; ++j) grow[j] += hi * dz2[j];
      }
      const double* wrow = m.w2.data() + static_cast<std::size_t>(i) * kMlpHidden;
      double acc = 0.0;
      for (int j = 0; j < kMlpHidden; ++j) acc += wrow[j] * dz2[j];
      dh[i] = acc;
    }
    for (int i = 0; i < kMlpHidden; ++i) dz1[i] = ws.z1[i] > 0.0 ? dh[i] : 0.0;

    for (int j = 0; j < kMlpHidden; ++j) grad->b1[j] += dz1[j];
    for (int i = 0; i < kMlpInput; ++i) {
      const double xi = x[i];
      if (xi == 0.0) continue;
      double* grow = grad->w1.data() + static_cast<std::size_t>(i) * kMlpHidden;
      for (int j = 0; j < kMlpHidden; ++j) grow[j] += xi * dz1[j];
    }
  }
  if (correct) *correct = hits;
  const double mean = loss_sum / n;
  if (grad) {
    const double inv = 1.0 / n;
    for (double& v : grad->w1) v *= inv;
    for (double& v : grad->b1) v *= inv;
    for (double& v : grad->w2) v *= inv;
    for (double& v : grad->b2) v *= inv;
    for (double& v : grad->w3) v *= inv;
    for (double& v : grad->b3) v *= inv;
  }
  return mean;
}

double mlp_accuracy(const Mlp& m, const double* xs, const int* ys, int n) {
  if (n < 1) throw Error("accuracy needs at least one sample");
  int hits = 0;
  for (int s = 0; s < n; ++s)
    if (mlp_predict(m, xs + static_cast<std::size_t>(s) * kMlpInput) == ys[s]) ++hits;
  return static_cast<double>(hits) / n;
}

std::vector<EpochStats> train_mlp(Mlp& m, const double* xs, const int* ys, int n,
                                  const TrainOptions& opt,
                                  const std::function<void(int, const EpochStats&)>& on_epoch) {
  check_model_shape(m);
  if (n < 1) throw Error("training set must be nonempty");
  if (!(opt.learning_rate > 0.0) || !std::isfinite(opt.learning_rate))
    throw Error("learning rate must be positive and finite");
  if (opt.batch_size < 1) throw Error("batch size must be at least 1");
  if (opt.epochs < 1) throw Error("epoch count must be at least 1");

  Rng rng(m.seed);
  for (int i = 0; i < kInitDraws; ++i) rng.next();

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> bx(static_cast<std::size_t>(opt.batch_size) * kMlpInput);
  std::vector<int> by(opt.batch_size);
  MlpGradients g;
  std::vector<EpochStats> history;
  history.reserve(opt.epochs);

  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    int hit_sum = 0;
    for (int start = 0; start < n; start += opt.batch_size) {
      const int bn = std::min(opt.batch_size, n - start);
      for (int s = 0; s < bn; ++s) {
        const int src = order[start + s];
        std::copy_n(xs + static_cast<std::size_t>(src) * kMlpInput, kMlpInput,
                    bx.data() + static_cast<std::size_t>(s) * kMlpInput);
        by[s] = ys[src];
      }
      int hits = 0;
      const double batch_loss = mlp_batch_loss(m, bx.data(), by.data(), bn, &g, &hits);
      if (!std::isfinite(batch_loss))
        throw DivergedLoss("training loss became non-finite at epoch " + std::to_string(epoch + 1));
      loss_sum += batch_loss * bn;
      hit_sum += hits;
      const double step = opt.learning_rate;
      auto apply = [step](std::vector<double>& w, const std::vector<double>& gw) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= step * gw[i];
      };
      apply(m.w1, g.w1);
      apply(m.b1, g.b1);
      apply(m.w2, g.w2);
      apply(m.b2, g.b2);
      apply(m.w3, g.w3);
      apply(m.b3, g.b3);
    }
    EpochStats stats{loss_sum / n, static_cast<double>(hit_sum) / n};
    history.push_back(stats);
    if (on_epoch) on_epoch(epoch + 1, stats);
  }

  m.epochs_trained = opt.epochs;
  m.train_accuracy = mlp_accuracy(m, xs, ys, n);
  return history;
}

void save_model(const Mlp& m, const std::string& path) {
  check_model_shape(m);
  std::string out;
  out.reserve(static_cast<std::size_t>(kParamCount) * 20);
  out += "CTXMODEL v1 20 120 120 5 " + std::to_string(m.seed) + "\n";
  char buf[64];
  auto put = [&out, &buf](const double* v, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) {
        const double x = v[static_cast<std::size_t>(r) * cols + c];
        if (!std::isfinite(x)) throw NonFiniteValue("refusing to save a non-finite parameter");
        const auto res = std::to_chars(buf, buf + sizeof buf, x);
        out.append(buf, res.ptr);
        out += (c + 1 < cols) ? ' ' : '\n';
      }
    }
  };
  put(m.w1.data(), kMlpInput, kMlpHidden);
  put(m.b1.data(), 1, kMlpHidden);
  put(m.w2.data(), kMlpHidden, kMlpHidden);
  put(m.b2.data(), 1, kMlpHidden);
  put(m.w3.data(), kMlpHidden, kMlpClasses);
  put(m.b3.data(), 1, kMlpClasses);

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open model file for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  f.flush();
  if (!f) throw IoError("failed writing model file: " + path);
}

Mlp load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open model file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();

  std::size_t pos = 0;
  auto next_token = [&text, &pos]() -> std::string_view {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return std::string_view(text).substr(start, pos - start);
  };

  if (next_token() != "CTXMODEL" || next_token() != "v1")
    throw MalformedModelFile("bad model header: " + path);
  int dims[4];
  for (int& d : dims) {
    const auto tok = next_token();
    if (std::from_chars(tok.data(), tok.data() + tok.size(), d).ec != std::errc{})
      throw MalformedModelFile("bad layer size in model header: " + path);
  }
  if (dims[0] != kMlpInput || dims[1] != kMlpHidden || dims[2] != kMlpHidden ||
      dims[3] != kMlpClasses)
    throw MalformedModelFile("unsupported architecture in model header: " + path);
  Mlp m;
  {
    const auto tok = next_token();
    if (std::from_chars(tok.data(), tok.data() + tok.size(), m.seed).ec != std::errc{})
      throw MalformedModelFile("bad seed in model header: " + path);
  }

  auto read_tensor = [&](std::vector<double>& w, int count) {
    w.resize(count);
    for (int i = 0; i < count; ++i) {
      const auto tok = next_token();
      if (tok.empty()) throw MalformedModelFile("truncated model file: " + path);
      double v = 0.0;
      if (std::from_chars(tok.data(), tok.data() + tok.size(), v).ec != std::errc{})
        throw MalformedModelFile("unparsable parameter in model file: " + path);
      if (!std::isfinite(v)) throw MalformedModelFile("non-finite parameter in model file: " + path);
      w[i] = v;
    }
  };
  read_tensor(m.w1, kW1);
  read_tensor(m.b1, kMlpHidden);
  read_tensor(m.w2, kW2);
  read_tensor(m.b2, kMlpHidden);
  read_tensor(m.w3, kW3);
  read_tensor(m.b3, kMlpClasses);
  if (!next_token().empty()) throw MalformedModelFile("trailing data in model file: " + path);
  return m;
}

}  // namespace salmap
