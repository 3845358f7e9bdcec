#include "epos/nn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epos/error.hpp"
#include "epos/io.hpp"

namespace epos {

Matrix Matrix::select_rows(std::span<const std::size_t> idx) const {
  Matrix out(idx.size(), cols);
  for (std::size_t i = 0; i < idx.size(); ++i) std::copy_n(row(idx[i]), cols, out.row(i));
  return out;
}

Matrix Matrix::select_cols(std::span<const std::size_t> idx) const {
  Matrix out(rows, idx.size());
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < idx.size(); ++j) out(r, j) = (*this)(r, idx[j]);
  return out;
}

void MLPConfig::validate() const {
  if (input_dim == 0) throw ValidationError("mlp input_dim must be positive");
  if (hidden.empty()) throw ValidationError("mlp hidden must be nonempty");
  for (std::size_t h : hidden)
    if (h == 0) throw ValidationError("mlp hidden sizes must be positive");
  if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) throw ValidationError("dropout_rate must lie in [0, 1)");
}

void TrainConfig::validate() const {
  if (epochs < 1) throw ValidationError("epochs must be >= 1");
  if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
  if (!(learning_rate > 0)) throw ValidationError("learning_rate must be positive");
  if (!(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1)) throw ValidationError("adam betas must lie in [0, 1)");
  if (!(epsilon > 0)) throw ValidationError("adam epsilon must be positive");
  if (!(fp_weight >= 1.0)) throw ValidationError("fp_weight must be >= 1");
  if (!(train_fraction > 0 && val_fraction > 0 && test_fraction > 0))
    throw ValidationError("split fractions must be positive");
  if (std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
    throw ValidationError("split fractions must sum to 1");
  if (patience < 0) throw ValidationError("patience must be >= 0");
}

std::string to_string(LossKind k) { return k == LossKind::cross_entropy ? "cross_entropy" : "weighted_bce"; }

LossKind parse_loss_kind(const std::string& s) {
  if (s == "cross_entropy") return LossKind::cross_entropy;
  if (s == "weighted_bce") return LossKind::weighted_bce;
  throw ValidationError("unknown loss \"" + s + "\" (expected cross_entropy or weighted_bce)");
}

nlohmann::json to_json(const MLPConfig& c) {
  return {{"input_dim", c.input_dim},         {"hidden", c.hidden}, {"use_batchnorm", c.use_batchnorm},
          {"dropout_rate", c.dropout_rate}, {"seed", c.seed}};
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon},
          {"loss", to_string(c.loss)},
          {"fp_weight", c.fp_weight},
          {"train_fraction", c.train_fraction},
          {"val_fraction", c.val_fraction},
          {"test_fraction", c.test_fraction},
          {"stratify", c.stratify},
          {"patience", c.patience},
          {"seed", c.seed}};
}

namespace {

template <class T>
T field(const nlohmann::json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string(where) + ": missing key \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError(std::string(where) + ": key \"" + key + "\" has the wrong type");
  }
}

}  // namespace

MLPConfig mlp_config_from_json(const nlohmann::json& j) {
  MLPConfig c;
  c.input_dim = field<std::size_t>(j, "input_dim", "mlp config");
  c.hidden = field<std::vector<std::size_t>>(j, "hidden", "mlp config");
  c.use_batchnorm = field<bool>(j, "use_batchnorm", "mlp config");
  c.dropout_rate = field<double>(j, "dropout_rate", "mlp config");
  c.seed = field<std::uint64_t>(j, "seed", "mlp config");
  return c;
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  const char* w = "train config";
  c.epochs = field<int>(j, "epochs", w);
  c.batch_size = field<std::size_t>(j, "batch_size", w);
  c.learning_rate = field<double>(j, "learning_rate", w);
  c.beta1 = field<double>(j, "beta1", w);
  c.beta2 = field<double>(j, "beta2", w);
  c.epsilon = field<double>(j, "epsilon", w);
  c.loss = parse_loss_kind(field<std::string>(j, "loss", w));
  c.fp_weight = field<double>(j, "fp_weight", w);
  c.train_fraction = field<double>(j, "train_fraction", w);
  c.val_fraction = field<double>(j, "val_fraction", w);
  c.test_fraction = field<double>(j, "test_fraction", w);
  c.stratify = field<bool>(j, "stratify", w);
  c.patience = field<int>(j, "patience", w);
  c.seed = field<std::uint64_t>(j, "seed", w);
  return c;
}

namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

// y = x W^T + b
Matrix affine(const Matrix& x, const Layer& l) {
  Matrix z(x.rows, l.out());
  for (std::size_t r = 0; r < x.rows; ++r) {
    double* zr = z.row(r);
    for (std::size_t o = 0; o < l.out(); ++o) zr[o] = dot(x.row(r), l.w.row(o), l.in()) + l.b[o];
  }
  return z;
}

}  // namespace

MLP::MLP(const MLPConfig& config) : config_(config) {
  config_.validate();
  Rng rng(config_.seed);
  std::size_t fan_in = config_.input_dim;
  auto make = [&](std::size_t out, bool bn, double limit) {
    Layer l;
    l.w = Matrix(out, fan_in);
    for (double& v : l.w.data) v = (2.0 * rng.uniform() - 1.0) * limit;
    l.b.assign(out, 0.0);
    l.batchnorm = bn;
    if (bn) {
      l.gamma.assign(out, 1.0);
      l.beta.assign(out, 0.0);
      l.run_mean.assign(out, 0.0);
      l.run_var.assign(out, 1.0);
    }
    layers_.push_back(std::move(l));
    fan_in = out;
  };
  for (std::size_t h : config_.hidden) make(h, config_.use_batchnorm, std::sqrt(6.0 / static_cast<double>(fan_in)));
  make(1, false, 1.0 / std::sqrt(static_cast<double>(fan_in)));
}

std::size_t MLP::parameter_count() const {
  std::size_t n = 0;
  for (const Layer& l : layers_) n += l.w.data.size() + l.b.size() + l.gamma.size() + l.beta.size();
  return n;
}

std::vector<double> MLP::run(const Matrix& x, bool train, bool update_stats, Rng* rng, Tape* tape) {
  if (x.cols != config_.input_dim)
    throw ValidationError("input width " + std::to_string(x.cols) + " does not match model input_dim " +
                          std::to_string(config_.input_dim));
  if (tape) {
    tape->steps.clear();
    tape->train_mode = train;
  }
  const double keep = 1.0 - config_.dropout_rate;
  const bool dropout = train && config_.dropout_rate > 0.0;
  if (dropout && !rng) throw InternalError("train-mode dropout requires a generator");

  Matrix a = x;
  for (std::size_t li = 0; li + 1 < layers_.size(); ++li) {
    Layer& l = layers_[li];
    Matrix z = affine(a, l);
    Tape::Step step;
    const std::size_t B = z.rows;
    const std::size_t H = z.cols;
    if (l.batchnorm) {
      std::vector<double> mean(H, 0.0), var(H, 0.0);
      if (train) {
        for (std::size_t r = 0; r < B; ++r) axpy(1.0, z.row(r), mean.data(), H);
        for (double& m : mean) m /= static_cast<double>(B);
        for (std::size_t r = 0; r < B; ++r)
          for (std::size_t h = 0; h < H; ++h) {
            const double d = z(r, h) - mean[h];
            var[h] += d * d;
          }
        for (double& v : var) v /= static_cast<double>(B);
        if (update_stats) {
          const double unbias = B > 1 ? static_cast<double>(B) / static_cast<double>(B - 1) : 1.0;
          for (std::size_t h = 0; h < H; ++h) {
            l.run_mean[h] = (1 - kBatchNormMomentum) * l.run_mean[h] + kBatchNormMomentum * mean[h];
            l.run_var[h] = (1 - kBatchNormMomentum) * l.run_var[h] + kBatchNormMomentum * var[h] * unbias;
          }
        }
      } else {
        mean = l.run_mean;
        var = l.run_var;
      }
      step.inv_std.resize(H);
      for (std::size_t h = 0; h < H; ++h) step.inv_std[h] = 1.0 / std::sqrt(var[h] + kBatchNormEpsilon);
      step.xhat = Matrix(B, H);
      for (std::size_t r = 0; r < B; ++r)
        for (std::size_t h = 0; h < H; ++h) {
          const double xh = (z(r, h) - mean[h]) * step.inv_std[h];
          step.xhat(r, h) = xh;
          z(r, h) = l.gamma[h] * xh + l.beta[h];
        }
    }
    step.gate = Matrix(B, H);
    for (std::size_t i = 0; i < z.data.size(); ++i) {
      double g = z.data[i] > 0.0 ? 1.0 : 0.0;
      if (dropout) g *= rng->uniform() < keep ? 1.0 / keep : 0.0;
      step.gate.data[i] = g;
      z.data[i] *= g;
    }
    if (tape) {
      step.input = std::move(a);
      tape->steps.push_back(std::move(step));
    }
    a = std::move(z);
  }
  const Matrix out = affine(a, layers_.back());
  if (tape) {
    Tape::Step last;
    last.input = std::move(a);
    tape->steps.push_back(std::move(last));
  }
  std::vector<double> logits(out.rows);
  for (std::size_t r = 0; r < out.rows; ++r) logits[r] = out(r, 0);
  if (tape) tape->logits = logits;
  return logits;
}

std::vector<double> MLP::forward(const Matrix& x, Mode mode, Rng* rng, Tape* tape) {
  return run(x, mode == Mode::train, mode == Mode::train, rng, tape);
}

std::vector<double> MLP::logits(const Matrix& x, Tape* tape) const {
  // Eval mode never mutates the layers.
  return const_cast<MLP*>(this)->run(x, false, false, nullptr, tape);
}

std::vector<double> MLP::predict(const Matrix& x) const {
  std::vector<double> p = logits(x);
  for (double& v : p) v = sigmoid(v);
  return p;
}

Matrix MLP::backward(const Tape& tape, std::span<const double> dlogit, std::vector<LayerGrad>* grads) const {
  if (tape.steps.size() != layers_.size()) throw InternalError("tape does not match the model");
  if (grads && grads->size() != layers_.size()) {
    grads->assign(layers_.size(), {});
    for (std::size_t li = 0; li < layers_.size(); ++li) {
      const Layer& l = layers_[li];
      LayerGrad& g = (*grads)[li];
      g.w = Matrix(l.out(), l.in());
      g.b.assign(l.out(), 0.0);
      g.gamma.assign(l.gamma.size(), 0.0);
      g.beta.assign(l.beta.size(), 0.0);
    }
  }
  const std::size_t B = dlogit.size();
  Matrix dz(B, 1);
  for (std::size_t r = 0; r < B; ++r) dz(r, 0) = dlogit[r];

  for (std::size_t li = layers_.size(); li-- > 0;) {
    const Layer& l = layers_[li];
    const Tape::Step& step = tape.steps[li];
    const std::size_t H = l.out();
    if (li + 1 < layers_.size()) {
      // dz currently holds dL/d(activation output); undo ReLU/dropout and batchnorm.
      for (std::size_t i = 0; i < dz.data.size(); ++i) dz.data[i] *= step.gate.data[i];
      if (l.batchnorm) {
        if (grads) {
          LayerGrad& g = (*grads)[li];
          for (std::size_t r = 0; r < B; ++r)
            for (std::size_t h = 0; h < H; ++h) {
              g.gamma[h] += dz(r, h) * step.xhat(r, h);
              g.beta[h] += dz(r, h);
            }
        }
        if (tape.train_mode) {
          std::vector<double> sum_dx(H, 0.0), sum_dx_xhat(H, 0.0);
          for (std::size_t r = 0; r < B; ++r)
            for (std::size_t h = 0; h < H; ++h) {
              const double dxh = dz(r, h) * l.gamma[h];
              sum_dx[h] += dxh;
              sum_dx_xhat[h] += dxh * step.xhat(r, h);
            }
          const double inv_b = 1.0 / static_cast<double>(B);
          for (std::size_t r = 0; r < B; ++r)
            for (std::size_t h = 0; h < H; ++h) {
              const double dxh = dz(r, h) * l.gamma[h];
              dz(r, h) = step.inv_std[h] * (dxh - inv_b * sum_dx[h] - step.xhat(r, h) * inv_b * sum_dx_xhat[h]);
            }
        } else {
          for (std::size_t r = 0; r < B; ++r)
            for (std::size_t h = 0; h < H; ++h) dz(r, h) *= l.gamma[h] * step.inv_std[h];
        }
      }
    }
    if (grads) {
      LayerGrad& g = (*grads)[li];
      for (std::size_t r = 0; r < B; ++r) {
        const double* xr = step.input.row(r);
        for (std::size_t o = 0; o < H; ++o) {
          const double d = dz(r, o);
          if (d == 0.0) continue;
          g.b[o] += d;
          axpy(d, xr, g.w.row(o), l.in());
        }
      }
    }
    Matrix dx(B, l.in());
    for (std::size_t r = 0; r < B; ++r) {
      double* dxr = dx.row(r);
      for (std::size_t o = 0; o < H; ++o) {
        const double d = dz(r, o);
        if (d != 0.0) axpy(d, l.w.row(o), dxr, l.in());
      }
    }
    dz = std::move(dx);
  }
  return dz;
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double loss_weighted_bce(std::span<const double> probs, std::span<const int> labels, double fp_weight) {
  if (probs.size() != labels.size()) throw ValidationError("probabilities and labels differ in length");
  if (probs.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kProbClamp, 1.0 - kProbClamp);
    total += labels[i] ? -std::log(p) : -fp_weight * std::log(1.0 - p);
  }
  return total / static_cast<double>(probs.size());
}

double loss_cross_entropy(std::span<const double> probs, std::span<const int> labels) {
  return loss_weighted_bce(probs, labels, 1.0);
}

std::vector<double> weighted_bce_logit_grad(std::span<const double> logits, std::span<const int> labels,
                                            double fp_weight) {
  std::vector<double> g(logits.size(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    const double p = sigmoid(logits[i]);
    if (p < kProbClamp || p > 1.0 - kProbClamp) continue;
    g[i] = (labels[i] ? -(1.0 - p) : fp_weight * p) * inv_b;
  }
  return g;
}

Scaler standardize_fit(const Matrix& x) {
  if (x.rows == 0) throw ValidationError("cannot fit a scaler on zero rows");
  Scaler s{std::vector<double>(x.cols, 0.0), std::vector<double>(x.cols, 0.0)};
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) {
      if (!std::isfinite(x(r, c))) throw ValidationError("non-finite training feature");
      s.mean[c] += x(r, c);
    }
  }
  for (double& m : s.mean) m /= static_cast<double>(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c) {
      const double d = x(r, c) - s.mean[c];
      s.std[c] += d * d;
    }
  for (double& v : s.std) v = std::sqrt(v / static_cast<double>(x.rows));
  return s;
}

Matrix standardize_apply(const Scaler& s, const Matrix& x) {
  if (x.cols != s.mean.size()) throw ValidationError("scaler width does not match the data");
  Matrix out(x.rows, x.cols);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c) out(r, c) = s.std[c] > 0 ? (x(r, c) - s.mean[c]) / s.std[c] : 0.0;
  return out;
}

Split split_indices(std::span<const int> labels, double train_fraction, double val_fraction, double test_fraction,
                    bool stratify, std::uint64_t seed) {
  if (!(train_fraction > 0 && val_fraction > 0 && test_fraction > 0) ||
      std::abs(train_fraction + val_fraction + test_fraction - 1.0) > 1e-9)
    throw ValidationError("split fractions must be positive and sum to 1");
  Rng rng(seed);
  std::vector<std::vector<std::size_t>> groups(stratify ? 2 : 1);
  for (std::size_t i = 0; i < labels.size(); ++i) groups[stratify && labels[i] ? 1 : 0].push_back(i);
  Split s;
  for (auto& g : groups) {
    rng.shuffle(g);
    const auto n = static_cast<double>(g.size());
    const auto n_val = static_cast<std::size_t>(std::llround(val_fraction * n));
    const auto n_test = std::min(g.size() - n_val, static_cast<std::size_t>(std::llround(test_fraction * n)));
    s.val.insert(s.val.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n_val));
    s.test.insert(s.test.end(), g.begin() + static_cast<std::ptrdiff_t>(n_val),
                  g.begin() + static_cast<std::ptrdiff_t>(n_val + n_test));
    s.train.insert(s.train.end(), g.begin() + static_cast<std::ptrdiff_t>(n_val + n_test), g.end());
  }
  if (s.train.empty() || s.val.empty() || s.test.empty())
    throw ValidationError("split of " + std::to_string(labels.size()) + " items leaves a split empty");
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn) {
  Metrics m{tp, fp, tn, fn};
  const std::size_t total = tp + fp + tn + fn;
  m.accuracy = total ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  m.precision = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
  m.recall = tp + fn ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
  m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
  return m;
}

Metrics compute_metrics(std::span<const double> probs, std::span<const int> labels, double threshold) {
  if (probs.size() != labels.size()) throw ValidationError("probabilities and labels differ in length");
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const bool pred = probs[i] >= threshold;
    if (pred) {
      ++(labels[i] ? tp : fp);
    } else {
      ++(labels[i] ? fn : tn);
    }
  }
  return metrics_from_counts(tp, fp, tn, fn);
}

Metrics evaluate(const MLP& model, const Matrix& x, std::span<const int> labels, double threshold) {
  return compute_metrics(model.predict(x), labels, threshold);
}

nlohmann::json to_json(const Metrics& m) {
  return {{"counts", {{"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn}}},
          {"accuracy", m.accuracy},
          {"precision", m.precision},
          {"recall", m.recall},
          {"f1", m.f1}};
}

double unreachable_threshold() { return std::nextafter(1.0, 2.0); }

double threshold_for_precision(std::span<const double> probs, std::span<const int> labels, double target_precision) {
  if (probs.size() != labels.size()) throw ValidationError("probabilities and labels differ in length");
  if (probs.empty()) throw ValidationError("threshold selection needs a nonempty validation set");
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) (labels[i] ? tp : fp) += 1;
  auto precision_ok = [&] {
    return tp + fp == 0 || static_cast<double>(tp) / static_cast<double>(tp + fp) >= target_precision;
  };
  // t = 0 predicts everything positive.
  if (precision_ok()) return 0.0;
  // At t = probs[order[i]] the predicted positives are exactly order[i..].
  for (std::size_t i = 0; i < order.size();) {
    const double t = probs[order[i]];
    if (precision_ok()) return t;
    for (; i < order.size() && probs[order[i]] == t; ++i) (labels[order[i]] ? tp : fp) -= 1;
  }
  return unreachable_threshold();
}

namespace {

struct AdamState {
  std::vector<LayerGrad> m, v;
  long step = 0;
};

void adam_update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m, std::vector<double>& v,
                 const TrainConfig& tc, double c1, double c2) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    m[i] = tc.beta1 * m[i] + (1 - tc.beta1) * g[i];
    v[i] = tc.beta2 * v[i] + (1 - tc.beta2) * g[i] * g[i];
    p[i] -= tc.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + tc.epsilon);
  }
}

void adam_step(MLP& model, const std::vector<LayerGrad>& grads, AdamState& st, const TrainConfig& tc) {
  if (st.m.empty()) {
    st.m = grads;
    for (LayerGrad& g : st.m) {
      std::fill(g.w.data.begin(), g.w.data.end(), 0.0);
      std::fill(g.b.begin(), g.b.end(), 0.0);
      std::fill(g.gamma.begin(), g.gamma.end(), 0.0);
      std::fill(g.beta.begin(), g.beta.end(), 0.0);
    }
    st.v = st.m;
  }
  ++st.step;
  const double c1 = 1 - std::pow(tc.beta1, static_cast<double>(st.step));
  const double c2 = 1 - std::pow(tc.beta2, static_cast<double>(st.step));
  for (std::size_t li = 0; li < model.layers().size(); ++li) {
    Layer& l = model.layers()[li];
    adam_update(l.w.data, grads[li].w.data, st.m[li].w.data, st.v[li].w.data, tc, c1, c2);
    adam_update(l.b, grads[li].b, st.m[li].b, st.v[li].b, tc, c1, c2);
    adam_update(l.gamma, grads[li].gamma, st.m[li].gamma, st.v[li].gamma, tc, c1, c2);
    adam_update(l.beta, grads[li].beta, st.m[li].beta, st.v[li].beta, tc, c1, c2);
  }
}

}  // namespace

TrainResult train(const Matrix& x_train, std::span<const int> y_train, const Matrix& x_val, std::span<const int> y_val,
                  const MLPConfig& mlp, const TrainConfig& tc) {
  mlp.validate();
  tc.validate();
  if (x_train.rows != y_train.size() || x_val.rows != y_val.size())
    throw ValidationError("feature rows and labels differ in length");
  if (x_train.rows == 0 || x_val.rows == 0) throw ValidationError("training and validation sets must be nonempty");
  const double w = tc.loss == LossKind::weighted_bce ? tc.fp_weight : 1.0;

  TrainResult result{MLP(mlp), {}, 0};
  MLP& model = result.model;
  MLP best = model;
  double best_val = INFINITY;
  int since_best = 0;
  AdamState adam;
  // Separate stream from the split, which also draws from tc.seed.
  Rng rng(tc.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::size_t> order(x_train.rows);
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
      const std::size_t end = std::min(order.size(), start + tc.batch_size);
      // Batch statistics of a single row are degenerate.
      if (mlp.use_batchnorm && end - start < 2) continue;
      const std::span<const std::size_t> idx(order.data() + start, end - start);
      const Matrix xb = x_train.select_rows(idx);
      std::vector<int> yb(idx.size());
      for (std::size_t i = 0; i < idx.size(); ++i) yb[i] = y_train[idx[i]];

      Tape tape;
      const std::vector<double> z = model.forward(xb, Mode::train, &rng, &tape);
      std::vector<double> p(z.size());
      std::transform(z.begin(), z.end(), p.begin(), sigmoid);
      const double loss = loss_weighted_bce(p, yb, w);
      if (!std::isfinite(loss))
        throw InternalError("training diverged: non-finite loss at epoch " + std::to_string(epoch) + ", batch starting at " +
                            std::to_string(start));
      loss_sum += loss * static_cast<double>(idx.size());
      seen += idx.size();

      std::vector<LayerGrad> grads;
      model.backward(tape, weighted_bce_logit_grad(z, yb, w), &grads);
      adam_step(model, grads, adam, tc);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = seen ? loss_sum / static_cast<double>(seen) : 0.0;
    const std::vector<double> pv = model.predict(x_val);
    rec.val_loss = loss_weighted_bce(pv, y_val, w);
    if (!std::isfinite(rec.val_loss))
      throw InternalError("training diverged: non-finite validation loss at epoch " + std::to_string(epoch));
    rec.val = compute_metrics(pv, y_val, 0.5);
    result.history.push_back(rec);

    if (rec.val_loss < best_val) {
      best_val = rec.val_loss;
      best = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (tc.patience > 0 && ++since_best >= tc.patience) {
      break;
    }
  }
  model = std::move(best);
  return result;
}

namespace {

nlohmann::json hex_array(const std::vector<double>& v) {
  nlohmann::json a = nlohmann::json::array();
  for (double x : v) a.push_back(hex_double(x));
  return a;
}

std::vector<double> parse_hex_array(const nlohmann::json& j, std::size_t expected, const std::string& what) {
  if (!j.is_array() || j.size() != expected)
    throw ValidationError("corrupt checkpoint: " + what + " must hold " + std::to_string(expected) + " values");
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& e : j) out.push_back(parse_hex_double(e.get<std::string>()));
  return out;
}

}  // namespace

nlohmann::json checkpoint_to_json(const Checkpoint& c) {
  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& l : c.model.layers()) {
    nlohmann::json jl = {{"rows", l.w.rows}, {"cols", l.w.cols}, {"W", hex_array(l.w.data)}, {"b", hex_array(l.b)}};
    if (l.batchnorm) {
      jl["bn"] = {{"gamma", hex_array(l.gamma)},
                  {"beta", hex_array(l.beta)},
                  {"run_mean", hex_array(l.run_mean)},
                  {"run_var", hex_array(l.run_var)}};
    } else {
      jl["bn"] = nullptr;
    }
    layers.push_back(std::move(jl));
  }
  return {{"version", kCheckpointVersion},
          {"mlp_config", to_json(c.model.config())},
          {"train_config", to_json(c.train_config)},
          {"feature_names", c.feature_names},
          {"threshold", hex_double(c.threshold)},
          {"scaler", {{"mean", hex_array(c.scaler.mean)}, {"std", hex_array(c.scaler.std)}}},
          {"layers", std::move(layers)}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("version")) throw ValidationError("corrupt checkpoint: missing version");
    const int version = j.at("version").get<int>();
    if (version != kCheckpointVersion)
      throw ValidationError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                            std::to_string(kCheckpointVersion) + ")");
    Checkpoint c;
    const MLPConfig mc = mlp_config_from_json(j.at("mlp_config"));
    c.model = MLP(mc);
    c.train_config = train_config_from_json(j.at("train_config"));
    c.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    if (c.feature_names.size() != mc.input_dim)
      throw ValidationError("corrupt checkpoint: feature_names does not match input_dim");
    c.threshold = parse_hex_double(j.at("threshold").get<std::string>());
    c.scaler.mean = parse_hex_array(j.at("scaler").at("mean"), mc.input_dim, "scaler.mean");
    c.scaler.std = parse_hex_array(j.at("scaler").at("std"), mc.input_dim, "scaler.std");
    const auto& jl = j.at("layers");
    if (!jl.is_array() || jl.size() != c.model.layers().size())
      throw ValidationError("corrupt checkpoint: layer count does not match the configuration");
    for (std::size_t li = 0; li < jl.size(); ++li) {
      Layer& l = c.model.layers()[li];
      const auto& e = jl[li];
      const std::string name = "layers[" + std::to_string(li) + "]";
      if (e.at("rows").get<std::size_t>() != l.w.rows || e.at("cols").get<std::size_t>() != l.w.cols)
        throw ValidationError("corrupt checkpoint: " + name + " has the wrong shape");
      l.w.data = parse_hex_array(e.at("W"), l.w.data.size(), name + ".W");
      l.b = parse_hex_array(e.at("b"), l.out(), name + ".b");
      if (l.batchnorm != !e.at("bn").is_null()) throw ValidationError("corrupt checkpoint: " + name + " batchnorm flag");
      if (l.batchnorm) {
        const auto& bn = e.at("bn");
        l.gamma = parse_hex_array(bn.at("gamma"), l.out(), name + ".gamma");
        l.beta = parse_hex_array(bn.at("beta"), l.out(), name + ".beta");
        l.run_mean = parse_hex_array(bn.at("run_mean"), l.out(), name + ".run_mean");
        l.run_var = parse_hex_array(bn.at("run_var"), l.out(), name + ".run_var");
        for (double v : l.run_var)
          if (v < 0) throw ValidationError("corrupt checkpoint: negative running variance in " + name);
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("corrupt checkpoint: ") + e.what());
  }
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
  write_file_atomic(path, checkpoint_to_json(c).dump(1) + "\n");
}

Checkpoint load_checkpoint(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("corrupt checkpoint " + path + ": " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace epos
