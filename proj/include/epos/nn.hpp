#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "epos/rng.hpp"

namespace epos {

/// Dense row-major matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  Matrix select_rows(std::span<const std::size_t> idx) const;
  Matrix select_cols(std::span<const std::size_t> idx) const;
  bool operator==(const Matrix&) const = default;
};

struct MLPConfig {
  std::size_t input_dim = 0;
  std::vector<std::size_t> hidden{256, 128, 64, 32};
  bool use_batchnorm = true;
  double dropout_rate = 0.0;
  std::uint64_t seed = 1;

  void validate() const;
  bool operator==(const MLPConfig&) const = default;
};

enum class LossKind { cross_entropy, weighted_bce };

struct TrainConfig {
  int epochs = 200;
  std::size_t batch_size = 128;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  LossKind loss = LossKind::cross_entropy;
  double fp_weight = 1.0;
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  bool stratify = true;
  /// Epochs without validation-loss improvement before stopping; 0 disables.
  int patience = 20;
  std::uint64_t seed = 1;

  void validate() const;
};

nlohmann::json to_json(const MLPConfig& c);
nlohmann::json to_json(const TrainConfig& c);
MLPConfig mlp_config_from_json(const nlohmann::json& j);
TrainConfig train_config_from_json(const nlohmann::json& j);
std::string to_string(LossKind k);
LossKind parse_loss_kind(const std::string& s);

inline constexpr double kBatchNormEpsilon = 1e-5;
inline constexpr double kBatchNormMomentum = 0.1;

struct Layer {
  Matrix w;  // out x in
  std::vector<double> b;
  bool batchnorm = false;
  std::vector<double> gamma, beta, run_mean, run_var;

  std::size_t in() const { return w.cols; }
  std::size_t out() const { return w.rows; }
  bool operator==(const Layer&) const = default;
};

/// Parameter gradients, shaped like the layers.
struct LayerGrad {
  Matrix w;
  std::vector<double> b, gamma, beta;
};

/// Activations kept by a forward pass for the matching backward pass.
struct Tape {
  struct Step {
    Matrix input;
    Matrix xhat;                   // normalized pre-activations (batchnorm only)
    std::vector<double> inv_std;   // per unit
    Matrix gate;                   // ReLU/dropout multiplier per entry
  };
  std::vector<Step> steps;
  bool train_mode = false;
  std::vector<double> logits;
};

enum class Mode { train, eval };

/// affine → batchnorm → ReLU → dropout per hidden layer, then affine → sigmoid.
class MLP {
 public:
  MLP() = default;
  explicit MLP(const MLPConfig& config);

  const MLPConfig& config() const { return config_; }
  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  /// Output logits. Train mode uses batch statistics, updates running
  /// statistics, and draws dropout masks from `rng`.
  std::vector<double> forward(const Matrix& x, Mode mode, Rng* rng = nullptr, Tape* tape = nullptr);
  /// Eval-mode logits without side effects.
  std::vector<double> logits(const Matrix& x, Tape* tape = nullptr) const;
  /// Eval-mode probabilities.
  std::vector<double> predict(const Matrix& x) const;

  /// Backpropagates dL/dlogit. Accumulates into `grads` (if non-null, resized as
  /// needed) and returns dL/dx.
  Matrix backward(const Tape& tape, std::span<const double> dlogit, std::vector<LayerGrad>* grads) const;

  std::size_t parameter_count() const;
  bool operator==(const MLP&) const = default;

 private:
  std::vector<double> run(const Matrix& x, bool train, bool update_stats, Rng* rng, Tape* tape);

  MLPConfig config_;
  std::vector<Layer> layers_;
};

double sigmoid(double z);

inline constexpr double kProbClamp = 1e-7;

/// Mean of −[y log p + w (1−y) log(1−p)] with p clamped to [1e−7, 1−1e−7].
double loss_weighted_bce(std::span<const double> probs, std::span<const int> labels, double fp_weight);
double loss_cross_entropy(std::span<const double> probs, std::span<const int> labels);
/// d(mean loss)/d(logit) for each item; zero where the clamp is active.
std::vector<double> weighted_bce_logit_grad(std::span<const double> logits, std::span<const int> labels, double fp_weight);

struct Scaler {
  std::vector<double> mean;
  std::vector<double> std;

  bool operator==(const Scaler&) const = default;
};

Scaler standardize_fit(const Matrix& x);
Matrix standardize_apply(const Scaler& s, const Matrix& x);

struct Split {
  std::vector<std::size_t> train, val, test;
};

/// Disjoint sorted index sets. Stratified: per class, round(fraction · class size)
/// items go to val and test, the rest to train.
Split split_indices(std::span<const int> labels, double train_fraction, double val_fraction, double test_fraction,
                    bool stratify, std::uint64_t seed);

struct Metrics {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
};

Metrics metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t tn, std::size_t fn);
/// Positive iff probability >= threshold.
Metrics compute_metrics(std::span<const double> probs, std::span<const int> labels, double threshold);
Metrics evaluate(const MLP& model, const Matrix& x, std::span<const int> labels, double threshold = 0.5);
nlohmann::json to_json(const Metrics& m);

/// Returned when no threshold among the scores reaches the target: predicts nothing.
double unreachable_threshold();
/// Smallest threshold among {0} ∪ scores with precision >= target; recall is
/// nonincreasing in the threshold, so this also maximizes recall.
double threshold_for_precision(std::span<const double> probs, std::span<const int> labels, double target_precision);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0;
  double val_loss = 0;
  Metrics val;
};

struct TrainResult {
  MLP model;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

/// Mini-batch Adam on standardized inputs. Keeps the weights of the epoch with
/// the lowest validation loss. Throws InternalError on a non-finite loss.
TrainResult train(const Matrix& x_train, std::span<const int> y_train, const Matrix& x_val, std::span<const int> y_val,
                  const MLPConfig& mlp, const TrainConfig& tc);

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  MLP model;
  Scaler scaler;
  TrainConfig train_config;
  std::vector<std::string> feature_names;
  double threshold = 0.5;
};

nlohmann::json checkpoint_to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const nlohmann::json& j);
void save_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace epos
