#include "epos/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "epos/error.hpp"

namespace epos {

std::string to_string(SaliencyTarget t) { return t == SaliencyTarget::probability ? "probability" : "logit"; }

SaliencyTarget parse_saliency_target(const std::string& s) {
  if (s == "probability") return SaliencyTarget::probability;
  if (s == "logit") return SaliencyTarget::logit;
  throw ValidationError("unknown saliency target \"" + s + "\" (expected probability or logit)");
}

SaliencyReport saliency(const MLP& model, const Matrix& x, std::vector<std::string> feature_names,
                        SaliencyTarget target) {
  if (x.rows == 0) throw ValidationError("saliency needs a nonempty dataset");
  if (feature_names.size() != x.cols) throw ValidationError("saliency feature names do not match the data width");
  constexpr std::size_t chunk = 512;
  std::vector<double> sum(x.cols, 0.0);
  std::vector<std::size_t> idx;
  for (std::size_t start = 0; start < x.rows; start += chunk) {
    const std::size_t end = std::min(x.rows, start + chunk);
    idx.resize(end - start);
    std::iota(idx.begin(), idx.end(), start);
    const Matrix xb = x.select_rows(idx);
    Tape tape;
    const std::vector<double> z = model.logits(xb, &tape);
    std::vector<double> seed(z.size(), 1.0);
    if (target == SaliencyTarget::probability) {
      for (std::size_t i = 0; i < z.size(); ++i) {
        const double p = sigmoid(z[i]);
        seed[i] = p * (1.0 - p);
      }
    }
    const Matrix dx = model.backward(tape, seed, nullptr);
    for (std::size_t r = 0; r < dx.rows; ++r)
      for (std::size_t c = 0; c < dx.cols; ++c) sum[c] += std::abs(dx(r, c));
  }
  SaliencyReport rep;
  rep.dataset_size = x.rows;
  rep.target = target;
  rep.feature_names = std::move(feature_names);
  rep.r.resize(x.cols);
  for (std::size_t c = 0; c < x.cols; ++c) rep.r[c] = sum[c] / static_cast<double>(x.rows);
  rep.ranking.resize(x.cols);
  std::iota(rep.ranking.begin(), rep.ranking.end(), 0);
  std::stable_sort(rep.ranking.begin(), rep.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return rep.r[a] > rep.r[b]; });
  return rep;
}

std::vector<std::string> top_k(const SaliencyReport& report, std::size_t k) {
  if (k < 1 || k > report.ranking.size())
    throw ValidationError("top_k needs 1 <= k <= " + std::to_string(report.ranking.size()));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(report.feature_names[report.ranking[i]]);
  return out;
}

nlohmann::json to_json(const SaliencyReport& report) {
  nlohmann::json r = nlohmann::json::array();
  for (std::size_t i : report.ranking) r.push_back({{"feature", report.feature_names[i]}, {"value", report.r[i]}});
  return {{"dataset_size", report.dataset_size}, {"target", to_string(report.target)}, {"r", std::move(r)}};
}

}  // namespace epos
