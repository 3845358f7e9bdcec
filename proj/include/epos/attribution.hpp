#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "epos/nn.hpp"

namespace epos {

/// Which model output is differentiated.
enum class SaliencyTarget { probability, logit };

std::string to_string(SaliencyTarget t);
SaliencyTarget parse_saliency_target(const std::string& s);

struct SaliencyReport {
  std::size_t dataset_size = 0;
  SaliencyTarget target = SaliencyTarget::probability;
  std::vector<std::string> feature_names;
  /// Mean absolute input gradient per feature, in column order.
  std::vector<double> r;
  /// Column indices by descending r; ties by lower index.
  std::vector<std::size_t> ranking;
};

/// r_i = mean over rows of |∂f/∂x_i| on standardized inputs, eval mode.
SaliencyReport saliency(const MLP& model, const Matrix& x, std::vector<std::string> feature_names,
                        SaliencyTarget target = SaliencyTarget::probability);

std::vector<std::string> top_k(const SaliencyReport& report, std::size_t k);

/// {dataset_size, target, r: [{feature, value}] in ranking order}.
nlohmann::json to_json(const SaliencyReport& report);

}  // namespace epos
