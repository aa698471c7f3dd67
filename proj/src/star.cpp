// Copyright 2026 starcorr contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "starcorr/star.hpp"

#include <bit>
#include <cmath>
#include <numeric>

namespace starcorr::star {

namespace {

std::size_t joint_setting_count(const std::vector<int>& edge_settings) {
  std::size_t n = 1;
  for (int s : edge_settings) n *= static_cast<std::size_t>(s);
  return n;
}

// Row-major odometer over edge settings (last edge fastest). Returns false
// once the index wraps around to all zeros.
bool next_tuple(std::vector<int>& x, const std::vector<int>& dims) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    if (++x[k] < dims[k]) return true;
    x[k] = 0;
  }
  return false;
}

}  // namespace

StarScenario::StarScenario(std::vector<bell::BellMatrix> edge_matrices,
                           std::vector<int> node_alphabets,
                           std::vector<NodeSetting> node_settings)
    : edge_matrices_(std::move(edge_matrices)),
      node_alphabets_(std::move(node_alphabets)),
      node_settings_(std::move(node_settings)) {
  if (edge_matrices_.empty()) {
    throw ValidationError("StarScenario: at least one source required");
  }
  const Eigen::Index n_b = edge_matrices_.front().bob_settings();
  for (const auto& m : edge_matrices_) {
    if (m.bob_settings() != n_b) {
      throw ValidationError("StarScenario: edge matrices must share the row count");
    }
  }
  if (static_cast<Eigen::Index>(node_settings_.size()) != n_b) {
    throw ValidationError("StarScenario: one node setting per matrix row required");
  }
  if (node_alphabets_.empty()) {
    throw ValidationError("StarScenario: node alphabet list is empty");
  }
  for (int alpha : node_alphabets_) {
    if (alpha < 1) throw ValidationError("StarScenario: alphabet sizes must be positive");
  }
  for (const NodeSetting& s : node_settings_) {
    if (s.input < 0 || s.input >= static_cast<int>(node_alphabets_.size())) {
      throw ValidationError("StarScenario: node setting references unknown input");
    }
    if (static_cast<int>(s.output_bits.size()) != node_alphabets_[s.input]) {
      throw ValidationError("StarScenario: output bit table length must equal the alphabet");
    }
    for (int bit : s.output_bits) {
      if (bit != 0 && bit != 1) {
        throw ValidationError("StarScenario: output bit tables must contain 0/1");
      }
    }
  }
}

StarScenario StarScenario::homogeneous(const bell::BellMatrix& m, int sources) {
  if (sources < 1) throw ValidationError("StarScenario: sources must be >= 1");
  std::vector<bell::BellMatrix> edges(sources, m);
  std::vector<int> alphabets(m.bob_settings(), 2);
  std::vector<NodeSetting> settings;
  settings.reserve(m.bob_settings());
  for (int i = 0; i < m.bob_settings(); ++i) {
    settings.push_back(NodeSetting{i, {0, 1}});
  }
  return StarScenario(std::move(edges), std::move(alphabets), std::move(settings));
}

ScenarioShape shape_of(const StarScenario& sc) {
  ScenarioShape shape;
  shape.sources = sc.sources();
  for (const auto& m : sc.edge_matrices()) {
    shape.edge_settings.push_back(static_cast<int>(m.alice_settings()));
  }
  shape.node_alphabets = sc.node_alphabets();
  return shape;
}

NetworkBehavior::NetworkBehavior(ScenarioShape shape,
                                 std::vector<std::vector<double>> tables)
    : shape_(std::move(shape)), tables_(std::move(tables)) {
  if (shape_.sources < 1 ||
      static_cast<int>(shape_.edge_settings.size()) != shape_.sources) {
    throw ValidationError("NetworkBehavior: inconsistent source count");
  }
  for (int s : shape_.edge_settings) {
    if (s < 1) throw ValidationError("NetworkBehavior: edge setting counts must be positive");
  }
  if (tables_.size() != shape_.node_alphabets.size()) {
    throw ValidationError("NetworkBehavior: one table per node input required");
  }
  const std::size_t joint_x = joint_setting_count(shape_.edge_settings);
  const std::size_t masks = std::size_t(1) << shape_.sources;
  for (std::size_t y = 0; y < tables_.size(); ++y) {
    const int alpha = shape_.node_alphabets[y];
    if (alpha < 1) throw ValidationError("NetworkBehavior: alphabet sizes must be positive");
    if (tables_[y].size() != joint_x * masks * static_cast<std::size_t>(alpha)) {
      throw ValidationError("NetworkBehavior: table size mismatch");
    }
    for (std::size_t block = 0; block < joint_x; ++block) {
      double sum = 0.0;
      for (std::size_t e = 0; e < masks * static_cast<std::size_t>(alpha); ++e) {
        const double p = tables_[y][block * masks * alpha + e];
        if (!std::isfinite(p) || p < -1e-12) {
          throw ValidationError("NetworkBehavior: probabilities must be >= -1e-12");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > tol::kDefault) {
        throw ValidationError("NetworkBehavior: probabilities must sum to 1 per input");
      }
    }
  }
}

std::size_t NetworkBehavior::index(std::span<const int> x, unsigned outcome_mask,
                                   int b, int alphabet) const {
  std::size_t flat = 0;
  for (int k = 0; k < shape_.sources; ++k) {
    flat = flat * static_cast<std::size_t>(shape_.edge_settings[k]) +
           static_cast<std::size_t>(x[k]);
  }
  const std::size_t masks = std::size_t(1) << shape_.sources;
  return (flat * masks + outcome_mask) * static_cast<std::size_t>(alphabet) +
         static_cast<std::size_t>(b);
}

double NetworkBehavior::probability(std::span<const int> x, int y,
                                    unsigned outcome_mask, int b) const {
  if (y < 0 || y >= shape_.node_settings()) {
    throw ValidationError("NetworkBehavior: node input out of range");
  }
  if (static_cast<int>(x.size()) != shape_.sources) {
    throw ValidationError("NetworkBehavior: edge setting tuple size mismatch");
  }
  for (int k = 0; k < shape_.sources; ++k) {
    if (x[k] < 0 || x[k] >= shape_.edge_settings[k]) {
      throw ValidationError("NetworkBehavior: edge setting out of range");
    }
  }
  const int alpha = shape_.node_alphabets[y];
  if (b < 0 || b >= alpha || outcome_mask >= (1u << shape_.sources)) {
    throw ValidationError("NetworkBehavior: outcome out of range");
  }
  const double p = tables_[y][index(x, outcome_mask, b, alpha)];
  return p < 0.0 ? 0.0 : p;
}

double root_abs(double value, int n) {
  const double magnitude = std::abs(value);
  if (magnitude < tol::kZeroFloor) return 0.0;
  if (n == 1) return magnitude;
  return std::pow(magnitude, 1.0 / static_cast<double>(n));
}

double star_bound(const StarScenario& sc) {
  double log_sum = 0.0;
  for (const auto& m : sc.edge_matrices()) {
    log_sum += std::log(bell::local_bound(m).bound);
  }
  return std::exp(log_sum / sc.sources());
}

double network_correlator(const NetworkBehavior& behavior, const StarScenario& sc,
                          int i, std::span<const int> x) {
  if (i < 0 || i >= sc.correlator_count()) {
    throw ValidationError("network_correlator: correlator index out of range");
  }
  if (shape_of(sc) != behavior.shape()) {
    throw ValidationError("network_correlator: behavior does not match scenario shape");
  }
  const NodeSetting& setting = sc.node_settings()[i];
  const int y = setting.input;
  const int alpha = sc.node_alphabets()[y];
  const unsigned masks = 1u << sc.sources();
  double value = 0.0;
  for (unsigned mask = 0; mask < masks; ++mask) {
    const int edge_parity = std::popcount(mask) & 1;
    for (int b = 0; b < alpha; ++b) {
      const int sign = (edge_parity ^ setting.output_bits[b]) ? -1 : 1;
      value += sign * behavior.probability(x, y, mask, b);
    }
  }
  if (std::abs(value) > 1.0 + tol::kDefault) {
    throw NumericError("network_correlator: correlator magnitude exceeds 1");
  }
  return value;
}

StarEvaluation evaluate(const NetworkBehavior& behavior, const StarScenario& sc) {
  if (shape_of(sc) != behavior.shape()) {
    throw ValidationError("evaluate: behavior does not match scenario shape");
  }
  const int n = sc.sources();
  StarEvaluation result;
  result.I = RVector::Zero(sc.correlator_count());
  std::vector<int> x(n, 0);
  for (int i = 0; i < sc.correlator_count(); ++i) {
    double total = 0.0;
    std::fill(x.begin(), x.end(), 0);
    do {
      double coeff = 1.0;
      for (int k = 0; k < n; ++k) {
        coeff *= sc.edge_matrices()[k].coefficients()(i, x[k]);
      }
      if (coeff != 0.0) {
        total += coeff * network_correlator(behavior, sc, i, x);
      }
    } while (next_tuple(x, behavior.shape().edge_settings));
    result.I(i) = total;
  }
  result.s_net = 0.0;
  for (Eigen::Index i = 0; i < result.I.size(); ++i) {
    result.s_net += root_abs(result.I(i), n);
  }
  result.bound = star_bound(sc);
  result.violated = result.s_net > result.bound + tol::kDefault;
  return result;
}

ProductBound product_bound_check(std::span<const double> edge_bell_values,
                                 double s_net) {
  if (edge_bell_values.empty()) {
    throw ValidationError("product_bound_check: at least one edge value required");
  }
  double product = 1.0;
  for (double v : edge_bell_values) {
    if (!std::isfinite(v)) {
      throw ValidationError("product_bound_check: values must be finite");
    }
    product *= std::abs(v);
  }
  ProductBound result;
  result.geometric_mean = root_abs(product, static_cast<int>(edge_bell_values.size()));
  result.holds = s_net <= result.geometric_mean + tol::kDefault;
  return result;
}

}  // namespace starcorr::star
