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

#ifndef STARCORR_STAR_HPP
#define STARCORR_STAR_HPP

#include <span>
#include <vector>

#include "starcorr/bell.hpp"
#include "starcorr/common.hpp"

// Star-network inequalities built from Bell matrices: the I_i correlation
// quantities, the nonlinear network value sum_i |I_i|^{1/N}, its N-local
// bound (geometric mean of per-edge classical bounds), and the
// product-measurement bound check.
namespace starcorr::star {

/// One network correlation quantity: node input y and the output bit table
/// f over the outcome alphabet of y, selecting the sign (-1)^{f(b)}.
struct NodeSetting {
  int input = 0;
  std::vector<int> output_bits;
};

/// A star network with N independent sources: one Bell matrix per edge (all
/// sharing the same row count), the node outcome alphabets per node input,
/// and one (input, output-bit table) pair per correlation quantity.
class StarScenario {
 public:
  StarScenario(std::vector<bell::BellMatrix> edge_matrices,
               std::vector<int> node_alphabets,
               std::vector<NodeSetting> node_settings);

  int sources() const { return static_cast<int>(edge_matrices_.size()); }
  const std::vector<bell::BellMatrix>& edge_matrices() const { return edge_matrices_; }
  const std::vector<int>& node_alphabets() const { return node_alphabets_; }
  const std::vector<NodeSetting>& node_settings() const { return node_settings_; }
  int correlator_count() const { return static_cast<int>(node_settings_.size()); }

  /// Same matrix on every edge, one binary node input per row with f(b) = b.
  static StarScenario homogeneous(const bell::BellMatrix& m, int sources);

 private:
  std::vector<bell::BellMatrix> edge_matrices_;
  std::vector<int> node_alphabets_;
  std::vector<NodeSetting> node_settings_;
};

/// Input/output shape of a star network, independent of the Bell matrices.
struct ScenarioShape {
  int sources = 0;
  std::vector<int> edge_settings;   // settings per edge observer
  std::vector<int> node_alphabets;  // outcome alphabet per node input

  int node_settings() const { return static_cast<int>(node_alphabets.size()); }
  friend bool operator==(const ScenarioShape&, const ScenarioShape&) = default;
};

ScenarioShape shape_of(const StarScenario& sc);

/// Conditional distribution P(a_1..a_N, b | x_1..x_N, y) stored densely per
/// node input. Edge outcomes are bits packed with edge 0 most significant.
class NetworkBehavior {
 public:
  NetworkBehavior(ScenarioShape shape, std::vector<std::vector<double>> tables);

  const ScenarioShape& shape() const { return shape_; }

  /// Probability of (outcome_mask, b) given edge settings x and node input y,
  /// clamped to 0 from above -1e-12.
  double probability(std::span<const int> x, int y, unsigned outcome_mask,
                     int b) const;

  const std::vector<std::vector<double>>& tables() const { return tables_; }

  /// Flat index into tables()[y].
  std::size_t index(std::span<const int> x, unsigned outcome_mask, int b,
                    int alphabet) const;

 private:
  ScenarioShape shape_;
  std::vector<std::vector<double>> tables_;
};

struct StarEvaluation {
  RVector I;
  double s_net = 0.0;
  double bound = 0.0;
  bool violated = false;
};

/// |value|^{1/n}, mapping magnitudes below 1e-15 to exactly 0.
double root_abs(double value, int n);

/// Geometric mean of the per-edge classical bounds.
double star_bound(const StarScenario& sc);

/// (N+1)-party correlator sum_{a,b} (-1)^{a_1+..+a_N+f_i(b)} P(a b | x y_i).
double network_correlator(const NetworkBehavior& behavior, const StarScenario& sc,
                          int i, std::span<const int> x);

/// Computes every I_i, the network value sum_i |I_i|^{1/N}, the bound and
/// the violation flag (s_net > bound + 1e-9).
StarEvaluation evaluate(const NetworkBehavior& behavior, const StarScenario& sc);

struct ProductBound {
  double geometric_mean = 0.0;
  bool holds = false;
};

/// Checks s_net against the geometric mean of per-edge bipartite Bell values,
/// the ceiling for product node measurements.
ProductBound product_bound_check(std::span<const double> edge_bell_values,
                                 double s_net);

}  // namespace starcorr::star

#endif  // STARCORR_STAR_HPP
