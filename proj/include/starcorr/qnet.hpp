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

#ifndef STARCORR_QNET_HPP
#define STARCORR_QNET_HPP

#include <optional>
#include <string>
#include <vector>

#include "starcorr/bell.hpp"
#include "starcorr/qmath.hpp"
#include "starcorr/star.hpp"

// Quantum strategies on star networks: Born-rule behavior generation, the
// Bell-to-star tensorization construction, named example presets, and
// critical-visibility search.
//
// Global tensor ordering is (edge_1, node_1, edge_2, node_2, ...); node-joint
// operators are constructed on (node_1 ... node_N) and routed into the
// interleaved layout by explicit subsystem index maps.
namespace starcorr::qnet {

/// Bipartite source state together with its declared (edge, node) split.
struct SourceState {
  qmath::DensityMatrix state;
  Eigen::Index edge_dim = 2;
  Eigen::Index node_dim = 2;
};

class QuantumNetworkStrategy {
 public:
  QuantumNetworkStrategy(std::vector<SourceState> states,
                         std::vector<std::vector<qmath::Observable>> edge_measurements,
                         std::vector<qmath::ProjectiveMeasurement> node_measurements);

  int sources() const { return static_cast<int>(states_.size()); }
  const std::vector<SourceState>& states() const { return states_; }
  const std::vector<std::vector<qmath::Observable>>& edge_measurements() const {
    return edge_measurements_;
  }
  const std::vector<qmath::ProjectiveMeasurement>& node_measurements() const {
    return node_measurements_;
  }

  /// Same measurements on sources replaced by new states.
  QuantumNetworkStrategy with_states(std::vector<SourceState> states) const;

 private:
  std::vector<SourceState> states_;
  std::vector<std::vector<qmath::Observable>> edge_measurements_;
  std::vector<qmath::ProjectiveMeasurement> node_measurements_;
};

/// Born-rule expansion of a quantum strategy into the full conditional
/// distribution; edge observables are split into +-1 eigenprojectors.
star::NetworkBehavior behavior_from_quantum(const QuantumNetworkStrategy& qs,
                                            const star::ScenarioShape& shape);

/// A bipartite Bell strategy: shared state, Alice and Bob binary observables.
struct BellStrategy {
  qmath::DensityMatrix state;
  std::vector<qmath::Observable> alice;
  std::vector<qmath::Observable> bob;
};

struct StarBundle {
  star::StarScenario scenario;
  QuantumNetworkStrategy strategy;
};

/// Distributes N copies of a Bell strategy over a star network: every edge
/// reuses Alice's observables, node input y measures the N-fold product of
/// Bob's observable y, refined into a 2^N-outcome sign-pattern measurement
/// with parity output tables. The network value equals the bipartite value.
StarBundle tensorize(const bell::BellMatrix& m, const BellStrategy& bs, int sources);

/// psi00, the four tetrahedral Bloch settings for Alice and the three Pauli
/// observables for Bob; Bell value 4*sqrt(3) against classical bound 6.
BellStrategy elegant_bell_strategy();

/// psi00 with the standard maximal CHSH settings; Bell value sqrt(2) under
/// the (1/2)(-1)^{xy} normalization with classical bound 1.
BellStrategy chsh_bell_strategy();

/// Named scenario + strategy bundles:
///   chsh_star          CHSH matrix per edge, binary node settings (uses `sources`)
///   elegant_swap_bsm   two-source entanglement swapping, 4-outcome BSM node
///   elegant_swap_3settings  same sources, three binary product node settings
///   elegant_swapped_roles   transposed matrix, Pauli edges, product node settings
StarBundle preset(const std::string& name, int sources = 2);

/// Smallest visibility v at which replacing every source by its Werner
/// mixture meets the network bound, by bisection to 1e-9. Empty when the
/// noiseless strategy does not violate. Requires two-qubit sources.
std::optional<double> critical_visibility(const star::StarScenario& sc,
                                          const QuantumNetworkStrategy& qs);

}  // namespace starcorr::qnet

#endif  // STARCORR_QNET_HPP
