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

#ifndef STARCORR_NLOCAL_HPP
#define STARCORR_NLOCAL_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "starcorr/bell.hpp"
#include "starcorr/star.hpp"

// Classical strategies on star networks with independent finite-support
// hidden variables: behavior generation, classical maximization, reduction
// to node-deterministic shared-edge form, and enumeration of the
// bound-saturating correlation families.
namespace starcorr::nlocal {

/// Probability weights over the hidden-variable alphabet of one source.
struct SourceSupport {
  RVector weights;
};

/// Finite-support classical strategy: per-source weights, per-edge response
/// tables (lambda, x) -> +-1, and the node response (lambda tuple, y) -> b.
class NLocalStrategy {
 public:
  NLocalStrategy(std::vector<SourceSupport> supports,
                 std::vector<Eigen::MatrixXi> edge_tables,
                 std::vector<std::vector<int>> node_table);

  int sources() const { return static_cast<int>(supports_.size()); }
  const std::vector<SourceSupport>& supports() const { return supports_; }
  /// Rows index lambda values, columns index settings; entries are +-1.
  const std::vector<Eigen::MatrixXi>& edge_tables() const { return edge_tables_; }
  /// node_table()[y][flat lambda tuple] is the node outcome. Lambda tuples
  /// are flattened row-major with source 0 most significant.
  const std::vector<std::vector<int>>& node_table() const { return node_table_; }

  std::size_t lambda_tuple_count() const;

 private:
  std::vector<SourceSupport> supports_;
  std::vector<Eigen::MatrixXi> edge_tables_;
  std::vector<std::vector<int>> node_table_;
};

/// Expands a strategy into the full conditional distribution. Edge sign +1
/// maps to outcome 0 and -1 to outcome 1.
star::NetworkBehavior behavior_from_strategy(const NLocalStrategy& strategy,
                                             const star::ScenarioShape& shape);

/// Node-deterministic form: every edge plays the same weighted mixture of
/// deterministic assignments and the node answers a fixed sign per setting.
struct ReducedStrategy {
  RVector weights;
  Eigen::MatrixXi edge_table;   // rows: lambda, cols: settings, entries +-1
  std::vector<int> node_signs;  // b_i = +-1 per correlation quantity
};

/// Expands a reduced strategy against a concrete scenario, picking for every
/// node input an outcome realizing the requested signs. With strict=true an
/// unrealizable sign pattern is a validation error; otherwise the closest
/// outcome is used (the network value is sign-independent).
NLocalStrategy realize(const ReducedStrategy& reduced, const star::StarScenario& sc,
                       bool strict = true);

struct ClassicalMax {
  double value = 0.0;
  bool exact = false;  // false: heterogeneous edges, value is a lower bound
  std::optional<ReducedStrategy> witness;
  std::vector<bell::DeterministicAssignment> edge_assignments;
};

/// Maximum of the network value over classical strategies. Exact when all
/// edge matrices coincide (value equals the shared classical bound); a
/// best-deterministic lower bound flagged exact=false otherwise.
ClassicalMax classical_max(const star::StarScenario& sc);

/// Reduces a bound-saturating strategy (within 1e-6, all I_i >= -1e-9) to a
/// ReducedStrategy with the same I_i, following the sign-factorization and
/// edge-replication construction. Requires identical edge matrices.
ReducedStrategy reduce(const NLocalStrategy& strategy, const star::StarScenario& sc);

struct SignClassMember {
  bell::DeterministicAssignment assignment;
  RVector transformed;
};

/// Maximal set of bound-saturating assignments whose transformed vectors
/// share signs componentwise; pattern entries are +1, -1 or 0 where every
/// member vanishes.
struct SignClass {
  std::vector<int> pattern;
  std::vector<SignClassMember> members;
};

/// Enumerates all bound-saturating assignments of m and groups them into
/// maximal sign-consistent classes, ordered lexicographically by pattern.
std::vector<SignClass> saturating_families(const bell::BellMatrix& m, int sources);

/// Realizes a class mixture as an explicit strategy on a concrete scenario:
/// every edge plays member r with probability weights[r], the node output is
/// deterministic with signs node_signs.
NLocalStrategy realize_mixture(const SignClass& family, const RVector& weights,
                               const std::vector<int>& node_signs,
                               const star::StarScenario& sc);

/// Deterministic stream of pseudo-random strategies with hidden-variable
/// support sizes up to 4, reproducible from the seed.
class StrategySampler {
 public:
  StrategySampler(star::ScenarioShape shape, std::uint64_t seed);
  NLocalStrategy next();

 private:
  star::ScenarioShape shape_;
  std::mt19937_64 rng_;
};

std::vector<NLocalStrategy> sample_strategies(const star::StarScenario& sc, int count,
                                              std::uint64_t seed);

}  // namespace starcorr::nlocal

#endif  // STARCORR_NLOCAL_HPP
