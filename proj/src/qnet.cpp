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

#include "starcorr/qnet.hpp"

#include <bit>
#include <cmath>

namespace starcorr::qnet {

namespace {

bool next_tuple(std::vector<int>& idx, const std::vector<int>& dims) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    if (++idx[k] < dims[k]) return true;
    idx[k] = 0;
  }
  return false;
}

// Tetrahedral Bloch vectors whose observables pair with the plain Pauli
// observables to give <A_x B_y> = M_yx / sqrt(3) on psi00.
Eigen::Vector3d tetrahedron_vector(int x) {
  static const double s = 1.0 / std::sqrt(3.0);
  switch (x) {
    case 0: return {s, -s, s};
    case 1: return {s, s, -s};
    case 2: return {-s, -s, -s};
    case 3: return {-s, s, s};
    default: throw ValidationError("tetrahedron_vector: index out of range");
  }
}

qmath::ProjectiveMeasurement binary_product_measurement(
    const std::vector<qmath::Observable>& factors) {
  std::vector<CMatrix> matrices;
  matrices.reserve(factors.size());
  for (const auto& o : factors) matrices.push_back(o.matrix());
  const CMatrix joint = qmath::tensor_all(matrices);
  const CMatrix id = qmath::identity(joint.rows());
  return qmath::ProjectiveMeasurement({0.5 * (id + joint), 0.5 * (id - joint)});
}

// 2^N-outcome refinement of a product of binary observables: outcome bits
// record each factor's sign, factor 0 most significant.
qmath::ProjectiveMeasurement sign_pattern_measurement(
    const std::vector<qmath::Observable>& factors) {
  const int n = static_cast<int>(factors.size());
  std::vector<std::array<CMatrix, 2>> projectors;
  projectors.reserve(n);
  for (const auto& o : factors) projectors.push_back(qmath::sign_projectors(o));
  std::vector<CMatrix> outcomes;
  outcomes.reserve(std::size_t(1) << n);
  for (unsigned t = 0; t < (1u << n); ++t) {
    std::vector<CMatrix> factors_t;
    factors_t.reserve(n);
    for (int k = 0; k < n; ++k) {
      factors_t.push_back(projectors[k][(t >> (n - 1 - k)) & 1u]);
    }
    outcomes.push_back(qmath::tensor_all(factors_t));
  }
  return qmath::ProjectiveMeasurement(std::move(outcomes));
}

std::vector<int> parity_table(int sources) {
  std::vector<int> f(std::size_t(1) << sources);
  for (unsigned t = 0; t < f.size(); ++t) f[t] = std::popcount(t) & 1;
  return f;
}

}  // namespace

QuantumNetworkStrategy::QuantumNetworkStrategy(
    std::vector<SourceState> states,
    std::vector<std::vector<qmath::Observable>> edge_measurements,
    std::vector<qmath::ProjectiveMeasurement> node_measurements)
    : states_(std::move(states)),
      edge_measurements_(std::move(edge_measurements)),
      node_measurements_(std::move(node_measurements)) {
  if (states_.empty() || edge_measurements_.size() != states_.size()) {
    throw ValidationError("QuantumNetworkStrategy: one edge measurement set per source");
  }
  Eigen::Index node_total = 1;
  for (std::size_t k = 0; k < states_.size(); ++k) {
    const SourceState& s = states_[k];
    if (s.edge_dim < 1 || s.node_dim < 1 ||
        s.state.dim() != s.edge_dim * s.node_dim) {
      throw ValidationError("QuantumNetworkStrategy: state does not factor as declared");
    }
    if (edge_measurements_[k].empty()) {
      throw ValidationError("QuantumNetworkStrategy: empty edge measurement list");
    }
    for (const auto& o : edge_measurements_[k]) {
      if (o.dim() != s.edge_dim) {
        throw ValidationError("QuantumNetworkStrategy: edge observable dimension mismatch");
      }
    }
    node_total *= s.node_dim;
  }
  if (node_measurements_.empty()) {
    throw ValidationError("QuantumNetworkStrategy: at least one node measurement required");
  }
  for (const auto& meas : node_measurements_) {
    if (meas.dim() != node_total) {
      throw ValidationError("QuantumNetworkStrategy: node measurement dimension mismatch");
    }
  }
}

QuantumNetworkStrategy QuantumNetworkStrategy::with_states(
    std::vector<SourceState> states) const {
  return QuantumNetworkStrategy(std::move(states), edge_measurements_,
                                node_measurements_);
}

star::NetworkBehavior behavior_from_quantum(const QuantumNetworkStrategy& qs,
                                            const star::ScenarioShape& shape) {
  const int n = shape.sources;
  if (qs.sources() != n) {
    throw ValidationError("behavior_from_quantum: source count mismatch");
  }
  for (int k = 0; k < n; ++k) {
    if (static_cast<int>(qs.edge_measurements()[k].size()) != shape.edge_settings[k]) {
      throw ValidationError("behavior_from_quantum: edge setting count mismatch");
    }
  }
  if (static_cast<int>(qs.node_measurements().size()) != shape.node_settings()) {
    throw ValidationError("behavior_from_quantum: node setting count mismatch");
  }
  for (int y = 0; y < shape.node_settings(); ++y) {
    if (qs.node_measurements()[y].outcome_count() != shape.node_alphabets[y]) {
      throw ValidationError("behavior_from_quantum: node alphabet mismatch");
    }
  }

  // Interleaved global layout (edge_1, node_1, edge_2, node_2, ...).
  std::vector<Eigen::Index> dims;
  std::vector<int> edge_slots;
  std::vector<int> node_slots;
  for (int k = 0; k < n; ++k) {
    edge_slots.push_back(2 * k);
    node_slots.push_back(2 * k + 1);
    dims.push_back(qs.states()[k].edge_dim);
    dims.push_back(qs.states()[k].node_dim);
  }
  CMatrix rho = qs.states().front().state.matrix();
  for (int k = 1; k < n; ++k) rho = qmath::tensor(rho, qs.states()[k].state.matrix());

  // +-1 eigenprojectors for every edge observable.
  std::vector<std::vector<std::array<CMatrix, 2>>> edge_projectors(n);
  for (int k = 0; k < n; ++k) {
    for (const auto& o : qs.edge_measurements()[k]) {
      edge_projectors[k].push_back(qmath::sign_projectors(o));
    }
  }

  // Node projectors embedded into the interleaved layout, premultiplied by
  // the global state: entry = Tr[rho E Q] = Tr[(Q rho) E].
  std::vector<std::vector<CMatrix>> node_premultiplied(shape.node_settings());
  for (int y = 0; y < shape.node_settings(); ++y) {
    for (int b = 0; b < shape.node_alphabets[y]; ++b) {
      const CMatrix embedded = qmath::embed_operator(
          qs.node_measurements()[y].projector(b), dims, node_slots);
      node_premultiplied[y].push_back(embedded * rho);
    }
  }

  std::size_t joint_x = 1;
  for (int s : shape.edge_settings) joint_x *= static_cast<std::size_t>(s);
  const std::size_t masks = std::size_t(1) << n;
  std::vector<std::vector<double>> tables(shape.node_settings());
  for (int y = 0; y < shape.node_settings(); ++y) {
    tables[y].assign(joint_x * masks * shape.node_alphabets[y], 0.0);
  }

  std::vector<int> x(n, 0);
  std::size_t flat_x = 0;
  do {
    for (unsigned mask = 0; mask < masks; ++mask) {
      std::vector<CMatrix> factors;
      factors.reserve(n);
      for (int k = 0; k < n; ++k) {
        const unsigned a_k = (mask >> (n - 1 - k)) & 1u;
        factors.push_back(edge_projectors[k][x[k]][a_k]);
      }
      const CMatrix edge_op =
          qmath::embed_operator(qmath::tensor_all(factors), dims, edge_slots);
      for (int y = 0; y < shape.node_settings(); ++y) {
        const int alpha = shape.node_alphabets[y];
        for (int b = 0; b < alpha; ++b) {
          const Complex value =
              node_premultiplied[y][b].cwiseProduct(edge_op.transpose()).sum();
          if (std::abs(value.imag()) > tol::kDefault) {
            throw NumericError("behavior_from_quantum: probability has imaginary part");
          }
          tables[y][(flat_x * masks + mask) * alpha + b] = value.real();
        }
      }
    }
    ++flat_x;
  } while (next_tuple(x, shape.edge_settings));

  // Normalization failures indicate broken inputs rather than invalid shape.
  for (int y = 0; y < shape.node_settings(); ++y) {
    const int alpha = shape.node_alphabets[y];
    for (std::size_t block = 0; block < joint_x; ++block) {
      double sum = 0.0;
      for (std::size_t e = 0; e < masks * static_cast<std::size_t>(alpha); ++e) {
        sum += tables[y][block * masks * alpha + e];
      }
      if (std::abs(sum - 1.0) > tol::kDefault) {
        throw NumericError("behavior_from_quantum: probabilities do not sum to 1");
      }
    }
  }
  return star::NetworkBehavior(shape, std::move(tables));
}

StarBundle tensorize(const bell::BellMatrix& m, const BellStrategy& bs, int sources) {
  if (sources < 1) throw ValidationError("tensorize: sources must be >= 1");
  if (static_cast<Eigen::Index>(bs.alice.size()) != m.alice_settings() ||
      static_cast<Eigen::Index>(bs.bob.size()) != m.bob_settings()) {
    throw ValidationError("tensorize: strategy does not match the Bell matrix");
  }
  const Eigen::Index da = bs.alice.front().dim();
  const Eigen::Index db = bs.bob.front().dim();
  for (const auto& o : bs.alice) {
    if (o.dim() != da) throw ValidationError("tensorize: Alice dimensions differ");
  }
  for (const auto& o : bs.bob) {
    if (o.dim() != db) throw ValidationError("tensorize: Bob dimensions differ");
  }
  if (bs.state.dim() != da * db) {
    throw ValidationError("tensorize: state dimension mismatch");
  }

  const int n_b = static_cast<int>(m.bob_settings());
  std::vector<int> alphabets(n_b, 1 << sources);
  std::vector<star::NodeSetting> settings;
  settings.reserve(n_b);
  for (int i = 0; i < n_b; ++i) {
    settings.push_back(star::NodeSetting{i, parity_table(sources)});
  }
  star::StarScenario scenario(std::vector<bell::BellMatrix>(sources, m),
                              std::move(alphabets), std::move(settings));

  std::vector<SourceState> states(sources, SourceState{bs.state, da, db});
  std::vector<std::vector<qmath::Observable>> edges(sources, bs.alice);
  std::vector<qmath::ProjectiveMeasurement> node;
  node.reserve(n_b);
  for (int y = 0; y < n_b; ++y) {
    node.push_back(sign_pattern_measurement(
        std::vector<qmath::Observable>(sources, bs.bob[y])));
  }
  return StarBundle{std::move(scenario),
                    QuantumNetworkStrategy(std::move(states), std::move(edges),
                                           std::move(node))};
}

BellStrategy elegant_bell_strategy() {
  std::vector<qmath::Observable> alice;
  for (int x = 0; x < 4; ++x) {
    alice.push_back(qmath::bloch_to_observable(tetrahedron_vector(x)));
  }
  std::vector<qmath::Observable> bob;
  for (int k = 1; k <= 3; ++k) bob.push_back(qmath::Observable(qmath::pauli(k)));
  return BellStrategy{qmath::DensityMatrix::pure(qmath::psi00()), std::move(alice),
                      std::move(bob)};
}

BellStrategy chsh_bell_strategy() {
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<qmath::Observable> alice = {qmath::Observable(qmath::pauli(3)),
                                          qmath::Observable(qmath::pauli(1))};
  std::vector<qmath::Observable> bob = {
      qmath::Observable(s * (qmath::pauli(3) + qmath::pauli(1))),
      qmath::Observable(s * (qmath::pauli(3) - qmath::pauli(1)))};
  return BellStrategy{qmath::DensityMatrix::pure(qmath::psi00()), std::move(alice),
                      std::move(bob)};
}

namespace {

StarBundle chsh_star_preset(int sources) {
  const bell::BellMatrix m = bell::BellMatrix::chsh();
  const BellStrategy bs = chsh_bell_strategy();
  star::StarScenario scenario = star::StarScenario::homogeneous(m, sources);
  std::vector<SourceState> states(sources, SourceState{bs.state, 2, 2});
  std::vector<std::vector<qmath::Observable>> edges(sources, bs.alice);
  std::vector<qmath::ProjectiveMeasurement> node;
  for (int y = 0; y < 2; ++y) {
    node.push_back(binary_product_measurement(
        std::vector<qmath::Observable>(sources, bs.bob[y])));
  }
  return StarBundle{std::move(scenario),
                    QuantumNetworkStrategy(std::move(states), std::move(edges),
                                           std::move(node))};
}

std::vector<std::vector<qmath::Observable>> two_tetrahedron_edges() {
  std::vector<qmath::Observable> edge;
  for (int x = 0; x < 4; ++x) {
    edge.push_back(qmath::bloch_to_observable(tetrahedron_vector(x)));
  }
  return {edge, edge};
}

StarBundle elegant_swap_bsm_preset() {
  const bell::BellMatrix m = bell::BellMatrix::elegant();
  // One 4-outcome node measurement; outcome b = 2*b1 + b2 feeds the output
  // tables (f1, f2, f3) = (b1, b1+b2+1, b2).
  std::vector<star::NodeSetting> settings = {
      {0, {0, 0, 1, 1}},
      {0, {1, 0, 0, 1}},
      {0, {0, 1, 0, 1}},
  };
  star::StarScenario scenario({m, m}, {4}, std::move(settings));
  std::vector<SourceState> states(2, SourceState{
      qmath::DensityMatrix::pure(qmath::psi00()), 2, 2});
  return StarBundle{std::move(scenario),
                    QuantumNetworkStrategy(std::move(states), two_tetrahedron_edges(),
                                           {qmath::bell_basis_2q()})};
}

StarBundle elegant_swap_3settings_preset() {
  const bell::BellMatrix m = bell::BellMatrix::elegant();
  star::StarScenario scenario = star::StarScenario::homogeneous(m, 2);
  std::vector<SourceState> states(2, SourceState{
      qmath::DensityMatrix::pure(qmath::psi00()), 2, 2});
  std::vector<qmath::ProjectiveMeasurement> node;
  for (int k = 1; k <= 3; ++k) {
    const qmath::Observable pauli_k{qmath::pauli(k)};
    node.push_back(binary_product_measurement({pauli_k, pauli_k}));
  }
  return StarBundle{std::move(scenario),
                    QuantumNetworkStrategy(std::move(states), two_tetrahedron_edges(),
                                           std::move(node))};
}

StarBundle elegant_swapped_roles_preset() {
  const bell::BellMatrix m{RMatrix(bell::BellMatrix::elegant().coefficients().transpose())};
  star::StarScenario scenario = star::StarScenario::homogeneous(m, 2);
  std::vector<SourceState> states(2, SourceState{
      qmath::DensityMatrix::pure(qmath::psi00()), 2, 2});
  std::vector<qmath::Observable> edge;
  for (int k = 1; k <= 3; ++k) edge.emplace_back(qmath::pauli(k));
  std::vector<qmath::ProjectiveMeasurement> node;
  for (int y = 0; y < 4; ++y) {
    const qmath::Observable factor = qmath::bloch_to_observable(tetrahedron_vector(y));
    node.push_back(binary_product_measurement({factor, factor}));
  }
  return StarBundle{std::move(scenario),
                    QuantumNetworkStrategy(std::move(states), {edge, edge},
                                           std::move(node))};
}

}  // namespace

StarBundle preset(const std::string& name, int sources) {
  if (name == "chsh_star") return chsh_star_preset(sources);
  if (name == "elegant_swap_bsm") return elegant_swap_bsm_preset();
  if (name == "elegant_swap_3settings") return elegant_swap_3settings_preset();
  if (name == "elegant_swapped_roles") return elegant_swapped_roles_preset();
  throw ValidationError("preset: unknown name '" + name + "'");
}

std::optional<double> critical_visibility(const star::StarScenario& sc,
                                          const QuantumNetworkStrategy& qs) {
  for (const SourceState& s : qs.states()) {
    if (s.edge_dim != 2 || s.node_dim != 2) {
      throw ValidationError("critical_visibility: two-qubit sources required");
    }
  }
  const star::ScenarioShape shape = shape_of(sc);
  const double bound = star_bound(sc);
  auto value_at = [&](double v) {
    std::vector<SourceState> mixed;
    mixed.reserve(qs.sources());
    for (const SourceState& s : qs.states()) {
      mixed.push_back(SourceState{qmath::werner(v, s.state), s.edge_dim, s.node_dim});
    }
    return evaluate(behavior_from_quantum(qs.with_states(std::move(mixed)), shape), sc)
        .s_net;
  };
  if (value_at(1.0) <= bound + tol::kDefault) return std::nullopt;
  double lo = 0.0;  // does not violate (N-local at v=0)
  double hi = 1.0;  // violates
  while (hi - lo > tol::kDefault) {
    const double mid = 0.5 * (lo + hi);
    (value_at(mid) > bound ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace starcorr::qnet
