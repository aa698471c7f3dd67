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

#include "starcorr/nlocal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace starcorr::nlocal {

namespace {

bool next_tuple(std::vector<int>& idx, const std::vector<int>& dims) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    if (++idx[k] < dims[k]) return true;
    idx[k] = 0;
  }
  return false;
}

bool matrices_identical(const std::vector<bell::BellMatrix>& ms) {
  const RMatrix& first = ms.front().coefficients();
  for (const auto& m : ms) {
    if (m.coefficients().rows() != first.rows() ||
        m.coefficients().cols() != first.cols()) {
      return false;
    }
    if ((m.coefficients() - first).cwiseAbs().maxCoeff() > tol::kAlgebraic) {
      return false;
    }
  }
  return true;
}

int sign_or_zero(double v, double zero_tol) {
  if (v > zero_tol) return 1;
  if (v < -zero_tol) return -1;
  return 0;
}

// Picks a node outcome realizing the requested signs for every correlation
// quantity attached to node input y. Returns -1 when none matches exactly.
int matching_outcome(const star::StarScenario& sc, int y,
                     const std::vector<int>& node_signs, bool strict) {
  const int alpha = sc.node_alphabets()[y];
  int best = 0;
  int best_score = -1;
  int need = 0;
  for (int o = 0; o < alpha; ++o) {
    int score = 0;
    need = 0;
    for (int i = 0; i < sc.correlator_count(); ++i) {
      const star::NodeSetting& s = sc.node_settings()[i];
      if (s.input != y) continue;
      ++need;
      const int sign = s.output_bits[o] ? -1 : 1;
      if (sign == node_signs[i]) ++score;
    }
    if (score == need) return o;
    if (score > best_score) {
      best_score = score;
      best = o;
    }
  }
  if (strict) {
    throw ValidationError("node output tables cannot realize the requested signs");
  }
  return best;
}

}  // namespace

NLocalStrategy::NLocalStrategy(std::vector<SourceSupport> supports,
                               std::vector<Eigen::MatrixXi> edge_tables,
                               std::vector<std::vector<int>> node_table)
    : supports_(std::move(supports)),
      edge_tables_(std::move(edge_tables)),
      node_table_(std::move(node_table)) {
  if (supports_.empty() || edge_tables_.size() != supports_.size()) {
    throw ValidationError("NLocalStrategy: one edge table per source required");
  }
  for (std::size_t k = 0; k < supports_.size(); ++k) {
    const RVector& w = supports_[k].weights;
    if (w.size() == 0) {
      throw ValidationError("NLocalStrategy: empty hidden-variable support");
    }
    if (w.minCoeff() < 0.0 || std::abs(w.sum() - 1.0) > tol::kAlgebraic) {
      throw ValidationError("NLocalStrategy: weights must be >= 0 and sum to 1");
    }
    if (edge_tables_[k].rows() != w.size() || edge_tables_[k].cols() == 0) {
      throw ValidationError("NLocalStrategy: edge table shape mismatch");
    }
    for (Eigen::Index l = 0; l < edge_tables_[k].rows(); ++l) {
      for (Eigen::Index x = 0; x < edge_tables_[k].cols(); ++x) {
        const int s = edge_tables_[k](l, x);
        if (s != 1 && s != -1) {
          throw ValidationError("NLocalStrategy: edge responses must be exactly +-1");
        }
      }
    }
  }
  if (node_table_.empty()) {
    throw ValidationError("NLocalStrategy: node table required");
  }
  const std::size_t tuples = lambda_tuple_count();
  for (const auto& per_input : node_table_) {
    if (per_input.size() != tuples) {
      throw ValidationError("NLocalStrategy: node table must cover all lambda tuples");
    }
    for (int outcome : per_input) {
      if (outcome < 0) {
        throw ValidationError("NLocalStrategy: node outcomes must be >= 0");
      }
    }
  }
}

std::size_t NLocalStrategy::lambda_tuple_count() const {
  std::size_t n = 1;
  for (const auto& s : supports_) n *= static_cast<std::size_t>(s.weights.size());
  return n;
}

star::NetworkBehavior behavior_from_strategy(const NLocalStrategy& strategy,
                                             const star::ScenarioShape& shape) {
  const int n = shape.sources;
  if (strategy.sources() != n) {
    throw ValidationError("behavior_from_strategy: source count mismatch");
  }
  for (int k = 0; k < n; ++k) {
    if (strategy.edge_tables()[k].cols() != shape.edge_settings[k]) {
      throw ValidationError("behavior_from_strategy: edge table does not cover settings");
    }
  }
  if (static_cast<int>(strategy.node_table().size()) != shape.node_settings()) {
    throw ValidationError("behavior_from_strategy: node table does not cover inputs");
  }
  for (int y = 0; y < shape.node_settings(); ++y) {
    for (int outcome : strategy.node_table()[y]) {
      if (outcome >= shape.node_alphabets[y]) {
        throw ValidationError("behavior_from_strategy: node outcome outside alphabet");
      }
    }
  }

  std::size_t joint_x = 1;
  for (int s : shape.edge_settings) joint_x *= static_cast<std::size_t>(s);
  const std::size_t masks = std::size_t(1) << n;
  std::vector<std::vector<double>> tables(shape.node_settings());
  for (int y = 0; y < shape.node_settings(); ++y) {
    tables[y].assign(joint_x * masks * shape.node_alphabets[y], 0.0);
  }

  std::vector<int> support_sizes(n);
  for (int k = 0; k < n; ++k) {
    support_sizes[k] = static_cast<int>(strategy.supports()[k].weights.size());
  }
  std::vector<int> lam(n, 0);
  std::size_t lam_flat = 0;
  do {
    double weight = 1.0;
    for (int k = 0; k < n; ++k) weight *= strategy.supports()[k].weights(lam[k]);
    if (weight > 0.0) {
      std::vector<int> x(n, 0);
      do {
        unsigned mask = 0;
        for (int k = 0; k < n; ++k) {
          mask = (mask << 1) | (strategy.edge_tables()[k](lam[k], x[k]) < 0 ? 1u : 0u);
        }
        std::size_t flat_x = 0;
        for (int k = 0; k < n; ++k) {
          flat_x = flat_x * static_cast<std::size_t>(shape.edge_settings[k]) +
                   static_cast<std::size_t>(x[k]);
        }
        for (int y = 0; y < shape.node_settings(); ++y) {
          const int b = strategy.node_table()[y][lam_flat];
          const int alpha = shape.node_alphabets[y];
          tables[y][(flat_x * masks + mask) * alpha + b] += weight;
        }
      } while (next_tuple(x, shape.edge_settings));
    }
    ++lam_flat;
  } while (next_tuple(lam, support_sizes));

  return star::NetworkBehavior(shape, std::move(tables));
}

NLocalStrategy realize(const ReducedStrategy& reduced, const star::StarScenario& sc,
                       bool strict) {
  const int n = sc.sources();
  if (static_cast<int>(reduced.node_signs.size()) != sc.correlator_count()) {
    throw ValidationError("realize: one node sign per correlation quantity required");
  }
  for (int s : reduced.node_signs) {
    if (s != 1 && s != -1) {
      throw ValidationError("realize: node signs must be exactly +-1");
    }
  }
  for (const auto& m : sc.edge_matrices()) {
    if (m.alice_settings() != reduced.edge_table.cols()) {
      throw ValidationError("realize: shared table does not match edge setting counts");
    }
  }
  std::vector<int> outcome_per_input(sc.node_alphabets().size());
  for (std::size_t y = 0; y < sc.node_alphabets().size(); ++y) {
    outcome_per_input[y] =
        matching_outcome(sc, static_cast<int>(y), reduced.node_signs, strict);
  }
  const std::size_t rows = static_cast<std::size_t>(reduced.edge_table.rows());
  std::size_t tuples = 1;
  for (int k = 0; k < n; ++k) tuples *= rows;
  std::vector<std::vector<int>> node_table(sc.node_alphabets().size());
  for (std::size_t y = 0; y < node_table.size(); ++y) {
    node_table[y].assign(tuples, outcome_per_input[y]);
  }
  return NLocalStrategy(std::vector<SourceSupport>(n, SourceSupport{reduced.weights}),
                        std::vector<Eigen::MatrixXi>(n, reduced.edge_table),
                        std::move(node_table));
}

ClassicalMax classical_max(const star::StarScenario& sc) {
  const int n = sc.sources();
  ClassicalMax result;
  if (matrices_identical(sc.edge_matrices())) {
    const bell::LocalBound lb = bell::local_bound(sc.edge_matrices().front());
    const bell::DeterministicAssignment& best = lb.maximizers.front();
    const RVector y = transformed(sc.edge_matrices().front(), best);
    ReducedStrategy witness;
    witness.weights = RVector::Ones(1);
    witness.edge_table.resize(1, best.size());
    witness.edge_table.row(0) = best.signs().transpose();
    witness.node_signs.resize(sc.correlator_count());
    for (int i = 0; i < sc.correlator_count(); ++i) {
      witness.node_signs[i] = y(i) < 0.0 ? -1 : 1;
    }
    result.value = lb.bound;
    result.exact = true;
    result.witness = std::move(witness);
    result.edge_assignments.assign(n, best);
    return result;
  }

  // Heterogeneous edges: exhaustive search over joint deterministic
  // assignments, a lower bound on the classical maximum.
  double log_candidates = 0.0;
  for (const auto& m : sc.edge_matrices()) {
    log_candidates += static_cast<double>(m.alice_settings());
  }
  if (log_candidates > 22.0) {
    throw CapacityError("classical_max: joint deterministic search too large");
  }
  std::vector<std::vector<RVector>> per_edge_vectors(n);
  std::vector<int> counts(n);
  for (int k = 0; k < n; ++k) {
    const auto& m = sc.edge_matrices()[k];
    const std::uint64_t total = std::uint64_t(1) << m.alice_settings();
    per_edge_vectors[k].reserve(total);
    for (std::uint64_t r = 0; r < total; ++r) {
      per_edge_vectors[k].push_back(transformed(
          m, bell::DeterministicAssignment::from_index(r, m.alice_settings())));
    }
    counts[k] = static_cast<int>(total);
  }
  double best_value = -1.0;
  std::vector<int> best_idx;
  std::vector<int> idx(n, 0);
  do {
    double value = 0.0;
    for (int i = 0; i < sc.correlator_count(); ++i) {
      double prod = 1.0;
      for (int k = 0; k < n; ++k) prod *= per_edge_vectors[k][idx[k]](i);
      value += star::root_abs(prod, n);
    }
    if (value > best_value) {
      best_value = value;
      best_idx = idx;
    }
  } while (next_tuple(idx, counts));
  result.value = best_value;
  result.exact = false;
  for (int k = 0; k < n; ++k) {
    result.edge_assignments.push_back(bell::DeterministicAssignment::from_index(
        static_cast<std::uint64_t>(best_idx[k]), sc.edge_matrices()[k].alice_settings()));
  }
  return result;
}

ReducedStrategy reduce(const NLocalStrategy& strategy, const star::StarScenario& sc) {
  if (!matrices_identical(sc.edge_matrices())) {
    throw ValidationError("reduce: identical edge matrices required");
  }
  const star::NetworkBehavior behavior =
      behavior_from_strategy(strategy, shape_of(sc));
  const star::StarEvaluation ev = star::evaluate(behavior, sc);
  if (std::abs(ev.s_net - ev.bound) > tol::kSaturation) {
    throw ValidationError("reduce: strategy does not saturate the bound within 1e-6");
  }
  for (Eigen::Index i = 0; i < ev.I.size(); ++i) {
    if (ev.I(i) < -tol::kDefault) {
      throw ValidationError("reduce: all I_i must be nonnegative");
    }
  }

  const bell::BellMatrix& m = sc.edge_matrices().front();
  const int n_corr = sc.correlator_count();
  const RVector& weights = strategy.supports().front().weights;
  const Eigen::MatrixXi& table = strategy.edge_tables().front();

  std::vector<Eigen::Index> kept;
  for (Eigen::Index l = 0; l < weights.size(); ++l) {
    if (weights(l) > tol::kAlgebraic) kept.push_back(l);
  }

  // Align edge 1's support into a single sign class via global flips; the
  // saturation equality conditions guarantee this is possible for inputs the
  // construction covers.
  std::vector<int> merged(n_corr, 0);
  std::vector<int> flips(kept.size(), 1);
  std::vector<RVector> rows(kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    rows[j] = m.coefficients() * table.row(kept[j]).transpose().cast<double>();
    int agree = 0;
    int disagree = 0;
    for (int i = 0; i < n_corr; ++i) {
      const int p = sign_or_zero(rows[j](i), tol::kDefault);
      if (p == 0 || merged[i] == 0) continue;
      (p == merged[i] ? agree : disagree)++;
    }
    if (agree > 0 && disagree > 0) {
      throw NumericError("reduce: support sign patterns are inconsistent");
    }
    flips[j] = disagree > 0 ? -1 : 1;
    for (int i = 0; i < n_corr; ++i) {
      const int p = sign_or_zero(rows[j](i), tol::kDefault);
      if (merged[i] == 0 && p != 0) merged[i] = flips[j] * p;
    }
  }

  ReducedStrategy reduced;
  reduced.weights.resize(static_cast<Eigen::Index>(kept.size()));
  reduced.edge_table.resize(static_cast<Eigen::Index>(kept.size()), table.cols());
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < kept.size(); ++j) {
    weight_sum += weights(kept[j]);
  }
  RVector ahat = RVector::Zero(n_corr);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const double w = weights(kept[j]) / weight_sum;
    reduced.weights(static_cast<Eigen::Index>(j)) = w;
    reduced.edge_table.row(static_cast<Eigen::Index>(j)) =
        flips[j] * table.row(kept[j]);
    ahat += w * flips[j] * rows[j];
  }

  reduced.node_signs.resize(n_corr);
  for (int i = 0; i < n_corr; ++i) {
    const double power = std::pow(ahat(i), sc.sources());
    const double target = ev.I(i);
    int sign = 1;
    if (std::abs(target) > tol::kDefault) {
      if (std::abs(power) <= tol::kDefault) {
        throw NumericError("reduce: replicated edge cannot reproduce I_i");
      }
      sign = (target > 0.0) == (power > 0.0) ? 1 : -1;
    }
    if (std::abs(sign * power - target) > tol::kDefault) {
      throw NumericError("reduce: reduced strategy fails to reproduce I_i within 1e-9");
    }
    reduced.node_signs[i] = sign;
  }
  return reduced;
}

std::vector<SignClass> saturating_families(const bell::BellMatrix& m, int sources) {
  if (sources < 1) {
    throw ValidationError("saturating_families: sources must be >= 1");
  }
  const int n_b = static_cast<int>(m.bob_settings());
  if (n_b > 16) {
    throw CapacityError("saturating_families: at most 16 node rows supported");
  }
  const bell::LocalBound lb = bell::local_bound(m);
  const double zero_tol = tol::kDefault * std::max(1.0, lb.bound);

  std::vector<SignClassMember> members;
  std::vector<std::vector<int>> patterns;
  members.reserve(lb.maximizers.size());
  for (const auto& assignment : lb.maximizers) {
    RVector y = transformed(m, assignment);
    std::vector<int> pattern(n_b);
    for (int i = 0; i < n_b; ++i) pattern[i] = sign_or_zero(y(i), zero_tol);
    members.push_back(SignClassMember{assignment, std::move(y)});
    patterns.push_back(std::move(pattern));
  }

  // Candidate classes indexed by complete sign vectors; keep distinct member
  // sets and drop those strictly contained in another.
  std::map<std::vector<int>, std::vector<int>> by_members;  // members -> sign vector
  for (std::uint32_t s = 0; s < (1u << n_b); ++s) {
    std::vector<int> sign_vec(n_b);
    for (int i = 0; i < n_b; ++i) sign_vec[i] = (s >> i) & 1u ? -1 : 1;
    std::vector<int> included;
    for (std::size_t r = 0; r < members.size(); ++r) {
      bool ok = true;
      for (int i = 0; i < n_b && ok; ++i) {
        ok = patterns[r][i] == 0 || patterns[r][i] == sign_vec[i];
      }
      if (ok) included.push_back(static_cast<int>(r));
    }
    if (!included.empty()) by_members.emplace(std::move(included), sign_vec);
  }

  std::vector<SignClass> classes;
  for (const auto& [included, sign_vec] : by_members) {
    bool subset = false;
    for (const auto& [other, other_sign] : by_members) {
      if (other.size() <= included.size()) continue;
      if (std::includes(other.begin(), other.end(), included.begin(), included.end())) {
        subset = true;
        break;
      }
    }
    if (subset) continue;
    SignClass cls;
    cls.pattern.assign(n_b, 0);
    for (int r : included) {
      cls.members.push_back(members[r]);
      for (int i = 0; i < n_b; ++i) {
        if (patterns[r][i] != 0) cls.pattern[i] = sign_vec[i];
      }
    }
    classes.push_back(std::move(cls));
  }

  // Lexicographic pattern order: + before - before unconstrained.
  auto rank = [](int p) { return p == 1 ? 0 : (p == -1 ? 1 : 2); };
  std::sort(classes.begin(), classes.end(),
            [&rank](const SignClass& a, const SignClass& b) {
              return std::lexicographical_compare(
                  a.pattern.begin(), a.pattern.end(), b.pattern.begin(),
                  b.pattern.end(),
                  [&rank](int x, int y) { return rank(x) < rank(y); });
            });
  return classes;
}

NLocalStrategy realize_mixture(const SignClass& family, const RVector& weights,
                               const std::vector<int>& node_signs,
                               const star::StarScenario& sc) {
  if (weights.size() != static_cast<Eigen::Index>(family.members.size())) {
    throw ValidationError("realize_mixture: one weight per class member required");
  }
  if (!matrices_identical(sc.edge_matrices())) {
    throw ValidationError("realize_mixture: identical edge matrices required");
  }
  const bell::BellMatrix& m = sc.edge_matrices().front();
  ReducedStrategy reduced;
  reduced.weights = weights;
  reduced.edge_table.resize(static_cast<Eigen::Index>(family.members.size()),
                            m.alice_settings());
  for (std::size_t r = 0; r < family.members.size(); ++r) {
    const auto& member = family.members[r];
    const RVector y = transformed(m, member.assignment);
    if ((y - member.transformed).cwiseAbs().maxCoeff() > tol::kDefault) {
      throw ValidationError("realize_mixture: class does not belong to this scenario");
    }
    reduced.edge_table.row(static_cast<Eigen::Index>(r)) =
        member.assignment.signs().transpose();
  }
  reduced.node_signs = node_signs;
  return realize(reduced, sc, /*strict=*/true);
}

StrategySampler::StrategySampler(star::ScenarioShape shape, std::uint64_t seed)
    : shape_(std::move(shape)), rng_(seed) {
  if (shape_.sources < 1 || shape_.edge_settings.empty() ||
      shape_.node_alphabets.empty()) {
    throw ValidationError("StrategySampler: invalid scenario shape");
  }
}

NLocalStrategy StrategySampler::next() {
  // Manual draws keep the stream identical across standard libraries.
  auto draw_int = [this](int bound) {
    return static_cast<int>(rng_() % static_cast<std::uint64_t>(bound));
  };
  auto draw_unit = [this] {
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  };

  const int n = shape_.sources;
  std::vector<SourceSupport> supports;
  std::vector<Eigen::MatrixXi> edge_tables;
  supports.reserve(n);
  edge_tables.reserve(n);
  std::size_t tuples = 1;
  for (int k = 0; k < n; ++k) {
    const int size = 1 + draw_int(4);
    RVector w(size);
    for (int l = 0; l < size; ++l) w(l) = draw_unit() + 1e-3;
    w /= w.sum();
    supports.push_back(SourceSupport{std::move(w)});
    Eigen::MatrixXi table(size, shape_.edge_settings[k]);
    for (int l = 0; l < size; ++l) {
      for (int x = 0; x < shape_.edge_settings[k]; ++x) {
        table(l, x) = draw_int(2) ? 1 : -1;
      }
    }
    edge_tables.push_back(std::move(table));
    tuples *= static_cast<std::size_t>(size);
  }
  std::vector<std::vector<int>> node_table(shape_.node_settings());
  for (int y = 0; y < shape_.node_settings(); ++y) {
    node_table[y].resize(tuples);
    for (std::size_t t = 0; t < tuples; ++t) {
      node_table[y][t] = draw_int(shape_.node_alphabets[y]);
    }
  }
  return NLocalStrategy(std::move(supports), std::move(edge_tables),
                        std::move(node_table));
}

std::vector<NLocalStrategy> sample_strategies(const star::StarScenario& sc, int count,
                                              std::uint64_t seed) {
  if (count < 1) throw ValidationError("sample_strategies: count must be >= 1");
  StrategySampler sampler(shape_of(sc), seed);
  std::vector<NLocalStrategy> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(sampler.next());
  return out;
}

}  // namespace starcorr::nlocal
