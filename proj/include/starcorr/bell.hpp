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

#ifndef STARCORR_BELL_HPP
#define STARCORR_BELL_HPP

#include <cstdint>
#include <vector>

#include "starcorr/common.hpp"
#include "starcorr/qmath.hpp"

// Full-correlation bipartite Bell inequalities: coefficient matrices,
// transformed correlator vectors, classical bounds by enumeration over
// deterministic sign assignments, and quantum values of bipartite strategies.
namespace starcorr::bell {

/// Real n_B x n_A coefficient matrix of a full-correlation Bell inequality.
/// Rows index the settings of the observer mapped to the network node.
class BellMatrix {
 public:
  explicit BellMatrix(RMatrix coefficients);

  Eigen::Index bob_settings() const { return m_.rows(); }    // n_B
  Eigen::Index alice_settings() const { return m_.cols(); }  // n_A
  const RMatrix& coefficients() const { return m_; }

  /// The CHSH matrix (1/2)(-1)^{xy}, classical bound 1.
  static BellMatrix chsh();
  /// The 3x4 multi-setting matrix with classical bound 6.
  static BellMatrix elegant();

 private:
  RMatrix m_;
};

/// Deterministic +-1 outcome assignment for one party, one sign per setting.
class DeterministicAssignment {
 public:
  explicit DeterministicAssignment(Eigen::VectorXi signs);

  /// Assignment r of the enumeration 0..2^n - 1: bit b of r maps to 1 - 2b.
  static DeterministicAssignment from_index(std::uint64_t r, Eigen::Index n);

  Eigen::Index size() const { return signs_.size(); }
  int sign(Eigen::Index x) const { return signs_(x); }
  const Eigen::VectorXi& signs() const { return signs_; }
  DeterministicAssignment negated() const;

  friend bool operator==(const DeterministicAssignment& a,
                         const DeterministicAssignment& b) {
    return a.signs_ == b.signs_;
  }

 private:
  Eigen::VectorXi signs_;
};

/// Transformed correlator vector: component y is sum_x M_yx * a_x.
RVector transformed(const BellMatrix& m, const DeterministicAssignment& a);

struct LocalBound {
  double bound = 0.0;
  /// Every assignment attaining the bound within 1e-9 (relative), in
  /// enumeration order; both members of each +- pair appear.
  std::vector<DeterministicAssignment> maximizers;
};

/// Classical bound max over all 2^{n_A} sign assignments of
/// sum_y |sum_x M_yx a_x|. Requires n_A <= 30.
LocalBound local_bound(const BellMatrix& m);

/// Quantum value sum_{x,y} M_yx Tr[state (alice_x (x) bob_y)].
double bell_value(const BellMatrix& m, const qmath::DensityMatrix& state,
                  const std::vector<qmath::Observable>& alice,
                  const std::vector<qmath::Observable>& bob);

}  // namespace starcorr::bell

#endif  // STARCORR_BELL_HPP
