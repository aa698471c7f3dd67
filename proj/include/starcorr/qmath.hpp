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

#ifndef STARCORR_QMATH_HPP
#define STARCORR_QMATH_HPP

#include <array>
#include <vector>

#include "starcorr/common.hpp"

// Dense complex linear algebra and quantum primitives: states, binary
// observables, tensor products, projective measurements, Born-rule values.
// All values are immutable after construction and all functions are pure.
namespace starcorr::qmath {

/// Pauli matrix sigma_k for k in {1,2,3}.
const CMatrix& pauli(int k);

CMatrix identity(Eigen::Index dim);

/// The maximally entangled two-qubit state (|00> + |11>)/sqrt(2).
CVector psi00();

/// Kronecker product. Dimensions multiply; associative up to roundoff.
template <typename DerivedA, typename DerivedB>
CMatrix tensor(const Eigen::MatrixBase<DerivedA>& a,
               const Eigen::MatrixBase<DerivedB>& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          Complex(a.derived()(i, j)) * b.derived().template cast<Complex>();
    }
  }
  return out;
}

/// Left fold of tensor() over a factor list; at least one factor required.
CMatrix tensor_all(const std::vector<CMatrix>& factors);

/// Unit-trace positive semidefinite operator. Construction validates
/// Hermiticity, trace and spectrum to 1e-9.
class DensityMatrix {
 public:
  explicit DensityMatrix(CMatrix m);
  static DensityMatrix pure(const CVector& state);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
};

/// Hermitian operator with spectrum inside [-1, 1] (binary-outcome
/// observable in the +-1 convention).
class Observable {
 public:
  explicit Observable(CMatrix m);

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }

 private:
  CMatrix m_;
};

/// Complete set of mutually orthogonal projectors, one per outcome.
class ProjectiveMeasurement {
 public:
  explicit ProjectiveMeasurement(std::vector<CMatrix> projectors);

  Eigen::Index dim() const { return projectors_.front().rows(); }
  int outcome_count() const { return static_cast<int>(projectors_.size()); }
  const CMatrix& projector(int outcome) const { return projectors_.at(outcome); }
  const std::vector<CMatrix>& projectors() const { return projectors_; }

 private:
  std::vector<CMatrix> projectors_;
};

/// v1*sigma1 + v2*sigma2 + v3*sigma3. Requires |v| <= 1 + 1e-9; unit vectors
/// give eigenvalues +-1.
Observable bloch_to_observable(const Eigen::Vector3d& v);

/// The four-outcome Bell state measurement on two qubits. Outcome b encodes
/// (b1, b2) as b = 2*b1 + b2; outcome 0 projects onto psi00.
ProjectiveMeasurement bell_basis_2q();

/// v*base + (1-v)*I/d for v in [0, 1].
DensityMatrix werner(double v, const DensityMatrix& base);

/// Tr(state * op) with the imaginary part checked against 1e-9 and dropped.
double expectation(const DensityMatrix& state, const CMatrix& op);

/// {(I+O)/2, (I-O)/2}. Requires the spectrum of O to be +-1 within 1e-9.
std::array<CMatrix, 2> sign_projectors(const Observable& o);

/// Born-rule outcome distribution Tr(rho * P_i).
RVector outcome_probabilities(const DensityMatrix& rho,
                              const ProjectiveMeasurement& measurement);

/// Places an operator acting on the ordered subsystem subset `slots` into the
/// full tensor space described by `dims`, acting as identity elsewhere.
CMatrix embed_operator(const CMatrix& op, const std::vector<Eigen::Index>& dims,
                       const std::vector<int>& slots);

/// Rewrites an operator on the tensor space `dims` into the subsystem order
/// `perm`: factor j of the result is original factor perm[j].
CMatrix permute_subsystems(const CMatrix& op,
                           const std::vector<Eigen::Index>& dims,
                           const std::vector<int>& perm);

}  // namespace starcorr::qmath

#endif  // STARCORR_QMATH_HPP
