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

#include "starcorr/qmath.hpp"

#include <algorithm>
#include <cmath>

namespace starcorr::qmath {

namespace {

void require_square_finite(const CMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ValidationError(std::string(what) + ": matrix must be square and nonempty");
  }
  if (!all_finite(m)) {
    throw ValidationError(std::string(what) + ": matrix has non-finite entries");
  }
}

void require_hermitian(const CMatrix& m, const char* what) {
  if (hermiticity_defect(m) > tol::kDefault) {
    throw ValidationError(std::string(what) + ": matrix is not Hermitian within 1e-9");
  }
}

}  // namespace

const CMatrix& pauli(int k) {
  static const CMatrix sigma1 = [] {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
  }();
  static const CMatrix sigma2 = [] {
    CMatrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
  }();
  static const CMatrix sigma3 = [] {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
  }();
  switch (k) {
    case 1: return sigma1;
    case 2: return sigma2;
    case 3: return sigma3;
    default: throw ValidationError("pauli index must be 1, 2 or 3");
  }
}

CMatrix identity(Eigen::Index dim) {
  if (dim <= 0) throw ValidationError("identity: dimension must be positive");
  return CMatrix::Identity(dim, dim);
}

CVector psi00() {
  CVector v = CVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

CMatrix tensor_all(const std::vector<CMatrix>& factors) {
  if (factors.empty()) throw ValidationError("tensor_all: no factors");
  CMatrix out = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) out = tensor(out, factors[k]);
  return out;
}

DensityMatrix::DensityMatrix(CMatrix m) : m_(std::move(m)) {
  require_square_finite(m_, "DensityMatrix");
  require_hermitian(m_, "DensityMatrix");
  const double trace = m_.trace().real();
  if (std::abs(trace - 1.0) > tol::kDefault ||
      std::abs(m_.trace().imag()) > tol::kDefault) {
    throw ValidationError("DensityMatrix: trace must be 1 within 1e-9");
  }
  if (hermitian_eigenvalues(m_).minCoeff() < -tol::kDefault) {
    throw ValidationError("DensityMatrix: negative eigenvalue beyond 1e-9");
  }
}

DensityMatrix DensityMatrix::pure(const CVector& state) {
  const double norm = state.norm();
  if (norm < tol::kDefault) throw ValidationError("pure state must be nonzero");
  const CVector normalized = state / norm;
  return DensityMatrix(normalized * normalized.adjoint());
}

Observable::Observable(CMatrix m) : m_(std::move(m)) {
  require_square_finite(m_, "Observable");
  require_hermitian(m_, "Observable");
  const RVector eigs = hermitian_eigenvalues(m_);
  if (eigs.minCoeff() < -1.0 - tol::kDefault || eigs.maxCoeff() > 1.0 + tol::kDefault) {
    throw ValidationError("Observable: spectrum must lie in [-1, 1] within 1e-9");
  }
}

ProjectiveMeasurement::ProjectiveMeasurement(std::vector<CMatrix> projectors)
    : projectors_(std::move(projectors)) {
  if (projectors_.empty()) {
    throw ValidationError("ProjectiveMeasurement: at least one projector required");
  }
  const Eigen::Index d = projectors_.front().rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const CMatrix& p : projectors_) {
    require_square_finite(p, "ProjectiveMeasurement");
    if (p.rows() != d) {
      throw ValidationError("ProjectiveMeasurement: projector dimensions differ");
    }
    require_hermitian(p, "ProjectiveMeasurement");
    if ((p * p - p).cwiseAbs().maxCoeff() > tol::kDefault) {
      throw ValidationError("ProjectiveMeasurement: projector is not idempotent within 1e-9");
    }
    sum += p;
  }
  if ((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::kDefault) {
    throw ValidationError("ProjectiveMeasurement: projectors do not sum to identity");
  }
  for (std::size_t i = 0; i < projectors_.size(); ++i) {
    for (std::size_t j = i + 1; j < projectors_.size(); ++j) {
      if ((projectors_[i] * projectors_[j]).cwiseAbs().maxCoeff() > tol::kDefault) {
        throw ValidationError("ProjectiveMeasurement: projectors are not orthogonal");
      }
    }
  }
}

Observable bloch_to_observable(const Eigen::Vector3d& v) {
  if (v.norm() > 1.0 + tol::kDefault) {
    throw ValidationError("bloch_to_observable: |v| must be <= 1 within 1e-9");
  }
  return Observable(v(0) * pauli(1) + v(1) * pauli(2) + v(2) * pauli(3));
}

ProjectiveMeasurement bell_basis_2q() {
  const CVector base = psi00();
  std::vector<CMatrix> projectors;
  projectors.reserve(4);
  for (int b1 = 0; b1 < 2; ++b1) {
    for (int b2 = 0; b2 < 2; ++b2) {
      const CMatrix op = tensor(b1 ? pauli(3) : identity(2), b2 ? pauli(1) : identity(2));
      const CVector state = op * base;
      projectors.push_back(state * state.adjoint());
    }
  }
  return ProjectiveMeasurement(std::move(projectors));
}

DensityMatrix werner(double v, const DensityMatrix& base) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError("werner: visibility must lie in [0, 1]");
  }
  const Eigen::Index d = base.dim();
  return DensityMatrix(v * base.matrix() +
                       ((1.0 - v) / static_cast<double>(d)) * CMatrix::Identity(d, d));
}

double expectation(const DensityMatrix& state, const CMatrix& op) {
  if (op.rows() != op.cols() || op.rows() != state.dim()) {
    throw ValidationError("expectation: operator dimension mismatch");
  }
  const Complex t = (state.matrix() * op).trace();
  if (std::abs(t.imag()) >= tol::kDefault) {
    throw NumericError("expectation: imaginary part exceeds 1e-9");
  }
  return t.real();
}

std::array<CMatrix, 2> sign_projectors(const Observable& o) {
  const RVector eigs = hermitian_eigenvalues(o.matrix());
  for (Eigen::Index i = 0; i < eigs.size(); ++i) {
    if (std::abs(std::abs(eigs(i)) - 1.0) > tol::kDefault) {
      throw ValidationError("sign_projectors: observable spectrum is not +-1 within 1e-9");
    }
  }
  const CMatrix id = identity(o.dim());
  return {CMatrix(0.5 * (id + o.matrix())), CMatrix(0.5 * (id - o.matrix()))};
}

RVector outcome_probabilities(const DensityMatrix& rho,
                              const ProjectiveMeasurement& measurement) {
  if (rho.dim() != measurement.dim()) {
    throw ValidationError("outcome_probabilities: dimension mismatch");
  }
  RVector probs(measurement.outcome_count());
  for (int b = 0; b < measurement.outcome_count(); ++b) {
    probs(b) = expectation(rho, measurement.projector(b));
  }
  return probs;
}

namespace {

// Composes a full-space basis index from a sub-space index over `slots` and a
// rest index over the complementary positions. Digit order is row-major with
// subsystem 0 most significant.
struct IndexComposer {
  IndexComposer(const std::vector<Eigen::Index>& dims, const std::vector<int>& slots)
      : dims_(dims) {
    const int n = static_cast<int>(dims.size());
    std::vector<bool> taken(n, false);
    for (int s : slots) {
      if (s < 0 || s >= n || taken[s]) {
        throw ValidationError("embed_operator: invalid subsystem slot list");
      }
      taken[s] = true;
    }
    slot_order_ = slots;
    for (int i = 0; i < n; ++i) {
      if (!taken[i]) rest_order_.push_back(i);
    }
    strides_.assign(n, 1);
    for (int i = n - 2; i >= 0; --i) strides_[i] = strides_[i + 1] * dims_[i + 1];
    sub_dim_ = 1;
    for (int s : slot_order_) sub_dim_ *= dims_[s];
    rest_dim_ = 1;
    for (int s : rest_order_) rest_dim_ *= dims_[s];
  }

  Eigen::Index compose(Eigen::Index sub, Eigen::Index rest) const {
    Eigen::Index g = 0;
    for (int j = static_cast<int>(slot_order_.size()) - 1; j >= 0; --j) {
      const int s = slot_order_[j];
      g += (sub % dims_[s]) * strides_[s];
      sub /= dims_[s];
    }
    for (int j = static_cast<int>(rest_order_.size()) - 1; j >= 0; --j) {
      const int s = rest_order_[j];
      g += (rest % dims_[s]) * strides_[s];
      rest /= dims_[s];
    }
    return g;
  }

  const std::vector<Eigen::Index>& dims_;
  std::vector<int> slot_order_;
  std::vector<int> rest_order_;
  std::vector<Eigen::Index> strides_;
  Eigen::Index sub_dim_ = 1;
  Eigen::Index rest_dim_ = 1;
};

}  // namespace

CMatrix embed_operator(const CMatrix& op, const std::vector<Eigen::Index>& dims,
                       const std::vector<int>& slots) {
  for (Eigen::Index d : dims) {
    if (d <= 0) throw ValidationError("embed_operator: dimensions must be positive");
  }
  const IndexComposer composer(dims, slots);
  if (op.rows() != composer.sub_dim_ || op.cols() != composer.sub_dim_) {
    throw ValidationError("embed_operator: operator does not match slot dimensions");
  }
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) total *= d;
  CMatrix out = CMatrix::Zero(total, total);
  for (Eigen::Index s1 = 0; s1 < composer.sub_dim_; ++s1) {
    for (Eigen::Index s2 = 0; s2 < composer.sub_dim_; ++s2) {
      const Complex value = op(s1, s2);
      if (value == Complex(0, 0)) continue;
      for (Eigen::Index r = 0; r < composer.rest_dim_; ++r) {
        out(composer.compose(s1, r), composer.compose(s2, r)) = value;
      }
    }
  }
  return out;
}

CMatrix permute_subsystems(const CMatrix& op, const std::vector<Eigen::Index>& dims,
                           const std::vector<int>& perm) {
  const int n = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != n) {
    throw ValidationError("permute_subsystems: permutation size mismatch");
  }
  std::vector<bool> seen(n, false);
  Eigen::Index total = 1;
  for (int j = 0; j < n; ++j) {
    if (perm[j] < 0 || perm[j] >= n || seen[perm[j]]) {
      throw ValidationError("permute_subsystems: not a permutation");
    }
    seen[perm[j]] = true;
    total *= dims[j];
  }
  if (op.rows() != total || op.cols() != total) {
    throw ValidationError("permute_subsystems: operator dimension mismatch");
  }
  // Index map: original global index -> permuted global index.
  std::vector<Eigen::Index> map(total);
  std::vector<Eigen::Index> digits(n);
  for (Eigen::Index g = 0; g < total; ++g) {
    Eigen::Index rem = g;
    for (int i = n - 1; i >= 0; --i) {
      digits[i] = rem % dims[i];
      rem /= dims[i];
    }
    Eigen::Index h = 0;
    for (int j = 0; j < n; ++j) h = h * dims[perm[j]] + digits[perm[j]];
    map[g] = h;
  }
  CMatrix out(total, total);
  for (Eigen::Index g1 = 0; g1 < total; ++g1) {
    for (Eigen::Index g2 = 0; g2 < total; ++g2) {
      out(map[g1], map[g2]) = op(g1, g2);
    }
  }
  return out;
}

}  // namespace starcorr::qmath
