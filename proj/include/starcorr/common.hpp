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

#ifndef STARCORR_COMMON_HPP
#define STARCORR_COMMON_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace starcorr {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Malformed input or broken type invariant. Maps to CLI exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Problem size beyond the supported enumeration limits.
struct CapacityError : ValidationError {
  using ValidationError::ValidationError;
};

/// A tolerance was violated inside a computation. Maps to CLI exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace tol {
// Generic absolute tolerance for floating comparisons.
inline constexpr double kDefault = 1e-9;
// Algebraic identities on dimension <= 16.
inline constexpr double kAlgebraic = 1e-12;
// |I_i| below this floor counts as exactly zero when taking N-th roots.
inline constexpr double kZeroFloor = 1e-15;
// Bound-saturation precondition for strategy reduction.
inline constexpr double kSaturation = 1e-6;
}  // namespace tol

/// Worker cap for parallel enumeration. Reads STARCORR_THREADS, falling back
/// to the hardware concurrency; always at least 1.
int worker_count();

bool all_finite(const CMatrix& m);
bool all_finite(const RMatrix& m);

/// max |m - m^dagger| entrywise; 0 for empty matrices.
double hermiticity_defect(const CMatrix& m);

/// Eigenvalues of a Hermitian matrix, ascending. The caller is responsible
/// for Hermiticity; only the lower triangle is referenced.
RVector hermitian_eigenvalues(const CMatrix& m);

}  // namespace starcorr

#endif  // STARCORR_COMMON_HPP
