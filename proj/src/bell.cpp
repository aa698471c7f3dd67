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

#include "starcorr/bell.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace starcorr::bell {

BellMatrix::BellMatrix(RMatrix coefficients) : m_(std::move(coefficients)) {
  if (m_.rows() == 0 || m_.cols() == 0) {
    throw ValidationError("BellMatrix: matrix must be nonempty");
  }
  if (!all_finite(m_)) {
    throw ValidationError("BellMatrix: entries must be finite");
  }
  if (m_.cwiseAbs().maxCoeff() == 0.0) {
    throw ValidationError("BellMatrix: at least one entry must be nonzero");
  }
}

BellMatrix BellMatrix::chsh() {
  RMatrix m(2, 2);
  m << 0.5, 0.5, 0.5, -0.5;
  return BellMatrix(m);
}

BellMatrix BellMatrix::elegant() {
  RMatrix m(3, 4);
  m << 1, 1, -1, -1,
       1, -1, 1, -1,
       1, -1, -1, 1;
  return BellMatrix(m);
}

DeterministicAssignment::DeterministicAssignment(Eigen::VectorXi signs)
    : signs_(std::move(signs)) {
  if (signs_.size() == 0) {
    throw ValidationError("DeterministicAssignment: empty assignment");
  }
  for (Eigen::Index i = 0; i < signs_.size(); ++i) {
    if (signs_(i) != 1 && signs_(i) != -1) {
      throw ValidationError("DeterministicAssignment: entries must be exactly +-1");
    }
  }
}

DeterministicAssignment DeterministicAssignment::from_index(std::uint64_t r,
                                                            Eigen::Index n) {
  Eigen::VectorXi signs(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    signs(x) = ((r >> x) & 1u) ? -1 : 1;
  }
  return DeterministicAssignment(std::move(signs));
}

DeterministicAssignment DeterministicAssignment::negated() const {
  return DeterministicAssignment(-signs_);
}

RVector transformed(const BellMatrix& m, const DeterministicAssignment& a) {
  if (a.size() != m.alice_settings()) {
    throw ValidationError("transformed: assignment length must equal n_A");
  }
  return m.coefficients() * a.signs().cast<double>();
}

namespace {

double assignment_value(const RMatrix& m, std::uint64_t r) {
  const Eigen::Index n_b = m.rows();
  const Eigen::Index n_a = m.cols();
  double total = 0.0;
  for (Eigen::Index y = 0; y < n_b; ++y) {
    double acc = 0.0;
    for (Eigen::Index x = 0; x < n_a; ++x) {
      acc += ((r >> x) & 1u) ? -m(y, x) : m(y, x);
    }
    total += std::abs(acc);
  }
  return total;
}

double range_max(const RMatrix& m, std::uint64_t begin, std::uint64_t end) {
  double best = -1.0;
  for (std::uint64_t r = begin; r < end; ++r) {
    best = std::max(best, assignment_value(m, r));
  }
  return best;
}

}  // namespace

LocalBound local_bound(const BellMatrix& bm) {
  const RMatrix& m = bm.coefficients();
  const Eigen::Index n_a = m.cols();
  if (n_a > 30) {
    throw CapacityError("local_bound: enumeration supports at most 30 settings");
  }
  const std::uint64_t total = std::uint64_t(1) << n_a;

  double bound = -1.0;
  const int workers = n_a >= 16 ? std::min<int>(worker_count(), 64) : 1;
  if (workers <= 1 || total < 2 * static_cast<std::uint64_t>(workers)) {
    bound = range_max(m, 0, total);
  } else {
    std::vector<double> partial(workers, -1.0);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::uint64_t begin = chunk * w;
      const std::uint64_t end = std::min(total, begin + chunk);
      pool.emplace_back([&m, &partial, w, begin, end] {
        partial[w] = range_max(m, begin, end);
      });
    }
    for (auto& t : pool) t.join();
    bound = *std::max_element(partial.begin(), partial.end());
  }

  // Tie tolerance relative to the bound; the bound of a valid matrix is > 0.
  const double cut = bound - tol::kDefault * std::max(1.0, std::abs(bound));
  LocalBound result;
  result.bound = bound;
  for (std::uint64_t r = 0; r < total; ++r) {
    if (assignment_value(m, r) >= cut) {
      result.maximizers.push_back(DeterministicAssignment::from_index(r, n_a));
    }
  }
  return result;
}

double bell_value(const BellMatrix& m, const qmath::DensityMatrix& state,
                  const std::vector<qmath::Observable>& alice,
                  const std::vector<qmath::Observable>& bob) {
  if (static_cast<Eigen::Index>(alice.size()) != m.alice_settings() ||
      static_cast<Eigen::Index>(bob.size()) != m.bob_settings()) {
    throw ValidationError("bell_value: observable counts must match the matrix");
  }
  const Eigen::Index da = alice.front().dim();
  const Eigen::Index db = bob.front().dim();
  for (const auto& a : alice) {
    if (a.dim() != da) throw ValidationError("bell_value: Alice dimensions differ");
  }
  for (const auto& b : bob) {
    if (b.dim() != db) throw ValidationError("bell_value: Bob dimensions differ");
  }
  if (state.dim() != da * db) {
    throw ValidationError("bell_value: state dimension mismatch");
  }
  double value = 0.0;
  for (Eigen::Index y = 0; y < m.bob_settings(); ++y) {
    for (Eigen::Index x = 0; x < m.alice_settings(); ++x) {
      const double coeff = m.coefficients()(y, x);
      if (coeff == 0.0) continue;
      value += coeff * qmath::expectation(
                           state, qmath::tensor(alice[x].matrix(), bob[y].matrix()));
    }
  }
  return value;
}

}  // namespace starcorr::bell
