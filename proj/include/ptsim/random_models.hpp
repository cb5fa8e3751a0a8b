// Copyright 2026 The ptsim Authors
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

#pragma once

#include <random>
#include <vector>

#include "ptsim/canonical.hpp"
#include "ptsim/linalg.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

// Deterministic generators for randomized verification (property tests and
// the CLI self test).  All draws are sequenced explicitly so a seed fully
// determines the output on every platform.

inline Complex random_complex(std::mt19937_64& rng, double lo = -1.0,
                              double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double re = u(rng);
  const double im = u(rng);
  return {re, im};
}

inline CMatrix random_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = random_complex(rng);
  }
  return m;
}

inline CVector random_vector(std::mt19937_64& rng, Index n) {
  CVector v(n);
  for (Index k = 0; k < n; ++k) v(k) = random_complex(rng);
  return v;
}

inline CMatrix random_unitary(std::mt19937_64& rng, Index n) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, n, n));
  return qr.householderQ();
}

/// Random invertible matrix with singular values in [0.5, 1.5], so its
/// condition number never exceeds 3 and downstream residual bounds stay
/// sharp.
inline CMatrix random_well_conditioned(std::mt19937_64& rng, Index n) {
  const CMatrix u = random_unitary(rng, n);
  const CMatrix v = random_unitary(rng, n);
  std::uniform_real_distribution<double> d(0.5, 1.5);
  CVector sigma(n);
  for (Index k = 0; k < n; ++k) sigma(k) = Complex(d(rng));
  return u * sigma.asDiagonal() * v.adjoint();
}

/// A random symmetric system with known structure: n_pairs conjugate
/// eigenvalue pairs (imaginary parts bounded away from zero) plus n_reals
/// real eigenvalues, all pairwise separated by construction; a
/// well-conditioned frame; parity = identity; and the antilinear symmetry
/// transported from the canonical pair swap through the frame.
struct RandomSystem {
  PTSystem system;
  CMatrix psi_truth;  // frame the system was built from
  std::vector<JordanBlockDesc> blocks_truth;
};

inline RandomSystem random_pt_system(std::mt19937_64& rng, int n_pairs,
                                     int n_reals) {
  const Index n = 2 * n_pairs + n_reals;
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  RandomSystem out;
  // Eigenvalues on jittered grids: cells keep distinct values separated by
  // at least half a cell, and pair imaginary parts stay >= 0.3.
  for (int k = 0; k < n_pairs; ++k) {
    const double cell = 2.0 / n_pairs;
    const double re = -1.0 + cell * (k + 0.25 + 0.5 * u01(rng));
    const double im = 0.3 + 0.6 * u01(rng);
    const Complex lam(re, im);
    const int idx = static_cast<int>(out.blocks_truth.size());
    out.blocks_truth.push_back({lam, 1, idx + 1});
    out.blocks_truth.push_back({std::conj(lam), 1, idx});
  }
  for (int k = 0; k < n_reals; ++k) {
    const double cell = 2.0 / n_reals;
    const double re = -1.0 + cell * (k + 0.25 + 0.5 * u01(rng));
    out.blocks_truth.push_back({Complex(re), 1, -1});
  }

  const CMatrix j = assemble_canonical_form(out.blocks_truth);
  const CMatrix pairing = assemble_pairing(
      out.blocks_truth, std::vector<int>(out.blocks_truth.size(), 1));
  out.psi_truth = random_well_conditioned(rng, n);

  out.system.H = solve_right(CMatrix(out.psi_truth * j), out.psi_truth);
  out.system.P = identity(n);
  // T_conj = Psi Pi conj(Psi)^{-1}: antilinear involution exchanging the
  // conjugate-pair eigenspaces.
  out.system.T_conj = solve_right(CMatrix(out.psi_truth * pairing),
                                  CMatrix(out.psi_truth.conjugate()));
  return out;
}

/// A random Hamiltonian with prescribed canonical block structure (Jordan
/// blocks welcome): H = Psi J Psi^{-1} for a well-conditioned random frame,
/// wrapped into verified canonical data.
struct RandomCanonical {
  CMatrix h;
  CanonicalData canon;
};

inline RandomCanonical random_canonical_system(
    std::mt19937_64& rng, const std::vector<JordanBlockDesc>& blocks,
    const ToleranceConfig& tol = tolerances()) {
  const Index n = total_block_dim(blocks);
  const CMatrix psi = random_well_conditioned(rng, n);
  const CMatrix j = assemble_canonical_form(blocks);
  RandomCanonical out;
  out.h = solve_right(CMatrix(psi * j), psi, tol);
  out.canon = make_canonical(out.h, psi, blocks, std::nullopt, tol);
  return out;
}

}  // namespace ptsim
