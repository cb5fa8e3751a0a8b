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

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ptsim/errors.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

/// Largest entry magnitude.  This is the norm used when residual matrices are
/// reported to callers, so individual bad entries cannot hide inside an
/// otherwise small Frobenius norm.
inline double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

inline double frobenius(const CMatrix& a) { return a.norm(); }

/// Scale for relative residual checks: max(1, given norms).  The floor of 1
/// keeps checks meaningful for matrices with tiny entries.
inline double residual_scale(std::initializer_list<double> norms) {
  double s = 1.0;
  for (double n : norms) s = std::max(s, n);
  return s;
}

inline CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

/// Conjugate transpose, materialized.
inline CMatrix adjoint(const CMatrix& a) { return a.adjoint(); }

namespace detail {

inline void require_square(const CMatrix& a, const char* who) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch(std::string(who) + ": matrix must be square, got " +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()));
  }
}

inline void require_finite(const CMatrix& a, const char* who) {
  if (!a.allFinite()) {
    throw VerificationFailure(std::string(who) +
                              ": input contains NaN or Inf entries");
  }
}

inline void require_same_rows(const CMatrix& a, const CMatrix& b,
                              const char* who) {
  if (a.rows() != b.rows()) {
    throw DimensionMismatch(std::string(who) + ": row counts differ (" +
                            std::to_string(a.rows()) + " vs " +
                            std::to_string(b.rows()) + ")");
  }
}

}  // namespace detail

/// Reciprocal condition number sigma_min / sigma_max from an SVD; 0 for a
/// singular (or zero) matrix.  Exact rather than estimated: the LU-based
/// estimators are unreliable exactly where this guard matters, at and past
/// numerical singularity.
inline double rcond_estimate(const CMatrix& a) {
  detail::require_square(a, "rcond_estimate");
  if (a.rows() == 0) return 0.0;
  const Eigen::JacobiSVD<CMatrix> svd(a);
  const double hi = svd.singularValues().maxCoeff();
  const double lo = svd.singularValues().minCoeff();
  if (!(hi > 0.0) || !std::isfinite(hi)) return 0.0;
  const double rc = lo / hi;
  return std::isfinite(rc) ? std::max(rc, 0.0) : 0.0;
}

/// Solve A X = B with full-pivot LU.  Refuses matrices whose reciprocal
/// condition estimate falls below tol.condition_floor instead of returning
/// noise.
inline CMatrix solve(const CMatrix& a, const CMatrix& b,
                     const ToleranceConfig& tol = tolerances()) {
  detail::require_square(a, "solve");
  detail::require_finite(a, "solve");
  detail::require_finite(b, "solve");
  detail::require_same_rows(a, b, "solve");
  Eigen::FullPivLU<CMatrix> lu(a);
  const double rcond = rcond_estimate(a);
  if (!(rcond > tol.condition_floor)) {
    throw SingularMatrix("solve: reciprocal condition estimate " +
                         std::to_string(rcond) + " is below the floor " +
                         std::to_string(tol.condition_floor));
  }
  return lu.solve(b);
}

/// Solve X B = A (i.e. X = A B^{-1}) without materializing B^{-1}.
inline CMatrix solve_right(const CMatrix& a, const CMatrix& b,
                           const ToleranceConfig& tol = tolerances()) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("solve_right: inner dimensions differ (" +
                            std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + ")");
  }
  return solve(b.transpose(), a.transpose(), tol).transpose();
}

inline CMatrix inverse(const CMatrix& a,
                       const ToleranceConfig& tol = tolerances()) {
  detail::require_square(a, "inverse");
  return solve(a, identity(a.rows()), tol);
}

/// Spectral data of a general complex matrix.
struct EigResult {
  /// Eigenvalues in the order produced by the QR iteration (no sorting).
  CVector eigenvalues;
  /// Unit-norm right eigenvectors; column k pairs with eigenvalues(k).
  CMatrix right_vectors;
  /// Condition number of the eigenvector basis.  Finite and moderate for
  /// comfortably diagonalizable matrices, huge or infinite near defective
  /// ones.
  double condition_estimate = 0.0;
};

/// Eigendecomposition with verification: every returned pair satisfies
/// ||A v - lambda v|| <= tol.residual * max(1, ||A||_F).
inline EigResult eig(const CMatrix& a,
                     const ToleranceConfig& tol = tolerances()) {
  detail::require_square(a, "eig");
  detail::require_finite(a, "eig");
  Eigen::ComplexEigenSolver<CMatrix> es(a, /*computeEigenvectors=*/true);
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("eig: QR iteration did not converge");
  }
  EigResult r;
  r.eigenvalues = es.eigenvalues();
  r.right_vectors = es.eigenvectors();
  const double scale = residual_scale({frobenius(a)});
  for (Index k = 0; k < a.cols(); ++k) {
    const double res =
        (a * r.right_vectors.col(k) - r.eigenvalues(k) * r.right_vectors.col(k))
            .norm();
    if (res > tol.residual * scale) {
      throw VerificationFailure("eig: eigenpair " + std::to_string(k) +
                                " residual " + std::to_string(res) +
                                " exceeds tolerance");
    }
  }
  const double rc = rcond_estimate(r.right_vectors);
  r.condition_estimate =
      rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
  return r;
}

namespace detail {

struct PadePair {
  CMatrix U, V;
};

// Diagonal Pade numerator/denominator split exp(A) ~ (V - U)^{-1} (V + U)
// for the small orders 3, 5, 7, 9 (used below their accuracy radii).
inline PadePair pade_small(const CMatrix& a, int m) {
  static const std::vector<std::vector<double>> kB = {
      {120., 60., 12., 1.},
      {30240., 15120., 3360., 420., 30., 1.},
      {17297280., 8648640., 1995840., 277200., 25200., 1512., 56., 1.},
      {17643225600., 8821612800., 2075673600., 302702400., 30270240., 2162160.,
       110880., 3960., 90., 1.},
  };
  const std::vector<double>& b = kB[(m - 3) / 2];
  const Index n = a.rows();
  std::vector<CMatrix> even;  // I, A^2, A^4, ...
  even.push_back(CMatrix::Identity(n, n));
  even.push_back(a * a);
  for (int k = 4; k <= m - 1; k += 2) even.push_back(even.back() * even[1]);
  CMatrix u = CMatrix::Zero(n, n);
  for (int k = m; k >= 1; k -= 2) u += b[static_cast<size_t>(k)] * even[(k - 1) / 2];
  CMatrix v = CMatrix::Zero(n, n);
  for (int k = m - 1; k >= 0; k -= 2) v += b[static_cast<size_t>(k)] * even[k / 2];
  return {a * u, v};
}

inline PadePair pade13(const CMatrix& a) {
  static const double b[] = {64764752532480000.,
                             32382376266240000.,
                             7771770303897600.,
                             1187353796428800.,
                             129060195264000.,
                             10559470521600.,
                             670442572800.,
                             33522128640.,
                             1323241920.,
                             40840800.,
                             960960.,
                             16380.,
                             182.,
                             1.};
  const Index n = a.rows();
  const CMatrix I = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a2 * a4;
  const CMatrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                         b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * I);
  const CMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                    b[4] * a4 + b[2] * a2 + b[0] * I;
  return {u, v};
}

}  // namespace detail

/// Matrix exponential by Pade approximation with scaling and squaring
/// (order 13 above the small-norm thresholds).  Inputs with 1-norm beyond
/// tol.expm_norm_bound are refused: the result would be useless long before
/// the arithmetic overflows.
inline CMatrix expm(const CMatrix& a,
                    const ToleranceConfig& tol = tolerances()) {
  detail::require_square(a, "expm");
  detail::require_finite(a, "expm");
  if (a.size() == 0) return a;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm > tol.expm_norm_bound) {
    throw OverflowRisk("expm: input 1-norm " + std::to_string(norm) +
                       " exceeds the configured bound " +
                       std::to_string(tol.expm_norm_bound));
  }
  static const double kTheta[] = {1.495585217958292e-2, 2.539398330063230e-1,
                                  9.504178996162932e-1, 2.097847961257068};
  static const double kTheta13 = 5.371920351148152;
  detail::PadePair p;
  int squarings = 0;
  if (norm <= kTheta[0]) {
    p = detail::pade_small(a, 3);
  } else if (norm <= kTheta[1]) {
    p = detail::pade_small(a, 5);
  } else if (norm <= kTheta[2]) {
    p = detail::pade_small(a, 7);
  } else if (norm <= kTheta[3]) {
    p = detail::pade_small(a, 9);
  } else {
    squarings = std::max(
        0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    p = detail::pade13(a * std::pow(2.0, -squarings));
  }
  CMatrix f = solve(p.V - p.U, p.V + p.U, tol);
  for (int k = 0; k < squarings; ++k) f = f * f;
  return f;
}

/// Principal square root of a Hermitian positive semi-definite matrix.
inline CMatrix hermitian_sqrt(const CMatrix& a,
                              const ToleranceConfig& tol = tolerances()) {
  detail::require_square(a, "hermitian_sqrt");
  detail::require_finite(a, "hermitian_sqrt");
  if (a.size() == 0) return a;
  const double scale = residual_scale({max_abs(a)});
  if (max_abs(CMatrix(a - a.adjoint())) > tol.residual * scale) {
    throw VerificationFailure("hermitian_sqrt: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()));
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("hermitian_sqrt: eigensolver did not converge");
  }
  RVector root = es.eigenvalues();
  for (Index i = 0; i < root.size(); ++i) {
    if (root(i) < -tol.residual * scale) {
      throw VerificationFailure(
          "hermitian_sqrt: input has negative eigenvalue " +
          std::to_string(root(i)));
    }
    root(i) = std::sqrt(std::max(root(i), 0.0));
  }
  return es.eigenvectors() * root.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace ptsim
