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

#include <optional>
#include <string>
#include <vector>

#include "ptsim/canonical.hpp"
#include "ptsim/errors.hpp"
#include "ptsim/linalg.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

/// A frame rescaled so that S - Psi^dag Psi is safely invertible.
struct ScaledFrame {
  double c = 1.0;
  CMatrix psi;
};

/// Rescale a frame by c = sqrt(2 / lambda_min(Psi'^dag Psi')), which pushes
/// Psi^dag Psi >= 2 I and therefore S - Psi^dag Psi <= -I for any involutory
/// pairing S.  Rank-deficient frames are refused.
inline ScaledFrame scale_frame(const CMatrix& psi_prime,
                               const ToleranceConfig& tol = tolerances()) {
  detail::require_square(psi_prime, "scale_frame");
  detail::require_finite(psi_prime, "scale_frame");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(
      CMatrix(psi_prime.adjoint() * psi_prime));
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("scale_frame: Gram eigensolver did not converge");
  }
  const double lmin = es.eigenvalues().minCoeff();
  const double lmax = es.eigenvalues().maxCoeff();
  if (!(lmin > tol.condition_floor * residual_scale({lmax}))) {
    throw SingularMatrix("scale_frame: frame is numerically rank-deficient");
  }
  ScaledFrame f;
  f.c = std::sqrt(2.0 / lmin);
  f.psi = f.c * psi_prime;
  return f;
}

/// The Hermitian extension of a broken-symmetry generator together with the
/// two frames that carry its canonical structure into the doubled space:
///
///   H_tilde = [[H1, H2], [H2^dag, H4]]  (Hermitian, 2n x 2n),
///   Psi_tilde = [Psi; Xi],  Phi_tilde = [Psi; Sigma],
///
/// satisfying the pairing identities
///
///   Phi_tilde^dag Psi_tilde = S,
///   Phi_tilde^dag H_tilde Psi_tilde = S J.
///
/// All ingredient matrices are retained so downstream consumers (metric
/// statistics, serialization, re-verification) never have to rebuild them.
struct DilationResult {
  CMatrix H;                    // original n x n generator
  CMatrix H_tilde;              // 2n x 2n Hermitian extension
  CMatrix Psi_tilde, Phi_tilde; // 2n x n column stacks
  CMatrix Psi, Xi, Sigma;       // n x n ingredients
  CMatrix eta, S, J;
  std::vector<JordanBlockDesc> blocks;
  std::vector<int> perm;
  double c = 1.0;               // frame scale actually used
  CMatrix H1, H2, H4;           // blocks of H_tilde
  double residual_hermitian = 0.0;  // ||raw H_tilde - H_tilde^dag|| before cleanup
  double residual_pairing = 0.0;    // ||Phi~^dag Psi~ - S||
  double residual_action = 0.0;     // ||Phi~^dag H~ Psi~ - S J||

  Index n() const { return H.rows(); }
};

/// Build the Hermitian extension from a canonical pair.
///
/// The frame defaults to the canonical one unscaled (c = 1); pass the result
/// of scale_frame when S - Psi'^dag Psi' is singular or badly conditioned at
/// the natural scale.  Xi defaults to Psi itself and may be any invertible
/// matrix: it parameterizes the family of valid completions.
///
/// Construction follows the completion recipe
///
///   Sigma = (Xi^{-1})^dag (S - Psi^dag Psi),
///   eta   = (Psi^{-1})^dag S Psi^{-1},
///   H1    = eta H,
///   H2    = (Psi^dag)^{-1} Xi^dag,
///   H4    = -H2^dag Psi Xi^{-1} - (Sigma^dag)^{-1} Psi^dag H2,
///
/// evaluated with linear solves instead of explicit inverses, and is
/// verified on construction: the pairing identities must hold to
/// tol.residual (relative) or the builder throws VerificationFailure.
inline DilationResult build_dilation(
    const CMatrix& h, const CanonicalData& canon,
    const std::optional<CMatrix>& xi = std::nullopt,
    const std::optional<ScaledFrame>& frame = std::nullopt,
    const ToleranceConfig& tol = tolerances()) {
  detail::require_square(h, "build_dilation");
  const Index n = h.rows();
  if (canon.dim() != n) {
    throw DimensionMismatch("build_dilation: canonical data size differs from H");
  }

  DilationResult d;
  d.H = h;
  d.S = canon.S;
  d.J = canon.J();
  d.blocks = canon.blocks;
  d.perm = canon.perm;
  d.c = frame ? frame->c : 1.0;
  d.Psi = frame ? frame->psi : canon.psi_prime;
  if (d.Psi.rows() != n || d.Psi.cols() != n) {
    throw DimensionMismatch("build_dilation: frame has wrong shape");
  }
  d.Xi = xi ? *xi : d.Psi;
  if (d.Xi.rows() != n || d.Xi.cols() != n) {
    throw DimensionMismatch("build_dilation: Xi has wrong shape");
  }
  if (!(rcond_estimate(d.Xi) > tol.condition_floor)) {
    throw SingularMatrix("build_dilation: Xi is singular");
  }

  // The frame must intertwine H with J regardless of scaling.
  const double fwd = max_abs(CMatrix(h * d.Psi - d.Psi * d.J));
  if (fwd > tol.residual * residual_scale({max_abs(h)}) *
                residual_scale({max_abs(d.Psi)})) {
    throw VerificationFailure(
        "build_dilation: frame does not intertwine H with J (residual " +
        std::to_string(fwd) + ")");
  }

  const CMatrix gap = d.S - d.Psi.adjoint() * d.Psi;
  if (!(rcond_estimate(gap) > tol.condition_floor)) {
    throw SingularFrame(
        "build_dilation: S - Psi^dag Psi is singular at this scaling; "
        "rescale the frame with scale_frame");
  }

  d.Sigma = solve(d.Xi.adjoint(), gap, tol);
  d.eta = solve_right(solve(d.Psi.adjoint(), d.S, tol), d.Psi, tol);
  d.eta = 0.5 * (d.eta + d.eta.adjoint());
  d.H1 = d.eta * h;
  d.H2 = solve(d.Psi.adjoint(), d.Xi.adjoint(), tol);
  d.H4 = -solve_right(CMatrix(d.H2.adjoint() * d.Psi), d.Xi, tol) -
         solve(d.Sigma.adjoint(), CMatrix(d.Psi.adjoint() * d.H2), tol);

  CMatrix ht(2 * n, 2 * n);
  ht.topLeftCorner(n, n) = d.H1;
  ht.topRightCorner(n, n) = d.H2;
  ht.bottomLeftCorner(n, n) = d.H2.adjoint();
  ht.bottomRightCorner(n, n) = d.H4;
  d.residual_hermitian =
      max_abs(CMatrix(ht - ht.adjoint())) / residual_scale({max_abs(ht)});
  if (d.residual_hermitian > tol.residual) {
    throw VerificationFailure(
        "build_dilation: extension is not Hermitian (relative residual " +
        std::to_string(d.residual_hermitian) + ")");
  }
  // The asymmetry just measured is pure roundoff; store the Hermitian part
  // so downstream spectral code sees an exactly Hermitian matrix.
  d.H_tilde = 0.5 * (ht + ht.adjoint());

  d.Psi_tilde = CMatrix(2 * n, n);
  d.Psi_tilde.topRows(n) = d.Psi;
  d.Psi_tilde.bottomRows(n) = d.Xi;
  d.Phi_tilde = CMatrix(2 * n, n);
  d.Phi_tilde.topRows(n) = d.Psi;
  d.Phi_tilde.bottomRows(n) = d.Sigma;

  const double stack_scale =
      residual_scale({frobenius(d.Phi_tilde) * frobenius(d.Psi_tilde)});
  d.residual_pairing =
      max_abs(CMatrix(d.Phi_tilde.adjoint() * d.Psi_tilde - d.S)) /
      stack_scale;
  if (d.residual_pairing > tol.residual) {
    throw VerificationFailure(
        "build_dilation: pairing identity failed (relative residual " +
        std::to_string(d.residual_pairing) + ")");
  }
  d.residual_action =
      max_abs(CMatrix(d.Phi_tilde.adjoint() * d.H_tilde * d.Psi_tilde -
                      d.S * d.J)) /
      residual_scale(
          {frobenius(d.Phi_tilde) * frobenius(d.H_tilde) *
           frobenius(d.Psi_tilde)});
  if (d.residual_action > tol.residual) {
    throw VerificationFailure(
        "build_dilation: action identity failed (relative residual " +
        std::to_string(d.residual_action) + ")");
  }
  return d;
}

/// The three distinguished vectors attached to frame index i: the embedded
/// state psi_tilde_i, its partner phi_tilde_i, and the readout vector
/// mu_tilde_i = phi_tilde_{s(i)}.  They satisfy
///
///   <mu_tilde_i, psi_tilde_j> = delta_ij,
///   <mu_tilde_i, H_tilde psi_tilde_j> = J_ij,
///
/// turning metric matrix elements into plain inner products upstairs.
struct FrameVectors {
  CVector psi_tilde;
  CVector phi_tilde;
  CVector mu_tilde;
};

inline FrameVectors frame_vectors(const DilationResult& d, Index i) {
  if (i < 0 || i >= d.n()) {
    throw InvalidIndex("frame_vectors: index " + std::to_string(i) +
                       " outside [0, " + std::to_string(d.n() - 1) + "]");
  }
  FrameVectors f;
  f.psi_tilde = d.Psi_tilde.col(i);
  f.phi_tilde = d.Phi_tilde.col(i);
  f.mu_tilde = d.Phi_tilde.col(d.perm[static_cast<size_t>(i)]);
  return f;
}

/// Hermitian embedding for the unbroken regime (S = I, real diagonal J):
/// the frame is shrunk until Psi^dag Psi < I, completed to an isometry by
/// Xi = (I - Psi^dag Psi)^{1/2}, and the extension acts as J on the embedded
/// columns:  H_tilde Psi_tilde = Psi_tilde J with Psi_tilde^dag Psi_tilde = I.
struct UnbrokenEmbedding {
  CMatrix H;
  CMatrix H_tilde;    // 2n x 2n Hermitian
  CMatrix Psi_tilde;  // 2n x n, orthonormal columns
  CMatrix Psi, Xi;
  CMatrix J;          // real diagonal
  double c = 1.0;
  double residual_isometry = 0.0;  // ||Psi~^dag Psi~ - I||
  double residual_action = 0.0;    // ||H~ Psi~ - Psi~ J||

  Index n() const { return H.rows(); }
};

inline UnbrokenEmbedding embed_unbroken(
    const CMatrix& h, const CanonicalData& canon,
    const ToleranceConfig& tol = tolerances()) {
  detail::require_square(h, "embed_unbroken");
  const Index n = h.rows();
  if (canon.dim() != n) {
    throw DimensionMismatch("embed_unbroken: canonical data size differs");
  }
  if (max_abs(CMatrix(canon.S - identity(n))) > 1e-12) {
    throw BrokenSymmetry(
        "embed_unbroken: pairing matrix differs from the identity; use "
        "build_dilation for the broken regime");
  }

  UnbrokenEmbedding e;
  e.H = h;
  e.J = canon.J();
  // S = I rules out Jordan blocks, so J is diagonal with real entries.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(
      CMatrix(canon.psi_prime.adjoint() * canon.psi_prime));
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("embed_unbroken: Gram eigensolver failed");
  }
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmin > tol.condition_floor * residual_scale({lmax}))) {
    throw SingularMatrix("embed_unbroken: frame is rank-deficient");
  }
  e.c = std::sqrt(0.5 / lmax);
  e.Psi = e.c * canon.psi_prime;
  e.Xi = hermitian_sqrt(CMatrix(identity(n) - e.Psi.adjoint() * e.Psi), tol);
  e.Psi_tilde = CMatrix(2 * n, n);
  e.Psi_tilde.topRows(n) = e.Psi;
  e.Psi_tilde.bottomRows(n) = e.Xi;
  CMatrix ht = e.Psi_tilde * e.J * e.Psi_tilde.adjoint();
  e.H_tilde = 0.5 * (ht + ht.adjoint());

  const double fwd = max_abs(CMatrix(h * e.Psi - e.Psi * e.J));
  if (fwd > tol.residual * residual_scale({max_abs(h)}) *
                residual_scale({max_abs(e.Psi)})) {
    throw VerificationFailure(
        "embed_unbroken: frame does not intertwine H with J");
  }
  e.residual_isometry =
      max_abs(CMatrix(e.Psi_tilde.adjoint() * e.Psi_tilde - identity(n)));
  if (e.residual_isometry > tol.residual) {
    throw VerificationFailure(
        "embed_unbroken: embedded frame is not an isometry (residual " +
        std::to_string(e.residual_isometry) + ")");
  }
  e.residual_action =
      max_abs(CMatrix(e.H_tilde * e.Psi_tilde - e.Psi_tilde * e.J)) /
      residual_scale({max_abs(e.H_tilde)});
  if (e.residual_action > tol.residual) {
    throw VerificationFailure(
        "embed_unbroken: extension does not act as J on the embedded "
        "columns (residual " + std::to_string(e.residual_action) + ")");
  }
  return e;
}

}  // namespace ptsim
