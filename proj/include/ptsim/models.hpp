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

#include <cmath>
#include <string>

#include "ptsim/canonical.hpp"
#include "ptsim/errors.hpp"
#include "ptsim/linalg.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

/// Two-level gain/loss model
///
///   H = [[r e^{i theta}, s], [s, r e^{-i theta}]],
///
/// with parity = exchange and plain-conjugation time reversal.  The
/// discriminant delta = s^2 - r^2 sin^2(theta) controls the regime: broken
/// for delta < 0 (complex-conjugate eigenvalues r cos(theta) +- i
/// sqrt(-delta)), unbroken for delta > 0, exceptional at delta = 0.
///
/// Everything here is assembled from the closed forms, not from a numerical
/// eigensolver:
///
///   Psi' = [[i u, -s], [s, i u]],   u = sqrt(-delta) + r sin(theta),
///   S    = [[0, 1], [1, 0]],
///   eta  = (Psi'^{-dag}) S Psi'^{-1} with the analytic inverse
///          Psi'^{-1} = 1/(s^2 - u^2) [[i u, s], [-s, i u]].
///
/// frame_det records det(S - Psi'^dag Psi') = -4 delta u^2 - 1, the quantity
/// that must stay away from zero for the unscaled frame to admit the
/// two-frame completion.
struct BenderModel {
  double r = 0, theta = 0, s = 0;
  double delta = 0;
  double u = 0;
  double frame_det = 0;
  PTSystem system;
  CanonicalData canon;
};

inline BenderModel bender_model(double r, double theta, double s,
                                const ToleranceConfig& tol = tolerances()) {
  if (!(r > 0.0)) {
    throw UnsupportedStructure("bender_model: r must be positive");
  }
  BenderModel m;
  m.r = r;
  m.theta = theta;
  m.s = s;
  const double sn = std::sin(theta);
  m.delta = s * s - r * r * sn * sn;
  const double scale = residual_scale({r * r, s * s});
  if (std::abs(m.delta) <= tol.residual * scale) {
    throw ExceptionalPoint(
        "bender_model: parameters sit on the exceptional surface s^2 = "
        "r^2 sin^2(theta)");
  }
  if (m.delta > 0.0) {
    throw UnbrokenRegime(
        "bender_model: s^2 > r^2 sin^2(theta) gives a real spectrum; this "
        "closed form covers the broken regime only");
  }
  const double root = std::sqrt(-m.delta);
  m.u = root + r * sn;
  if (std::abs(m.u) <= tol.residual * residual_scale({r})) {
    throw UnsupportedStructure(
        "bender_model: degenerate frame (u = 0); requires sin(theta) > 0 "
        "or s != 0");
  }
  m.frame_det = -4.0 * m.delta * m.u * m.u - 1.0;
  if (std::abs(m.frame_det) <=
      tol.condition_floor *
          residual_scale({4.0 * std::abs(m.delta) * m.u * m.u})) {
    throw SingularFrame(
        "bender_model: determinant exclusion -4 delta u^2 - 1 = 0; rescale "
        "the frame before completing it");
  }

  const Complex i01(0.0, 1.0);
  const Complex diag = r * std::exp(i01 * theta);
  m.system.H = CMatrix(2, 2);
  m.system.H << diag, Complex(s), Complex(s), std::conj(diag);
  m.system.P = sip_matrix(2);
  m.system.T_conj = identity(2);

  const Complex lambda1(r * std::cos(theta), root);
  CanonicalData& c = m.canon;
  c.psi_prime = CMatrix(2, 2);
  c.psi_prime << i01 * m.u, Complex(-s), Complex(s), i01 * m.u;
  c.blocks = {JordanBlockDesc{lambda1, 1, 1},
              JordanBlockDesc{std::conj(lambda1), 1, 0}};
  c.epsilons = {1, 1};
  c.S = sip_matrix(2);
  c.perm = {1, 0};
  CMatrix psi_inv(2, 2);
  psi_inv << i01 * m.u, Complex(s), Complex(-s), i01 * m.u;
  psi_inv /= Complex(s * s - m.u * m.u);
  c.eta = psi_inv.adjoint() * c.S * psi_inv;
  c.eta = 0.5 * (c.eta + c.eta.adjoint());

  verify_canonical(m.system.H, c, tol);
  return m;
}

/// Two-level model with unbroken symmetry and a closed-form Hermitian
/// extension (the textbook embedding):
///
///   H = [[E0 + i s sin(theta), s], [s, E0 - i s sin(theta)]],
///   J = diag(E0 + s cos(theta), E0 - s cos(theta)),   S = I.
///
/// The stored 4x4 h_tilde together with the isometric column stack
/// psi_tilde satisfies the pairing identities exactly: psi_tilde^dag
/// psi_tilde = I and h_tilde psi_tilde = psi_tilde J, hence the embedded
/// evolution projects back onto e^{-i t J}.
struct GuntherSamsonovModel {
  double e0 = 0, s = 0, theta = 0;
  PTSystem system;
  CanonicalData canon;
  CMatrix J;
  CMatrix h_tilde;    // 4x4 Hermitian
  CMatrix psi_tilde;  // 4x2, orthonormal columns; both frames coincide here
};

inline GuntherSamsonovModel gunther_samsonov_model(
    double e0, double s, double theta,
    const ToleranceConfig& tol = tolerances()) {
  const double c = std::cos(theta);
  const double n = std::sin(theta);
  if (std::abs(c) <= 1e-12) {
    throw ExceptionalPoint(
        "gunther_samsonov_model: cos(theta) = 0 collapses the eigenframe");
  }
  GuntherSamsonovModel m;
  m.e0 = e0;
  m.s = s;
  m.theta = theta;

  const Complex i01(0.0, 1.0);
  m.system.H = CMatrix(2, 2);
  m.system.H << Complex(e0, s * n), Complex(s), Complex(s), Complex(e0, -s * n);
  m.system.P = sip_matrix(2);
  m.system.T_conj = identity(2);

  m.J = CMatrix::Zero(2, 2);
  m.J(0, 0) = e0 + s * c;
  m.J(1, 1) = e0 - s * c;

  const Complex ep = std::exp(i01 * (theta / 2.0)) / 2.0;  // e^{i theta/2}/2
  const Complex em = std::conj(ep);                        // e^{-i theta/2}/2
  m.psi_tilde = CMatrix(4, 2);
  m.psi_tilde << ep, i01 * em,
                 em, -i01 * ep,
                 em, i01 * ep,
                 ep, -i01 * em;

  const Complex off(s * c * c);
  const Complex cross(0.0, s * c * n);
  m.h_tilde = CMatrix(4, 4);
  m.h_tilde << Complex(e0), off, cross, Complex(0),
               off, Complex(e0), Complex(0), -cross,
               -cross, Complex(0), Complex(e0), off,
               Complex(0), cross, off, Complex(e0);

  CanonicalData& cd = m.canon;
  cd.psi_prime = m.psi_tilde.topRows(2);
  cd.blocks = {JordanBlockDesc{Complex(e0 + s * c), 1, -1},
               JordanBlockDesc{Complex(e0 - s * c), 1, -1}};
  cd.epsilons = {1, 1};
  cd.S = identity(2);
  cd.perm = {0, 1};
  const CMatrix psi_inv = inverse(cd.psi_prime, tol);
  cd.eta = psi_inv.adjoint() * psi_inv;
  cd.eta = 0.5 * (cd.eta + cd.eta.adjoint());

  verify_canonical(m.system.H, cd, tol);
  return m;
}

}  // namespace ptsim
