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
#include <numbers>
#include <string>
#include <vector>

#include "ptsim/canonical.hpp"
#include "ptsim/dilation.hpp"
#include "ptsim/errors.hpp"
#include "ptsim/linalg.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

/// Metric inner product <v, w>_eta = v^dag eta w.  Antilinear in v, linear
/// in w, conjugate-symmetric whenever eta is Hermitian.
inline Complex eta_inner(const CVector& v, const CVector& w,
                         const CMatrix& eta) {
  if (v.size() != w.size() || eta.rows() != v.size() ||
      eta.cols() != w.size()) {
    throw DimensionMismatch("eta_inner: incompatible sizes");
  }
  return v.dot(CVector(eta * w));
}

/// A post-selected weak-measurement configuration: Hermitian observable,
/// unnormalized pre- and post-selected states, coupling g and pointer
/// width delta.
struct WeakSetup {
  CMatrix observable;
  CVector pre;
  CVector post;
  double g = 1.0;
  double delta = 0.1;
};

namespace detail {

inline void validate_weak_setup(const WeakSetup& s, const ToleranceConfig& tol,
                                bool needs_pointer) {
  require_square(s.observable, "weak setup");
  require_finite(s.observable, "weak setup");
  if (s.observable.rows() == 0) {
    throw DimensionMismatch("weak setup: observable is empty");
  }
  if (s.pre.size() != s.observable.rows() ||
      s.post.size() != s.observable.rows()) {
    throw DimensionMismatch("weak setup: state sizes differ from observable");
  }
  if (!s.pre.allFinite() || !s.post.allFinite()) {
    throw VerificationFailure("weak setup: states contain NaN or Inf");
  }
  const double scale = residual_scale({max_abs(s.observable)});
  if (max_abs(CMatrix(s.observable - s.observable.adjoint())) >
      tol.residual * scale) {
    throw VerificationFailure("weak setup: observable must be Hermitian");
  }
  if (needs_pointer && !(s.delta > 0.0 && std::isfinite(s.delta))) {
    throw VerificationFailure("weak setup: pointer width must be positive");
  }
}

}  // namespace detail

/// Post-selected weak value <post, A pre> / <post, pre>.  Refused when the
/// selection overlap falls below tol.overlap_floor, where the quotient
/// stops meaning anything.
inline Complex weak_value(const WeakSetup& s,
                          const ToleranceConfig& tol = tolerances()) {
  detail::validate_weak_setup(s, tol, /*needs_pointer=*/false);
  const Complex den = s.post.dot(s.pre);
  if (std::abs(den) <= tol.overlap_floor) {
    throw VanishingOverlap(
        "weak_value: |<post, pre>| = " + std::to_string(std::abs(den)) +
        " is below the overlap floor");
  }
  return s.post.dot(CVector(s.observable * s.pre)) / den;
}

/// Both sides of the metric expectation identity for the state u = Psi a:
///
///   <u, H u>_eta / <u, u>_eta
///     = <u1~, H~ u2~> / <u1~, u2~>,
///
/// with u2~ = sum_i a_i psi~_i the embedded state and u1~ = sum_i a_{s(i)}
/// mu~_i the readout companion built from the partner frame.  Equal up to
/// roundoff; both are returned so callers can check.
struct ExpectationPair {
  Complex metric_side;
  Complex embedded_side;
};

inline ExpectationPair expectation_eta(const DilationResult& d,
                                       const CVector& a,
                                       const ToleranceConfig& tol = tolerances()) {
  const Index n = d.n();
  if (a.size() != n) {
    throw DimensionMismatch("expectation_eta: coefficient size differs");
  }
  const CVector u = d.Psi * a;
  const Complex den = eta_inner(u, u, d.eta);
  const double den_scale =
      residual_scale({frobenius(d.eta) * u.squaredNorm()});
  if (std::abs(den) <= tol.residual * den_scale) {
    throw NullEtaNorm("expectation_eta: <u, u>_eta vanishes for this state");
  }
  ExpectationPair p;
  p.metric_side = eta_inner(u, CVector(d.H * u), d.eta) / den;

  CVector u2 = CVector::Zero(2 * n);
  CVector u1 = CVector::Zero(2 * n);
  for (Index i = 0; i < n; ++i) {
    const FrameVectors f = frame_vectors(d, i);
    u2 += a(i) * f.psi_tilde;
    u1 += a(d.perm[static_cast<size_t>(i)]) * f.mu_tilde;
  }
  const Complex den2 = u1.dot(u2);
  if (std::abs(den2) <=
      tol.residual * residual_scale({u1.norm() * u2.norm()})) {
    throw NullEtaNorm("expectation_eta: embedded overlap vanishes");
  }
  p.embedded_side = u1.dot(CVector(d.H_tilde * u2)) / den2;
  return p;
}

/// Result of reading out frame component i of the state sum_k a_k psi_k:
/// the detected (real) value mixes the component with its partner s(i),
///
///   detected = (z J_ii + conj(z) J_s(i)s(i)) / (2 Re z),  z = a_i conj(a_s(i)),
///
/// and the state collapses onto the pair subspace with unit metric norm up
/// to the recorded signature.
struct CollapseOutcome {
  double detected = 0.0;
  CVector post_state;
  Index component = 0;
  Index partner = 0;
  int signature = 1;          // sign of <post, post>_eta
  double imag_residual = 0.0;  // |Im| of the readout quotient before discarding
};

inline CollapseOutcome collapse(const CanonicalData& canon, const CVector& a,
                                Index i,
                                const ToleranceConfig& tol = tolerances()) {
  const Index n = canon.dim();
  if (a.size() != n) {
    throw DimensionMismatch("collapse: coefficient size differs");
  }
  if (i < 0 || i >= n) {
    throw InvalidIndex("collapse: component " + std::to_string(i) +
                       " outside [0, " + std::to_string(n - 1) + "]");
  }
  const Index si = canon.perm[static_cast<size_t>(i)];
  const Complex ai = a(i);
  const Complex asi = a(si);
  const Complex z = ai * std::conj(asi);
  const double den = 2.0 * z.real();
  if (std::abs(den) <= tol.residual * residual_scale({std::abs(z)})) {
    throw NullDenominator(
        "collapse: readout weight 2 Re(a_i conj(a_s(i))) vanishes for "
        "component " + std::to_string(i));
  }
  const CMatrix j = canon.J();
  CollapseOutcome out;
  out.component = i;
  out.partner = si;
  out.signature = den > 0.0 ? 1 : -1;
  if (si == i) {
    // Unpaired component: the quotient collapses algebraically to the level
    // itself, so return it without the numerical round-trip.
    out.detected = j(i, i).real();
    out.imag_residual = std::abs(j(i, i).imag());
    // Plain projection onto the component, phase-aligned with a_i.
    out.post_state = (ai / std::abs(ai)) * canon.psi_prime.col(i);
  } else {
    const Complex quotient = (z * j(i, i) + std::conj(z) * j(si, si)) / den;
    out.detected = quotient.real();
    out.imag_residual = std::abs(quotient.imag());
    out.post_state =
        (ai * canon.psi_prime.col(i) + asi * canon.psi_prime.col(si)) /
        std::sqrt(std::abs(den));
  }
  return out;
}

/// Pointer wavefunction after post-selection: a finite superposition of
/// width-delta Gaussian kernels, each translated by a (possibly complex)
/// shift.  amplitude(q) evaluates the superposition at pointer position q.
struct PointerTerm {
  Complex weight;
  Complex shift;
};

struct PointerDistribution {
  std::vector<PointerTerm> terms;
  double width = 0.0;

  Complex amplitude(double q) const {
    const double norm =
        std::pow(2.0 * std::numbers::pi * width * width, -0.25);
    Complex acc = 0.0;
    for (const PointerTerm& t : terms) {
      const Complex d = Complex(q) - t.shift;
      acc += t.weight * std::exp(-d * d / (4.0 * width * width));
    }
    return norm * acc;
  }

  double density(double q) const { return std::norm(amplitude(q)); }
};

/// Exact post-selected pointer state: one Gaussian per distinct eigenvalue
/// cluster of the observable, shifted by g times the eigenvalue and
/// weighted by the transition amplitude through the spectral projector,
///
///   psi(q) = sum_a <post| Pi_a |pre> G_delta(q - g a).
inline PointerDistribution pointer_exact(
    const WeakSetup& s, const ToleranceConfig& tol = tolerances()) {
  detail::validate_weak_setup(s, tol, /*needs_pointer=*/true);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(
      CMatrix(0.5 * (s.observable + s.observable.adjoint())));
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("pointer_exact: eigensolver did not converge");
  }
  const RVector& ev = es.eigenvalues();  // ascending
  const Index n = ev.size();
  const double gap =
      tol.cluster_gap * residual_scale({ev.cwiseAbs().maxCoeff()});

  PointerDistribution dist;
  dist.width = s.delta;
  Index k = 0;
  while (k < n) {
    Index m = k;
    while (m + 1 < n && ev(m + 1) - ev(m) <= gap) ++m;
    double mean = 0.0;
    Complex weight = 0.0;
    for (Index j = k; j <= m; ++j) {
      mean += ev(j);
      const CVector v = es.eigenvectors().col(j);
      weight += s.post.dot(v) * v.dot(s.pre);
    }
    mean /= static_cast<double>(m - k + 1);
    dist.terms.push_back({weight, Complex(s.g * mean)});
    k = m + 1;
  }
  return dist;
}

/// Weak-approximation pointer state: the single shifted Gaussian
/// <post, pre> G_delta(q - g A_w) with the complex weak value taken
/// literally as a translation.
inline PointerDistribution pointer_weak_approx(
    const WeakSetup& s, const ToleranceConfig& tol = tolerances()) {
  detail::validate_weak_setup(s, tol, /*needs_pointer=*/true);
  const Complex den = s.post.dot(s.pre);
  if (std::abs(den) <= tol.overlap_floor) {
    throw VanishingOverlap("pointer_weak_approx: overlap below floor");
  }
  const Complex aw = s.post.dot(CVector(s.observable * s.pre)) / den;
  PointerDistribution dist;
  dist.width = s.delta;
  dist.terms.push_back({den, s.g * aw});
  return dist;
}

/// Uniform pointer-position grid, q(k) = q_min + k dq.
struct PointerGrid {
  double q_min = 0.0;
  double q_max = 0.0;
  Index points = 4096;

  double dq() const { return (q_max - q_min) / static_cast<double>(points - 1); }
  double q(Index k) const { return q_min + dq() * static_cast<double>(k); }
};

/// Grid covering every term of the given distributions out to
/// margin * width beyond the extreme real shifts (margin defaults to 8,
/// where the Gaussian tails are below 1e-14 of the peak).
inline PointerGrid pointer_grid(
    std::initializer_list<const PointerDistribution*> dists,
    Index points = 4096, double margin = 8.0) {
  if (points < 2) throw DimensionMismatch("pointer_grid: need >= 2 points");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double width = 0.0;
  for (const PointerDistribution* d : dists) {
    width = std::max(width, d->width);
    for (const PointerTerm& t : d->terms) {
      lo = std::min(lo, t.shift.real());
      hi = std::max(hi, t.shift.real());
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw VerificationFailure("pointer_grid: no terms to cover");
  }
  return {lo - margin * width, hi + margin * width, points};
}

/// Relative L2 distance of two pointer amplitudes sampled on a common grid,
/// normalized by the first distribution.
inline double l2_distance(const PointerDistribution& a,
                          const PointerDistribution& b,
                          const PointerGrid& g) {
  double diff2 = 0.0;
  double ref2 = 0.0;
  for (Index k = 0; k < g.points; ++k) {
    const double q = g.q(k);
    const Complex va = a.amplitude(q);
    diff2 += std::norm(va - b.amplitude(q));
    ref2 += std::norm(va);
  }
  if (ref2 == 0.0) {
    throw VerificationFailure("l2_distance: reference amplitude vanishes");
  }
  return std::sqrt(diff2 / ref2);
}

inline double total_probability(const PointerDistribution& d,
                                const PointerGrid& g) {
  double acc = 0.0;
  for (Index k = 0; k < g.points; ++k) acc += d.density(g.q(k));
  return acc * g.dq();
}

inline double mean_position(const PointerDistribution& d,
                            const PointerGrid& g) {
  double num = 0.0;
  double den = 0.0;
  for (Index k = 0; k < g.points; ++k) {
    const double q = g.q(k);
    const double p = d.density(q);
    num += q * p;
    den += p;
  }
  if (den == 0.0) {
    throw VerificationFailure("mean_position: distribution vanishes on grid");
  }
  return num / den;
}

/// The two short-time matrix elements whose agreement quantifies how well
/// the Hermitian extension reproduces metric dynamics:
///
///   embedded = <phi~_i, e^{-i t H~} psi~_j>,
///   metric   = <psi_i, e^{-i t H} psi_j>_eta.
struct SmallTimePair {
  Complex embedded;
  Complex metric;
};

inline SmallTimePair small_time_pair(const DilationResult& d, Index i,
                                     Index j, double t,
                                     const ToleranceConfig& tol = tolerances()) {
  const Index n = d.n();
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw InvalidIndex("small_time_pair: index outside [0, " +
                       std::to_string(n - 1) + "]");
  }
  const Complex mit(0.0, -t);
  const CMatrix big = expm(CMatrix(mit * d.H_tilde), tol);
  const CMatrix small = expm(CMatrix(mit * d.H), tol);
  SmallTimePair p;
  p.embedded = d.Phi_tilde.col(i).dot(CVector(big * d.Psi_tilde.col(j)));
  p.metric = eta_inner(d.Psi.col(i), CVector(small * d.Psi.col(j)), d.eta);
  return p;
}

}  // namespace ptsim
