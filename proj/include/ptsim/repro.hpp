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

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ptsim/dilation.hpp"
#include "ptsim/errors.hpp"
#include "ptsim/linalg.hpp"
#include "ptsim/models.hpp"
#include "ptsim/types.hpp"
#include "ptsim/weak.hpp"

namespace ptsim {

/// Deviation statistics of the embedded evolution from the metric one over a
/// (t, s) grid of the two-level gain/loss model:
///
///   z11/z22: |<phi~_i, e^{-itH~} psi~_i> - <psi_i, e^{-itH} psi_i>_eta|
///            (absolute; the metric side is identically zero for a
///            conjugate pair),
///   z12/z21: the same difference for i != j, relative to the metric side.
///
/// Values are stored row-major as [t index][s index].
struct GridReport {
  double r = 0, theta = 0, t_max = 0, s_max = 0;
  std::vector<double> t_axis, s_axis;
  std::vector<std::vector<double>> z11, z22, z12, z21;
  double max_z11 = 0, max_z22 = 0, max_z12 = 0, max_z21 = 0;
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 2) {
    throw DimensionMismatch("linspace: need at least 2 steps");
  }
  std::vector<double> v(static_cast<size_t>(steps));
  for (int k = 0; k < steps; ++k) {
    v[static_cast<size_t>(k)] =
        lo + (hi - lo) * static_cast<double>(k) / (steps - 1);
  }
  return v;
}

/// The per-s machinery of the deviation statistics: one unscaled dilation of
/// the gain/loss model, reused across the whole t axis.
inline DilationResult grid_dilation(double r, double theta, double s,
                                    const ToleranceConfig& tol) {
  try {
    const BenderModel m = bender_model(r, theta, s, tol);
    return build_dilation(m.system.H, m.canon, std::nullopt, std::nullopt,
                          tol);
  } catch (const ExceptionalPoint& e) {
    throw RegimeViolation(std::string("grid leaves the broken regime: ") +
                          e.what());
  } catch (const UnbrokenRegime& e) {
    throw RegimeViolation(std::string("grid leaves the broken regime: ") +
                          e.what());
  } catch (const SingularFrame& e) {
    throw RegimeViolation(std::string("grid hits the determinant exclusion: ") +
                          e.what());
  }
}

struct ZRow {
  double z11, z22, z12, z21;
};

inline ZRow z_statistics(const DilationResult& d, double t,
                         const ToleranceConfig& tol) {
  const Complex mit(0.0, -t);
  const CMatrix big = expm(CMatrix(mit * d.H_tilde), tol);
  const CMatrix small = expm(CMatrix(mit * d.H), tol);
  auto embedded = [&](Index i, Index j) {
    return d.Phi_tilde.col(i).dot(CVector(big * d.Psi_tilde.col(j)));
  };
  auto metric = [&](Index i, Index j) {
    return eta_inner(d.Psi.col(i), CVector(small * d.Psi.col(j)), d.eta);
  };
  ZRow z;
  z.z11 = std::abs(embedded(0, 0) - metric(0, 0));
  z.z22 = std::abs(embedded(1, 1) - metric(1, 1));
  const Complex m12 = metric(0, 1);
  const Complex m21 = metric(1, 0);
  if (std::abs(m12) <= tol.overlap_floor ||
      std::abs(m21) <= tol.overlap_floor) {
    throw RegimeViolation(
        "z_statistics: metric-side matrix element vanishes; relative "
        "deviation is undefined here");
  }
  z.z12 = std::abs(embedded(0, 1) - m12) / std::abs(m12);
  z.z21 = std::abs(embedded(1, 0) - m21) / std::abs(m21);
  return z;
}

}  // namespace detail

/// Sweep the deviation statistics over [0, t_max] x [0, s_max] with `steps`
/// points per axis.  The whole s-range must stay in the broken regime and
/// clear of the determinant exclusion, or RegimeViolation is thrown.
inline GridReport z_grid(double r, double theta, double t_max, double s_max,
                         int steps = 41,
                         const ToleranceConfig& tol = tolerances()) {
  GridReport rep;
  rep.r = r;
  rep.theta = theta;
  rep.t_max = t_max;
  rep.s_max = s_max;
  rep.t_axis = detail::linspace(0.0, t_max, steps);
  rep.s_axis = detail::linspace(0.0, s_max, steps);

  std::vector<DilationResult> dils;
  dils.reserve(rep.s_axis.size());
  for (double s : rep.s_axis) {
    dils.push_back(detail::grid_dilation(r, theta, s, tol));
  }

  const size_t nt = rep.t_axis.size();
  const size_t ns = rep.s_axis.size();
  rep.z11.assign(nt, std::vector<double>(ns, 0.0));
  rep.z22 = rep.z11;
  rep.z12 = rep.z11;
  rep.z21 = rep.z11;
  for (size_t ti = 0; ti < nt; ++ti) {
    for (size_t si = 0; si < ns; ++si) {
      const detail::ZRow z =
          detail::z_statistics(dils[si], rep.t_axis[ti], tol);
      rep.z11[ti][si] = z.z11;
      rep.z22[ti][si] = z.z22;
      rep.z12[ti][si] = z.z12;
      rep.z21[ti][si] = z.z21;
      rep.max_z11 = std::max(rep.max_z11, z.z11);
      rep.max_z22 = std::max(rep.max_z22, z.z22);
      rep.max_z12 = std::max(rep.max_z12, z.z12);
      rep.max_z21 = std::max(rep.max_z21, z.z21);
    }
  }
  return rep;
}

/// Deviation statistics at fixed s for a caller-chosen list of times
/// (typically decreasing toward zero, where every deviation must die off).
struct ConvergencePoint {
  double t = 0;
  double z11 = 0;
  double z12 = 0;
};

inline std::vector<ConvergencePoint> z_convergence(
    double r, double theta, double s, const std::vector<double>& t_points,
    const ToleranceConfig& tol = tolerances()) {
  const DilationResult d = detail::grid_dilation(r, theta, s, tol);
  std::vector<ConvergencePoint> out;
  out.reserve(t_points.size());
  for (double t : t_points) {
    const detail::ZRow z = detail::z_statistics(d, t, tol);
    out.push_back({t, z.z11, z.z12});
  }
  return out;
}

/// Residual report for the closed-form unbroken embedding: the pairing
/// identities, Hermiticity, the frame relation, and (per sampled time) the
/// evolution identities
///
///   e^{-itH~} Psi~ = Psi~ e^{-itJ},
///   Psi~^dag e^{-itH~} Psi~ = e^{-itJ}.
struct UnbrokenCheckReport {
  struct Sample {
    double t = 0;
    double evolution = 0;   // ||e^{-itH~} Psi~ - Psi~ e^{-itJ}||
    double projection = 0;  // ||Psi~^dag e^{-itH~} Psi~ - e^{-itJ}||
  };

  double residual_isometry = 0;   // ||Psi~^dag Psi~ - I||
  double residual_action = 0;     // ||Psi~^dag H~ Psi~ - J||
  double residual_frame = 0;      // ||H Psi - Psi J||
  double residual_hermitian = 0;  // ||H~ - H~^dag||
  std::vector<Sample> samples;
  double worst = 0;
  bool pass = false;
  double tolerance = 0;
};

inline UnbrokenCheckReport verify_unbroken_example(
    double e0, double s, double theta, const std::vector<double>& t_samples,
    const ToleranceConfig& tol = tolerances()) {
  const GuntherSamsonovModel m = gunther_samsonov_model(e0, s, theta, tol);
  UnbrokenCheckReport rep;
  rep.tolerance = tol.residual;
  const CMatrix i2 = identity(2);
  rep.residual_isometry =
      max_abs(CMatrix(m.psi_tilde.adjoint() * m.psi_tilde - i2));
  rep.residual_action =
      max_abs(CMatrix(m.psi_tilde.adjoint() * m.h_tilde * m.psi_tilde - m.J));
  rep.residual_frame = max_abs(
      CMatrix(m.system.H * m.canon.psi_prime - m.canon.psi_prime * m.J));
  rep.residual_hermitian = max_abs(CMatrix(m.h_tilde - m.h_tilde.adjoint()));
  rep.worst = std::max(std::max(rep.residual_isometry, rep.residual_action),
                       std::max(rep.residual_frame, rep.residual_hermitian));
  for (double t : t_samples) {
    const Complex mit(0.0, -t);
    const CMatrix big = expm(CMatrix(mit * m.h_tilde), tol);
    CMatrix ej = CMatrix::Zero(2, 2);
    ej(0, 0) = std::exp(mit * m.J(0, 0));
    ej(1, 1) = std::exp(mit * m.J(1, 1));
    UnbrokenCheckReport::Sample smp;
    smp.t = t;
    smp.evolution =
        max_abs(CMatrix(big * m.psi_tilde - m.psi_tilde * ej));
    smp.projection =
        max_abs(CMatrix(m.psi_tilde.adjoint() * big * m.psi_tilde - ej));
    rep.worst = std::max(rep.worst, std::max(smp.evolution, smp.projection));
    rep.samples.push_back(smp);
  }
  const double scale =
      residual_scale({max_abs(m.h_tilde), max_abs(m.system.H)});
  rep.pass = rep.worst <= tol.residual * scale;
  return rep;
}

/// Write the grid as CSV, one row per (t, s) pair in t-major order.  Values
/// are printed with enough digits to round-trip, so two runs with equal
/// parameters produce byte-identical files.
inline void write_zgrid_csv(const GridReport& rep, std::ostream& os) {
  os << "t,s,z11,z22,z12,z21\n";
  char buf[256];
  for (size_t ti = 0; ti < rep.t_axis.size(); ++ti) {
    for (size_t si = 0; si < rep.s_axis.size(); ++si) {
      std::snprintf(buf, sizeof(buf),
                    "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", rep.t_axis[ti],
                    rep.s_axis[si], rep.z11[ti][si], rep.z22[ti][si],
                    rep.z12[ti][si], rep.z21[ti][si]);
      os << buf;
    }
  }
}

}  // namespace ptsim
