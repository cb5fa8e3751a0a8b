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

#include <complex>

#include <Eigen/Dense>

namespace ptsim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every layer of the library.
///
/// All residual checks are relative: a residual r computed from operands of
/// magnitude m passes when r <= residual * max(1, m).  The defaults are
/// deliberately conservative for the dense, small (n <= 32) problems this
/// library targets; callers working with badly scaled data can pass a custom
/// config to any entry point.
struct ToleranceConfig {
  /// Accepted relative residual for verified constructions and reports.
  double residual = 1e-10;
  /// Reciprocal condition number below which a linear solve is treated as
  /// singular rather than silently returning noise.
  double condition_floor = 1e-12;
  /// Relative eigenvalue separation required before the automatic canonical
  /// path trusts one-dimensional eigenspaces.
  double cluster_gap = 1e-6;
  /// Absolute overlap |<post|pre>| below which a weak value is refused.
  double overlap_floor = 1e-10;
  /// Matrix exponentials are refused beyond this operator norm; the result
  /// would overflow or lose all accuracy long before the bound is reached.
  double expm_norm_bound = 1e6;
  /// Largest eigenvector-basis condition number still counted as
  /// diagonalizable by the classifier.
  double eigvec_condition_max = 1e8;
  /// Looser threshold used when re-verifying serialized bundles, which have
  /// been through decimal round-trips.
  double bundle_recheck = 1e-8;
};

/// Process-wide default tolerances.  Mutable so a host application (or the
/// CLI via PTSIM_TOL) can tighten or relax every check in one place.
inline ToleranceConfig& tolerances() {
  static ToleranceConfig cfg;
  return cfg;
}

}  // namespace ptsim
