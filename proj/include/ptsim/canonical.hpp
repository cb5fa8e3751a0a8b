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
#include <optional>
#include <string>
#include <vector>

#include "ptsim/errors.hpp"
#include "ptsim/linalg.hpp"
#include "ptsim/types.hpp"

namespace ptsim {

/// A symmetry triple.  The parity operator P is linear with P^2 = I.  The
/// time-reversal operator is antilinear and represented by its linear part:
/// T v = T_conj * conj(v), constrained by T_conj * conj(T_conj) = I.  The
/// composed antilinear symmetry acts as v -> P * T_conj * conj(v).
struct PTSystem {
  CMatrix H;
  CMatrix P;
  CMatrix T_conj;
};

/// Max-entry residuals of the four defining relations, each compared against
/// tolerance * scale.
struct ValidationReport {
  double parity_involution = 0.0;       // || P^2 - I ||
  double time_reversal_involution = 0.0;  // || T conj(T) - I ||
  double pt_consistency = 0.0;          // || P T - T conj(P) ||
  double hamiltonian_invariance = 0.0;  // || H P T - P T conj(H) ||
  double scale = 1.0;
  double tolerance = 0.0;
  bool pass = false;

  double worst() const {
    return std::max(std::max(parity_involution, time_reversal_involution),
                    std::max(pt_consistency, hamiltonian_invariance));
  }
};

inline ValidationReport validate_pt(const PTSystem& sys,
                                    const ToleranceConfig& tol = tolerances()) {
  detail::require_square(sys.H, "validate_pt");
  detail::require_square(sys.P, "validate_pt");
  detail::require_square(sys.T_conj, "validate_pt");
  if (sys.H.rows() != sys.P.rows() || sys.H.rows() != sys.T_conj.rows()) {
    throw DimensionMismatch("validate_pt: H, P, T_conj sizes differ");
  }
  detail::require_finite(sys.H, "validate_pt");
  detail::require_finite(sys.P, "validate_pt");
  detail::require_finite(sys.T_conj, "validate_pt");

  const CMatrix i = identity(sys.H.rows());
  const CMatrix pt = sys.P * sys.T_conj;
  ValidationReport rep;
  rep.parity_involution = max_abs(CMatrix(sys.P * sys.P - i));
  rep.time_reversal_involution =
      max_abs(CMatrix(sys.T_conj * sys.T_conj.conjugate() - i));
  rep.pt_consistency = max_abs(CMatrix(pt - sys.T_conj * sys.P.conjugate()));
  rep.hamiltonian_invariance =
      max_abs(CMatrix(sys.H * pt - pt * sys.H.conjugate()));
  rep.scale = residual_scale(
      {max_abs(sys.H), max_abs(sys.P), max_abs(sys.T_conj)});
  rep.tolerance = tol.residual;
  rep.pass = rep.worst() <= tol.residual * rep.scale;
  return rep;
}

/// Unbroken: diagonalizable with an entirely real spectrum.  Broken:
/// everything else (complex eigenvalues and/or nontrivial Jordan structure).
enum class SymmetryClass { kUnbroken, kBroken };

inline const char* to_string(SymmetryClass c) {
  return c == SymmetryClass::kUnbroken ? "unbroken" : "broken";
}

/// Numerical regime classifier.  Diagonalizability is decided by (a) full
/// geometric multiplicity on every eigenvalue cluster (cluster radius
/// tol.cluster_gap * max(1, ||H||)) and (b) an eigenvector-basis condition
/// estimate below tol.eigvec_condition_max.  Reality means every imaginary
/// part is below tol.residual * max(1, ||H||).
inline SymmetryClass classify(const CMatrix& h,
                              const ToleranceConfig& tol = tolerances()) {
  const EigResult er = eig(h, tol);
  const Index n = h.rows();
  const double scale = residual_scale({frobenius(h)});

  for (Index k = 0; k < n; ++k) {
    if (std::abs(er.eigenvalues(k).imag()) > tol.residual * scale) {
      return SymmetryClass::kBroken;
    }
  }
  if (er.condition_estimate > tol.eigvec_condition_max) {
    return SymmetryClass::kBroken;
  }

  // Cluster the eigenvalues and demand full geometric multiplicity per
  // cluster: m eigenvalues in a cluster of mean mu must come with m
  // near-null singular values of H - mu I.
  const double gap = tol.cluster_gap * scale;
  std::vector<int> cluster(static_cast<size_t>(n), -1);
  int n_clusters = 0;
  for (Index i = 0; i < n; ++i) {
    if (cluster[static_cast<size_t>(i)] >= 0) continue;
    const int id = n_clusters++;
    // Grow transitively so chains of close eigenvalues land together.
    cluster[static_cast<size_t>(i)] = id;
    bool grew = true;
    while (grew) {
      grew = false;
      for (Index a = 0; a < n; ++a) {
        if (cluster[static_cast<size_t>(a)] != id) continue;
        for (Index b = 0; b < n; ++b) {
          if (cluster[static_cast<size_t>(b)] >= 0) continue;
          if (std::abs(er.eigenvalues(a) - er.eigenvalues(b)) <= gap) {
            cluster[static_cast<size_t>(b)] = id;
            grew = true;
          }
        }
      }
    }
  }
  for (int id = 0; id < n_clusters; ++id) {
    Index m = 0;
    Complex mean = 0.0;
    for (Index k = 0; k < n; ++k) {
      if (cluster[static_cast<size_t>(k)] == id) {
        ++m;
        mean += er.eigenvalues(k);
      }
    }
    if (m < 2) continue;  // an eigenpair certifies geometric multiplicity 1
    mean /= static_cast<double>(m);
    Eigen::JacobiSVD<CMatrix> svd(h - mean * identity(n));
    Index null_dim = 0;
    for (Index k = 0; k < n; ++k) {
      if (svd.singularValues()(k) <= gap) ++null_dim;
    }
    if (null_dim < m) return SymmetryClass::kBroken;
  }
  return SymmetryClass::kUnbroken;
}

/// One block of the canonical form.  paired_with names the adjacent block
/// carrying the conjugate eigenvalue (-1 for real-eigenvalue blocks).
struct JordanBlockDesc {
  Complex eigenvalue;
  int size = 1;
  int paired_with = -1;
};

/// k x k matrix with ones on the anti-diagonal.  Involutory and symmetric;
/// the building block of the pairing matrix.
inline CMatrix sip_matrix(int k) {
  CMatrix s = CMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) s(i, k - 1 - i) = 1.0;
  return s;
}

inline CMatrix jordan_block(Complex lambda, int k) {
  CMatrix j = CMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    j(i, i) = lambda;
    if (i + 1 < k) j(i, i + 1) = 1.0;
  }
  return j;
}

namespace detail {

/// Structural sanity of a block list: conjugate pairs are adjacent, sized
/// alike, and precede every real-eigenvalue block; sizes are positive.
inline void check_block_structure(const std::vector<JordanBlockDesc>& blocks,
                                  const char* who) {
  bool seen_real = false;
  for (size_t i = 0; i < blocks.size(); ++i) {
    const JordanBlockDesc& b = blocks[i];
    if (b.size < 1) {
      throw VerificationFailure(std::string(who) + ": block " +
                                std::to_string(i) + " has nonpositive size");
    }
    if (b.paired_with < 0) {
      seen_real = true;
      continue;
    }
    if (seen_real) {
      throw VerificationFailure(
          std::string(who) +
          ": conjugate-paired blocks must precede real-eigenvalue blocks");
    }
    const size_t p = static_cast<size_t>(b.paired_with);
    if (p >= blocks.size() || blocks[p].paired_with != static_cast<int>(i) ||
        (p != i + 1 && i != p + 1)) {
      throw VerificationFailure(std::string(who) + ": block " +
                                std::to_string(i) +
                                " has an inconsistent pairing");
    }
    if (blocks[p].size != b.size) {
      throw VerificationFailure(std::string(who) +
                                ": paired blocks differ in size");
    }
    const Complex want = std::conj(b.eigenvalue);
    if (std::abs(blocks[p].eigenvalue - want) >
        1e-12 * residual_scale({std::abs(want)})) {
      throw VerificationFailure(std::string(who) +
                                ": paired blocks are not conjugate");
    }
  }
}

}  // namespace detail

inline Index total_block_dim(const std::vector<JordanBlockDesc>& blocks) {
  Index n = 0;
  for (const JordanBlockDesc& b : blocks) n += b.size;
  return n;
}

/// Assemble the canonical form: Jordan blocks laid down in list order.
inline CMatrix assemble_canonical_form(
    const std::vector<JordanBlockDesc>& blocks) {
  detail::check_block_structure(blocks, "assemble_canonical_form");
  const Index n = total_block_dim(blocks);
  CMatrix j = CMatrix::Zero(n, n);
  Index off = 0;
  for (const JordanBlockDesc& b : blocks) {
    j.block(off, off, b.size, b.size) = jordan_block(b.eigenvalue, b.size);
    off += b.size;
  }
  return j;
}

/// Assemble the pairing matrix: one anti-diagonal group of size 2k for each
/// conjugate pair of k-blocks, and epsilon * sip(k) for each real block.
inline CMatrix assemble_pairing(const std::vector<JordanBlockDesc>& blocks,
                                const std::vector<int>& epsilons) {
  detail::check_block_structure(blocks, "assemble_pairing");
  if (epsilons.size() != blocks.size()) {
    throw DimensionMismatch("assemble_pairing: one epsilon per block required");
  }
  const Index n = total_block_dim(blocks);
  CMatrix s = CMatrix::Zero(n, n);
  Index off = 0;
  for (size_t i = 0; i < blocks.size(); ++i) {
    const JordanBlockDesc& b = blocks[i];
    if (b.paired_with == static_cast<int>(i) + 1) {
      s.block(off, off, 2 * b.size, 2 * b.size) = sip_matrix(2 * b.size);
      off += 2 * b.size;
      ++i;  // the partner is covered by the same group
    } else if (b.paired_with >= 0) {
      throw VerificationFailure("assemble_pairing: pair out of order");
    } else {
      if (epsilons[i] != 1 && epsilons[i] != -1) {
        throw VerificationFailure("assemble_pairing: epsilon must be +-1");
      }
      s.block(off, off, b.size, b.size) =
          static_cast<double>(epsilons[i]) * sip_matrix(b.size);
      off += b.size;
    }
  }
  return s;
}

/// Index involution s(.) encoded by the block list: within each pairing
/// group the anti-diagonal reverses column order.
inline std::vector<int> pairing_permutation(
    const std::vector<JordanBlockDesc>& blocks) {
  detail::check_block_structure(blocks, "pairing_permutation");
  const Index n = total_block_dim(blocks);
  std::vector<int> perm(static_cast<size_t>(n), 0);
  Index off = 0;
  for (size_t i = 0; i < blocks.size(); ++i) {
    const JordanBlockDesc& b = blocks[i];
    const int group = b.paired_with == static_cast<int>(i) + 1 ? 2 * b.size
                                                               : b.size;
    for (int j = 0; j < group; ++j) {
      perm[static_cast<size_t>(off + j)] =
          static_cast<int>(off) + group - 1 - j;
    }
    off += group;
    if (group == 2 * b.size) ++i;
  }
  return perm;
}

/// The canonical similarity pair of a symmetric Hamiltonian: a frame of
/// (generalized) eigenvectors psi_prime with
///
///   psi_prime^{-1} H psi_prime = J     (canonical form),
///   psi_prime^dag eta psi_prime = S    (pairing matrix),
///
/// where eta is a Hermitian invertible metric satisfying H^dag eta = eta H,
/// and S is the involutory permutation carrying the conjugate-pair
/// structure.  S equals the identity exactly when the symmetry is unbroken.
struct CanonicalData {
  CMatrix psi_prime;
  std::vector<JordanBlockDesc> blocks;
  CMatrix S;
  std::vector<int> perm;
  CMatrix eta;
  std::vector<int> epsilons;

  Index dim() const { return psi_prime.rows(); }
  CMatrix J() const { return assemble_canonical_form(blocks); }
  bool unbroken() const {
    for (size_t i = 0; i < perm.size(); ++i) {
      if (perm[i] != static_cast<int>(i)) return false;
    }
    return true;
  }
};

/// Full invariant check of a canonical pair against its Hamiltonian.
/// Throws VerificationFailure naming the first violated relation.  tol_scale
/// loosens every threshold (used when re-checking deserialized data).
inline void verify_canonical(const CMatrix& h, const CanonicalData& c,
                             const ToleranceConfig& tol = tolerances(),
                             double accept = -1.0) {
  if (accept < 0) accept = tol.residual;
  detail::require_square(h, "verify_canonical");
  detail::check_block_structure(c.blocks, "verify_canonical");
  const Index n = h.rows();
  if (c.psi_prime.rows() != n || c.psi_prime.cols() != n ||
      c.S.rows() != n || c.S.cols() != n || c.eta.rows() != n ||
      c.eta.cols() != n || total_block_dim(c.blocks) != n ||
      static_cast<Index>(c.perm.size()) != n ||
      c.epsilons.size() != c.blocks.size()) {
    throw DimensionMismatch("verify_canonical: inconsistent dimensions");
  }
  for (int e : c.epsilons) {
    if (e == -1) {
      throw NegativeEpsilon(
          "verify_canonical: negative-signature real block; this "
          "construction supports positive signature only");
    }
    if (e != 1) {
      throw VerificationFailure("verify_canonical: epsilon must be +-1");
    }
  }
  if (max_abs(CMatrix(c.S - assemble_pairing(c.blocks, c.epsilons))) > 1e-12) {
    throw VerificationFailure(
        "verify_canonical: S does not match the block structure");
  }
  if (c.perm != pairing_permutation(c.blocks)) {
    throw VerificationFailure(
        "verify_canonical: perm does not match the block structure");
  }

  const CMatrix j = c.J();
  const double h_scale = residual_scale({max_abs(h)});
  const double psi_scale = residual_scale({max_abs(c.psi_prime)});
  const double fwd =
      max_abs(CMatrix(h * c.psi_prime - c.psi_prime * j));
  if (fwd > accept * h_scale * psi_scale) {
    throw VerificationFailure(
        "verify_canonical: frame residual ||H Psi' - Psi' J|| = " +
        std::to_string(fwd) + " exceeds tolerance");
  }
  const double sim =
      max_abs(CMatrix(solve(c.psi_prime, CMatrix(h * c.psi_prime), tol) - j));
  if (sim > accept * h_scale) {
    throw VerificationFailure(
        "verify_canonical: similarity residual ||Psi'^-1 H Psi' - J|| = " +
        std::to_string(sim) + " exceeds tolerance");
  }

  const double eta_scale = residual_scale({max_abs(c.eta)});
  if (max_abs(CMatrix(c.eta - c.eta.adjoint())) > accept * eta_scale) {
    throw VerificationFailure("verify_canonical: eta is not Hermitian");
  }
  if (!(rcond_estimate(c.eta) > tol.condition_floor)) {
    throw VerificationFailure("verify_canonical: eta is singular");
  }
  const double ph =
      max_abs(CMatrix(h.adjoint() * c.eta - c.eta * h));
  if (ph > accept * residual_scale({max_abs(h) * max_abs(c.eta)})) {
    throw VerificationFailure(
        "verify_canonical: ||H^dag eta - eta H|| = " + std::to_string(ph) +
        " exceeds tolerance");
  }
  const double pairing = max_abs(
      CMatrix(c.psi_prime.adjoint() * c.eta * c.psi_prime - c.S));
  if (pairing >
      accept * residual_scale({eta_scale * psi_scale * psi_scale})) {
    throw VerificationFailure(
        "verify_canonical: ||Psi'^dag eta Psi' - S|| = " +
        std::to_string(pairing) + " exceeds tolerance");
  }
}

/// Wrap caller-supplied canonical data (the escape hatch for structures the
/// automatic path refuses: Jordan blocks, clustered spectra).  Everything is
/// verified before the pair is returned; eta defaults to the canonical
/// metric (Psi'^{-dag}) S Psi'^{-1}.
inline CanonicalData make_canonical(
    const CMatrix& h, const CMatrix& psi_prime,
    const std::vector<JordanBlockDesc>& blocks,
    const std::optional<CMatrix>& eta = std::nullopt,
    const ToleranceConfig& tol = tolerances()) {
  detail::check_block_structure(blocks, "make_canonical");
  CanonicalData c;
  c.psi_prime = psi_prime;
  c.blocks = blocks;
  c.epsilons.assign(blocks.size(), 1);
  c.S = assemble_pairing(blocks, c.epsilons);
  c.perm = pairing_permutation(blocks);
  if (eta) {
    c.eta = 0.5 * (*eta + eta->adjoint());
  } else {
    // (Psi'^{-1})^dag S Psi'^{-1}, formed with solves rather than inverses.
    const CMatrix left = solve(psi_prime.adjoint(), c.S, tol);
    c.eta = solve_right(left, psi_prime, tol);
    c.eta = 0.5 * (c.eta + c.eta.adjoint());
  }
  verify_canonical(h, c, tol);
  return c;
}

namespace detail {

/// Deterministic column convention: unit norm with the largest-magnitude
/// entry rotated onto the positive real axis.
inline void normalize_columns(CMatrix& m) {
  for (Index c = 0; c < m.cols(); ++c) {
    CVector v = m.col(c);
    const double nrm = v.norm();
    if (nrm == 0.0) {
      throw VerificationFailure("normalize_columns: zero column");
    }
    v /= nrm;
    Index imax = 0;
    double best = -1.0;
    for (Index r = 0; r < v.size(); ++r) {
      if (std::abs(v(r)) > best) {
        best = std::abs(v(r));
        imax = r;
      }
    }
    const Complex phase = v(imax) / std::abs(v(imax));
    m.col(c) = v / phase;
  }
}

}  // namespace detail

/// Compute the canonical similarity pair of a validated system whose
/// spectrum is simple (pairwise separation above tol.cluster_gap *
/// max(1, ||H||)).  Defective or clustered inputs are refused; wrap those
/// with make_canonical instead.
///
/// Column order is deterministic: conjugate pairs first (ascending real
/// part, upper-half-plane member leading), then real eigenvalues ascending.
/// Without a metric hint the metric is the canonical one built from the
/// frame; with a hint the frame columns are rescaled so the hint itself
/// satisfies the pairing relation, and real-eigenvalue signatures are
/// detected (negative signature raises NegativeEpsilon).
inline CanonicalData canonical_pair(
    const PTSystem& sys, const std::optional<CMatrix>& eta_hint = std::nullopt,
    const ToleranceConfig& tol = tolerances()) {
  const ValidationReport rep = validate_pt(sys, tol);
  if (!rep.pass) {
    throw VerificationFailure(
        "canonical_pair: system fails symmetry validation (worst residual " +
        std::to_string(rep.worst()) + ")");
  }
  const CMatrix& h = sys.H;
  const Index n = h.rows();
  const EigResult er = eig(h, tol);
  const double scale = residual_scale({frobenius(h)});
  const double imag_tol = tol.residual * scale;
  const double gap = tol.cluster_gap * scale;

  CVector lam = er.eigenvalues;
  for (Index k = 0; k < n; ++k) {
    if (std::abs(lam(k).imag()) <= imag_tol) lam(k) = Complex(lam(k).real(), 0.0);
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      if (std::abs(lam(a) - lam(b)) <= gap) {
        throw UnsupportedStructure(
            "canonical_pair: repeated or clustered eigenvalues; supply a "
            "verified frame via make_canonical");
      }
    }
  }

  std::vector<Index> plus, minus, reals;
  for (Index k = 0; k < n; ++k) {
    if (lam(k).imag() > 0.0) {
      plus.push_back(k);
    } else if (lam(k).imag() < 0.0) {
      minus.push_back(k);
    } else {
      reals.push_back(k);
    }
  }
  auto by_value = [&](Index a, Index b) {
    if (lam(a).real() != lam(b).real()) return lam(a).real() < lam(b).real();
    return lam(a).imag() < lam(b).imag();
  };
  std::sort(plus.begin(), plus.end(), by_value);
  std::sort(reals.begin(), reals.end(), by_value);
  if (plus.size() != minus.size()) {
    throw UnsupportedStructure(
        "canonical_pair: spectrum is not closed under conjugation");
  }

  std::vector<Index> order;
  std::vector<JordanBlockDesc> blocks;
  std::vector<bool> taken(minus.size(), false);
  for (Index p : plus) {
    const Complex want = std::conj(lam(p));
    Index best = -1;
    double dist = std::numeric_limits<double>::infinity();
    for (size_t m = 0; m < minus.size(); ++m) {
      if (taken[m]) continue;
      const double d = std::abs(lam(minus[m]) - want);
      if (d < dist) {
        dist = d;
        best = static_cast<Index>(m);
      }
    }
    if (best < 0 || dist > gap) {
      throw UnsupportedStructure(
          "canonical_pair: spectrum is not closed under conjugation");
    }
    taken[static_cast<size_t>(best)] = true;
    const Index q = minus[static_cast<size_t>(best)];
    lam(q) = want;  // enforce exact conjugation in the stored form
    order.push_back(p);
    order.push_back(q);
    JordanBlockDesc bp{lam(p), 1, static_cast<int>(blocks.size()) + 1};
    JordanBlockDesc bm{want, 1, static_cast<int>(blocks.size())};
    blocks.push_back(bp);
    blocks.push_back(bm);
  }
  for (Index r : reals) {
    order.push_back(r);
    blocks.push_back(JordanBlockDesc{lam(r), 1, -1});
  }

  CMatrix psi(n, n);
  for (Index c = 0; c < n; ++c) psi.col(c) = er.right_vectors.col(order[static_cast<size_t>(c)]);
  detail::normalize_columns(psi);

  if (!eta_hint) {
    return make_canonical(h, psi, blocks, std::nullopt, tol);
  }

  // Metric hint: validate it, then rescale frame columns so the pairing
  // relation holds for the hint exactly as supplied.
  const CMatrix eta = 0.5 * (*eta_hint + eta_hint->adjoint());
  if (eta.rows() != n || eta.cols() != n) {
    throw DimensionMismatch("canonical_pair: eta hint has wrong shape");
  }
  const double eta_scale = residual_scale({max_abs(*eta_hint)});
  if (max_abs(CMatrix(*eta_hint - eta_hint->adjoint())) >
      tol.residual * eta_scale) {
    throw VerificationFailure("canonical_pair: eta hint is not Hermitian");
  }
  if (!(rcond_estimate(eta) > tol.condition_floor)) {
    throw VerificationFailure("canonical_pair: eta hint is singular");
  }
  if (max_abs(CMatrix(h.adjoint() * eta - eta * h)) >
      tol.residual * residual_scale({max_abs(h) * eta_scale})) {
    throw VerificationFailure(
        "canonical_pair: eta hint does not intertwine H^dag with H");
  }

  const CMatrix g = psi.adjoint() * eta * psi;
  const double g_scale = residual_scale({max_abs(g)});
  const std::vector<int> perm = pairing_permutation(blocks);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (perm[static_cast<size_t>(i)] == static_cast<int>(j)) continue;
      if (std::abs(g(i, j)) > tol.residual * g_scale * 1e2) {
        throw VerificationFailure(
            "canonical_pair: eta hint is incompatible with the eigenframe "
            "(off-pattern Gram entry)");
      }
    }
  }
  for (size_t b = 0; b < blocks.size(); ++b) {
    const Index i = static_cast<Index>(b);
    if (blocks[b].paired_with == static_cast<int>(b) + 1) {
      const Complex gg = g(i, i + 1);
      if (std::abs(gg) <= tol.condition_floor * g_scale) {
        throw VerificationFailure(
            "canonical_pair: degenerate pairing entry in the hint metric");
      }
      const double alpha = 1.0 / std::sqrt(std::abs(gg));
      const Complex beta = 1.0 / (alpha * gg);
      psi.col(i) *= alpha;
      psi.col(i + 1) *= beta;
      ++b;
    } else if (blocks[b].paired_with < 0) {
      const Complex gg = g(i, i);
      if (std::abs(gg) <= tol.condition_floor * g_scale) {
        throw VerificationFailure(
            "canonical_pair: degenerate signature entry in the hint metric");
      }
      if (gg.real() < 0.0) {
        throw NegativeEpsilon(
            "canonical_pair: real-eigenvalue frame vector has negative "
            "metric signature");
      }
      psi.col(i) /= std::sqrt(gg.real());
    }
  }
  return make_canonical(h, psi, blocks, eta, tol);
}

}  // namespace ptsim
