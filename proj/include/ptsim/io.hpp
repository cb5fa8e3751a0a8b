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

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptsim/canonical.hpp"
#include "ptsim/dilation.hpp"
#include "ptsim/errors.hpp"
#include "ptsim/linalg.hpp"
#include "ptsim/types.hpp"
#include "ptsim/weak.hpp"

namespace ptsim {

using Json = nlohmann::json;

// --- JSON primitives -------------------------------------------------------
//
// Matrices travel as {"rows": R, "cols": C, "data": [[re, im], ...]} with
// data in row-major order.  Doubles are emitted with shortest round-trip
// decimal encoding, so save/load is bit-exact.

namespace detail {

inline const Json& require_key(const Json& j, const std::string& key,
                               const std::string& ctx) {
  if (!j.is_object()) {
    throw ParseError(ctx + ": expected an object holding key '" + key + "'");
  }
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError(ctx + ": missing key '" + key + "'");
  }
  return *it;
}

inline double require_number(const Json& j, const std::string& key,
                             const std::string& ctx) {
  const Json& v = require_key(j, key, ctx);
  if (!v.is_number()) {
    throw ParseError(ctx + ": key '" + key + "' must be a number");
  }
  return v.get<double>();
}

inline long long require_integer(const Json& j, const std::string& key,
                                 const std::string& ctx) {
  const Json& v = require_key(j, key, ctx);
  if (!v.is_number_integer()) {
    throw ParseError(ctx + ": key '" + key + "' must be an integer");
  }
  return v.get<long long>();
}

}  // namespace detail

inline Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const Json& j, const std::string& ctx) {
  const long long rows = detail::require_integer(j, "rows", ctx);
  const long long cols = detail::require_integer(j, "cols", ctx);
  if (rows < 1 || cols < 1 || rows > 4096 || cols > 4096) {
    throw ParseError(ctx + ": 'rows'/'cols' out of range");
  }
  const Json& data = detail::require_key(j, "data", ctx);
  if (!data.is_array() ||
      data.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    throw ParseError(ctx + ": 'data' must hold rows*cols entries");
  }
  CMatrix m(rows, cols);
  size_t k = 0;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c, ++k) {
      const Json& e = data[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number()) {
        throw ParseError(ctx + ": 'data' entry " + std::to_string(k) +
                         " must be a [re, im] pair");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag())) {
        throw ParseError(ctx + ": 'data' entry " + std::to_string(k) +
                         " is not finite");
      }
    }
  }
  return m;
}

inline CVector vector_from_json(const Json& j, const std::string& ctx) {
  const CMatrix m = matrix_from_json(j, ctx);
  if (m.cols() != 1) {
    throw ParseError(ctx + ": expected a single-column matrix");
  }
  return m.col(0);
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path + ": cannot open file");
  }
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void save_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError(path + ": cannot open file for writing");
  }
  out << j.dump(2) << '\n';
  if (!out) {
    throw ParseError(path + ": write failed");
  }
}

inline CMatrix load_matrix_file(const std::string& path) {
  return matrix_from_json(load_json_file(path), path);
}

inline void save_matrix_file(const std::string& path, const CMatrix& m) {
  save_json_file(path, matrix_to_json(m));
}

// --- symmetry systems ------------------------------------------------------

inline Json system_to_json(const PTSystem& sys) {
  return Json{{"H", matrix_to_json(sys.H)},
              {"P", matrix_to_json(sys.P)},
              {"T", matrix_to_json(sys.T_conj)}};
}

inline PTSystem system_from_json(const Json& j, const std::string& ctx) {
  PTSystem sys;
  sys.H = matrix_from_json(detail::require_key(j, "H", ctx), ctx + ": H");
  sys.P = matrix_from_json(detail::require_key(j, "P", ctx), ctx + ": P");
  sys.T_conj = matrix_from_json(detail::require_key(j, "T", ctx), ctx + ": T");
  return sys;
}

inline PTSystem load_system_file(const std::string& path) {
  return system_from_json(load_json_file(path), path);
}

inline void save_system_file(const std::string& path, const PTSystem& sys) {
  save_json_file(path, system_to_json(sys));
}

// --- canonical block lists --------------------------------------------------

inline Json blocks_to_json(const std::vector<JordanBlockDesc>& blocks) {
  Json arr = Json::array();
  for (const JordanBlockDesc& b : blocks) {
    arr.push_back(Json{{"eigenvalue",
                        Json::array({b.eigenvalue.real(), b.eigenvalue.imag()})},
                       {"size", b.size},
                       {"paired_with", b.paired_with}});
  }
  return arr;
}

inline std::vector<JordanBlockDesc> blocks_from_json(const Json& j,
                                                     const std::string& ctx) {
  if (!j.is_array() || j.empty()) {
    throw ParseError(ctx + ": 'blocks' must be a nonempty array");
  }
  std::vector<JordanBlockDesc> blocks;
  for (size_t k = 0; k < j.size(); ++k) {
    const Json& e = j[k];
    const std::string ectx = ctx + ": blocks[" + std::to_string(k) + "]";
    const Json& ev = detail::require_key(e, "eigenvalue", ectx);
    if (!ev.is_array() || ev.size() != 2 || !ev[0].is_number() ||
        !ev[1].is_number()) {
      throw ParseError(ectx + ": 'eigenvalue' must be a [re, im] pair");
    }
    JordanBlockDesc b;
    b.eigenvalue = Complex(ev[0].get<double>(), ev[1].get<double>());
    b.size = static_cast<int>(detail::require_integer(e, "size", ectx));
    b.paired_with =
        static_cast<int>(detail::require_integer(e, "paired_with", ectx));
    blocks.push_back(b);
  }
  detail::check_block_structure(blocks, ctx.c_str());
  return blocks;
}

inline Json canonical_to_json(const CanonicalData& c) {
  return Json{{"psi_prime", matrix_to_json(c.psi_prime)},
              {"S", matrix_to_json(c.S)},
              {"eta", matrix_to_json(c.eta)},
              {"J", matrix_to_json(c.J())},
              {"blocks", blocks_to_json(c.blocks)},
              {"perm", c.perm},
              {"epsilons", c.epsilons}};
}

// --- weak-measurement setups -------------------------------------------------

inline WeakSetup weak_setup_from_json(const Json& j, const std::string& ctx) {
  WeakSetup s;
  s.observable = matrix_from_json(detail::require_key(j, "observable", ctx),
                                  ctx + ": observable");
  s.pre = vector_from_json(detail::require_key(j, "pre", ctx), ctx + ": pre");
  s.post =
      vector_from_json(detail::require_key(j, "post", ctx), ctx + ": post");
  s.g = detail::require_number(j, "g", ctx);
  s.delta = detail::require_number(j, "delta", ctx);
  return s;
}

inline WeakSetup load_weak_setup_file(const std::string& path) {
  return weak_setup_from_json(load_json_file(path), path);
}

// --- self-verifying dilation bundles -----------------------------------------
//
// A bundle (format 1) stores the full extension: every ingredient matrix,
// the block structure, the scale, and the construction residuals.  Loading
// re-verifies the pairing identities and the internal consistency of all
// redundant pieces; any entry tampered beyond ~1e-6 trips the re-check.

inline Json dilation_to_json(const DilationResult& d) {
  return Json{{"format", 1},
              {"kind", "dilation"},
              {"c", d.c},
              {"H", matrix_to_json(d.H)},
              {"H_tilde", matrix_to_json(d.H_tilde)},
              {"Psi_tilde", matrix_to_json(d.Psi_tilde)},
              {"Phi_tilde", matrix_to_json(d.Phi_tilde)},
              {"Psi", matrix_to_json(d.Psi)},
              {"Xi", matrix_to_json(d.Xi)},
              {"Sigma", matrix_to_json(d.Sigma)},
              {"eta", matrix_to_json(d.eta)},
              {"S", matrix_to_json(d.S)},
              {"J", matrix_to_json(d.J)},
              {"blocks", blocks_to_json(d.blocks)},
              {"perm", d.perm},
              {"residuals", Json{{"hermitian", d.residual_hermitian},
                                 {"pairing", d.residual_pairing},
                                 {"action", d.residual_action}}}};
}

inline DilationResult dilation_from_json(const Json& j,
                                         const std::string& ctx,
                                         const ToleranceConfig& tol = tolerances()) {
  const long long format = detail::require_integer(j, "format", ctx);
  if (format != 1) {
    throw ParseError(ctx + ": unsupported bundle format " +
                     std::to_string(format));
  }
  const Json& kind = detail::require_key(j, "kind", ctx);
  if (!kind.is_string() || kind.get<std::string>() != "dilation") {
    throw ParseError(ctx + ": 'kind' must be \"dilation\"");
  }
  DilationResult d;
  d.c = detail::require_number(j, "c", ctx);
  auto mat = [&](const char* key) {
    return matrix_from_json(detail::require_key(j, key, ctx),
                            ctx + ": " + key);
  };
  d.H = mat("H");
  d.H_tilde = mat("H_tilde");
  d.Psi_tilde = mat("Psi_tilde");
  d.Phi_tilde = mat("Phi_tilde");
  d.Psi = mat("Psi");
  d.Xi = mat("Xi");
  d.Sigma = mat("Sigma");
  d.eta = mat("eta");
  d.S = mat("S");
  d.J = mat("J");
  d.blocks = blocks_from_json(detail::require_key(j, "blocks", ctx), ctx);
  const Json& perm = detail::require_key(j, "perm", ctx);
  if (!perm.is_array()) throw ParseError(ctx + ": 'perm' must be an array");
  d.perm.clear();
  for (const Json& p : perm) {
    if (!p.is_number_integer()) {
      throw ParseError(ctx + ": 'perm' entries must be integers");
    }
    d.perm.push_back(p.get<int>());
  }

  const Index n = d.H.rows();
  if (d.H.cols() != n || d.Psi.rows() != n || d.Psi.cols() != n ||
      d.Xi.rows() != n || d.Xi.cols() != n || d.Sigma.rows() != n ||
      d.Sigma.cols() != n || d.eta.rows() != n || d.eta.cols() != n ||
      d.S.rows() != n || d.S.cols() != n || d.J.rows() != n ||
      d.J.cols() != n || d.H_tilde.rows() != 2 * n ||
      d.H_tilde.cols() != 2 * n || d.Psi_tilde.rows() != 2 * n ||
      d.Psi_tilde.cols() != n || d.Phi_tilde.rows() != 2 * n ||
      d.Phi_tilde.cols() != n ||
      static_cast<Index>(d.perm.size()) != n ||
      total_block_dim(d.blocks) != n) {
    throw ParseError(ctx + ": inconsistent matrix dimensions in bundle");
  }

  // Self-verification: structure, redundancy, and the pairing identities.
  const double accept = tol.bundle_recheck;
  auto fail = [&](const std::string& what) {
    throw VerificationFailure(ctx + ": bundle failed re-verification (" +
                              what + ")");
  };
  const std::vector<int> eps(d.blocks.size(), 1);
  if (max_abs(CMatrix(d.S - assemble_pairing(d.blocks, eps))) > accept) {
    fail("pairing matrix does not match block structure");
  }
  if (d.perm != pairing_permutation(d.blocks)) {
    fail("perm does not match block structure");
  }
  if (max_abs(CMatrix(d.J - assemble_canonical_form(d.blocks))) >
      accept * residual_scale({max_abs(d.J)})) {
    fail("canonical form does not match block structure");
  }
  if (max_abs(CMatrix(d.Psi_tilde.topRows(n) - d.Psi)) > accept ||
      max_abs(CMatrix(d.Psi_tilde.bottomRows(n) - d.Xi)) > accept ||
      max_abs(CMatrix(d.Phi_tilde.topRows(n) - d.Psi)) > accept ||
      max_abs(CMatrix(d.Phi_tilde.bottomRows(n) - d.Sigma)) > accept) {
    fail("frame stacks are inconsistent with their ingredients");
  }
  if (max_abs(CMatrix(d.H_tilde - d.H_tilde.adjoint())) >
      accept * residual_scale({max_abs(d.H_tilde)})) {
    fail("extension is not Hermitian");
  }
  const double h_scale = residual_scale({max_abs(d.H)});
  const double psi_scale = residual_scale({max_abs(d.Psi)});
  if (max_abs(CMatrix(d.H * d.Psi - d.Psi * d.J)) >
      accept * h_scale * psi_scale) {
    fail("frame does not intertwine H with J");
  }
  if (max_abs(CMatrix(d.H_tilde.topLeftCorner(n, n) - d.eta * d.H)) >
      accept * residual_scale({max_abs(d.eta) * max_abs(d.H)})) {
    fail("top-left block differs from eta H");
  }
  // eta must agree with the metric rebuilt from the stored frame.
  const CMatrix eta_re =
      solve_right(solve(d.Psi.adjoint(), d.S, tol), d.Psi, tol);
  if (max_abs(CMatrix(d.eta - 0.5 * (eta_re + eta_re.adjoint()))) >
      accept * residual_scale({max_abs(d.eta)})) {
    fail("metric differs from the one the frame defines");
  }
  const double stack_scale =
      residual_scale({frobenius(d.Phi_tilde) * frobenius(d.Psi_tilde)});
  d.residual_pairing =
      max_abs(CMatrix(d.Phi_tilde.adjoint() * d.Psi_tilde - d.S)) /
      stack_scale;
  if (d.residual_pairing > accept) fail("pairing identity");
  d.residual_action =
      max_abs(CMatrix(d.Phi_tilde.adjoint() * d.H_tilde * d.Psi_tilde -
                      d.S * d.J)) /
      residual_scale({frobenius(d.Phi_tilde) * frobenius(d.H_tilde) *
                      frobenius(d.Psi_tilde)});
  if (d.residual_action > accept) fail("action identity");
  d.residual_hermitian =
      max_abs(CMatrix(d.H_tilde - d.H_tilde.adjoint())) /
      residual_scale({max_abs(d.H_tilde)});
  // Blocks of the extension, reconstructed for downstream consumers.
  d.H1 = d.H_tilde.topLeftCorner(n, n);
  d.H2 = d.H_tilde.topRightCorner(n, n);
  d.H4 = d.H_tilde.bottomRightCorner(n, n);
  return d;
}

inline DilationResult load_dilation_file(
    const std::string& path, const ToleranceConfig& tol = tolerances()) {
  return dilation_from_json(load_json_file(path), path, tol);
}

inline void save_dilation_file(const std::string& path,
                               const DilationResult& d) {
  save_json_file(path, dilation_to_json(d));
}

// --- unbroken embedding bundles ----------------------------------------------

inline Json embedding_to_json(const UnbrokenEmbedding& e) {
  return Json{{"format", 1},
              {"kind", "embedding"},
              {"c", e.c},
              {"H", matrix_to_json(e.H)},
              {"H_tilde", matrix_to_json(e.H_tilde)},
              {"Psi_tilde", matrix_to_json(e.Psi_tilde)},
              {"Psi", matrix_to_json(e.Psi)},
              {"Xi", matrix_to_json(e.Xi)},
              {"J", matrix_to_json(e.J)},
              {"residuals", Json{{"isometry", e.residual_isometry},
                                 {"action", e.residual_action}}}};
}

inline UnbrokenEmbedding embedding_from_json(
    const Json& j, const std::string& ctx,
    const ToleranceConfig& tol = tolerances()) {
  const long long format = detail::require_integer(j, "format", ctx);
  if (format != 1) {
    throw ParseError(ctx + ": unsupported bundle format " +
                     std::to_string(format));
  }
  const Json& kind = detail::require_key(j, "kind", ctx);
  if (!kind.is_string() || kind.get<std::string>() != "embedding") {
    throw ParseError(ctx + ": 'kind' must be \"embedding\"");
  }
  UnbrokenEmbedding e;
  e.c = detail::require_number(j, "c", ctx);
  auto mat = [&](const char* key) {
    return matrix_from_json(detail::require_key(j, key, ctx),
                            ctx + ": " + key);
  };
  e.H = mat("H");
  e.H_tilde = mat("H_tilde");
  e.Psi_tilde = mat("Psi_tilde");
  e.Psi = mat("Psi");
  e.Xi = mat("Xi");
  e.J = mat("J");
  const Index n = e.H.rows();
  if (e.H.cols() != n || e.Psi.rows() != n || e.Psi.cols() != n ||
      e.Xi.rows() != n || e.Xi.cols() != n || e.J.rows() != n ||
      e.J.cols() != n || e.H_tilde.rows() != 2 * n ||
      e.H_tilde.cols() != 2 * n || e.Psi_tilde.rows() != 2 * n ||
      e.Psi_tilde.cols() != n) {
    throw ParseError(ctx + ": inconsistent matrix dimensions in bundle");
  }
  const double accept = tol.bundle_recheck;
  auto fail = [&](const std::string& what) {
    throw VerificationFailure(ctx + ": bundle failed re-verification (" +
                              what + ")");
  };
  if (max_abs(CMatrix(e.Psi_tilde.topRows(n) - e.Psi)) > accept ||
      max_abs(CMatrix(e.Psi_tilde.bottomRows(n) - e.Xi)) > accept) {
    fail("frame stack is inconsistent with its ingredients");
  }
  if (max_abs(CMatrix(e.H_tilde - e.H_tilde.adjoint())) >
      accept * residual_scale({max_abs(e.H_tilde)})) {
    fail("extension is not Hermitian");
  }
  e.residual_isometry =
      max_abs(CMatrix(e.Psi_tilde.adjoint() * e.Psi_tilde - identity(n)));
  if (e.residual_isometry > accept) fail("isometry identity");
  e.residual_action =
      max_abs(CMatrix(e.H_tilde * e.Psi_tilde - e.Psi_tilde * e.J)) /
      residual_scale({max_abs(e.H_tilde)});
  if (e.residual_action > accept) fail("action identity");
  if (max_abs(CMatrix(e.H * e.Psi - e.Psi * e.J)) >
      accept * residual_scale({max_abs(e.H)}) *
          residual_scale({max_abs(e.Psi)})) {
    fail("frame does not intertwine H with J");
  }
  return e;
}

inline UnbrokenEmbedding load_embedding_file(
    const std::string& path, const ToleranceConfig& tol = tolerances()) {
  return embedding_from_json(load_json_file(path), path, tol);
}

inline void save_embedding_file(const std::string& path,
                                const UnbrokenEmbedding& e) {
  save_json_file(path, embedding_to_json(e));
}

}  // namespace ptsim
