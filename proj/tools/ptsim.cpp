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
//
// ptsim: command-line frontend.  Matrices travel as JSON files (see io.hpp
// for the format); results are printed as JSON on stdout.  Exit codes:
// 0 success, 1 domain or verification failure, 2 malformed input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ptsim/canonical.hpp"
#include "ptsim/dilation.hpp"
#include "ptsim/errors.hpp"
#include "ptsim/io.hpp"
#include "ptsim/linalg.hpp"
#include "ptsim/models.hpp"
#include "ptsim/random_models.hpp"
#include "ptsim/repro.hpp"
#include "ptsim/types.hpp"
#include "ptsim/weak.hpp"

namespace {

using ptsim::CMatrix;
using ptsim::Complex;
using ptsim::CVector;
using ptsim::Index;
using ptsim::Json;

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_check(const std::string& path) {
  const ptsim::PTSystem sys = ptsim::load_system_file(path);
  const ptsim::ValidationReport rep = ptsim::validate_pt(sys);
  Json out{{"pt_symmetric", rep.pass},
           {"tolerance", rep.tolerance},
           {"scale", rep.scale},
           {"residuals",
            Json{{"parity_involution", rep.parity_involution},
                 {"time_reversal_involution", rep.time_reversal_involution},
                 {"pt_consistency", rep.pt_consistency},
                 {"hamiltonian_invariance", rep.hamiltonian_invariance}}}};
  if (rep.pass) {
    out["class"] = ptsim::to_string(ptsim::classify(sys.H));
  }
  emit(out);
  return rep.pass ? 0 : 1;
}

int cmd_canon(const std::string& path, const std::string& eta_path,
              const std::string& out_path) {
  const ptsim::PTSystem sys = ptsim::load_system_file(path);
  std::optional<CMatrix> hint;
  if (!eta_path.empty()) hint = ptsim::load_matrix_file(eta_path);
  const ptsim::CanonicalData c = ptsim::canonical_pair(sys, hint);
  Json out = ptsim::canonical_to_json(c);
  out["class"] = c.unbroken() ? "unbroken" : "broken";
  if (!out_path.empty()) ptsim::save_json_file(out_path, out);
  emit(out);
  return 0;
}

int cmd_dilate(const std::string& path, const std::string& xi_path,
               const std::string& mode, const std::string& scaling,
               const std::string& out_path) {
  const ptsim::PTSystem sys = ptsim::load_system_file(path);
  const ptsim::CanonicalData canon = ptsim::canonical_pair(sys);

  if (mode == "embed") {
    const ptsim::UnbrokenEmbedding e = ptsim::embed_unbroken(sys.H, canon);
    if (!out_path.empty()) ptsim::save_embedding_file(out_path, e);
    emit(Json{{"kind", "embedding"},
              {"n", e.n()},
              {"c", e.c},
              {"residuals", Json{{"isometry", e.residual_isometry},
                                 {"action", e.residual_action}}},
              {"out", out_path}});
    return 0;
  }

  std::optional<CMatrix> xi;
  if (!xi_path.empty() && xi_path != "psi") {
    xi = ptsim::load_matrix_file(xi_path);
  }
  std::optional<ptsim::ScaledFrame> frame;
  if (scaling == "always") {
    frame = ptsim::scale_frame(canon.psi_prime);
  } else if (scaling == "auto") {
    // Keep the natural frame when its completion gap is comfortably
    // invertible (the closed-form regime); rescale otherwise.
    const CMatrix gap =
        canon.S - canon.psi_prime.adjoint() * canon.psi_prime;
    if (ptsim::rcond_estimate(gap) < 1e-8) {
      frame = ptsim::scale_frame(canon.psi_prime);
    }
  }  // "never": leave the frame alone

  const ptsim::DilationResult d =
      ptsim::build_dilation(sys.H, canon, xi, frame);
  if (!out_path.empty()) ptsim::save_dilation_file(out_path, d);
  emit(Json{{"kind", "dilation"},
            {"n", d.n()},
            {"c", d.c},
            {"residuals", Json{{"hermitian", d.residual_hermitian},
                               {"pairing", d.residual_pairing},
                               {"action", d.residual_action}}},
            {"out", out_path}});
  return 0;
}

int cmd_embed(const std::string& path, const std::string& out_path) {
  return cmd_dilate(path, "", "embed", "auto", out_path);
}

// Frame-vector specs: "3" or "psi:3" (embedded state), "phi:3" (partner),
// "mu:3" (readout vector), all 1-based; "file:PATH" loads a column vector.
CVector parse_state_spec(const std::string& spec,
                         const ptsim::DilationResult& d) {
  std::string kind = "psi";
  std::string rest = spec;
  const size_t colon = spec.find(':');
  if (colon != std::string::npos) {
    kind = spec.substr(0, colon);
    rest = spec.substr(colon + 1);
  }
  if (kind == "file") {
    const CVector v = ptsim::vector_from_json(ptsim::load_json_file(rest), rest);
    if (v.size() != 2 * d.n()) {
      throw ptsim::DimensionMismatch(
          "state file must hold a vector of the doubled dimension");
    }
    return v;
  }
  long idx = 0;
  try {
    size_t pos = 0;
    idx = std::stol(rest, &pos);
    if (pos != rest.size()) throw std::invalid_argument(rest);
  } catch (const std::exception&) {
    throw ptsim::ParseError("state spec '" + spec +
                            "' is not an index or file:PATH");
  }
  if (idx < 1 || idx > d.n()) {
    throw ptsim::InvalidIndex("state index " + std::to_string(idx) +
                              " outside [1, " + std::to_string(d.n()) + "]");
  }
  const ptsim::FrameVectors f = ptsim::frame_vectors(d, idx - 1);
  if (kind == "psi") return f.psi_tilde;
  if (kind == "phi") return f.phi_tilde;
  if (kind == "mu") return f.mu_tilde;
  throw ptsim::ParseError("state spec kind '" + kind +
                          "' (want psi, phi, mu, or file)");
}

int cmd_weak_value(const std::string& bundle_path, const std::string& pre_spec,
                   const std::string& post_spec) {
  const ptsim::DilationResult d = ptsim::load_dilation_file(bundle_path);
  ptsim::WeakSetup s;
  s.observable = d.H_tilde;
  s.pre = parse_state_spec(pre_spec, d);
  s.post = parse_state_spec(post_spec, d);
  const Complex w = ptsim::weak_value(s);
  emit(Json{{"re", w.real()},
            {"im", w.imag()},
            {"overlap", std::abs(s.post.dot(s.pre))}});
  return 0;
}

int cmd_pointer(const std::string& setup_path, Index points, bool has_window,
                double q_min, double q_max) {
  const ptsim::WeakSetup s = ptsim::load_weak_setup_file(setup_path);
  const ptsim::PointerDistribution exact = ptsim::pointer_exact(s);
  const ptsim::PointerDistribution weak = ptsim::pointer_weak_approx(s);
  ptsim::PointerGrid grid;
  if (has_window) {
    if (!(q_max > q_min)) {
      throw ptsim::ParseError("pointer window needs qmin < qmax");
    }
    grid = ptsim::PointerGrid{q_min, q_max, points};
  } else {
    grid = ptsim::pointer_grid({&exact, &weak}, points);
  }

  Json terms = Json::array();
  for (const ptsim::PointerTerm& t : exact.terms) {
    terms.push_back(
        Json{{"weight", complex_json(t.weight)}, {"shift", complex_json(t.shift)}});
  }
  const ptsim::PointerTerm& wt = weak.terms.front();
  emit(Json{
      {"exact_terms", terms},
      {"weak_term",
       Json{{"weight", complex_json(wt.weight)}, {"shift", complex_json(wt.shift)}}},
      {"l2_distance", ptsim::l2_distance(exact, weak, grid)},
      {"mean_shift_exact", ptsim::mean_position(exact, grid)},
      {"mean_shift_weak", ptsim::mean_position(weak, grid)},
      {"total_probability_exact", ptsim::total_probability(exact, grid)},
      {"grid", Json{{"q_min", grid.q_min},
                    {"q_max", grid.q_max},
                    {"points", grid.points}}}});
  return 0;
}

int cmd_zgrid(double r, double theta, double t_max, double s_max, int steps,
              const std::string& out_path) {
  const ptsim::GridReport rep = ptsim::z_grid(r, theta, t_max, s_max, steps);
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    if (!os) throw ptsim::ParseError(out_path + ": cannot open for writing");
    ptsim::write_zgrid_csv(rep, os);
  }
  emit(Json{{"r", rep.r},
            {"theta", rep.theta},
            {"t_max", rep.t_max},
            {"s_max", rep.s_max},
            {"steps", steps},
            {"rows", steps * steps},
            {"max_z11", rep.max_z11},
            {"max_z22", rep.max_z22},
            {"max_z12", rep.max_z12},
            {"max_z21", rep.max_z21},
            {"csv", out_path}});
  return 0;
}

int cmd_zconv(double r, double theta, double s,
              const std::vector<double>& t_points) {
  const std::vector<ptsim::ConvergencePoint> pts =
      ptsim::z_convergence(r, theta, s, t_points);
  Json arr = Json::array();
  for (const ptsim::ConvergencePoint& p : pts) {
    arr.push_back(Json{{"t", p.t}, {"z11", p.z11}, {"z12", p.z12}});
  }
  emit(arr);
  return 0;
}

int cmd_selftest(unsigned long long seed, int trials) {
  std::mt19937_64 rng(seed);
  double max_residual = 0.0;
  double max_expectation = 0.0;
  double max_detected_imag = 0.0;
  double max_frame_mismatch = 0.0;
  int collapse_checked = 0;

  const std::vector<std::pair<int, int>> shapes = {
      {1, 0}, {1, 1}, {2, 0}, {1, 2}, {2, 1}};
  for (int trial = 0; trial < trials; ++trial) {
    const auto [n_pairs, n_reals] = shapes[static_cast<size_t>(trial) %
                                           shapes.size()];
    const ptsim::RandomSystem rs =
        ptsim::random_pt_system(rng, n_pairs, n_reals);
    const ptsim::CanonicalData canon = ptsim::canonical_pair(rs.system);
    const ptsim::ScaledFrame frame = ptsim::scale_frame(canon.psi_prime);
    const ptsim::DilationResult d = ptsim::build_dilation(
        rs.system.H, canon, std::nullopt, frame);
    max_residual = std::max(
        {max_residual, d.residual_hermitian, d.residual_pairing,
         d.residual_action});

    // Biorthogonality of the frame vectors against the canonical form.
    const Index n = d.n();
    for (Index i = 0; i < n; ++i) {
      const ptsim::FrameVectors fv = ptsim::frame_vectors(d, i);
      for (Index j = 0; j < n; ++j) {
        const ptsim::FrameVectors fw = ptsim::frame_vectors(d, j);
        const Complex ov = fv.mu_tilde.dot(fw.psi_tilde);
        const Complex hv =
            fv.mu_tilde.dot(CVector(d.H_tilde * fw.psi_tilde));
        const double want_ov = i == j ? 1.0 : 0.0;
        max_frame_mismatch =
            std::max(max_frame_mismatch, std::abs(ov - want_ov));
        max_frame_mismatch =
            std::max(max_frame_mismatch, std::abs(hv - d.J(i, j)));
      }
    }

    // Metric expectation identity on a random state.
    const CVector a = ptsim::random_vector(rng, n);
    try {
      const ptsim::ExpectationPair p = ptsim::expectation_eta(d, a);
      max_expectation = std::max(
          max_expectation, std::abs(p.metric_side - p.embedded_side) /
                               ptsim::residual_scale(
                                   {std::abs(p.metric_side)}));
    } catch (const ptsim::NullEtaNorm&) {
      // Measure-zero for random draws, but legitimate; skip the sample.
    }

    // Readout statistics stay real with unit-metric-norm collapse states.
    for (Index i = 0; i < n; ++i) {
      try {
        const ptsim::CollapseOutcome c = ptsim::collapse(canon, a, i);
        max_detected_imag = std::max(max_detected_imag, c.imag_residual);
        const Complex nrm =
            ptsim::eta_inner(c.post_state, c.post_state, canon.eta);
        max_detected_imag = std::max(
            max_detected_imag,
            std::abs(nrm - Complex(static_cast<double>(c.signature))));
        ++collapse_checked;
      } catch (const ptsim::NullDenominator&) {
      }
    }
  }

  const bool pass = max_residual <= 1e-9 && max_expectation <= 1e-9 &&
                    max_detected_imag <= 1e-9 && max_frame_mismatch <= 1e-9;
  emit(Json{{"seed", seed},
            {"trials", trials},
            {"max_construction_residual", max_residual},
            {"max_expectation_mismatch", max_expectation},
            {"max_readout_residual", max_detected_imag},
            {"max_frame_mismatch", max_frame_mismatch},
            {"collapse_samples", collapse_checked},
            {"pass", pass}});
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian extensions of symmetric Hamiltonians: canonical "
               "frames, two-frame completions, metric statistics"};
  app.require_subcommand(1);

  double tol_flag = -1.0;
  app.add_option("--tol", tol_flag,
                 "override the master residual tolerance (also: PTSIM_TOL)");

  std::string sys_path, eta_path, out_path, xi_path, pre_spec, post_spec;
  std::string bundle_path, setup_path;
  std::string mode = "general", scaling = "auto";
  double r = std::sqrt(2.0), theta = std::atan(1.0), s = 0.1;
  double t_max = 0.2, s_max = 0.2;
  double q_min = 0.0, q_max = 0.0;
  int steps = 41;
  Index points = 4096;
  std::vector<double> t_points;
  unsigned long long seed = 0ULL;
  int trials = 25;

  CLI::App* c_check = app.add_subcommand(
      "check", "validate the symmetry relations of a system file");
  c_check->add_option("system", sys_path, "system JSON file")->required();

  CLI::App* c_canon = app.add_subcommand(
      "canon", "compute the canonical similarity pair of a system");
  c_canon->add_option("system", sys_path)->required();
  c_canon->add_option("--eta", eta_path, "metric hint (matrix JSON file)");
  c_canon->add_option("--out", out_path, "also write the result to a file");

  CLI::App* c_dilate = app.add_subcommand(
      "dilate", "build the Hermitian extension of a system");
  c_dilate->add_option("system", sys_path)->required();
  c_dilate->add_option("--xi", xi_path,
                       "completion parameter: 'psi' (default) or a matrix file");
  c_dilate->add_option("--mode", mode,
                       "general two-frame completion (default) or embed")
      ->check(CLI::IsMember({"general", "embed"}));
  c_dilate->add_option("--scale", scaling,
                       "frame scaling: auto (default), always, never")
      ->check(CLI::IsMember({"auto", "always", "never"}));
  c_dilate->add_option("--out", out_path, "bundle output file")->required();

  CLI::App* c_embed = app.add_subcommand(
      "embed-unbroken", "isometric embedding for unbroken symmetry");
  c_embed->add_option("system", sys_path)->required();
  c_embed->add_option("--out", out_path, "bundle output file")->required();

  CLI::App* c_weak = app.add_subcommand(
      "weak-value", "post-selected weak value of the extension");
  c_weak->add_option("bundle", bundle_path, "dilation bundle file")->required();
  c_weak->add_option("--pre", pre_spec, "pre-selected state (index, psi:i, or file:PATH)")
      ->required();
  c_weak->add_option("--post", post_spec, "post-selected state (index, phi:i, mu:i, or file:PATH)")
      ->required();

  CLI::App* c_pointer = app.add_subcommand(
      "pointer", "exact vs weak-approximation pointer distributions");
  c_pointer->add_option("setup", setup_path, "weak setup JSON file")->required();
  c_pointer->add_option("--grid", points, "grid resolution (default 4096)");
  CLI::Option* opt_qmin =
      c_pointer->add_option("--qmin", q_min, "window start (default: auto)");
  CLI::Option* opt_qmax =
      c_pointer->add_option("--qmax", q_max, "window end (default: auto)");
  opt_qmin->needs(opt_qmax);
  opt_qmax->needs(opt_qmin);

  CLI::App* c_zgrid = app.add_subcommand(
      "zgrid", "deviation statistics over a (t, s) grid of the gain/loss model");
  c_zgrid->add_option("--r", r, "modulus parameter (default sqrt(2))");
  c_zgrid->add_option("--theta", theta, "phase parameter (default pi/4)");
  c_zgrid->add_option("--t-max", t_max, "time range [0, t_max]");
  c_zgrid->add_option("--s-max", s_max, "coupling range [0, s_max]");
  c_zgrid->add_option("--steps", steps, "points per axis (default 41)");
  c_zgrid->add_option("--out", out_path, "CSV output file");

  CLI::App* c_zconv = app.add_subcommand(
      "zconv", "deviation statistics at fixed s for a list of times");
  c_zconv->add_option("--r", r);
  c_zconv->add_option("--theta", theta);
  c_zconv->add_option("--s", s, "coupling (default 0.1)");
  c_zconv->add_option("--t", t_points, "comma-separated times")
      ->required()
      ->delimiter(',');

  CLI::App* c_self = app.add_subcommand(
      "selftest", "randomized verification of the construction pipeline");
  c_self->add_option("--seed", seed, "RNG seed (default 0)");
  c_self->add_option("--trials", trials, "number of random systems");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (const char* env = std::getenv("PTSIM_TOL")) {
    try {
      ptsim::tolerances().residual = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: PTSIM_TOL is not a number\n";
      return 2;
    }
  }
  if (tol_flag > 0.0) ptsim::tolerances().residual = tol_flag;

  try {
    if (app.got_subcommand(c_check)) return cmd_check(sys_path);
    if (app.got_subcommand(c_canon)) return cmd_canon(sys_path, eta_path, out_path);
    if (app.got_subcommand(c_dilate))
      return cmd_dilate(sys_path, xi_path, mode, scaling, out_path);
    if (app.got_subcommand(c_embed)) return cmd_embed(sys_path, out_path);
    if (app.got_subcommand(c_weak))
      return cmd_weak_value(bundle_path, pre_spec, post_spec);
    if (app.got_subcommand(c_pointer))
      return cmd_pointer(setup_path, points,
                         opt_qmin->count() > 0 && opt_qmax->count() > 0,
                         q_min, q_max);
    if (app.got_subcommand(c_zgrid))
      return cmd_zgrid(r, theta, t_max, s_max, steps, out_path);
    if (app.got_subcommand(c_zconv)) return cmd_zconv(r, theta, s, t_points);
    if (app.got_subcommand(c_self)) return cmd_selftest(seed, trials);
  } catch (const ptsim::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ptsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
