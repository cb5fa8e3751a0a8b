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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "ptsim/linalg.hpp"

namespace {

using ptsim::CMatrix;
using ptsim::Complex;
using ptsim::CVector;

constexpr double kRoot2 = 1.4142135623730951;
constexpr double kQuarterPi = 0.7853981633974483;

// Two-level gain/loss Hamiltonian used as a hand-checkable fixture:
// [[r e^{i theta}, s], [s, r e^{-i theta}]].
CMatrix gain_loss_hamiltonian(double r, double theta, double s) {
  CMatrix h(2, 2);
  h(0, 0) = r * std::exp(Complex(0.0, theta));
  h(0, 1) = Complex(s, 0.0);
  h(1, 0) = Complex(s, 0.0);
  h(1, 1) = r * std::exp(Complex(0.0, -theta));
  return h;
}

CMatrix random_complex_matrix(std::mt19937_64& rng, ptsim::Index n,
                              double scale) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CMatrix a(n, n);
  for (ptsim::Index i = 0; i < n; ++i) {
    for (ptsim::Index j = 0; j < n; ++j) {
      const double re = dist(rng);
      const double im = dist(rng);
      a(i, j) = scale * Complex(re, im);
    }
  }
  return a;
}

}  // namespace

TEST_CASE("max_abs and frobenius report matrix magnitudes", "[linalg]") {
  CMatrix a(2, 2);
  a << Complex(3.0, 4.0), Complex(0.0, 0.0), Complex(0.0, -1.0),
      Complex(1.0, 0.0);
  CHECK(ptsim::max_abs(a) == Catch::Approx(5.0));
  CHECK(ptsim::frobenius(a) == Catch::Approx(std::sqrt(27.0)));
  CHECK(ptsim::residual_scale({0.5, 2.0, 1.5}) == Catch::Approx(2.0));
  CHECK(ptsim::residual_scale({0.1, 0.2}) == Catch::Approx(1.0));
}

TEST_CASE("adjoint conjugates and transposes", "[linalg]") {
  const CMatrix h = gain_loss_hamiltonian(kRoot2, kQuarterPi, 0.1);
  const CMatrix hd = ptsim::adjoint(h);
  // r e^{i pi/4} with r = sqrt(2) is exactly 1 + i, so the adjoint's top-left
  // entry is 1 - i.
  CHECK(hd(0, 0).real() == Catch::Approx(1.0).margin(1e-15));
  CHECK(hd(0, 0).imag() == Catch::Approx(-1.0).margin(1e-15));
  CHECK(hd(0, 1) == h(1, 0));
  CHECK(hd(1, 0) == h(0, 1));
}

TEST_CASE("solve reproduces a closed-form inverse", "[linalg]") {
  // Scalar sanity: (2I) X = I has the unique solution X = I/2.
  const CMatrix half = ptsim::solve(CMatrix(2.0 * ptsim::identity(2)),
                                    ptsim::identity(2));
  CHECK(ptsim::max_abs(half - CMatrix(0.5 * ptsim::identity(2))) == 0.0);

  // Frame of the broken-regime fixture at r = sqrt(2), theta = pi/4,
  // s = 0.1.  Its inverse is [[iu, s], [-s, iu]] / (s^2 - u^2) with
  // u = sqrt(0.99) + 1.
  const double s = 0.1;
  const double u = std::sqrt(0.99) + 1.0;
  CMatrix psi(2, 2);
  psi << Complex(0.0, u), Complex(-s, 0.0), Complex(s, 0.0), Complex(0.0, u);
  CMatrix expected_inverse(2, 2);
  expected_inverse << Complex(0.0, u), Complex(s, 0.0), Complex(-s, 0.0),
      Complex(0.0, u);
  expected_inverse /= (s * s - u * u);

  const CMatrix inv = ptsim::inverse(psi);
  CHECK(ptsim::max_abs(inv - expected_inverse) < 1e-14);

  const CMatrix prod = CMatrix(psi * inv);
  CHECK(ptsim::max_abs(prod - ptsim::identity(2)) < 1e-14);
}

TEST_CASE("solve rejects singular systems", "[linalg]") {
  CMatrix a(2, 2);
  a << Complex(1.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0),
      Complex(1.0, 0.0);
  const CMatrix b = ptsim::identity(2);
  CHECK_THROWS_AS(ptsim::solve(a, b), ptsim::SingularMatrix);
  CHECK_THROWS_AS(ptsim::inverse(a), ptsim::SingularMatrix);
}

TEST_CASE("solve rejects shape mismatches and non-finite input", "[linalg]") {
  const CMatrix a = ptsim::identity(2);
  const CMatrix b = ptsim::identity(3);
  CHECK_THROWS_AS(ptsim::solve(a, b), ptsim::DimensionMismatch);

  CMatrix bad = ptsim::identity(2);
  bad(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(ptsim::solve(bad, a), ptsim::VerificationFailure);
}

TEST_CASE("solve_right solves x a = b", "[linalg]") {
  std::mt19937_64 rng(7u);
  const CMatrix a = random_complex_matrix(rng, 4, 1.0) +
                    CMatrix(4.0 * ptsim::identity(4));
  const CMatrix b = random_complex_matrix(rng, 4, 1.0);
  const CMatrix x = ptsim::solve_right(a, b);
  CHECK(ptsim::max_abs(CMatrix(x * b) - a) < 1e-12);
}

TEST_CASE("eig matches the broken-regime closed form", "[linalg]") {
  const CMatrix h = gain_loss_hamiltonian(kRoot2, kQuarterPi, 0.1);
  const ptsim::EigResult e = ptsim::eig(h);
  REQUIRE(e.eigenvalues.size() == 2);

  // Eigenvalues are r cos(theta) +- i sqrt(r^2 sin^2(theta) - s^2)
  //               = 1 +- i sqrt(0.99).
  const double v = 0.99498743710662;
  Complex lo = e.eigenvalues(0);
  Complex hi = e.eigenvalues(1);
  if (lo.imag() > hi.imag()) std::swap(lo, hi);
  CHECK(std::abs(lo - Complex(1.0, -v)) < 1e-9);
  CHECK(std::abs(hi - Complex(1.0, v)) < 1e-9);
  CHECK(e.condition_estimate < 1e3);
}

TEST_CASE("eig matches the real-spectrum closed form", "[linalg]") {
  // A diagonal matrix returns its diagonal.
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = Complex(1.0, 0.0);
  d(1, 1) = Complex(2.0, 0.0);
  const ptsim::EigResult ed = ptsim::eig(d);
  std::vector<double> diag = {ed.eigenvalues(0).real(),
                              ed.eigenvalues(1).real()};
  std::sort(diag.begin(), diag.end());
  CHECK(diag[0] == Catch::Approx(1.0).margin(1e-14));
  CHECK(diag[1] == Catch::Approx(2.0).margin(1e-14));
  CHECK(std::abs(ed.eigenvalues(0).imag()) < 1e-14);
  CHECK(std::abs(ed.eigenvalues(1).imag()) < 1e-14);

  // [[E0 + i s sin(theta), s], [s, E0 - i s sin(theta)]] has eigenvalues
  // E0 +- s cos(theta).
  const double e0 = 1.0;
  const double s = 0.4;
  const double theta = M_PI / 3.0;
  CMatrix h(2, 2);
  h << Complex(e0, s * std::sin(theta)), Complex(s, 0.0), Complex(s, 0.0),
      Complex(e0, -s * std::sin(theta));
  const ptsim::EigResult e = ptsim::eig(h);
  double lo = e.eigenvalues(0).real();
  double hi = e.eigenvalues(1).real();
  if (lo > hi) std::swap(lo, hi);
  CHECK(std::abs(e.eigenvalues(0).imag()) < 1e-12);
  CHECK(std::abs(e.eigenvalues(1).imag()) < 1e-12);
  CHECK(lo == Catch::Approx(e0 - s * std::cos(theta)).margin(1e-9));
  CHECK(hi == Catch::Approx(e0 + s * std::cos(theta)).margin(1e-9));
}

TEST_CASE("eig satisfies the residual bound on random input", "[linalg]") {
  std::mt19937_64 rng(11u);
  for (int trial = 0; trial < 5; ++trial) {
    const CMatrix a = random_complex_matrix(rng, 5, 2.0);
    const ptsim::EigResult e = ptsim::eig(a);
    for (ptsim::Index k = 0; k < 5; ++k) {
      const CVector r =
          CVector(a * e.right_vectors.col(k) -
                  e.eigenvalues(k) * e.right_vectors.col(k));
      CHECK(r.cwiseAbs().maxCoeff() <=
            1e-10 * ptsim::residual_scale({ptsim::frobenius(a)}));
    }
  }
}

TEST_CASE("eig flags a defective matrix through the condition estimate",
          "[linalg]") {
  CMatrix a(2, 2);
  a << Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0),
      Complex(0.0, 0.0);
  const ptsim::EigResult e = ptsim::eig(a);
  CHECK(e.condition_estimate > 1e8);
}

TEST_CASE("expm handles small closed forms", "[linalg]") {
  CHECK(ptsim::max_abs(ptsim::expm(CMatrix::Zero(3, 3)) - ptsim::identity(3)) <
        1e-15);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = Complex(1.0, 0.0);
  d(1, 1) = Complex(2.0, 0.0);
  const CMatrix ed = ptsim::expm(d);
  CHECK(std::abs(ed(0, 0) - Complex(std::exp(1.0), 0.0)) < 1e-13);
  CHECK(std::abs(ed(1, 1) - Complex(std::exp(2.0), 0.0)) < 1e-12);
  CHECK(std::abs(ed(0, 1)) < 1e-15);

  // exp([[a, 1], [0, a]]) = e^a [[1, 1], [0, 1]].
  CMatrix j(2, 2);
  j << Complex(2.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.0),
      Complex(2.0, 0.0);
  const CMatrix ej = ptsim::expm(j);
  const double e2 = std::exp(2.0);
  CHECK(std::abs(ej(0, 0) - Complex(e2, 0.0)) < 1e-12);
  CHECK(std::abs(ej(0, 1) - Complex(e2, 0.0)) < 1e-12);
  CHECK(std::abs(ej(1, 0)) < 1e-13);
  CHECK(std::abs(ej(1, 1) - Complex(e2, 0.0)) < 1e-12);

  CMatrix one(1, 1);
  one(0, 0) = Complex(0.5, -0.25);
  CHECK(std::abs(ptsim::expm(one)(0, 0) - std::exp(Complex(0.5, -0.25))) <
        1e-14);
}

TEST_CASE("expm inverts under negation", "[linalg]") {
  std::mt19937_64 rng(13u);
  const CMatrix a = random_complex_matrix(rng, 4, 2.0);
  const CMatrix p = CMatrix(ptsim::expm(a) * ptsim::expm(CMatrix(-a)));
  CHECK(ptsim::max_abs(p - ptsim::identity(4)) < 1e-11);
}

TEST_CASE("expm agrees with an independent implementation", "[linalg]") {
  std::mt19937_64 rng(17u);
  for (double scale : {0.05, 1.0, 6.0, 25.0}) {
    const CMatrix a = random_complex_matrix(rng, 5, scale);
    const CMatrix ours = ptsim::expm(a);
    const CMatrix reference = a.exp();  // Eigen/MatrixFunctions
    const double denom = ptsim::residual_scale({ptsim::max_abs(reference)});
    CHECK(ptsim::max_abs(ours - reference) <= 1e-10 * denom);
  }
}

TEST_CASE("expm of a skew-Hermitian matrix is unitary", "[linalg]") {
  std::mt19937_64 rng(19u);
  const CMatrix a = random_complex_matrix(rng, 4, 1.0);
  const CMatrix herm = CMatrix(0.5 * (a + ptsim::adjoint(a)));
  const CMatrix u = ptsim::expm(CMatrix(Complex(0.0, -1.0) * herm));
  CHECK(ptsim::max_abs(CMatrix(ptsim::adjoint(u) * u) - ptsim::identity(4)) <
        1e-12);
}

TEST_CASE("expm refuses norms past the overflow guard", "[linalg]") {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = Complex(1e7, 0.0);
  CHECK_THROWS_AS(ptsim::expm(a), ptsim::OverflowRisk);
}

TEST_CASE("hermitian_sqrt squares back to its input", "[linalg]") {
  std::mt19937_64 rng(23u);
  const CMatrix a = random_complex_matrix(rng, 4, 1.0);
  const CMatrix psd = CMatrix(ptsim::adjoint(a) * a) +
                      CMatrix(0.1 * ptsim::identity(4));
  const CMatrix root = ptsim::hermitian_sqrt(psd);
  CHECK(ptsim::max_abs(CMatrix(root * root) - psd) <=
        1e-12 * ptsim::residual_scale({ptsim::max_abs(psd)}));
  CHECK(ptsim::max_abs(root - ptsim::adjoint(root)) < 1e-12);
}

TEST_CASE("hermitian_sqrt rejects invalid input", "[linalg]") {
  CMatrix skew(2, 2);
  skew << Complex(0.0, 0.0), Complex(1.0, 0.0), Complex(-1.0, 0.0),
      Complex(0.0, 0.0);
  CHECK_THROWS_AS(ptsim::hermitian_sqrt(skew), ptsim::VerificationFailure);

  CMatrix indefinite = CMatrix::Zero(2, 2);
  indefinite(0, 0) = Complex(1.0, 0.0);
  indefinite(1, 1) = Complex(-1.0, 0.0);
  CHECK_THROWS_AS(ptsim::hermitian_sqrt(indefinite),
                  ptsim::VerificationFailure);
}

TEST_CASE("rcond_estimate tracks conditioning", "[linalg]") {
  CHECK(ptsim::rcond_estimate(ptsim::identity(3)) == Catch::Approx(1.0));
  CMatrix near_singular(2, 2);
  near_singular << Complex(1.0, 0.0), Complex(1.0, 0.0), Complex(1.0, 0.0),
      Complex(1.0 + 1e-13, 0.0);
  CHECK(ptsim::rcond_estimate(near_singular) < 1e-10);
}
