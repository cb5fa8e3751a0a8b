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

#include <stdexcept>
#include <string>

namespace ptsim {

/// Base class for every error this library raises on purpose.  Anything else
/// escaping the public entry points is a bug.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand shapes are incompatible with the requested operation.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A linear solve hit a matrix whose reciprocal condition number fell below
/// the configured floor.
class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// An iterative kernel (eigensolver) failed to converge.
class ConvergenceFailure : public Error {
 public:
  using Error::Error;
};

/// Input norm is large enough that the requested function would overflow or
/// return garbage.
class OverflowRisk : public Error {
 public:
  using Error::Error;
};

/// The input is outside the structural classes the automatic canonical
/// machinery supports (clustered spectra, defective inputs without a
/// caller-supplied frame, spectra not closed under conjugation, ...).
class UnsupportedStructure : public Error {
 public:
  using Error::Error;
};

/// A real-eigenvalue frame vector carries negative metric signature.  The
/// constructions in this library are stated for positive signature only.
class NegativeEpsilon : public Error {
 public:
  using Error::Error;
};

/// Model parameters sit on (or numerically indistinguishable from) an
/// exceptional point where eigenvectors coalesce.
class ExceptionalPoint : public Error {
 public:
  using Error::Error;
};

/// Parameters landed in the unbroken regime but the broken-regime
/// construction was requested.
class UnbrokenRegime : public Error {
 public:
  using Error::Error;
};

/// The symmetry is broken (pairing matrix differs from the identity) but an
/// unbroken-only construction was requested.
class BrokenSymmetry : public Error {
 public:
  using Error::Error;
};

/// S - Psi^dag Psi is numerically singular, so the two-frame completion
/// cannot be formed for this scaling.
class SingularFrame : public Error {
 public:
  using Error::Error;
};

/// A verified construction produced residuals above tolerance, or supplied
/// data failed its advertised invariants.
class VerificationFailure : public Error {
 public:
  using Error::Error;
};

/// Index outside the valid frame-vector range.
class InvalidIndex : public Error {
 public:
  using Error::Error;
};

/// |<post|pre>| fell below the overlap floor; the weak value diverges.
class VanishingOverlap : public Error {
 public:
  using Error::Error;
};

/// A state has (numerically) zero self inner product under the metric, so
/// metric expectation values are undefined for it.
class NullEtaNorm : public Error {
 public:
  using Error::Error;
};

/// The readout denominator 2 Re(a_i conj(a_{s(i)})) vanishes for the
/// requested component pair.
class NullDenominator : public Error {
 public:
  using Error::Error;
};

/// A parameter sweep left the regime it is defined on (sign change of the
/// discriminant, determinant exclusion, ...).
class RegimeViolation : public Error {
 public:
  using Error::Error;
};

/// Malformed or semantically invalid serialized input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptsim
