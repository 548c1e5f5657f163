#pragma once

#include <stdexcept>
#include <string>

namespace cavqed {

// Base type for every numerical or domain failure raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cubic solver: x1^2 - 3*x2 fell below the degeneracy floor, the three
// roots collapse and downstream divisions by root differences blow up.
struct DegenerateDiscriminant : Error {
  using Error::Error;
};

// Cubic solver: the arccos argument left [-1,1] by more than roundoff,
// i.e. the cubic genuinely has complex roots. For the spectra handled
// here that always signals a caller bug.
struct ComplexRootRegime : Error {
  using Error::Error;
};

// Weight solver: repeated roots make the initial-condition system singular.
struct DegenerateRoots : Error {
  using Error::Error;
};

// Coherent-state truncation leaves more probability mass in the tail than
// the configured tolerance allows; raise n_max.
struct TruncationTooSmall : Error {
  using Error::Error;
};

// The step-halving check of the reference integrator could not reach the
// requested accuracy within the refinement budget.
struct StepSizeFailure : Error {
  using Error::Error;
};

// Trajectories compared on different time grids.
struct GridMismatch : Error {
  using Error::Error;
};

// A density matrix does not have the symmetric two-atom structure the
// closed-form eigenvalue path requires.
struct StructureViolation : Error {
  using Error::Error;
};

// An eigenvalue of a positive-semidefinite matrix came out below the
// roundoff clamp; the input matrix is not a valid state.
struct NegativeEigenvalue : Error {
  using Error::Error;
};

// The concurrence radicand is negative beyond roundoff.
struct NegativeRadicand : Error {
  using Error::Error;
};

// Configuration file rejected; carries the offending line number.
struct ConfigError : Error {
  ConfigError(int line_, const std::string& what_)
      : Error("config line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
  int line;
};

}  // namespace cavqed
