#pragma once

// Trigonometric (Cardano/Viete) solution of real monic cubics in the
// three-real-root regime. Shared by the amplitude solver and the
// closed-form entropy eigenvalue path.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "cavqed/errors.hpp"

namespace cavqed {

// Coefficients of mu^3 + x1*mu^2 + x2*mu + x3 = 0.
struct CubicCoefficients {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;
};

struct CubicRoots {
  std::array<double, 3> mu{};  // sorted ascending
  double phi = 0.0;            // auxiliary angle of the cosine parametrization
};

// Below this, root differences are numerically meaningless and the weight
// formulas divide by ~0.
inline double degeneracy_floor(const CubicCoefficients& c) {
  return 1e-12 * std::max(1.0, c.x1 * c.x1);
}

inline CubicRoots solve_cubic_trig(const CubicCoefficients& c) {
  const double disc = c.x1 * c.x1 - 3.0 * c.x2;
  if (disc <= degeneracy_floor(c)) {
    throw DegenerateDiscriminant("cubic x1^2 - 3*x2 = " + std::to_string(disc) +
                                 " is at or below the degeneracy floor");
  }
  const double s = std::sqrt(disc);
  const double arg =
      (9.0 * c.x1 * c.x2 - 2.0 * c.x1 * c.x1 * c.x1 - 27.0 * c.x3) /
      (2.0 * disc * s);
  if (std::abs(arg) > 1.0 + 1e-9) {
    throw ComplexRootRegime("cubic arccos argument " + std::to_string(arg) +
                            " lies outside [-1,1]: complex roots");
  }

  CubicRoots out;
  out.phi = std::acos(std::clamp(arg, -1.0, 1.0)) / 3.0;
  constexpr double third_turn = 2.0 * std::numbers::pi / 3.0;
  for (int m = 0; m < 3; ++m) {
    out.mu[m] =
        -c.x1 / 3.0 + (2.0 / 3.0) * s * std::cos(out.phi + third_turn * m);
  }
  std::sort(out.mu.begin(), out.mu.end());
  return out;
}

inline double min_root_separation(const CubicRoots& r) {
  return std::min(r.mu[1] - r.mu[0], r.mu[2] - r.mu[1]);
}

// |mu^3 + x1 mu^2 + x2 mu + x3| scaled by max(1, |mu|^3); handy for tests.
inline double cubic_residual(const CubicCoefficients& c, double mu) {
  const double p = ((mu + c.x1) * mu + c.x2) * mu + c.x3;
  return std::abs(p) / std::max(1.0, std::abs(mu * mu * mu));
}

}  // namespace cavqed
