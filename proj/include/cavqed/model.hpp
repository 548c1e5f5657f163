#pragma once

// Physical parameters of two two-level atoms coupled to two parametrically
// mixed cavity modes in a Kerr medium, plus the derived rotated-frame
// quantities and per-block coupling coefficients.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "cavqed/errors.hpp"

namespace cavqed {

using cplx = std::complex<double>;

struct ModelParams {
  double atom_freq1 = 1.0;     // transition frequency of atom 1
  double atom_freq2 = 1.0;     // transition frequency of atom 2
  double mode_freq1 = 9.0;     // bare frequency of cavity mode 1
  double mode_freq2 = 10.0;    // bare frequency of cavity mode 2
  double mode_coupling = 0.0;  // bilinear mode-mode (frequency converter) coupling
  double coupling1 = 1.0;      // atom-field coupling of atom 1; sets the unit of time
  double coupling2 = 1.0;      // atom-field coupling of atom 2
  double kerr = 0.0;           // Kerr strength; self- and cross-action tied as cross = 2*kerr
  double beta = 0.0;           // atomic superposition angle, in [0, pi]
  cplx alpha1 = std::sqrt(10.0);  // coherent amplitude of mode 1
  cplx alpha2 = std::sqrt(10.0);  // coherent amplitude of mode 2
  int n_max = 40;              // Fock truncation per mode
  double tail_tol = 1e-8;      // allowed truncated probability mass per mode

  // The closed-form solution additionally needs equal couplings and equal
  // detunings; the reference integrator does not.
  bool identical_atoms() const {
    return coupling1 == coupling2 && atom_freq1 == atom_freq2;
  }

  void validate() const {
    auto finite = [](double x) { return std::isfinite(x); };
    if (!finite(atom_freq1) || !finite(atom_freq2) || !finite(mode_freq1) ||
        !finite(mode_freq2) || !finite(mode_coupling) || !finite(kerr) ||
        !finite(coupling1) || !finite(coupling2) || !finite(beta) ||
        !finite(tail_tol)) {
      throw std::invalid_argument("ModelParams: non-finite parameter");
    }
    if (!(coupling1 > 0.0) || !(coupling2 > 0.0))
      throw std::invalid_argument("ModelParams: couplings must be positive");
    if (beta < 0.0 || beta > std::numbers::pi)
      throw std::invalid_argument("ModelParams: beta must lie in [0, pi]");
    if (n_max < 1) throw std::invalid_argument("ModelParams: n_max must be >= 1");
    if (!(tail_tol > 0.0))
      throw std::invalid_argument("ModelParams: tail_tol must be positive");
  }
};

// Mixing angle of the canonical rotation that removes the bilinear
// mode-mode coupling. Principal branch, |angle| <= pi/4. At the degenerate
// point mode_freq1 == mode_freq2 the angle takes the sign of the coupling;
// zero coupling always maps to angle zero.
inline double rotation_angle(double mode_freq1, double mode_freq2,
                             double mode_coupling) {
  if (mode_coupling == 0.0) return 0.0;
  const double gap = mode_freq2 - mode_freq1;
  if (gap == 0.0) return std::copysign(std::numbers::pi / 4.0, mode_coupling);
  return 0.5 * std::atan(2.0 * mode_coupling / gap);
}

struct RotatedFrame {
  double angle = 0.0;       // rotation angle
  double mode_freq1 = 0.0;  // dressed mode frequencies; their sum equals the bare sum
  double mode_freq2 = 0.0;
  double detuning1 = 0.0;   // atom_freq_j - (mode_freq2 - mode_freq1)
  double detuning2 = 0.0;
};

inline RotatedFrame rotated_frame(const ModelParams& p) {
  RotatedFrame f;
  f.angle = rotation_angle(p.mode_freq1, p.mode_freq2, p.mode_coupling);
  const double c = std::cos(f.angle);
  const double s = std::sin(f.angle);
  const double s2 = std::sin(2.0 * f.angle);
  f.mode_freq1 = p.mode_freq1 * c * c + p.mode_freq2 * s * s - p.mode_coupling * s2;
  f.mode_freq2 = p.mode_freq1 * s * s + p.mode_freq2 * c * c + p.mode_coupling * s2;
  const double gap = f.mode_freq2 - f.mode_freq1;
  f.detuning1 = p.atom_freq1 - gap;
  f.detuning2 = p.atom_freq2 - gap;
  return f;
}

// Coupling matrix elements and Kerr shifts of the invariant subspace
// labelled by (n1, n2). The three shifts v1, v2, v3 belong to the doubly
// excited, singly excited and ground rungs of the ladder.
struct BlockCoefficients {
  int n1 = 0;
  int n2 = 0;
  double f1 = 0.0;
  double f2 = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
};

inline BlockCoefficients block_coefficients(int n1, int n2, double coupling,
                                            double kerr) {
  if (n1 < 0 || n2 < 0)
    throw std::invalid_argument("block_coefficients: negative Fock index");
  BlockCoefficients b;
  b.n1 = n1;
  b.n2 = n2;
  b.f1 = coupling * std::sqrt(double(n1 + 2) * double(n2 + 1));
  b.f2 = coupling * std::sqrt(double(n1 + 1) * double(n2 + 2));
  b.v1 = kerr * (double(n1 + 2) * (n1 + 1) + double(n2) * (n2 - 1) +
                 2.0 * (n1 + 2) * n2);
  b.v2 = kerr * (double(n1) * (n1 + 1) + double(n2) * (n2 + 1) +
                 2.0 * (n1 + 1) * (n2 + 1));
  b.v3 = kerr * (double(n1) * (n1 - 1) + double(n2 + 1) * (n2 + 2) +
                 2.0 * n1 * (n2 + 2));
  return b;
}

}  // namespace cavqed
