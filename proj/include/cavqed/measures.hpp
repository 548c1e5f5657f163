#pragma once

// Entanglement measures of the two-atom reduced state: von Neumann entropy
// by two independent eigenvalue routes, I-concurrence, and negativity.

#include <array>
#include <cmath>
#include <cstdio>
#include <complex>
#include <string>

#include "cavqed/cubic.hpp"
#include "cavqed/eigen.hpp"
#include "cavqed/errors.hpp"
#include "cavqed/state.hpp"

namespace cavqed {

// Eigenvalues below this are treated as roundoff zeros; anything more
// negative is a logic error in the caller's matrix.
inline constexpr double kEigenvalueClamp = -1e-10;

struct EntropyBreakdown {
  std::array<double, 4> xi{};  // probabilities, descending
  CubicCoefficients cubic{};   // characteristic cubic of the nonzero sector
                               // (closed-form route only)
  double phi = 0.0;            // auxiliary angle (closed-form route only)
  double entropy = 0.0;        // nats
};

namespace detail {

inline double shannon_nats(const std::array<double, 4>& xi) {
  double s = 0.0;
  for (double x : xi)
    if (x > 0.0) s -= x * std::log(x);
  return s;
}

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

inline std::array<double, 4> clamp_probabilities(std::array<double, 4> xi) {
  for (double& x : xi) {
    if (x < kEigenvalueClamp)
      throw NegativeEigenvalue("eigenvalue " + sci(x) +
                               " below the roundoff clamp");
    if (x < 0.0) x = 0.0;
  }
  return xi;
}

}  // namespace detail

// Closed-form spectrum of a density matrix with the identical-atom
// structure (rows/columns 2 and 3 equal): one eigenvalue is exactly zero
// and the rest solve a real cubic handled by the shared trigonometric
// solver. A fully degenerate cubic means three equal eigenvalues.
inline EntropyBreakdown entropy_cardano(const AtomDensityMatrix& r) {
  for (int j = 0; j < 4; ++j) {
    if (std::abs(r(1, j) - r(2, j)) > 1e-9)
      throw StructureViolation(
          "entropy_cardano: rows 2 and 3 of the density matrix differ");
  }

  const double r11 = r(0, 0).real();
  const double r22 = r(1, 1).real();
  const double r44 = r(3, 3).real();

  EntropyBreakdown out;
  out.cubic.x1 = -(r11 + 2.0 * r22 + r44);
  out.cubic.x2 = (-2.0 * r(0, 1) * r(1, 0) - r(0, 3) * r(3, 0) -
                  2.0 * r(1, 3) * r(3, 1) + 2.0 * r(1, 1) * r(3, 3) +
                  r(0, 0) * (2.0 * r(1, 1) + r(3, 3)))
                     .real();
  out.cubic.x3 = 2.0 * (r(0, 3) * (r(1, 1) * r(3, 0) - r(1, 0) * r(3, 1)) +
                        r(0, 1) * (r(1, 0) * r(3, 3) - r(1, 3) * r(3, 0)) +
                        r(0, 0) * (r(1, 3) * r(3, 1) - r(1, 1) * r(3, 3)))
                     .real();

  std::array<double, 4> xi{};
  const double scale = std::max(1.0, std::abs(out.cubic.x1));
  if (std::abs(out.cubic.x3) <= 1e-13 * scale * scale * scale) {
    // Rank-deficient sector. A zero root is peeled off and the remaining
    // quadratic solved directly; unlike the trigonometric form, this stays
    // accurate when the peeled root is (nearly) doubly degenerate.
    const double b = out.cubic.x1;
    const double q = out.cubic.x2;
    const double disc = std::max(0.0, b * b - 4.0 * q);
    const double r1 =
        b == 0.0 ? 0.0 : 0.5 * (-b - std::copysign(std::sqrt(disc), b));
    const double r2 = r1 != 0.0 ? q / r1 : 0.0;
    xi = {std::max(r1, r2), std::min(r1, r2), 0.0, 0.0};
  } else {
    try {
      const CubicRoots roots = solve_cubic_trig(out.cubic);
      out.phi = roots.phi;
      xi = {roots.mu[2], roots.mu[1], roots.mu[0], 0.0};
    } catch (const DegenerateDiscriminant&) {
      // all three nonzero eigenvalues coincide
      const double third = -out.cubic.x1 / 3.0;
      xi = {third, third, third, 0.0};
    }
  }
  out.xi = detail::clamp_probabilities(xi);
  // the mathematical value is nonnegative; keep roundoff out of the sign
  out.entropy = std::max(0.0, detail::shannon_nats(out.xi));
  return out;
}

// General spectrum via the self-contained Hermitian eigensolver; no
// structural assumption. Eigenvalues are clamped and renormalized to unit
// sum before the entropy is taken.
inline EntropyBreakdown entropy_eigen(const AtomDensityMatrix& r) {
  std::array<double, 4> ev = hermitian4_eigenvalues(r.rho);
  std::reverse(ev.begin(), ev.end());
  EntropyBreakdown out;
  out.xi = detail::clamp_probabilities(ev);
  double sum = out.xi[0] + out.xi[1] + out.xi[2] + out.xi[3];
  for (double& x : out.xi) x /= sum;
  out.entropy = detail::shannon_nats(out.xi);
  return out;
}

// I-concurrence of the pure atoms/fields split, from the reduced state of
// the four-dimensional side: C = sqrt(2 sum_{i!=j} (rho_ii rho_jj -
// |rho_ij|^2)), algebraically sqrt(2 (1 - Tr rho^2)) at unit trace.
// The radicand of a (near-)pure state cancels to the roundoff floor of the
// matrix entries; magnitudes inside the +-1e-12 dead band report as zero,
// and anything more negative is a caller bug.
inline double concurrence(const AtomDensityMatrix& r) {
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      acc += r(i, i).real() * r(j, j).real() - std::norm(r(i, j));
    }
  }
  const double radicand = 2.0 * acc;
  if (radicand < -1e-12)
    throw NegativeRadicand("concurrence: radicand " + detail::sci(radicand));
  if (radicand < 1e-12) return 0.0;
  return std::sqrt(radicand);
}

// Partial transpose with respect to the second atom.
inline AtomDensityMatrix partial_transpose_atom2(const AtomDensityMatrix& r) {
  AtomDensityMatrix pt;
  pt.trace_deficit = r.trace_deficit;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          pt.rho[(2 * a + b) * 4 + (2 * c + d)] =
              r.rho[(2 * a + d) * 4 + (2 * c + b)];
  return pt;
}

// Negativity of the two-atom state: twice the absolute sum of negative
// eigenvalues of the partial transpose; 0 for separable states, 1 for
// Bell states. This is the qubit-qubit case of the general d-dimensional
// normalization (trace-norm deficit over d - 1); higher d is out of scope.
inline double negativity(const AtomDensityMatrix& r) {
  const AtomDensityMatrix pt = partial_transpose_atom2(r);
  const std::array<double, 4> ev = hermitian4_eigenvalues(pt.rho);
  double neg = 0.0;
  for (double e : ev)
    if (e < 0.0) neg += e;
  return std::max(0.0, -2.0 * neg);
}

struct MeasureSample {
  double tau = 0.0;          // scaled time (coupling * t)
  double entropy = 0.0;      // nats
  double concurrence = 0.0;
  double negativity = 0.0;
  double norm_error = 0.0;   // raw trace deficit of the reduced state
};

inline MeasureSample measure_state(const JointState& st, double tau) {
  const AtomDensityMatrix rho = atom_density_matrix(st);
  MeasureSample m;
  m.tau = tau;
  m.entropy = entropy_cardano(rho).entropy;
  m.concurrence = concurrence(rho);
  m.negativity = negativity(rho);
  m.norm_error = rho.trace_deficit;
  return m;
}

}  // namespace cavqed
