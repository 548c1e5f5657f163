#pragma once

// Classical fourth-order Runge-Kutta reference integrator for the coupled
// per-block amplitude equations, in their general form (per-atom couplings
// and detunings). This is the brute-force check for every closed-form
// amplitude result.
//
// Integrating block by block is exact, not an approximation: the coupling
// moves one photon between the modes while flipping one atom, so both the
// total photon number (n1 + n2 + 2 within a block) and the mode-1 photon
// count net of atomic excitations (n1) are conserved, and the four states
// of a block never couple to any other block.
//
// Two equivalent right-hand sides are available: the literal one, with the
// diagonal Kerr shifts inside the equations, and a reparametrized one with
// the Kerr phases factored out analytically and restored on output. The
// latter removes the dominant oscillation frequency and is the only
// affordable option for strongly shifted high-photon blocks.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cavqed/amplitudes.hpp"
#include "cavqed/errors.hpp"
#include "cavqed/model.hpp"

namespace cavqed {

using amp4 = std::array<cplx, 4>;  // (A, B, C, D)

// Per-atom couplings and detunings of one block; f1 couples the doubly
// excited state to the single excitations, f2 those to the ground state.
struct GeneralBlock {
  std::array<double, 2> f1{};
  std::array<double, 2> f2{};
  double v1 = 0.0;
  double v2 = 0.0;
  double v3 = 0.0;
  std::array<double, 2> delta{};
};

inline GeneralBlock general_block(const ModelParams& p, const RotatedFrame& f,
                                  int n1, int n2) {
  if (n1 < 0 || n2 < 0)
    throw std::invalid_argument("general_block: negative Fock index");
  GeneralBlock g;
  const double e1 = std::sqrt(double(n1 + 2) * double(n2 + 1));
  const double e2 = std::sqrt(double(n1 + 1) * double(n2 + 2));
  g.f1 = {p.coupling1 * e1, p.coupling2 * e1};
  g.f2 = {p.coupling1 * e2, p.coupling2 * e2};
  const BlockCoefficients b = block_coefficients(n1, n2, 1.0, p.kerr);
  g.v1 = b.v1;
  g.v2 = b.v2;
  g.v3 = b.v3;
  g.delta = {f.detuning1, f.detuning2};
  return g;
}

struct OdeTrajectory {
  std::vector<double> times;
  std::vector<amp4> amps;
  double norm_drift = 0.0;  // max over grid points of | ||amps||^2 - ||amps(0)||^2 |
};

struct IntegratorOptions {
  double target_accuracy = 1e-10;  // endpoint agreement under step halving
  bool validate_steps = true;      // rerun at half step and compare endpoints
  bool factor_kerr_phase = false;  // integrate the Kerr-rotated variables
  int max_refinements = 6;
};

namespace detail {

// Four phase factors exp(i w t) advanced by per-step rotor multiplication;
// resynchronized from sin/cos periodically so accumulated roundoff stays
// far below the integration error.
struct PhaseSet {
  std::array<double, 4> w{};
  std::array<cplx, 4> z{}, rot_half{}, rot_full{};

  void prepare(double h) {
    for (int k = 0; k < 4; ++k) {
      rot_half[k] = std::polar(1.0, w[k] * 0.5 * h);
      rot_full[k] = std::polar(1.0, w[k] * h);
    }
  }
  void sync(double t) {
    for (int k = 0; k < 4; ++k) z[k] = std::polar(1.0, w[k] * t);
  }
  std::array<cplx, 4> at_half() const {
    return {z[0] * rot_half[0], z[1] * rot_half[1], z[2] * rot_half[2],
            z[3] * rot_half[3]};
  }
  std::array<cplx, 4> at_full() const {
    return {z[0] * rot_full[0], z[1] * rot_full[1], z[2] * rot_full[2],
            z[3] * rot_full[3]};
  }
  void advance() {
    for (int k = 0; k < 4; ++k) z[k] *= rot_full[k];
  }
};

// Literal right-hand side; phases are (e^{i d1 t}, e^{i d2 t}, ., .).
inline amp4 rhs_literal(const GeneralBlock& g, const std::array<cplx, 4>& p,
                        const amp4& y) {
  const cplx i1(0.0, 1.0);
  const cplx e1 = p[0], e2 = p[1];
  return {
      g.f1[1] * e2 * y[1] + g.f1[0] * e1 * y[2] - i1 * g.v1 * y[0],
      -g.f1[1] * std::conj(e2) * y[0] + g.f2[0] * e1 * y[3] - i1 * g.v2 * y[1],
      -g.f1[0] * std::conj(e1) * y[0] + g.f2[1] * e2 * y[3] - i1 * g.v2 * y[2],
      -g.f2[0] * std::conj(e1) * y[1] - g.f2[1] * std::conj(e2) * y[2] -
          i1 * g.v3 * y[3],
  };
}

// Kerr-rotated right-hand side for u_X = X e^{i vX t}; the four phase
// frequencies are (d2+v1-v2, d1+v1-v2, d1+v2-v3, d2+v2-v3).
inline amp4 rhs_rotated(const GeneralBlock& g, const std::array<cplx, 4>& p,
                        const amp4& y) {
  return {
      g.f1[1] * p[0] * y[1] + g.f1[0] * p[1] * y[2],
      -g.f1[1] * std::conj(p[0]) * y[0] + g.f2[0] * p[2] * y[3],
      -g.f1[0] * std::conj(p[1]) * y[0] + g.f2[1] * p[3] * y[3],
      -g.f2[0] * std::conj(p[2]) * y[1] - g.f2[1] * std::conj(p[3]) * y[2],
  };
}

template <typename Rhs>
inline void rk4_steps(const Rhs& rhs, const GeneralBlock& g, PhaseSet& ph,
                      amp4& y, double t0, double h, long n_steps) {
  ph.prepare(h);
  for (long j = 0; j < n_steps; ++j) {
    if ((j & 255) == 0) ph.sync(t0 + double(j) * h);
    const auto p0 = ph.z;
    const auto ph2 = ph.at_half();
    const auto p1 = ph.at_full();

    const amp4 k1 = rhs(g, p0, y);
    amp4 u;
    for (int c = 0; c < 4; ++c) u[c] = y[c] + 0.5 * h * k1[c];
    const amp4 k2 = rhs(g, ph2, u);
    for (int c = 0; c < 4; ++c) u[c] = y[c] + 0.5 * h * k2[c];
    const amp4 k3 = rhs(g, ph2, u);
    for (int c = 0; c < 4; ++c) u[c] = y[c] + h * k3[c];
    const amp4 k4 = rhs(g, p1, u);
    for (int c = 0; c < 4; ++c)
      y[c] += h / 6.0 * (k1[c] + 2.0 * (k2[c] + k3[c]) + k4[c]);
    ph.advance();
  }
}

inline double freq_scale(const GeneralBlock& g, bool literal) {
  const double fsq = 0.5 * (g.f1[0] * g.f1[0] + g.f1[1] * g.f1[1] +
                            g.f2[0] * g.f2[0] + g.f2[1] * g.f2[1]);
  double w = std::sqrt(2.0 * fsq) +
             2.0 * std::max(std::abs(g.delta[0]), std::abs(g.delta[1])) + 1.0;
  if (literal) {
    w += std::max({std::abs(g.v1), std::abs(g.v2), std::abs(g.v3)});
  } else {
    w += std::max(std::abs(g.v1 - g.v2), std::abs(g.v2 - g.v3));
  }
  return w;
}

}  // namespace detail

// One uninterrupted literal-equation sweep from t0 to t1 (t1 < t0 reverses
// time) with a fixed number of steps. Building block for integrate_block,
// exposed for time-reversal checks and boundary-ladder validation.
inline void rk4_literal_span(const GeneralBlock& g, amp4& y, double t0,
                             double t1, long n_steps) {
  detail::PhaseSet ph;
  ph.w = {g.delta[0], g.delta[1], 0.0, 0.0};
  ph.sync(t0);
  detail::rk4_steps(detail::rhs_literal, g, ph, y, t0,
                    (t1 - t0) / double(n_steps), n_steps);
}

namespace detail {

inline OdeTrajectory run_grid(const GeneralBlock& g, const amp4& y0,
                              std::span<const double> grid, double h_target,
                              bool factor_kerr) {
  OdeTrajectory traj;
  traj.times.assign(grid.begin(), grid.end());
  traj.amps.reserve(grid.size());

  PhaseSet ph;
  amp4 y = y0;
  if (factor_kerr) {
    ph.w = {g.delta[1] + g.v1 - g.v2, g.delta[0] + g.v1 - g.v2,
            g.delta[0] + g.v2 - g.v3, g.delta[1] + g.v2 - g.v3};
  } else {
    ph.w = {g.delta[0], g.delta[1], 0.0, 0.0};
  }

  const double norm0 = std::norm(y0[0]) + std::norm(y0[1]) + std::norm(y0[2]) +
                       std::norm(y0[3]);

  auto record = [&](double t) {
    amp4 out = y;
    if (factor_kerr) {
      out[0] *= std::polar(1.0, -g.v1 * t);
      out[1] *= std::polar(1.0, -g.v2 * t);
      out[2] *= std::polar(1.0, -g.v2 * t);
      out[3] *= std::polar(1.0, -g.v3 * t);
    }
    traj.amps.push_back(out);
    const double n = std::norm(y[0]) + std::norm(y[1]) + std::norm(y[2]) +
                     std::norm(y[3]);
    traj.norm_drift = std::max(traj.norm_drift, std::abs(n - norm0));
  };

  record(grid[0]);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double dt = grid[i + 1] - grid[i];
    const long n_sub = std::max(1L, (long)std::ceil(dt / h_target));
    ph.sync(grid[i]);
    if (factor_kerr) {
      rk4_steps(rhs_rotated, g, ph, y, grid[i], dt / double(n_sub), n_sub);
    } else {
      rk4_steps(rhs_literal, g, ph, y, grid[i], dt / double(n_sub), n_sub);
    }
    record(grid[i + 1]);
  }
  return traj;
}

}  // namespace detail

// Integrate one block over a strictly increasing grid starting at 0, from
// the initial state (cos(beta/2), 0, 0, sin(beta/2)). The step size is set
// from the block's frequency scale and the accuracy target; with
// validate_steps on, the integration is rerun at half step, the endpoints
// must agree to the target, and the finer run is returned.
inline OdeTrajectory integrate_block(const ModelParams& p, int n1, int n2,
                                     std::span<const double> t_grid,
                                     const IntegratorOptions& opt = {}) {
  if (t_grid.size() < 2 || t_grid[0] != 0.0)
    throw std::invalid_argument("integrate_block: grid must start at 0");
  for (std::size_t i = 0; i + 1 < t_grid.size(); ++i)
    if (!(t_grid[i] < t_grid[i + 1]))
      throw std::invalid_argument("integrate_block: grid not increasing");

  const RotatedFrame frame = rotated_frame(p);
  const GeneralBlock g = general_block(p, frame, n1, n2);
  const amp4 y0 = {cplx(std::cos(0.5 * p.beta)), 0.0, 0.0,
                   cplx(std::sin(0.5 * p.beta))};

  const double span = t_grid.back();
  const double w = detail::freq_scale(g, !opt.factor_kerr_phase);
  // Accumulated RK4 phase error is ~ span * w^5 * h^4 / 120.
  double h = 0.85 * std::pow(opt.target_accuracy * 120.0 /
                                 (std::max(span, 1e-6) * std::pow(w, 5)),
                             0.25);
  h = std::min(h, 1e-3);

  OdeTrajectory traj =
      detail::run_grid(g, y0, t_grid, h, opt.factor_kerr_phase);
  if (!opt.validate_steps) return traj;

  for (int attempt = 0; attempt <= opt.max_refinements; ++attempt) {
    OdeTrajectory fine =
        detail::run_grid(g, y0, t_grid, 0.5 * h, opt.factor_kerr_phase);
    double diff = 0.0;
    for (int c = 0; c < 4; ++c)
      diff = std::max(diff, std::abs(traj.amps.back()[c] - fine.amps.back()[c]));
    if (diff < opt.target_accuracy) return fine;
    traj = std::move(fine);
    h *= 0.5;
  }
  throw StepSizeFailure(
      "integrate_block: endpoint still moving after refinement budget "
      "(block " + std::to_string(n1) + "," + std::to_string(n2) + ")");
}

// Largest absolute difference, over grid points and amplitude components,
// between the closed-form block solution and a reference trajectory.
inline double compare_block(const BlockSolution& analytic,
                            const OdeTrajectory& numeric,
                            std::span<const double> expected_grid) {
  if (numeric.times.size() != expected_grid.size())
    throw GridMismatch("compare_block: grids differ in length");
  for (std::size_t i = 0; i < expected_grid.size(); ++i)
    if (std::abs(numeric.times[i] - expected_grid[i]) >
        1e-12 * std::max(1.0, std::abs(expected_grid[i])))
      throw GridMismatch("compare_block: grids differ at index " +
                         std::to_string(i));

  double dev = 0.0;
  for (std::size_t i = 0; i < numeric.times.size(); ++i) {
    const BlockAmplitudes a = amplitudes_at(analytic, numeric.times[i]);
    dev = std::max(dev, std::abs(a.a - numeric.amps[i][0]));
    dev = std::max(dev, std::abs(a.b - numeric.amps[i][1]));
    dev = std::max(dev, std::abs(a.b - numeric.amps[i][2]));
    dev = std::max(dev, std::abs(a.d - numeric.amps[i][3]));
  }
  return dev;
}

}  // namespace cavqed
