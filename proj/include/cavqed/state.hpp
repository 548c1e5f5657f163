#pragma once

// Assembly of the full two-atom/two-mode state from coherent-state weights
// and per-block closed-form amplitudes, and its reduction to the two-atom
// density matrix.

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "cavqed/amplitudes.hpp"
#include "cavqed/eigen.hpp"
#include "cavqed/errors.hpp"
#include "cavqed/model.hpp"

namespace cavqed {

struct CoherentWeights {
  cplx alpha{};
  std::vector<cplx> q;      // q[n] for n = 0..n_max
  double tail_mass = 0.0;   // 1 - sum |q_n|^2 over the stored range
};

// Poissonian amplitudes via the stable recurrence q_{n+1} = q_n a/sqrt(n+1).
inline CoherentWeights coherent_weights(cplx alpha, int n_max,
                                        double tail_tol) {
  if (n_max < 1) throw std::invalid_argument("coherent_weights: n_max < 1");
  CoherentWeights w;
  w.alpha = alpha;
  w.q.resize(n_max + 1);
  w.q[0] = std::exp(-0.5 * std::norm(alpha));
  double captured = std::norm(w.q[0]);
  for (int n = 0; n < n_max; ++n) {
    w.q[n + 1] = w.q[n] * alpha / std::sqrt(double(n + 1));
    captured += std::norm(w.q[n + 1]);
  }
  w.tail_mass = 1.0 - captured;
  if (w.tail_mass > tail_tol) {
    throw TruncationTooSmall("coherent_weights: tail mass " +
                             std::to_string(w.tail_mass) + " exceeds " +
                             std::to_string(tail_tol) + "; raise n_max");
  }
  return w;
}

// Atomic basis order used everywhere: 0 |e1,e2>, 1 |e1,g2>, 2 |g1,e2>,
// 3 |g1,g2>. External formats number these 1..4.
struct JointState {
  double time = 0.0;  // in units of 1/coupling
  int dim = 0;        // Fock cells per mode; valid indices 0..dim-1
  std::array<std::vector<cplx>, 4> amp;
  double norm = 0.0;
  double truncated_mass = 0.0;  // product-state mass outside the stored cells

  cplx& at(int atom, int m1, int m2) { return amp[atom][m1 * dim + m2]; }
  const cplx& at(int atom, int m1, int m2) const {
    return amp[atom][m1 * dim + m2];
  }
};

// Closed-form solutions for every complete block, for the two basis
// initial conditions: "excited" starts from (1,0,0,0), "ground" from
// (0,0,0,1). Any atomic superposition is a linear combination of the two.
struct BlockTable {
  int n_max = 0;
  std::vector<BlockSolution> excited;
  std::vector<BlockSolution> ground;

  const BlockSolution& e(int n1, int n2) const {
    return excited[n1 * (n_max + 1) + n2];
  }
  const BlockSolution& g(int n1, int n2) const {
    return ground[n1 * (n_max + 1) + n2];
  }
};

inline BlockTable build_block_table(const ModelParams& p,
                                    const RotatedFrame& f) {
  if (!p.identical_atoms() || f.detuning1 != f.detuning2)
    throw std::invalid_argument(
        "build_block_table: closed-form path requires identical atoms");
  BlockTable t;
  t.n_max = p.n_max;
  const int side = p.n_max + 1;
  t.excited.reserve(side * side);
  t.ground.reserve(side * side);
  constexpr double pi = std::numbers::pi;
  for (int n1 = 0; n1 < side; ++n1) {
    for (int n2 = 0; n2 < side; ++n2) {
      try {
        const BlockCoefficients b =
            block_coefficients(n1, n2, p.coupling1, p.kerr);
        t.excited.push_back(solve_block(b, f.detuning1, 0.0));
        t.ground.push_back(solve_block(b, f.detuning1, pi));
      } catch (const Error& e) {
        throw Error("block (" + std::to_string(n1) + "," +
                    std::to_string(n2) + "): " + e.what());
      }
    }
  }
  return t;
}

// Bundle of everything needed to evaluate |psi(t)| repeatedly.
struct StateSolver {
  ModelParams params;
  RotatedFrame frame;
  CoherentWeights w1, w2;
  BlockTable table;
};

inline StateSolver make_state_solver(const ModelParams& p) {
  p.validate();
  StateSolver s;
  s.params = p;
  s.frame = rotated_frame(p);
  s.w1 = coherent_weights(p.alpha1, p.n_max, p.tail_tol);
  s.w2 = coherent_weights(p.alpha2, p.n_max, p.tail_tol);
  s.table = build_block_table(p, s.frame);
  return s;
}

// The state at time t from the exact product initial condition
// (cos(beta/2)|e,e> + sin(beta/2)|g,g>) (x) |alpha1> (x) |alpha2>, with
// both field factors truncated to the same window 0..n_max per mode; the
// shared window keeps the initial state an exact product, which the
// measures rely on. Complete blocks are combined from the two basis
// solutions with their branch coherent weights; the one-sided ladders at
// the Fock boundary and the stationary kets evolve by their own closed
// forms.
inline JointState assemble_state(const StateSolver& s, double t) {
  const ModelParams& p = s.params;
  const double delta = s.frame.detuning1;
  const double lam = p.coupling1;
  const double ce = std::cos(0.5 * p.beta);
  const double sg = std::sin(0.5 * p.beta);
  const auto& q1 = s.w1.q;
  const auto& q2 = s.w2.q;

  JointState st;
  st.time = t;
  st.dim = p.n_max + 3;
  for (auto& v : st.amp) v.assign(std::size_t(st.dim) * st.dim, cplx(0.0));

  for (int n1 = 0; n1 <= p.n_max; ++n1) {
    for (int n2 = 0; n2 <= p.n_max; ++n2) {
      const cplx we =
          n1 + 2 <= p.n_max ? cplx(ce * q1[n1 + 2] * q2[n2]) : cplx(0.0);
      const cplx wg =
          n2 + 2 <= p.n_max ? cplx(sg * q1[n1] * q2[n2 + 2]) : cplx(0.0);
      if (we == cplx(0.0) && wg == cplx(0.0)) continue;
      const BlockAmplitudes ae = amplitudes_at(s.table.e(n1, n2), t);
      const BlockAmplitudes ag = amplitudes_at(s.table.g(n1, n2), t);
      st.at(0, n1 + 2, n2) = we * ae.a + wg * ag.a;
      const cplx mid = we * ae.b + wg * ag.b;
      st.at(1, n1 + 1, n2 + 1) = mid;
      st.at(2, n1 + 1, n2 + 1) = mid;
      st.at(3, n1, n2 + 2) = we * ae.d + wg * ag.d;
    }
  }

  // Boundary ladders and stationary kets. A ket with total photon number M
  // carries the Kerr phase kerr*M*(M-1).
  for (int k = 0; k <= p.n_max; ++k) {
    const double shift = p.kerr * double(k + 1) * k;
    {
      const cplx a0 = ce * q1[1] * q2[k];
      const EdgeAmplitudes ea =
          edge_excited_at(lam * std::sqrt(double(k + 1)), delta, shift, a0, t);
      st.at(0, 1, k) = ea.end;
      st.at(1, 0, k + 1) += ea.mid;
      st.at(2, 0, k + 1) += ea.mid;
    }
    {
      const cplx d0 = sg * q1[k] * q2[1];
      const EdgeAmplitudes eg =
          edge_ground_at(lam * std::sqrt(double(k + 1)), delta, shift, d0, t);
      st.at(3, k, 1) = eg.end;
      st.at(1, k + 1, 0) += eg.mid;
      st.at(2, k + 1, 0) += eg.mid;
    }
    const double dark = p.kerr * double(k) * (k - 1);
    st.at(0, 0, k) = ce * q1[0] * q2[k] * std::polar(1.0, -dark * t);
    st.at(3, k, 0) = sg * q1[k] * q2[0] * std::polar(1.0, -dark * t);
  }

  double norm = 0.0;
  for (const auto& v : st.amp)
    for (const cplx& z : v) norm += std::norm(z);
  st.norm = norm;

  // Captured product-state mass: both branches span the same window, so
  // the captured fraction is the product of the per-mode partial sums.
  st.truncated_mass = 1.0 - (1.0 - s.w1.tail_mass) * (1.0 - s.w2.tail_mass);
  return st;
}

// 4x4 two-atom density matrix, basis (|e1e2>, |e1g2>, |g1e2>, |g1g2>),
// normalized by its own trace; the raw trace deficit is kept alongside.
struct AtomDensityMatrix {
  std::array<cplx, 16> rho{};
  double trace_deficit = 0.0;  // 1 - trace before normalization

  cplx operator()(int i, int j) const { return rho[i * 4 + j]; }
};

inline AtomDensityMatrix atom_density_matrix(const JointState& st) {
  std::array<cplx, 16> acc{};
  const std::size_t cells = st.amp[0].size();
  for (std::size_t m = 0; m < cells; ++m) {
    const cplx psi[4] = {st.amp[0][m], st.amp[1][m], st.amp[2][m],
                         st.amp[3][m]};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) acc[i * 4 + j] += psi[i] * std::conj(psi[j]);
  }
  double trace = 0.0;
  for (int i = 0; i < 4; ++i) trace += acc[i * 4 + i].real();
  AtomDensityMatrix out;
  out.trace_deficit = 1.0 - trace;
  for (int k = 0; k < 16; ++k) out.rho[k] = acc[k] / trace;
  return out;
}

// Squared Schmidt coefficients of the atoms/fields split, descending:
// the spectrum of the overlap matrix of the four conditional field
// vectors. Equals the spectrum of the reduced field state, hence of
// atom_density_matrix, but computed from per-pair overlaps.
inline std::array<double, 4> atom_gram_eigenvalues(const JointState& st) {
  std::array<cplx, 16> gram{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      cplx dot = 0.0;
      const auto& vi = st.amp[i];
      const auto& vj = st.amp[j];
      for (std::size_t m = 0; m < vi.size(); ++m)
        dot += vi[m] * std::conj(vj[m]);
      gram[i * 4 + j] = dot;
      gram[j * 4 + i] = std::conj(dot);
    }
  }
  double trace = 0.0;
  for (int i = 0; i < 4; ++i) trace += gram[i * 4 + i].real();
  for (cplx& z : gram) z /= trace;
  std::array<double, 4> ev = hermitian4_eigenvalues(gram);
  std::reverse(ev.begin(), ev.end());
  return ev;
}

}  // namespace cavqed
