#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "cavqed/state.hpp"

using namespace cavqed;

namespace {

constexpr double pi = std::numbers::pi;

ModelParams small_params(double beta, double chi = 0.0, double delta = 0.0) {
  ModelParams p;
  p.mode_freq1 = 9.0;
  p.mode_freq2 = 10.0;
  p.mode_coupling = 0.0;
  p.atom_freq1 = p.atom_freq2 = 1.0 + delta;
  p.kerr = chi;
  p.beta = beta;
  p.alpha1 = p.alpha2 = 2.0;  // mean photon number 4
  p.n_max = 22;
  p.tail_tol = 1e-8;
  return p;
}

// Poisson tail beyond n_max, summed directly from the pmf.
double poisson_tail(double mean, int n_max) {
  double tail = 0.0;
  for (int n = n_max + 1; n < n_max + 400; ++n) {
    tail += std::exp(n * std::log(mean) - mean - std::lgamma(double(n) + 1.0));
  }
  return tail;
}

}  // namespace

TEST_CASE("coherent weights: vacuum") {
  const CoherentWeights w = coherent_weights(0.0, 5, 1e-12);
  CHECK(w.q[0] == cplx(1.0));
  for (int n = 1; n <= 5; ++n) CHECK(std::abs(w.q[n]) == 0.0);
  CHECK(std::abs(w.tail_mass) < 1e-15);
}

TEST_CASE("coherent weights: Poisson mean and tail at mean photon number 10") {
  const CoherentWeights w = coherent_weights(std::sqrt(10.0), 40, 1e-8);
  double mean = 0.0;
  for (int n = 0; n <= 40; ++n) mean += n * std::norm(w.q[n]);
  CHECK(std::abs(mean - 10.0) < 1e-6);
  CHECK(w.tail_mass < 1e-8);
  CHECK(std::abs(w.tail_mass - poisson_tail(10.0, 40)) < 1e-12);
}

TEST_CASE("coherent weights: too small a truncation is rejected") {
  CHECK_THROWS_AS(coherent_weights(std::sqrt(10.0), 5, 1e-8),
                  TruncationTooSmall);
}

TEST_CASE("assembled state at t = 0 is the exact product state") {
  const ModelParams p = small_params(pi / 3);
  const StateSolver s = make_state_solver(p);
  const JointState st = assemble_state(s, 0.0);

  const double ce = std::cos(p.beta / 2);
  const double sg = std::sin(p.beta / 2);
  // both branches carry the same truncated field product
  for (int m1 = 0; m1 < st.dim; ++m1)
    for (int m2 = 0; m2 < st.dim; ++m2) {
      const cplx q = (m1 <= p.n_max && m2 <= p.n_max)
                         ? s.w1.q[m1] * s.w2.q[m2]
                         : cplx(0.0);
      CHECK(std::abs(st.at(0, m1, m2) - ce * q) < 1e-14);
      CHECK(std::abs(st.at(3, m1, m2) - sg * q) < 1e-14);
      // no single excitations yet
      CHECK(std::abs(st.at(1, m1, m2)) < 1e-15);
      CHECK(std::abs(st.at(2, m1, m2)) < 1e-15);
    }
}

TEST_CASE("state norm matches the captured product mass at any time") {
  const ModelParams p = small_params(pi / 4, 0.3, 2.0);
  const StateSolver s = make_state_solver(p);
  for (double t : {0.0, 0.7, 3.3, 11.0, 30.0}) {
    const JointState st = assemble_state(s, t);
    CHECK(std::abs(st.norm - (1.0 - st.truncated_mass)) < 10.0 * p.tail_tol);
    CHECK(std::abs(st.norm - (1.0 - st.truncated_mass)) < 1e-12);
    // the two single-excitation sheets stay identical
    for (std::size_t m = 0; m < st.amp[1].size(); ++m)
      CHECK(std::abs(st.amp[1][m] - st.amp[2][m]) == 0.0);
  }
}

TEST_CASE("reduced density matrix at t = 0") {
  {
    const StateSolver s = make_state_solver(small_params(0.0));
    const AtomDensityMatrix r = atom_density_matrix(assemble_state(s, 0.0));
    CHECK(std::abs(r(0, 0) - cplx(1.0)) < 1e-12);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        if (i || j) CHECK(std::abs(r(i, j)) < 1e-12);
  }
  {
    // The two branches carry slightly different truncation windows, so the
    // off-diagonal coherence is exact only up to the far Poisson tail.
    const StateSolver s = make_state_solver(small_params(pi / 2));
    const AtomDensityMatrix r = atom_density_matrix(assemble_state(s, 0.0));
    CHECK(std::abs(r(0, 0) - cplx(0.5)) < 1e-10);
    CHECK(std::abs(r(3, 3) - cplx(0.5)) < 1e-10);
    CHECK(std::abs(r(0, 3) - cplx(0.5)) < 1e-10);
    CHECK(std::abs(r(3, 0) - cplx(0.5)) < 1e-10);
    CHECK(std::abs(r(1, 1)) < 1e-12);
    CHECK(std::abs(r(2, 2)) < 1e-12);
  }
}

TEST_CASE("density matrix invariants and a second reduction") {
  const ModelParams p = small_params(pi / 3, 0.2, 1.0);
  const StateSolver s = make_state_solver(p);
  const JointState st = assemble_state(s, 5.5);
  const AtomDensityMatrix r = atom_density_matrix(st);

  // Hermitian, unit trace after normalization, raw trace = state norm
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(std::abs(r(i, j) - std::conj(r(j, i))) < 1e-12);
  cplx tr = 0.0;
  for (int i = 0; i < 4; ++i) tr += r(i, i);
  CHECK(std::abs(tr - cplx(1.0)) < 1e-12);
  CHECK(std::abs((1.0 - r.trace_deficit) - st.norm) < 1e-12);
  // identical atoms: rows 2 and 3 coincide
  for (int j = 0; j < 4; ++j) CHECK(std::abs(r(1, j) - r(2, j)) < 1e-12);

  // independent reduction: accumulate row-by-row over explicit indices
  std::array<cplx, 16> ref{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx acc = 0.0;
      for (int m1 = 0; m1 < st.dim; ++m1)
        for (int m2 = 0; m2 < st.dim; ++m2)
          acc += st.at(i, m1, m2) * std::conj(st.at(j, m1, m2));
      ref[i * 4 + j] = acc / st.norm;
    }
  for (int k = 0; k < 16; ++k) CHECK(std::abs(r.rho[k] - ref[k]) < 1e-12);
}

TEST_CASE("overlap-matrix spectrum equals the reduced-state spectrum") {
  const ModelParams p = small_params(pi / 5, 0.4, 3.0);
  const StateSolver s = make_state_solver(p);
  for (double t : {0.0, 1.3, 7.7, 19.0}) {
    const JointState st = assemble_state(s, t);
    const std::array<double, 4> gram = atom_gram_eigenvalues(st);
    const std::array<double, 4> rho =
        hermitian4_eigenvalues(atom_density_matrix(st).rho);
    // gram is descending, rho ascending
    for (int k = 0; k < 4; ++k)
      CHECK(std::abs(gram[k] - rho[3 - k]) < 1e-9);
    // product state: one unit coefficient; identical atoms: one exact zero
    if (t == 0.0) CHECK(gram[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(gram[3]) < 1e-10);
  }
}
