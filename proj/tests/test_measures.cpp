#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "cavqed/measures.hpp"
#include "cavqed/state.hpp"

using namespace cavqed;

namespace {

constexpr double pi = std::numbers::pi;

AtomDensityMatrix from_entries(const std::array<cplx, 16>& m) {
  AtomDensityMatrix r;
  r.rho = m;
  return r;
}

AtomDensityMatrix diag(double a, double b, double c, double d) {
  std::array<cplx, 16> m{};
  m[0] = a;
  m[5] = b;
  m[10] = c;
  m[15] = d;
  return from_entries(m);
}

// random Hermitian PSD with unit trace
AtomDensityMatrix random_state(std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::array<cplx, 16> a{};
  for (auto& z : a) z = cplx(g(rng), g(rng));
  std::array<cplx, 16> m{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < 4; ++k) acc += a[i * 4 + k] * std::conj(a[j * 4 + k]);
      m[i * 4 + j] = acc;
    }
  double tr = 0.0;
  for (int i = 0; i < 4; ++i) tr += m[i * 4 + i].real();
  for (auto& z : m) z /= tr;
  return from_entries(m);
}

// random unit-trace PSD with the identical-atom structure: built from
// vectors whose two middle components are equal
AtomDensityMatrix random_symmetric_state(std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::array<cplx, 16> m{};
  for (int pure = 0; pure < 3; ++pure) {
    std::array<cplx, 4> v{cplx(g(rng), g(rng)), 0.0, 0.0, cplx(g(rng), g(rng))};
    v[1] = v[2] = cplx(g(rng), g(rng));
    const double wgt = 0.2 + 0.3 * pure;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i * 4 + j] += wgt * v[i] * std::conj(v[j]);
  }
  double tr = 0.0;
  for (int i = 0; i < 4; ++i) tr += m[i * 4 + i].real();
  for (auto& z : m) z /= tr;
  return from_entries(m);
}

double purity(const AtomDensityMatrix& r) {
  double acc = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) acc += std::norm(r(i, j));
  return acc;
}

}  // namespace

TEST_CASE("closed-form entropy: pure and uniform rank-3 states") {
  CHECK(entropy_cardano(diag(1, 0, 0, 0)).entropy == doctest::Approx(0.0).epsilon(1e-12));

  // eigenvalues {1/3, 1/3, 1/3, 0}: the cubic is fully degenerate
  std::array<cplx, 16> m{};
  m[0] = 1.0 / 3;
  m[5] = m[6] = m[9] = m[10] = (1.0 / 3) / 2;
  m[15] = 1.0 / 3;
  const EntropyBreakdown e = entropy_cardano(from_entries(m));
  CHECK(e.entropy == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(e.xi[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(e.xi[3] == 0.0);
}

TEST_CASE("closed-form entropy rejects asymmetric matrices") {
  CHECK_THROWS_AS(entropy_cardano(diag(0.25, 0.25, 0.25, 0.25)),
                  StructureViolation);
  CHECK_THROWS_AS(entropy_cardano(diag(0.5, 0.5, 0.0, 0.0)),
                  StructureViolation);
}

TEST_CASE("general entropy: frozen spectra") {
  CHECK(entropy_eigen(diag(0.25, 0.25, 0.25, 0.25)).entropy ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(entropy_eigen(diag(0.5, 0.5, 0.0, 0.0)).entropy ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(entropy_eigen(diag(1, 0, 0, 0)).entropy ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("eigensolver spectra satisfy the trace-power identities") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const AtomDensityMatrix r = random_state(rng);
    const std::array<double, 4> xi = entropy_eigen(r).xi;

    // traces of powers computed without any eigendecomposition
    std::array<cplx, 16> p1 = r.rho, p2{}, p3{}, p4{};
    auto mul = [](const std::array<cplx, 16>& x, const std::array<cplx, 16>& y) {
      std::array<cplx, 16> out{};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          for (int k = 0; k < 4; ++k)
            out[i * 4 + j] += x[i * 4 + k] * y[k * 4 + j];
      return out;
    };
    p2 = mul(p1, p1);
    p3 = mul(p2, p1);
    p4 = mul(p2, p2);
    auto tr = [](const std::array<cplx, 16>& x) {
      double acc = 0.0;
      for (int i = 0; i < 4; ++i) acc += x[i * 4 + i].real();
      return acc;
    };
    for (int power = 1; power <= 4; ++power) {
      const std::array<cplx, 16>* mats[] = {&p1, &p2, &p3, &p4};
      double sum = 0.0;
      for (double x : xi) sum += std::pow(x, power);
      CHECK(std::abs(sum - tr(*mats[power - 1])) < 1e-9);
    }
  }
}

TEST_CASE("both entropy routes agree on symmetric mixed states") {
  std::mt19937 rng(15);
  for (int trial = 0; trial < 300; ++trial) {
    const AtomDensityMatrix r = random_symmetric_state(rng);
    const EntropyBreakdown a = entropy_cardano(r);
    const EntropyBreakdown b = entropy_eigen(r);
    CHECK(std::abs(a.entropy - b.entropy) < 1e-9);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(a.xi[k] - b.xi[k]) < 1e-9);
    CHECK(std::abs(a.xi[3]) < 1e-10);
    CHECK(a.entropy <= std::log(3.0) + 1e-9);
  }
}

TEST_CASE("concurrence: frozen values and the purity identity") {
  CHECK(concurrence(diag(1, 0, 0, 0)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(concurrence(diag(0.25, 0.25, 0.25, 0.25)) ==
        doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));

  std::mt19937 rng(44);
  for (int trial = 0; trial < 300; ++trial) {
    const AtomDensityMatrix r = random_state(rng);
    const double c = concurrence(r);
    CHECK(std::abs(c * c - 2.0 * (1.0 - purity(r))) < 1e-12);
    CHECK(c >= 0.0);
    CHECK(c <= std::sqrt(1.5) + 1e-9);
  }
}

TEST_CASE("negativity: frozen two-qubit values") {
  // product
  CHECK(negativity(diag(1, 0, 0, 0)) == doctest::Approx(0.0).epsilon(1e-12));

  // cos(b/2)|ee> + sin(b/2)|gg> has negativity sin(b)
  for (double beta : {0.0, pi / 4, pi / 2, 3 * pi / 4, pi}) {
    const double ce = std::cos(beta / 2), sg = std::sin(beta / 2);
    std::array<cplx, 16> m{};
    m[0] = ce * ce;
    m[3] = ce * sg;
    m[12] = ce * sg;
    m[15] = sg * sg;
    CHECK(negativity(from_entries(m)) ==
          doctest::Approx(std::sin(beta)).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("partial transpose keeps the trace and the eigenvalue identity") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const AtomDensityMatrix r = random_state(rng);
    const AtomDensityMatrix pt = partial_transpose_atom2(r);
    cplx tr = 0.0;
    for (int i = 0; i < 4; ++i) tr += pt(i, i);
    CHECK(std::abs(tr - cplx(1.0)) < 1e-12);

    // trace norm = 1 - 2 * (sum of negative eigenvalues)
    const std::array<double, 4> ev = hermitian4_eigenvalues(pt.rho);
    double abs_sum = 0.0, neg_sum = 0.0;
    for (double e : ev) {
      abs_sum += std::abs(e);
      if (e < 0.0) neg_sum += e;
    }
    CHECK(std::abs(abs_sum - (1.0 - 2.0 * neg_sum)) < 1e-10);
    const double n = negativity(r);
    CHECK(n >= 0.0);
    CHECK(n <= 1.0 + 1e-9);
  }
}

TEST_CASE("negative eigenvalues beyond roundoff are rejected") {
  CHECK_THROWS_AS(entropy_eigen(diag(1.1, 0.2, -0.3, 0.0)),
                  NegativeEigenvalue);
  CHECK_THROWS_AS(concurrence(diag(2.0, -0.4, -0.3, -0.3)), NegativeRadicand);
}

TEST_CASE("measures of the assembled state: zero-time closed forms") {
  for (double beta : {0.0, pi / 4, pi / 2, 3 * pi / 4, pi}) {
    ModelParams p;
    p.mode_freq1 = 9.0;
    p.mode_freq2 = 10.0;
    p.atom_freq1 = p.atom_freq2 = 1.0;
    p.beta = beta;
    p.alpha1 = p.alpha2 = 2.0;
    p.n_max = 22;
    const StateSolver s = make_state_solver(p);
    const MeasureSample m = measure_state(assemble_state(s, 0.0), 0.0);
    CHECK(std::abs(m.entropy) < 1e-9);
    CHECK(std::abs(m.concurrence) < 1e-9);
    CHECK(std::abs(m.negativity - std::sin(beta)) < 1e-9);
  }
}
