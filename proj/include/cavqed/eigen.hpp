#pragma once

// Self-contained cyclic Jacobi eigensolver for small real symmetric
// matrices, and the real-symmetric embedding that yields the spectrum of a
// 4x4 Hermitian matrix.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace cavqed {

using cplx = std::complex<double>;

// Eigenvalues of a row-major NxN real symmetric matrix, ascending. The
// input is taken by value and destroyed during the sweeps.
template <int N>
inline std::array<double, N> jacobi_eigenvalues(std::array<double, N * N> a) {
  constexpr int max_sweeps = 60;
  double frob = 0.0;
  for (double x : a) frob += x * x;
  const double stop = 1e-30 * std::max(1.0, frob);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < N; ++p)
      for (int q = p + 1; q < N; ++q) off += a[p * N + q] * a[p * N + q];
    if (off < stop) break;

    for (int p = 0; p < N; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const double apq = a[p * N + q];
        if (apq == 0.0) continue;
        const double theta = 0.5 * (a[q * N + q] - a[p * N + p]) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double shift = t * apq;
        a[p * N + p] -= shift;
        a[q * N + q] += shift;
        a[p * N + q] = 0.0;
        a[q * N + p] = 0.0;
        for (int r = 0; r < N; ++r) {
          if (r == p || r == q) continue;
          const double arp = a[r * N + p];
          const double arq = a[r * N + q];
          a[r * N + p] = arp - s * (arq + tau * arp);
          a[p * N + r] = a[r * N + p];
          a[r * N + q] = arq + s * (arp - tau * arq);
          a[q * N + r] = a[r * N + q];
        }
      }
    }
  }

  std::array<double, N> ev;
  for (int i = 0; i < N; ++i) ev[i] = a[i * N + i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Spectrum of a 4x4 Hermitian matrix (row-major), ascending. Uses the 8x8
// real-symmetric embedding [[X, -Y], [Y, X]] of H = X + iY, whose spectrum
// is that of H with every eigenvalue doubled.
inline std::array<double, 4> hermitian4_eigenvalues(
    const std::array<cplx, 16>& h) {
  std::array<double, 64> e{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double x = h[i * 4 + j].real();
      const double y = h[i * 4 + j].imag();
      e[i * 8 + j] = x;
      e[(i + 4) * 8 + (j + 4)] = x;
      e[(i + 4) * 8 + j] = y;
      e[i * 8 + (j + 4)] = -y;
    }
  }
  const std::array<double, 8> all = jacobi_eigenvalues<8>(e);
  return {all[0], all[2], all[4], all[6]};
}

}  // namespace cavqed
