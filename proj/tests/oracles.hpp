#pragma once

// Test-only reference computations, independent of the library's numerical paths.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "harvest/cavity.hpp"
#include "harvest/gaussian.hpp"

namespace oracle {

using harvest::Matrix;

inline Matrix omega(int modes) {
  Matrix w = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    w(2 * k, 2 * k + 1) = 1.0;
    w(2 * k + 1, 2 * k) = -1.0;
  }
  return w;
}

/// exp(m) by Taylor series with repeated halving; for moderate norms only.
inline Matrix expm_series(const Matrix& m) {
  int halvings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.25) {
    norm /= 2.0;
    ++halvings;
  }
  const Matrix a = m / std::ldexp(1.0, halvings);
  Matrix term = Matrix::Identity(m.rows(), m.cols());
  Matrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = (term * a / static_cast<double>(k)).eval();
    sum += term;
  }
  for (int k = 0; k < halvings; ++k) sum = (sum * sum).eval();
  return sum;
}

/// Random symplectic matrix exp(Omega H) with H symmetric of entries ~ scale.
inline Matrix random_symplectic(int modes, std::mt19937_64& rng, double scale = 0.5) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix h(2 * modes, 2 * modes);
  for (int i = 0; i < h.rows(); ++i) {
    for (int j = 0; j <= i; ++j) h(i, j) = h(j, i) = g(rng);
  }
  return expm_series(omega(modes) * h);
}

/// Random physical covariance matrix S diag(nu) S^T with nu_k in [1, 1 + thermal].
inline Matrix random_physical(int modes, std::mt19937_64& rng, double thermal = 1.0) {
  std::uniform_real_distribution<double> u(0.0, thermal);
  Eigen::VectorXd d(2 * modes);
  for (int k = 0; k < modes; ++k) d(2 * k) = d(2 * k + 1) = 1.0 + u(rng);
  const Matrix s = random_symplectic(modes, rng);
  Matrix cov = s * d.asDiagonal() * s.transpose();
  return 0.5 * (cov + cov.transpose());
}

/// Coupling matrix from the complex mode expansion of phi(x): with a = (q + ip)/sqrt2,
/// c a + conj(c) a^dag = sqrt2 (Re c q - Im c p), and d + d^dag = sqrt2 q_d.
inline Matrix coupling_from_expansion(const harvest::CavitySpec& cavity, const std::vector<double>& positions) {
  const int d = static_cast<int>(positions.size());
  std::vector<int> modes;
  if (cavity.boundary == harvest::Boundary::Periodic) {
    for (int n = -cavity.cutoff / 2; n <= cavity.cutoff / 2; ++n) {
      if (n != 0) modes.push_back(n);
    }
  } else {
    for (int n = 1; n <= cavity.cutoff; ++n) modes.push_back(n);
  }
  Matrix x = Matrix::Zero(2 * d, 2 * static_cast<int>(modes.size()));
  for (int j = 0; j < d; ++j) {
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const int n = modes[m];
      std::complex<double> c;
      if (cavity.boundary == harvest::Boundary::Periodic) {
        const double k = 2.0 * std::numbers::pi * n / cavity.length;
        c = std::polar(1.0, k * positions[j]) / std::sqrt(4.0 * std::numbers::pi * std::abs(n));
      } else {
        const double k = std::numbers::pi * n / cavity.length;
        c = std::sin(k * positions[j]) / std::sqrt(std::numbers::pi * n);
      }
      // H_int = lambda * sqrt2 q_d * sqrt2 (Re c q_n - Im c p_n); F^sym cross entry = coefficient.
      x(2 * j, 2 * m) = c.real();
      x(2 * j, 2 * m + 1) = -c.imag();
    }
  }
  return x;
}

/// First `rows` rows of exp(A t) by classical RK4 on Y' = A^T Y, Y(0) = E^T.
inline Matrix rk4_rows(const Matrix& a, double t, int rows, int steps) {
  const Matrix at = a.transpose();
  Matrix y = Matrix::Identity(a.rows(), a.cols()).leftCols(rows);
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const Matrix k1 = at * y;
    const Matrix k2 = at * (y + 0.5 * h * k1);
    const Matrix k3 = at * (y + 0.5 * h * k2);
    const Matrix k4 = at * (y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y.transpose();
}

/// Detector covariance matrix via RK4 integration of dS/dt = Omega F S.
inline Matrix rk4_detector_cov(const harvest::CavitySpec& cavity, const harvest::DetectorArraySpec& det, double t, int steps) {
  const harvest::QuadraticForm f = harvest::build_f_total(cavity, det);
  const Matrix a = omega(f.dim() / 2) * f.f_sym;
  const Matrix r = rk4_rows(a, t, 2 * det.count(), steps);
  return r * r.transpose();
}

/// Logarithmic negativity of the two-mode squeezed vacuum from its Fock expansion
/// truncated at `cutoff` photons: partial transpose of the density matrix, then
/// log2 of the trace norm.
inline double tmsv_fock_log_negativity(double r, int cutoff) {
  const int dim = cutoff + 1;
  std::vector<double> c(dim);
  double norm = 0.0;
  for (int n = 0; n < dim; ++n) {
    c[n] = std::pow(std::tanh(r), n) / std::cosh(r);
    norm += c[n] * c[n];
  }
  for (auto& v : c) v /= std::sqrt(norm);
  // rho = sum c_n c_m |n n><m m|; PT on B: |n m><m n|.
  Matrix pt = Matrix::Zero(dim * dim, dim * dim);
  for (int n = 0; n < dim; ++n) {
    for (int m = 0; m < dim; ++m) pt(n * dim + m, m * dim + n) += c[n] * c[m];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt);
  return std::log2(es.eigenvalues().cwiseAbs().sum());
}

}  // namespace oracle
