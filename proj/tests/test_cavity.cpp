#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "harvest/cavity.hpp"
#include "harvest/errors.hpp"
#include "oracles.hpp"

using namespace harvest;

namespace {

DetectorArraySpec detectors_at(std::vector<double> x, double omega = 2.0, double coupling = 0.01) {
  return {std::move(x), omega, coupling};
}

}  // namespace

TEST_CASE("mode wavenumbers") {
  const auto periodic = mode_wavenumbers({10.0, Boundary::Periodic, 4});
  REQUIRE(periodic.size() == 4);
  CHECK(periodic[0] == doctest::Approx(-1.2566370614359172));
  CHECK(periodic[1] == doctest::Approx(-0.6283185307179586));
  CHECK(periodic[2] == doctest::Approx(0.6283185307179586));
  CHECK(periodic[3] == doctest::Approx(1.2566370614359172));

  const auto dirichlet = mode_wavenumbers({10.0, Boundary::Dirichlet, 3});
  REQUIRE(dirichlet.size() == 3);
  CHECK(dirichlet[0] == doctest::Approx(0.3141592653589793));
  CHECK(dirichlet[1] == doctest::Approx(0.6283185307179586));
  CHECK(dirichlet[2] == doctest::Approx(0.9424777960769379));

  const auto single = mode_wavenumbers({std::numbers::pi, Boundary::Dirichlet, 1});
  REQUIRE(single.size() == 1);
  CHECK(single[0] == doctest::Approx(1.0));
}

TEST_CASE("cavity validation") {
  try {
    mode_wavenumbers({10.0, Boundary::Periodic, 5});
    FAIL("odd periodic cutoff accepted");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()) == "periodic cutoff must be even");
  }
  CHECK_THROWS_AS(mode_wavenumbers({10.0, Boundary::Periodic, 0}), InvalidArgument);
  CHECK_THROWS_AS(mode_wavenumbers({10.0, Boundary::Dirichlet, 0}), InvalidArgument);
  CHECK_THROWS_AS(mode_wavenumbers({-1.0, Boundary::Dirichlet, 3}), InvalidArgument);

  const CavitySpec c{10.0, Boundary::Dirichlet, 4};
  CHECK_THROWS_AS(validate(c, detectors_at({0.0})), InvalidArgument);
  CHECK_THROWS_AS(validate(c, detectors_at({10.0})), InvalidArgument);
  CHECK_THROWS_AS(validate(c, detectors_at({5.0}, -1.0)), InvalidArgument);
  CHECK_THROWS_AS(validate(c, detectors_at({5.0}, 1.0, -0.1)), InvalidArgument);
  CHECK_THROWS_AS(validate(c, detectors_at({})), InvalidArgument);
  CHECK(validate(c, detectors_at({2.0, 2.0})).size() == 1);
  CHECK(validate(c, detectors_at({2.0, 3.0})).empty());
}

TEST_CASE("free Hamiltonian is diagonal") {
  const CavitySpec periodic{10.0, Boundary::Periodic, 6};
  const auto k = mode_wavenumbers(periodic);
  const QuadraticForm f = build_f_free(periodic, detectors_at(default_positions(10.0), 1.5));
  CHECK(f.dim() == 18);
  CHECK(f.f_sym.diagonal().head(6).isConstant(1.5));
  for (int m = 0; m < 6; ++m) {
    CHECK(f.f_sym(6 + 2 * m, 6 + 2 * m) == doctest::Approx(std::abs(k[m])));
    CHECK(f.f_sym(7 + 2 * m, 7 + 2 * m) == doctest::Approx(std::abs(k[m])));
  }
  // omega_{-n} = omega_n
  CHECK(f.f_sym(6, 6) == f.f_sym(16, 16));
  Matrix off = f.f_sym;
  off.diagonal().setZero();
  CHECK(off.isZero());

  const QuadraticForm tiny = build_f_free({std::numbers::pi, Boundary::Dirichlet, 1}, detectors_at({1.0}, 2.0));
  CHECK(tiny.f_sym.diagonal().isApprox(Eigen::Vector4d(2, 2, 1, 1)));
}

TEST_CASE("coupling matrix structure") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> pos(0.1, 9.9);
  for (Boundary b : {Boundary::Periodic, Boundary::Dirichlet}) {
    const CavitySpec c{10.0, b, 8};
    const std::vector<double> x{pos(rng), pos(rng), pos(rng)};
    const Matrix coupling = build_coupling_matrix(c, detectors_at(x));
    CHECK(coupling.rows() == 6);
    CHECK(coupling.cols() == 16);
    for (int j = 0; j < 3; ++j) CHECK(coupling.row(2 * j + 1).isZero());
    // Independent route: complex field expansion.
    CHECK((coupling - oracle::coupling_from_expansion(c, x)).cwiseAbs().maxCoeff() < 1e-14);
  }

  // Even Dirichlet mode has a node at the centre.
  const Matrix centre = build_coupling_matrix({10.0, Boundary::Dirichlet, 4}, detectors_at({5.0}));
  CHECK(std::abs(centre(0, 2)) < 1e-15);
  CHECK(centre(0, 0) == doctest::Approx(1.0 / std::sqrt(std::numbers::pi)));

  // Displayed normalizations: |n| = N/2 -> sqrt(2 pi N), |n| = N/2 - 1 -> sqrt(2 pi (N - 2)).
  const int n = 10;
  const Matrix edge = build_coupling_matrix({7.0, Boundary::Periodic, n}, detectors_at({1e-9}));
  CHECK(edge(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * n)));
  CHECK(edge(0, 2) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * (n - 2))));
  CHECK(edge(0, 2 * n - 2) == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi * n)));
}

TEST_CASE("coupling columns fall off as 1/sqrt|n|") {
  const CavitySpec c{10.0, Boundary::Periodic, 20};
  const auto numbers = mode_numbers(c);
  const Matrix x = build_coupling_matrix(c, detectors_at(default_positions(10.0)));
  for (std::size_t m = 0; m < numbers.size(); ++m) {
    const double norm = x.middleCols(2 * m, 2).norm();
    CHECK(norm == doctest::Approx(std::sqrt(3.0 / (4.0 * std::numbers::pi * std::abs(numbers[m])))));
  }
}

TEST_CASE("interaction and total Hamiltonians") {
  const CavitySpec c{10.0, Boundary::Periodic, 10};
  const auto det = detectors_at({1.0, 4.0, 8.5}, 1.3, 0.02);

  auto zero = det;
  zero.coupling = 0.0;
  CHECK(build_f_int(c, zero).f_sym.isZero());
  CHECK(build_f_total(c, zero).f_sym == build_f_free(c, zero).f_sym);

  const QuadraticForm fint = build_f_int(c, det);
  const Matrix x = build_coupling_matrix(c, det);
  CHECK(fint.f_sym.topRightCorner(6, 20) == 2.0 * 0.02 * x);
  CHECK(fint.f_sym.topLeftCorner(6, 6).isZero());
  CHECK(fint.f_sym.bottomRightCorner(20, 20).isZero());
  CHECK(fint.f_sym == fint.f_sym.transpose());

  const QuadraticForm total = build_f_total(c, det);
  CHECK(total.f_sym == total.f_sym.transpose());
  CHECK(total.f_sym.diagonal() == build_f_free(c, det).f_sym.diagonal());
}
