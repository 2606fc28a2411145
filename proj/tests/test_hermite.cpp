#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kronop/errors.hpp"
#include "kronop/hermite.hpp"

using namespace kronop;

TEST_CASE("small node sets") {
  const HermiteBasis b2 = hermite_basis(2);
  CHECK(b2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(b2.nodes[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  const HermiteBasis b3 = hermite_basis(3);
  CHECK(b3.nodes[0] == doctest::Approx(-std::sqrt(1.5)).epsilon(1e-14));
  CHECK(b3.nodes[1] == 0.0);
  CHECK(b3.nodes[2] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));

  CHECK_THROWS_AS(hermite_basis(1), ParameterError);
  CHECK_THROWS_AS(hermite_basis(746), CapabilityError);
}

TEST_CASE("node symmetry at large n") {
  for (int n : {40, 171, 300}) {
    const HermiteBasis b = hermite_basis(n);
    for (int j = 0; j < n; ++j)
      CHECK(std::abs(b.nodes[j] + b.nodes[n - 1 - j]) < 1e-10);
  }
  // The documented FP64 ceiling still works.
  CHECK_NOTHROW(hermite_basis(745));
}

TEST_CASE("differentiation reproduces the ground Gaussian") {
  const HermiteBasis b = hermite_basis(12);
  const int n = b.size;
  Eigen::VectorXd psi0(n), dpsi0(n);
  for (int j = 0; j < n; ++j) {
    psi0(j) = std::pow(M_PI, -0.25) * std::exp(-b.nodes[j] * b.nodes[j] / 2.0);
    dpsi0(j) = -b.nodes[j] * psi0(j);
  }
  const Eigen::VectorXd d = b.diff * psi0;
  CHECK((d - dpsi0).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("scaled derivative is antisymmetric") {
  for (int n : {20, 120, 300}) {
    const HermiteBasis b = hermite_basis(n);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) w(i, j) = b.diff(i, j) * b.psi_last[j] / b.psi_last[i];
    const double scale = w.cwiseAbs().maxCoeff();
    CHECK((w + w.transpose()).cwiseAbs().maxCoeff() < 1e-10 * scale);
  }
}

TEST_CASE("harmonic oscillator spectrum") {
  const HermiteBasis b = hermite_basis(60);
  const HermiteOperator op = hermite_operator(b, [](double x) { return x * x; });
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.sym);
  for (int j = 0; j < 5; ++j)
    CHECK(es.eigenvalues()(j) == doctest::Approx(2.0 * j + 1.0).epsilon(1e-9));
}

TEST_CASE("free operator is positive semidefinite") {
  const HermiteBasis b = hermite_basis(40);
  const HermiteOperator op = hermite_operator(b, [](double) { return 0.0; });
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.sym);
  CHECK(es.eigenvalues()(0) > -1e-8);
}

TEST_CASE("spectral self-convergence of the lowest eigenvalue") {
  auto lowest = [](int n) {
    const HermiteBasis b = hermite_basis(n);
    const HermiteOperator op = hermite_operator(b, [](double x) { return x * x; });
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(op.sym).eigenvalues()(0);
  };
  CHECK(std::abs(lowest(20) - lowest(40)) < 1e-10);
}

TEST_CASE("quadrature weights integrate the basis orthonormally") {
  const int n = 24;
  const HermiteBasis b = hermite_basis(n);
  // psi_k values via the recurrence for a few k.
  Eigen::MatrixXd psi(n, n);
  for (int j = 0; j < n; ++j) {
    double pk = std::pow(M_PI, -0.25) * std::exp(-b.nodes[j] * b.nodes[j] / 2.0), pkm1 = 0.0;
    psi(0, j) = pk;
    for (int k = 0; k < n - 1; ++k) {
      const double pk1 =
          b.nodes[j] * std::sqrt(2.0 / (k + 1)) * pk - std::sqrt(k / (k + 1.0)) * pkm1;
      pkm1 = pk;
      pk = pk1;
      psi(k + 1, j) = pk;
    }
  }
  for (int k : {0, 3, 11}) {
    for (int l : {0, 3, 11}) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += b.mass[j] * psi(k, j) * psi(l, j);
      CHECK(acc == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("non-finite potential is rejected") {
  const HermiteBasis b = hermite_basis(10);
  CHECK_THROWS_AS(hermite_operator(b, [](double) { return std::nan(""); }), ParameterError);
}
