#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kronop/axis.hpp"
#include "kronop/dense_ref.hpp"
#include "kronop/errors.hpp"
#include "kronop/rng.hpp"

using namespace kronop;

namespace {

// Brute-force cyclic Jacobi eigensolver, independent of the library path.
void jacobi_eig(Eigen::MatrixXd a, Eigen::VectorXd& values) {
  const int n = static_cast<int>(a.rows());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = 0.5 * std::atan2(2.0 * a(p, q), a(q, q) - a(p, p));
        const double c = std::cos(theta), s = std::sin(theta);
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
        g(p, p) = c;
        g(q, q) = c;
        g(p, q) = s;
        g(q, p) = -s;
        a = g.transpose() * a * g;
      }
  }
  values = a.diagonal();
  std::sort(values.data(), values.data() + n);
}

}  // namespace

TEST_CASE("classical tridiagonal spectrum") {
  const int n = 8;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = 2.0;
    if (i + 1 < n) a(i, i + 1) = a(i + 1, i) = -1.0;
  }
  Eigen::VectorXd lam;
  Eigen::MatrixXd q;
  sym_eig(a, lam, q);
  for (int j = 0; j < n; ++j)
    CHECK(lam(j) == doctest::Approx(2.0 - 2.0 * std::cos((j + 1) * M_PI / (n + 1)))
                        .epsilon(1e-13));
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10 * n);
  CHECK((a * q - q * lam.asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff() <
        1e-10 * a.cwiseAbs().maxCoeff() * n);
}

TEST_CASE("diagonal input with deterministic signs") {
  Eigen::MatrixXd a = Eigen::Vector3d(3.0, -1.0, 2.0).asDiagonal();
  Eigen::VectorXd lam;
  Eigen::MatrixXd q;
  sym_eig(a, lam, q);
  CHECK(lam(0) == -1.0);
  CHECK(lam(1) == 2.0);
  CHECK(lam(2) == 3.0);
  // Permutation columns with the largest component positive.
  for (int j = 0; j < 3; ++j) CHECK(q.col(j).cwiseAbs().maxCoeff() == 1.0);
  CHECK(q.col(0)(1) == 1.0);
  CHECK(q.col(1)(2) == 1.0);
  CHECK(q.col(2)(0) == 1.0);
}

TEST_CASE("random symmetric matrix against the Jacobi oracle") {
  SplitMix64 rng(99);
  const int n = 12;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.uniform_pm1();
  Eigen::VectorXd lam, lam_ref;
  Eigen::MatrixXd q;
  sym_eig(a, lam, q);
  jacobi_eig(a, lam_ref);
  CHECK((lam - lam_ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("asymmetric input is rejected") {
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 2.0, 0.0, 1.0;
  Eigen::VectorXd lam;
  Eigen::MatrixXd q;
  CHECK_THROWS_AS(sym_eig(a, lam, q), ParameterError);
}

TEST_CASE("SEM axis: Dirichlet Laplacian and reconstruction") {
  const Basis1D basis = assemble_sem(M_PI / 2.0, 8, 6);
  const auto zero = [](double) { return 0.0; };
  const AxisEigens ax = build_axis(basis, zero);
  CHECK(ax.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-10));

  const int n = ax.size();
  CHECK((ax.transform * ax.inverse_transform - Eigen::MatrixXd::Identity(n, n))
            .cwiseAbs()
            .maxCoeff() < 1e-10 * n);

  // T^{-1} H T reproduces the diagonal, H from the independent dense path.
  const Eigen::MatrixXd h = dense_ref::axis_operator(basis, zero);
  const Eigen::MatrixXd d = ax.inverse_transform * h * ax.transform;
  Eigen::MatrixXd diag = ax.eigenvalues.asDiagonal();
  CHECK((d - diag).cwiseAbs().maxCoeff() < 1e-8 * ax.eigenvalues.cwiseAbs().maxCoeff());
}

TEST_CASE("constant potential shifts the spectrum only") {
  const Basis1D basis = assemble_sem(2.0, 3, 4);
  const AxisEigens a0 = build_axis(basis, [](double) { return 0.0; });
  const AxisEigens ac = build_axis(basis, [](double) { return 5.25; });
  CHECK((ac.eigenvalues.array() - a0.eigenvalues.array() - 5.25).abs().maxCoeff() < 1e-12 *
            ac.eigenvalues.cwiseAbs().maxCoeff());
  CHECK((ac.transform - a0.transform).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("potential monotonicity of the lowest eigenvalue") {
  const Basis1D basis = assemble_sem(3.0, 4, 5);
  const AxisEigens a0 = build_axis(basis, [](double) { return 0.0; });
  const AxisEigens av = build_axis(basis, [](double x) { return x * x; });
  CHECK(av.eigenvalues(0) >= a0.eigenvalues(0));
}

TEST_CASE("Hermite axis: oscillator levels") {
  const HermiteBasis basis = hermite_basis(60);
  const AxisEigens ax = build_axis(basis, [](double x) { return x * x; });
  for (int j = 0; j < 3; ++j)
    CHECK(ax.eigenvalues(j) == doctest::Approx(2.0 * j + 1.0).epsilon(1e-9));
  const int n = ax.size();
  CHECK((ax.transform * ax.inverse_transform - Eigen::MatrixXd::Identity(n, n))
            .cwiseAbs()
            .maxCoeff() < 1e-10 * n);
  // Reconstruction against the unsymmetrized dense operator.
  const Eigen::MatrixXd h = dense_ref::axis_operator(basis, [](double x) { return x * x; });
  const Eigen::MatrixXd d = ax.inverse_transform * h * ax.transform;
  Eigen::MatrixXd diag = ax.eigenvalues.asDiagonal();
  CHECK((d - diag).cwiseAbs().maxCoeff() < 1e-8 * ax.eigenvalues.cwiseAbs().maxCoeff());
}
