#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kronop/grid.hpp"
#include "kronop/pcg.hpp"
#include "kronop/rng.hpp"

using namespace kronop;

namespace {

RealField random_real(const Shape& shape, SplitMix64& rng) {
  RealField f(shape);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.uniform_pm1();
  return f;
}

LinearMap identity_map() {
  return [](const RealField& v) { return v; };
}

}  // namespace

TEST_CASE("identity system converges immediately") {
  SplitMix64 rng(1);
  const RealField b = random_real({7}, rng);
  RealField x({7});
  const PcgReport rep = pcg(identity_map(), identity_map(), b, x);
  CHECK(rep.converged);
  CHECK(rep.iterations <= 1);
  CHECK((x.flat() - b.flat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact preconditioner gives one iteration") {
  // A = diag(1, 4), precond = A^{-1}.
  auto apply = [](const RealField& v) {
    RealField r = v;
    r[1] *= 4.0;
    return r;
  };
  auto precond = [](const RealField& v) {
    RealField r = v;
    r[1] /= 4.0;
    return r;
  };
  RealField b({2});
  b[0] = 1.0;
  b[1] = -2.0;
  RealField x({2});
  const PcgReport rep = pcg(apply, precond, b, x);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);

  // Exact preconditioner property for a full SPD operator built from a grid.
  const Grid grid = Grid::sem(1.0, 3, 4, 2);
  const SeparableOperator op =
      grid.separable_operator({[](double t) { return t * t; }, [](double t) { return 2 * t * t; }});
  SplitMix64 rng(2);
  const RealField rhs = random_real(op.shape(), rng);
  RealField y(op.shape());
  PcgConfig cfg;
  cfg.rel_tol = 1e-10;
  const PcgReport rep2 = pcg([&](const RealField& v) { return op.apply(v); },
                             [&](const RealField& v) { return op.solve(v); }, rhs, y, cfg);
  CHECK(rep2.converged);
  CHECK(rep2.iterations == 1);
}

TEST_CASE("energy-norm error is non-increasing") {
  // Small SPD system with the plain (identity) preconditioner; compare the
  // energy-norm error against the dense solution after each iteration count.
  const int n = 14;
  SplitMix64 rng(5);
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = rng.uniform_pm1();
  const Eigen::MatrixXd a = m.transpose() * m + 0.1 * Eigen::MatrixXd::Identity(n, n);
  auto apply = [&](const RealField& v) {
    RealField r(v.shape());
    r.flat() = a * v.flat();
    return r;
  };
  RealField b({n});
  for (int i = 0; i < n; ++i) b[i] = rng.uniform_pm1();
  const Eigen::VectorXd xstar = a.fullPivLu().solve(b.flat());

  double prev = std::numeric_limits<double>::infinity();
  for (int iters = 1; iters <= n; ++iters) {
    RealField x({n});
    PcgConfig cfg;
    cfg.max_iter = iters;
    cfg.rel_tol = 1e-30;  // force exactly `iters` iterations
    try {
      pcg(apply, identity_map(), b, x, cfg);
    } catch (const NumericalError&) {
      break;  // fully converged Krylov space can break down; stop scanning
    }
    const Eigen::VectorXd e = x.flat() - xstar;
    const double energy = std::sqrt(e.dot(a * e));
    CHECK(energy <= prev * (1.0 + 1e-10));
    prev = energy;
  }
}

TEST_CASE("max_iter returns best iterate unconverged") {
  const int n = 30;
  // Moderately conditioned diagonal system.
  auto apply = [&](const RealField& v) {
    RealField r = v;
    for (int i = 0; i < n; ++i) r[i] *= 1.0 + 99.0 * i / (n - 1.0);
    return r;
  };
  SplitMix64 rng(8);
  const RealField b = random_real({n}, rng);
  RealField x({n});
  PcgConfig cfg;
  cfg.max_iter = 3;
  cfg.record_history = true;
  const PcgReport rep = pcg(apply, identity_map(), b, x, cfg);
  CHECK(!rep.converged);
  CHECK(rep.iterations == 3);
  CHECK(rep.history.size() == 4);  // initial residual plus one per iteration
  CHECK(rep.final_residual > 0.0);
  CHECK(x.flat().norm() > 0.0);
}

TEST_CASE("warm start is honored") {
  auto apply = [](const RealField& v) {
    RealField r = v;
    r.flat() *= 2.0;
    return r;
  };
  RealField b({4});
  b.flat().setConstant(2.0);
  RealField x({4});
  x.flat().setConstant(1.0);  // exact solution
  const PcgReport rep = pcg(apply, identity_map(), b, x);
  CHECK(rep.converged);
  CHECK(rep.iterations == 0);
}

TEST_CASE("indefinite operator raises breakdown") {
  auto apply = [](const RealField& v) {
    RealField r = v;
    r.flat() *= -1.0;
    return r;
  };
  SplitMix64 rng(12);
  const RealField b = random_real({5}, rng);
  RealField x({5});
  CHECK_THROWS_AS(pcg(apply, identity_map(), b, x), NumericalError);
}

TEST_CASE("preconditioned stopping norm is available") {
  const Grid grid = Grid::sem(1.0, 4, 2, 1);
  const SeparableOperator op = grid.separable_operator({[](double t) { return t * t; }});
  SplitMix64 rng(31);
  const RealField b = random_real(op.shape(), rng);
  RealField x(op.shape());
  PcgConfig cfg;
  cfg.preconditioned_norm = true;
  cfg.rel_tol = 1e-10;
  const PcgReport rep = pcg([&](const RealField& v) { return op.apply(v); },
                            [&](const RealField& v) { return op.solve(v); }, b, x, cfg);
  CHECK(rep.converged);
  const RealField residual = op.apply(x);
  CHECK((residual.flat() - b.flat()).norm() < 1e-8 * b.flat().norm());
}
