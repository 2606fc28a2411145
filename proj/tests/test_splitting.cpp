#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kronop/dense_ref.hpp"
#include "kronop/grid.hpp"
#include "kronop/rng.hpp"
#include "kronop/splitting.hpp"

using namespace kronop;

namespace {

const auto kOscPotential = [](double x) {
  return x * x + 100.0 * std::pow(std::sin(M_PI * x / 4.0), 2);
};

ComplexField random_state(const Grid& grid, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ComplexField psi = grid.complex_field();
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = {rng.uniform_pm1(), rng.uniform_pm1()};
  psi.flat() /= psi.flat().norm();
  return psi;
}

}  // namespace

TEST_CASE("yoshida coefficients") {
  const YoshidaCoeffs c = yoshida_coeffs();
  CHECK(std::abs(2.0 * c.gamma1 + c.gamma2 - 1.0) < 1e-15);
  CHECK(std::abs(2.0 * std::pow(c.gamma1, 3) + std::pow(c.gamma2, 3)) < 1e-14);
  CHECK(c.gamma1 == doctest::Approx(1.351207).epsilon(1e-6));
  CHECK(c.gamma2 == doctest::Approx(-1.702414).epsilon(1e-6));
}

TEST_CASE("single quadrature point is the symmetric splitting") {
  const Grid grid = Grid::sem(8.0, 4, 7, 1);  // n = 27
  const SeparableOperator a = grid.laplacian();
  const RealField b = grid.sample([](std::span<const double> x) { return kOscPotential(x[0]); });
  const ComplexField psi = random_state(grid, 2);
  const double h = 0.013;

  const ComplexField stepped = qhop_step(a, b, psi, h, 1);

  // Explicit half-kick form.
  ComplexField ref = a.propagate(psi, h / 2.0);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    const double phase = -h * b[i];
    ref[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  ref = a.propagate(ref, h / 2.0);
  CHECK((stepped.flat() - ref.flat()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero coupling reduces to the exact propagator") {
  const Grid grid = Grid::sem(8.0, 3, 6, 1);
  const SeparableOperator a = grid.separable_operator(
      std::vector<std::function<double(double)>>{kOscPotential});
  const RealField zero = grid.field();
  const ComplexField psi = random_state(grid, 3);
  const double h = 0.21;

  const ComplexField q = qhop_step(a, zero, psi, h, 3);
  const ComplexField exact = a.propagate(psi, h);
  CHECK((q.flat() - exact.flat()).cwiseAbs().maxCoeff() < 1e-13);

  const ComplexField y = yoshida_step(a, zero, psi, h, 1);
  CHECK((y.flat() - exact.flat()).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("steps invert under time reversal") {
  const Grid grid = Grid::sem(8.0, 3, 5, 1);
  const SeparableOperator a = grid.laplacian();
  const RealField b = grid.sample([](std::span<const double> x) { return kOscPotential(x[0]); });
  const ComplexField psi = random_state(grid, 5);
  const double h = 0.02;
  for (int m : {1, 3}) {
    const ComplexField fwd = qhop_step(a, b, psi, h, m);
    const ComplexField back = qhop_step(a, b, fwd, -h, m);
    CHECK((back.flat() - psi.flat()).cwiseAbs().maxCoeff() < 1e-10);

    const ComplexField yf = yoshida_step(a, b, psi, h, m);
    const ComplexField yb = yoshida_step(a, b, yf, -h, m);
    CHECK((yb.flat() - psi.flat()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("single step matches the dense quadrature exponential at third order") {
  // 1D, n = 48: compare one step against e^{-iAh} expm(-ih sum_k w_k H_I(s_k))
  // computed densely in the mass-symmetrized frame.
  const Grid grid = Grid::sem(8.0, 6, 8, 1);  // n = 47
  const Basis1D& basis = std::get<Basis1D>(grid.axes[0]);
  const int n = basis.size();
  const SeparableOperator a = grid.laplacian();
  const RealField b = grid.sample([](std::span<const double> x) { return kOscPotential(x[0]); });
  const ComplexField psi = random_state(grid, 8);
  const int m = 3;

  const Eigen::MatrixXd a_sym =
      dense_ref::sym_axis_operator(basis, [](double) { return 0.0; });
  Eigen::VectorXd sqrt_mass(n);
  for (int i = 0; i < n; ++i) sqrt_mass(i) = std::sqrt(basis.mass[i]);

  const GaussRule rule = gauss_legendre(m);
  auto dense_reference = [&](double h) {
    Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < m; ++k) {
      const double sk = h * (1.0 + rule.nodes[k]) / 2.0;
      const double wk = rule.weights[k] / 2.0;
      const Eigen::MatrixXcd ek = dense_ref::expm_hermitian(a_sym, -sk);  // e^{+i A s_k}
      omega += wk * ek * b.flat().asDiagonal() * ek.adjoint();
    }
    const Eigen::MatrixXcd u_sym =
        dense_ref::expm_hermitian(a_sym, h) * dense_ref::expm_hermitian(omega, h);
    // Back to the nodal frame.
    return Eigen::MatrixXcd(sqrt_mass.cwiseInverse().asDiagonal() * u_sym *
                            sqrt_mass.asDiagonal());
  };

  auto step_error = [&](double h) {
    const ComplexField stepped = qhop_step(a, b, psi, h, m);
    const Eigen::VectorXcd ref = dense_reference(h) * psi.flat();
    return (stepped.flat() - ref).norm();
  };

  const double e1 = step_error(0.01);
  const double e2 = step_error(0.005);
  const double ratio = e1 / e2;
  CHECK(ratio > 7.0);
  CHECK(ratio < 9.0);
}

TEST_CASE("evolve: exact limit, step validation, merge agreement") {
  const Grid grid = Grid::sem(8.0, 3, 6, 1);
  const SeparableOperator full = grid.separable_operator(
      std::vector<std::function<double(double)>>{kOscPotential});
  const SeparableOperator a = grid.laplacian();
  const RealField b = grid.sample([](std::span<const double> x) { return kOscPotential(x[0]); });
  const ComplexField psi = random_state(grid, 13);

  // B = 0 with a single step reproduces the reference for any dt.
  SplitSpec spec;
  spec.dt = 0.4;
  spec.total_time = 0.4;
  spec.quad_points = 1;
  const RealField zero = grid.field();
  const EvolveResult trivial = evolve(spec, full, zero, psi, ExactReference{&full});
  CHECK(trivial.error < 1e-11);

  SplitSpec badspec = spec;
  badspec.dt = 0.3;
  CHECK_THROWS_AS(evolve(badspec, full, zero, psi, ExactReference{&full}), ParameterError);

  // Cross-step merging must not change the result.
  SplitSpec merged;
  merged.dt = 0.01;
  merged.total_time = 0.1;
  merged.quad_points = 3;
  merged.composition = Composition::Yoshida;
  const EvolveResult plain = evolve(merged, a, b, psi, ExactReference{&full});
  merged.merge_across_steps = true;
  const EvolveResult fast = evolve(merged, a, b, psi, ExactReference{&full});
  CHECK((plain.state.flat() - fast.state.flat()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(plain.error == doctest::Approx(fast.error).epsilon(1e-9));
}

TEST_CASE("stationary reference: constant density over time") {
  const Grid grid = Grid::sem(8.0, 3, 6, 1);
  const SeparableOperator full = grid.separable_operator(
      std::vector<std::function<double(double)>>{kOscPotential});
  RealField u1 = full.ground_state();
  const double lam1 = full.eigenvalue_grid().flat().minCoeff();

  ComplexField psi = grid.complex_field();
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = u1[i];
  psi.flat() /= psi.flat().norm();

  const ComplexField evolved = full.propagate(psi, 0.7);
  // Density is time-invariant for a stationary state.
  double max_dev = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    max_dev = std::max(max_dev, std::abs(std::norm(evolved[i]) - std::norm(psi[i])));
  CHECK(max_dev < 1e-9);

  // The stationary reference agrees with the exact propagator for psi0 = u1.
  SplitSpec spec;
  spec.dt = 0.05;
  spec.total_time = 0.2;
  spec.quad_points = 1;
  const SeparableOperator a = grid.laplacian();
  const RealField b = grid.sample([](std::span<const double> x) { return kOscPotential(x[0]); });
  const EvolveResult via_exact = evolve(spec, a, b, psi, ExactReference{&full});
  const EvolveResult via_phase = evolve(spec, a, b, psi, StationaryReference{lam1});
  CHECK(via_exact.error == doctest::Approx(via_phase.error).epsilon(1e-6));
}

TEST_CASE("observed orders on a 1D problem") {
  const Grid grid = Grid::sem(8.0, 4, 8, 1);  // n = 31
  const SeparableOperator full = grid.separable_operator(
      std::vector<std::function<double(double)>>{kOscPotential});
  const SeparableOperator a = grid.laplacian();
  const RealField b = grid.sample([](std::span<const double> x) { return kOscPotential(x[0]); });

  ComplexField psi = grid.complex_field();
  const auto& nodes = axis_nodes(grid.axes[0]);
  for (std::size_t i = 0; i < psi.size(); ++i)
    psi[i] = std::sin(M_PI * (nodes[i] + 8.0) / 16.0);
  psi.flat() /= psi.flat().norm();

  auto run = [&](double dt, double total, int m, Composition comp) {
    SplitSpec spec;
    spec.dt = dt;
    spec.total_time = total;
    spec.quad_points = m;
    spec.composition = comp;
    return evolve(spec, a, b, psi, ExactReference{&full}).error;
  };

  // Second order for the quadrature product, fourth for the composition.
  const double q1 = run(0.01, 0.1, 1, Composition::Single);
  const double q2 = run(0.005, 0.1, 1, Composition::Single);
  CHECK(std::log2(q1 / q2) == doctest::Approx(2.0).epsilon(0.1));

  const double y1 = run(0.01, 0.1, 1, Composition::Yoshida);
  const double y2 = run(0.005, 0.1, 1, Composition::Yoshida);
  CHECK(std::log2(y1 / y2) == doctest::Approx(4.0).epsilon(0.1));

  // Larger quadrature count shrinks the error constant at fixed dt.
  const double m1 = run(0.005, 0.1, 1, Composition::Single);
  const double m3 = run(0.005, 0.1, 3, Composition::Single);
  const double m5 = run(0.005, 0.1, 5, Composition::Single);
  CHECK(m3 < m1);
  CHECK(m5 < m3);

  // Mass-weighted norm is conserved across many steps.
  SplitSpec spec;
  spec.dt = 0.001;
  spec.total_time = 0.5;
  spec.quad_points = 3;
  const EvolveResult r = evolve(spec, a, b, psi, ExactReference{&full});
  ComplexField normalized = psi;
  normalized.flat() /= normalized.flat().norm();
  CHECK(std::abs(norm(r.state, Weighting::Mass) - norm(normalized, Weighting::Mass)) <
        1e-8 * norm(normalized, Weighting::Mass));
}
