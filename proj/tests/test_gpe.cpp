#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kronop/dense_ref.hpp"
#include "kronop/gpe.hpp"
#include "kronop/grid.hpp"
#include "kronop/rng.hpp"

using namespace kronop;

namespace {

const auto kTrap = [](double x) { return x * x; };

GpeProblem small_problem(const Grid& grid, double beta) {
  GpeProblem p;
  std::vector<std::function<double(double)>> per_axis(grid.dim(), kTrap);
  p.hamiltonian.sep = grid.separable_operator(per_axis);
  p.laplacian = grid.laplacian();
  p.beta = beta;
  p.mass = grid.mass;
  return p;
}

RealField normalized_random(const Grid& grid, std::uint64_t seed) {
  SplitMix64 rng(seed);
  RealField u = grid.field();
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = rng.uniform_pm1();
  const RealField mw = mass_field(grid.shape(), *grid.mass);
  u.flat() /= std::sqrt((mw.flat().array() * u.flat().array().square()).sum());
  return u;
}

}  // namespace

TEST_CASE("linear limit: eigenfunction init is a fixed point") {
  const Grid grid = Grid::sem(6.0, 3, 4, 2);
  const GpeProblem p = small_problem(grid, 0.0);
  GpeFlowConfig cfg;
  cfg.init = GpeInit::Eigenfunction;
  const GpeResult r = gpe_gradient_flow(p, cfg);
  CHECK(r.converged);
  CHECK(r.iterations <= 2);
  const double lam1 = p.hamiltonian.sep.eigenvalue_grid().flat().minCoeff();
  CHECK(r.energy == doctest::Approx(lam1 / 2.0).epsilon(1e-12));
  CHECK(r.eigenvalue == doctest::Approx(lam1).epsilon(1e-10));
}

TEST_CASE("energy matches a dense quadratic-form evaluation") {
  const Grid grid = Grid::sem(5.0, 4, 6, 1);  // n = 23
  const GpeProblem p = small_problem(grid, 3.5);
  const RealField u = normalized_random(grid, 11);

  const Basis1D& basis = std::get<Basis1D>(grid.axes[0]);
  const Eigen::MatrixXd h = dense_ref::axis_operator(basis, kTrap);
  const Eigen::VectorXd hu = h * u.flat();
  double quad = 0.0, quart = 0.0;
  for (int i = 0; i < basis.size(); ++i) {
    quad += basis.mass[i] * u[i] * hu(i);
    quart += basis.mass[i] * std::pow(u[i], 4);
  }
  const double expect = 0.5 * quad + 0.25 * p.beta * quart;
  CHECK(gpe_energy(p, u) == doctest::Approx(expect).epsilon(1e-12));

  CHECK(gpe_energy(p, grid.field()) == 0.0);
}

TEST_CASE("riemannian gradient is tangent to the sphere") {
  const Grid grid = Grid::sem(6.0, 2, 5, 2);
  const GpeProblem p = small_problem(grid, 10.0);
  const RealField u = normalized_random(grid, 21);
  const RealField mw = mass_field(grid.shape(), *grid.mass);

  for (GpeFlowKind kind : {GpeFlowKind::ModifiedH1, GpeFlowKind::AdaptiveMetric}) {
    GpeFlowConfig cfg;
    cfg.kind = kind;
    const RealField g = gpe_riemannian_gradient(p, cfg, u);
    const double tangency = (mw.flat().array() * g.flat().array() * u.flat().array()).sum();
    const double scale = std::sqrt((mw.flat().array() * g.flat().array().square()).sum());
    CHECK(std::abs(tangency) < 1e-10 * std::max(1.0, scale));
  }
}

TEST_CASE("directional derivative matches the L2 gradient") {
  const Grid grid = Grid::sem(6.0, 2, 4, 2);
  const GpeProblem p = small_problem(grid, 7.0);
  const RealField u = normalized_random(grid, 31);
  const RealField v = normalized_random(grid, 32);
  const RealField mw = mass_field(grid.shape(), *grid.mass);

  // r = H u + beta u^3; d/de E(u + e v)|_0 = <r, v>_M.
  RealField r = p.hamiltonian.apply(u);
  r.flat().array() += p.beta * u.flat().array().cube();
  const double expect = (mw.flat().array() * r.flat().array() * v.flat().array()).sum();

  auto fd = [&](double eps) {
    RealField up = u, um = u;
    up.flat() += eps * v.flat();
    um.flat() -= eps * v.flat();
    up.set_mass(grid.mass);
    um.set_mass(grid.mass);
    return (gpe_energy(p, up) - gpe_energy(p, um)) / (2.0 * eps);
  };
  const double d4 = fd(1e-4), d5 = fd(1e-5);
  CHECK(std::abs(d4 - expect) < 1e-5 * std::max(1.0, std::abs(expect)));
  // Richardson consistency: the 1e-5 estimate is at least as accurate.
  CHECK(std::abs(d5 - expect) <= std::abs(d4 - expect) + 1e-9);
}

TEST_CASE("both flows agree on the ground energy") {
  const Grid grid = Grid::sem(6.0, 2, 6, 2);  // 11^2
  const GpeProblem p = small_problem(grid, 25.0);

  GpeFlowConfig h1;
  h1.kind = GpeFlowKind::ModifiedH1;
  h1.step = 0.1;
  h1.init = GpeInit::Eigenfunction;
  h1.max_iterations = 60000;
  const GpeResult rh1 = gpe_gradient_flow(p, h1);

  GpeFlowConfig au;
  au.kind = GpeFlowKind::AdaptiveMetric;
  au.step = 1.0;
  au.init = GpeInit::Eigenfunction;
  const GpeResult rau = gpe_gradient_flow(p, au);

  CHECK(rh1.converged);
  CHECK(rau.converged);
  CHECK(std::abs(rh1.energy - rau.energy) < 1e-10 * std::abs(rh1.energy));
  // Normalization is maintained.
  const RealField mw = mass_field(grid.shape(), *grid.mass);
  CHECK((mw.flat().array() * rh1.state.flat().array().square()).sum() ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("iteration budget reports non-convergence") {
  const Grid grid = Grid::sem(6.0, 2, 4, 1);
  const GpeProblem p = small_problem(grid, 50.0);
  GpeFlowConfig cfg;
  cfg.kind = GpeFlowKind::ModifiedH1;
  cfg.init = GpeInit::Constant;
  cfg.max_iterations = 3;
  cfg.energy_rel_tol = 1e-30;
  const GpeResult r = gpe_gradient_flow(p, cfg);
  CHECK(!r.converged);
  CHECK(r.iterations == 3);
}

TEST_CASE("parameter validation") {
  const Grid grid = Grid::sem(6.0, 2, 4, 1);
  GpeProblem p = small_problem(grid, -1.0);
  CHECK_THROWS_AS(gpe_gradient_flow(p, GpeFlowConfig{}), ParameterError);
  p.beta = 1.0;
  GpeFlowConfig cfg;
  cfg.step = 0.0;
  CHECK_THROWS_AS(gpe_gradient_flow(p, cfg), ParameterError);
}
