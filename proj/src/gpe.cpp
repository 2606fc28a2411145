#include "kronop/gpe.hpp"

#include <chrono>
#include <cmath>

#include "kronop/ground_state.hpp"

namespace kronop {

double gpe_energy(const GpeProblem& problem, const RealField& u) {
  if (!u.mass()) throw ParameterError("gpe_energy: field needs mass weights");
  const RealField mw = mass_field(u.shape(), *u.mass());
  const RealField hu = problem.hamiltonian.apply(u);
  const auto uf = u.flat().array();
  const double quad = (mw.flat().array() * uf * hu.flat().array()).sum();
  const double quartic = (mw.flat().array() * uf.square().square()).sum();
  return 0.5 * quad + 0.25 * problem.beta * quartic;
}

RealField gpe_riemannian_gradient(const GpeProblem& problem, const GpeFlowConfig& config,
                                  const RealField& u) {
  if (!problem.mass) throw ParameterError("gpe_riemannian_gradient: problem needs mass weights");
  const RealField mw = mass_field(u.shape(), *problem.mass);
  auto wdot = [&](const RealField& a, const RealField& b) {
    return (mw.flat().array() * a.flat().array() * b.flat().array()).sum();
  };
  RealField grad(u.shape());
  if (config.kind == GpeFlowKind::ModifiedH1) {
    SeparableOperator metric = problem.laplacian;
    metric.set_shift(-config.metric_shift);
    RealField r = problem.hamiltonian.apply(u);
    r.flat().array() += problem.beta * u.flat().array().cube();
    const RealField rt = metric.solve(r);
    const RealField ut = metric.solve(u);
    grad = rt;
    grad.flat() -= (wdot(rt, u) / wdot(ut, u)) * ut.flat();
  } else {
    RealField diag(u.shape());
    diag.flat().array() = problem.beta * u.flat().array().square();
    if (problem.hamiltonian.diagonal) diag.flat() += problem.hamiltonian.diagonal->flat();
    auto apply_metric = [&](const RealField& v) {
      RealField hv = problem.hamiltonian.sep.apply(v);
      hv.flat().array() += diag.flat().array() * v.flat().array();
      return hv;
    };
    auto precond = [&](const RealField& r) { return problem.hamiltonian.sep.solve(r); };
    RealField w(u.shape());
    pcg(apply_metric, precond, u, w, config.inner);
    grad = u;
    grad.flat() -= (wdot(u, u) / wdot(w, u)) * w.flat();
  }
  return grad;
}

GpeResult gpe_gradient_flow(const GpeProblem& problem, const GpeFlowConfig& config,
                            std::optional<RealField> initial) {
  if (problem.beta < 0.0) throw ParameterError("gpe_gradient_flow: beta must be >= 0");
  if (config.step <= 0.0) throw ParameterError("gpe_gradient_flow: step must be positive");
  if (config.metric_shift <= 0.0)
    throw ParameterError("gpe_gradient_flow: metric shift must be positive");
  if (!problem.mass) throw ParameterError("gpe_gradient_flow: problem needs mass weights");
  if (config.init == GpeInit::Supplied && !initial)
    throw ParameterError("gpe_gradient_flow: init = Supplied but no initial state given");

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  const RealField mw = mass_field(problem.laplacian.shape(), *problem.mass);
  auto wdot = [&](const RealField& a, const RealField& b) {
    return (mw.flat().array() * a.flat().array() * b.flat().array()).sum();
  };

  RealField u(problem.laplacian.shape());
  switch (config.init) {
    case GpeInit::Supplied:
      u = *initial;
      break;
    case GpeInit::Constant:
      u = RealField::constant(problem.laplacian.shape(), 1.0);
      break;
    case GpeInit::Eigenfunction:
      if (!problem.hamiltonian.diagonal) {
        u = problem.hamiltonian.sep.ground_state();
      } else {
        RealField guess = problem.hamiltonian.sep.ground_state();
        guess.set_mass(problem.mass);
        u = inverse_iteration(problem.hamiltonian, InverseIterationConfig{}, guess).eigenvector;
      }
      break;
  }
  u.set_mass(problem.mass);
  u.flat() /= std::sqrt(wdot(u, u));

  // (-Laplacian + alpha)^{-1} realized as a shifted separable solve.
  SeparableOperator h1_metric = problem.laplacian;
  h1_metric.set_shift(-config.metric_shift);

  GpeResult result;
  double energy_old = gpe_energy(problem, u);
  int increases = 0;
  RealField w = u;  // adaptive-metric warm start
  w.flat().setZero();

  for (int it = 0; it < config.max_iterations; ++it) {
    RealField grad(u.shape());
    if (config.kind == GpeFlowKind::ModifiedH1) {
      // L2 gradient direction r = H u + beta u^3, then two metric solves.
      RealField r = problem.hamiltonian.apply(u);
      r.flat().array() += problem.beta * u.flat().array().cube();
      const RealField rt = h1_metric.solve(r);
      const RealField ut = h1_metric.solve(u);
      result.linear_solves += 2;
      const double proj = wdot(rt, u) / wdot(ut, u);
      grad = rt;
      grad.flat() -= proj * ut.flat();
    } else {
      // w = (-Lap + V + beta u^2)^{-1} u by PCG with the separable inverse.
      RealField diag(u.shape());
      diag.flat().array() = problem.beta * u.flat().array().square();
      if (problem.hamiltonian.diagonal) diag.flat() += problem.hamiltonian.diagonal->flat();
      auto apply_metric = [&](const RealField& v) {
        RealField hv = problem.hamiltonian.sep.apply(v);
        hv.flat().array() += diag.flat().array() * v.flat().array();
        return hv;
      };
      auto precond = [&](const RealField& r) { return problem.hamiltonian.sep.solve(r); };
      const PcgReport rep = pcg(apply_metric, precond, u, w, config.inner);
      result.linear_solves += rep.iterations;
      const double proj = wdot(u, u) / wdot(w, u);
      grad = u;
      grad.flat() -= proj * w.flat();
    }

    u.flat() -= config.step * grad.flat();
    u.flat() /= std::sqrt(wdot(u, u));
    const double energy = gpe_energy(problem, u);
    const double rel = std::abs(energy - energy_old) / std::abs(energy);
    result.iterations = it + 1;
    if (config.record_history)
      result.history.push_back({it + 1, energy, rel, result.linear_solves, elapsed()});

    if (energy - energy_old > 1e-13 * std::abs(energy)) {
      if (++increases > 10)
        throw NumericalError(
            "gpe_gradient_flow: energy increased for more than 10 consecutive steps; "
            "reduce the step size");
    } else {
      increases = 0;
    }
    energy_old = energy;
    if (rel < config.energy_rel_tol) {
      result.converged = true;
      break;
    }
  }

  const RealField hu = problem.hamiltonian.apply(u);
  result.eigenvalue = (mw.flat().array() * u.flat().array() * hu.flat().array()).sum() +
                      problem.beta * (mw.flat().array() * u.flat().array().square().square()).sum();
  result.energy = energy_old;
  result.state = std::move(u);
  return result;
}

}  // namespace kronop
