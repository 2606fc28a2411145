#include "kronop/ground_state.hpp"

#include <chrono>
#include <cmath>
#include <iostream>

namespace kronop {

namespace {

double shift_value(const InverseIterationConfig& config, const SeparableOperator& sep) {
  switch (config.shift_mode) {
    case ShiftMode::FractionOfMin:
      return config.shift_fraction * sep.min_eigenvalue();
    case ShiftMode::OffsetBelowMin:
      return sep.min_eigenvalue() - config.shift_offset;
    case ShiftMode::Zero:
      return 0.0;
  }
  return 0.0;
}

void fix_sign(RealField& u) {
  Eigen::Index imax = 0;
  u.flat().cwiseAbs().maxCoeff(&imax);
  if (u[static_cast<std::size_t>(imax)] < 0.0) u.flat() = -u.flat();
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

EigenpairResult inverse_iteration(const FullOperator& op, const InverseIterationConfig& config,
                                  const RealField& initial) {
  if (config.eig_rel_tol <= 0.0) throw ParameterError("inverse_iteration: tolerance must be positive");
  if (!initial.mass()) throw ParameterError("inverse_iteration: initial guess needs mass weights");
  const bool separable = !op.diagonal.has_value();
  const double sigma = shift_value(config, op.sep);

  const RealField mw = mass_field(initial.shape(), *initial.mass());
  auto weighted_dot = [&](const RealField& a, const RealField& b) {
    return (mw.flat().array() * a.flat().array() * b.flat().array()).sum();
  };
  auto rayleigh = [&](const RealField& u) {
    const RealField hu = op.apply(u);
    return weighted_dot(u, hu) / weighted_dot(u, u);
  };

  EigenpairResult result;
  RealField u = initial;
  u.flat() /= std::sqrt(weighted_dot(u, u));
  double lambda = rayleigh(u);
  if (sigma >= lambda)
    throw ParameterError("inverse_iteration: shift is not below the Rayleigh estimate");

  // Shifted copies used by the solve paths.
  SeparableOperator shifted = op.sep;
  shifted.set_shift(sigma);
  const SeparableOperator& precond_op = op.sep;  // unshifted preconditioner

  RealField w = u;  // warm-start storage for the PCG path
  w.flat().setZero();

  for (int outer = 0; outer < config.max_outer; ++outer) {
    if (separable) {
      w = shifted.solve(u);
    } else {
      auto apply_shifted = [&](const RealField& v) {
        RealField hv = op.apply(v);
        hv.flat() -= sigma * v.flat();
        return hv;
      };
      auto precond = [&](const RealField& r) { return precond_op.solve(r); };
      const PcgReport rep = pcg(apply_shifted, precond, u, w, config.inner);
      result.inner_per_outer.push_back(rep.iterations);
      result.total_inner_iterations += rep.iterations;
      if (!rep.converged && config.warn_on_inner_failure)
        std::cerr << "inverse_iteration: inner PCG hit max_iter at outer step " << outer + 1
                  << " (residual " << rep.final_residual << ")\n";
    }
    RealField next = w;
    next.flat() /= std::sqrt(weighted_dot(next, next));
    const double lambda_next = rayleigh(next);
    u = std::move(next);
    ++result.outer_iterations;
    const bool done = std::abs(lambda_next - lambda) < config.eig_rel_tol * std::abs(lambda_next);
    lambda = lambda_next;
    if (done) {
      result.converged = true;
      break;
    }
  }
  fix_sign(u);
  result.eigenvalue = lambda;
  result.eigenvector = std::move(u);
  return result;
}

MultilevelResult multilevel_ground_state(
    const std::vector<Grid>& grids,
    const std::function<FullOperator(const Grid&)>& make_operator,
    const InverseIterationConfig& config) {
  if (grids.empty()) throw ParameterError("multilevel_ground_state: no levels");
  MultilevelResult result;
  std::optional<RealField> guess;

  for (std::size_t level = 0; level < grids.size(); ++level) {
    const Grid& grid = grids[level];
    LevelReport report;
    report.n = axis_size(grid.axes[0]);

    auto t0 = std::chrono::steady_clock::now();
    const FullOperator op = make_operator(grid);
    report.setup_seconds = seconds_since(t0);

    RealField initial = grid.field();
    if (!guess) {
      initial = op.sep.ground_state();
      initial.set_mass(grid.mass);
    } else {
      t0 = std::chrono::steady_clock::now();
      const Grid& prev = grids[level - 1];
      std::vector<Eigen::MatrixXd> mats;
      std::vector<const Eigen::MatrixXd*> mat_ptrs;
      mats.reserve(grid.dim());
      for (int a = 0; a < grid.dim(); ++a) {
        const auto* coarse = std::get_if<Basis1D>(&prev.axes[a]);
        const auto* fine = std::get_if<Basis1D>(&grid.axes[a]);
        if (!coarse || !fine)
          throw ParameterError("multilevel_ground_state: levels must be SEM grids");
        mats.push_back(interp_matrix(*coarse, *fine));
      }
      for (const auto& m : mats) mat_ptrs.push_back(&m);
      initial = kron_apply(*guess, mat_ptrs);
      initial.set_mass(grid.mass);
      report.interp_seconds = seconds_since(t0);
    }

    EigenpairResult pair = inverse_iteration(op, config, initial);
    report.outer_iterations = pair.outer_iterations;
    report.total_inner_iterations = pair.total_inner_iterations;
    report.inner_per_outer = pair.outer_iterations > 0
                                 ? static_cast<double>(pair.total_inner_iterations) /
                                       pair.outer_iterations
                                 : 0.0;
    report.eigenvalue = pair.eigenvalue;
    result.levels.push_back(report);
    guess = pair.eigenvector;
    if (level + 1 == grids.size()) result.eigenpair = std::move(pair);
  }
  return result;
}

}  // namespace kronop
