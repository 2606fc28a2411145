#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kronop/grid.hpp"
#include "kronop/operators.hpp"
#include "kronop/pcg.hpp"

namespace kronop {

/// How the inverse-iteration shift is placed relative to the separable part's
/// smallest eigenvalue lambda_min(A).
enum class ShiftMode {
  FractionOfMin,   // sigma = fraction * lambda_min(A)
  OffsetBelowMin,  // sigma = lambda_min(A) - offset
  Zero,            // sigma = 0
};

struct InverseIterationConfig {
  ShiftMode shift_mode = ShiftMode::FractionOfMin;
  double shift_fraction = 0.9;
  double shift_offset = 1e-4;
  double eig_rel_tol = 1e-12;  // stop on |d lambda| / |lambda|
  int max_outer = 60;
  // Inner solver for the non-separable path; warm-started solves near the
  // rounding floor can stall, so the stagnation exit is on by default here.
  PcgConfig inner{.stagnation_window = 100};
  bool warn_on_inner_failure = true;
};

struct EigenpairResult {
  double eigenvalue = 0.0;
  RealField eigenvector;  // mass-weighted norm 1, positive at its largest node
  int outer_iterations = 0;
  int total_inner_iterations = 0;     // PCG iterations summed over outer steps
  std::vector<int> inner_per_outer;   // empty for the direct-solve path
  bool converged = false;
};

/// Ground state by shifted inverse iteration. Separable operators use the
/// direct solve; with a non-separable diagonal each step solves
/// (H - sigma) w = u by PCG preconditioned with the unshifted separable
/// inverse, warm-started from the previous solution. The eigenvalue is the
/// mass-weighted Rayleigh quotient.
EigenpairResult inverse_iteration(const FullOperator& op, const InverseIterationConfig& config,
                                  const RealField& initial);

/// Convenience overload attaching the grid's mass weights to the guess.
inline EigenpairResult inverse_iteration(const FullOperator& op,
                                         const InverseIterationConfig& config, RealField initial,
                                         const Grid& grid) {
  initial.set_mass(grid.mass);
  return inverse_iteration(op, config, initial);
}

struct LevelReport {
  int n = 0;  // interior nodes per axis
  double setup_seconds = 0.0;
  double interp_seconds = 0.0;
  int outer_iterations = 0;
  double inner_per_outer = 0.0;  // mean PCG iterations per outer step
  int total_inner_iterations = 0;
  double eigenvalue = 0.0;
};

struct MultilevelResult {
  EigenpairResult eigenpair;  // from the finest level
  std::vector<LevelReport> levels;
};

/// Coarse-to-fine continuation: solve on each SEM grid, prolong the
/// eigenvector by per-axis piecewise-linear interpolation, renormalize, and
/// continue. The coarsest level starts from the separable part's ground state.
MultilevelResult multilevel_ground_state(
    const std::vector<Grid>& grids,
    const std::function<FullOperator(const Grid&)>& make_operator,
    const InverseIterationConfig& config);

}  // namespace kronop
