#pragma once

#include <functional>
#include <vector>

#include "kronop/tensor.hpp"

namespace kronop {

struct PcgConfig {
  double rel_tol = 1e-12;
  int max_iter = 500;
  bool record_history = false;
  // Stop on the preconditioned-norm residual instead of the plain l2 one.
  bool preconditioned_norm = false;
  // When positive: give up if the best residual has not improved by at least
  // 1% within this many iterations (warm starts near the rounding floor can
  // stall far above rel_tol). 0 keeps the plain tol/max_iter semantics.
  int stagnation_window = 0;
};

struct PcgReport {
  int iterations = 0;
  double final_residual = 0.0;  // relative, in the configured stopping norm
  bool converged = false;
  std::vector<double> history;  // per-iteration relative residuals when recorded
};

using LinearMap = std::function<RealField(const RealField&)>;

/// Preconditioned conjugate gradient for SPD apply_a / precond. Solves
/// apply_a(x) = b starting from the passed-in x (warm start); the solution is
/// returned in x. Stops when ||b - A x||_2 / ||b||_2 <= rel_tol. Reaching
/// max_iter returns the best iterate with converged = false; an indefinite
/// search direction throws.
PcgReport pcg(const LinearMap& apply_a, const LinearMap& precond, const RealField& b,
              RealField& x, const PcgConfig& config = {});

}  // namespace kronop
