#pragma once

#include <optional>
#include <vector>

#include "kronop/operators.hpp"
#include "kronop/pcg.hpp"

namespace kronop {

/// Defocusing Gross-Pitaevskii energy minimization data: the linear
/// Hamiltonian -Laplacian + V (trap in the separable part, optional V2
/// diagonal), the plain Laplacian on the same grid (the modified-H1 metric
/// solves (-Laplacian + alpha)^{-1}), and the interaction strength beta >= 0.
struct GpeProblem {
  FullOperator hamiltonian;
  SeparableOperator laplacian;
  double beta = 0.0;
  std::shared_ptr<const MassWeights> mass;  // grid mass layout for the L2 sphere
};

/// E(u) = 1/2 <u, H u>_M + (beta/4) sum m u^4 for real u.
double gpe_energy(const GpeProblem& problem, const RealField& u);

enum class GpeFlowKind {
  ModifiedH1,      // fixed metric (grad w, grad z) + alpha (w, z); two direct solves per step
  AdaptiveMetric,  // a_u metric; one PCG solve of (-Lap + V + beta u^2) per step
};

enum class GpeInit { Constant, Eigenfunction, Supplied };

struct GpeFlowConfig {
  GpeFlowKind kind = GpeFlowKind::ModifiedH1;
  double step = 0.1;          // tau; typical value 1.0 for the adaptive metric
  double metric_shift = 20.0; // alpha in the modified-H1 metric
  double energy_rel_tol = 1e-12;
  int max_iterations = 20000;
  PcgConfig inner{.stagnation_window = 100};  // adaptive-metric inner solves
  GpeInit init = GpeInit::Eigenfunction;
  bool record_history = false;
};

struct GpeHistoryRow {
  int iteration = 0;
  double energy = 0.0;
  double rel_change = 0.0;
  long linear_solves = 0;
  double seconds = 0.0;
};

struct GpeResult {
  RealField state;
  double energy = 0.0;
  double eigenvalue = 0.0;  // Rayleigh quotient of the nonlinear problem
  int iterations = 0;
  long linear_solves = 0;
  bool converged = false;
  std::vector<GpeHistoryRow> history;
};

/// Projected Riemannian gradient descent on the mass-weighted unit sphere,
/// u <- normalize(u - tau grad E). Stops when |E_k - E_{k-1}| / |E_k| falls
/// below the tolerance; raises after more than ten consecutive energy
/// increases (step size too large for the landscape).
GpeResult gpe_gradient_flow(const GpeProblem& problem, const GpeFlowConfig& config,
                            std::optional<RealField> initial = std::nullopt);

/// The projected gradient used by one flow step at state u (u must be
/// mass-normalized): tangent to the sphere, <grad, u>_M = 0. The adaptive
/// metric runs a cold inner solve here; the flow itself warm-starts.
RealField gpe_riemannian_gradient(const GpeProblem& problem, const GpeFlowConfig& config,
                                  const RealField& u);

}  // namespace kronop
