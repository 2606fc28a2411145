#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "kronop/quadrature.hpp"

namespace kronop {

enum class BoundaryCondition { Dirichlet };

/// One spatial axis discretized with Q^k spectral elements on [-L, L]:
/// uniform cells, shared GLL interface nodes, homogeneous Dirichlet ends.
/// The mass matrix is the GLL-quadrature (diagonal) mass; that diagonality is
/// what the per-axis symmetrization M^{+-1/2} relies on downstream.
struct Basis1D {
  double half_width = 0.0;  // L
  int cell_count = 0;
  int degree = 0;  // k
  GllRule rule;
  std::vector<double> nodes;  // interior nodes, ascending; size n = cell_count*degree - 1
  std::vector<double> mass;   // diagonal of M, positive
  Eigen::MatrixXd stiffness;  // n x n, symmetric positive definite
  BoundaryCondition bc = BoundaryCondition::Dirichlet;

  int size() const { return static_cast<int>(nodes.size()); }
  double cell_width() const { return 2.0 * half_width / cell_count; }
};

/// Assemble the Q^k SEM discretization with uniform cells of width 2L/N_cell.
/// Local mass diag(w_j h/2), local stiffness (2/h) sum_q w_q D(q,i) D(q,j),
/// C0-assembled, boundary rows/columns removed.
Basis1D assemble_sem(double half_width, int cell_count, int degree);

/// Piecewise-linear prolongation in nodal values from a coarse to a fine basis
/// on the same domain, treating the function as extended by zero at +-L.
/// Each row has at most two nonzeros and row sums lie in [0, 1].
Eigen::MatrixXd interp_matrix(const Basis1D& coarse, const Basis1D& fine);

/// Evaluate the cell-by-cell degree-k interpolant of interior nodal values
/// (boundary zeros appended) at arbitrary targets in [-L, L].
std::vector<double> eval_cellwise(const Basis1D& basis,
                                  std::span<const double> interior_values,
                                  std::span<const double> targets);

/// Row of interpolation weights w such that w . interior_values equals the
/// cellwise interpolant at x. Used to build slice-evaluation matrices.
Eigen::RowVectorXd eval_weights_row(const Basis1D& basis, double x);

}  // namespace kronop
