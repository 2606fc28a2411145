#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>
#include <vector>

#include "kronop/basis1d.hpp"
#include "kronop/hermite.hpp"

namespace kronop {

/// One axis of the tensor-product discretization.
using Axis = std::variant<Basis1D, HermiteBasis>;

int axis_size(const Axis& axis);
const std::vector<double>& axis_nodes(const Axis& axis);
const std::vector<double>& axis_mass(const Axis& axis);

/// Eigen-factorization of the 1D operator on one axis: H = T diag(L) T^{-1},
/// with T = M^{-1/2} Q (SEM) or diag(psi) Q (Hermite). The transforms are the
/// per-axis factors of the d-dimensional forward/backward passes.
struct AxisEigens {
  Eigen::VectorXd eigenvalues;         // ascending
  Eigen::MatrixXd transform;           // T
  Eigen::MatrixXd inverse_transform;   // T^{-1}

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Symmetric eigendecomposition with deterministic output: eigenvalues
/// ascending, each eigenvector's largest-magnitude component made positive.
/// Requires max-norm asymmetry <= 1e-8 relative.
void sym_eig(const Eigen::MatrixXd& a, Eigen::VectorXd& eigenvalues, Eigen::MatrixXd& q);

/// Factorize one axis of -Laplacian + f: SEM forms
/// M^{-1/2} S M^{-1/2} + diag(f), Hermite goes through hermite_operator.
AxisEigens build_axis(const Basis1D& basis, const std::function<double(double)>& f);
AxisEigens build_axis(const HermiteBasis& basis, const std::function<double(double)>& f);
AxisEigens build_axis(const Axis& axis, const std::function<double(double)>& f);

}  // namespace kronop
