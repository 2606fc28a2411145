#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace kronop {

/// Hermite-function collocation on the real line: Hermite-Gauss nodes,
/// values of the highest-degree normalized Hermite function at the nodes,
/// and the collocation differentiation matrix. No boundary conditions are
/// imposed; the basis functions decay like exp(-x^2/2).
struct HermiteBasis {
  int size = 0;               // n
  std::vector<double> nodes;  // ascending, symmetric about 0
  std::vector<double> psi_last;  // psi_{n-1}(x_j), the similarity scaling
  Eigen::MatrixXd diff;          // D(i,j) = psi_{n-1}(x_i) / (psi_{n-1}(x_j) (x_i - x_j)), D(i,i)=0
  std::vector<double> mass;      // quadrature weights 1 / (n psi_{n-1}(x_j)^2)
};

/// Build the n-point Hermite basis, 2 <= n <= 745. Nodes are the eigenvalues
/// of the symmetric tridiagonal Jacobi matrix (zero diagonal, off-diagonal
/// sqrt(k/2)); psi_{n-1} is evaluated by the normalized three-term recurrence
///   psi_{k+1}(x) = x sqrt(2/(k+1)) psi_k(x) - sqrt(k/(k+1)) psi_{k-1}(x),
///   psi_0(x) = pi^{-1/4} exp(-x^2/2).
/// Above n ~ 745 the recurrence underflows at the outermost nodes in FP64.
HermiteBasis hermite_basis(int n);

/// Symmetrized 1D operator -D^2 + diag(f(x_j)): conjugating the derivative by
/// diag(1/psi_{n-1}) makes it exactly antisymmetric in exact arithmetic, so
/// the conjugated -D^2 is symmetric; the result is averaged with its
/// transpose after asserting the pre-averaging asymmetry is below 1e-8.
struct HermiteOperator {
  Eigen::MatrixXd sym;    // diag(1/psi) (-D^2) diag(psi) + diag(f)
  Eigen::VectorXd scale;  // psi_{n-1}(x_j); T = diag(scale) Q, T^{-1} = Q^T diag(1/scale)
};

HermiteOperator hermite_operator(const HermiteBasis& basis,
                                 const std::function<double(double)>& f);

}  // namespace kronop
