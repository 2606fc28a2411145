#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "kronop/basis1d.hpp"
#include "kronop/hermite.hpp"
#include "kronop/tensor.hpp"

namespace kronop {

// Dense brute-force references for small instances. These deliberately avoid
// the eigendecomposition code path: 1D operators come straight from the
// assembled matrices and d-dimensional operators from an explicit Kronecker
// sum, so agreement with the factored path is a genuine cross-check.
namespace dense_ref {

/// M^{-1} S + diag(f) straight from the assembled SEM matrices.
Eigen::MatrixXd axis_operator(const Basis1D& basis, const std::function<double(double)>& f);

/// -D^2 + diag(f) from the Hermite differentiation matrix (unsymmetrized).
Eigen::MatrixXd axis_operator(const HermiteBasis& basis, const std::function<double(double)>& f);

/// Symmetrized SEM axis operator M^{-1/2} S M^{-1/2} + diag(f); same spectrum
/// as axis_operator, used where a symmetric form is required.
Eigen::MatrixXd sym_axis_operator(const Basis1D& basis, const std::function<double(double)>& f);

/// Explicit Kronecker sum of 1D operators plus an optional nodal diagonal and
/// spectral shift: sum_d I x..x H_d x..x I + diag(v) - shift I, with the first
/// axis fastest-varying. Refuses N > 20000.
Eigen::MatrixXd assemble(const std::vector<Eigen::MatrixXd>& axis_ops, const RealField* diagonal,
                         double shift = 0.0);

/// exp(-i H t) for Hermitian H via eigendecomposition, N <= 4000.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double t);
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXd& h, double t);

/// Second, independent matrix exponential: scaling and squaring on a Taylor
/// series. Used only to validate expm_hermitian.
Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& a);

/// Spectrum of the preconditioned operator A^{-1}(A + diag(v2)) computed in
/// the symmetric similarity I + A^{-1/2} diag(v2) A^{-1/2}: full spectrum,
/// count outside (1-eps, 1+eps), and the condition number mu_max / mu_min.
/// The axis operators must be the symmetric forms; A must be positive
/// definite. Refuses N > 5000.
struct ClusteringReport {
  Eigen::VectorXd spectrum;  // ascending
  int outliers = 0;
  double condition = 0.0;
};
ClusteringReport clustering_report(const std::vector<Eigen::MatrixXd>& sym_axis_ops,
                                   const RealField& v2, double epsilon);

}  // namespace dense_ref
}  // namespace kronop
