#include "kronop/hermite.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kronop/errors.hpp"

namespace kronop {

HermiteBasis hermite_basis(int n) {
  if (n < 2) throw ParameterError("hermite_basis: need n >= 2");
  if (n > 745)
    throw CapabilityError(
        "hermite_basis: n > 745 underflows the Hermite recurrence in FP64");

  HermiteBasis basis;
  basis.size = n;

  // Nodes: eigenvalues of the Jacobi matrix, off-diagonal sqrt(k/2).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub(k - 1) = std::sqrt(k / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("hermite_basis: Jacobi eigenvalue iteration failed");
  basis.nodes.resize(n);
  for (int i = 0; i < n; ++i) basis.nodes[i] = es.eigenvalues()(i);
  // Symmetrize the node set exactly.
  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const double xm = 0.5 * (basis.nodes[j] - basis.nodes[i]);
    basis.nodes[i] = -xm;
    basis.nodes[j] = xm;
  }
  if (n % 2 == 1) basis.nodes[n / 2] = 0.0;

  // psi_{n-1} at the nodes via the stable normalized recurrence.
  basis.psi_last.resize(n);
  for (int j = 0; j < n; ++j) {
    const double x = basis.nodes[j];
    double pk = std::pow(M_PI, -0.25) * std::exp(-x * x / 2.0);  // psi_0
    double pkm1 = 0.0;
    for (int k = 0; k < n - 1; ++k) {
      const double pk1 = x * std::sqrt(2.0 / (k + 1)) * pk - std::sqrt(k / (k + 1.0)) * pkm1;
      pkm1 = pk;
      pk = pk1;
    }
    if (pk == 0.0)
      throw CapabilityError("hermite_basis: psi_{n-1} underflowed at a node");
    basis.psi_last[j] = pk;
  }

  basis.diff = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j)
        basis.diff(i, j) =
            basis.psi_last[i] / (basis.psi_last[j] * (basis.nodes[i] - basis.nodes[j]));

  basis.mass.resize(n);
  for (int j = 0; j < n; ++j)
    basis.mass[j] = 1.0 / (n * basis.psi_last[j] * basis.psi_last[j]);
  return basis;
}

HermiteOperator hermite_operator(const HermiteBasis& basis,
                                 const std::function<double(double)>& f) {
  const int n = basis.size;
  HermiteOperator op;
  op.scale = Eigen::Map<const Eigen::VectorXd>(basis.psi_last.data(), n);

  // W D W^{-1} with W = diag(1/psi) has entries 1/(x_i - x_j), antisymmetric
  // up to rounding; its square is then symmetric.
  Eigen::MatrixXd wdw(n, n);
  for (int i = 0; i < n; ++i) {
    wdw(i, i) = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != i) wdw(i, j) = 1.0 / (basis.nodes[i] - basis.nodes[j]);
  }
  Eigen::MatrixXd a = -(wdw * wdw);
  for (int j = 0; j < n; ++j) {
    const double fx = f(basis.nodes[j]);
    if (!std::isfinite(fx)) throw ParameterError("hermite_operator: f not finite at a node");
    a(j, j) += fx;
  }

  const double amax = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * amax)
    throw NumericalError("hermite_operator: symmetrization degraded at n = " +
                         std::to_string(n));
  op.sym = 0.5 * (a + a.transpose());
  return op;
}

}  // namespace kronop
