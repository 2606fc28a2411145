#include "kronop/axis.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kronop/errors.hpp"

namespace kronop {

int axis_size(const Axis& axis) {
  return std::visit(
      [](const auto& b) {
        if constexpr (requires { b.size(); })
          return b.size();
        else
          return b.size;
      },
      axis);
}

const std::vector<double>& axis_nodes(const Axis& axis) {
  return std::visit([](const auto& b) -> const std::vector<double>& { return b.nodes; }, axis);
}

const std::vector<double>& axis_mass(const Axis& axis) {
  return std::visit([](const auto& b) -> const std::vector<double>& { return b.mass; }, axis);
}

void sym_eig(const Eigen::MatrixXd& a, Eigen::VectorXd& eigenvalues, Eigen::MatrixXd& q) {
  if (a.rows() != a.cols()) throw ParameterError("sym_eig: matrix must be square");
  const double amax = a.cwiseAbs().maxCoeff();
  if (amax > 0.0) {
    const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8 * amax) throw ParameterError("sym_eig: input not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
  if (es.info() != Eigen::Success)
    throw NumericalError("sym_eig: eigenvalue iteration did not converge");
  eigenvalues = es.eigenvalues();
  q = es.eigenvectors();
  // Sign convention: the largest-magnitude component is made positive. Ties
  // (symmetric grids give mirror-image components of equal magnitude) break
  // toward the lowest index, with a tolerance so rounding cannot flip it.
  for (int j = 0; j < q.cols(); ++j) {
    const double max_abs = q.col(j).cwiseAbs().maxCoeff();
    for (int i = 0; i < q.rows(); ++i) {
      if (std::abs(q(i, j)) >= (1.0 - 1e-8) * max_abs) {
        if (q(i, j) < 0.0) q.col(j) = -q.col(j);
        break;
      }
    }
  }
}

AxisEigens build_axis(const Basis1D& basis, const std::function<double(double)>& f) {
  const int n = basis.size();
  Eigen::VectorXd inv_sqrt_m(n), sqrt_m(n);
  for (int i = 0; i < n; ++i) {
    sqrt_m(i) = std::sqrt(basis.mass[i]);
    inv_sqrt_m(i) = 1.0 / sqrt_m(i);
  }
  Eigen::MatrixXd a = inv_sqrt_m.asDiagonal() * basis.stiffness * inv_sqrt_m.asDiagonal();
  for (int i = 0; i < n; ++i) {
    const double fx = f(basis.nodes[i]);
    if (!std::isfinite(fx)) throw ParameterError("build_axis: f not finite at a node");
    a(i, i) += fx;
  }
  AxisEigens out;
  Eigen::MatrixXd q;
  sym_eig(a, out.eigenvalues, q);
  out.transform = inv_sqrt_m.asDiagonal() * q;
  out.inverse_transform = q.transpose() * sqrt_m.asDiagonal();
  return out;
}

AxisEigens build_axis(const HermiteBasis& basis, const std::function<double(double)>& f) {
  const HermiteOperator op = hermite_operator(basis, f);
  AxisEigens out;
  Eigen::MatrixXd q;
  sym_eig(op.sym, out.eigenvalues, q);
  out.transform = op.scale.asDiagonal() * q;
  out.inverse_transform = q.transpose() * op.scale.cwiseInverse().asDiagonal();
  return out;
}

AxisEigens build_axis(const Axis& axis, const std::function<double(double)>& f) {
  return std::visit([&](const auto& b) { return build_axis(b, f); }, axis);
}

}  // namespace kronop
