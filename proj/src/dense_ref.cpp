#include "kronop/dense_ref.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kronop/errors.hpp"

namespace kronop {
namespace dense_ref {

Eigen::MatrixXd axis_operator(const Basis1D& basis, const std::function<double(double)>& f) {
  const int n = basis.size();
  Eigen::MatrixXd h = basis.stiffness;
  for (int i = 0; i < n; ++i) h.row(i) /= basis.mass[i];
  for (int i = 0; i < n; ++i) h(i, i) += f(basis.nodes[i]);
  return h;
}

Eigen::MatrixXd axis_operator(const HermiteBasis& basis, const std::function<double(double)>& f) {
  Eigen::MatrixXd h = -(basis.diff * basis.diff);
  for (int i = 0; i < basis.size; ++i) h(i, i) += f(basis.nodes[i]);
  return h;
}

Eigen::MatrixXd sym_axis_operator(const Basis1D& basis, const std::function<double(double)>& f) {
  const int n = basis.size();
  Eigen::MatrixXd h = basis.stiffness;
  for (int i = 0; i < n; ++i) {
    const double si = 1.0 / std::sqrt(basis.mass[i]);
    for (int j = 0; j < n; ++j) h(i, j) *= si / std::sqrt(basis.mass[j]);
  }
  for (int i = 0; i < n; ++i) h(i, i) += f(basis.nodes[i]);
  return h;
}

Eigen::MatrixXd assemble(const std::vector<Eigen::MatrixXd>& axis_ops, const RealField* diagonal,
                         double shift) {
  const int d = static_cast<int>(axis_ops.size());
  if (d < 1) throw ParameterError("dense_ref::assemble: no axes");
  std::vector<int> sizes(d);
  std::size_t total = 1;
  for (int a = 0; a < d; ++a) {
    sizes[a] = static_cast<int>(axis_ops[a].rows());
    total *= static_cast<std::size_t>(sizes[a]);
  }
  if (total > 20000) throw CapabilityError("dense_ref::assemble: N > 20000");
  if (diagonal && diagonal->size() != total)
    throw ParameterError("dense_ref::assemble: diagonal size mismatch");

  const auto n = static_cast<Eigen::Index>(total);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);

  // Row multi-index walk; for each axis add H_a(j, i_a) at the column where
  // only that axis index differs.
  std::vector<int> idx(d, 0);
  std::vector<std::size_t> stride(d, 1);
  for (int a = 1; a < d; ++a) stride[a] = stride[a - 1] * sizes[a - 1];
  for (std::size_t row = 0; row < total; ++row) {
    for (int a = 0; a < d; ++a) {
      const std::size_t base = row - idx[a] * stride[a];
      for (int j = 0; j < sizes[a]; ++j)
        h(row, base + j * stride[a]) += axis_ops[a](idx[a], j);
    }
    if (diagonal) h(row, row) += (*diagonal)[row];
    h(row, row) -= shift;
    for (int a = 0; a < d; ++a) {
      if (++idx[a] < sizes[a]) break;
      idx[a] = 0;
    }
  }
  return h;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd& h, double t) {
  if (h.rows() != h.cols()) throw ParameterError("expm_hermitian: matrix must be square");
  if (h.rows() > 4000) throw CapabilityError("expm_hermitian: N > 4000");
  const double hmax = h.cwiseAbs().maxCoeff();
  if (hmax > 0.0 && (h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-8 * hmax)
    throw ParameterError("expm_hermitian: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericalError("expm_hermitian: eigendecomposition failed");
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    const double p = -es.eigenvalues()(i) * t;
    phases(i) = std::complex<double>(std::cos(p), std::sin(p));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXd& h, double t) {
  return expm_hermitian(Eigen::MatrixXcd(h.cast<std::complex<double>>()), t);
}

Eigen::MatrixXcd expm_taylor(const Eigen::MatrixXcd& a) {
  // Scale so the norm is small, run the Taylor series to machine precision,
  // then square back.
  const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  double scale = 1.0;
  while (nrm * scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXcd as = a * scale;
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = (term * as) / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

ClusteringReport clustering_report(const std::vector<Eigen::MatrixXd>& sym_axis_ops,
                                   const RealField& v2, double epsilon) {
  std::size_t total = 1;
  for (const auto& op : sym_axis_ops) total *= static_cast<std::size_t>(op.rows());
  if (total > 5000) throw CapabilityError("clustering_report: N > 5000");

  const Eigen::MatrixXd a = assemble(sym_axis_ops, nullptr, 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_a(a);
  if (es_a.info() != Eigen::Success)
    throw NumericalError("clustering_report: eigendecomposition of A failed");
  if (es_a.eigenvalues()(0) <= 0.0)
    throw ParameterError("clustering_report: A is not positive definite");

  const Eigen::VectorXd inv_sqrt = es_a.eigenvalues().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd a_inv_half =
      es_a.eigenvectors() * inv_sqrt.asDiagonal() * es_a.eigenvectors().transpose();
  const Eigen::MatrixXd b = a_inv_half * v2.flat().asDiagonal() * a_inv_half;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_b(0.5 * (b + b.transpose()));
  if (es_b.info() != Eigen::Success)
    throw NumericalError("clustering_report: eigendecomposition of the perturbation failed");

  ClusteringReport report;
  report.spectrum = es_b.eigenvalues().array() + 1.0;
  for (Eigen::Index i = 0; i < report.spectrum.size(); ++i) {
    const double mu = report.spectrum(i);
    if (mu < 1.0 - epsilon || mu > 1.0 + epsilon) ++report.outliers;
  }
  report.condition = report.spectrum(report.spectrum.size() - 1) / report.spectrum(0);
  return report;
}

}  // namespace dense_ref
}  // namespace kronop
