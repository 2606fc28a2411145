#include "kronop/basis1d.hpp"

#include <algorithm>
#include <cmath>

#include "kronop/errors.hpp"

namespace kronop {

Basis1D assemble_sem(double half_width, int cell_count, int degree) {
  if (half_width <= 0.0) throw ParameterError("assemble_sem: half_width must be positive");
  if (cell_count < 1) throw ParameterError("assemble_sem: cell_count must be >= 1");
  if (degree < 1) throw ParameterError("assemble_sem: degree must be >= 1");

  Basis1D basis;
  basis.half_width = half_width;
  basis.cell_count = cell_count;
  basis.degree = degree;
  basis.rule = gll_rule(degree);

  const int k = degree;
  const double h = 2.0 * half_width / cell_count;
  const int n_global = cell_count * k + 1;

  std::vector<double> xg(n_global);
  for (int c = 0; c < cell_count; ++c) {
    const double left = -half_width + c * h;
    for (int j = 0; j <= k; ++j) xg[c * k + j] = left + (basis.rule.nodes[j] + 1.0) * h / 2.0;
  }
  xg.front() = -half_width;
  xg.back() = half_width;

  std::vector<double> mg(n_global, 0.0);
  Eigen::MatrixXd sg = Eigen::MatrixXd::Zero(n_global, n_global);

  // Local stiffness on the reference cell: (2/h) sum_q w_q D(q,i) D(q,j).
  const Eigen::MatrixXd& d = basis.rule.diff;
  Eigen::MatrixXd s_loc(k + 1, k + 1);
  for (int i = 0; i <= k; ++i)
    for (int j = 0; j <= k; ++j) {
      double acc = 0.0;
      for (int q = 0; q <= k; ++q) acc += basis.rule.weights[q] * d(q, i) * d(q, j);
      s_loc(i, j) = (2.0 / h) * acc;
    }

  for (int c = 0; c < cell_count; ++c) {
    const int base = c * k;
    for (int i = 0; i <= k; ++i) {
      mg[base + i] += basis.rule.weights[i] * h / 2.0;
      for (int j = 0; j <= k; ++j) sg(base + i, base + j) += s_loc(i, j);
    }
  }

  // Dirichlet: delete the first and last global row/column.
  const int n = n_global - 2;
  basis.nodes.assign(xg.begin() + 1, xg.end() - 1);
  basis.mass.assign(mg.begin() + 1, mg.end() - 1);
  basis.stiffness = sg.block(1, 1, n, n);
  return basis;
}

Eigen::MatrixXd interp_matrix(const Basis1D& coarse, const Basis1D& fine) {
  if (coarse.half_width != fine.half_width)
    throw ParameterError("interp_matrix: bases must share the same domain");
  if (fine.size() < coarse.size())
    throw ParameterError("interp_matrix: fine basis must not be smaller than the coarse one");

  const int nc = coarse.size();
  const double l = coarse.half_width;
  // Coarse node set extended by the (zero-valued) endpoints.
  std::vector<double> xe;
  xe.reserve(nc + 2);
  xe.push_back(-l);
  xe.insert(xe.end(), coarse.nodes.begin(), coarse.nodes.end());
  xe.push_back(l);

  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(fine.size(), nc);
  for (int i = 0; i < fine.size(); ++i) {
    const double t = fine.nodes[i];
    auto it = std::upper_bound(xe.begin(), xe.end(), t);
    int j = static_cast<int>(it - xe.begin()) - 1;
    j = std::clamp(j, 0, nc);  // interval [xe[j], xe[j+1]]
    const double w1 = (t - xe[j]) / (xe[j + 1] - xe[j]);
    if (j - 1 >= 0 && j - 1 < nc) p(i, j - 1) = 1.0 - w1;  // xe[j] is coarse node j-1
    if (j < nc) p(i, j) = w1;                              // xe[j+1] is coarse node j
  }
  return p;
}

Eigen::RowVectorXd eval_weights_row(const Basis1D& basis, double x) {
  const double l = basis.half_width;
  if (x < -l || x > l) throw ParameterError("eval_cellwise: target outside [-L, L]");
  // A target that coincides with a stored node returns that nodal value.
  const auto hit = std::lower_bound(basis.nodes.begin(), basis.nodes.end(), x);
  if (hit != basis.nodes.end() && *hit == x) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(basis.size());
    row(static_cast<int>(hit - basis.nodes.begin())) = 1.0;
    return row;
  }
  const int k = basis.degree;
  const double h = basis.cell_width();
  int c = static_cast<int>(std::floor((x + l) / h));
  c = std::clamp(c, 0, basis.cell_count - 1);
  const double left = -l + c * h;
  const double xi = 2.0 * (x - left) / h - 1.0;
  const std::vector<double> wloc = lagrange_eval_weights(basis.rule.nodes, xi);

  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(basis.size());
  for (int j = 0; j <= k; ++j) {
    const int g = c * k + j;  // index in the full node set including endpoints
    if (g == 0 || g == basis.cell_count * k) continue;  // boundary value is zero
    row(g - 1) += wloc[j];
  }
  return row;
}

std::vector<double> eval_cellwise(const Basis1D& basis,
                                  std::span<const double> interior_values,
                                  std::span<const double> targets) {
  if (static_cast<int>(interior_values.size()) != basis.size())
    throw ParameterError("eval_cellwise: nodal value count mismatch");
  const Eigen::Map<const Eigen::VectorXd> v(interior_values.data(), basis.size());
  std::vector<double> out(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t)
    out[t] = eval_weights_row(basis, targets[t]).dot(v);
  return out;
}

}  // namespace kronop
