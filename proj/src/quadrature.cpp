#include "kronop/quadrature.hpp"

#include <cmath>
#include <limits>

#include "kronop/errors.hpp"

namespace kronop {

namespace detail {

void legendre_pair(int k, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  if (k == 0) {
    p = 1.0;
    dp = 0.0;
    return;
  }
  for (int m = 2; m <= k; ++m) {
    const double p2 = ((2 * m - 1) * x * p1 - (m - 1) * p0) / m;
    p0 = p1;
    p1 = p2;
  }
  p = p1;
  dp = k * (x * p1 - p0) / (x * x - 1.0);
}

std::vector<double> barycentric_weights(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> w(n, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j != i) w[i] *= nodes[i] - nodes[j];
    }
    w[i] = 1.0 / w[i];
  }
  return w;
}

GaussRule gauss_legendre_any(int m) {
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  if (m == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
    return rule;
  }
  for (int i = 0; i < m; ++i) {
    // Root i of P_m, counted from the left.
    double x = -std::cos(M_PI * (4.0 * i + 3.0) / (4.0 * m + 2.0));
    double p, dp;
    bool done = false;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(m, x, p, dp);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        done = true;
        break;
      }
    }
    if (!done) throw NumericalError("gauss_legendre: Newton failed to converge");
    legendre_pair(m, x, p, dp);
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  // Enforce exact symmetry of the computed rule.
  for (int i = 0; i < m / 2; ++i) {
    const int j = m - 1 - i;
    const double xm = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -xm;
    rule.nodes[j] = xm;
    const double wm = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = rule.weights[j] = wm;
  }
  if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
  return rule;
}

}  // namespace detail

GaussRule gauss_legendre(int points) {
  if (points < 1 || points > 16)
    throw ParameterError("gauss_legendre: points must be in [1, 16]");
  return detail::gauss_legendre_any(points);
}

Eigen::MatrixXd lagrange_diff_matrix(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  const std::vector<double> b = detail::barycentric_weights(nodes);
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      d(i, j) = (b[j] / b[i]) / (nodes[i] - nodes[j]);
      diag -= d(i, j);
    }
    d(i, i) = diag;  // rows sum to zero exactly
  }
  return d;
}

std::vector<double> lagrange_eval_weights(const std::vector<double>& nodes, double x) {
  const int n = static_cast<int>(nodes.size());
  std::vector<double> w(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (x == nodes[j]) {
      w[j] = 1.0;
      return w;
    }
  }
  const std::vector<double> b = detail::barycentric_weights(nodes);
  double denom = 0.0;
  for (int j = 0; j < n; ++j) {
    w[j] = b[j] / (x - nodes[j]);
    denom += w[j];
  }
  for (int j = 0; j < n; ++j) w[j] /= denom;
  return w;
}

GllRule gll_rule(int degree) {
  if (degree < 1 || degree > 40)
    throw ParameterError("gll_rule: degree must be in [1, 40]");
  const int k = degree;
  GllRule rule;
  rule.degree = k;
  rule.nodes.assign(k + 1, 0.0);
  rule.weights.assign(k + 1, 0.0);
  rule.nodes[0] = -1.0;
  rule.nodes[k] = 1.0;

  // Interior nodes: roots of P'_k via Newton, P''_k from the Legendre ODE.
  for (int i = 1; i < k; ++i) {
    double x = -std::cos(M_PI * i / k);
    double lo = -std::cos(M_PI * (i - 0.5) / k);
    double hi = -std::cos(M_PI * (i + 0.5) / k);
    bool done = (k == 2 && i == 1);  // P'_2 root is exactly 0
    if (done) x = 0.0;
    for (int it = 0; !done && it < 100; ++it) {
      double p, dp;
      detail::legendre_pair(k, x, p, dp);
      const double ddp = (2.0 * x * dp - k * (k + 1.0) * p) / (1.0 - x * x);
      const double dx = dp / ddp;
      x -= dx;
      if (x <= lo || x >= hi) break;  // left the bracket; fall back to bisection
      if (std::abs(dx) < 1e-14) done = true;
    }
    if (!done) {
      // Bisection between Chebyshev brackets.
      double plo, dplo, tmp;
      detail::legendre_pair(k, lo, tmp, dplo);
      plo = dplo;
      for (int it = 0; it < 200; ++it) {
        x = 0.5 * (lo + hi);
        double p, dp;
        detail::legendre_pair(k, x, p, dp);
        if ((dp > 0) == (plo > 0)) {
          lo = x;
          plo = dp;
        } else {
          hi = x;
        }
        if (hi - lo < 1e-15) break;
      }
    }
    rule.nodes[i] = x;
  }
  // Symmetrize.
  for (int i = 0; i <= k / 2; ++i) {
    const int j = k - i;
    const double xm = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -xm;
    rule.nodes[j] = xm;
  }
  if (k % 2 == 0) rule.nodes[k / 2] = 0.0;

  for (int i = 0; i <= k; ++i) {
    double p, dp;
    detail::legendre_pair(k, rule.nodes[i], p, dp);
    rule.weights[i] = 2.0 / (k * (k + 1.0) * p * p);
  }
  rule.diff = lagrange_diff_matrix(rule.nodes);
  return rule;
}

}  // namespace kronop
