#pragma once

#include <Eigen/Dense>
#include <vector>

namespace kronop {

/// Gauss-Lobatto-Legendre rule of polynomial degree k (k+1 nodes on [-1,1],
/// endpoints included). Exact for polynomials of degree <= 2k-1.
struct GllRule {
  int degree = 0;               // k
  std::vector<double> nodes;    // ascending, nodes.front() == -1, nodes.back() == +1
  std::vector<double> weights;  // positive, sum == 2
  Eigen::MatrixXd diff;         // diff(i,j) = d/dx of Lagrange basis j at node i
};

/// Build the GLL rule for 1 <= degree <= 40. Nodes are the roots of
/// (1-x^2) P'_k(x), found by Newton iteration from Chebyshev-Lobatto guesses
/// (bisection fallback); weights are 2 / (k (k+1) P_k(x_j)^2).
GllRule gll_rule(int degree);

/// Gauss-Legendre rule: nodes are roots of P_m, weights 2/((1-x^2) P'_m(x)^2).
struct GaussRule {
  std::vector<double> nodes;    // ascending on (-1,1)
  std::vector<double> weights;  // sum == 2
};

/// Public rule, 1 <= points <= 16 (what the splitting quadratures use).
GaussRule gauss_legendre(int points);

namespace detail {
// Uncapped variant for internal reference quadratures.
GaussRule gauss_legendre_any(int points);
// Legendre P_k and P'_k at x (|x| < 1 required for the derivative formula).
void legendre_pair(int k, double x, double& p, double& dp);
// Barycentric weights of an ascending node set.
std::vector<double> barycentric_weights(const std::vector<double>& nodes);
}  // namespace detail

/// Differentiation matrix of the Lagrange basis on an arbitrary ascending node
/// set, via barycentric weights; rows sum to zero exactly by construction.
Eigen::MatrixXd lagrange_diff_matrix(const std::vector<double>& nodes);

/// Values of the Lagrange basis polynomials at point x (barycentric form;
/// returns the unit vector when x coincides with a node).
std::vector<double> lagrange_eval_weights(const std::vector<double>& nodes, double x);

}  // namespace kronop
