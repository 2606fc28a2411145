#pragma once

#include <variant>
#include <vector>

#include "kronop/operators.hpp"

namespace kronop {

/// Yoshida triple-jump coefficients: 2 g1 + g2 = 1 and 2 g1^3 + g2^3 = 0,
/// cancelling the leading third-order error of a symmetric second-order step.
struct YoshidaCoeffs {
  double gamma1;
  double gamma2;
};
YoshidaCoeffs yoshida_coeffs();

enum class Composition {
  Single,   // one quadrature-product step per dt: second order
  Yoshida,  // triple composition of the above: fourth order
};

struct SplitSpec {
  int quad_points = 1;  // M, Gauss-Legendre nodes inside each step
  Composition composition = Composition::Single;
  double dt = 0.0;
  double total_time = 0.0;
  bool merge_across_steps = false;   // coalesce adjacent A-propagations
  bool mass_weighted_error = false;  // error norm; plain l2 by default
};

/// One product-formula step for i d/dt psi = (A + B) psi with fast-forwarded
/// separable part A and pointwise diagonal B: the interaction-picture
/// quadrature exponential is realized as an alternating product
///   e^{-iA s_1} -> e^{-i w_1 h B} -> e^{-iA (s_2 - s_1)} -> ... -> e^{-iA (h - s_M)}
/// with s_k = h (1 + xi_k)/2 and normalized Gauss-Legendre weights w_k
/// (exactly M+1 A-propagations and M pointwise multiplications). M = 1
/// is the symmetric second-order splitting; h may be negative.
ComplexField qhop_step(const SeparableOperator& a, const RealField& b_diag,
                       const ComplexField& psi, double h, int quad_points);

/// Triple composition qhop(g1 h) qhop(g2 h) qhop(g1 h), fourth order.
ComplexField yoshida_step(const SeparableOperator& a, const RealField& b_diag,
                          const ComplexField& psi, double h, int quad_points);

/// Reference solutions for evolve(): either the exact propagator of a fully
/// separable operator, or the stationary phase e^{-i lambda T} of the initial
/// state (which must then be the corresponding eigenvector).
struct ExactReference {
  const SeparableOperator* full = nullptr;
};
struct StationaryReference {
  double eigenvalue = 0.0;
};
using SplitReference = std::variant<ExactReference, StationaryReference>;

struct EvolveResult {
  ComplexField state;
  double error = 0.0;
  int steps = 0;
  double seconds = 0.0;
};

/// March psi0 over total_time in steps of dt (must divide evenly), comparing
/// the final state against the reference. psi0 is normalized to unit plain
/// l2 norm first, so absolute and relative error coincide.
EvolveResult evolve(const SplitSpec& spec, const SeparableOperator& a, const RealField& b_diag,
                    const ComplexField& psi0, const SplitReference& reference);

}  // namespace kronop
