#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kronop/grid.hpp"

namespace kronop {

enum class PotentialKind {
  SeparableOscillatory,  // sum_k (q_k x_k^2 + a sin^2(pi x_k / 4)); fully separable
  HarmonicTrap,          // sum_k x_k^2
  Quartic,               // anisotropic harmonic + quartic (x^2+y^2)^2 coupling, 3D
  Stirrer,               // harmonic trap + localized Gaussian bump, 3D
  Coulomb2D2Body,        // two particles in 2D, soft Coulomb pair term (4 axes)
  Coulomb3D2Body,        // two particles in 3D (6 axes)
  Coulomb3D3Body,        // three particles in 3D (9 axes)
};

PotentialKind potential_kind_from_string(const std::string& name);
std::string to_string(PotentialKind kind);

struct PotentialParams {
  // separable oscillatory
  std::vector<double> quad_coeffs;  // default all 1
  double osc_amplitude = 100.0;

  // quartic: V = 2(1-alpha)(g_x x^2 + g_y y^2) + (kappa/2)(x^2+y^2)^2 + g_z z^2,
  // split with separable part g_x x^2 + g_y y^2 + g_z z^2
  double alpha = 1.4;
  double kappa = 0.3;
  std::vector<double> gammas;  // default (1,1,3) quartic, (1,1,2) stirrer

  // stirrer bump 2 w0 exp(-delta ((x - r0)^2 + y^2))
  double stirrer_height = 4.0;  // w0
  double stirrer_decay = 1.0;   // delta
  double stirrer_center = 1.0;  // r0

  // soft Coulomb c / sqrt(|xi - xj|^2 + delta^2)
  double coulomb_strength = 1.0;   // c
  double coulomb_softening = 0.1;  // delta
};

/// Split potential V = V1 + V2 with separable per-axis parts and an optional
/// non-separable nodal field, exactly as the experiments define them.
struct BuiltPotential {
  std::vector<std::function<double(double)>> separable;
  std::optional<RealField> nonseparable;
};

BuiltPotential build_potential(PotentialKind kind, const PotentialParams& params,
                               const Grid& grid);

/// Assemble the full operator (separable axes + V2 diagonal) for a potential.
FullOperator build_full_operator(const Grid& grid, const BuiltPotential& potential,
                                 double shift = 0.0);

}  // namespace kronop
