#include "kronop/potentials.hpp"

#include <cmath>

namespace kronop {

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "sep-osc") return PotentialKind::SeparableOscillatory;
  if (name == "harmonic") return PotentialKind::HarmonicTrap;
  if (name == "quartic") return PotentialKind::Quartic;
  if (name == "stirrer") return PotentialKind::Stirrer;
  if (name == "coulomb-2d2") return PotentialKind::Coulomb2D2Body;
  if (name == "coulomb-3d2") return PotentialKind::Coulomb3D2Body;
  if (name == "coulomb-3d3") return PotentialKind::Coulomb3D3Body;
  throw ParameterError("unknown potential kind: " + name);
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::SeparableOscillatory: return "sep-osc";
    case PotentialKind::HarmonicTrap: return "harmonic";
    case PotentialKind::Quartic: return "quartic";
    case PotentialKind::Stirrer: return "stirrer";
    case PotentialKind::Coulomb2D2Body: return "coulomb-2d2";
    case PotentialKind::Coulomb3D2Body: return "coulomb-3d2";
    case PotentialKind::Coulomb3D3Body: return "coulomb-3d3";
  }
  return "?";
}

namespace {

void require_dim(const Grid& grid, int d, const char* what) {
  if (grid.dim() != d)
    throw ParameterError(std::string(what) + " requires a " + std::to_string(d) + "D grid");
}

// Pairwise soft Coulomb over particle blocks of size block in the coordinate
// list: sum over particle pairs of c / sqrt(|xi - xj|^2 + delta^2).
RealField coulomb_field(const Grid& grid, int block, int particles, double c, double delta) {
  return grid.sample([=](std::span<const double> x) {
    double v = 0.0;
    for (int i = 0; i < particles; ++i)
      for (int j = i + 1; j < particles; ++j) {
        double r2 = 0.0;
        for (int b = 0; b < block; ++b) {
          const double d = x[i * block + b] - x[j * block + b];
          r2 += d * d;
        }
        v += c / std::sqrt(r2 + delta * delta);
      }
    return v;
  });
}

}  // namespace

BuiltPotential build_potential(PotentialKind kind, const PotentialParams& params,
                               const Grid& grid) {
  BuiltPotential out;
  const int d = grid.dim();
  switch (kind) {
    case PotentialKind::SeparableOscillatory: {
      std::vector<double> q = params.quad_coeffs;
      if (q.empty()) q.assign(d, 1.0);
      if (static_cast<int>(q.size()) != d)
        throw ParameterError("sep-osc: need one quadratic coefficient per axis");
      const double amp = params.osc_amplitude;
      for (int a = 0; a < d; ++a) {
        const double qa = q[a];
        out.separable.push_back([qa, amp](double t) {
          const double s = std::sin(M_PI * t / 4.0);
          return qa * t * t + amp * s * s;
        });
      }
      break;
    }
    case PotentialKind::HarmonicTrap: {
      for (int a = 0; a < d; ++a)
        out.separable.push_back([](double t) { return t * t; });
      break;
    }
    case PotentialKind::Quartic: {
      require_dim(grid, 3, "quartic potential");
      std::vector<double> g = params.gammas;
      if (g.empty()) g = {1.0, 1.0, 3.0};
      const double gx = g[0], gy = g[1], gz = g[2];
      out.separable.push_back([gx](double t) { return gx * t * t; });
      out.separable.push_back([gy](double t) { return gy * t * t; });
      out.separable.push_back([gz](double t) { return gz * t * t; });
      const double lin = 2.0 * (1.0 - params.alpha) - 1.0;  // -1.8 at alpha = 1.4
      const double quart = params.kappa / 2.0;              // 0.15 at kappa = 0.3
      out.nonseparable = grid.sample([=](std::span<const double> x) {
        const double s = gx * x[0] * x[0] + gy * x[1] * x[1];
        const double r2 = x[0] * x[0] + x[1] * x[1];
        return lin * s + quart * r2 * r2;
      });
      break;
    }
    case PotentialKind::Stirrer: {
      require_dim(grid, 3, "stirrer potential");
      std::vector<double> g = params.gammas;
      if (g.empty()) g = {1.0, 1.0, 2.0};
      for (int a = 0; a < 3; ++a) {
        const double g2 = g[a] * g[a];
        out.separable.push_back([g2](double t) { return g2 * t * t; });
      }
      const double w0 = params.stirrer_height, dec = params.stirrer_decay,
                   r0 = params.stirrer_center;
      out.nonseparable = grid.sample([=](std::span<const double> x) {
        const double dx = x[0] - r0;
        return 2.0 * w0 * std::exp(-dec * (dx * dx + x[1] * x[1]));
      });
      break;
    }
    case PotentialKind::Coulomb2D2Body:
    case PotentialKind::Coulomb3D2Body:
    case PotentialKind::Coulomb3D3Body: {
      const int block = (kind == PotentialKind::Coulomb2D2Body) ? 2 : 3;
      const int particles = (kind == PotentialKind::Coulomb3D3Body) ? 3 : 2;
      require_dim(grid, block * particles, "soft Coulomb potential");
      for (int a = 0; a < d; ++a)
        out.separable.push_back([](double t) { return t * t; });
      out.nonseparable = coulomb_field(grid, block, particles, params.coulomb_strength,
                                       params.coulomb_softening);
      break;
    }
  }
  return out;
}

FullOperator build_full_operator(const Grid& grid, const BuiltPotential& potential,
                                 double shift) {
  FullOperator op;
  op.sep = grid.separable_operator(potential.separable, shift);
  op.diagonal = potential.nonseparable;
  return op;
}

}  // namespace kronop
