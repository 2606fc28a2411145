#include "kronop/pcg.hpp"

#include <cmath>
#include <string>

namespace kronop {

PcgReport pcg(const LinearMap& apply_a, const LinearMap& precond, const RealField& b,
              RealField& x, const PcgConfig& config) {
  if (config.rel_tol <= 0.0) throw ParameterError("pcg: rel_tol must be positive");
  if (config.max_iter < 1) throw ParameterError("pcg: max_iter must be >= 1");
  if (x.shape() != b.shape()) throw ParameterError("pcg: x0/b shape mismatch");

  PcgReport report;
  const double norm_b = b.flat().norm();
  if (norm_b == 0.0) {
    x.flat().setZero();
    report.converged = true;
    return report;
  }

  RealField r = b;
  if (x.flat().norm() != 0.0) {
    const RealField ax = apply_a(x);
    r.flat() -= ax.flat();
  }
  RealField z = precond(r);
  RealField p = z;
  double rz = r.flat().dot(z.flat());
  const double pnorm0 = std::sqrt(std::abs(rz));

  auto rel_residual = [&](const RealField& res, double rz_cur) {
    return config.preconditioned_norm ? std::sqrt(std::abs(rz_cur)) / pnorm0
                                      : res.flat().norm() / norm_b;
  };

  double rel = rel_residual(r, rz);
  if (config.record_history) report.history.push_back(rel);

  double best_rel = rel;
  RealField best_x = x;
  int since_improvement = 0;

  RealField q(b.shape());
  for (int it = 0; it < config.max_iter; ++it) {
    if (rel <= config.rel_tol) {
      report.converged = true;
      break;
    }
    if (config.stagnation_window > 0 && since_improvement >= config.stagnation_window) break;
    q = apply_a(p);
    const double pq = p.flat().dot(q.flat());
    if (pq <= 0.0)
      throw NumericalError("pcg: indefinite direction at iteration " + std::to_string(it + 1));
    const double alpha = rz / pq;
    x.flat() += alpha * p.flat();
    r.flat() -= alpha * q.flat();
    z = precond(r);
    const double rz_next = r.flat().dot(z.flat());
    p.flat() = z.flat() + (rz_next / rz) * p.flat();
    rz = rz_next;
    ++report.iterations;
    rel = rel_residual(r, rz);
    if (config.record_history) report.history.push_back(rel);
    if (rel < 0.99 * best_rel) {
      best_rel = rel;
      best_x = x;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }
  }
  if (rel <= config.rel_tol) {
    report.converged = true;
  } else if (best_rel < rel) {
    x = best_x;  // hand back the best iterate seen
    rel = best_rel;
  }
  report.final_residual = rel;
  return report;
}

}  // namespace kronop
