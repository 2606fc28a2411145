#include "kronop/splitting.hpp"

#include <chrono>
#include <cmath>

#include "kronop/quadrature.hpp"

namespace kronop {

namespace {

// One step decomposed into alternating propagation/multiplication segments:
// a_times has quad_points+1 entries, b_factors has quad_points entries, and
// the sequence is A(a_times[0]) B(b_factors[0]) A(a_times[1]) ... A(a_times[M]).
struct StepSchedule {
  std::vector<double> a_times;
  std::vector<double> b_factors;  // w_k * h
};

StepSchedule single_schedule(double h, int m) {
  const GaussRule rule = gauss_legendre(m);
  StepSchedule s;
  s.a_times.resize(m + 1);
  s.b_factors.resize(m);
  double prev = 0.0;
  for (int k = 0; k < m; ++k) {
    const double sk = h * (1.0 + rule.nodes[k]) / 2.0;
    s.a_times[k] = sk - prev;
    s.b_factors[k] = 0.5 * rule.weights[k] * h;
    prev = sk;
  }
  s.a_times[m] = h - prev;
  return s;
}

std::vector<StepSchedule> step_schedules(const SplitSpec& spec, double h) {
  if (spec.composition == Composition::Single) return {single_schedule(h, spec.quad_points)};
  const YoshidaCoeffs c = yoshida_coeffs();
  return {single_schedule(c.gamma1 * h, spec.quad_points),
          single_schedule(c.gamma2 * h, spec.quad_points),
          single_schedule(c.gamma1 * h, spec.quad_points)};
}

void pointwise_phase(ComplexField& psi, const RealField& b_diag, double factor) {
  auto pf = psi.flat();
  const auto bf = b_diag.flat();
  for (Eigen::Index i = 0; i < pf.size(); ++i) {
    const double phase = -factor * bf[i];
    pf[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
}

ComplexField run_schedules(const SeparableOperator& a, const RealField& b_diag,
                           const std::vector<StepSchedule>& schedules, ComplexField psi,
                           int steps, bool merge) {
  double pending = 0.0;  // accumulated A-propagation time (merge mode only)
  auto propagate_a = [&](double t) {
    if (merge)
      pending += t;
    else
      psi = a.propagate(psi, t);
  };
  auto multiply_b = [&](double factor) {
    if (merge && pending != 0.0) {
      psi = a.propagate(psi, pending);
      pending = 0.0;
    }
    pointwise_phase(psi, b_diag, factor);
  };
  for (int step = 0; step < steps; ++step) {
    for (const StepSchedule& s : schedules) {
      const int m = static_cast<int>(s.b_factors.size());
      for (int k = 0; k < m; ++k) {
        propagate_a(s.a_times[k]);
        multiply_b(s.b_factors[k]);
      }
      propagate_a(s.a_times[m]);
    }
  }
  if (merge && pending != 0.0) psi = a.propagate(psi, pending);
  return psi;
}

}  // namespace

YoshidaCoeffs yoshida_coeffs() {
  const double cbrt2 = std::cbrt(2.0);
  const double denom = 2.0 - cbrt2;
  return {1.0 / denom, -cbrt2 / denom};
}

ComplexField qhop_step(const SeparableOperator& a, const RealField& b_diag,
                       const ComplexField& psi, double h, int quad_points) {
  if (b_diag.shape() != psi.shape()) throw ParameterError("qhop_step: shape mismatch");
  return run_schedules(a, b_diag, {single_schedule(h, quad_points)}, psi, 1, false);
}

ComplexField yoshida_step(const SeparableOperator& a, const RealField& b_diag,
                          const ComplexField& psi, double h, int quad_points) {
  if (b_diag.shape() != psi.shape()) throw ParameterError("yoshida_step: shape mismatch");
  SplitSpec spec;
  spec.quad_points = quad_points;
  spec.composition = Composition::Yoshida;
  return run_schedules(a, b_diag, step_schedules(spec, h), psi, 1, false);
}

EvolveResult evolve(const SplitSpec& spec, const SeparableOperator& a, const RealField& b_diag,
                    const ComplexField& psi0, const SplitReference& reference) {
  if (spec.dt <= 0.0 || spec.total_time <= 0.0)
    throw ParameterError("evolve: dt and total_time must be positive");
  const double ratio = spec.total_time / spec.dt;
  const int steps = static_cast<int>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - steps) > 1e-9)
    throw ParameterError("evolve: total_time must be an integer multiple of dt");

  const auto t0 = std::chrono::steady_clock::now();

  ComplexField psi = psi0;
  psi.flat() /= psi.flat().norm();
  const ComplexField start = psi;

  psi = run_schedules(a, b_diag, step_schedules(spec, spec.dt), std::move(psi), steps,
                      spec.merge_across_steps);

  ComplexField ref(psi.shape());
  if (const auto* exact = std::get_if<ExactReference>(&reference)) {
    if (!exact->full) throw ParameterError("evolve: exact reference operator missing");
    ref = exact->full->propagate(start, spec.total_time);
  } else {
    const double lam = std::get<StationaryReference>(reference).eigenvalue;
    const double phase = -lam * spec.total_time;
    ref = start;
    ref.flat() *= std::complex<double>(std::cos(phase), std::sin(phase));
  }

  EvolveResult result;
  const Weighting w = spec.mass_weighted_error ? Weighting::Mass : Weighting::Plain;
  ComplexField diff = psi;
  diff.flat() -= ref.flat();
  diff.set_mass(psi0.mass());
  result.error = norm(diff, w);
  result.steps = steps;
  result.state = std::move(psi);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace kronop
