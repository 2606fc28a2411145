#include "kronop/operators.hpp"

#include <cmath>

namespace kronop {

SeparableOperator::SeparableOperator(std::vector<AxisEigens> axes, double shift)
    : axes_(std::move(axes)), shift_(shift) {
  if (axes_.empty()) throw ParameterError("SeparableOperator: need at least one axis");
  std::vector<const Eigen::VectorXd*> lams;
  lams.reserve(axes_.size());
  for (const auto& a : axes_) lams.push_back(&a.eigenvalues);
  lambda_ = direct_sum_grid(lams);
  lambda_min_ = lambda_.flat().minCoeff();
  lambda_max_ = lambda_.flat().maxCoeff();
  forward_.reserve(axes_.size());
  backward_.reserve(axes_.size());
  for (const auto& a : axes_) {
    forward_.push_back(&a.inverse_transform);
    backward_.push_back(&a.transform);
  }
}

Shape SeparableOperator::shape() const {
  Shape s;
  s.reserve(axes_.size());
  for (const auto& a : axes_) s.push_back(a.size());
  return s;
}

template <typename Scalar>
TensorField<Scalar> SeparableOperator::apply(const TensorField<Scalar>& u) const {
  TensorField<Scalar> w = kron_apply(u, forward_);
  const auto lam = lambda_.flat();
  auto wf = w.flat();
  for (Eigen::Index i = 0; i < wf.size(); ++i) wf[i] *= lam[i] - shift_;
  TensorField<Scalar> out = kron_apply(w, backward_);
  out.set_mass(u.mass());
  return out;
}

template <typename Scalar>
TensorField<Scalar> SeparableOperator::solve(const TensorField<Scalar>& b) const {
  const double floor = 1e-14 * std::max(std::abs(lambda_min_), std::abs(lambda_max_));
  const double gap = std::min(std::abs(lambda_min_ - shift_), std::abs(lambda_max_ - shift_));
  // The extreme eigenvalues bound the closest one only when the shift lies
  // outside the spectrum; check the actual minimum otherwise.
  double closest = gap;
  if (shift_ > lambda_min_ && shift_ < lambda_max_)
    closest = (lambda_.flat().array() - shift_).abs().minCoeff();
  if (closest < floor)
    throw NumericalError("SeparableOperator::solve: shift coincides with an eigenvalue");

  TensorField<Scalar> w = kron_apply(b, forward_);
  const auto lam = lambda_.flat();
  auto wf = w.flat();
  for (Eigen::Index i = 0; i < wf.size(); ++i) wf[i] /= lam[i] - shift_;
  TensorField<Scalar> out = kron_apply(w, backward_);
  out.set_mass(b.mass());
  return out;
}

ComplexField SeparableOperator::propagate(const ComplexField& psi, double dt) const {
  if (dt == 0.0) return psi;
  ComplexField w = kron_apply(psi, forward_);
  const auto lam = lambda_.flat();
  auto wf = w.flat();
  for (Eigen::Index i = 0; i < wf.size(); ++i) {
    const double phase = -(lam[i] - shift_) * dt;
    wf[i] *= std::complex<double>(std::cos(phase), std::sin(phase));
  }
  ComplexField out = kron_apply(w, backward_);
  out.set_mass(psi.mass());
  return out;
}

RealField SeparableOperator::ground_state() const {
  RealField out(shape());
  // Fill the rank-one product iteratively: out[idx] = prod_a T_a(idx_a, 0).
  std::vector<int> idx(dim(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = 1.0;
    for (int a = 0; a < dim(); ++a) v *= axes_[a].transform(idx[a], 0);
    out[i] = v;
    for (int a = 0; a < dim(); ++a) {
      if (++idx[a] < axes_[a].size()) break;
      idx[a] = 0;
    }
  }
  return out;
}

template <typename Scalar>
TensorField<Scalar> FullOperator::apply(const TensorField<Scalar>& u) const {
  TensorField<Scalar> out = sep.apply(u);
  if (diagonal) {
    if (diagonal->shape() != u.shape())
      throw ParameterError("FullOperator::apply: diagonal shape mismatch");
    auto of = out.flat();
    const auto df = diagonal->flat();
    const auto uf = u.flat();
    for (Eigen::Index i = 0; i < of.size(); ++i) of[i] += df[i] * uf[i];
  }
  return out;
}

template TensorField<double> SeparableOperator::apply(const TensorField<double>&) const;
template ComplexField SeparableOperator::apply(const ComplexField&) const;
template TensorField<double> SeparableOperator::solve(const TensorField<double>&) const;
template ComplexField SeparableOperator::solve(const ComplexField&) const;
template TensorField<double> FullOperator::apply(const TensorField<double>&) const;
template ComplexField FullOperator::apply(const ComplexField&) const;

}  // namespace kronop
