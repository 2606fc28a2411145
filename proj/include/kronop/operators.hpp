#pragma once

#include <optional>
#include <vector>

#include "kronop/axis.hpp"
#include "kronop/tensor.hpp"

namespace kronop {

/// Kronecker-sum operator sum_d H_d minus an optional spectral shift, held in
/// factored form: per-axis eigenpairs plus the precomputed eigenvalue-sum
/// grid. Supports application, direct inversion, and unitary propagation, all
/// at the cost of one forward and one backward tensor transform.
class SeparableOperator {
 public:
  SeparableOperator() = default;
  explicit SeparableOperator(std::vector<AxisEigens> axes, double shift = 0.0);

  int dim() const { return static_cast<int>(axes_.size()); }
  Shape shape() const;
  const std::vector<AxisEigens>& axes() const { return axes_; }
  const RealField& eigenvalue_grid() const { return lambda_; }
  double shift() const { return shift_; }
  void set_shift(double shift) { shift_ = shift; }
  double min_eigenvalue() const { return lambda_min_; }  // of the unshifted operator
  double max_eigenvalue() const { return lambda_max_; }

  /// (A - shift) u  computed as T ((lambda - shift) . (T^{-1} u)).
  template <typename Scalar>
  TensorField<Scalar> apply(const TensorField<Scalar>& u) const;

  /// (A - shift)^{-1} b. Refuses shifts within 1e-14 |lambda|_max of an
  /// eigenvalue rather than regularizing.
  template <typename Scalar>
  TensorField<Scalar> solve(const TensorField<Scalar>& b) const;

  /// exp(-i (A - shift) dt) psi; unitary for any real dt.
  ComplexField propagate(const ComplexField& psi, double dt) const;

  /// Rank-one ground state of the Kronecker sum: the tensor product of each
  /// axis's lowest eigenvector (eigenvalues are ascending per axis).
  RealField ground_state() const;

 private:
  std::vector<AxisEigens> axes_;
  RealField lambda_;
  double shift_ = 0.0;
  double lambda_min_ = 0.0;
  double lambda_max_ = 0.0;
  std::vector<const Eigen::MatrixXd*> forward_;   // T^{-1} per axis
  std::vector<const Eigen::MatrixXd*> backward_;  // T per axis
};

/// A = separable part + optional non-separable nodal diagonal (V2 values).
struct FullOperator {
  SeparableOperator sep;
  std::optional<RealField> diagonal;

  template <typename Scalar>
  TensorField<Scalar> apply(const TensorField<Scalar>& u) const;
};

}  // namespace kronop
