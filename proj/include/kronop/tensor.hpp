#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

#include "kronop/errors.hpp"

namespace kronop {

using Shape = std::vector<int>;

inline std::size_t shape_size(const Shape& shape) {
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  return total;
}

/// Per-axis diagonal mass weights for discrete-L2 inner products.
using MassWeights = std::vector<std::vector<double>>;

/// Dense d-dimensional nodal field, 1 <= d <= 9. Layout: the first axis is
/// fastest-varying, i.e. linear index = i_0 + n_0 (i_1 + n_1 (i_2 + ...)).
/// An optional shared mass-weight set enables mass-weighted inner products.
template <typename Scalar>
class TensorField {
 public:
  TensorField() = default;
  explicit TensorField(Shape shape)
      : shape_(std::move(shape)), values_(shape_size(shape_), Scalar(0)) {
    if (shape_.empty() || shape_.size() > 9)
      throw ParameterError("TensorField: dimension must be in [1, 9]");
    for (int n : shape_)
      if (n < 1) throw ParameterError("TensorField: extents must be positive");
  }

  static TensorField constant(Shape shape, Scalar value) {
    TensorField f(std::move(shape));
    std::fill(f.values_.begin(), f.values_.end(), value);
    return f;
  }

  const Shape& shape() const { return shape_; }
  int dim() const { return static_cast<int>(shape_.size()); }
  std::size_t size() const { return values_.size(); }

  Scalar* data() { return values_.data(); }
  const Scalar* data() const { return values_.data(); }
  std::vector<Scalar>& values() { return values_; }
  const std::vector<Scalar>& values() const { return values_; }
  Scalar& operator[](std::size_t i) { return values_[i]; }
  const Scalar& operator[](std::size_t i) const { return values_[i]; }

  void set_mass(std::shared_ptr<const MassWeights> mass) { mass_ = std::move(mass); }
  const std::shared_ptr<const MassWeights>& mass() const { return mass_; }

  Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> flat() {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
  }
  Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> flat() const {
    return {values_.data(), static_cast<Eigen::Index>(values_.size())};
  }

 private:
  Shape shape_;
  std::vector<Scalar> values_;
  std::shared_ptr<const MassWeights> mass_;
};

using RealField = TensorField<double>;
using ComplexField = TensorField<std::complex<double>>;

/// Apply a matrix along one axis: the result is (I x ... x A x ... x I) X in
/// vectorized form, with the axis extent replaced by A's row count. The data
/// is contracted in place slab-by-slab; no global transpose is performed.
/// Real matrices act on complex fields componentwise on re/im.
template <typename Scalar>
TensorField<Scalar> mode_product(const TensorField<Scalar>& x, const Eigen::MatrixXd& a,
                                 int axis);

/// Sequential mode products over all axes: (A_{d-1} x ... x A_0) vec(X).
/// Null entries are skipped (treated as identity).
template <typename Scalar>
TensorField<Scalar> kron_apply(const TensorField<Scalar>& x,
                               const std::vector<const Eigen::MatrixXd*>& axis_mats);

enum class Weighting { Plain, Mass };

/// Inner product, conjugate-linear in the first argument; Weighting::Mass
/// uses the per-axis mass diagonals attached to u.
template <typename Scalar>
Scalar inner(const TensorField<Scalar>& u, const TensorField<Scalar>& v,
             Weighting w = Weighting::Plain);

template <typename Scalar>
double norm(const TensorField<Scalar>& u, Weighting w = Weighting::Plain);

/// Entry-wise product of the per-axis mass diagonals at a linear index,
/// iterated over the whole field: out[idx] = prod_a mass[a][idx_a].
RealField mass_field(const Shape& shape, const MassWeights& mass);

/// Direct-sum grid of per-axis value lists: out[idx] = sum_a values[a][idx_a].
/// This is the eigenvalue grid of a Kronecker-sum operator.
RealField direct_sum_grid(const std::vector<const Eigen::VectorXd*>& axis_values);

/// Thread count used by the slab-parallel tensor kernels (0 = library default).
void set_tensor_threads(int threads);
int tensor_threads();

}  // namespace kronop
