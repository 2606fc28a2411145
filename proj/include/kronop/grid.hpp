#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "kronop/axis.hpp"
#include "kronop/operators.hpp"
#include "kronop/tensor.hpp"

namespace kronop {

/// A tensor-product grid: one 1D discretization per axis plus the shared
/// mass-weight set attached to fields created on it.
struct Grid {
  std::vector<Axis> axes;
  std::shared_ptr<const MassWeights> mass;

  static Grid sem(double half_width, int cell_count, int degree, int dimension);
  static Grid hermite(int n, int dimension);

  int dim() const { return static_cast<int>(axes.size()); }
  Shape shape() const;
  std::size_t node_count() const { return shape_size(shape()); }

  /// Zero field with mass weights attached.
  RealField field() const;
  ComplexField complex_field() const;

  /// Nodal sampling of a function of the d coordinates.
  RealField sample(const std::function<double(std::span<const double>)>& f) const;

  /// Build the factored operator for per-axis potentials f_a (empty list or
  /// null entries mean zero potential on that axis).
  SeparableOperator separable_operator(
      const std::vector<std::function<double(double)>>& per_axis, double shift = 0.0) const;
  SeparableOperator laplacian(double shift = 0.0) const;
};

}  // namespace kronop
