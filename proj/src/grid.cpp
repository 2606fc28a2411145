#include "kronop/grid.hpp"

namespace kronop {

namespace {
std::shared_ptr<const MassWeights> collect_mass(const std::vector<Axis>& axes) {
  auto mass = std::make_shared<MassWeights>();
  mass->reserve(axes.size());
  for (const auto& a : axes) mass->push_back(axis_mass(a));
  return mass;
}
}  // namespace

Grid Grid::sem(double half_width, int cell_count, int degree, int dimension) {
  if (dimension < 1 || dimension > 9)
    throw ParameterError("Grid: dimension must be in [1, 9]");
  Grid g;
  const Basis1D basis = assemble_sem(half_width, cell_count, degree);
  g.axes.assign(dimension, Axis(basis));
  g.mass = collect_mass(g.axes);
  return g;
}

Grid Grid::hermite(int n, int dimension) {
  if (dimension < 1 || dimension > 9)
    throw ParameterError("Grid: dimension must be in [1, 9]");
  Grid g;
  const HermiteBasis basis = hermite_basis(n);
  g.axes.assign(dimension, Axis(basis));
  g.mass = collect_mass(g.axes);
  return g;
}

Shape Grid::shape() const {
  Shape s;
  s.reserve(axes.size());
  for (const auto& a : axes) s.push_back(axis_size(a));
  return s;
}

RealField Grid::field() const {
  RealField f(shape());
  f.set_mass(mass);
  return f;
}

ComplexField Grid::complex_field() const {
  ComplexField f(shape());
  f.set_mass(mass);
  return f;
}

RealField Grid::sample(const std::function<double(std::span<const double>)>& f) const {
  RealField out = field();
  const int d = dim();
  std::vector<const std::vector<double>*> nodes(d);
  for (int a = 0; a < d; ++a) nodes[a] = &axis_nodes(axes[a]);
  std::vector<int> idx(d, 0);
  std::vector<double> point(d);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int a = 0; a < d; ++a) point[a] = (*nodes[a])[idx[a]];
    out[i] = f(point);
    for (int a = 0; a < d; ++a) {
      if (++idx[a] < static_cast<int>(nodes[a]->size())) break;
      idx[a] = 0;
    }
  }
  return out;
}

SeparableOperator Grid::separable_operator(
    const std::vector<std::function<double(double)>>& per_axis, double shift) const {
  if (!per_axis.empty() && static_cast<int>(per_axis.size()) != dim())
    throw ParameterError("separable_operator: need one potential per axis");
  static const std::function<double(double)> zero = [](double) { return 0.0; };
  std::vector<AxisEigens> eigens;
  eigens.reserve(axes.size());
  for (int a = 0; a < dim(); ++a) {
    const auto& f = (per_axis.empty() || !per_axis[a]) ? zero : per_axis[a];
    eigens.push_back(build_axis(axes[a], f));
  }
  return SeparableOperator(std::move(eigens), shift);
}

SeparableOperator Grid::laplacian(double shift) const {
  return separable_operator({}, shift);
}

}  // namespace kronop
