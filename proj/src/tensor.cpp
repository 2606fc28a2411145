#include "kronop/tensor.hpp"

#include <atomic>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kronop {

namespace {

std::atomic<int> g_threads{0};

int effective_threads() {
#ifdef _OPENMP
  const int t = g_threads.load();
  return t > 0 ? t : omp_get_max_threads();
#else
  return 1;
#endif
}

using StrideD = Eigen::Stride<Eigen::Dynamic, Eigen::Dynamic>;
using MapD = Eigen::Map<Eigen::MatrixXd>;
using CMapD = Eigen::Map<const Eigen::MatrixXd>;
using SMapD = Eigen::Map<Eigen::MatrixXd, 0, StrideD>;
using SCMapD = Eigen::Map<const Eigen::MatrixXd, 0, StrideD>;

// R = A * X with X viewed as (n0 x cols), contraction over the fastest axis.
void contract_first_axis(const double* in, double* out, const Eigen::MatrixXd& a,
                         std::ptrdiff_t n0, std::ptrdiff_t m, std::ptrdiff_t cols,
                         bool complex_data) {
  const int nth = effective_threads();
  const std::ptrdiff_t chunk = (cols + nth - 1) / nth;
#pragma omp parallel for schedule(static) num_threads(nth)
  for (int t = 0; t < nth; ++t) {
    const std::ptrdiff_t c0 = t * chunk;
    const std::ptrdiff_t nc = std::min(chunk, cols - c0);
    if (nc <= 0) continue;
    if (!complex_data) {
      CMapD x(in + c0 * n0, n0, nc);
      MapD r(out + c0 * m, m, nc);
      r.noalias() = a * x;
    } else {
      // Real and imaginary parts are interleaved with inner stride 2.
      SCMapD xr(in + 2 * c0 * n0, n0, nc, StrideD(2 * n0, 2));
      SCMapD xi(in + 2 * c0 * n0 + 1, n0, nc, StrideD(2 * n0, 2));
      SMapD rr(out + 2 * c0 * m, m, nc, StrideD(2 * m, 2));
      SMapD ri(out + 2 * c0 * m + 1, m, nc, StrideD(2 * m, 2));
      rr.noalias() = a * xr;
      ri.noalias() = a * xi;
    }
  }
}

// R_q = X_q * A^T for each contiguous slab q of shape (pre x nk); a complex
// slab is reinterpreted as a (2 pre x nk) real matrix, which is exact because
// a real matrix acts componentwise on re/im.
void contract_inner_axis(const double* in, double* out, const Eigen::MatrixXd& a,
                         std::ptrdiff_t pre, std::ptrdiff_t nk, std::ptrdiff_t m,
                         std::ptrdiff_t slabs) {
  const int nth = effective_threads();
  if (slabs == 1) {
    // Single big GEMM; chunk rows deterministically across threads.
    const std::ptrdiff_t chunk = (pre + nth - 1) / nth;
#pragma omp parallel for schedule(static) num_threads(nth)
    for (int t = 0; t < nth; ++t) {
      const std::ptrdiff_t r0 = t * chunk;
      const std::ptrdiff_t nr = std::min(chunk, pre - r0);
      if (nr <= 0) continue;
      SCMapD x(in + r0, nr, nk, StrideD(pre, 1));
      SMapD r(out + r0, nr, m, StrideD(pre, 1));
      r.noalias() = x * a.transpose();
    }
    return;
  }
#pragma omp parallel for schedule(static) num_threads(nth)
  for (std::ptrdiff_t q = 0; q < slabs; ++q) {
    CMapD x(in + q * pre * nk, pre, nk);
    MapD r(out + q * pre * m, pre, m);
    r.noalias() = x * a.transpose();
  }
}

struct IndexWalker {
  explicit IndexWalker(const Shape& shape) : shape_(shape), index_(shape.size(), 0) {}
  const std::vector<int>& index() const { return index_; }
  bool advance() {
    for (std::size_t a = 0; a < shape_.size(); ++a) {
      if (++index_[a] < shape_[a]) return true;
      index_[a] = 0;
    }
    return false;
  }
  const Shape& shape_;
  std::vector<int> index_;
};

}  // namespace

void set_tensor_threads(int threads) { g_threads.store(threads); }
int tensor_threads() { return g_threads.load(); }

template <typename Scalar>
TensorField<Scalar> mode_product(const TensorField<Scalar>& x, const Eigen::MatrixXd& a,
                                 int axis) {
  const Shape& shape = x.shape();
  if (axis < 0 || axis >= x.dim()) throw ParameterError("mode_product: axis out of range");
  if (a.cols() != shape[axis])
    throw ParameterError("mode_product: matrix columns do not match axis extent");
  const int m = static_cast<int>(a.rows());

  Shape out_shape = shape;
  out_shape[axis] = m;
  TensorField<Scalar> out(out_shape);
  if (m == shape[axis]) out.set_mass(x.mass());

  constexpr bool is_complex = !std::is_same_v<Scalar, double>;
  const double* in_ptr = reinterpret_cast<const double*>(x.data());
  double* out_ptr = reinterpret_cast<double*>(out.data());

  std::ptrdiff_t pre = 1, post = 1;
  for (int i = 0; i < axis; ++i) pre *= shape[i];
  for (int i = axis + 1; i < x.dim(); ++i) post *= shape[i];

  if (axis == 0) {
    contract_first_axis(in_ptr, out_ptr, a, shape[0], m, post, is_complex);
  } else {
    const std::ptrdiff_t width = is_complex ? 2 * pre : pre;
    contract_inner_axis(in_ptr, out_ptr, a, width, shape[axis], m, post);
  }
  return out;
}

template <typename Scalar>
TensorField<Scalar> kron_apply(const TensorField<Scalar>& x,
                               const std::vector<const Eigen::MatrixXd*>& axis_mats) {
  if (static_cast<int>(axis_mats.size()) != x.dim())
    throw ParameterError("kron_apply: need one matrix (or null) per axis");
  TensorField<Scalar> out = x;
  for (int axis = 0; axis < x.dim(); ++axis)
    if (axis_mats[axis] != nullptr) out = mode_product(out, *axis_mats[axis], axis);
  return out;
}

template <typename Scalar>
Scalar inner(const TensorField<Scalar>& u, const TensorField<Scalar>& v, Weighting w) {
  if (u.shape() != v.shape()) throw ParameterError("inner: shape mismatch");
  if (w == Weighting::Plain) {
    if constexpr (std::is_same_v<Scalar, double>)
      return u.flat().dot(v.flat());
    else
      return u.flat().conjugate().cwiseProduct(v.flat()).sum();
  }
  if (!u.mass() || static_cast<int>(u.mass()->size()) != u.dim())
    throw ParameterError("inner: field has no mass weights attached");
  const MassWeights& mass = *u.mass();
  Scalar acc(0);
  IndexWalker walker(u.shape());
  std::size_t i = 0;
  do {
    double wgt = 1.0;
    for (int a = 0; a < u.dim(); ++a) wgt *= mass[a][walker.index()[a]];
    if constexpr (std::is_same_v<Scalar, double>)
      acc += wgt * u[i] * v[i];
    else
      acc += wgt * std::conj(u[i]) * v[i];
    ++i;
  } while (walker.advance());
  return acc;
}

template <typename Scalar>
double norm(const TensorField<Scalar>& u, Weighting w) {
  const Scalar s = inner(u, u, w);
  if constexpr (std::is_same_v<Scalar, double>)
    return std::sqrt(s);
  else
    return std::sqrt(s.real());
}

RealField mass_field(const Shape& shape, const MassWeights& mass) {
  if (mass.size() != shape.size()) throw ParameterError("mass_field: dimension mismatch");
  RealField out(shape);
  IndexWalker walker(shape);
  std::size_t i = 0;
  do {
    double w = 1.0;
    for (std::size_t a = 0; a < shape.size(); ++a) w *= mass[a][walker.index()[a]];
    out[i++] = w;
  } while (walker.advance());
  return out;
}

RealField direct_sum_grid(const std::vector<const Eigen::VectorXd*>& axis_values) {
  Shape shape;
  shape.reserve(axis_values.size());
  for (const auto* v : axis_values) shape.push_back(static_cast<int>(v->size()));
  RealField out(shape);
  IndexWalker walker(shape);
  std::size_t i = 0;
  do {
    double s = 0.0;
    for (std::size_t a = 0; a < shape.size(); ++a) s += (*axis_values[a])(walker.index()[a]);
    out[i++] = s;
  } while (walker.advance());
  return out;
}

template TensorField<double> mode_product(const TensorField<double>&, const Eigen::MatrixXd&, int);
template TensorField<std::complex<double>> mode_product(const TensorField<std::complex<double>>&,
                                                        const Eigen::MatrixXd&, int);
template TensorField<double> kron_apply(const TensorField<double>&,
                                        const std::vector<const Eigen::MatrixXd*>&);
template TensorField<std::complex<double>> kron_apply(const TensorField<std::complex<double>>&,
                                                      const std::vector<const Eigen::MatrixXd*>&);
template double inner(const TensorField<double>&, const TensorField<double>&, Weighting);
template std::complex<double> inner(const TensorField<std::complex<double>>&,
                                    const TensorField<std::complex<double>>&, Weighting);
template double norm(const TensorField<double>&, Weighting);
template double norm(const TensorField<std::complex<double>>&, Weighting);

}  // namespace kronop
