#include "kronop/fieldio.hpp"

#include <cstdint>
#include <fstream>

#include "kronop/errors.hpp"

namespace kronop {

namespace {

constexpr std::uint32_t kMagic = 0x4B4F5046;
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_raw(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_raw(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ParameterError("load_field: truncated file");
  return value;
}

template <typename Scalar>
void dump_impl(const std::string& path, const TensorField<Scalar>& field,
               std::uint32_t scalar_kind) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("dump_field: cannot open " + path);
  write_raw(out, kMagic);
  write_raw(out, kVersion);
  write_raw(out, static_cast<std::uint32_t>(field.dim()));
  write_raw(out, scalar_kind);
  for (int n : field.shape()) write_raw(out, static_cast<std::uint64_t>(n));
  out.write(reinterpret_cast<const char*>(field.data()),
            static_cast<std::streamsize>(field.size() * sizeof(Scalar)));
  if (!out) throw ParameterError("dump_field: write failed for " + path);
}

}  // namespace

void dump_field(const std::string& path, const RealField& field) { dump_impl(path, field, 0); }
void dump_field(const std::string& path, const ComplexField& field) { dump_impl(path, field, 1); }

LoadedField load_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("load_field: cannot open " + path);
  if (read_raw<std::uint32_t>(in) != kMagic) throw ParameterError("load_field: bad magic");
  if (read_raw<std::uint32_t>(in) != kVersion) throw ParameterError("load_field: bad version");
  const auto dim = read_raw<std::uint32_t>(in);
  const auto kind = read_raw<std::uint32_t>(in);
  if (dim < 1 || dim > 9) throw ParameterError("load_field: bad dimension");
  Shape shape(dim);
  for (auto& n : shape) n = static_cast<int>(read_raw<std::uint64_t>(in));
  if (kind == 0) {
    RealField f(shape);
    in.read(reinterpret_cast<char*>(f.data()),
            static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!in) throw ParameterError("load_field: truncated data");
    return f;
  }
  if (kind == 1) {
    ComplexField f(shape);
    in.read(reinterpret_cast<char*>(f.data()),
            static_cast<std::streamsize>(f.size() * sizeof(std::complex<double>)));
    if (!in) throw ParameterError("load_field: truncated data");
    return f;
  }
  throw ParameterError("load_field: unknown scalar kind");
}

}  // namespace kronop
