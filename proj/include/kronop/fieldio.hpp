#pragma once

#include <string>
#include <variant>

#include "kronop/tensor.hpp"

namespace kronop {

// Binary checkpoint format, little-endian throughout:
//   u32 magic 0x4B4F5046 ("FPOK" on disk), u32 version = 1, u32 dimension,
//   u32 scalar kind (0 = f64, 1 = complex f64), u64 extents[dimension],
//   then the raw scalars in field layout order.
void dump_field(const std::string& path, const RealField& field);
void dump_field(const std::string& path, const ComplexField& field);

using LoadedField = std::variant<RealField, ComplexField>;
LoadedField load_field(const std::string& path);

}  // namespace kronop
