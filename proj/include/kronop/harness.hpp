#pragma once

#include <string>

#include "kronop/config.hpp"
#include "kronop/grid.hpp"

namespace kronop {

/// Execute the experiment described by a parsed config. Artifacts (CSV
/// tables, run manifest, optional checkpoints and slices) are written under
/// the configured output directory. Throws the library error types; use
/// run_to_exit_code for the CLI exit-code mapping.
void run(Config& config);

/// Parse the file and run, mapping errors to the documented process exit
/// codes: 0 success, 2 configuration error, 3 numerical failure,
/// 4 capability/memory refusal.
int run_to_exit_code(const std::string& config_path, bool allow_large_override = false,
                     const std::string& output_dir_override = "");

/// Evaluate a nodal field on an R x R uniform grid spanned by two axes, the
/// remaining axes pinned at fixed coordinates, via cell-by-cell polynomial
/// interpolation per axis. SEM grids only.
struct SliceSpec {
  int axis_a = 0;
  int axis_b = 1;
  std::vector<double> fixed;  // coordinates of the other axes, ascending axis order
  int resolution = 300;
};
Eigen::MatrixXd evaluate_slice(const Grid& grid, const RealField& field, const SliceSpec& spec);
void export_slice(const Grid& grid, const RealField& field, const SliceSpec& spec,
                  const std::string& csv_path);

}  // namespace kronop
