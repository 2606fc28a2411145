#include <CLI11.hpp>

#include "kronop/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tensor-product Schrodinger operator toolkit"};
  std::string config_path;
  std::string output_dir;
  bool allow_large = false;
  app.add_option("config", config_path, "experiment configuration file")->required();
  app.add_option("--output-dir", output_dir, "override the configured output directory");
  app.add_flag("--allow-large", allow_large, "permit runs above 2e8 grid scalars");
  CLI11_PARSE(app, argc, argv);
  return kronop::run_to_exit_code(config_path, allow_large, output_dir);
}
