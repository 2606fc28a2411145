#include "kronop/harness.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kronop/csv.hpp"
#include "kronop/dense_ref.hpp"
#include "kronop/errors.hpp"
#include "kronop/fieldio.hpp"
#include "kronop/gpe.hpp"
#include "kronop/ground_state.hpp"
#include "kronop/potentials.hpp"
#include "kronop/rng.hpp"
#include "kronop/splitting.hpp"

namespace kronop {

namespace {

constexpr const char* kVersion = "1.0.0";

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

struct Stopwatch {
  double t0 = now_seconds();
  double lap() {
    const double t = now_seconds();
    const double dt = t - t0;
    t0 = t;
    return dt;
  }
};

// ---------------------------------------------------------------- grid ----

struct GridSpec {
  std::string kind;  // "sem" | "hermite"
  int dimension = 3;
  double half_width = 8.0;
  int degree = 10;
  std::vector<int> cells;  // one entry per level, coarse to fine
  int hermite_n = 40;
};

GridSpec read_grid_spec(Config& cfg) {
  GridSpec spec;
  spec.kind = cfg.get_string("grid.kind", "sem");
  if (spec.kind != "sem" && spec.kind != "hermite")
    throw ParameterError("grid.kind must be sem or hermite");
  spec.dimension = cfg.get_int("grid.dimension", 3);
  if (spec.dimension < 1 || spec.dimension > 9)
    throw ParameterError("grid.dimension must be in [1, 9]");
  if (spec.kind == "sem") {
    spec.half_width = cfg.get_real("grid.L", 8.0);
    spec.degree = cfg.get_int("grid.degree", 10);
    spec.cells = cfg.get_int_list("grid.cells", {8});
    if (spec.cells.empty()) throw ParameterError("grid.cells must not be empty");
    for (int c : spec.cells)
      if (c < 1) throw ParameterError("grid.cells entries must be >= 1");
    if (spec.degree < 1 || spec.degree > 40)
      throw ParameterError("grid.degree must be in [1, 40]");
  } else {
    spec.hermite_n = cfg.get_int("grid.n", 40);
  }
  return spec;
}

std::size_t level_nodes(const GridSpec& spec, std::size_t level) {
  const int n = spec.kind == "sem"
                    ? spec.cells[level] * spec.degree - 1
                    : spec.hermite_n;
  std::size_t total = 1;
  for (int a = 0; a < spec.dimension; ++a) total *= static_cast<std::size_t>(n);
  return total;
}

int level_count(const GridSpec& spec) {
  return spec.kind == "sem" ? static_cast<int>(spec.cells.size()) : 1;
}

void check_capacity(const GridSpec& spec, bool allow_large, bool complex_scalars) {
  for (int level = 0; level < level_count(spec); ++level) {
    const std::size_t n = level_nodes(spec, level);
    if (n > 200'000'000 && !allow_large) {
      const std::size_t bytes = n * (complex_scalars ? 16 : 8) * 6;  // working-set factor
      throw CapabilityError("configuration needs " + std::to_string(n) +
                            " scalars (~" + std::to_string(bytes / (1 << 20)) +
                            " MiB working set); pass allow_large to proceed");
    }
  }
}

Grid build_level(const GridSpec& spec, int level) {
  if (spec.kind == "sem")
    return Grid::sem(spec.half_width, spec.cells[level], spec.degree, spec.dimension);
  return Grid::hermite(spec.hermite_n, spec.dimension);
}

// ----------------------------------------------------------- potential ----

PotentialKind read_potential_kind(Config& cfg) {
  return potential_kind_from_string(cfg.get_string("potential.kind", "harmonic"));
}

PotentialParams read_potential_params(Config& cfg, int dimension) {
  PotentialParams p;
  p.quad_coeffs = cfg.get_real_list("potential.quad", std::vector<double>(dimension, 1.0));
  p.osc_amplitude = cfg.get_real("potential.amplitude", 100.0);
  p.alpha = cfg.get_real("potential.alpha", 1.4);
  p.kappa = cfg.get_real("potential.kappa", 0.3);
  p.gammas = cfg.get_real_list("potential.gammas", {});
  p.stirrer_height = cfg.get_real("potential.w0", 4.0);
  p.stirrer_decay = cfg.get_real("potential.stirrer_delta", 1.0);
  p.stirrer_center = cfg.get_real("potential.r0", 1.0);
  p.coulomb_strength = cfg.get_real("potential.c", 1.0);
  p.coulomb_softening = cfg.get_real("potential.delta", 0.1);
  return p;
}

// -------------------------------------------------------------- solver ----

PcgConfig read_pcg_config(Config& cfg) {
  PcgConfig p;
  p.rel_tol = cfg.get_real("pcg.tol", 1e-12);
  p.max_iter = cfg.get_int("pcg.max_iter", 500);
  p.record_history = cfg.get_bool("pcg.history", false);
  p.preconditioned_norm = cfg.get_bool("pcg.preconditioned_norm", false);
  p.stagnation_window = cfg.get_int("pcg.stagnation_window", 0);
  return p;
}

InverseIterationConfig read_eigen_config(Config& cfg) {
  InverseIterationConfig c;
  const std::string mode = cfg.get_string("eigen.shift", "fraction");
  if (mode == "fraction")
    c.shift_mode = ShiftMode::FractionOfMin;
  else if (mode == "offset")
    c.shift_mode = ShiftMode::OffsetBelowMin;
  else if (mode == "zero")
    c.shift_mode = ShiftMode::Zero;
  else
    throw ParameterError("eigen.shift must be fraction, offset, or zero");
  c.shift_fraction = cfg.get_real("eigen.shift_fraction", 0.9);
  c.shift_offset = cfg.get_real("eigen.shift_offset", 1e-4);
  c.eig_rel_tol = cfg.get_real("eigen.tol", 1e-12);
  c.max_outer = cfg.get_int("eigen.max_outer", 60);
  c.inner = read_pcg_config(cfg);
  c.inner.stagnation_window = cfg.get_int("pcg.stagnation_window", 100);
  return c;
}

// ------------------------------------------------------------- context ----

struct RunContext {
  Config& cfg;
  std::string command;
  std::filesystem::path out_dir;
  std::uint64_t seed = 1;
  bool allow_large = false;
  std::vector<std::pair<std::string, std::string>> manifest_extra;

  std::filesystem::path out_path(const std::string& name) const { return out_dir / name; }
  void note(const std::string& key, const std::string& value) {
    manifest_extra.emplace_back(key, value);
  }
  void note(const std::string& key, double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.13e", value);
    manifest_extra.emplace_back(key, buf);
  }
};

RealField random_field(const Grid& grid, std::uint64_t seed) {
  SplitMix64 rng(seed);
  RealField f = grid.field();
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = rng.uniform_pm1();
  return f;
}

void maybe_export_outputs(RunContext& ctx, const Grid& grid, const RealField& field) {
  const std::string checkpoint = ctx.cfg.get_string("output.checkpoint", "");
  if (!checkpoint.empty()) dump_field(ctx.out_path(checkpoint).string(), field);
  const std::string slice_csv = ctx.cfg.get_string("output.slice_csv", "");
  if (!slice_csv.empty()) {
    SliceSpec spec;
    const std::vector<int> axes = ctx.cfg.get_int_list("output.slice_axes", {0, 1});
    if (axes.size() != 2) throw ParameterError("output.slice_axes needs two entries");
    spec.axis_a = axes[0];
    spec.axis_b = axes[1];
    spec.fixed = ctx.cfg.get_real_list("output.slice_fixed",
                                       std::vector<double>(grid.dim() - 2, 0.0));
    spec.resolution = ctx.cfg.get_int("output.slice_res", 300);
    export_slice(grid, field, spec, ctx.out_path(slice_csv).string());
  }
}

// ------------------------------------------------------------ commands ----

void cmd_solve(RunContext& ctx, const GridSpec& gspec) {
  const PotentialKind kind = read_potential_kind(ctx.cfg);
  const PotentialParams params = read_potential_params(ctx.cfg, gspec.dimension);
  const std::string rhs_mode = ctx.cfg.get_string("solve.rhs", "manufactured");
  PcgConfig pcg_cfg = read_pcg_config(ctx.cfg);

  CsvWriter csv(ctx.out_path(ctx.cfg.get_string("output.csv", "solve.csv")).string(),
                {"n", "dofs", "setup_s", "solve_s", "l2_rel_err", "residual", "pcg_iters"});

  for (int level = 0; level < level_count(gspec); ++level) {
    Stopwatch watch;
    const Grid grid = build_level(gspec, level);
    const BuiltPotential pot = build_potential(kind, params, grid);
    const FullOperator op = build_full_operator(grid, pot);
    const double setup_s = watch.lap();

    RealField rhs = grid.field();
    RealField ustar = grid.field();
    bool manufactured = rhs_mode == "manufactured";
    if (manufactured && gspec.kind != "sem")
      throw ParameterError("solve.rhs = manufactured requires an SEM grid");
    if (manufactured) {
      const double l = gspec.half_width;
      ustar = grid.sample([&](std::span<const double> x) {
        double v = 1.0;
        for (std::size_t a = 0; a < x.size(); ++a)
          v *= std::sin((a + 1) * M_PI * x[a] / l);
        return v;
      });
      double lap_eig = 0.0;
      for (int a = 0; a < grid.dim(); ++a)
        lap_eig += std::pow((a + 1) * M_PI / l, 2);
      const RealField vtotal = grid.sample([&](std::span<const double> x) {
        double acc = 0.0;
        for (int a = 0; a < grid.dim(); ++a) acc += pot.separable[a](x[a]);
        return acc;
      });
      rhs.flat().array() = (lap_eig + vtotal.flat().array()) * ustar.flat().array();
      if (pot.nonseparable)
        rhs.flat().array() += pot.nonseparable->flat().array() * ustar.flat().array();
    } else if (rhs_mode == "random") {
      rhs = random_field(grid, ctx.seed);
    } else {
      throw ParameterError("solve.rhs must be manufactured or random");
    }

    watch.lap();
    RealField u(grid.shape());
    int iters = 0;
    if (!op.diagonal) {
      u = op.sep.solve(rhs);
    } else {
      auto apply = [&](const RealField& v) { return op.apply(v); };
      auto precond = [&](const RealField& r) { return op.sep.solve(r); };
      const PcgReport rep = pcg(apply, precond, rhs, u, pcg_cfg);
      iters = rep.iterations;
    }
    const double solve_s = watch.lap();

    const RealField residual_field = [&] {
      RealField r = op.apply(u);
      r.flat() -= rhs.flat();
      return r;
    }();
    const double residual = residual_field.flat().norm() / rhs.flat().norm();
    double rel_err = 0.0;
    if (manufactured)
      rel_err = (u.flat() - ustar.flat()).norm() / ustar.flat().norm();

    const int n = axis_size(grid.axes[0]);
    csv.row({n, static_cast<long>(grid.node_count()), setup_s, solve_s,
             manufactured ? CsvValue(rel_err) : CsvValue(std::string()), residual,
             iters});
    maybe_export_outputs(ctx, grid, u);
  }
}

void cmd_ground_state(RunContext& ctx, const GridSpec& gspec) {
  const PotentialKind kind = read_potential_kind(ctx.cfg);
  const PotentialParams params = read_potential_params(ctx.cfg, gspec.dimension);
  const InverseIterationConfig eig_cfg = read_eigen_config(ctx.cfg);

  CsvWriter csv(ctx.out_path(ctx.cfg.get_string("output.csv", "ground_state.csv")).string(),
                {"level", "n", "dofs", "setup_s", "interp_s", "outer_iters", "pcg_per_outer",
                 "total_precond_applications", "eigenvalue"});

  std::vector<Grid> grids;
  for (int level = 0; level < level_count(gspec); ++level)
    grids.push_back(build_level(gspec, level));

  auto make_op = [&](const Grid& g) {
    return build_full_operator(g, build_potential(kind, params, g));
  };
  const MultilevelResult result = multilevel_ground_state(grids, make_op, eig_cfg);

  for (std::size_t level = 0; level < result.levels.size(); ++level) {
    const LevelReport& rep = result.levels[level];
    csv.row({static_cast<int>(level), rep.n, static_cast<long>(grids[level].node_count()),
             rep.setup_seconds, rep.interp_seconds, rep.outer_iterations, rep.inner_per_outer,
             rep.total_inner_iterations, rep.eigenvalue});
  }
  ctx.note("result.eigenvalue", result.eigenpair.eigenvalue);
  ctx.note("result.outer_iterations", std::to_string(result.eigenpair.outer_iterations));
  ctx.note("result.converged", result.eigenpair.converged ? "true" : "false");
  maybe_export_outputs(ctx, grids.back(), result.eigenpair.eigenvector);
}

void cmd_gpe(RunContext& ctx, const GridSpec& gspec) {
  if (level_count(gspec) != 1)
    throw ParameterError("gpe expects a single grid level");
  const Grid grid = build_level(gspec, 0);
  const PotentialKind kind = read_potential_kind(ctx.cfg);
  const PotentialParams params = read_potential_params(ctx.cfg, gspec.dimension);

  GpeProblem problem;
  problem.hamiltonian = build_full_operator(grid, build_potential(kind, params, grid));
  problem.laplacian = grid.laplacian();
  problem.beta = ctx.cfg.get_real("gpe.beta", 0.0);
  problem.mass = grid.mass;

  GpeFlowConfig flow;
  const std::string kind_name = ctx.cfg.get_string("gpe.flow", "h1");
  if (kind_name == "h1")
    flow.kind = GpeFlowKind::ModifiedH1;
  else if (kind_name == "au")
    flow.kind = GpeFlowKind::AdaptiveMetric;
  else
    throw ParameterError("gpe.flow must be h1 or au");
  flow.step = ctx.cfg.get_real("gpe.tau", flow.kind == GpeFlowKind::ModifiedH1 ? 0.1 : 1.0);
  flow.metric_shift = ctx.cfg.get_real("gpe.alpha", 20.0);
  flow.energy_rel_tol = ctx.cfg.get_real("gpe.tol", 1e-12);
  flow.max_iterations = ctx.cfg.get_int("gpe.max_iter", 20000);
  flow.inner = read_pcg_config(ctx.cfg);
  flow.inner.stagnation_window = ctx.cfg.get_int("pcg.stagnation_window", 100);
  const std::string init = ctx.cfg.get_string("gpe.init", "eigenfunction");
  if (init == "constant")
    flow.init = GpeInit::Constant;
  else if (init == "eigenfunction")
    flow.init = GpeInit::Eigenfunction;
  else
    throw ParameterError("gpe.init must be constant or eigenfunction");
  flow.record_history = true;

  const GpeResult result = gpe_gradient_flow(problem, flow);

  CsvWriter csv(ctx.out_path(ctx.cfg.get_string("output.csv", "gpe.csv")).string(),
                {"iteration", "energy", "rel_change", "linear_solves", "wall_s"});
  for (const auto& row : result.history)
    csv.row({row.iteration, row.energy, row.rel_change, row.linear_solves, row.seconds});

  ctx.note("result.energy", result.energy);
  ctx.note("result.eigenvalue", result.eigenvalue);
  ctx.note("result.iterations", std::to_string(result.iterations));
  ctx.note("result.linear_solves", std::to_string(result.linear_solves));
  ctx.note("result.converged", result.converged ? "true" : "false");
  maybe_export_outputs(ctx, grid, result.state);
}

struct SplitSetup {
  SeparableOperator a;
  RealField b_diag;
  SeparableOperator full;  // exact reference when fully separable
  bool fully_separable = false;
  Grid grid;
};

SplitSetup build_split(RunContext& ctx, const GridSpec& gspec) {
  if (level_count(gspec) != 1)
    throw ParameterError("propagate expects a single grid level");
  SplitSetup s{.grid = build_level(gspec, 0)};
  const Grid& grid = s.grid;
  const PotentialKind kind = read_potential_kind(ctx.cfg);
  const PotentialParams params = read_potential_params(ctx.cfg, gspec.dimension);
  const BuiltPotential pot = build_potential(kind, params, grid);
  s.fully_separable = !pot.nonseparable.has_value();

  const std::string split = ctx.cfg.get_string("propagate.split", "kinetic");
  RealField v1 = grid.sample([&](std::span<const double> x) {
    double acc = 0.0;
    for (int a = 0; a < grid.dim(); ++a) acc += pot.separable[a](x[a]);
    return acc;
  });
  if (split == "kinetic") {
    s.a = grid.laplacian();
    s.b_diag = v1;
    if (pot.nonseparable) s.b_diag.flat() += pot.nonseparable->flat();
  } else if (split == "kinetic+v1") {
    s.a = grid.separable_operator(pot.separable);
    s.b_diag = grid.field();
    if (pot.nonseparable) s.b_diag.flat() = pot.nonseparable->flat();
  } else {
    throw ParameterError("propagate.split must be kinetic or kinetic+v1");
  }
  if (s.fully_separable) s.full = grid.separable_operator(pot.separable);
  return s;
}

void cmd_propagate(RunContext& ctx, const GridSpec& gspec, bool table) {
  SplitSetup setup = build_split(ctx, gspec);
  const Grid& grid = setup.grid;

  SplitSpec spec;
  spec.quad_points = ctx.cfg.get_int("propagate.M", 1);
  const std::string comp = ctx.cfg.get_string("propagate.composition", "qhop");
  if (comp == "qhop")
    spec.composition = Composition::Single;
  else if (comp == "yoshida")
    spec.composition = Composition::Yoshida;
  else
    throw ParameterError("propagate.composition must be qhop or yoshida");
  spec.total_time = ctx.cfg.get_real("propagate.T", 0.1);
  spec.merge_across_steps = ctx.cfg.get_bool("propagate.merge", false);
  spec.mass_weighted_error = ctx.cfg.get_bool("propagate.mass_error", false);

  const std::string ref_name =
      ctx.cfg.get_string("propagate.reference", setup.fully_separable ? "exact" : "stationary");
  const std::string init =
      ctx.cfg.get_string("propagate.initial", ref_name == "exact" ? "box" : "ground-state");

  SplitReference reference = ExactReference{&setup.full};
  ComplexField psi0 = grid.complex_field();
  double lambda1 = 0.0;
  if (ref_name == "exact") {
    if (!setup.fully_separable)
      throw ParameterError("propagate.reference = exact needs a separable potential");
  } else if (ref_name == "stationary") {
    // Ground state of the full operator provides the stationary reference.
    const PotentialKind kind = read_potential_kind(ctx.cfg);
    const PotentialParams params = read_potential_params(ctx.cfg, gspec.dimension);
    const FullOperator op = build_full_operator(grid, build_potential(kind, params, grid));
    const InverseIterationConfig eig_cfg = read_eigen_config(ctx.cfg);
    RealField guess = op.sep.ground_state();
    guess.set_mass(grid.mass);
    const EigenpairResult pair = inverse_iteration(op, eig_cfg, guess);
    lambda1 = pair.eigenvalue;
    for (std::size_t i = 0; i < psi0.size(); ++i) psi0[i] = pair.eigenvector[i];
    reference = StationaryReference{lambda1};
    ctx.note("result.reference_eigenvalue", lambda1);
  } else {
    throw ParameterError("propagate.reference must be exact or stationary");
  }

  if (init == "box") {
    if (ref_name == "stationary")
      throw ParameterError("a stationary reference requires propagate.initial = ground-state");
    const double l = gspec.half_width;
    const RealField box = grid.sample([&](std::span<const double> x) {
      double v = 1.0;
      for (std::size_t a = 0; a < x.size(); ++a)
        v *= std::sin(M_PI * (x[a] + l) / (2.0 * l));
      return v;
    });
    for (std::size_t i = 0; i < psi0.size(); ++i) psi0[i] = box[i];
  } else if (init != "ground-state") {
    throw ParameterError("propagate.initial must be box or ground-state");
  }
  if (init == "ground-state" && ref_name == "exact") {
    const RealField gs = setup.full.ground_state();
    for (std::size_t i = 0; i < psi0.size(); ++i) psi0[i] = gs[i];
  }

  std::vector<double> dts;
  if (table)
    dts = ctx.cfg.get_real_list("propagate.dt_list", {0.01, 0.005});
  else
    dts = {ctx.cfg.get_real("propagate.dt", 0.01)};

  CsvWriter csv(ctx.out_path(ctx.cfg.get_string("output.csv", "propagate.csv")).string(),
                {"dt", "error", "rate", "steps", "wall_s", "mass_norm_drift"});
  double prev_err = 0.0, prev_dt = 0.0;
  ComplexField last_state = psi0;
  for (double dt : dts) {
    spec.dt = dt;
    const EvolveResult r = evolve(spec, setup.a, setup.b_diag, psi0, reference);
    ComplexField normalized = psi0;
    normalized.flat() /= normalized.flat().norm();
    const double drift =
        std::abs(norm(r.state, Weighting::Mass) - norm(normalized, Weighting::Mass)) /
        norm(normalized, Weighting::Mass);
    const bool have_rate = prev_dt > 0.0 && r.error > 0.0 && prev_err > 0.0;
    const double rate = have_rate ? std::log(prev_err / r.error) / std::log(prev_dt / dt) : 0.0;
    csv.row({dt, r.error, have_rate ? CsvValue(rate) : CsvValue(std::string()), r.steps,
             r.seconds, drift});
    prev_err = r.error;
    prev_dt = dt;
    last_state = r.state;
  }
  const std::string checkpoint = ctx.cfg.get_string("output.checkpoint", "");
  if (!checkpoint.empty()) dump_field(ctx.out_path(checkpoint).string(), last_state);
}

void cmd_pcg_bench(RunContext& ctx, const GridSpec& gspec) {
  const PotentialKind kind = read_potential_kind(ctx.cfg);
  const PotentialParams params = read_potential_params(ctx.cfg, gspec.dimension);
  PcgConfig pcg_cfg = read_pcg_config(ctx.cfg);
  const std::string precond_name = ctx.cfg.get_string("pcg.precond", "separable");

  CsvWriter csv(ctx.out_path(ctx.cfg.get_string("output.csv", "pcg_bench.csv")).string(),
                {"n", "dofs", "preconditioner", "iterations", "converged", "final_residual",
                 "setup_s", "solve_s"});

  for (int level = 0; level < level_count(gspec); ++level) {
    Stopwatch watch;
    const Grid grid = build_level(gspec, level);
    const BuiltPotential pot = build_potential(kind, params, grid);
    const FullOperator op = build_full_operator(grid, pot);
    const SeparableOperator laplacian = grid.laplacian();
    const double setup_s = watch.lap();

    auto apply = [&](const RealField& v) { return op.apply(v); };
    LinearMap precond;
    if (precond_name == "separable") {
      precond = [&](const RealField& r) { return op.sep.solve(r); };
    } else if (precond_name == "laplacian") {
      precond = [&](const RealField& r) { return laplacian.solve(r); };
    } else if (precond_name == "combined") {
      // V^{-1/2} (-Lap)^{-1} V^{-1/2} with the full nodal potential V.
      RealField v = grid.sample([&](std::span<const double> x) {
        double acc = 0.0;
        for (int a = 0; a < grid.dim(); ++a) acc += pot.separable[a](x[a]);
        return acc;
      });
      if (pot.nonseparable) v.flat() += pot.nonseparable->flat();
      if (v.flat().minCoeff() <= 0.0)
        throw ParameterError("combined preconditioner needs a positive potential");
      auto inv_sqrt_v = std::make_shared<RealField>(grid.field());
      inv_sqrt_v->flat().array() = v.flat().array().rsqrt();
      precond = [&, inv_sqrt_v](const RealField& r) {
        RealField t = r;
        t.flat().array() *= inv_sqrt_v->flat().array();
        t = laplacian.solve(t);
        t.flat().array() *= inv_sqrt_v->flat().array();
        return t;
      };
    } else if (precond_name == "v2-scaled") {
      if (!pot.nonseparable)
        throw ParameterError("v2-scaled preconditioner needs a non-separable part");
      if (pot.nonseparable->flat().minCoeff() <= 0.0)
        throw ParameterError("v2-scaled preconditioner needs positive V2");
      auto inv_sqrt = std::make_shared<RealField>(grid.field());
      inv_sqrt->flat().array() = pot.nonseparable->flat().array().rsqrt();
      precond = [&, inv_sqrt](const RealField& r) {
        RealField t = r;
        t.flat().array() *= inv_sqrt->flat().array();
        t = op.sep.solve(t);
        t.flat().array() *= inv_sqrt->flat().array();
        return t;
      };
    } else {
      throw ParameterError("pcg.precond must be separable, laplacian, combined, or v2-scaled");
    }

    const RealField rhs = random_field(grid, ctx.seed);
    RealField x(grid.shape());
    watch.lap();
    PcgConfig run_cfg = pcg_cfg;
    run_cfg.record_history = true;
    const PcgReport rep = pcg(apply, precond, rhs, x, run_cfg);
    const double solve_s = watch.lap();

    const int n = axis_size(grid.axes[0]);
    csv.row({n, static_cast<long>(grid.node_count()), precond_name, rep.iterations,
             std::string(rep.converged ? "true" : "false"), rep.final_residual, setup_s,
             solve_s});

    if (pcg_cfg.record_history) {
      CsvWriter hist(ctx.out_path("pcg_history_n" + std::to_string(n) + ".csv").string(),
                     {"iteration", "relative_residual"});
      for (std::size_t i = 0; i < rep.history.size(); ++i)
        hist.row({static_cast<int>(i), rep.history[i]});
    }
  }
}

void cmd_clustering(RunContext& ctx, const GridSpec& gspec) {
  if (gspec.kind != "sem") throw ParameterError("clustering runs on SEM grids");
  const PotentialKind kind = read_potential_kind(ctx.cfg);
  const PotentialParams params = read_potential_params(ctx.cfg, gspec.dimension);
  const double eps = ctx.cfg.get_real("clustering.epsilon", 0.1);

  CsvWriter csv(ctx.out_path(ctx.cfg.get_string("output.csv", "clustering.csv")).string(),
                {"n", "dofs", "epsilon", "outliers", "condition"});
  const bool spectrum_out = ctx.cfg.get_bool("clustering.spectrum", false);

  for (int level = 0; level < level_count(gspec); ++level) {
    const Grid grid = build_level(gspec, level);
    const BuiltPotential pot = build_potential(kind, params, grid);
    if (!pot.nonseparable)
      throw ParameterError("clustering needs a potential with a non-separable part");
    std::vector<Eigen::MatrixXd> sym_ops;
    for (int a = 0; a < grid.dim(); ++a)
      sym_ops.push_back(
          dense_ref::sym_axis_operator(std::get<Basis1D>(grid.axes[a]), pot.separable[a]));
    const auto report = dense_ref::clustering_report(sym_ops, *pot.nonseparable, eps);
    const int n = axis_size(grid.axes[0]);
    csv.row({n, static_cast<long>(grid.node_count()), eps, report.outliers, report.condition});
    if (spectrum_out) {
      CsvWriter spec_csv(ctx.out_path("spectrum_n" + std::to_string(n) + ".csv").string(),
                         {"index", "eigenvalue"});
      for (Eigen::Index i = 0; i < report.spectrum.size(); ++i)
        spec_csv.row({static_cast<int>(i), report.spectrum(i)});
    }
  }
}

void write_manifest(const RunContext& ctx) {
  std::ofstream out(ctx.out_path("manifest.txt"));
  if (!out) throw ParameterError("cannot write manifest in " + ctx.out_dir.string());
  out << "kronop.version = " << kVersion << "\n";
  out << "eigen.version = " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
      << EIGEN_MINOR_VERSION << "\n";
  for (const auto& [key, value] : ctx.cfg.resolved()) out << key << " = " << value << "\n";
  for (const auto& [key, value] : ctx.manifest_extra) out << key << " = " << value << "\n";
}

}  // namespace

Eigen::MatrixXd evaluate_slice(const Grid& grid, const RealField& field, const SliceSpec& spec) {
  const int d = grid.dim();
  if (spec.axis_a == spec.axis_b || spec.axis_a < 0 || spec.axis_b < 0 || spec.axis_a >= d ||
      spec.axis_b >= d)
    throw ParameterError("evaluate_slice: bad axis pair");
  if (static_cast<int>(spec.fixed.size()) != d - 2)
    throw ParameterError("evaluate_slice: need one fixed coordinate per remaining axis");
  if (spec.resolution < 1) throw ParameterError("evaluate_slice: resolution must be >= 1");

  // Contract the fixed axes to singletons, expand the two free axes on
  // uniform grids (axis numbering is unchanged throughout), then read the
  // R x R values out by stride arithmetic.
  RealField work = field;
  std::vector<int> fixed_axes;
  for (int a = 0; a < d; ++a)
    if (a != spec.axis_a && a != spec.axis_b) fixed_axes.push_back(a);
  for (std::size_t i = 0; i < fixed_axes.size(); ++i) {
    const int axis = fixed_axes[i];
    const auto* basis = std::get_if<Basis1D>(&grid.axes[axis]);
    if (!basis) throw CapabilityError("evaluate_slice: SEM grids only");
    Eigen::MatrixXd row = eval_weights_row(*basis, spec.fixed[i]);
    work = mode_product(work, row, axis);
  }

  auto eval_matrix = [&](int axis) {
    const auto* basis = std::get_if<Basis1D>(&grid.axes[axis]);
    if (!basis) throw CapabilityError("evaluate_slice: SEM grids only");
    Eigen::MatrixXd e(spec.resolution, basis->size());
    const double l = basis->half_width;
    for (int r = 0; r < spec.resolution; ++r) {
      const double t = spec.resolution == 1
                           ? 0.0
                           : -l + 2.0 * l * r / (spec.resolution - 1.0);
      e.row(r) = eval_weights_row(*basis, t);
    }
    return e;
  };
  work = mode_product(work, eval_matrix(spec.axis_a), spec.axis_a);
  work = mode_product(work, eval_matrix(spec.axis_b), spec.axis_b);

  std::vector<std::size_t> stride(d, 1);
  for (int a = 1; a < d; ++a) stride[a] = stride[a - 1] * work.shape()[a - 1];
  Eigen::MatrixXd out(spec.resolution, spec.resolution);
  for (int i = 0; i < spec.resolution; ++i)
    for (int j = 0; j < spec.resolution; ++j)
      out(i, j) = work[i * stride[spec.axis_a] + j * stride[spec.axis_b]];
  return out;
}

void export_slice(const Grid& grid, const RealField& field, const SliceSpec& spec,
                  const std::string& csv_path) {
  const Eigen::MatrixXd values = evaluate_slice(grid, field, spec);
  const auto* ba = std::get_if<Basis1D>(&grid.axes[spec.axis_a]);
  const auto* bb = std::get_if<Basis1D>(&grid.axes[spec.axis_b]);
  CsvWriter csv(csv_path, {"coord_a", "coord_b", "value"});
  for (int i = 0; i < spec.resolution; ++i)
    for (int j = 0; j < spec.resolution; ++j) {
      const double xa = spec.resolution == 1
                            ? 0.0
                            : -ba->half_width + 2.0 * ba->half_width * i / (spec.resolution - 1.0);
      const double xb = spec.resolution == 1
                            ? 0.0
                            : -bb->half_width + 2.0 * bb->half_width * j / (spec.resolution - 1.0);
      csv.row({xa, xb, values(i, j)});
    }
}

void run(Config& cfg) {
  RunContext ctx{.cfg = cfg};
  ctx.command = cfg.require_string("run.command");
  ctx.out_dir = cfg.get_string("run.output_dir", "out");
  ctx.seed = static_cast<std::uint64_t>(cfg.get_long("run.seed", 1));
  ctx.allow_large = cfg.get_bool("run.allow_large", false);
  const int threads = cfg.get_int("run.threads", 0);
  set_tensor_threads(threads);
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
  if (threads > 0) Eigen::setNbThreads(threads);

  const GridSpec gspec = read_grid_spec(cfg);
  const bool complex_scalars = ctx.command == "propagate" || ctx.command == "convergence-table";
  check_capacity(gspec, ctx.allow_large, complex_scalars);

  std::filesystem::create_directories(ctx.out_dir);

  if (ctx.command == "solve")
    cmd_solve(ctx, gspec);
  else if (ctx.command == "ground-state")
    cmd_ground_state(ctx, gspec);
  else if (ctx.command == "gpe")
    cmd_gpe(ctx, gspec);
  else if (ctx.command == "propagate")
    cmd_propagate(ctx, gspec, false);
  else if (ctx.command == "convergence-table")
    cmd_propagate(ctx, gspec, true);
  else if (ctx.command == "pcg-bench")
    cmd_pcg_bench(ctx, gspec);
  else if (ctx.command == "clustering")
    cmd_clustering(ctx, gspec);
  else
    throw ParameterError("unknown command: " + ctx.command);

  cfg.check_all_consumed();
  write_manifest(ctx);
}

int run_to_exit_code(const std::string& config_path, bool allow_large_override,
                     const std::string& output_dir_override) {
  try {
    Config cfg = Config::parse_file(config_path);
    if (allow_large_override) cfg.set("run.allow_large", "true");
    if (!output_dir_override.empty()) cfg.set("run.output_dir", output_dir_override);
    run(cfg);
    return 0;
  } catch (const ParameterError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const CapabilityError& e) {
    std::cerr << "capability refusal: " << e.what() << "\n";
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace kronop
