// Command-line front end: point, sweep, converge, regions, compare.
//
// Exit codes: 0 success, 1 invalid configuration, 2 numerical failure budget exceeded.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "harvest/errors.hpp"
#include "harvest/io.hpp"
#include "harvest/sweep.hpp"

namespace {

using namespace harvest;

constexpr int kExitInvalid = 1;
constexpr int kExitNumerical = 2;

struct CommonArgs {
  std::string config;
  std::string boundary;
  double length = 0.0;
  double coupling = 0.0;
  std::string omega;
  std::string time;
  int modes = 0;
  std::string positions;
  double threshold = kDefaultThreshold;
  std::string out;
  std::string format = "csv";
  int workers = 1;
  long long seed = 0;
  bool dirichlet_tripartite = false;

  CLI::Option* length_opt = nullptr;
  CLI::Option* coupling_opt = nullptr;
  CLI::Option* modes_opt = nullptr;
};

void add_common(CLI::App& app, CommonArgs& a) {
  app.add_option("--config", a.config, "JSON scenario file; flags override its values")->check(CLI::ExistingFile);
  app.add_option("--boundary", a.boundary, "periodic or dirichlet");
  a.length_opt = app.add_option("--length", a.length, "cavity length L");
  a.coupling_opt = app.add_option("--coupling", a.coupling, "coupling lambda (default 0.01)");
  app.add_option("--omega", a.omega, "detector frequency, e.g. 0.4pi");
  app.add_option("--time", a.time, "interaction time, absolute or e.g. 0.4r");
  a.modes_opt = app.add_option("--modes", a.modes, "field mode cutoff N (default 50)");
  app.add_option("--positions", a.positions, "detector positions, e.g. L/6,L/2,5L/6");
  app.add_option("--threshold", a.threshold, "region threshold epsilon")->capture_default_str();
  app.add_option("--out", a.out, "output path (default stdout)");
  app.add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--workers", a.workers, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--seed", a.seed, "reserved; all computations are deterministic");
  app.add_flag("--dirichlet-tripartite", a.dirichlet_tripartite, "also compute the tripartite estimator for Dirichlet cavities");
}

ScenarioSpec resolve_scenario(const CommonArgs& a) {
  ScenarioSpec s = default_scenario();
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("cannot parse config " + a.config + ": " + e.what());
    }
    apply_config(j, s);
  }
  if (!a.boundary.empty()) s.cavity.boundary = parse_boundary(a.boundary);
  if (a.length_opt->count() > 0) {
    if (!(a.length > 0.0)) throw InvalidArgument("cavity length must be positive");
    for (double& x : s.detectors.positions) x *= a.length / s.cavity.length;
    s.cavity.length = a.length;
  }
  if (a.coupling_opt->count() > 0) s.detectors.coupling = a.coupling;
  if (!a.omega.empty()) s.detectors.omega = parse_omega(a.omega);
  if (!a.time.empty()) std::tie(s.duration, s.duration_in_r) = parse_time(a.time);
  if (a.modes_opt->count() > 0) s.cavity.cutoff = a.modes;
  if (!a.positions.empty()) s.detectors.positions = parse_positions(a.positions, s.cavity.length);
  if (a.dirichlet_tripartite) s.dirichlet_tripartite = true;
  for (const auto& w : s.validate()) std::cerr << "warning: " << w << '\n';
  return s;
}

/// Writes to --out or stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open output file " + path);
  out << text;
}

std::string sibling(const std::string& path, const std::string& name) {
  if (path.empty() || path == "-") return name;
  return (std::filesystem::path(path).parent_path() / name).string();
}

std::vector<Axis> resolve_axes(const std::vector<std::string>& specs, int steps, bool lengths) {
  if (specs.empty()) return lengths ? default_length_omega_axes(steps) : default_time_omega_axes(steps);
  std::vector<Axis> axes;
  for (const auto& s : specs) axes.push_back(parse_axis(s));
  return axes;
}

SweepGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open sweep file " + path);
  return read_sweep_csv(in);
}

int check_budget(const SweepGrid& grid) {
  if (grid.within_failure_budget()) return 0;
  std::cerr << "error: " << grid.failed_cells() << " of " << grid.cells.size() << " cells failed\n";
  return kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vacuum entanglement harvesting by oscillator detectors in a 1D cavity"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonArgs point_args, sweep_args, conv_args, region_args, cmp_args;
  std::vector<std::string> sweep_axes, region_axes, cmp_axes;
  int sweep_steps = 120, region_steps = 120, cmp_steps = 120;
  bool sweep_absolute = false, sweep_lengths = false, region_absolute = false;
  std::string modes_list = "10,20,30,40,50,100";
  std::string region_in, periodic_in, dirichlet_in;

  auto* point = app.add_subcommand("point", "analyse a single scenario");
  add_common(*point, point_args);

  auto* sw = app.add_subcommand("sweep", "evaluate a parameter grid");
  add_common(*sw, sweep_args);
  sw->add_option("--axis", sweep_axes, "axis NAME=min:max:steps with NAME in T, Omega, L, N (repeatable)");
  sw->add_option("--steps", sweep_steps, "steps per axis of the default grid")->capture_default_str();
  sw->add_flag("--absolute-time", sweep_absolute, "T axis values are absolute instead of multiples of r");
  sw->add_flag("--length-omega", sweep_lengths, "default grid over (L, Omega) instead of (T, Omega)");

  auto* conv = app.add_subcommand("converge", "cutoff convergence study");
  add_common(*conv, conv_args);
  conv->add_option("--modes-list", modes_list, "ascending comma-separated cutoffs")->capture_default_str();

  auto* reg = app.add_subcommand("regions", "threshold a sweep into region masks");
  add_common(*reg, region_args);
  reg->add_option("--in", region_in, "existing sweep CSV (otherwise a sweep is run)")->check(CLI::ExistingFile);
  reg->add_option("--axis", region_axes, "sweep axes when no --in is given");
  reg->add_option("--steps", region_steps, "steps per axis of the default grid")->capture_default_str();
  reg->add_flag("--absolute-time", region_absolute, "T axis values are absolute");

  auto* cmp = app.add_subcommand("compare", "periodic vs Dirichlet neighbour-pair regions");
  add_common(*cmp, cmp_args);
  cmp->add_option("--periodic-in", periodic_in, "periodic sweep CSV")->check(CLI::ExistingFile);
  cmp->add_option("--dirichlet-in", dirichlet_in, "Dirichlet sweep CSV")->check(CLI::ExistingFile);
  cmp->add_option("--axis", cmp_axes, "sweep axes when no input files are given");
  cmp->add_option("--steps", cmp_steps, "steps per axis of the default grid")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  try {
    if (point->parsed()) {
      const auto& a = point_args;
      const ScenarioSpec s = resolve_scenario(a);
      const PointResult r = run_point(s);
      SweepGrid grid;
      grid.base = s;
      grid.threshold = a.threshold;
      grid.cells.push_back({s.time_over_r(), s.detectors.omega, s.cavity.length, s.cavity.cutoff, s.cavity.boundary, r.report, {}});
      if (a.format == "json") {
        nlohmann::json j = {{"scenario", to_json(s)},
                            {"report", to_json(r.report)},
                            {"N", r.modes},
                            {"spacelike_neighbors", grid.cells.front().spacelike_neighbors()},
                            {"elapsed_seconds", r.elapsed_seconds}};
        emit(a.out, j.dump(2) + "\n");
      } else {
        std::ostringstream os;
        write_sweep_csv(os, grid);
        emit(a.out, os.str());
      }
      return 0;
    }

    if (sw->parsed()) {
      const auto& a = sweep_args;
      const ScenarioSpec s = resolve_scenario(a);
      SweepGrid grid = sweep(s, resolve_axes(sweep_axes, sweep_steps, sweep_lengths), {a.workers, !sweep_absolute});
      grid.threshold = a.threshold;
      std::ostringstream os;
      if (a.format == "json") {
        os << to_json(grid).dump(2) << '\n';
      } else {
        write_sweep_csv(os, grid);
      }
      emit(a.out, os.str());
      return check_budget(grid);
    }

    if (conv->parsed()) {
      const auto& a = conv_args;
      const ScenarioSpec s = resolve_scenario(a);
      std::vector<int> modes;
      for (double v : parse_positions(modes_list, 1.0)) modes.push_back(static_cast<int>(v));
      const ConvergenceStudy study = convergence_study(s, modes);
      std::ostringstream os;
      if (a.format == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& row : study.rows) {
          rows.push_back({{"N", row.modes}, {"report", to_json(row.result.report)}, {"elapsed_seconds", row.result.elapsed_seconds}});
        }
        os << nlohmann::json{{"scenario", to_json(s)}, {"rows", rows}, {"relative_change_last_two", study.relative_change}}.dump(2)
           << '\n';
      } else {
        os << "N";
        for (Quantity q : kAllQuantities) os << ',' << column_name(q);
        os << '\n';
        for (const auto& row : study.rows) {
          os << row.modes;
          for (Quantity q : kAllQuantities) {
            os << ',';
            if (const auto v = value_of(row.result.report, q)) os << format_number(*v);
          }
          os << '\n';
        }
        for (const auto& [name, change] : study.relative_change) {
          std::cerr << "relative change " << name << ": " << format_number(change) << '\n';
        }
      }
      emit(a.out, os.str());
      return 0;
    }

    if (reg->parsed()) {
      const auto& a = region_args;
      SweepGrid grid = region_in.empty()
                           ? sweep(resolve_scenario(a), resolve_axes(region_axes, region_steps, false), {a.workers, !region_absolute})
                           : load_grid(region_in);
      const RegionMask regions = extract_regions(grid, a.threshold);
      if (a.format == "json") {
        emit(a.out, to_json(regions).dump(2) + "\n");
      } else {
        std::ostringstream mask, summary;
        write_region_csv(mask, grid, regions);
        write_emergence_csv(summary, regions);
        emit(a.out, mask.str());
        emit(sibling(a.out, "emergence_T_over_r_per_omega.csv"), summary.str());
      }
      for (const auto& [q, m] : regions.mask) {
        const auto e = regions.min_emergence(q);
        std::cerr << column_name(q) << " emergence T/r: " << (e ? format_number(*e) : "none") << '\n';
      }
      return check_budget(grid);
    }

    if (cmp->parsed()) {
      const auto& a = cmp_args;
      SweepGrid periodic, dirichlet;
      if (!periodic_in.empty() || !dirichlet_in.empty()) {
        if (periodic_in.empty() || dirichlet_in.empty()) throw InvalidArgument("--periodic-in and --dirichlet-in go together");
        periodic = load_grid(periodic_in);
        dirichlet = load_grid(dirichlet_in);
      } else {
        ScenarioSpec s = resolve_scenario(a);
        const auto axes = resolve_axes(cmp_axes, cmp_steps, false);
        s.cavity.boundary = Boundary::Periodic;
        periodic = sweep(s, axes, {a.workers, true});
        s.cavity.boundary = Boundary::Dirichlet;
        dirichlet = sweep(s, axes, {a.workers, true});
      }
      const BoundaryComparison c = compare_boundaries(periodic, dirichlet, a.threshold);
      if (a.format == "json") {
        emit(a.out, to_json(c).dump(2) + "\n");
      } else {
        std::ostringstream os;
        write_comparison_csv(os, periodic, c);
        emit(a.out, os.str());
        std::cerr << to_json(c).dump() << '\n';
      }
      return std::max(check_budget(periodic), check_budget(dirichlet));
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitInvalid;
  }
  return 0;
}
