#include "harvest/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <thread>
#include <tuple>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  const auto threads = static_cast<std::size_t>(std::clamp(workers, 1, 256));
  if (threads == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(threads, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

std::string describe(const ScenarioSpec& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "(boundary=%s, L=%.17g, N=%d, Omega=%.17g, lambda=%.17g, T=%.17g)",
                std::string(to_string(s.cavity.boundary)).c_str(), s.cavity.length, s.cavity.cutoff, s.detectors.omega,
                s.detectors.coupling, s.time());
  return buf;
}

/// Scenario for one grid point; positions scale with the cavity length.
ScenarioSpec apply_axis(ScenarioSpec s, AxisName name, double value, bool time_in_r) {
  switch (name) {
    case AxisName::Time:
      s.duration = value;
      s.duration_in_r = time_in_r;
      break;
    case AxisName::Omega:
      s.detectors.omega = value;
      break;
    case AxisName::Length: {
      const double ratio = value / s.cavity.length;
      for (double& x : s.detectors.positions) x *= ratio;
      s.cavity.length = value;
      break;
    }
    case AxisName::Modes:
      s.cavity.cutoff = static_cast<int>(std::lround(value));
      break;
  }
  return s;
}

}  // namespace

std::vector<std::string> ScenarioSpec::validate() const {
  auto warnings = harvest::validate(cavity, detectors);
  if (!(duration >= 0.0) || !std::isfinite(duration)) throw InvalidArgument("interaction duration must be non-negative and finite");
  return warnings;
}

ScenarioSpec default_scenario() { return ScenarioSpec{}; }

AnalysisOptions analysis_options(const ScenarioSpec& scenario) {
  AnalysisOptions options;
  options.symmetric_hint = true;
  options.tripartite = scenario.cavity.boundary == Boundary::Periodic || scenario.dirichlet_tripartite;
  return options;
}

PointResult run_point(const EvolutionEngine& engine, const ScenarioSpec& scenario) {
  const auto start = std::chrono::steady_clock::now();
  PointResult result;
  result.modes = scenario.cavity.cutoff;
  result.method = engine.method();
  try {
    const GaussianState det = engine.evolve_detectors(scenario.time());
    result.report = analyze_detectors(det, analysis_options(scenario));
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " at " + describe(scenario));
  }
  result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

PointResult run_point(const ScenarioSpec& scenario) {
  scenario.validate();
  const auto start = std::chrono::steady_clock::now();
  std::optional<EvolutionEngine> engine;
  try {
    engine.emplace(scenario.cavity, scenario.detectors);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " at " + describe(scenario));
  }
  PointResult result = run_point(*engine, scenario);
  result.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

const char* to_string(AxisName a) {
  switch (a) {
    case AxisName::Time:
      return "T";
    case AxisName::Omega:
      return "Omega";
    case AxisName::Length:
      return "L";
    case AxisName::Modes:
      return "N";
  }
  return "?";
}

AxisName parse_axis_name(std::string_view text) {
  if (text == "T") return AxisName::Time;
  if (text == "Omega" || text == "omega") return AxisName::Omega;
  if (text == "L") return AxisName::Length;
  if (text == "N") return AxisName::Modes;
  throw InvalidArgument("unknown axis '" + std::string(text) + "' (expected T, Omega, L or N)");
}

std::vector<double> Axis::values() const {
  if (steps < 1) throw InvalidArgument(std::string("axis ") + to_string(name) + " needs at least one step");
  if (!std::isfinite(min) || !std::isfinite(max)) throw InvalidArgument(std::string("axis ") + to_string(name) + " bounds must be finite");
  std::vector<double> v(steps);
  for (int i = 0; i < steps; ++i) {
    v[i] = steps == 1 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return v;
}

std::size_t SweepGrid::failed_cells() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const SweepCell& c) { return c.failed(); }));
}

bool SweepGrid::within_failure_budget() const {
  return cells.empty() || static_cast<double>(failed_cells()) <= kFailureBudget * static_cast<double>(cells.size());
}

SweepGrid sweep(const ScenarioSpec& base, const std::vector<Axis>& axes, const SweepOptions& options) {
  if (axes.empty()) throw InvalidArgument("sweep needs at least one axis");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (axes[i].name == axes[j].name) throw InvalidArgument(std::string("axis ") + to_string(axes[i].name) + " given twice");
    }
  }
  base.validate();

  std::vector<std::vector<double>> values;
  std::size_t total = 1;
  for (const auto& a : axes) {
    values.push_back(a.values());
    total *= values.back().size();
  }

  SweepGrid grid;
  grid.axes = axes;
  grid.base = base;
  grid.cells.resize(total);

  // Expand the cartesian product and group cells that share a Hamiltonian.
  std::vector<ScenarioSpec> scenarios(total);
  std::vector<std::size_t> group_of(total);
  std::vector<std::size_t> group_leader;
  std::map<std::tuple<double, double, int>, std::size_t> groups;
  for (std::size_t flat = 0; flat < total; ++flat) {
    ScenarioSpec s = base;
    std::size_t rem = flat;
    for (std::size_t a = axes.size(); a-- > 0;) {
      const std::size_t idx = rem % values[a].size();
      rem /= values[a].size();
      s = apply_axis(std::move(s), axes[a].name, values[a][idx], options.time_in_r);
    }
    const auto key = std::make_tuple(s.detectors.omega, s.cavity.length, s.cavity.cutoff);
    const auto [it, inserted] = groups.try_emplace(key, group_leader.size());
    if (inserted) group_leader.push_back(flat);
    group_of[flat] = it->second;

    auto& cell = grid.cells[flat];
    cell.time_over_r = s.time_over_r();
    cell.omega = s.detectors.omega;
    cell.length = s.cavity.length;
    cell.modes = s.cavity.cutoff;
    cell.boundary = s.cavity.boundary;
    scenarios[flat] = std::move(s);
  }

  std::vector<std::unique_ptr<EvolutionEngine>> engines(group_leader.size());
  std::vector<std::string> engine_errors(group_leader.size());
  parallel_for(group_leader.size(), options.workers, [&](std::size_t g) {
    const ScenarioSpec& s = scenarios[group_leader[g]];
    try {
      s.validate();
      engines[g] = std::make_unique<EvolutionEngine>(s.cavity, s.detectors);
    } catch (const std::exception& e) {
      engine_errors[g] = std::string(e.what()) + " at " + describe(s);
    }
  });

  parallel_for(total, options.workers, [&](std::size_t flat) {
    auto& cell = grid.cells[flat];
    const std::size_t g = group_of[flat];
    if (!engines[g]) {
      cell.error = engine_errors[g];
      return;
    }
    try {
      cell.report = run_point(*engines[g], scenarios[flat]).report;
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return grid;
}

std::vector<Axis> default_time_omega_axes(int steps) {
  return {{AxisName::Time, 0.05, 2.0, steps}, {AxisName::Omega, 0.05 * std::numbers::pi, 2.0 * std::numbers::pi, steps}};
}

std::vector<Axis> default_length_omega_axes(int steps) {
  return {{AxisName::Length, 2.0, 30.0, steps}, {AxisName::Omega, 0.05 * std::numbers::pi, 2.0 * std::numbers::pi, steps}};
}

const char* column_name(Quantity q) {
  switch (q) {
    case Quantity::E12:
      return "E_12";
    case Quantity::E13:
      return "E_13";
    case Quantity::E23:
      return "E_23";
    case Quantity::E1vs23:
      return "E_1_vs_23";
    case Quantity::E2vs13:
      return "E_2_vs_13";
    case Quantity::E3vs12:
      return "E_3_vs_12";
    case Quantity::Tripartite:
      return "E_tri";
  }
  return "?";
}

std::optional<double> value_of(const EntanglementReport& report, Quantity q) {
  switch (q) {
    case Quantity::E12:
      return report.pair(0, 1);
    case Quantity::E13:
      return report.pair(0, 2);
    case Quantity::E23:
      return report.pair(1, 2);
    case Quantity::E1vs23:
      return report.solo(0);
    case Quantity::E2vs13:
      return report.solo(1);
    case Quantity::E3vs12:
      return report.solo(2);
    case Quantity::Tripartite:
      return report.tripartite;
  }
  return std::nullopt;
}

ConvergenceStudy convergence_study(const ScenarioSpec& scenario, const std::vector<int>& modes) {
  if (modes.empty()) throw InvalidArgument("convergence study needs at least one cutoff");
  if (!std::is_sorted(modes.begin(), modes.end())) throw InvalidArgument("cutoff values must be ascending");
  ConvergenceStudy study;
  for (int n : modes) {
    ScenarioSpec s = scenario;
    s.cavity.cutoff = n;
    study.rows.push_back({n, run_point(s)});
  }
  if (study.rows.size() >= 2) {
    const auto& last = study.rows.back().result.report;
    const auto& prev = study.rows[study.rows.size() - 2].result.report;
    for (Quantity q : kAllQuantities) {
      const auto a = value_of(last, q);
      const auto b = value_of(prev, q);
      if (!a || !b) continue;
      const double diff = std::abs(*a - *b);
      study.relative_change[column_name(q)] =
          *a != 0.0 ? diff / std::abs(*a) : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    }
  }
  return study;
}

std::optional<double> RegionMask::min_emergence(Quantity q) const {
  std::optional<double> best;
  for (const auto& row : emergence) {
    const auto it = row.first_time_over_r.find(q);
    if (it == row.first_time_over_r.end() || !it->second) continue;
    if (!best || *it->second < *best) best = *it->second;
  }
  return best;
}

std::size_t RegionMask::containment_violations(Quantity inner, Quantity outer) const {
  const auto in = mask.find(inner);
  if (in == mask.end()) return 0;
  const auto out = mask.find(outer);
  std::size_t count = 0;
  for (std::size_t i = 0; i < in->second.size(); ++i) {
    if (in->second[i] && (out == mask.end() || !out->second[i])) ++count;
  }
  return count;
}

RegionMask extract_regions(const SweepGrid& grid, double epsilon) {
  RegionMask regions;
  regions.threshold = epsilon;
  for (Quantity q : kAllQuantities) {
    const bool present = std::any_of(grid.cells.begin(), grid.cells.end(),
                                     [q](const SweepCell& c) { return c.report && value_of(*c.report, q).has_value(); });
    if (!present) continue;
    auto& m = regions.mask[q];
    m.resize(grid.cells.size());
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
      const auto& c = grid.cells[i];
      const auto v = c.report ? value_of(*c.report, q) : std::nullopt;
      m[i] = v && *v > epsilon;
    }
  }

  std::map<std::tuple<double, double, int>, std::size_t> rows;
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& c = grid.cells[i];
    const auto key = std::make_tuple(c.omega, c.length, c.modes);
    auto [it, inserted] = rows.try_emplace(key, regions.emergence.size());
    if (inserted) {
      EmergenceRow row{c.omega, c.length, c.modes, {}};
      for (const auto& [q, m] : regions.mask) row.first_time_over_r[q] = std::nullopt;
      regions.emergence.push_back(std::move(row));
    }
    auto& row = regions.emergence[it->second];
    for (const auto& [q, m] : regions.mask) {
      if (!m[i]) continue;
      auto& first = row.first_time_over_r[q];
      if (!first || c.time_over_r < *first) first = c.time_over_r;
    }
  }
  return regions;
}

bool BoundaryComparison::periodic_earlier() const {
  if (!periodic_emergence) return false;
  if (!dirichlet_emergence) return true;
  return *periodic_emergence < *dirichlet_emergence;
}

BoundaryComparison compare_boundaries(const SweepGrid& periodic, const SweepGrid& dirichlet, double epsilon) {
  if (periodic.cells.size() != dirichlet.cells.size()) {
    throw InvalidArgument("grids differ in size: " + std::to_string(periodic.cells.size()) + " vs " +
                          std::to_string(dirichlet.cells.size()));
  }
  const auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); };
  for (std::size_t i = 0; i < periodic.cells.size(); ++i) {
    const auto& p = periodic.cells[i];
    const auto& d = dirichlet.cells[i];
    if (!close(p.time_over_r, d.time_over_r) || !close(p.omega, d.omega)) {
      throw InvalidArgument("grids do not share (T, Omega) axes at cell " + std::to_string(i));
    }
  }

  BoundaryComparison out;
  out.threshold = epsilon;
  const auto mask_of = [&](const SweepGrid& g) {
    std::vector<bool> m(g.cells.size());
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
      const auto v = g.cells[i].report ? value_of(*g.cells[i].report, Quantity::E12) : std::nullopt;
      m[i] = v && *v > epsilon;
    }
    return m;
  };
  out.periodic_mask = mask_of(periodic);
  out.dirichlet_mask = mask_of(dirichlet);
  for (std::size_t i = 0; i < periodic.cells.size(); ++i) {
    const bool p = out.periodic_mask[i];
    const bool d = out.dirichlet_mask[i];
    const double t = periodic.cells[i].time_over_r;
    if (p && !d) {
      ++out.periodic_only;
      if (periodic.cells[i].spacelike_neighbors()) ++out.spacelike_periodic_only;
    }
    if (d && !p) ++out.dirichlet_only;
    if (p && (!out.periodic_emergence || t < *out.periodic_emergence)) out.periodic_emergence = t;
    if (d && (!out.dirichlet_emergence || t < *out.dirichlet_emergence)) out.dirichlet_emergence = t;
  }
  return out;
}

}  // namespace harvest
