#pragma once

// Scenario orchestration: single points, grid sweeps with engine reuse,
// cutoff convergence, region masks and boundary comparisons.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harvest/cavity.hpp"
#include "harvest/entanglement.hpp"
#include "harvest/evolution.hpp"

namespace harvest {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr double kDefaultThreshold = 1e-10;
/// Sweeps with a larger share of failed cells are reported as numerical failures.
inline constexpr double kFailureBudget = 1e-3;

struct ScenarioSpec {
  CavitySpec cavity;
  DetectorArraySpec detectors{default_positions(10.0)};
  /// Interaction duration, in units of r when `duration_in_r` is set.
  double duration = 1.0;
  bool duration_in_r = true;
  /// Compute the tripartite estimator for Dirichlet cavities as well.
  bool dirichlet_tripartite = false;

  /// Light-crossing time between neighbouring equidistant detectors, L/3.
  double light_crossing() const noexcept { return cavity.length / 3.0; }
  double time() const noexcept { return duration_in_r ? duration * light_crossing() : duration; }
  double time_over_r() const noexcept { return time() / light_crossing(); }

  std::vector<std::string> validate() const;
};

/// Default scenario: periodic, L = 10, N = 50, lambda = 0.01, Omega = 0.4 pi, T = r.
ScenarioSpec default_scenario();

/// Analysis options implied by a scenario (tripartite only for periodic unless opted in).
AnalysisOptions analysis_options(const ScenarioSpec& scenario);

struct PointResult {
  EntanglementReport report;
  int modes = 0;
  EvolutionEngine::Method method = EvolutionEngine::Method::Pade;
  double elapsed_seconds = 0.0;
};

PointResult run_point(const ScenarioSpec& scenario);
/// Reuses an engine built for the scenario's Hamiltonian; only the duration is read from `scenario`.
PointResult run_point(const EvolutionEngine& engine, const ScenarioSpec& scenario);

enum class AxisName { Time, Omega, Length, Modes };

const char* to_string(AxisName a);
AxisName parse_axis_name(std::string_view text);

struct Axis {
  AxisName name = AxisName::Time;
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  /// Linear samples min..max inclusive; a single step yields min.
  std::vector<double> values() const;
};

struct SweepCell {
  double time_over_r = 0.0;
  double omega = 0.0;
  double length = 0.0;
  int modes = 0;
  Boundary boundary = Boundary::Periodic;
  std::optional<EntanglementReport> report;
  std::string error;

  bool failed() const noexcept { return !report.has_value(); }
  bool spacelike_neighbors() const noexcept { return time_over_r < 1.0; }
  /// Outer detectors of the default alignment are 2r apart.
  bool spacelike_sides() const noexcept { return time_over_r < 2.0; }
};

struct SweepGrid {
  std::vector<Axis> axes;
  std::vector<SweepCell> cells;  // row-major, first axis outermost
  ScenarioSpec base;
  double threshold = kDefaultThreshold;
  std::string version = kVersion;

  std::size_t failed_cells() const;
  bool within_failure_budget() const;
};

struct SweepOptions {
  int workers = 1;
  /// Time axis values are multiples of r (otherwise absolute).
  bool time_in_r = true;
};

/// Evaluates every cell of the cartesian product of `axes` applied to `base`.
/// Engines are shared by all cells that differ only in duration.
SweepGrid sweep(const ScenarioSpec& base, const std::vector<Axis>& axes, const SweepOptions& options = {});

/// Time axis [0.05r, 2r] and Omega axis [0.05pi, 2pi], 120 x 120.
std::vector<Axis> default_time_omega_axes(int steps = 120);
/// Length axis [2, 30] and Omega axis [0.05pi, 2pi].
std::vector<Axis> default_length_omega_axes(int steps = 120);

struct ConvergenceRow {
  int modes = 0;
  PointResult result;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  /// Per quantity: |v_last - v_prev| / |v_last| between the last two rows.
  std::map<std::string, double> relative_change;
};

ConvergenceStudy convergence_study(const ScenarioSpec& scenario, const std::vector<int>& modes);

/// Quantities stored per cell, named as in the sweep CSV.
enum class Quantity { E12, E13, E23, E1vs23, E2vs13, E3vs12, Tripartite };

inline constexpr Quantity kAllQuantities[] = {Quantity::E12,    Quantity::E13,    Quantity::E23,       Quantity::E1vs23,
                                              Quantity::E2vs13, Quantity::E3vs12, Quantity::Tripartite};

const char* column_name(Quantity q);
std::optional<double> value_of(const EntanglementReport& report, Quantity q);

struct EmergenceRow {
  double omega = 0.0;
  double length = 0.0;
  int modes = 0;
  /// Smallest T/r with a positive cell, per quantity.
  std::map<Quantity, std::optional<double>> first_time_over_r;
};

struct RegionMask {
  double threshold = kDefaultThreshold;
  /// One entry per grid cell; only quantities present in at least one cell appear.
  std::map<Quantity, std::vector<bool>> mask;
  std::vector<EmergenceRow> emergence;

  /// Minimum emergence T/r over all rows.
  std::optional<double> min_emergence(Quantity q) const;
  /// Cells where `inner` is set but `outer` is not.
  std::size_t containment_violations(Quantity inner, Quantity outer) const;
};

RegionMask extract_regions(const SweepGrid& grid, double epsilon);

struct BoundaryComparison {
  double threshold = kDefaultThreshold;
  std::vector<bool> periodic_mask;   // neighbour pair E_12
  std::vector<bool> dirichlet_mask;  // middle-side pair E_12
  std::size_t periodic_only = 0;
  std::size_t dirichlet_only = 0;
  std::size_t spacelike_periodic_only = 0;
  std::optional<double> periodic_emergence;
  std::optional<double> dirichlet_emergence;

  /// Periodic emergence strictly earlier than Dirichlet (never-emerging counts as infinitely late).
  bool periodic_earlier() const;
};

/// Requires both grids to cover the same (T/r, Omega) points in the same order.
BoundaryComparison compare_boundaries(const SweepGrid& periodic, const SweepGrid& dirichlet, double epsilon);

}  // namespace harvest
