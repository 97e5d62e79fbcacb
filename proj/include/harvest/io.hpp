#pragma once

// Text formats: scaled value notation, sweep/region CSV, JSON reports and
// scenario config files.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "harvest/sweep.hpp"

namespace harvest {

/// Parses "<number>", "<number><unit>", "<unit>", "<a><unit>/<b>" or "<unit>/<b>",
/// e.g. "0.4pi", "pi/2", "5L/6". Returns the value in units where `unit` = `unit_value`.
double parse_scaled(std::string_view text, std::string_view unit, double unit_value);

/// Omega notation: plain number or multiple of pi.
double parse_omega(std::string_view text);

/// Time notation: returns {value, in_units_of_r}. "0.4r" -> {0.4, true}; "3.2" -> {3.2, false}.
std::pair<double, bool> parse_time(std::string_view text);

/// Comma-separated positions, each a number or multiple of L.
std::vector<double> parse_positions(std::string_view text, double length);

/// Axis notation "NAME=min:max:steps", bounds in the axis' own notation.
Axis parse_axis(std::string_view text);

/// Shortest round-tripping representation.
std::string format_number(double v);

/// Header plus one row per cell; missing quantities are empty fields.
void write_sweep_csv(std::ostream& out, const SweepGrid& grid);
/// Inverse of write_sweep_csv for the cell data (axes are not reconstructed).
SweepGrid read_sweep_csv(std::istream& in);

void write_region_csv(std::ostream& out, const SweepGrid& grid, const RegionMask& regions);
void write_emergence_csv(std::ostream& out, const RegionMask& regions);
void write_comparison_csv(std::ostream& out, const SweepGrid& periodic, const BoundaryComparison& comparison);

nlohmann::json to_json(const EntanglementReport& report);
nlohmann::json to_json(const ScenarioSpec& scenario);
nlohmann::json to_json(const SweepGrid& grid);
nlohmann::json to_json(const RegionMask& regions);
nlohmann::json to_json(const BoundaryComparison& comparison);

/// Applies config keys to `scenario`. Recognized keys: boundary, length, modes,
/// positions (array of numbers or strings in L notation), omega, coupling, time,
/// dirichlet_tripartite. Unknown keys are rejected.
void apply_config(const nlohmann::json& config, ScenarioSpec& scenario);

}  // namespace harvest
