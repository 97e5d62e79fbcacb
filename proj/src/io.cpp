#include "harvest/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::string_view what) {
  const auto t = trim(text);
  double v = 0.0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last) {
    throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + '"';
}

std::string status_of(const SweepCell& c) { return c.failed() ? "failed: " + c.error : "ok"; }

void write_coordinates(std::ostream& out, const SweepCell& c) {
  out << format_number(c.time_over_r) << ',' << format_number(c.omega) << ',' << format_number(c.length) << ','
      << c.modes << ',' << to_string(c.boundary);
}

}  // namespace

double parse_scaled(std::string_view text, std::string_view unit, double unit_value) {
  const auto t = trim(text);
  const auto pos = t.find(unit);
  if (pos == std::string_view::npos) return parse_number(t, "value");

  auto prefix = trim(t.substr(0, pos));
  auto suffix = trim(t.substr(pos + unit.size()));
  if (!prefix.empty() && prefix.back() == '*') prefix = trim(prefix.substr(0, prefix.size() - 1));

  double coef = 1.0;
  if (prefix == "-") {
    coef = -1.0;
  } else if (!prefix.empty() && prefix != "+") {
    coef = parse_number(prefix, "coefficient");
  }
  double divisor = 1.0;
  if (!suffix.empty()) {
    if (suffix.front() != '/') throw InvalidArgument("unexpected trailing text in '" + std::string(text) + "'");
    divisor = parse_number(suffix.substr(1), "divisor");
    if (divisor == 0.0) throw InvalidArgument("division by zero in '" + std::string(text) + "'");
  }
  return coef * unit_value / divisor;
}

double parse_omega(std::string_view text) { return parse_scaled(text, "pi", std::numbers::pi); }

std::pair<double, bool> parse_time(std::string_view text) {
  const auto t = trim(text);
  if (t.find('r') != std::string_view::npos) return {parse_scaled(t, "r", 1.0), true};
  return {parse_number(t, "time"), false};
}

std::vector<double> parse_positions(std::string_view text, double length) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find(',', start);
    const auto item = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    out.push_back(parse_scaled(item, "L", length));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

Axis parse_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw InvalidArgument("axis must look like NAME=min:max:steps, got '" + std::string(text) + "'");
  Axis axis;
  axis.name = parse_axis_name(trim(text.substr(0, eq)));
  const auto spec = text.substr(eq + 1);
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : spec.find(':', c1 + 1);
  if (c2 == std::string_view::npos) throw InvalidArgument("axis must look like NAME=min:max:steps, got '" + std::string(text) + "'");

  const auto bound = [&](std::string_view s) {
    switch (axis.name) {
      case AxisName::Time:
        return parse_scaled(s, "r", 1.0);
      case AxisName::Omega:
        return parse_omega(s);
      default:
        return parse_number(s, "axis bound");
    }
  };
  axis.min = bound(spec.substr(0, c1));
  axis.max = bound(spec.substr(c1 + 1, c2 - c1 - 1));
  const double steps = parse_number(spec.substr(c2 + 1), "axis steps");
  if (steps < 1 || steps != std::floor(steps)) throw InvalidArgument("axis steps must be a positive integer");
  axis.steps = static_cast<int>(steps);
  return axis;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

void write_sweep_csv(std::ostream& out, const SweepGrid& grid) {
  out << "T_over_r,omega,L,N,boundary";
  for (Quantity q : kAllQuantities) out << ',' << column_name(q);
  out << ",spacelike_neighbors,status\n";
  for (const auto& c : grid.cells) {
    write_coordinates(out, c);
    for (Quantity q : kAllQuantities) {
      out << ',';
      if (c.report) {
        if (const auto v = value_of(*c.report, q)) out << format_number(*v);
      }
    }
    out << ',' << (c.spacelike_neighbors() ? "true" : "false") << ',' << csv_quote(status_of(c)) << '\n';
  }
}

SweepGrid read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("sweep CSV is empty");
  const auto header = split_csv_line(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  const auto need = [&](const std::string& name) {
    const auto it = col.find(name);
    if (it == col.end()) throw InvalidArgument("sweep CSV lacks column '" + name + "'");
    return it->second;
  };
  const auto t_col = need("T_over_r");
  const auto w_col = need("omega");
  const auto l_col = need("L");
  const auto n_col = need("N");
  const auto b_col = need("boundary");
  const auto s_col = need("status");
  std::map<Quantity, std::size_t> q_col;
  for (Quantity q : kAllQuantities) q_col[q] = need(column_name(q));

  SweepGrid grid;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw InvalidArgument("sweep CSV line " + std::to_string(lineno) + " has wrong field count");
    SweepCell c;
    c.time_over_r = parse_number(f[t_col], "T_over_r");
    c.omega = parse_number(f[w_col], "omega");
    c.length = parse_number(f[l_col], "L");
    c.modes = static_cast<int>(parse_number(f[n_col], "N"));
    c.boundary = parse_boundary(f[b_col]);
    if (f[s_col] == "ok") {
      EntanglementReport r;
      const auto get = [&](Quantity q) -> std::optional<double> {
        const auto& s = f[q_col[q]];
        if (trim(s).empty()) return std::nullopt;
        return parse_number(s, column_name(q));
      };
      if (auto v = get(Quantity::E12)) r.pairwise[{0, 1}] = *v;
      if (auto v = get(Quantity::E13)) r.pairwise[{0, 2}] = *v;
      if (auto v = get(Quantity::E23)) r.pairwise[{1, 2}] = *v;
      if (auto v = get(Quantity::E1vs23)) r.one_vs_rest[0] = *v;
      if (auto v = get(Quantity::E2vs13)) r.one_vs_rest[1] = *v;
      if (auto v = get(Quantity::E3vs12)) r.one_vs_rest[2] = *v;
      r.tripartite = get(Quantity::Tripartite);
      c.report = std::move(r);
    } else {
      const std::string& s = f[s_col];
      c.error = s.rfind("failed: ", 0) == 0 ? s.substr(8) : s;
    }
    grid.cells.push_back(std::move(c));
  }
  if (!grid.cells.empty()) {
    grid.base.cavity.boundary = grid.cells.front().boundary;
    grid.base.cavity.length = grid.cells.front().length;
    grid.base.cavity.cutoff = grid.cells.front().modes;
  }
  return grid;
}

void write_region_csv(std::ostream& out, const SweepGrid& grid, const RegionMask& regions) {
  out << "T_over_r,omega,L,N,boundary";
  for (const auto& [q, m] : regions.mask) out << ',' << column_name(q);
  out << ",spacelike_neighbors,status\n";
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    const auto& c = grid.cells[i];
    write_coordinates(out, c);
    for (const auto& [q, m] : regions.mask) out << ',' << (m[i] ? 1 : 0);
    out << ',' << (c.spacelike_neighbors() ? "true" : "false") << ',' << csv_quote(status_of(c)) << '\n';
  }
}

void write_emergence_csv(std::ostream& out, const RegionMask& regions) {
  out << "omega,L,N";
  for (const auto& [q, m] : regions.mask) out << ',' << column_name(q);
  out << '\n';
  for (const auto& row : regions.emergence) {
    out << format_number(row.omega) << ',' << format_number(row.length) << ',' << row.modes;
    for (const auto& [q, m] : regions.mask) {
      out << ',';
      const auto it = row.first_time_over_r.find(q);
      if (it != row.first_time_over_r.end() && it->second) out << format_number(*it->second);
    }
    out << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const SweepGrid& periodic, const BoundaryComparison& comparison) {
  out << "T_over_r,omega,periodic_E_12,dirichlet_E_12,spacelike_neighbors\n";
  for (std::size_t i = 0; i < periodic.cells.size(); ++i) {
    const auto& c = periodic.cells[i];
    out << format_number(c.time_over_r) << ',' << format_number(c.omega) << ',' << (comparison.periodic_mask[i] ? 1 : 0)
        << ',' << (comparison.dirichlet_mask[i] ? 1 : 0) << ',' << (c.spacelike_neighbors() ? "true" : "false") << '\n';
  }
}

nlohmann::json to_json(const EntanglementReport& report) {
  nlohmann::json j;
  j["pairwise"] = nlohmann::json::object();
  for (const auto& [ij, v] : report.pairwise) {
    j["pairwise"]["E_" + std::to_string(ij.first + 1) + std::to_string(ij.second + 1)] = v;
  }
  j["one_vs_rest"] = nlohmann::json::object();
  for (const auto& [i, v] : report.one_vs_rest) {
    std::string rest;
    for (int k = 0; k < 3; ++k) {
      if (k != i) rest += std::to_string(k + 1);
    }
    const std::string key = "E_" + std::to_string(i + 1) + "_vs_" + rest;
    j["one_vs_rest"][key] = {{"value", v}, {"method", to_string(report.one_vs_rest_method.at(i))}};
  }
  j["tripartite"] = report.tripartite ? nlohmann::json(*report.tripartite) : nlohmann::json(nullptr);
  if (report.localization_discrepancy) j["localization_discrepancy"] = *report.localization_discrepancy;
  return j;
}

nlohmann::json to_json(const ScenarioSpec& s) {
  return {{"boundary", to_string(s.cavity.boundary)},
          {"length", s.cavity.length},
          {"modes", s.cavity.cutoff},
          {"positions", s.detectors.positions},
          {"omega", s.detectors.omega},
          {"coupling", s.detectors.coupling},
          {"time", s.time()},
          {"time_over_r", s.time_over_r()},
          {"dirichlet_tripartite", s.dirichlet_tripartite}};
}

nlohmann::json to_json(const SweepGrid& grid) {
  nlohmann::json axes = nlohmann::json::array();
  for (const auto& a : grid.axes) {
    axes.push_back({{"name", to_string(a.name)}, {"min", a.min}, {"max", a.max}, {"steps", a.steps}, {"scale", "linear"}});
  }
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : grid.cells) {
    nlohmann::json jc = {{"T_over_r", c.time_over_r},         {"omega", c.omega},
                         {"L", c.length},                     {"N", c.modes},
                         {"boundary", to_string(c.boundary)}, {"spacelike_neighbors", c.spacelike_neighbors()},
                         {"status", status_of(c)}};
    if (c.report) jc["report"] = to_json(*c.report);
    cells.push_back(std::move(jc));
  }
  return {{"version", grid.version}, {"threshold", grid.threshold}, {"base", to_json(grid.base)},
          {"axes", axes},          {"failed_cells", grid.failed_cells()}, {"cells", cells}};
}

nlohmann::json to_json(const RegionMask& regions) {
  nlohmann::json emergence = nlohmann::json::object();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [q, m] : regions.mask) {
    const auto e = regions.min_emergence(q);
    emergence[column_name(q)] = e ? nlohmann::json(*e) : nlohmann::json(nullptr);
  }
  for (const auto& row : regions.emergence) {
    nlohmann::json jr = {{"omega", row.omega}, {"L", row.length}, {"N", row.modes}};
    for (const auto& [q, first] : row.first_time_over_r) jr[column_name(q)] = first ? nlohmann::json(*first) : nlohmann::json(nullptr);
    rows.push_back(std::move(jr));
  }
  return {{"threshold", regions.threshold}, {"min_emergence_T_over_r", emergence}, {"emergence_T_over_r_per_omega", rows}};
}

nlohmann::json to_json(const BoundaryComparison& c) {
  const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  return {{"threshold", c.threshold},
          {"periodic_only_cells", c.periodic_only},
          {"dirichlet_only_cells", c.dirichlet_only},
          {"spacelike_periodic_only_cells", c.spacelike_periodic_only},
          {"periodic_emergence_T_over_r", opt(c.periodic_emergence)},
          {"dirichlet_emergence_T_over_r", opt(c.dirichlet_emergence)},
          {"periodic_earlier", c.periodic_earlier()}};
}

void apply_config(const nlohmann::json& config, ScenarioSpec& s) {
  if (!config.is_object()) throw InvalidArgument("scenario config must be a JSON object");
  const auto text_or_number = [](const nlohmann::json& v, const char* key) -> std::string {
    if (v.is_number()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    throw InvalidArgument(std::string("config key '") + key + "' must be a number or string");
  };
  try {
    // Length first so that L-relative positions resolve against the configured cavity.
    // Without explicit positions, the existing alignment is rescaled to the new length.
    if (config.contains("length")) {
      const double length = parse_number(text_or_number(config["length"], "length"), "length");
      if (!config.contains("positions") && s.cavity.length > 0.0) {
        for (double& x : s.detectors.positions) x *= length / s.cavity.length;
      }
      s.cavity.length = length;
    }
    for (const auto& [key, value] : config.items()) {
      if (key == "length") continue;
      if (key == "boundary") {
        s.cavity.boundary = parse_boundary(value.get<std::string>());
      } else if (key == "modes") {
        s.cavity.cutoff = value.get<int>();
      } else if (key == "positions") {
        if (value.is_string()) {
          s.detectors.positions = parse_positions(value.get<std::string>(), s.cavity.length);
        } else {
          s.detectors.positions.clear();
          for (const auto& p : value) s.detectors.positions.push_back(parse_scaled(text_or_number(p, "positions"), "L", s.cavity.length));
        }
      } else if (key == "omega") {
        s.detectors.omega = parse_omega(text_or_number(value, "omega"));
      } else if (key == "coupling") {
        s.detectors.coupling = value.get<double>();
      } else if (key == "time") {
        const auto [t, rel] = value.is_number() ? std::pair{value.get<double>(), false} : parse_time(value.get<std::string>());
        s.duration = t;
        s.duration_in_r = rel;
      } else if (key == "dirichlet_tripartite") {
        s.dirichlet_tripartite = value.get<bool>();
      } else {
        throw InvalidArgument("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed scenario config: ") + e.what());
  }
}

}  // namespace harvest
