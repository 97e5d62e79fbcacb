// Acceptance suite: one PASS/FAIL line per criterion; exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "harvest/entanglement.hpp"
#include "harvest/evolution.hpp"
#include "harvest/sweep.hpp"
#include "oracles.hpp"

using namespace harvest;

namespace {

constexpr double kPi = std::numbers::pi;

int failures = 0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed <= budget_seconds;
  const bool pass = out.pass && in_time;
  if (!pass) ++failures;
  const std::string label = id > 0 ? std::to_string(id) : "--";
  std::printf("[%s] %2s %-34s %s (%.2fs / %.0fs budget)\n", pass ? "PASS" : "FAIL", label.c_str(), name, out.detail.c_str(), elapsed,
              budget_seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ScenarioSpec reference_scenario(Boundary b, double t_over_r) {
  ScenarioSpec s = default_scenario();
  s.cavity = {10.0, b, 50};
  s.detectors = {default_positions(10.0), 0.4 * kPi, 0.01};
  s.duration = t_over_r;
  s.duration_in_r = true;
  return s;
}

ScenarioSpec random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScenarioSpec s;
  s.cavity.boundary = u(rng) < 0.5 ? Boundary::Periodic : Boundary::Dirichlet;
  s.cavity.length = 2.0 + 28.0 * u(rng);
  s.cavity.cutoff = 2 * (1 + static_cast<int>(u(rng) * 25));
  const int count = 1 + static_cast<int>(u(rng) * 3);
  s.detectors.positions.clear();
  for (int j = 0; j < count; ++j) s.detectors.positions.push_back(s.cavity.length * (0.02 + 0.96 * u(rng)));
  s.detectors.omega = (0.05 + 1.95 * u(rng)) * kPi;
  s.detectors.coupling = 0.05 * u(rng);
  s.duration = 0.05 + 1.95 * u(rng);
  return s;
}

}  // namespace

int main() {
  const int workers = std::max(1u, std::thread::hardware_concurrency());
  std::printf("acceptance suite, %d worker(s)\n", workers);

  criterion(1, "null coupling", 1.0, [] {
    double worst_state = 0.0;
    double worst_e = 0.0;
    for (Boundary b : {Boundary::Periodic, Boundary::Dirichlet}) {
      ScenarioSpec s = reference_scenario(b, 1.5);
      s.detectors.coupling = 0.0;
      s.dirichlet_tripartite = true;
      const EvolutionEngine engine(s.cavity, s.detectors);
      const Matrix cov = engine.evolve_detectors(s.time()).cov();
      worst_state = std::max(worst_state, (cov - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff());
      const auto r = run_point(s).report;
      for (Quantity q : kAllQuantities) worst_e = std::max(worst_e, std::abs(value_of(r, q).value_or(1.0)));
    }
    return Outcome{worst_state <= 1e-12 && worst_e == 0.0, fmt("max|sigma-I| = %.2e, max E = %.2e", worst_state, worst_e)};
  });

  criterion(2, "symplecticity and purity", 120.0, [] {
    std::mt19937_64 rng(2024);
    double worst_sympl = 0.0;
    double worst_purity = 0.0;
    bool ok = true;
    for (int i = 0; i < 120; ++i) {
      const ScenarioSpec s = random_scenario(rng);
      const EvolutionEngine engine(s.cavity, s.detectors);
      const Matrix sm = engine.propagator(s.time()).mat();
      const double rel = symplectic_residual(sm) / static_cast<double>(sm.rows());
      const double purity = global_purity_defect(engine.evolve_vacuum(s.time()));
      worst_sympl = std::max(worst_sympl, rel);
      worst_purity = std::max(worst_purity, purity);
      ok = ok && rel <= 1e-9 && purity <= 1e-8;
    }
    return Outcome{ok, fmt("120 scenarios, max residual/dim = %.2e, max purity defect = %.2e", worst_sympl, worst_purity)};
  });

  criterion(3, "evolution vs RK4 oracle", 60.0, [] {
    std::mt19937_64 rng(3);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      ScenarioSpec s = random_scenario(rng);
      s.detectors.positions = default_positions(s.cavity.length);
      const EvolutionEngine engine(s.cavity, s.detectors);
      const Matrix got = engine.evolve_detectors(s.time()).cov();
      const double omega_max = engine.generator().cwiseAbs().maxCoeff() + 1.0;
      const int steps = static_cast<int>(std::ceil(s.time() * omega_max / 0.004));
      const Matrix ref = oracle::rk4_detector_cov(s.cavity, s.detectors, s.time(), steps);
      worst = std::max(worst, (got - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
    }
    return Outcome{worst <= 1e-7, fmt("max relative deviation of sigma_123 = %.2e (tol 1e-7)", worst)};
  });

  // Setup shared by criteria 4 and 7-10; reported but not a criterion of its own.
  SweepGrid periodic;
  SweepGrid dirichlet;
  criterion(0, "default (T, Omega) grids computed", 1200.0, [&] {
    periodic = sweep(reference_scenario(Boundary::Periodic, 1.0), default_time_omega_axes(), {workers, true});
    dirichlet = sweep(reference_scenario(Boundary::Dirichlet, 1.0), default_time_omega_axes(), {workers, true});
    const auto failed = periodic.failed_cells() + dirichlet.failed_cells();
    return Outcome{failed == 0, fmt("2 x %.0f cells, %.0f failed", static_cast<double>(periodic.cells.size()), static_cast<double>(failed))};
  });

  criterion(4, "entanglement oracles", 5.0, [&] {
    const double r = 0.5;
    const double tmsv_err = std::abs(two_mode_log_negativity(two_mode_squeezed(r)) - 2.0 * r / std::numbers::ln2);
    double worst_loc = 0.0;
    std::size_t localized = 0;
    for (const auto* g : {&periodic, &dirichlet}) {
      for (const auto& c : g->cells) {
        if (c.report && c.report->localization_discrepancy) {
          worst_loc = std::max(worst_loc, *c.report->localization_discrepancy);
          ++localized;
        }
      }
    }
    const bool ok = tmsv_err <= 1e-9 && localized >= periodic.cells.size() && worst_loc <= 1e-8;
    return Outcome{ok, fmt("|E_tmsv - 2r/ln2| = %.2e; localized-vs-PT max %.2e over %.0f states", tmsv_err, worst_loc,
                           static_cast<double>(localized))};
  });

  criterion(5, "cutoff convergence", 60.0, [] {
    const auto study = convergence_study(reference_scenario(Boundary::Dirichlet, 1.0), {10, 20, 30, 40, 50, 100});
    const double e50 = *study.rows[4].result.report.pair(0, 1);
    const double e100 = *study.rows[5].result.report.pair(0, 1);
    const double rel = std::abs(e50 - e100) / std::abs(e100);
    return Outcome{e100 > 0.0 && rel <= 0.01, fmt("E_ms(50) = %.6e, E_ms(100) = %.6e, rel change %.3f%%", e50, e100, 100.0 * rel)};
  });

  criterion(6, "exchange symmetry", 5.0, [] {
    double worst_p = 0.0;
    double worst_d = 0.0;
    for (double t : {0.3, 1.0, 1.7}) {
      const ScenarioSpec sp = reference_scenario(Boundary::Periodic, t);
      const GaussianState p = EvolutionEngine(sp.cavity, sp.detectors).evolve_detectors(sp.time());
      for (auto [a, b] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
        worst_p = std::max(worst_p, exchange_asymmetry(p, ModeId::detector(a), ModeId::detector(b)));
      }
      const ScenarioSpec sd = reference_scenario(Boundary::Dirichlet, t);
      const GaussianState d = EvolutionEngine(sd.cavity, sd.detectors).evolve_detectors(sd.time());
      worst_d = std::max(worst_d, exchange_asymmetry(d, ModeId::detector(0), ModeId::detector(2)));
    }
    return Outcome{worst_p <= 1e-8 && worst_d <= 1e-8, fmt("periodic max block diff %.2e, Dirichlet side swap %.2e", worst_p, worst_d)};
  });

  criterion(7, "containment E_ss in E_sss", 1200.0, [&] {
    const RegionMask m = extract_regions(periodic, kDefaultThreshold);
    std::size_t violations = 0;
    for (Quantity q : {Quantity::E12, Quantity::E13, Quantity::E23}) violations += m.containment_violations(q, Quantity::Tripartite);
    std::size_t bi = 0;
    for (bool b : m.mask.at(Quantity::E12)) bi += b;
    std::size_t tri = 0;
    for (bool b : m.mask.at(Quantity::Tripartite)) tri += b;
    return Outcome{violations == 0, fmt("%.0f violating cells (E_ss cells %.0f, E_sss cells %.0f)", static_cast<double>(violations),
                                        static_cast<double>(bi), static_cast<double>(tri))};
  });

  criterion(8, "tripartite emergence (periodic)", 5.0, [&] {
    const auto e = extract_regions(periodic, kDefaultThreshold).min_emergence(Quantity::Tripartite);
    const bool ok = e && *e >= 0.15 && *e <= 0.30;
    return Outcome{ok, fmt("min T/r with E_sss > eps = %.4f (window [0.15, 0.30])", e.value_or(NAN))};
  });

  criterion(9, "emergence (Dirichlet)", 5.0, [&] {
    const RegionMask m = extract_regions(dirichlet, kDefaultThreshold);
    const auto ms = m.min_emergence(Quantity::E12);
    const auto mss = m.min_emergence(Quantity::E2vs13);
    const bool ok = ms && mss && *ms >= 0.50 && *ms <= 0.70 && *mss >= 0.45 && *mss <= 0.65 && *mss <= *ms;
    return Outcome{ok, fmt("E_ms at T/r = %.4f [0.50, 0.70], E_m|ss at T/r = %.4f [0.45, 0.65]", ms.value_or(NAN), mss.value_or(NAN))};
  });

  criterion(10, "periodic vs Dirichlet emergence", 5.0, [&] {
    bool ok = true;
    double worst_gap = INFINITY;
    for (double eps : {1e-12, 1e-11, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6}) {
      const BoundaryComparison c = compare_boundaries(periodic, dirichlet, eps);
      ok = ok && c.periodic_earlier() && c.periodic_emergence.has_value();
      if (c.periodic_emergence && c.dirichlet_emergence) worst_gap = std::min(worst_gap, *c.dirichlet_emergence - *c.periodic_emergence);
    }
    const BoundaryComparison c = compare_boundaries(periodic, dirichlet, kDefaultThreshold);
    return Outcome{ok, fmt("periodic %.4f < Dirichlet %.4f (T/r); smallest gap over eps sweep %.4f", c.periodic_emergence.value_or(NAN),
                           c.dirichlet_emergence.value_or(NAN), worst_gap)};
  });

  std::printf("%d criterion failure(s)\n", failures);
  return failures;
}
