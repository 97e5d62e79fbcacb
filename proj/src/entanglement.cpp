#include "harvest/entanglement.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

constexpr double kDiscriminantTol = 1e-9;

double floored(double e) { return e < kNegativityFloor ? 0.0 : e; }

}  // namespace

double two_mode_pt_min_eigenvalue(const GaussianState& pair) {
  if (pair.modes() != 2) throw InvalidArgument("two-mode negativity needs exactly 2 modes, got " + std::to_string(pair.modes()));
  const double det_a = pair.block(0, 0).determinant();
  const double det_b = pair.block(1, 1).determinant();
  const double det_c = pair.block(0, 1).determinant();
  const double det_all = pair.cov().determinant();

  const double delta = det_a + det_b - 2.0 * det_c;
  double disc = delta * delta - 4.0 * det_all;
  if (disc < -kDiscriminantTol) {
    throw NumericalError("negative discriminant " + std::to_string(disc) + " in two-mode negativity");
  }
  disc = std::max(disc, 0.0);
  const double nu_sq = 0.5 * (delta - std::sqrt(disc));
  if (!(nu_sq > 0.0)) throw NumericalError("non-positive partially transposed eigenvalue in two-mode negativity");
  return std::sqrt(nu_sq);
}

double two_mode_log_negativity(const GaussianState& pair) {
  return floored(std::max(0.0, -std::log2(two_mode_pt_min_eigenvalue(pair))));
}

double one_vs_rest_log_negativity(const GaussianState& state, const ModeId& solo) {
  if (state.modes() < 2) throw InvalidArgument("bipartite negativity needs at least 2 modes");
  const int p = 2 * state.position(solo) + 1;
  Matrix transposed = state.cov();
  transposed.row(p) *= -1.0;
  transposed.col(p) *= -1.0;

  double e = 0.0;
  for (double nu : symplectic_eigenvalues(transposed)) {
    if (nu < 1.0) e -= std::log2(nu);
  }
  return floored(e);
}

double exchange_asymmetry(const GaussianState& state, const ModeId& a, const ModeId& b) {
  const int pa = state.position(a);
  const int pb = state.position(b);
  Eigen::VectorXi perm(state.cov().rows());
  for (int m = 0; m < state.modes(); ++m) {
    const int src = m == pa ? pb : (m == pb ? pa : m);
    perm(2 * m) = 2 * src;
    perm(2 * m + 1) = 2 * src + 1;
  }
  Matrix swapped(state.cov().rows(), state.cov().cols());
  for (Eigen::Index i = 0; i < swapped.rows(); ++i) {
    for (Eigen::Index j = 0; j < swapped.cols(); ++j) swapped(i, j) = state.cov()(perm(i), perm(j));
  }
  return (swapped - state.cov()).cwiseAbs().maxCoeff();
}

GaussianState localize_symmetric(const GaussianState& state, std::pair<ModeId, ModeId> pair) {
  const double asym = exchange_asymmetry(state, pair.first, pair.second);
  if (asym > kSymmetryTol) {
    throw InvalidArgument("state is not symmetric under exchange of " + to_string(pair.first) + " and " +
                          to_string(pair.second) + " (max block difference " + std::to_string(asym) +
                          "); use one_vs_rest_log_negativity instead");
  }
  const int pa = state.position(pair.first);
  const int pb = state.position(pair.second);
  const auto dim = state.cov().rows();
  const double h = 1.0 / std::numbers::sqrt2;

  Matrix s = Matrix::Identity(dim, dim);
  s.block<2, 2>(2 * pa, 2 * pa) = h * Eigen::Matrix2d::Identity();
  s.block<2, 2>(2 * pa, 2 * pb) = -h * Eigen::Matrix2d::Identity();
  s.block<2, 2>(2 * pb, 2 * pa) = h * Eigen::Matrix2d::Identity();
  s.block<2, 2>(2 * pb, 2 * pb) = h * Eigen::Matrix2d::Identity();

  Matrix out = s * state.cov() * s.transpose();
  out = 0.5 * (out + out.transpose()).eval();

  for (int m = 0; m < state.modes(); ++m) {
    if (m == pa) continue;
    const double residual = out.block<2, 2>(2 * pa, 2 * m).cwiseAbs().maxCoeff();
    if (residual > kSymmetryTol) {
      throw NumericalError("localized mode retains correlations of size " + std::to_string(residual));
    }
  }
  return {std::move(out), state.labels()};
}

double tripartite_estimator(double e1, double e2, double e3) {
  if (e1 < 0.0 || e2 < 0.0 || e3 < 0.0) throw InvalidArgument("tripartite estimator needs non-negative inputs");
  if (e1 == 0.0 || e2 == 0.0 || e3 == 0.0) return 0.0;
  return std::cbrt(e1 * e2 * e3);
}

const char* to_string(Method m) {
  switch (m) {
    case Method::ClosedForm:
      return "closed-form";
    case Method::Localized:
      return "localized";
    case Method::PartialTranspose:
      return "partial-transpose";
  }
  return "?";
}

std::optional<double> EntanglementReport::pair(int i, int j) const {
  const auto it = pairwise.find({std::min(i, j), std::max(i, j)});
  return it == pairwise.end() ? std::nullopt : std::optional<double>(it->second);
}

std::optional<double> EntanglementReport::solo(int i) const {
  const auto it = one_vs_rest.find(i);
  return it == one_vs_rest.end() ? std::nullopt : std::optional<double>(it->second);
}

EntanglementReport analyze_detectors(const GaussianState& detectors, const AnalysisOptions& options) {
  const int d = detectors.modes();
  if (d != 2 && d != 3) throw InvalidArgument("detector analysis supports 2 or 3 detectors, got " + std::to_string(d));
  const auto& labels = detectors.labels();

  EntanglementReport report;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const std::array keep{labels[i], labels[j]};
      report.pairwise[{i, j}] = two_mode_log_negativity(partial_trace(detectors, keep));
    }
  }
  if (d == 2) return report;

  for (int solo = 0; solo < 3; ++solo) {
    const int a = (solo + 1) % 3 < (solo + 2) % 3 ? (solo + 1) % 3 : (solo + 2) % 3;
    const int b = 3 - solo - a;
    const double general = one_vs_rest_log_negativity(detectors, labels[solo]);

    if (options.symmetric_hint && exchange_asymmetry(detectors, labels[a], labels[b]) <= kSymmetryTol) {
      const GaussianState local = localize_symmetric(detectors, {labels[a], labels[b]});
      const std::array keep{labels[b], labels[solo]};
      const double value = two_mode_log_negativity(partial_trace(local, keep));
      report.one_vs_rest[solo] = value;
      report.one_vs_rest_method[solo] = Method::Localized;
      report.localization_discrepancy = std::max(report.localization_discrepancy.value_or(0.0), std::abs(value - general));
    } else {
      report.one_vs_rest[solo] = general;
      report.one_vs_rest_method[solo] = Method::PartialTranspose;
    }
  }
  if (options.tripartite) {
    report.tripartite = tripartite_estimator(report.one_vs_rest[0], report.one_vs_rest[1], report.one_vs_rest[2]);
  }
  return report;
}

}  // namespace harvest
