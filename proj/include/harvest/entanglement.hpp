#pragma once

// Logarithmic negativities of Gaussian detector states and the geometric-mean
// tripartite estimator.

#include <map>
#include <optional>
#include <utility>

#include "harvest/gaussian.hpp"

namespace harvest {

/// Negativities below this are reported as exactly zero.
inline constexpr double kNegativityFloor = 1e-12;
/// Maximum block difference tolerated by the exchange-symmetry precondition.
inline constexpr double kSymmetryTol = 1e-8;

/// E = max(0, -log2 nu_-) from the determinant invariants of a 4x4 covariance matrix.
double two_mode_log_negativity(const GaussianState& pair);

/// Smallest partially transposed symplectic eigenvalue of a 2-mode state, closed form.
double two_mode_pt_min_eigenvalue(const GaussianState& pair);

/// Sum of max(0, -log2 nu~_k) over the spectrum of the state with `solo`'s momentum flipped.
double one_vs_rest_log_negativity(const GaussianState& state, const ModeId& solo);

/// Largest entry of |P sigma P^T - sigma| where P swaps the two modes.
double exchange_asymmetry(const GaussianState& state, const ModeId& a, const ModeId& b);

/// Applies the 50:50 beam splitter mode a -> (a - b)/sqrt2, mode b -> (a + b)/sqrt2.
/// For an exchange-symmetric pair this decouples mode a from the rest, so all
/// correlations with the third mode sit on mode b. Throws InvalidArgument when the
/// pair is not symmetric within kSymmetryTol.
GaussianState localize_symmetric(const GaussianState& state, std::pair<ModeId, ModeId> pair);

/// Cube root of the product of the three bipartition negativities.
double tripartite_estimator(double e1, double e2, double e3);

enum class Method { ClosedForm, Localized, PartialTranspose };

const char* to_string(Method m);

struct EntanglementReport {
  /// Keyed by 0-based detector indices (i < j).
  std::map<std::pair<int, int>, double> pairwise;
  /// Keyed by the 0-based index of the solo detector.
  std::map<int, double> one_vs_rest;
  std::map<int, Method> one_vs_rest_method;
  std::optional<double> tripartite;
  /// Largest |localized - partial transpose| over localized bipartitions.
  std::optional<double> localization_discrepancy;

  std::optional<double> pair(int i, int j) const;
  std::optional<double> solo(int i) const;
};

struct AnalysisOptions {
  /// Try the beam-splitter route for bipartitions whose pair is exchange symmetric.
  bool symmetric_hint = false;
  /// Fill the tripartite estimator once all three bipartitions are known.
  bool tripartite = true;
};

/// Pairwise and (for three detectors) one-vs-rest negativities of a 2- or 3-mode state.
EntanglementReport analyze_detectors(const GaussianState& detectors, const AnalysisOptions& options = {});

}  // namespace harvest
