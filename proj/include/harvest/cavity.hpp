#pragma once

// Field mode structure of a 1+1D massless scalar cavity and the phase-space
// Hamiltonian matrices of detectors coupled to it.

#include <string>
#include <string_view>
#include <vector>

#include "harvest/gaussian.hpp"

namespace harvest {

enum class Boundary { Periodic, Dirichlet };

std::string_view to_string(Boundary b);
/// Accepts "periodic" or "dirichlet" (case-insensitive).
Boundary parse_boundary(std::string_view text);

struct CavitySpec {
  double length = 10.0;
  Boundary boundary = Boundary::Periodic;
  int cutoff = 50;  // number of retained field modes

  /// Throws InvalidArgument if length <= 0 or the cutoff is unusable for the boundary.
  void validate() const;
};

struct DetectorArraySpec {
  std::vector<double> positions;
  double omega = 0.4 * 3.14159265358979323846;
  double coupling = 0.01;

  int count() const noexcept { return static_cast<int>(positions.size()); }
};

/// (L/6, L/2, 5L/6).
std::vector<double> default_positions(double length);

/// Throws InvalidArgument for invalid combinations; returns non-fatal warnings
/// such as coincident detector positions.
std::vector<std::string> validate(const CavitySpec& cavity, const DetectorArraySpec& detectors);

/// Signed mode numbers in quadrature order: -N/2..-1,1..N/2 (periodic) or 1..N (Dirichlet).
std::vector<int> mode_numbers(const CavitySpec& cavity);

/// k_n for every retained mode, in the order of mode_numbers.
std::vector<double> mode_wavenumbers(const CavitySpec& cavity);

/// Mode labels of the full system: detectors first, then field modes.
std::vector<ModeId> system_labels(const CavitySpec& cavity, int detectors);

/// Real symmetric matrix F^sym with H = x^T F x and F^sym = F + F^T.
struct QuadraticForm {
  Matrix f_sym;
  int detectors = 0;
  int field_modes = 0;

  int dim() const noexcept { return static_cast<int>(f_sym.rows()); }
};

QuadraticForm build_f_free(const CavitySpec& cavity, const DetectorArraySpec& detectors);

/// 2D x 2N matrix X: per detector, a q-row of mode-function values and a zero p-row.
Matrix build_coupling_matrix(const CavitySpec& cavity, const DetectorArraySpec& detectors);

/// 2*lambda * [[0, X], [X^T, 0]].
QuadraticForm build_f_int(const CavitySpec& cavity, const DetectorArraySpec& detectors);

QuadraticForm build_f_total(const CavitySpec& cavity, const DetectorArraySpec& detectors);

}  // namespace harvest
