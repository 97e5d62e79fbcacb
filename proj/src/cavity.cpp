#include "harvest/cavity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "harvest/errors.hpp"

namespace harvest {

std::string_view to_string(Boundary b) {
  return b == Boundary::Periodic ? "periodic" : "dirichlet";
}

Boundary parse_boundary(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "periodic") return Boundary::Periodic;
  if (lower == "dirichlet") return Boundary::Dirichlet;
  throw InvalidArgument("unknown boundary condition '" + std::string(text) + "' (expected periodic or dirichlet)");
}

void CavitySpec::validate() const {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("cavity length must be positive and finite");
  if (boundary == Boundary::Periodic) {
    if (cutoff % 2 != 0) throw InvalidArgument("periodic cutoff must be even");
    if (cutoff < 2) throw InvalidArgument("periodic cutoff must be at least 2");
  } else if (cutoff < 1) {
    throw InvalidArgument("Dirichlet cutoff must be at least 1");
  }
}

std::vector<double> default_positions(double length) {
  return {length / 6.0, length / 2.0, 5.0 * length / 6.0};
}

std::vector<std::string> validate(const CavitySpec& cavity, const DetectorArraySpec& detectors) {
  cavity.validate();
  if (detectors.positions.empty()) throw InvalidArgument("at least one detector is required");
  if (!(detectors.omega > 0.0) || !std::isfinite(detectors.omega)) {
    throw InvalidArgument("detector frequency must be positive and finite");
  }
  if (!(detectors.coupling >= 0.0) || !std::isfinite(detectors.coupling)) {
    throw InvalidArgument("coupling must be non-negative and finite");
  }
  std::vector<std::string> warnings;
  for (std::size_t j = 0; j < detectors.positions.size(); ++j) {
    const double x = detectors.positions[j];
    if (!(x > 0.0 && x < cavity.length)) {
      throw InvalidArgument("detector " + std::to_string(j + 1) + " position " + std::to_string(x) +
                            " is not strictly inside (0, L)");
    }
    for (std::size_t i = 0; i < j; ++i) {
      if (detectors.positions[i] == x) {
        warnings.push_back("detectors " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                           " share position " + std::to_string(x));
      }
    }
  }
  return warnings;
}

std::vector<int> mode_numbers(const CavitySpec& cavity) {
  cavity.validate();
  std::vector<int> n;
  n.reserve(cavity.cutoff);
  if (cavity.boundary == Boundary::Periodic) {
    const int half = cavity.cutoff / 2;
    for (int m = -half; m <= half; ++m) {
      if (m != 0) n.push_back(m);
    }
  } else {
    for (int m = 1; m <= cavity.cutoff; ++m) n.push_back(m);
  }
  return n;
}

std::vector<double> mode_wavenumbers(const CavitySpec& cavity) {
  const double base = (cavity.boundary == Boundary::Periodic ? 2.0 : 1.0) * std::numbers::pi / cavity.length;
  std::vector<double> k;
  for (int n : mode_numbers(cavity)) k.push_back(base * n);
  return k;
}

std::vector<ModeId> system_labels(const CavitySpec& cavity, int detectors) {
  std::vector<ModeId> labels;
  for (int j = 0; j < detectors; ++j) labels.push_back(ModeId::detector(j));
  for (int n : mode_numbers(cavity)) labels.push_back(ModeId::field(n));
  return labels;
}

QuadraticForm build_f_free(const CavitySpec& cavity, const DetectorArraySpec& detectors) {
  validate(cavity, detectors);
  const int d = detectors.count();
  const auto k = mode_wavenumbers(cavity);
  const int n = static_cast<int>(k.size());

  Vector diag(2 * d + 2 * n);
  diag.head(2 * d).setConstant(detectors.omega);
  for (int m = 0; m < n; ++m) diag.segment<2>(2 * d + 2 * m).setConstant(std::abs(k[m]));
  return {diag.asDiagonal().toDenseMatrix(), d, n};
}

Matrix build_coupling_matrix(const CavitySpec& cavity, const DetectorArraySpec& detectors) {
  validate(cavity, detectors);
  const int d = detectors.count();
  const auto numbers = mode_numbers(cavity);
  const auto k = mode_wavenumbers(cavity);
  const int n = static_cast<int>(k.size());

  Matrix x = Matrix::Zero(2 * d, 2 * n);
  for (int j = 0; j < d; ++j) {
    const double pos = detectors.positions[j];
    for (int m = 0; m < n; ++m) {
      const double kx = k[m] * pos;
      if (cavity.boundary == Boundary::Periodic) {
        // phi(x) carries (a e^{ikx} + h.c.)/sqrt(4 pi |n|) = sqrt(2) (q cos kx - p sin kx)/sqrt(4 pi |n|)
        const double norm = std::sqrt(4.0 * std::numbers::pi * std::abs(numbers[m]));
        x(2 * j, 2 * m) = std::cos(kx) / norm;
        x(2 * j, 2 * m + 1) = -std::sin(kx) / norm;
      } else {
        const double norm = std::sqrt(std::numbers::pi * numbers[m]);
        x(2 * j, 2 * m) = std::sin(kx) / norm;
      }
    }
  }
  return x;
}

QuadraticForm build_f_int(const CavitySpec& cavity, const DetectorArraySpec& detectors) {
  const Matrix x = build_coupling_matrix(cavity, detectors);
  const auto rows = x.rows();
  const auto cols = x.cols();
  Matrix f = Matrix::Zero(rows + cols, rows + cols);
  f.topRightCorner(rows, cols) = 2.0 * detectors.coupling * x;
  f.bottomLeftCorner(cols, rows) = 2.0 * detectors.coupling * x.transpose();
  return {std::move(f), detectors.count(), static_cast<int>(cols / 2)};
}

QuadraticForm build_f_total(const CavitySpec& cavity, const DetectorArraySpec& detectors) {
  QuadraticForm total = build_f_free(cavity, detectors);
  total.f_sym += build_f_int(cavity, detectors).f_sym;
  return total;
}

}  // namespace harvest
