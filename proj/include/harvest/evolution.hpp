#pragma once

// Exact Gaussian evolution under a time-independent quadratic Hamiltonian:
// S(t) = exp(A t) with generator A = Omega * F^sym, sigma(t) = S(t) S(t)^T.

#include <complex>

#include "harvest/cavity.hpp"
#include "harvest/gaussian.hpp"

namespace harvest {

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// exp(m) by scaling and squaring with a degree-13 Pade approximant.
Matrix expm_pade(const Matrix& m);

class EvolutionEngine {
 public:
  /// How propagators are formed.
  enum class Method {
    /// F^sym positive definite: A = F^{-1/2} (F^{1/2} Omega F^{1/2}) F^{1/2}, the middle
    /// factor being real antisymmetric and so unitarily diagonalizable.
    HermitianEigen,
    /// General complex eigendecomposition of A with acceptable conditioning.
    GeneralEigen,
    /// Scaling and squaring per call.
    Pade,
  };

  /// Threshold on cond(V) above which the eigendecomposition route is abandoned.
  static constexpr double kMaxConditionNumber = 1e8;

  EvolutionEngine(const QuadraticForm& form, std::vector<ModeId> labels);

  /// Builds F^sym from the specs.
  EvolutionEngine(const CavitySpec& cavity, const DetectorArraySpec& detectors);

  const Matrix& generator() const noexcept { return generator_; }
  Method method() const noexcept { return method_; }
  int dim() const noexcept { return static_cast<int>(generator_.rows()); }
  int detectors() const noexcept { return detectors_; }
  const std::vector<ModeId>& labels() const noexcept { return labels_; }

  /// Eigen routes only: V, mu and V^{-1} with A = V diag(mu) V^{-1}.
  const ComplexMatrix& eigenvectors() const noexcept { return vectors_; }
  const ComplexVector& eigenvalues() const noexcept { return values_; }
  const ComplexMatrix& inverse_eigenvectors() const noexcept { return inverse_; }

  /// exp(A t) as a raw matrix; t may be negative (used for inverse checks).
  Matrix exponential(double t) const;

  /// S(t) for t >= 0, validated as symplectic.
  SymplecticTransform propagator(double t) const;

  /// sigma(t) = S(t) S(t)^T over every mode of the system.
  GaussianState evolve_vacuum(double t) const;

  /// Detector block of sigma(t) computed from the first 2D rows of S(t) only.
  GaussianState evolve_detectors(double t) const;

 private:
  Matrix rows_of_exponential(double t, Eigen::Index rows) const;

  Matrix generator_;
  std::vector<ModeId> labels_;
  int detectors_ = 0;
  Method method_ = Method::Pade;
  ComplexMatrix vectors_;
  ComplexVector values_;
  ComplexMatrix inverse_;
};

/// Upper-left 2D x 2D block: the reduced state of the first D modes.
GaussianState detector_state(const GaussianState& state, int detectors);

}  // namespace harvest
