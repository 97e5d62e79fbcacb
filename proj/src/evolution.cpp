#include "harvest/evolution.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

constexpr double kTraceTol = 1e-10;
constexpr double kReconstructionTol = 1e-9;
constexpr double kImagResidueTol = 1e-9;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

Matrix expm_pade(const Matrix& m) {
  // Higham (2005) coefficients for the [13/13] approximant.
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;

  if (m.rows() != m.cols()) throw InvalidArgument("matrix exponential of a non-square matrix");
  if (!m.allFinite()) throw InvalidArgument("matrix exponential of a non-finite matrix");
  const auto n = m.rows();
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));

  const Matrix a = m / std::ldexp(1.0, squarings);
  const Matrix id = Matrix::Identity(n, n);
  const Matrix a2 = a * a;
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;

  const Matrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id;
  const Matrix u = a * u_inner;
  const Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  Matrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) r = (r * r).eval();
  return r;
}

EvolutionEngine::EvolutionEngine(const CavitySpec& cavity, const DetectorArraySpec& detectors)
    : EvolutionEngine(build_f_total(cavity, detectors), system_labels(cavity, detectors.count())) {}

EvolutionEngine::EvolutionEngine(const QuadraticForm& form, std::vector<ModeId> labels)
    : labels_(std::move(labels)), detectors_(form.detectors) {
  const Matrix& f = form.f_sym;
  if (f.rows() != f.cols() || f.rows() % 2 != 0 || f.rows() == 0) {
    throw InvalidArgument("phase-space Hamiltonian must be a non-empty even-dimensional square matrix");
  }
  if (static_cast<Eigen::Index>(2 * labels_.size()) != f.rows()) {
    throw InvalidArgument("mode labels do not match the Hamiltonian dimension");
  }
  if (!f.allFinite()) throw InvalidArgument("phase-space Hamiltonian has non-finite entries");

  const auto n = f.rows();
  const Matrix omega = symplectic_form(static_cast<int>(n / 2));
  generator_ = omega * f;
  const double scale = std::max(max_abs(generator_), 1e-300);
  if (std::abs(generator_.trace()) > kTraceTol * std::max(scale, 1.0)) {
    throw NumericalError("generator is not traceless; is F^sym symmetric?");
  }

  const auto reconstructs = [&](const ComplexMatrix& v, const ComplexVector& mu, const ComplexMatrix& vinv) {
    const ComplexMatrix back = v * mu.asDiagonal() * vinv;
    const double err = (back - generator_.cast<std::complex<double>>()).cwiseAbs().maxCoeff();
    return err <= kReconstructionTol * scale;
  };

  // Positive-definite route: F = Q diag(f) Q^T.
  Eigen::SelfAdjointEigenSolver<Matrix> fsolver(0.5 * (f + f.transpose()));
  if (fsolver.info() == Eigen::Success && fsolver.eigenvalues().minCoeff() > 1e-12 * fsolver.eigenvalues().maxCoeff()) {
    const Matrix& q = fsolver.eigenvectors();
    const Vector root = fsolver.eigenvalues().cwiseSqrt();
    const Matrix half = q * root.asDiagonal() * q.transpose();
    const Matrix inv_half = q * root.cwiseInverse().asDiagonal() * q.transpose();
    Matrix k = half * omega * half;
    k = 0.5 * (k - k.transpose()).eval();

    // K real antisymmetric => iK Hermitian; exp(K t) = U diag(exp(-i w t)) U^H.
    const ComplexMatrix herm = std::complex<double>(0.0, 1.0) * k.cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> hsolver(herm);
    if (hsolver.info() == Eigen::Success) {
      const ComplexMatrix& u = hsolver.eigenvectors();
      ComplexVector mu = std::complex<double>(0.0, -1.0) * hsolver.eigenvalues().cast<std::complex<double>>();
      ComplexMatrix v = inv_half.cast<std::complex<double>>() * u;
      ComplexMatrix vinv = u.adjoint() * half.cast<std::complex<double>>();
      if (reconstructs(v, mu, vinv)) {
        method_ = Method::HermitianEigen;
        vectors_ = std::move(v);
        values_ = std::move(mu);
        inverse_ = std::move(vinv);
        return;
      }
    }
  }

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(generator_.cast<std::complex<double>>());
  if (solver.info() == Eigen::Success) {
    const ComplexMatrix& v = solver.eigenvectors();
    Eigen::JacobiSVD<ComplexMatrix> svd(v);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    if (std::isfinite(cond) && cond <= kMaxConditionNumber) {
      ComplexMatrix vinv = v.partialPivLu().inverse();
      if (reconstructs(v, solver.eigenvalues(), vinv)) {
        method_ = Method::GeneralEigen;
        vectors_ = v;
        values_ = solver.eigenvalues();
        inverse_ = std::move(vinv);
        return;
      }
    }
  }
  method_ = Method::Pade;
}

Matrix EvolutionEngine::rows_of_exponential(double t, Eigen::Index rows) const {
  if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
  if (method_ == Method::Pade) return expm_pade(generator_ * t).topRows(rows);

  const ComplexVector phase = (values_ * t).array().exp().matrix();
  const ComplexMatrix s = (vectors_.topRows(rows) * phase.asDiagonal()) * inverse_;
  const Matrix re = s.real();
  const double imag = s.imag().cwiseAbs().maxCoeff();
  if (imag > kImagResidueTol * std::max(1.0, max_abs(re))) {
    throw NumericalError("propagator has imaginary residue " + std::to_string(imag) + " at t = " + std::to_string(t) +
                         "; eigendecomposition is ill-conditioned");
  }
  return re;
}

Matrix EvolutionEngine::exponential(double t) const { return rows_of_exponential(t, generator_.rows()); }

SymplecticTransform EvolutionEngine::propagator(double t) const {
  if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
  if (t < 0.0) throw InvalidArgument("evolution time must be non-negative");
  return SymplecticTransform(exponential(t));
}

GaussianState EvolutionEngine::evolve_vacuum(double t) const {
  const Matrix s = propagator(t).mat();
  Matrix cov = s * s.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return {std::move(cov), labels_};
}

GaussianState EvolutionEngine::evolve_detectors(double t) const {
  if (!std::isfinite(t)) throw InvalidArgument("evolution time must be finite");
  if (t < 0.0) throw InvalidArgument("evolution time must be non-negative");
  if (detectors_ < 1) throw InvalidArgument("system has no detectors");
  const Matrix rows = rows_of_exponential(t, 2 * detectors_);
  Matrix cov = rows * rows.transpose();
  cov = 0.5 * (cov + cov.transpose()).eval();
  return {std::move(cov), std::vector<ModeId>(labels_.begin(), labels_.begin() + detectors_)};
}

GaussianState detector_state(const GaussianState& state, int detectors) {
  if (detectors < 1 || detectors > state.modes()) {
    throw InvalidArgument("cannot keep " + std::to_string(detectors) + " detectors of a " +
                          std::to_string(state.modes()) + "-mode state");
  }
  const std::vector<ModeId> keep(state.labels().begin(), state.labels().begin() + detectors);
  return partial_trace(state, keep);
}

}  // namespace harvest
