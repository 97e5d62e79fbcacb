#include "harvest/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "harvest/errors.hpp"

namespace harvest {

namespace {

constexpr double kSymmetryRelTol = 1e-12;
constexpr double kImagResidue = 1e-10;

bool is_symmetric(const Matrix& m) {
  const double scale = std::max(m.cwiseAbs().maxCoeff(), 1.0e-300);
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= kSymmetryRelTol * scale;
}

std::vector<ModeId> detector_labels(int modes) {
  std::vector<ModeId> labels;
  labels.reserve(modes);
  for (int i = 0; i < modes; ++i) labels.push_back(ModeId::detector(i));
  return labels;
}

}  // namespace

std::string to_string(const ModeId& id) {
  return (id.kind == ModeId::Kind::Detector ? "detector " : "field mode ") + std::to_string(id.index);
}

GaussianState::GaussianState(Matrix cov, std::vector<ModeId> labels)
    : cov_(std::move(cov)), labels_(std::move(labels)) {
  if (labels_.empty()) throw InvalidArgument("Gaussian state needs at least one mode");
  const auto dim = static_cast<Eigen::Index>(2 * labels_.size());
  if (cov_.rows() != dim || cov_.cols() != dim) {
    throw InvalidArgument("covariance matrix is " + std::to_string(cov_.rows()) + "x" +
                          std::to_string(cov_.cols()) + " but " + std::to_string(labels_.size()) +
                          " modes were labelled");
  }
  if (!cov_.allFinite()) throw InvalidArgument("covariance matrix has non-finite entries");
  if (!is_symmetric(cov_)) throw InvalidArgument("covariance matrix is not symmetric");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = i + 1; j < labels_.size(); ++j) {
      if (labels_[i] == labels_[j]) throw InvalidArgument("duplicate mode label: " + to_string(labels_[i]));
    }
  }
}

GaussianState::GaussianState(Matrix cov)
    : GaussianState(cov, detector_labels(static_cast<int>(cov.rows() / 2))) {
  if (cov.rows() % 2 != 0) throw InvalidArgument("covariance matrix must have even dimension");
}

GaussianState GaussianState::vacuum(std::vector<ModeId> labels) {
  const auto dim = static_cast<Eigen::Index>(2 * labels.size());
  return {Matrix::Identity(dim, dim), std::move(labels)};
}

int GaussianState::position(const ModeId& id) const {
  const auto it = std::find(labels_.begin(), labels_.end(), id);
  if (it == labels_.end()) throw InvalidArgument("unknown mode: " + to_string(id));
  return static_cast<int>(it - labels_.begin());
}

SymplecticTransform::SymplecticTransform(Matrix mat) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols() || mat_.rows() % 2 != 0 || mat_.rows() == 0) {
    throw InvalidArgument("symplectic transform must be a non-empty even-dimensional square matrix");
  }
  const double residual = symplectic_residual(mat_);
  if (!(residual <= 1e-9 * static_cast<double>(mat_.rows()))) {
    throw NumericalError("matrix is not symplectic (residual " + std::to_string(residual) + ")");
  }
}

GaussianState SymplecticTransform::apply(const GaussianState& state) const {
  if (state.cov().rows() != mat_.rows()) throw InvalidArgument("transform and state dimensions differ");
  Matrix out = mat_ * state.cov() * mat_.transpose();
  out = 0.5 * (out + out.transpose()).eval();
  return {std::move(out), state.labels()};
}

Matrix symplectic_form(int modes) {
  if (modes < 1) throw InvalidArgument("symplectic form needs at least one mode");
  Matrix omega = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

double symplectic_residual(const Matrix& s) {
  const Matrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

std::vector<double> symplectic_eigenvalues(const Matrix& cov) {
  if (cov.rows() != cov.cols() || cov.rows() % 2 != 0 || cov.rows() == 0) {
    throw InvalidArgument("symplectic spectrum needs a non-empty even-dimensional square matrix");
  }
  if (!is_symmetric(cov)) throw InvalidArgument("symplectic spectrum of a non-symmetric matrix");
  const int modes = static_cast<int>(cov.rows() / 2);
  const Eigen::MatrixXcd m = std::complex<double>(0.0, 1.0) * (symplectic_form(modes) * cov).cast<std::complex<double>>();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigen-solver failed on i*Omega*sigma");

  // i*Omega*sigma has real eigenvalues +-nu_k; discard the imaginary residue.
  std::vector<double> values;
  values.reserve(cov.rows());
  const double scale = std::max(1.0, solver.eigenvalues().cwiseAbs().maxCoeff());
  for (const auto& mu : solver.eigenvalues()) {
    if (std::abs(mu.imag()) > kImagResidue * scale) {
      throw NumericalError("symplectic spectrum has imaginary part " + std::to_string(mu.imag()));
    }
    values.push_back(std::abs(mu.real()));
  }
  std::sort(values.begin(), values.end());
  std::vector<double> nu;
  nu.reserve(modes);
  for (int k = 0; k < modes; ++k) nu.push_back(0.5 * (values[2 * k] + values[2 * k + 1]));
  return nu;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  return symplectic_eigenvalues(state.cov());
}

bool is_physical(const GaussianState& state, double tol) {
  if (!is_symmetric(state.cov())) return false;
  try {
    const auto nu = symplectic_eigenvalues(state.cov());
    return nu.front() >= 1.0 - tol;
  } catch (const Error&) {
    return false;
  }
}

GaussianState partial_trace(const GaussianState& state, std::span<const ModeId> keep) {
  if (keep.empty()) throw InvalidArgument("partial trace must keep at least one mode");
  std::vector<int> pos;
  pos.reserve(keep.size());
  for (const auto& id : keep) pos.push_back(state.position(id));

  const auto k = static_cast<Eigen::Index>(keep.size());
  Matrix out(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) out.block<2, 2>(2 * a, 2 * b) = state.block(pos[a], pos[b]);
  }
  return {std::move(out), std::vector<ModeId>(keep.begin(), keep.end())};
}

double global_purity_defect(const GaussianState& state) {
  double defect = 0.0;
  for (double nu : symplectic_eigenvalues(state)) defect = std::max(defect, std::abs(nu - 1.0));
  return defect;
}

GaussianState two_mode_squeezed(double r) {
  const double c = std::cosh(2.0 * r);
  const double s = std::sinh(2.0 * r);
  Matrix cov = Matrix::Zero(4, 4);
  cov.diagonal().setConstant(c);
  cov(0, 2) = cov(2, 0) = s;
  cov(1, 3) = cov(3, 1) = -s;
  return GaussianState(std::move(cov));
}

}  // namespace harvest
