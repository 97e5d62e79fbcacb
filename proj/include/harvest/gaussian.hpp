#pragma once

// Zero-mean Gaussian states in the (q, p)-interleaved quadrature ordering.
// Convention: sigma_ij = <x_i x_j + x_j x_i>, so the vacuum is the identity.

#include <compare>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace harvest {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Identifies one bosonic mode: a detector (0-based index) or a field mode
/// (signed mode number n as it appears in the field expansion).
struct ModeId {
  enum class Kind { Detector, Field };

  Kind kind = Kind::Detector;
  int index = 0;

  static constexpr ModeId detector(int i) { return {Kind::Detector, i}; }
  static constexpr ModeId field(int n) { return {Kind::Field, n}; }

  friend constexpr auto operator<=>(const ModeId&, const ModeId&) = default;
};

std::string to_string(const ModeId& id);

inline constexpr double kDefaultPhysicalityTol = 1e-9;

class GaussianState {
 public:
  /// Validates shape and symmetry; throws InvalidArgument on violation.
  /// Physicality is not enforced here (see is_physical) so that deliberately
  /// unphysical inputs can be diagnosed.
  GaussianState(Matrix cov, std::vector<ModeId> labels);

  /// Labels default to detectors 0..M-1.
  explicit GaussianState(Matrix cov);

  static GaussianState vacuum(std::vector<ModeId> labels);

  const Matrix& cov() const noexcept { return cov_; }
  const std::vector<ModeId>& labels() const noexcept { return labels_; }
  int modes() const noexcept { return static_cast<int>(labels_.size()); }

  /// Position of `id` in the ordering; throws InvalidArgument naming the id if absent.
  int position(const ModeId& id) const;

  /// 2x2 block between modes at positions a and b.
  Eigen::Matrix2d block(int a, int b) const { return cov_.block<2, 2>(2 * a, 2 * b); }

 private:
  Matrix cov_;
  std::vector<ModeId> labels_;
};

/// A real 2M x 2M matrix S with S Omega S^T = Omega.
class SymplecticTransform {
 public:
  /// Checks the symplectic condition to 1e-9 * dim; throws NumericalError otherwise.
  explicit SymplecticTransform(Matrix mat);

  const Matrix& mat() const noexcept { return mat_; }
  int modes() const noexcept { return static_cast<int>(mat_.rows() / 2); }

  GaussianState apply(const GaussianState& state) const;

 private:
  Matrix mat_;
};

/// Block-diagonal symplectic form, one [[0,1],[-1,0]] block per mode.
Matrix symplectic_form(int modes);

/// max |S Omega S^T - Omega|.
double symplectic_residual(const Matrix& s);

/// Ascending symplectic eigenvalues, one per mode, from the spectrum of i*Omega*cov.
std::vector<double> symplectic_eigenvalues(const Matrix& cov);
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

bool is_physical(const GaussianState& state, double tol = kDefaultPhysicalityTol);

/// Submatrix of the kept modes' 2x2 blocks, in the order given by `keep`.
GaussianState partial_trace(const GaussianState& state, std::span<const ModeId> keep);

/// max_k |nu_k - 1|; zero for pure states.
double global_purity_defect(const GaussianState& state);

/// Two-mode squeezed vacuum with squeezing parameter r.
GaussianState two_mode_squeezed(double r);

}  // namespace harvest
