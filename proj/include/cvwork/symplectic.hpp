#pragma once

#include <string>
#include <vector>

#include "cvwork/convention.hpp"
#include "cvwork/error.hpp"

namespace cvwork {

/// Symmetrized second moments of the quadratures, 2N x 2N.
///
/// Construction only checks the shape (square, even, finite). Symmetry,
/// positivity and the uncertainty bound are checked by validate(), or enforced
/// by require_physical() and the spectral functions, so unphysical matrices can
/// still be built and reported on.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(Matrix entries);

  static CovarianceMatrix vacuum(int n_modes);

  const Matrix& entries() const noexcept { return entries_; }
  int n_modes() const noexcept { return static_cast<int>(entries_.rows() / 2); }
  Real operator()(int i, int j) const { return entries_(i, j); }

  /// 2x2 block coupling mode i (rows) to mode j (columns).
  Matrix2 block(int i, int j) const;

  /// Marginal of a single mode.
  CovarianceMatrix reduced(int mode) const;

 private:
  Matrix entries_;
};

struct GaussianState {
  GaussianState(Vector mean, CovarianceMatrix cov);
  explicit GaussianState(CovarianceMatrix cov);

  Vector mean;
  CovarianceMatrix cov;

  int n_modes() const noexcept { return cov.n_modes(); }
};

/// Symplectic eigenvalues, ascending.
struct SymplecticSpectrum {
  std::vector<Real> eigenvalues;

  Real smallest() const { return eigenvalues.front(); }
  Real largest() const { return eigenvalues.back(); }
};

struct CheckResult {
  bool passed = false;
  Real margin = 0;  // worst value of the checked quantity
  std::string detail;
};

/// Outcome of validate(): symmetry margin is the worst relative asymmetry,
/// positivity margin the smallest ordinary eigenvalue, symplectic margin
/// nu_min - 1/2.
struct ValidationReport {
  CheckResult symmetry;
  CheckResult positive_definite;
  CheckResult symplectic_bound;

  bool passed() const {
    return symmetry.passed && positive_definite.passed && symplectic_bound.passed;
  }
  std::string summary() const;
};

/// Block-diagonal symplectic form, one [[0, 1], [-1, 0]] per mode.
Matrix symplectic_form(int n_modes);

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& cov);

/// Mirror reflection p -> -p of `mode`.
CovarianceMatrix partial_transpose(const CovarianceMatrix& cov, int mode);

/// Smallest symplectic eigenvalue of the partial transpose (on the second
/// mode) of a two-mode CM. The state is NPT-entangled iff the value is < 1/2.
Real ppt_smallest_eigenvalue(const CovarianceMatrix& cov);

/// f(nu) = (nu + 1/2) ln(nu + 1/2) - (nu - 1/2) ln(nu - 1/2), with f(1/2) = 0.
/// Values within kPhysicalTolerance below 1/2 are clamped to 1/2.
Real entropy_function(Real nu);

Real von_neumann_entropy(const CovarianceMatrix& cov);

ValidationReport validate(const CovarianceMatrix& cov);

/// Throws Error(validation) or Error(unphysical) naming the failed check.
void require_physical(const CovarianceMatrix& cov);

}  // namespace cvwork
