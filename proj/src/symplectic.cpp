#include "cvwork/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace cvwork {

namespace {

using std::abs;

Real worst_asymmetry(const Matrix& m) {
  Real worst = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) {
      const Real scale = std::max<Real>(1, std::max(abs(m(i, j)), abs(m(j, i))));
      worst = std::max(worst, abs(m(i, j) - m(j, i)) / scale);
    }
  }
  return worst;
}

Matrix symmetrized(const Matrix& m) { return (m + m.transpose()) / 2; }

std::string format_real(Real v) {
  std::ostringstream os;
  os.precision(12);
  os << static_cast<double>(v);
  return os.str();
}

// Symplectic spectrum of a symmetric positive definite matrix. The nonzero
// eigenvalues of the Hermitian matrix i * s^{1/2} Omega s^{1/2} are +-nu_k.
std::vector<Real> spectrum_of_spd(const Matrix& sym, const Eigen::SelfAdjointEigenSolver<Matrix>& es) {
  const int n = static_cast<int>(sym.rows() / 2);
  const Matrix root = es.operatorSqrt();
  const Matrix k = root * symplectic_form(n) * root;

  using Complex = std::complex<Real>;
  using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const ComplexMatrix h = Complex(0, 1) * k.cast<Complex>();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> hs(h, Eigen::EigenvaluesOnly);
  if (hs.info() != Eigen::Success) fail(ErrorKind::numeric, "symplectic eigensolve did not converge");

  // Ascending: -nu_N .. -nu_1, nu_1 .. nu_N. Average the mirrored pairs.
  const auto& ev = hs.eigenvalues();
  std::vector<Real> nu(n);
  for (int k = 0; k < n; ++k) nu[k] = (ev(n + k) - ev(n - 1 - k)) / 2;
  std::sort(nu.begin(), nu.end());
  return nu;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0 || entries_.rows() % 2 != 0) {
    fail(ErrorKind::dimension, "covariance matrix must be square with even, nonzero dimension; got " +
                                   std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
  }
  if (!entries_.allFinite()) fail(ErrorKind::validation, "covariance matrix has non-finite entries");
}

CovarianceMatrix CovarianceMatrix::vacuum(int n_modes) {
  if (n_modes <= 0) fail(ErrorKind::dimension, "vacuum needs at least one mode");
  return CovarianceMatrix(Matrix::Identity(2 * n_modes, 2 * n_modes) * convention::kVacuumVariance);
}

Matrix2 CovarianceMatrix::block(int i, int j) const {
  if (i < 0 || j < 0 || i >= n_modes() || j >= n_modes()) {
    fail(ErrorKind::dimension, "mode index out of range");
  }
  return entries_.block<2, 2>(2 * i, 2 * j);
}

CovarianceMatrix CovarianceMatrix::reduced(int mode) const { return CovarianceMatrix(Matrix(block(mode, mode))); }

GaussianState::GaussianState(Vector mean_in, CovarianceMatrix cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
  if (mean.size() != 2 * cov.n_modes()) {
    fail(ErrorKind::dimension, "mean vector length " + std::to_string(mean.size()) +
                                   " does not match 2 x " + std::to_string(cov.n_modes()) + " modes");
  }
}

GaussianState::GaussianState(CovarianceMatrix cov_in)
    : GaussianState(Vector::Zero(cov_in.entries().rows()), cov_in) {}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  os << (passed() ? "pass" : "fail") << ": symmetry " << symmetry.detail << "; positivity "
     << positive_definite.detail << "; symplectic " << symplectic_bound.detail;
  return os.str();
}

Matrix symplectic_form(int n_modes) {
  Matrix omega = Matrix::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1;
    omega(2 * k + 1, 2 * k) = -1;
  }
  return omega;
}

ValidationReport validate(const CovarianceMatrix& cov) {
  ValidationReport report;
  const Matrix& m = cov.entries();

  const Real asym = worst_asymmetry(m);
  report.symmetry = {asym <= convention::kSymmetryTolerance, asym,
                     "max relative asymmetry " + format_real(asym)};

  const Matrix sym = symmetrized(m);
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) {
    report.positive_definite = {false, 0, "eigensolve failed"};
    report.symplectic_bound = {false, 0, "skipped"};
    return report;
  }
  const Real min_eig = es.eigenvalues().minCoeff();
  report.positive_definite = {min_eig > 0, min_eig, "min eigenvalue " + format_real(min_eig)};
  if (!report.positive_definite.passed) {
    report.symplectic_bound = {false, 0, "skipped: not positive definite"};
    return report;
  }

  const Real nu_min = spectrum_of_spd(sym, es).front();
  const Real margin = nu_min - convention::kVacuumVariance;
  report.symplectic_bound = {margin >= -convention::kPhysicalTolerance, margin,
                             "min symplectic eigenvalue " + format_real(nu_min) +
                                 (margin >= -convention::kPhysicalTolerance ? " >= 0.5" : " < 0.5")};
  return report;
}

void require_physical(const CovarianceMatrix& cov) {
  const ValidationReport report = validate(cov);
  if (!report.symmetry.passed) fail(ErrorKind::validation, "covariance matrix not symmetric: " + report.symmetry.detail);
  if (!report.positive_definite.passed) {
    fail(ErrorKind::validation, "covariance matrix not positive definite: " + report.positive_definite.detail);
  }
  if (!report.symplectic_bound.passed) fail(ErrorKind::unphysical, "unphysical state: " + report.symplectic_bound.detail);
}

SymplecticSpectrum symplectic_eigenvalues(const CovarianceMatrix& cov) {
  const Real asym = worst_asymmetry(cov.entries());
  if (asym > convention::kSymmetryTolerance) {
    fail(ErrorKind::validation, "covariance matrix not symmetric (relative asymmetry " + format_real(asym) + ")");
  }
  const Matrix sym = symmetrized(cov.entries());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) fail(ErrorKind::numeric, "eigensolve did not converge");
  if (es.eigenvalues().minCoeff() <= 0) {
    fail(ErrorKind::validation, "covariance matrix not positive definite (min eigenvalue " +
                                    format_real(es.eigenvalues().minCoeff()) + ")");
  }
  return {spectrum_of_spd(sym, es)};
}

CovarianceMatrix partial_transpose(const CovarianceMatrix& cov, int mode) {
  if (mode < 0 || mode >= cov.n_modes()) fail(ErrorKind::dimension, "mode index out of range");
  Matrix m = cov.entries();
  const int p = convention::p_index(mode);
  m.row(p) *= -1;
  m.col(p) *= -1;
  return CovarianceMatrix(std::move(m));
}

Real ppt_smallest_eigenvalue(const CovarianceMatrix& cov) {
  if (cov.n_modes() != 2) {
    fail(ErrorKind::dimension, "partial transpose criterion needs exactly 2 modes, got " + std::to_string(cov.n_modes()));
  }
  return symplectic_eigenvalues(partial_transpose(cov, 1)).smallest();
}

Real entropy_function(Real nu) {
  constexpr Real half = convention::kVacuumVariance;
  if (nu < half - convention::kPhysicalTolerance) {
    fail(ErrorKind::unphysical, "symplectic eigenvalue " + format_real(nu) + " below 1/2");
  }
  if (nu <= half) return 0;
  const Real lower = nu - half;
  if (lower > 1) return std::log(lower) + (nu + half) * std::log1p(1 / lower);
  return (nu + half) * std::log(nu + half) - lower * std::log(lower);
}

Real von_neumann_entropy(const CovarianceMatrix& cov) {
  Real s = 0;
  for (Real nu : symplectic_eigenvalues(cov).eigenvalues) s += entropy_function(nu);
  return s;
}

}  // namespace cvwork
