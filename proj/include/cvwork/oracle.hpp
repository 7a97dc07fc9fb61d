#pragma once

#include <cstdint>
#include <string_view>

#include "cvwork/symplectic.hpp"

namespace cvwork::oracle {

/// Generator recorded in CSV metadata. mt19937_64 output is fixed by the C++
/// standard; normals come from Box-Muller so batches match across toolchains.
inline constexpr std::string_view kRngId = "mt19937_64/box-muller";

using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Phase-space points drawn from a Gaussian Wigner function, one row per point.
struct SampleBatch {
  SampleMatrix samples;
  std::uint64_t seed = 0;

  std::size_t n_samples() const { return static_cast<std::size_t>(samples.rows()); }
};

/// n draws of mean + L z, L the Cholesky factor of the CM, z standard normal.
SampleBatch sample(const GaussianState& state, std::size_t n, std::uint64_t seed);

struct Estimate {
  Real value = 0;
  Real standard_error = 0;

  /// |value - expected| <= k standard errors.
  bool within(Real expected, Real k = 3) const;
};

/// Empirical covariance of columns i and j, with SE sqrt((s_ii s_jj + s_ij^2) / n).
Estimate empirical_covariance(const SampleBatch& batch, int i, int j);

/// Pearson correlation of x_I and x_R. SE from the Fisher transform, (1 - rho^2) / sqrt(n - 3).
Estimate empirical_rho(const SampleBatch& batch);

enum class Quadrature { x, p };

/// Residual variance of the idler quadrature after linear regression on the
/// same quadrature of the other mode.
Estimate empirical_conditional_variance(const SampleBatch& batch, Quadrature q = Quadrature::x);

struct MomentEstimate {
  Estimate mean;
  Estimate variance;
};

/// Sample mean and variance of x_R x_I - p_R p_I. These are symmetric-ordered
/// moments; compare with symmetric_moments(), not receiver_moments().
MomentEstimate empirical_receiver_moments(const SampleBatch& batch);

}  // namespace cvwork::oracle
