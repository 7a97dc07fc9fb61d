#include "cvwork/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Cholesky>

namespace cvwork::oracle {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// Uniform in (0, 1] from the top 53 bits.
double unit_open_left(std::mt19937_64& gen) { return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53; }

void require_two_modes(const SampleBatch& batch) {
  if (batch.samples.cols() != 4) fail(ErrorKind::dimension, "estimator needs a two-mode batch");
  if (batch.n_samples() < 4) fail(ErrorKind::numeric, "too few samples");
}

struct Accumulated {
  long double mean_a = 0, mean_b = 0, saa = 0, sbb = 0, sab = 0;
  std::size_t n = 0;
};

// Two-pass means and centered cross products, accumulated in long double.
Accumulated accumulate(const SampleBatch& batch, int ia, int ib) {
  Accumulated acc;
  acc.n = batch.n_samples();
  const auto& s = batch.samples;
  for (Eigen::Index k = 0; k < s.rows(); ++k) {
    acc.mean_a += s(k, ia);
    acc.mean_b += s(k, ib);
  }
  acc.mean_a /= acc.n;
  acc.mean_b /= acc.n;
  for (Eigen::Index k = 0; k < s.rows(); ++k) {
    const long double da = s(k, ia) - acc.mean_a;
    const long double db = s(k, ib) - acc.mean_b;
    acc.saa += da * da;
    acc.sbb += db * db;
    acc.sab += da * db;
  }
  return acc;
}

}  // namespace

bool Estimate::within(Real expected, Real k) const {
  return std::abs(value - expected) <= k * standard_error;
}

SampleBatch sample(const GaussianState& state, std::size_t n, std::uint64_t seed) {
  if (n < 2) fail(ErrorKind::domain, "need at least 2 samples");
  const Eigen::LLT<Matrix> llt(state.cov.entries());
  if (llt.info() != Eigen::Success) fail(ErrorKind::numeric, "Cholesky factorization of the CM failed");
  const Matrix lower = llt.matrixL();
  const Eigen::Index dim = lower.rows();

  SampleBatch batch;
  batch.seed = seed;
  batch.samples.resize(static_cast<Eigen::Index>(n), dim);

  std::mt19937_64 gen(seed);
  Vector z(dim);
  bool have_spare = false;
  double spare = 0;
  auto normal = [&]() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double radius = std::sqrt(-2.0 * std::log(unit_open_left(gen)));
    const double angle = kTwoPi * unit_open_left(gen);
    spare = radius * std::sin(angle);
    have_spare = true;
    return radius * std::cos(angle);
  };

  for (std::size_t k = 0; k < n; ++k) {
    for (Eigen::Index i = 0; i < dim; ++i) z(i) = normal();
    const Vector point = state.mean + lower * z;
    batch.samples.row(static_cast<Eigen::Index>(k)) = point.cast<double>().transpose();
  }
  return batch;
}

Estimate empirical_covariance(const SampleBatch& batch, int i, int j) {
  const Accumulated acc = accumulate(batch, i, j);
  const long double dof = static_cast<long double>(acc.n - 1);
  const long double sij = acc.sab / dof;
  const long double sii = acc.saa / dof;
  const long double sjj = acc.sbb / dof;
  return {sij, std::sqrt((sii * sjj + sij * sij) / acc.n)};
}

Estimate empirical_rho(const SampleBatch& batch) {
  require_two_modes(batch);
  const Accumulated acc = accumulate(batch, 0, 2);
  if (!(acc.saa > 0 && acc.sbb > 0)) fail(ErrorKind::numeric, "degenerate batch variance");
  const long double rho = acc.sab / std::sqrt(acc.saa * acc.sbb);
  return {rho, (1 - rho * rho) / std::sqrt(static_cast<long double>(acc.n - 3))};
}

Estimate empirical_conditional_variance(const SampleBatch& batch, Quadrature q) {
  require_two_modes(batch);
  const int off = q == Quadrature::x ? 0 : 1;
  const Accumulated acc = accumulate(batch, off, 2 + off);
  if (!(acc.sbb > 0)) fail(ErrorKind::numeric, "degenerate batch variance");
  const long double residual = (acc.saa - acc.sab * acc.sab / acc.sbb) / static_cast<long double>(acc.n - 2);
  return {residual, residual * std::sqrt(2.0L / static_cast<long double>(acc.n - 2))};
}

MomentEstimate empirical_receiver_moments(const SampleBatch& batch) {
  require_two_modes(batch);
  const auto& s = batch.samples;
  const long double n = static_cast<long double>(batch.n_samples());
  auto observable = [&](Eigen::Index k) {
    return static_cast<long double>(s(k, 2)) * s(k, 0) - static_cast<long double>(s(k, 3)) * s(k, 1);
  };

  long double mean = 0;
  for (Eigen::Index k = 0; k < s.rows(); ++k) mean += observable(k);
  mean /= n;
  long double m2 = 0, m4 = 0;
  for (Eigen::Index k = 0; k < s.rows(); ++k) {
    const long double d = observable(k) - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const long double var = m2 / (n - 1);
  m4 /= n;
  const long double central2 = m2 / n;

  MomentEstimate out;
  out.mean = {mean, std::sqrt(var / n)};
  out.variance = {var, std::sqrt(std::max(0.0L, m4 - central2 * central2) / n)};
  return out;
}

}  // namespace cvwork::oracle
