#include "cvwork/conditioning.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/LU>

namespace cvwork {

namespace {

std::string fmt(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(v));
  return buf;
}

Matrix2 measurement_matrix(const MeasurementSpec& m) {
  Matrix2 gamma = Matrix2::Zero();
  gamma(0, 0) = m.lambda / 2;
  gamma(1, 1) = 1 / (2 * m.lambda);
  return gamma;
}

// Gain G such that the conditional update is A - G C^T and the feedback is G d.
// For homodyne the pseudo-inverse of the projected block keeps one column.
Eigen::Matrix<Real, 2, Eigen::Dynamic> gain(const TwoModeState& s, Mode measured, const MeasurementSpec& m) {
  const Matrix2 b = s.block(measured);
  const Matrix2 c = s.cross(other(measured));
  switch (m.kind) {
    case MeasurementKind::homodyne_x:
      return c.col(0) / b(0, 0);
    case MeasurementKind::homodyne_p:
      return c.col(1) / b(1, 1);
    case MeasurementKind::heterodyne:
    case MeasurementKind::general: {
      const Matrix2 total = b + measurement_matrix(m);
      const Real det = total.determinant();
      if (!(det > 0)) fail(ErrorKind::numeric, "sigma_b + gamma is singular");
      return c * total.inverse();
    }
  }
  fail(ErrorKind::domain, "unknown measurement kind");
}

Eigen::Matrix<Real, Eigen::Dynamic, 2> measured_rows(const TwoModeState& s, Mode measured, const MeasurementSpec& m) {
  const Matrix2 ct = s.cross(other(measured)).transpose();
  switch (m.kind) {
    case MeasurementKind::homodyne_x: return ct.row(0);
    case MeasurementKind::homodyne_p: return ct.row(1);
    default: return ct;
  }
}

}  // namespace

MeasurementSpec MeasurementSpec::general(Real lambda) {
  if (!(lambda > 0) || !std::isfinite(static_cast<double>(lambda))) {
    fail(ErrorKind::domain, "measurement lambda must be a positive finite number");
  }
  return {MeasurementKind::general, lambda};
}

MeasurementSpec MeasurementSpec::parse(const std::string& text) {
  if (text == "homx") return homodyne_x();
  if (text == "homp") return homodyne_p();
  if (text == "het") return heterodyne();
  const std::string prefix = "general:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    std::size_t used = 0;
    long double lambda = 0;
    try {
      lambda = std::stold(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) fail(ErrorKind::usage, "bad measurement lambda '" + rest + "'");
    return general(lambda);
  }
  fail(ErrorKind::usage, "measurement must be homx, homp, het or general:<lambda>; got '" + text + "'");
}

std::string MeasurementSpec::to_string() const {
  switch (kind) {
    case MeasurementKind::homodyne_x: return "homx";
    case MeasurementKind::homodyne_p: return "homp";
    case MeasurementKind::heterodyne: return "het";
    case MeasurementKind::general: return "general:" + fmt(lambda);
  }
  return "unknown";
}

CovarianceMatrix conditional_cov(const TwoModeState& s, Mode measured, const MeasurementSpec& m) {
  const Matrix2 a = s.block(other(measured));
  Matrix2 updated = a - gain(s, measured, m) * measured_rows(s, measured, m);
  updated = (updated + updated.transpose()) / 2;
  return CovarianceMatrix(Matrix(updated));
}

Vector2 feedback_displacement(const TwoModeState& s, Mode measured, const MeasurementSpec& m,
                              std::span<const Real> outcome, Real prefactor) {
  if (static_cast<int>(outcome.size()) != m.outcome_size()) {
    fail(ErrorKind::dimension, m.to_string() + " outcome needs " + std::to_string(m.outcome_size()) +
                                   " value(s), got " + std::to_string(outcome.size()));
  }
  Vector d(outcome.size());
  for (std::size_t i = 0; i < outcome.size(); ++i) d(static_cast<Eigen::Index>(i)) = outcome[i];
  return prefactor * (gain(s, measured, m) * d);
}

WorkResult extracted_work_general(const TwoModeState& s, Mode measured, const MeasurementSpec& m) {
  WorkResult result;
  result.conditional_cov = conditional_cov(s, measured, m);
  require_physical(result.conditional_cov);
  result.entropy_before = von_neumann_entropy(s.cov().reduced(index(other(measured))));
  result.entropy_after = von_neumann_entropy(result.conditional_cov);
  const Real diff = result.entropy_before - result.entropy_after;
  if (diff < -convention::kPhysicalTolerance) {
    fail(ErrorKind::numeric, "measurement increased the entropy by " + fmt(-diff));
  }
  result.work_per_kbt = diff > 0 ? diff : 0;
  return result;
}

Real work_homodyne_literal(Real a, Real c) {
  if (!(a > 0)) fail(ErrorKind::domain, "a must be > 0");
  if (!(std::abs(c) < a)) fail(ErrorKind::domain, "|c| must be < a (unphysical correlation)");
  const Real ratio = c / a;
  return -std::log1p(-ratio * ratio);
}

Real work_homodyne_closed(Real a, Real c) { return work_homodyne_literal(a, c) / 2; }

HeterodyneWork work_heterodyne_closed(Real a, Real c) {
  if (!(a > 0)) fail(ErrorKind::domain, "a must be > 0");
  const Real denom = a * (1 + 2 * a);
  const Real q = c * c / (denom * denom);
  if (!(q < 1)) fail(ErrorKind::domain, "heterodyne work: logarithm argument is not positive");

  HeterodyneWork w;
  w.literal = -std::log1p(-q);

  Matrix m = Matrix::Zero(4, 4);
  m.diagonal().setConstant(a);
  m(0, 2) = m(2, 0) = c;
  m(1, 3) = m(3, 1) = -c;
  const TwoModeState s{GaussianState(CovarianceMatrix(std::move(m)))};
  w.general = extracted_work_general(s, Mode::signal, MeasurementSpec::heterodyne()).work_per_kbt;
  return w;
}

ChannelWork work_after_channel(const TmsParams& p, const ChannelParams& ch) {
  p.check();
  ch.check();
  const Real n = p.noise();
  const Real cosh2r = std::cosh(2 * p.r);
  const Real sinh2r = std::sinh(2 * p.r);
  const Real numer = ch.eta * n * n * sinh2r * sinh2r;
  const Real denom = n * cosh2r * (ch.eta * n * cosh2r + (1 - ch.eta) * ch.noise());

  ChannelWork w;
  w.x = numer / denom;
  if (!(w.x >= 0 && w.x < 1)) fail(ErrorKind::numeric, "x = " + fmt(w.x) + " outside [0, 1)");
  w.work_per_kbt = -std::log1p(-w.x) / 2;
  return w;
}

Real x_from_cm(const TwoModeState& s) {
  const CovarianceMatrix cond = conditional_cov(s, Mode::signal, MeasurementSpec::homodyne_x());
  return 1 - cond(0, 0) / s.cov()(0, 0);
}

Real x_vacuum_limit(const TmsParams& p, const ChannelParams& ch) {
  p.check();
  ch.check();
  if (p.n_th != 0) fail(ErrorKind::domain, "vacuum limit requires n_th = 0");
  const Real sinh2r = std::sinh(2 * p.r);
  return ch.eta * sinh2r * sinh2r / (std::cosh(2 * p.r) * ch.noise());
}

Real x_thermal_limit(const TmsParams& p, const ChannelParams& ch) {
  p.check();
  ch.check();
  if (std::abs(p.n_th - ch.n_ch) > 1e-12L * std::max<Real>(1, ch.n_ch)) {
    fail(ErrorKind::domain, "thermal limit requires n_th = n_ch");
  }
  const Real cosh2r = std::cosh(2 * p.r);
  const Real sinh2r = std::sinh(2 * p.r);
  return ch.eta * sinh2r * sinh2r / (cosh2r * (ch.eta * cosh2r + (1 - ch.eta)));
}

Real x_thermal_asymptote(Real r, Real eta) {
  if (r < 0) fail(ErrorKind::domain, "r must be >= 0");
  if (eta < 0 || eta > 1) fail(ErrorKind::domain, "eta must lie in [0, 1]");
  return eta * std::sinh(2 * r) * std::tanh(2 * r);
}

}  // namespace cvwork
