#include "cvwork/protocols.hpp"

#include <cmath>

namespace cvwork {

namespace {

void check_r_eta(Real r, Real eta) {
  TmsParams{r, 0}.check();
  ChannelParams{eta, 0}.check();
}

}  // namespace

Real qi_snr_closed_thermal(Real r, Real eta) {
  check_r_eta(r, eta);
  const Real s = std::sinh(2 * r);
  return eta * s * s;
}

Real qi_snr_closed_vacuum(Real r, Real eta, Real n) {
  check_r_eta(r, eta);
  if (!(n > 0)) fail(ErrorKind::domain, "vacuum SNR scaling needs a background occupation n > 0");
  return qi_snr_closed_thermal(r, eta) / n;
}

Real qi_gap_literal(Real r, Real eta, Real n) {
  check_r_eta(r, eta);
  if (n < 0) fail(ErrorKind::domain, "occupation must be >= 0");
  return eta * std::sinh(2 * r) * (convention::kVacuumVariance + n);
}

Matrix receiver_form() {
  Matrix a = Matrix::Zero(4, 4);
  a(0, 2) = a(2, 0) = 0.5L;
  a(1, 3) = a(3, 1) = -0.5L;
  return a;
}

QuadraticMoments symmetric_moments(const Matrix& form, const GaussianState& state) {
  const Matrix& v = state.cov.entries();
  if (form.rows() != v.rows() || form.cols() != v.cols()) fail(ErrorKind::dimension, "form and CM sizes differ");
  const Matrix av = form * v;
  const Vector& m = state.mean;
  QuadraticMoments out;
  out.mean = av.trace() + m.dot(form * m);
  out.variance = 2 * (av * av).trace() + 4 * m.dot(av * form * m);
  return out;
}

Real ordering_correction(const Matrix& form) {
  const Matrix a_omega = form * symplectic_form(static_cast<int>(form.rows() / 2));
  return (a_omega * a_omega).trace() / 2;
}

QuadraticMoments receiver_moments(const GaussianState& state) {
  const Matrix form = receiver_form();
  QuadraticMoments q = symmetric_moments(form, state);
  q.variance += ordering_correction(form);
  return q;
}

TwoModeState qi_null_hypothesis(const TwoModeState& source, Real n_ch) {
  const GaussianState idler(source.mean_of(Mode::idler), source.cov().reduced(index(Mode::idler)));
  return make_product(idler, make_thermal(n_ch), ModeRole::returned);
}

SnrResult qi_intensity_moments(const TwoModeState& h1, const TwoModeState& h0) {
  const QuadraticMoments m1 = receiver_moments(h1.state());
  const QuadraticMoments m0 = receiver_moments(h0.state());
  SnrResult r;
  r.signal_gap = m1.mean - m0.mean;
  r.noise_h1 = m1.variance;
  r.noise_h0 = m0.variance;
  const Real denom = std::sqrt(r.noise_h1) + std::sqrt(r.noise_h0);
  if (!(denom > 0)) fail(ErrorKind::numeric, "receiver noise vanishes under both hypotheses");
  r.snr = 4 * r.signal_gap * r.signal_gap / (denom * denom);
  return r;
}

CorrelationResult qkd_rho_from_cm(const TwoModeState& s) {
  CorrelationResult c;
  c.numerator = s.cov()(0, 2);
  c.var_i = s.cov()(0, 0);
  c.var_r = s.cov()(2, 2);
  if (!(c.var_i > 0 && c.var_r > 0)) fail(ErrorKind::numeric, "degenerate state: zero quadrature variance");
  c.rho = c.numerator / std::sqrt(c.var_i * c.var_r);
  return c;
}

Real qkd_rho_closed_thermal(Real r, Real eta) {
  check_r_eta(r, eta);
  if (eta == 0) return 0;
  const Real ch = std::cosh(2 * r);
  return std::sqrt(eta) * std::sinh(2 * r) / std::sqrt(ch * (eta * ch + (1 - eta)));
}

Real qkd_rho_closed_vacuum(Real r, Real eta, Real n_ch) {
  check_r_eta(r, eta);
  if (n_ch < 0) fail(ErrorKind::domain, "n_ch must be >= 0");
  if (eta == 0) return 0;
  return std::sqrt(eta) * std::sinh(2 * r) / std::sqrt(eta * std::cosh(2 * r) + (1 - eta) * (1 + 2 * n_ch));
}

}  // namespace cvwork
