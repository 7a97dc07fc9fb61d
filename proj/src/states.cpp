#include "cvwork/states.hpp"

#include <cmath>
#include <string>

namespace cvwork {

namespace {

void require_finite(Real v, const char* name) {
  if (!std::isfinite(static_cast<double>(v))) fail(ErrorKind::domain, std::string(name) + " must be finite");
}

}  // namespace

void TmsParams::check() const {
  require_finite(r, "r");
  require_finite(n_th, "n_th");
  if (r < 0) fail(ErrorKind::domain, "squeezing rate r must be >= 0, got " + std::to_string(static_cast<double>(r)));
  if (n_th < 0) fail(ErrorKind::domain, "n_th must be >= 0, got " + std::to_string(static_cast<double>(n_th)));
}

void ChannelParams::check() const {
  require_finite(eta, "eta");
  require_finite(n_ch, "n_ch");
  if (eta < 0 || eta > 1) fail(ErrorKind::domain, "eta must lie in [0, 1], got " + std::to_string(static_cast<double>(eta)));
  if (n_ch < 0) fail(ErrorKind::domain, "n_ch must be >= 0, got " + std::to_string(static_cast<double>(n_ch)));
}

const char* to_string(ModeRole role) {
  switch (role) {
    case ModeRole::idler: return "idler";
    case ModeRole::signal: return "signal";
    case ModeRole::returned: return "returned";
  }
  return "unknown";
}

TwoModeState::TwoModeState(GaussianState state, std::array<ModeRole, 2> labels)
    : state_(std::move(state)), labels_(labels) {
  if (state_.n_modes() != 2) fail(ErrorKind::dimension, "two-mode state needs 2 modes, got " + std::to_string(state_.n_modes()));
  require_physical(state_.cov);
}

GaussianState make_thermal(Real n) {
  require_finite(n, "occupation");
  if (n < 0) fail(ErrorKind::domain, "thermal occupation must be >= 0");
  return GaussianState(CovarianceMatrix(Matrix::Identity(2, 2) * (convention::kVacuumVariance + n)));
}

Real occupation_from_temperature(Real frequency_hz, Real temperature_k) {
  if (!(frequency_hz > 0)) fail(ErrorKind::domain, "frequency must be > 0");
  if (!(temperature_k >= 0)) fail(ErrorKind::domain, "temperature must be >= 0");
  if (temperature_k == 0) return 0;
  const Real omega = 2 * constants::kPi * frequency_hz;
  return 1 / std::expm1(constants::kHbar * omega / (constants::kBoltzmann * temperature_k));
}

TwoModeState make_tmsts(const TmsParams& p) {
  p.check();
  const Real a = p.noise() * std::cosh(2 * p.r);
  const Real c = p.noise() * std::sinh(2 * p.r);
  Matrix m = Matrix::Zero(4, 4);
  m.diagonal().setConstant(a);
  m(0, 2) = m(2, 0) = c;
  m(1, 3) = m(3, 1) = -c;
  return TwoModeState(GaussianState(CovarianceMatrix(std::move(m))));
}

TwoModeState make_product(const GaussianState& idler, const GaussianState& other, ModeRole other_role) {
  if (idler.n_modes() != 1 || other.n_modes() != 1) fail(ErrorKind::dimension, "product state needs two single-mode states");
  Matrix m = Matrix::Zero(4, 4);
  m.topLeftCorner<2, 2>() = idler.cov.entries();
  m.bottomRightCorner<2, 2>() = other.cov.entries();
  Vector mean(4);
  mean << idler.mean, other.mean;
  return TwoModeState(GaussianState(std::move(mean), CovarianceMatrix(std::move(m))), {ModeRole::idler, other_role});
}

Matrix two_mode_squeeze_symplectic(Real r) {
  if (r < 0) fail(ErrorKind::domain, "squeezing rate r must be >= 0");
  const Real ch = std::cosh(r);
  const Real sh = std::sinh(r);
  Matrix s = Matrix::Zero(4, 4);
  s.diagonal().setConstant(ch);
  s(0, 2) = s(2, 0) = sh;
  s(1, 3) = s(3, 1) = -sh;
  return s;
}

Matrix beam_splitter_symplectic(Real theta) {
  const Real t = std::cos(theta);
  const Real q = std::sin(theta);
  Matrix s = Matrix::Zero(4, 4);
  s.topLeftCorner<2, 2>() = Matrix2::Identity() * t;
  s.bottomRightCorner<2, 2>() = Matrix2::Identity() * t;
  s.topRightCorner<2, 2>() = Matrix2::Identity() * q;
  s.bottomLeftCorner<2, 2>() = Matrix2::Identity() * -q;
  return s;
}

TwoModeState apply_channel(const TwoModeState& s, const ChannelParams& ch) {
  ch.check();
  const Real t = std::sqrt(ch.eta);
  Matrix m = s.cov().entries();
  m.block<2, 2>(0, 2) *= t;
  m.block<2, 2>(2, 0) *= t;
  m.block<2, 2>(2, 2) = ch.eta * m.block<2, 2>(2, 2) + (1 - ch.eta) * ch.noise() * Matrix2::Identity();
  Vector mean = s.mean();
  mean.segment<2>(2) *= t;
  return TwoModeState(GaussianState(std::move(mean), CovarianceMatrix(std::move(m))), {s.labels()[0], ModeRole::returned});
}

}  // namespace cvwork
