#pragma once

#include <array>

#include "cvwork/symplectic.hpp"

namespace cvwork {

/// Two-mode squeezing source: rate r applied to a thermal pair of occupation n_th.
struct TmsParams {
  Real r = 0;
  Real n_th = 0;

  void check() const;
  Real noise() const { return convention::kVacuumVariance + n_th; }  // 1/2 + n_th
};

/// Thermal-loss channel acting on the signal: a_R = sqrt(eta) a_S + sqrt(1 - eta) a_ch.
struct ChannelParams {
  Real eta = 1;
  Real n_ch = 0;

  void check() const;
  Real noise() const { return convention::kVacuumVariance + n_ch; }
};

/// Slot 0 is always the idler; slot 1 the signal (before the channel) or the
/// returned mode (after it).
enum class Mode : int { idler = 0, signal = 1 };

enum class ModeRole { idler, signal, returned };

const char* to_string(ModeRole role);

constexpr int index(Mode m) { return static_cast<int>(m); }
constexpr Mode other(Mode m) { return m == Mode::idler ? Mode::signal : Mode::idler; }

class TwoModeState {
 public:
  /// Throws unless `state` has two modes and passes validate().
  TwoModeState(GaussianState state, std::array<ModeRole, 2> labels = {ModeRole::idler, ModeRole::signal});

  const GaussianState& state() const noexcept { return state_; }
  const CovarianceMatrix& cov() const noexcept { return state_.cov; }
  const Vector& mean() const noexcept { return state_.mean; }
  const std::array<ModeRole, 2>& labels() const noexcept { return labels_; }

  Matrix2 block(Mode m) const { return state_.cov.block(index(m), index(m)); }
  /// Rows belong to `rows`, columns to the other mode.
  Matrix2 cross(Mode rows) const { return state_.cov.block(index(rows), index(other(rows))); }
  Vector2 mean_of(Mode m) const { return state_.mean.segment<2>(2 * index(m)); }

 private:
  GaussianState state_;
  std::array<ModeRole, 2> labels_;
};

GaussianState make_thermal(Real n);

/// Mean occupation 1 / (exp(hbar omega / k_B T) - 1) of a mode at
/// `frequency_hz` in equilibrium at `temperature_k`.
Real occupation_from_temperature(Real frequency_hz, Real temperature_k);

/// Zero-mean TMSTS: sigma_I = sigma_S = a I, cross block diag(c, -c), with
/// a = (1/2 + n_th) cosh 2r and c = (1/2 + n_th) sinh 2r.
TwoModeState make_tmsts(const TmsParams& p);

/// Product of two single-mode states, idler first.
TwoModeState make_product(const GaussianState& idler, const GaussianState& other,
                          ModeRole other_role = ModeRole::returned);

/// 4x4 symplectic matrix of the two-mode squeezer, (x1, p1, x2, p2) ordering.
Matrix two_mode_squeeze_symplectic(Real r);

/// 4x4 symplectic matrix of a beam splitter with amplitude transmissivity cos(theta).
Matrix beam_splitter_symplectic(Real theta);

/// Applies the thermal-loss channel to the signal slot. The idler is untouched.
TwoModeState apply_channel(const TwoModeState& s, const ChannelParams& ch);

}  // namespace cvwork
