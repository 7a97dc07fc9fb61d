#pragma once

#include <span>

#include "cvwork/states.hpp"

namespace cvwork {

enum class MeasurementKind { homodyne_x, homodyne_p, heterodyne, general };

/// Gaussian measurement on one mode, with measurement matrix diag(lambda, 1/lambda) / 2.
/// homodyne_x is the lambda -> 0 limit, homodyne_p lambda -> inf, heterodyne lambda = 1.
struct MeasurementSpec {
  MeasurementKind kind = MeasurementKind::homodyne_x;
  Real lambda = 1;  // read only for kind == general

  static MeasurementSpec homodyne_x() { return {MeasurementKind::homodyne_x, 0}; }
  static MeasurementSpec homodyne_p() { return {MeasurementKind::homodyne_p, 0}; }
  static MeasurementSpec heterodyne() { return {MeasurementKind::heterodyne, 1}; }
  static MeasurementSpec general(Real lambda);

  /// "homx", "homp", "het" or "general:<lambda>".
  static MeasurementSpec parse(const std::string& text);
  std::string to_string() const;

  /// Number of real values in a measurement outcome.
  int outcome_size() const { return kind == MeasurementKind::homodyne_x || kind == MeasurementKind::homodyne_p ? 1 : 2; }
};

/// Prefactor of the feedback displacement d_a = k c_ab (sigma_b + gamma)^{-1} d_b.
/// Standard Gaussian conditioning uses k = 1.
inline constexpr Real kFeedbackPrefactor = 0.5L;

struct WorkResult {
  Real work_per_kbt = 0;
  Real entropy_before = 0;
  Real entropy_after = 0;
  CovarianceMatrix conditional_cov = CovarianceMatrix::vacuum(1);
};

/// Conditional CM of the mode that is not measured. Never depends on the outcome.
CovarianceMatrix conditional_cov(const TwoModeState& s, Mode measured, const MeasurementSpec& m);

/// Displacement fed forward to the unmeasured mode for a given outcome.
Vector2 feedback_displacement(const TwoModeState& s, Mode measured, const MeasurementSpec& m,
                              std::span<const Real> outcome, Real prefactor = kFeedbackPrefactor);

/// Entropy drop of the unmeasured mode, in units of k_B T.
WorkResult extracted_work_general(const TwoModeState& s, Mode measured, const MeasurementSpec& m);

/// Homodyne work (1/2) ln(1 / (1 - (c/a)^2)).
Real work_homodyne_closed(Real a, Real c);

/// The same expression without the 1/2 prefactor. Exactly twice
/// work_homodyne_closed.
Real work_homodyne_literal(Real a, Real c);

struct HeterodyneWork {
  Real literal = 0;  // ln(1 / (1 - c^2 / (a (1 + 2a))^2))
  Real general = 0;  // entropy-based, heterodyne on the standard-form state (a, c)
};

HeterodyneWork work_heterodyne_closed(Real a, Real c);

struct ChannelWork {
  Real x = 0;
  Real work_per_kbt = 0;  // (1/2) ln(1 / (1 - x))
};

/// Closed-form homodyne work after the thermal-loss channel.
ChannelWork work_after_channel(const TmsParams& p, const ChannelParams& ch);

/// The same ratio x read off a state: 1 - Var(x_I | x_R) / Var(x_I).
Real x_from_cm(const TwoModeState& s);

/// eta sinh^2 2r / (cosh 2r (1/2 + n_ch)); requires n_th == 0.
Real x_vacuum_limit(const TmsParams& p, const ChannelParams& ch);

/// eta sinh^2 2r / (cosh 2r [eta cosh 2r + (1 - eta)]); requires n_th == n_ch.
Real x_thermal_limit(const TmsParams& p, const ChannelParams& ch);

/// eta sinh 2r tanh 2r, the high-loss asymptote of x_thermal_limit.
Real x_thermal_asymptote(Real r, Real eta);

}  // namespace cvwork
