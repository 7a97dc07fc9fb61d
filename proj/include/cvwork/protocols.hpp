#pragma once

#include "cvwork/states.hpp"

namespace cvwork {

// Quantum illumination -----------------------------------------------------

/// eta sinh^2 2r: TMSTS joint-detection SNR scaling with n_th = n_ch.
Real qi_snr_closed_thermal(Real r, Real eta);

/// eta sinh^2 2r / n: the TMSVS scaling against a background of occupation n.
Real qi_snr_closed_vacuum(Real r, Real eta, Real n);

/// Intensity gap eta sinh 2r (1/2 + n) for the TMSTS receiver, taken literally.
Real qi_gap_literal(Real r, Real eta, Real n);

/// Mean and variance of a quadratic observable z^T A z.
struct QuadraticMoments {
  Real mean = 0;
  Real variance = 0;
};

/// Receiver observable O = x_R x_I - p_R p_I = a_R a_I + h.c. as a symmetric
/// 4x4 form in (x_I, p_I, x_R, p_R).
Matrix receiver_form();

/// Moments of z^T A z for z distributed as the state's Wigner function
/// (Isserlis): mean tr(AV) + m^T A m, variance 2 tr(AVAV) + 4 m^T AVA m.
QuadraticMoments symmetric_moments(const Matrix& form, const GaussianState& state);

/// Difference between the quantum and the Wigner-sampled second moment of the
/// Weyl-ordered quadratic form, (1/2) tr((A Omega)^2). Independent of the state.
Real ordering_correction(const Matrix& form);

/// Quantum mean and variance of the receiver observable.
QuadraticMoments receiver_moments(const GaussianState& state);

struct SnrResult {
  Real signal_gap = 0;  // <O>_1 - <O>_0
  Real noise_h1 = 0;    // Var(O) under target present
  Real noise_h0 = 0;    // Var(O) under target absent
  Real snr = 0;

  /// Central-limit scaling over M independent copies.
  Real m_copies_snr(unsigned long long m) const { return snr * static_cast<Real>(m); }
};

/// Target-absent state: the idler marginal of `source` next to a thermal mode
/// of occupation n_ch.
TwoModeState qi_null_hypothesis(const TwoModeState& source, Real n_ch);

/// SNR = 4 gap^2 / (sqrt(noise_h1) + sqrt(noise_h0))^2 from the two hypotheses.
SnrResult qi_intensity_moments(const TwoModeState& h1, const TwoModeState& h0);

// Entanglement-based QKD -----------------------------------------------------

struct CorrelationResult {
  Real rho = 0;
  Real numerator = 0;  // <dx_I dx_R>
  Real var_i = 0;
  Real var_r = 0;
};

/// Pearson correlation of x_I and x_R read from the CM.
CorrelationResult qkd_rho_from_cm(const TwoModeState& s);

/// sqrt(eta) sinh 2r / sqrt(cosh 2r [eta cosh 2r + (1 - eta)]), TMSTS with n_th = n_ch.
Real qkd_rho_closed_thermal(Real r, Real eta);

/// sqrt(eta) sinh 2r / sqrt(eta cosh 2r + (1 - eta)(1 + 2 n_ch)), evaluated
/// literally for the TMSVS. Can exceed 1; compare with qkd_rho_from_cm.
Real qkd_rho_closed_vacuum(Real r, Real eta, Real n_ch);

}  // namespace cvwork
