#pragma once

#include <Eigen/Core>

namespace cvwork {

// Extended precision: highly squeezed states (r ~ 5) carry CM entries of order
// e^{2r} while their symplectic spectrum must be resolved to ~1e-9.
using Real = long double;

using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Matrix2 = Eigen::Matrix<Real, 2, 2>;
using Vector2 = Eigen::Matrix<Real, 2, 1>;

/// Quadrature convention shared by every module: ordering (x1, p1, x2, p2, ...),
/// vacuum variance 1/2 ([x, p] = i), entropies in nats, work in units of k_B T.
namespace convention {

inline constexpr Real kVacuumVariance = 0.5L;

/// Slack on the bound nu >= 1/2.
inline constexpr Real kPhysicalTolerance = 1e-9L;

/// Relative asymmetry accepted in a covariance matrix.
inline constexpr Real kSymmetryTolerance = 1e-12L;

constexpr int x_index(int mode) { return 2 * mode; }
constexpr int p_index(int mode) { return 2 * mode + 1; }

}  // namespace convention

/// CODATA 2018 exact / recommended values, SI units.
namespace constants {

inline constexpr Real kHbar = 1.054571817e-34L;      // J s
inline constexpr Real kBoltzmann = 1.380649e-23L;    // J / K
inline constexpr Real kPi = 3.141592653589793238462643383279502884L;

}  // namespace constants

}  // namespace cvwork
