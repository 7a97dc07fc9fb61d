#pragma once

#include <cmath>
#include <random>

#include "cvwork/convention.hpp"

namespace cvwork::test {

inline bool close_rel(Real got, Real want, Real rel) {
  return std::abs(got - want) <= rel * std::max<Real>(std::abs(want), std::numeric_limits<Real>::min());
}

inline bool close_abs(Real got, Real want, Real tol) { return std::abs(got - want) <= tol; }

/// Hand-rolled parameter generator for property tests.
struct Draws {
  explicit Draws(std::uint64_t seed) : gen(seed) {}

  Real uniform(Real lo, Real hi) { return std::uniform_real_distribution<double>(static_cast<double>(lo), static_cast<double>(hi))(gen); }

  std::mt19937_64 gen;
};

}  // namespace cvwork::test
