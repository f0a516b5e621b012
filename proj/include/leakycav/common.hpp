#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace leakycav {

// Error taxonomy, aligned with the CLI exit codes (1, 2, 3).  Messages are
// prefixed with the originating module ("spectral: ...", "cli: ...").
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double infinity = std::numeric_limits<double>::infinity();

// Exact SI values (2019 redefinition).  Internally the library works in
// natural units hbar = c = k_B = 1 with lengths in meters; these constants
// convert human-facing inputs (seconds, kelvin, GHz).
inline constexpr double speed_of_light_m_per_s = 299792458.0;
inline constexpr double hbar_J_s = 1.054571817e-34;
inline constexpr double boltzmann_J_per_K = 1.380649e-23;

// beta[m] = hbar*c / (k_B * T[K])  ->  beta_m_kelvin / T[K]
inline constexpr double beta_m_kelvin =
    hbar_J_s * speed_of_light_m_per_s / boltzmann_J_per_K;

}  // namespace constants

// The constants are used everywhere; expose them at namespace scope too.
using constants::beta_m_kelvin;
using constants::boltzmann_J_per_K;
using constants::hbar_J_s;
using constants::infinity;
using constants::pi;
using constants::speed_of_light_m_per_s;

namespace detail {

// sin(k*d)/k, stable as k -> 0.
inline double sin_over_k(double k, double d) {
  const double kd = k * d;
  if (std::abs(kd) < 1e-6) {
    return d * (1.0 - kd * kd / 6.0);
  }
  return std::sin(kd) / k;
}

// (1 - cos(k*d))/k, stable as k -> 0.
inline double one_minus_cos_over_k(double k, double d) {
  const double kd = k * d;
  if (std::abs(kd) < 1e-6) {
    return k * d * d * 0.5 * (1.0 - kd * kd / 12.0);
  }
  return (1.0 - std::cos(kd)) / k;
}

// int_0^d u*sin(k*u) du = (sin(kd) - kd*cos(kd)) / k^2, stable as k -> 0.
inline double int_u_sin(double k, double d) {
  const double kd = k * d;
  if (std::abs(kd) < 1e-6) {
    return k * d * d * d / 3.0 * (1.0 - kd * kd / 10.0);
  }
  return (std::sin(kd) - kd * std::cos(kd)) / (k * k);
}

}  // namespace detail
}  // namespace leakycav
