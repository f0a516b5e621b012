#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "leakycav/common.hpp"

namespace leakycav {

// Static double cavity: ideal wall at a0, delta-mirror of strength gamma at b,
// ideal wall at c.  k_perp is the fixed transverse wavenumber of the separated
// 3-D problem (one transverse mode per scenario).  The gamma -> infinity limit
// is represented by the `ideal` flag, never by a huge finite gamma, so limit
// checks stay free of catastrophic cancellation.
struct CavityGeometry {
  double a0 = 0.0;
  double b = 1.0;
  double c = 2.0;
  double gamma = 1.0;   // ignored when ideal
  bool ideal = false;
  double k_perp = 0.0;

  double d_left() const { return b - a0; }
  double d_right() const { return c - b; }

  void validate() const {
    if (!(a0 < b && b < c)) {
      throw ValidationError(
          "spectral: geometry requires a0 < b < c (got a0=" +
          std::to_string(a0) + ", b=" + std::to_string(b) +
          ", c=" + std::to_string(c) + ")");
    }
    if (!ideal && !(gamma > 0.0 && std::isfinite(gamma))) {
      throw ValidationError(
          "spectral: mirror strength gamma must be positive and finite "
          "(use the ideal flag for the perfect-mirror limit)");
    }
    if (!(k_perp >= 0.0) || !std::isfinite(k_perp)) {
      throw ValidationError("spectral: k_perp must be finite and >= 0");
    }
  }
};

// Scattering figures of merit of the delta-mirror at frequency omega.
struct MirrorProperties {
  std::complex<double> transmission;  // T = omega / (omega + i*gamma)
  std::complex<double> reflection;    // R = -i*gamma / (omega + i*gamma)
  double quality;                     // Q = 2*pi * (1 + (gamma/omega)^2)
};

inline MirrorProperties mirror_properties(double gamma, double omega) {
  if (!(gamma >= 0.0)) {
    throw ValidationError("spectral: mirror_properties requires gamma >= 0");
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw ValidationError("spectral: mirror_properties requires omega > 0");
  }
  MirrorProperties mp;
  if (std::isinf(gamma)) {
    mp.transmission = {0.0, 0.0};
    mp.reflection = {-1.0, 0.0};
    mp.quality = constants::infinity;
    return mp;
  }
  const std::complex<double> denom(omega, gamma);
  mp.transmission = omega / denom;
  mp.reflection = std::complex<double>(0.0, -gamma) / denom;
  const double ratio = gamma / omega;
  mp.quality = 2.0 * constants::pi * (1.0 + ratio * ratio);
  return mp;
}

}  // namespace leakycav
