#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <complex>
#include <optional>

#include "leakycav/common.hpp"
#include "leakycav/coupling.hpp"

namespace leakycav::rwa {

// Initial occupations of the resonant pair.  beta is an inverse temperature
// in meters (natural units); +infinity means vacuum.
struct ThermalState {
  double beta = infinity;
  double n0_L = 0.0;
  double n0_R = 0.0;

  static double occupation(double beta, double omega) {
    if (!(beta > 0.0)) {
      throw ValidationError("rwa: inverse temperature beta must be positive");
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
      throw ValidationError("rwa: occupation requires a positive frequency");
    }
    if (std::isinf(beta)) return 0.0;
    const double x = beta * omega;
    if (x > 700.0) return 0.0;  // below double resolution anyway
    return 1.0 / std::expm1(x);
  }

  static ThermalState vacuum() { return ThermalState{}; }

  static ThermalState thermal(double beta, double omega_L0, double omega_R0) {
    ThermalState st;
    st.beta = beta;
    st.n0_L = occupation(beta, omega_L0);
    st.n0_R = occupation(beta, omega_R0);
    return st;
  }

  void validate() const {
    if (!(beta > 0.0)) {
      throw ValidationError("rwa: inverse temperature beta must be positive");
    }
    if (!(n0_L >= 0.0) || !(n0_R >= 0.0)) {
      throw ValidationError("rwa: occupations must be >= 0");
    }
  }
};

enum class Regime { Growth, Oscillation, Threshold };

inline Regime classify_regime(double xi, double chi) {
  const double mag = std::abs(chi);
  const double scale = std::max(xi, mag);
  if (scale == 0.0) return Regime::Threshold;
  if (std::abs(xi - mag) <= 1e-12 * scale) return Regime::Threshold;
  return (xi > mag) ? Regime::Growth : Regime::Oscillation;
}

// Rotating-frame equations of motion for the quadrature pairs
// (x_L, y_L, x_R, y_R): dv/dt = A v.  Eigenvalues are known in closed form:
// {+xi +- s, -xi +- s} with s = sqrt(xi^2 - chi^2); the matrix is defective
// exactly at |chi| = xi, so consumers must not eigendecompose blindly.
struct EvolutionMatrix {
  Eigen::Matrix4d generator;
  std::array<std::complex<double>, 4> eigenvalues;
  double xi = 0.0;
  double chi = 0.0;
};

inline EvolutionMatrix build_generator(const coupling::EffectiveParams& p) {
  if (!(p.xi >= 0.0) || !std::isfinite(p.xi)) {
    throw ValidationError("rwa: xi must be finite and >= 0");
  }
  if (!std::isfinite(p.chi)) {
    throw ValidationError("rwa: chi must be finite");
  }
  EvolutionMatrix ev;
  ev.xi = p.xi;
  ev.chi = p.chi;
  const double xi = p.xi;
  const double chi = p.chi;
  ev.generator << 0.0, 2.0 * xi, chi, 0.0,
                  2.0 * xi, 0.0, 0.0, chi,
                  -chi, 0.0, 0.0, 0.0,
                  0.0, -chi, 0.0, 0.0;
  const std::complex<double> s =
      std::sqrt(std::complex<double>(xi * xi - chi * chi, 0.0));
  ev.eigenvalues = {xi + s, xi - s, -xi + s, -xi - s};
  return ev;
}

// Direct propagator U = exp(A * duration).  Safe at the defective point
// (scaling-and-squaring Pade does not eigendecompose).  Overflows for
// xi*duration beyond ~350; long-time responses go through propagate_log.
inline Eigen::Matrix4d propagate(const EvolutionMatrix& ev, double duration) {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw ValidationError("rwa: duration must be finite and >= 0");
  }
  return (ev.generator * duration).exp();
}

// Propagator in scaled form: exp(A*T) = exp(log_scale) * unit, with unit
// kept at O(1) entries.  Exact-arithmetic identity; in floats the repeated
// squaring loses nothing that the direct exponential would have kept.
struct LogPropagator {
  Eigen::Matrix4d unit;
  double log_scale = 0.0;
};

inline LogPropagator propagate_log(const EvolutionMatrix& ev,
                                   double duration) {
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw ValidationError("rwa: duration must be finite and >= 0");
  }
  const double norm =
      (ev.generator * duration).cwiseAbs().rowwise().sum().maxCoeff();
  int k = 0;
  if (norm > 0.25) {
    k = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  }
  LogPropagator lp;
  lp.unit = (ev.generator * (duration / std::exp2(k))).exp();
  lp.log_scale = 0.0;
  for (int i = 0; i < k; ++i) {
    lp.unit = (lp.unit * lp.unit).eval();
    lp.log_scale *= 2.0;
    const double scale = lp.unit.cwiseAbs().maxCoeff();
    lp.unit /= scale;
    lp.log_scale += std::log(scale);
  }
  return lp;
}

struct ResponseResult {
  double n_L = 0.0;
  double n_R = 0.0;
  double ln1p_n_L = 0.0;  // log(1 + n); finite even when n overflows
  double ln1p_n_R = 0.0;
  double duration = 0.0;
  Regime regime = Regime::Threshold;
};

namespace detail {

// Evaluate one occupation from its scaled bilinear b * exp(2*log_scale).
inline void assign_occupation(double bilinear, double log_scale, double& n,
                              double& ln1p) {
  if (!(bilinear > 0.0)) {
    // Exact zeros and cancellation dust; occupations are non-negative.
    n = 0.0;
    ln1p = 0.0;
    return;
  }
  const double t = 2.0 * log_scale + std::log(bilinear);
  if (t < 700.0) {
    n = std::exp(t);
    ln1p = std::log1p(n);
  } else {
    n = infinity;
    ln1p = t;  // log(1+n) ~ log(n) to double precision out here
  }
}

}  // namespace detail

// Second-moment response of the pair after `duration` of resonant driving,
// starting from a thermal product state.  Uses the scaled propagator, so
// exponential growth far beyond double range still yields usable logs.
inline ResponseResult response(const EvolutionMatrix& ev, double duration,
                               const ThermalState& state) {
  state.validate();
  const LogPropagator lp = propagate_log(ev, duration);

  // <a_mu^dag a_nu>-ordered moment matrix of the quadrature pairs.
  Eigen::Matrix4d mom = Eigen::Matrix4d::Zero();
  mom(0, 1) = 1.0 + state.n0_L;
  mom(1, 0) = state.n0_L;
  mom(2, 3) = 1.0 + state.n0_R;
  mom(3, 2) = state.n0_R;

  const Eigen::Matrix4d b = lp.unit * mom * lp.unit.transpose();
  ResponseResult out;
  out.duration = duration;
  out.regime = classify_regime(ev.xi, ev.chi);
  detail::assign_occupation(b(1, 0), lp.log_scale, out.n_L, out.ln1p_n_L);
  detail::assign_occupation(b(3, 2), lp.log_scale, out.n_R, out.ln1p_n_R);
  return out;
}

}  // namespace leakycav::rwa
