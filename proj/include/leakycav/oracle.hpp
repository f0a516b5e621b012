#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "leakycav/common.hpp"
#include "leakycav/coupling.hpp"
#include "leakycav/rwa.hpp"
#include "leakycav/spectral.hpp"

namespace leakycav::oracle {

// Quadratic time-dependent Hamiltonian
//   H(t) = 1/2 sum_mu [P_mu^2 + W_mu(t) Q_mu^2] - sum_{mu,nu} M_{mu,nu}(t) P_mu Q_nu
// specified by its coefficient callbacks.  omega_max sets the stiffness
// scale used by the default integrator step.
struct CoefficientSet {
  int n_modes = 0;
  std::vector<double> omega0;                       // rest frequencies
  std::function<Eigen::VectorXd(double)> omega2;    // W_mu(t)
  std::function<Eigen::MatrixXd(double)> velocity;  // M_{mu,nu}(t)
  double omega_max = 0.0;
};

// Coefficients of the harmonically driven cavity truncated to `modes`:
//   W_mu(t)    = (Omega_mu^0)^2 + 2 eps (Omega_mu^x)^2 sin(omega t)
//   M_munu(t)  = m_munu * eps (b - a0) omega cos(omega t)
// No rotating-wave step is taken anywhere here; this is the reference
// dynamics the two-mode model is judged against.
inline CoefficientSet assemble_time_dependent_hamiltonian(
    const CavityGeometry& geom, const coupling::DriveSpec& drive,
    const std::vector<spectral::Mode>& modes) {
  geom.validate();
  drive.validate();
  if (modes.size() < 2) {
    throw ValidationError(
        "oracle: the time-dependent Hamiltonian needs at least two modes "
        "(mode mixing has nowhere to go otherwise)");
  }
  const int n = static_cast<int>(modes.size());
  const coupling::CouplingData data = coupling::coupling_data(
      geom, drive, modes, /*partner_tol=*/1.0);  // pair index unused here

  Eigen::VectorXd w0sq(n);
  for (int i = 0; i < n; ++i) w0sq(i) = modes[i].omega0 * modes[i].omega0;
  const Eigen::VectorXd amp = data.delta_omega2_amp;
  const Eigen::MatrixXd mvel =
      data.m_geom * (drive.epsilon * geom.d_left() * drive.omega_drive);
  const double omega = drive.omega_drive;

  CoefficientSet cs;
  cs.n_modes = n;
  cs.omega0.resize(n);
  for (int i = 0; i < n; ++i) cs.omega0[i] = modes[i].omega0;
  cs.omega2 = [w0sq, amp, omega](double t) -> Eigen::VectorXd {
    return w0sq + amp * std::sin(omega * t);
  };
  cs.velocity = [mvel, omega](double t) -> Eigen::MatrixXd {
    return mvel * std::cos(omega * t);
  };
  cs.omega_max = omega;
  for (int i = 0; i < n; ++i) cs.omega_max = std::max(cs.omega_max, cs.omega0[i]);
  return cs;
}

// Classical transfer matrix Phi(T) on the phase-space vector
// (Q_1..Q_N, P_1..P_N): z(T) = Phi z(0).
struct TransferState {
  int n_modes = 0;
  Eigen::MatrixXd transfer;
  double time = 0.0;
  double symplectic_defect = 0.0;
  long steps = 0;
};

namespace detail {

inline Eigen::MatrixXd hamiltonian_flow(const CoefficientSet& cs, double t) {
  const int n = cs.n_modes;
  const Eigen::VectorXd w2 = cs.omega2(t);
  const Eigen::MatrixXd m = cs.velocity(t);
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  k.topLeftCorner(n, n) = m;
  k.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  k.bottomLeftCorner(n, n) = (-w2).asDiagonal();
  k.bottomRightCorner(n, n) = -m.transpose();
  return k;
}

// || Phi^T J Phi - J ||_max scaled by the square of the matrix magnitude,
// so exponentially grown transfers are judged on relative grounds.
inline double scaled_symplectic_defect(const Eigen::MatrixXd& phi) {
  const int n2 = static_cast<int>(phi.rows());
  const int n = n2 / 2;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n2, n2);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  const double raw = (phi.transpose() * j * phi - j).cwiseAbs().maxCoeff();
  const double mag = phi.cwiseAbs().maxCoeff();
  return raw / std::max(1.0, mag * mag);
}

}  // namespace detail

// Fixed-step RK4 for Phi' = K(t) Phi, Phi(0) = I.  `step` = 0 picks a step
// from the stiffness scale and an error budget of ~1e-9; an explicit step
// must resolve the fastest phase (at most (2*pi/omega_max)/40).
inline TransferState integrate_transfer(const CoefficientSet& cs,
                                        double duration, double step = 0.0) {
  if (cs.n_modes < 1 || !cs.omega2 || !cs.velocity) {
    throw ValidationError("oracle: coefficient set is incomplete");
  }
  if (!(cs.omega_max > 0.0) || !std::isfinite(cs.omega_max)) {
    throw ValidationError("oracle: omega_max must be positive");
  }
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw ValidationError("oracle: duration must be finite and >= 0");
  }
  const int n2 = 2 * cs.n_modes;
  TransferState ts;
  ts.n_modes = cs.n_modes;
  ts.time = duration;
  ts.transfer = Eigen::MatrixXd::Identity(n2, n2);
  if (duration == 0.0) return ts;

  long nsteps = 0;
  if (step == 0.0) {
    const double phase = duration * cs.omega_max;
    const double y = std::min(2.0 * pi / 40.0,
                              std::pow(72.0 * 1e-9 / phase, 0.2));
    nsteps = static_cast<long>(std::ceil(phase / y));
  } else {
    if (!(step > 0.0) || !std::isfinite(step)) {
      throw ValidationError("oracle: step must be positive");
    }
    const double bound = (2.0 * pi / cs.omega_max) / 40.0;
    if (step > bound * (1.0 + 1e-12)) {
      throw ValidationError(
          "oracle: step does not resolve the fastest mode; need step <= "
          "(2*pi/omega_max)/40 = " +
          std::to_string(bound));
    }
    nsteps = static_cast<long>(std::ceil(duration / step));
  }
  if (nsteps < 1) nsteps = 1;
  const double h = duration / static_cast<double>(nsteps);

  Eigen::MatrixXd phi = Eigen::MatrixXd::Identity(n2, n2);
  Eigen::MatrixXd k1(n2, n2), k2(n2, n2), k3(n2, n2), k4(n2, n2);
  for (long i = 0; i < nsteps; ++i) {
    const double t = h * static_cast<double>(i);
    const Eigen::MatrixXd ka = detail::hamiltonian_flow(cs, t);
    const Eigen::MatrixXd kb = detail::hamiltonian_flow(cs, t + 0.5 * h);
    const Eigen::MatrixXd kc = detail::hamiltonian_flow(cs, t + h);
    k1.noalias() = ka * phi;
    k2.noalias() = kb * (phi + 0.5 * h * k1);
    k3.noalias() = kb * (phi + 0.5 * h * k2);
    k4.noalias() = kc * (phi + h * k3);
    phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  ts.transfer = phi;
  ts.steps = nsteps;
  ts.symplectic_defect = detail::scaled_symplectic_defect(phi);
  if (!(ts.symplectic_defect <= 1e-6)) {
    throw NumericalError(
        "oracle: integrated transfer lost symplecticity (scaled defect " +
        std::to_string(ts.symplectic_defect) +
        "); reduce the step or the duration");
  }
  return ts;
}

// Mode occupations after the evolution, from the Bogoliubov coefficients of
// the transfer matrix:
//   N_mu = sum_nu |beta_munu|^2 (1 + n0_nu) + |alpha_munu|^2 n0_nu .
inline Eigen::VectorXd particle_numbers(const TransferState& ts,
                                        const std::vector<double>& omega0,
                                        const std::vector<double>& occupations) {
  const int n = ts.n_modes;
  if (static_cast<int>(omega0.size()) != n ||
      static_cast<int>(occupations.size()) != n) {
    throw ValidationError(
        "oracle: particle_numbers size mismatch between transfer state, "
        "frequencies, and occupations");
  }
  if (ts.transfer.rows() != 2 * n || ts.transfer.cols() != 2 * n) {
    throw ValidationError("oracle: transfer matrix must be 2N x 2N");
  }
  for (int i = 0; i < n; ++i) {
    if (!(omega0[i] > 0.0)) {
      throw ValidationError("oracle: rest frequencies must be positive");
    }
    if (!(occupations[i] >= 0.0)) {
      throw ValidationError("oracle: occupations must be >= 0");
    }
  }
  const double defect = detail::scaled_symplectic_defect(ts.transfer);
  if (!(defect <= 1e-6)) {
    throw NumericalError(
        "oracle: refusing particle numbers from a non-symplectic transfer "
        "(scaled defect " +
        std::to_string(defect) + ")");
  }

  const auto& phi = ts.transfer;
  Eigen::VectorXd num(n);
  for (int mu = 0; mu < n; ++mu) {
    double total = 0.0;
    for (int nu = 0; nu < n; ++nu) {
      const double qq = phi(mu, nu);
      const double qp = phi(mu, n + nu);
      const double pq = phi(n + mu, nu);
      const double pp = phi(n + mu, n + nu);
      const double wm = omega0[mu];
      const double wn = omega0[nu];
      const double scale = 2.0 * std::sqrt(wm * wn);
      const std::complex<double> alpha(wm * qq + wn * pp,
                                       pq - wm * wn * qp);
      const std::complex<double> beta(wm * qq - wn * pp,
                                      pq + wm * wn * qp);
      total += std::norm(beta) / (scale * scale) * (1.0 + occupations[nu]) +
               std::norm(alpha) / (scale * scale) * occupations[nu];
    }
    num(mu) = total;
  }
  return num;
}

inline Eigen::VectorXd particle_numbers(const TransferState& ts,
                                        const std::vector<spectral::Mode>& modes,
                                        const rwa::ThermalState& state) {
  state.validate();
  std::vector<double> w0(modes.size()), n0(modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    w0[i] = modes[i].omega0;
    n0[i] = rwa::ThermalState::occupation(state.beta, modes[i].omega0);
  }
  return particle_numbers(ts, w0, n0);
}

}  // namespace leakycav::oracle
