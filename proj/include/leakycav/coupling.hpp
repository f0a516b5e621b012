#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leakycav/common.hpp"
#include "leakycav/geometry.hpp"
#include "leakycav/spectral.hpp"

namespace leakycav::coupling {

// Harmonic boundary drive a(t) = a0 + epsilon*(b - a0)*sin(omega_drive * t)
// acting for t in [0, duration].  All quantities in natural units (lengths in
// meters, frequencies in 1/m, duration in meters).
struct DriveSpec {
  double epsilon = 0.0;
  double omega_drive = 0.0;
  double duration = 0.0;

  // Diagnostic only (large values justify time-averaging); never enforced.
  double omega_T() const { return omega_drive * duration; }

  void validate() const {
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
      throw ValidationError(
          "coupling: drive amplitude epsilon must satisfy 0 <= epsilon < 1");
    }
    if (!(omega_drive > 0.0) || !std::isfinite(omega_drive)) {
      throw ValidationError("coupling: omega_drive must be positive");
    }
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
      throw ValidationError("coupling: duration must be >= 0");
    }
  }
};

// d/da of a mode's defining data when the left wall at a moves (b, c, gamma
// fixed), evaluated at the rest position a = a0.  Computed analytically via
// implicit differentiation of the eigenfrequency condition; finite
// differences exist only as a test oracle.
struct ModeDerivative {
  double domega_da = 0.0;
  double damp_left_da = 0.0;
  double damp_right_da = 0.0;
};

namespace detail {

// Cheap membership guard: a mode built from a different geometry generically
// violates the continuity condition at the mirror.
inline void require_same_geometry(const CavityGeometry& geom,
                                  const spectral::Mode& m,
                                  const char* op_name) {
  const double left = m.amp_left * std::sin(m.omega_x * geom.d_left());
  const double right = m.amp_right * std::sin(m.omega_x * geom.d_right());
  const double scale =
      std::max({std::abs(m.amp_left), std::abs(m.amp_right), 1e-300});
  if (std::abs(left - right) > 1e-6 * scale) {
    throw ValidationError(std::string("coupling: ") + op_name +
                          " received a mode that does not satisfy this "
                          "geometry's matching conditions");
  }
}

// int_0^d sin(p*u) sin(q*u) du
inline double overlap_ss(double p, double q, double d) {
  return 0.5 * (leakycav::detail::sin_over_k(p - q, d) -
                leakycav::detail::sin_over_k(p + q, d));
}

// int_0^d u cos(p*u) sin(q*u) du
inline double overlap_ucs(double p, double q, double d) {
  return 0.5 * (leakycav::detail::int_u_sin(q + p, d) +
                leakycav::detail::int_u_sin(q - p, d));
}

// int_0^d cos(p*u) sin(q*u) du
inline double overlap_cs(double p, double q, double d) {
  return 0.5 * (leakycav::detail::one_minus_cos_over_k(q + p, d) +
                leakycav::detail::one_minus_cos_over_k(q - p, d));
}

}  // namespace detail

inline ModeDerivative mode_derivative(const CavityGeometry& geom,
                                      const spectral::Mode& m) {
  geom.validate();
  detail::require_same_geometry(geom, m, "mode_derivative");
  const double w = m.omega_x;
  const double d1 = geom.d_left();
  const double d2 = geom.d_right();
  ModeDerivative out;

  switch (m.kind) {
    case spectral::RootKind::IdealRight:
      return out;  // right modes never feel the left wall in the ideal limit
    case spectral::RootKind::IdealLeft: {
      out.domega_da = w / d1;
      out.damp_left_da = m.amp_left / (2.0 * d1);
      return out;
    }
    case spectral::RootKind::Node: {
      // A node mode lives at a coincident pole pair of the secular function.
      // Moving the wall splits the coincidence and the mode continues as the
      // root pinched between the split poles; where the root sits inside the
      // pinch depends on gamma, so the amplitude response carries O(gamma)
      // terms on top of the full-box ones.  Exact forms follow from
      // differentiating the continuity, jump, and normalization conditions
      // along that family (the frequency root is simple for the *analytic*
      // secular function sin(w*span) + (2*gamma/w) sin(w*d1) sin(w*d2), so
      // implicit differentiation is legitimate even at the coincidence).
      const double span = geom.c - geom.a0;
      const double g2 = 2.0 * geom.gamma;
      out.domega_da = w / span;
      out.damp_left_da =
          m.amp_left * (0.5 / span + g2 * d2 * d2 / (span * span));
      out.damp_right_da =
          m.amp_right * (0.5 / span - g2 * d1 * d2 / (span * span));
      return out;
    }
    case spectral::RootKind::Transcendental:
      break;
  }

  const double sl = std::sin(w * d1);
  const double cl = std::cos(w * d1);
  const double sr = std::sin(w * d2);
  const double cr = std::cos(w * d2);

  // Implicit differentiation of cot(w*d1) + cot(w*d2) + 2*gamma/w = 0 under
  // d1 = b - a.
  const double f_omega = -d1 / (sl * sl) - d2 / (sr * sr) -
                         2.0 * geom.gamma / (w * w);
  const double f_a = w / (sl * sl);
  const double wdot = -f_a / f_omega;

  // Unnormalized amplitudes L_u = sin(w*d2), R_u = sin(w*d1) and their
  // a-derivatives (d2 fixed; d1 carries -1).
  const double lu = sr;
  const double ru = sl;
  const double lu_dot = cr * d2 * wdot;
  const double ru_dot = cl * (wdot * d1 - w);

  const double il = 0.5 * d1 - std::sin(2.0 * w * d1) / (4.0 * w);
  const double ir = 0.5 * d2 - std::sin(2.0 * w * d2) / (4.0 * w);
  const double il_dot =
      -sl * sl +
      wdot * (std::sin(2.0 * w * d1) - 2.0 * w * d1 * std::cos(2.0 * w * d1)) /
          (4.0 * w * w);
  const double ir_dot =
      wdot * (std::sin(2.0 * w * d2) - 2.0 * w * d2 * std::cos(2.0 * w * d2)) /
      (4.0 * w * w);

  const double s = lu * lu * il + ru * ru * ir;
  const double s_dot = 2.0 * lu * lu_dot * il + lu * lu * il_dot +
                       2.0 * ru * ru_dot * ir + ru * ru * ir_dot;
  const double norm = 1.0 / std::sqrt(s);
  const double norm_dot = -0.5 * s_dot / (s * std::sqrt(s));

  // build_mode flips both amplitudes to make amp_left >= 0; the flip is
  // locally constant in a, so it rides through the derivative.
  const double sign = (lu < 0.0) ? -1.0 : 1.0;
  out.domega_da = wdot;
  out.damp_left_da = sign * (norm_dot * lu + norm * lu_dot);
  out.damp_right_da = sign * (norm_dot * ru + norm * ru_dot);
  return out;
}

// Geometrical velocity-coupling factor m_{mu,nu} = int (df_mu/da) f_nu dx
// over [a0, c], in closed form (piecewise trigonometric integrals).
// Antisymmetric: orthonormality of the mode family under the moving wall.
inline double geometry_factor(const CavityGeometry& geom,
                              const spectral::Mode& mu,
                              const spectral::Mode& nu) {
  geom.validate();
  detail::require_same_geometry(geom, mu, "geometry_factor");
  detail::require_same_geometry(geom, nu, "geometry_factor");
  const ModeDerivative dmu = mode_derivative(geom, mu);
  const double d1 = geom.d_left();
  const double d2 = geom.d_right();
  const double p = mu.omega_x;
  const double q = nu.omega_x;

  // Left piece: d/da [L sin(w(x-a))] = Ldot sin(w(x-a))
  //                                    + L cos(w(x-a)) (wdot (x-a) - w).
  const double left =
      dmu.damp_left_da * nu.amp_left * detail::overlap_ss(p, q, d1) +
      mu.amp_left * nu.amp_left *
          (dmu.domega_da * detail::overlap_ucs(p, q, d1) -
           p * detail::overlap_cs(p, q, d1));
  // Right piece: the phase w(c-x) has no explicit a-dependence.
  const double right =
      dmu.damp_right_da * nu.amp_right * detail::overlap_ss(p, q, d2) +
      mu.amp_right * nu.amp_right * dmu.domega_da *
          detail::overlap_ucs(p, q, d2);
  return left + right;
}

enum class Branch { Difference, Sum };

struct ResonantPartner {
  spectral::Mode mode;
  Branch branch = Branch::Difference;
  double rel_detuning = 0.0;
  bool ambiguous = false;  // more than one candidate inside tol
};

// Scan a spectrum for the RightDominated mode best matching the velocity
// resonance omega_drive = |Omega_L^0 +- Omega_nu^0|.  LeftDominated modes
// generically miss the condition (non-equidistant spectrum) and are skipped;
// the mode itself is excluded (no velocity self-coupling: m_{mu,mu} = 0).
inline std::optional<ResonantPartner> find_resonant_partner(
    const std::vector<spectral::Mode>& spectrum, const spectral::Mode& mode_L,
    double omega_drive, double tol = 1e-6) {
  if (!(omega_drive > 0.0) || !std::isfinite(omega_drive)) {
    throw ValidationError("coupling: omega_drive must be positive");
  }
  if (!(tol > 0.0)) {
    throw ValidationError("coupling: partner tolerance must be positive");
  }
  std::optional<ResonantPartner> best;
  int within_tol = 0;
  for (const spectral::Mode& nu : spectrum) {
    if (nu.dominance != spectral::Dominance::RightDominated) continue;
    const bool same_mode =
        (nu.index >= 0 && mode_L.index >= 0)
            ? (nu.index == mode_L.index)
            : (nu.omega_x == mode_L.omega_x && nu.kind == mode_L.kind);
    if (same_mode) continue;
    const double det_diff =
        std::abs(std::abs(mode_L.omega0 - nu.omega0) - omega_drive) /
        omega_drive;
    const double det_sum =
        std::abs(mode_L.omega0 + nu.omega0 - omega_drive) / omega_drive;
    const Branch branch =
        (det_diff <= det_sum) ? Branch::Difference : Branch::Sum;
    const double det = std::min(det_diff, det_sum);
    if (det < tol) ++within_tol;
    if (!best || det < best->rel_detuning) {
      best = ResonantPartner{nu, branch, det, false};
    }
  }
  if (!best || !(best->rel_detuning < tol)) {
    return std::nullopt;
  }
  best->ambiguous = within_tol > 1;
  return best;
}

// RWA parameters of the resonantly driven pair.
struct EffectiveParams {
  double xi = 0.0;   // squeezing parameter, >= 0 by convention
  double chi = 0.0;  // velocity parameter, carries the sign of m_LR
  double omega_drive = 0.0;
  std::optional<spectral::Mode> mode_L;
  std::optional<spectral::Mode> mode_R;
};

inline EffectiveParams effective_params(
    const CavityGeometry& geom, const DriveSpec& drive,
    const spectral::Mode& mode_L,
    const std::optional<spectral::Mode>& mode_R) {
  geom.validate();
  drive.validate();
  const double resonant = 2.0 * mode_L.omega0;
  const double detuning = std::abs(drive.omega_drive - resonant) / resonant;
  if (!(detuning <= 1e-9)) {
    throw ValidationError(
        "coupling: effective_params models exact resonance only; drive is "
        "detuned by relative " +
        std::to_string(detuning) +
        " from 2*Omega_L0 (detuned runs belong to the oracle engine)");
  }
  EffectiveParams p;
  p.omega_drive = drive.omega_drive;
  p.mode_L = mode_L;
  p.mode_R = mode_R;
  p.xi = drive.epsilon * mode_L.omega_x * mode_L.omega_x / (4.0 * mode_L.omega0);
  if (mode_R) {
    const double m_lr = geometry_factor(geom, mode_L, *mode_R);
    const double ratio =
        std::sqrt(mode_R->omega0 / mode_L.omega0) +
        std::sqrt(mode_L.omega0 / mode_R->omega0);
    p.chi = drive.epsilon * mode_L.omega0 * ratio * m_lr * geom.d_left() / 4.0;
  }
  return p;
}

// Assembled drive coefficients for a selected mode set: the full m-matrix,
// the squeezing amplitudes 2*eps*(Omega_mu^x)^2, and (if present within tol)
// the indices of the resonant (L, R) pair within `modes`.
struct CouplingData {
  Eigen::MatrixXd m_geom;
  Eigen::VectorXd delta_omega2_amp;
  std::optional<std::pair<int, int>> resonant_pair;
};

inline CouplingData coupling_data(const CavityGeometry& geom,
                                  const DriveSpec& drive,
                                  const std::vector<spectral::Mode>& modes,
                                  double partner_tol = 1e-6) {
  geom.validate();
  drive.validate();
  const int n = static_cast<int>(modes.size());
  CouplingData data;
  data.m_geom.resize(n, n);
  data.delta_omega2_amp.resize(n);
  for (int i = 0; i < n; ++i) {
    data.delta_omega2_amp(i) =
        2.0 * drive.epsilon * modes[i].omega_x * modes[i].omega_x;
    for (int j = 0; j < n; ++j) {
      data.m_geom(i, j) = geometry_factor(geom, modes[i], modes[j]);
    }
  }
  // Lowest left-dominated member is the driven mode.
  int l_pos = -1;
  for (int i = 0; i < n; ++i) {
    if (modes[i].dominance == spectral::Dominance::LeftDominated) {
      l_pos = i;
      break;
    }
  }
  if (l_pos >= 0) {
    const auto partner = find_resonant_partner(modes, modes[l_pos],
                                               drive.omega_drive, partner_tol);
    if (partner) {
      for (int i = 0; i < n; ++i) {
        if (modes[i].index == partner->mode.index &&
            modes[i].omega_x == partner->mode.omega_x) {
          data.resonant_pair = std::make_pair(l_pos, i);
          break;
        }
      }
    }
  }
  return data;
}

}  // namespace leakycav::coupling
