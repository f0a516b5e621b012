#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "leakycav/common.hpp"
#include "leakycav/geometry.hpp"

namespace leakycav::spectral {

enum class Dominance { LeftDominated, RightDominated };

// How a root arises.  Transcendental roots solve the eigenfrequency equation
// strictly between cotangent poles.  Node roots sit exactly at a coincident
// pole pair (commensurate cavity lengths): the mode has a node at the mirror,
// satisfies the jump condition trivially, and is invisible to the
// transcendental equation — it must be inserted explicitly or the spectrum is
// incomplete.  Ideal* roots belong to the decoupled perfect-mirror limit.
enum class RootKind { Transcendental, Node, IdealLeft, IdealRight };

struct AxialRoot {
  double omega_x;
  RootKind kind;
};

// One normalized eigenmode:
//   f(x) = amp_left  * sin(omega_x * (x - a0))   on [a0, b]
//   f(x) = amp_right * sin(omega_x * (c - x))    on [b, c]
// with unit L2 norm on [a0, c].  Sign convention: amp_left >= 0 (the lowest
// mode of a RightDominated pair may then carry amp_right < 0).
struct Mode {
  int index = -1;  // position in the ascending spectrum; -1 if standalone
  double omega_x = 0.0;
  double omega0 = 0.0;  // sqrt(omega_x^2 + k_perp^2)
  double amp_left = 0.0;
  double amp_right = 0.0;
  Dominance dominance = Dominance::LeftDominated;
  double eta_mu = 0.0;  // omega_x / gamma (0 in the ideal limit)
  RootKind kind = RootKind::Transcendental;
};

namespace detail {

// Relative pole-gap thresholds.  Gaps at or below kMergeRel are exact
// commensurate coincidences (a shared pole hosting a node mode); gaps inside
// (kMergeRel, kRejectRel) are genuinely near-degenerate and make bracketed
// root finding ill-conditioned, so the geometry is rejected with a
// diagnostic.
inline constexpr double kMergeRel = 1e-12;
inline constexpr double kRejectRel = 1e-9;

// Left-hand side of the eigenfrequency condition,
//   g(w) = cot(w*d1) + cot(w*d2) + 2*gamma/w,
// strictly decreasing between consecutive poles of either cotangent.
inline double characteristic(const CavityGeometry& g, double w) {
  return std::cos(w * g.d_left()) / std::sin(w * g.d_left()) +
         std::cos(w * g.d_right()) / std::sin(w * g.d_right()) +
         2.0 * g.gamma / w;
}

inline double characteristic_slope(const CavityGeometry& g, double w) {
  const double sl = std::sin(w * g.d_left());
  const double sr = std::sin(w * g.d_right());
  return -g.d_left() / (sl * sl) - g.d_right() / (sr * sr) -
         2.0 * g.gamma / (w * w);
}

struct Pole {
  double omega;
  bool left;   // belongs to the {n*pi/d1} family
  bool right;  // belongs to the {m*pi/d2} family (both => coincident)
};

// Sorted union of the two cotangent pole families up to omega_max, with
// coincident poles merged and near-degenerate pairs rejected.
inline std::vector<Pole> pole_union(const CavityGeometry& g, double omega_max) {
  std::vector<Pole> poles;
  const double step_l = constants::pi / g.d_left();
  const double step_r = constants::pi / g.d_right();
  for (long n = 1; n * step_l <= omega_max; ++n) {
    poles.push_back({n * step_l, true, false});
  }
  for (long n = 1; n * step_r <= omega_max; ++n) {
    poles.push_back({n * step_r, false, true});
  }
  std::sort(poles.begin(), poles.end(),
            [](const Pole& x, const Pole& y) { return x.omega < y.omega; });
  std::vector<Pole> merged;
  for (const Pole& p : poles) {
    if (!merged.empty()) {
      const double gap = p.omega - merged.back().omega;
      const double scale = p.omega;
      if (gap <= kMergeRel * scale) {
        merged.back().left = merged.back().left || p.left;
        merged.back().right = merged.back().right || p.right;
        merged.back().omega = 0.5 * (merged.back().omega + p.omega);
        continue;
      }
      if (gap < kRejectRel * scale) {
        throw NumericalError(
            "spectral: near-degenerate cotangent poles at omega ~= " +
            std::to_string(p.omega) + " (relative gap " +
            std::to_string(gap / scale) +
            "); the spectrum is not well-separated for this geometry");
      }
    }
    merged.push_back(p);
  }
  return merged;
}

// One root of the characteristic function inside (lo, hi), where
// g(lo+) = +inf and g(hi-) = -inf and g is strictly decreasing.  Endpoint
// values are never evaluated; bisection uses only interior signs.
inline double bisect_root(const CavityGeometry& g, double lo, double hi) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval collapsed to ulp width
    if (characteristic(g, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if ((hi - lo) <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// All axial eigenfrequencies in (0, omega_max], ascending.  For finite gamma:
// exactly one transcendental root below the first pole and in each inter-pole
// interval, plus a node root at every coincident (merged) pole.  For the
// ideal flag: the poles themselves are the eigenfrequencies of the two
// decoupled cavities; a coincident pole yields one IdealLeft and one
// IdealRight entry (a true degenerate pair with disjoint supports).
inline std::vector<AxialRoot> eigenfrequency_roots(const CavityGeometry& geom,
                                                   double omega_max) {
  geom.validate();
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw ValidationError("spectral: omega_max must be positive and finite");
  }
  const std::vector<detail::Pole> poles = detail::pole_union(geom, omega_max);

  std::vector<AxialRoot> roots;
  if (geom.ideal) {
    for (const detail::Pole& p : poles) {
      if (p.left) roots.push_back({p.omega, RootKind::IdealLeft});
      if (p.right) roots.push_back({p.omega, RootKind::IdealRight});
    }
    return roots;
  }

  std::size_t expected = 0;
  double lo = 0.0;
  for (const detail::Pole& p : poles) {
    roots.push_back({detail::bisect_root(geom, lo, p.omega),
                     RootKind::Transcendental});
    ++expected;
    if (p.left && p.right) {
      roots.push_back({p.omega, RootKind::Node});
      ++expected;
    }
    lo = p.omega;
  }
  // Partial trailing interval (last pole, omega_max]: contains the next root
  // only if the characteristic has already turned negative at omega_max.
  if (!poles.empty() && detail::characteristic(geom, omega_max) < 0.0) {
    roots.push_back({detail::bisect_root(geom, poles.back().omega, omega_max),
                     RootKind::Transcendental});
    ++expected;
  }
  if (poles.empty()) {
    // No pole below omega_max: g(w) = +inf at 0+ and stays positive on a
    // pole-free stretch only if it never crosses; check the endpoint.
    if (detail::characteristic(geom, omega_max) < 0.0) {
      roots.push_back(
          {detail::bisect_root(geom, 0.0, omega_max), RootKind::Transcendental});
      ++expected;
    }
  }

  if (roots.size() != expected ||
      !std::is_sorted(roots.begin(), roots.end(),
                      [](const AxialRoot& x, const AxialRoot& y) {
                        return x.omega_x < y.omega_x;
                      })) {
    throw NumericalError(
        "spectral: root bracketing failed the pole-count cross-check");
  }
  return roots;
}

namespace detail {

// int_0^d sin^2(w*u) du, closed form.
inline double half_interval_norm(double w, double d) {
  return 0.5 * d - std::sin(2.0 * w * d) / (4.0 * w);
}

inline Mode finish_mode(const CavityGeometry& geom, double omega_x,
                        RootKind kind, double amp_left_raw,
                        double amp_right_raw) {
  const double il = half_interval_norm(omega_x, geom.d_left());
  const double ir = half_interval_norm(omega_x, geom.d_right());
  const double weight_left = amp_left_raw * amp_left_raw * il;
  const double weight_right = amp_right_raw * amp_right_raw * ir;
  const double norm = 1.0 / std::sqrt(weight_left + weight_right);

  Mode m;
  m.omega_x = omega_x;
  m.omega0 = std::hypot(omega_x, geom.k_perp);
  m.kind = kind;
  m.eta_mu = geom.ideal ? 0.0 : omega_x / geom.gamma;
  const double sign = (amp_left_raw < 0.0) ? -1.0 : 1.0;  // amp_left >= 0
  m.amp_left = sign * norm * amp_left_raw;
  m.amp_right = sign * norm * amp_right_raw;
  m.dominance = (weight_left >= weight_right) ? Dominance::LeftDominated
                                              : Dominance::RightDominated;
  return m;
}

}  // namespace detail

// Construct the normalized mode for a known root.  The AxialRoot overload
// trusts the root's kind; the raw-frequency overload classifies omega_x
// itself and rejects values that are not eigenfrequencies.
inline Mode build_mode(const CavityGeometry& geom, const AxialRoot& root) {
  geom.validate();
  const double w = root.omega_x;
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw ValidationError("spectral: mode frequency must be positive");
  }
  switch (root.kind) {
    case RootKind::IdealLeft: {
      Mode m = detail::finish_mode(geom, w, root.kind, 1.0, 0.0);
      return m;
    }
    case RootKind::IdealRight:
      return detail::finish_mode(geom, w, root.kind, 0.0, 1.0);
    case RootKind::Node: {
      // f(b) = 0 on both sides; slope continuity fixes the amplitude ratio
      // via the cosines (each +-1 at the shared pole).
      const double cl = std::cos(w * geom.d_left());
      const double cr = std::cos(w * geom.d_right());
      return detail::finish_mode(geom, w, root.kind, 1.0, -cl / cr);
    }
    case RootKind::Transcendental: {
      // Newton-step residual |g|/|g'| is scale-free even near poles, where
      // the undivided residual blows up for perfectly good roots.
      const double res = std::abs(detail::characteristic(geom, w) /
                                  detail::characteristic_slope(geom, w));
      if (!(res <= 1e-9 * w)) {
        throw ValidationError(
            "spectral: omega_x = " + std::to_string(w) +
            " is not an eigenfrequency (Newton residual " +
            std::to_string(res) + ")");
      }
      // Continuity L*sin(w*d1) = R*sin(w*d2) with the unnormalized choice
      // L = sin(w*d2), R = sin(w*d1).
      return detail::finish_mode(geom, w, root.kind,
                                 std::sin(w * geom.d_right()),
                                 std::sin(w * geom.d_left()));
    }
  }
  throw ValidationError("spectral: unknown root kind");
}

inline Mode build_mode(const CavityGeometry& geom, double omega_x) {
  geom.validate();
  if (!(omega_x > 0.0) || !std::isfinite(omega_x)) {
    throw ValidationError("spectral: mode frequency must be positive");
  }
  const double dist_l = std::abs(
      omega_x - std::round(omega_x * geom.d_left() / constants::pi) *
                    constants::pi / geom.d_left());
  const double dist_r = std::abs(
      omega_x - std::round(omega_x * geom.d_right() / constants::pi) *
                    constants::pi / geom.d_right());
  const double pole_tol = 1e-11 * omega_x;
  if (geom.ideal) {
    const bool at_l = dist_l <= pole_tol;
    const bool at_r = dist_r <= pole_tol;
    if (!at_l && !at_r) {
      throw ValidationError(
          "spectral: omega_x is not an ideal-cavity eigenfrequency");
    }
    if (at_l && at_r) {
      throw ValidationError(
          "spectral: degenerate ideal frequency (left and right modes "
          "coincide); build from an AxialRoot to pick the member");
    }
    return build_mode(geom,
                      AxialRoot{omega_x, at_l ? RootKind::IdealLeft
                                              : RootKind::IdealRight});
  }
  if (dist_l <= pole_tol && dist_r <= pole_tol) {
    return build_mode(geom, AxialRoot{omega_x, RootKind::Node});
  }
  if (dist_l <= pole_tol || dist_r <= pole_tol) {
    // Exactly one sine vanishes: a bare cotangent pole, never a root.
    throw ValidationError(
        "spectral: omega_x = " + std::to_string(omega_x) +
        " sits on a single cotangent pole and is not an eigenfrequency");
  }
  return build_mode(geom, AxialRoot{omega_x, RootKind::Transcendental});
}

// Full ascending spectrum with indices assigned.
inline std::vector<Mode> spectrum(const CavityGeometry& geom,
                                  double omega_max) {
  const std::vector<AxialRoot> roots = eigenfrequency_roots(geom, omega_max);
  std::vector<Mode> modes;
  modes.reserve(roots.size());
  for (const AxialRoot& r : roots) {
    modes.push_back(build_mode(geom, r));
    modes.back().index = static_cast<int>(modes.size()) - 1;
  }
  return modes;
}

// First `count` modes, growing the frequency window as needed.
inline std::vector<Mode> spectrum_count(const CavityGeometry& geom, int count) {
  if (count < 1) {
    throw ValidationError("spectral: mode count must be >= 1");
  }
  geom.validate();
  double omega_max =
      (count + 2) * constants::pi / (geom.d_left() + geom.d_right()) * 2.0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Mode> modes = spectrum(geom, omega_max);
    if (static_cast<int>(modes.size()) >= count) {
      modes.resize(count);
      return modes;
    }
    omega_max *= 1.6;
  }
  throw NumericalError("spectral: failed to collect the requested mode count");
}

// Pointwise mode value (piecewise sinusoid).
inline double mode_value(const CavityGeometry& geom, const Mode& m, double x) {
  if (x <= geom.b) {
    return m.amp_left * std::sin(m.omega_x * (x - geom.a0));
  }
  return m.amp_right * std::sin(m.omega_x * (geom.c - x));
}

}  // namespace leakycav::spectral
