// Acceptance suite: one PASS/FAIL line per criterion, exit code = number of
// failures.  Each criterion states what it measured; tolerances are printed
// next to the measurements so a red line is diagnosable from the output
// alone.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "leakycav/coupling.hpp"
#include "leakycav/oracle.hpp"
#include "leakycav/rwa.hpp"
#include "leakycav/scenario.hpp"
#include "leakycav/spectral.hpp"

namespace {

namespace lc = leakycav;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int number, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  if (!pass) ++g_failures;
}

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [pass, detail] = body();
    report(number, name, pass, detail);
  } catch (const std::exception& e) {
    report(number, name, false, std::string("exception: ") + e.what());
  }
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

lc::CavityGeometry cavity(double a0, double b, double c, double gamma,
                          double k_perp = 0.0) {
  lc::CavityGeometry g;
  g.a0 = a0;
  g.b = b;
  g.c = c;
  g.gamma = gamma;
  g.k_perp = k_perp;
  return g;
}

// The tuned three-pole cavity used for cross-engine checks: eta = 1e-3 at
// gamma = 3141.0927, right partner within 1e-8 of 3*Omega_L^0.
lc::scenario::Scenario tuned_scenario() {
  lc::scenario::Scenario s;
  s.geometry = cavity(0.0, 1.0, 4.42989468, 3141.0927, 2.0);
  s.epsilon = 1e-3;
  s.duration = 10.0;
  s.partner_tol = 1e-2;
  return s;
}

const lc::spectral::Mode& lowest_left(
    const std::vector<lc::spectral::Mode>& modes) {
  for (const auto& m : modes) {
    if (m.dominance == lc::spectral::Dominance::LeftDominated) return m;
  }
  throw lc::ValidationError("acceptance: no left-dominated mode in range");
}

// ---- criterion 1: narrow-resonance frequency shift ---------------------------
// Lengths (1, 3): the fundamental must approach pi from below with the
// first-order shift -eta/2 and a remainder bounded by 5*eta^2.
std::pair<bool, std::string> criterion_shift() {
  const auto start = Clock::now();
  std::string detail = "residual/bound:";
  bool pass = true;
  for (const double gamma : {1e2, 1e3, 1e4}) {
    const auto geom = cavity(0.0, 1.0, 4.0, gamma);
    const auto modes = lc::spectral::spectrum(geom, 4.0);
    const auto& m = lowest_left(modes);
    const double eta = m.eta_mu;
    const double residual = std::abs(m.omega_x - (lc::pi - eta / 2.0));
    const double bound = 5.0 * eta * eta;
    detail += fmt(" %.3e/%.3e", residual, bound);
    if (!(residual <= bound)) pass = false;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  detail += fmt(" (%.2fs, budget 1s)", secs);
  if (secs >= 1.0) pass = false;
  return {pass, detail};
}

// ---- criterion 2: ideal-cavity parametric growth -----------------------------
// Perfect mirrors, resonant drive: n_L(T) = sinh^2(2 xi T) from vacuum to
// 1e-10 relative, and a thermal seed is amplified by exactly (1 + 2 n0).
std::pair<bool, std::string> criterion_ideal_growth() {
  lc::CavityGeometry geom = cavity(0.0, 1.0, 3.0, 1.0);
  geom.ideal = true;
  geom.gamma = lc::infinity;
  const auto modes = lc::spectral::spectrum(geom, 4.0);
  const lc::spectral::Mode* fundamental = nullptr;
  for (const auto& m : modes) {
    if (m.kind == lc::spectral::RootKind::IdealLeft) {
      fundamental = &m;
      break;
    }
  }
  if (fundamental == nullptr) {
    return {false, "no ideal left-cavity mode found"};
  }

  lc::coupling::DriveSpec drive;
  drive.epsilon = 1e-3;
  drive.omega_drive = 2.0 * fundamental->omega0;
  drive.duration = 0.0;
  const auto params =
      lc::coupling::effective_params(geom, drive, *fundamental, std::nullopt);
  const auto ev = lc::rwa::build_generator(params);

  double worst_vacuum = 0.0;
  for (const double xi_t : {0.0, 0.5, 1.0, 2.0, 3.5, 5.0}) {
    const double t = xi_t / params.xi;
    const auto resp = lc::rwa::response(ev, t, lc::rwa::ThermalState::vacuum());
    const double expected = std::pow(std::sinh(2.0 * xi_t), 2);
    const double err =
        std::abs(resp.n_L - expected) / std::max(1e-300, expected);
    if (xi_t > 0.0) worst_vacuum = std::max(worst_vacuum, err);
    if (xi_t == 0.0 && resp.n_L != 0.0) worst_vacuum = 1.0;
  }

  double worst_thermal = 0.0;
  for (const double xi_t : {0.5, 2.0}) {
    const double t = xi_t / params.xi;
    const double vac = std::pow(std::sinh(2.0 * xi_t), 2);
    for (const double n0 : {0.3, 0.8, 2.0}) {
      lc::rwa::ThermalState st;
      st.n0_L = n0;
      const auto resp = lc::rwa::response(ev, t, st);
      const double expected = (1.0 + 2.0 * n0) * vac + n0;
      worst_thermal =
          std::max(worst_thermal, std::abs(resp.n_L - expected) / expected);
    }
  }

  const bool pass = worst_vacuum <= 1e-10 && worst_thermal <= 1e-8;
  return {pass, fmt("max rel err: vacuum %.2e (tol 1e-10), thermal seed "
                    "(1+2n0) %.2e (tol 1e-8); xi = %.4e",
                    worst_vacuum, worst_thermal, params.xi)};
}

// ---- criterion 3: growth rate and loss-threshold oscillation -----------------
// Checks that below the loss threshold ln n_L grows at
// 2*(xi + sqrt(xi^2 - chi^2)) and that above it the occupation stays
// bounded for all time.  The second clause is not a property of this
// model: the generator's eigenvalue real parts are +-xi for every chi, so
// growth continues at the reduced rate 2*xi above threshold and the
// criterion reports an honest failure (see README).
std::pair<bool, std::string> criterion_regimes() {
  lc::coupling::EffectiveParams grow;
  grow.xi = 1.0;
  grow.chi = 0.5;
  grow.omega_drive = 1.0;
  const auto ev_grow = lc::rwa::build_generator(grow);
  const auto r3 = lc::rwa::response(ev_grow, 3.0, lc::rwa::ThermalState::vacuum());
  const auto r13 =
      lc::rwa::response(ev_grow, 13.0, lc::rwa::ThermalState::vacuum());
  const double rate = (r13.ln1p_n_L - r3.ln1p_n_L) / 10.0;
  const double rate_expected = 2.0 * (1.0 + std::sqrt(1.0 - 0.25));
  const double rate_err = std::abs(rate / rate_expected - 1.0);

  lc::coupling::EffectiveParams osc;
  osc.xi = 0.5;
  osc.chi = 1.0;
  osc.omega_drive = 1.0;
  const auto ev_osc = lc::rwa::build_generator(osc);
  const double reference =
      lc::rwa::response(ev_osc, lc::pi / 2.0, lc::rwa::ThermalState::vacuum())
          .n_L;
  double peak = 0.0;
  for (double t = 0.0; t <= 1000.0; t += 0.05) {
    peak = std::max(
        peak, lc::rwa::response(ev_osc, t, lc::rwa::ThermalState::vacuum()).n_L);
  }

  const bool pass = rate_err <= 0.01 && peak <= 10.0 * reference;
  return {pass,
          fmt("rate %.6f vs %.6f (rel err %.2e, tol 1e-2); bounded peak "
              "%.4f <= 10 x %.4f over T in [0, 1000]",
              rate, rate_expected, rate_err, peak, reference)};
}

// ---- criterion 4: symplectic integrity of both engines -----------------------
// Random rotating-wave propagators preserve the symplectic form to 1e-10;
// the time-domain transfer matrix preserves it to 1e-8.
std::pair<bool, std::string> criterion_symplectic() {
  Eigen::Matrix4d form = Eigen::Matrix4d::Zero();
  form(0, 1) = 1.0;
  form(1, 0) = -1.0;
  form(2, 3) = 1.0;
  form(3, 2) = -1.0;

  std::mt19937 rng(20240817u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_rwa = 0.0;
  for (int i = 0; i < 1000; ++i) {
    lc::coupling::EffectiveParams p;
    p.xi = 1.5 * unit(rng);
    p.chi = (i % 50 == 0) ? p.xi : 1.5 * unit(rng) * (unit(rng) < 0.5 ? -1 : 1);
    p.omega_drive = 1.0;
    const double t = 2.0 * unit(rng);
    const Eigen::Matrix4d u = lc::rwa::propagate(lc::rwa::build_generator(p), t);
    const double mag = u.cwiseAbs().maxCoeff();
    const double defect = (u * form * u.transpose() - form).cwiseAbs().maxCoeff() /
                          std::max(1.0, mag * mag);
    worst_rwa = std::max(worst_rwa, defect);
  }

  // One driven time-domain run, judged by its own scaled defect.
  const double rat = std::sqrt(3.0) + 1.0 / std::sqrt(3.0);
  lc::oracle::CoefficientSet cs;
  cs.n_modes = 2;
  cs.omega0 = {3.72, 11.16};
  cs.omega2 = [](double t) {
    Eigen::VectorXd w2(2);
    w2(0) = 3.72 * 3.72 + 8.0 * 0.02 * 3.72 * std::sin(7.44 * t);
    w2(1) = 11.16 * 11.16;
    return w2;
  };
  cs.velocity = [rat](double t) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
    m(0, 1) = 4.0 * (-0.005) / rat * std::cos(7.44 * t);
    m(1, 0) = -m(0, 1);
    return m;
  };
  cs.omega_max = 11.16;
  const auto ts = lc::oracle::integrate_transfer(cs, 5.0);

  const bool pass = worst_rwa <= 1e-10 && ts.symplectic_defect <= 1e-8;
  return {pass, fmt("scaled defect: rwa %.2e over 1000 random propagators "
                    "(tol 1e-10), time-domain %.2e (tol 1e-8)",
                    worst_rwa, ts.symplectic_defect)};
}

// ---- criterion 5: engine agreement on the physical cavity --------------------
// Same geometry through both engines at eps*omega*T = 0.5: within 10%, and
// the discrepancy shrinks at least 3x when eps drops 4x.
std::pair<bool, std::string> criterion_engine_agreement() {
  const auto start = Clock::now();

  auto probe = tuned_scenario();
  probe.duration = 0.0;
  const double omega_l = lc::scenario::run(probe)[0].omega_L;
  const double omega = 2.0 * omega_l;

  std::vector<double> discrepancy;
  for (const double eps : {1e-3, 2.5e-4}) {
    auto s = tuned_scenario();
    s.engine = lc::scenario::Engine::Both;
    s.epsilon = eps;
    s.duration = 0.5 / (eps * omega);
    const auto row = lc::scenario::run(s)[0];
    if (!row.n_L_rwa || !row.n_L_oracle) {
      return {false, "engine columns missing from the cross-check row"};
    }
    discrepancy.push_back((*row.n_L_oracle - row.n_L_rwa->value) /
                          row.n_L_rwa->value);
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();

  const bool within = std::abs(discrepancy[0]) <= 0.10 &&
                      std::abs(discrepancy[1]) <= 0.10;
  const bool shrinks =
      std::abs(discrepancy[1]) <= std::abs(discrepancy[0]) / 3.0;
  const bool timed = secs < 60.0;
  return {within && shrinks && timed,
          fmt("rel discrepancy %.3e -> %.3e at eps 1e-3 -> 2.5e-4 "
              "(tol 0.10 each, shrink >= 3x); %.1fs (budget 60s)",
              discrepancy[0], discrepancy[1], secs)};
}

// ---- criterion 6: loss-coupling scaling law -----------------------------------
// chi * gamma / Omega_L is a geometry constant across two decades of gamma,
// and the coupling matrix is antisymmetric.
std::pair<bool, std::string> criterion_loss_scaling() {
  std::vector<double> product;
  for (const double gamma : {1e2, 1e3, 1e4}) {
    const auto geom = cavity(0.0, 1.0, 4.42989468, gamma, 2.0);
    const double omega_cap = 4.0 * std::hypot(lc::pi / geom.d_left(), geom.k_perp);
    const auto modes = lc::spectral::spectrum(geom, omega_cap);
    const auto& mode_l = lowest_left(modes);
    lc::coupling::DriveSpec drive;
    drive.epsilon = 1e-3;
    drive.omega_drive = 2.0 * mode_l.omega0;
    drive.duration = 0.0;
    const auto partner = lc::coupling::find_resonant_partner(
        modes, mode_l, drive.omega_drive, 1e-2);
    if (!partner) return {false, fmt("no partner found at gamma %.0e", gamma)};
    const auto params = lc::coupling::effective_params(geom, drive, mode_l,
                                                       partner->mode);
    product.push_back(params.chi * gamma / mode_l.omega0);
  }
  const double lo = *std::min_element(product.begin(), product.end());
  const double hi = *std::max_element(product.begin(), product.end());
  const double spread = (hi - lo) / std::abs((lo + hi) / 2.0);

  const auto geom = cavity(0.0, 1.0, 4.42989468, 3141.0927, 2.0);
  const auto modes = lc::spectral::spectrum(geom, 15.0);
  const std::size_t count = std::min<std::size_t>(8, modes.size());
  double antisym = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      antisym = std::max(
          antisym, std::abs(lc::coupling::geometry_factor(geom, modes[i], modes[j]) +
                            lc::coupling::geometry_factor(geom, modes[j], modes[i])));
    }
  }

  const bool pass = spread < 0.05 && antisym < 1e-10;
  return {pass, fmt("chi*gamma/Omega_L = %.4e, %.4e, %.4e (spread %.2f%%, "
                    "tol 5%%); max |m + m^T| = %.2e (tol 1e-10)",
                    product[0], product[1], product[2], 100.0 * spread,
                    antisym)};
}

// ---- criterion 7: shipped preset regime ---------------------------------------
// The narrow-band preset lands in the high-Q growth regime and produces
// more than one particle from vacuum within a millisecond of drive.
std::pair<bool, std::string> criterion_preset() {
  const std::string path =
      std::string(LEAKYCAV_PRESET_DIR) + "/millimeter_cavity.scn";
  const auto scn = lc::scenario::load_scenario(path);
  const auto start = Clock::now();
  const auto rows = lc::scenario::run(scn);
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (rows.size() != 1) return {false, "expected exactly one row"};
  const auto& r = rows[0];

  const double q_target = 2.0 * lc::pi * 1e6;
  const double q_err = std::abs(r.q_factor / q_target - 1.0);
  const bool growth = r.regime == lc::rwa::Regime::Growth;
  const double n_l = r.n_L_rwa ? r.n_L_rwa->value : 0.0;
  const bool pass = q_err <= 0.01 && growth && n_l > 1.0 && secs < 1.0;
  return {pass, fmt("Q = %.6e (within %.2e of 2pi*1e6, tol 1e-2), regime %s, "
                    "n_L(1ms) = %.1f (> 1), %.2fs (budget 1s)",
                    r.q_factor, q_err,
                    growth ? "Growth" : "not-Growth", n_l, secs)};
}

// ---- criterion 8: lossless-coupling conservation -------------------------------
// A pure mode-exchange coupling conserves the total occupation in both
// engines.
std::pair<bool, std::string> criterion_conservation() {
  lc::coupling::EffectiveParams p;
  p.xi = 0.0;
  p.chi = 0.41;
  p.omega_drive = 1.0;
  const auto ev = lc::rwa::build_generator(p);
  lc::rwa::ThermalState st;
  st.n0_L = 0.8;
  st.n0_R = 0.1;
  double worst_rwa = 0.0;
  for (double t = 0.0; t <= 12.0; t += 0.75) {
    const auto resp = lc::rwa::response(ev, t, st);
    worst_rwa = std::max(worst_rwa, std::abs(resp.n_L + resp.n_R - 0.9));
  }

  lc::oracle::CoefficientSet cs;
  cs.n_modes = 2;
  cs.omega0 = {2.0, 2.0};
  Eigen::VectorXd w2(2);
  w2 << 4.0, 4.0;
  cs.omega2 = [w2](double) { return w2; };
  Eigen::MatrixXd m(2, 2);
  m << 0.0, 0.3, -0.3, 0.0;
  cs.velocity = [m](double) { return m; };
  cs.omega_max = 2.0;
  // Conservation is demanded an order below the default step's ~1e-9 error
  // budget, so run the convergent integrator at an explicitly finer step.
  double worst_oracle = 0.0;
  for (const double t : {1.0, 2.5, 4.0}) {
    const auto ts = lc::oracle::integrate_transfer(cs, t, 0.005);
    const Eigen::VectorXd n = lc::oracle::particle_numbers(ts, {2.0, 2.0},
                                                           {0.8, 0.1});
    worst_oracle = std::max(worst_oracle, std::abs(n.sum() - 0.9));
  }

  const bool pass = worst_rwa <= 1e-10 && worst_oracle <= 1e-10;
  return {pass, fmt("max |n_L + n_R - n0 total|: rwa %.2e, time-domain %.2e "
                    "(tol 1e-10 each)",
                    worst_rwa, worst_oracle)};
}

}  // namespace

int main() {
  run_criterion(1, "narrow-resonance frequency shift", criterion_shift);
  run_criterion(2, "ideal-cavity parametric growth", criterion_ideal_growth);
  run_criterion(3, "growth rate and loss-threshold oscillation",
                criterion_regimes);
  run_criterion(4, "symplectic integrity of both engines",
                criterion_symplectic);
  run_criterion(5, "engine agreement on the physical cavity",
                criterion_engine_agreement);
  run_criterion(6, "loss-coupling scaling law", criterion_loss_scaling);
  run_criterion(7, "shipped preset regime", criterion_preset);
  run_criterion(8, "lossless-coupling conservation", criterion_conservation);

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criterion(s) failed\n", g_failures);
  }
  return g_failures;
}
