#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "leakycav/common.hpp"
#include "leakycav/coupling.hpp"
#include "leakycav/geometry.hpp"
#include "leakycav/oracle.hpp"
#include "leakycav/rwa.hpp"
#include "leakycav/spectral.hpp"

namespace leakycav::scenario {

enum class Engine { Rwa, Oracle, Both };

struct SweepSpec {
  std::string param;  // gamma | beta | epsilon | duration | omega_drive
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  bool log_spacing = false;
};

// One batch job: a cavity, a drive, an initial state, an optional parameter
// sweep, and an output destination.  All lengths/durations in meters
// (natural units); the parser converts the convenience keys (duration_s,
// temperature_K) at load time.
struct Scenario {
  CavityGeometry geometry;
  double epsilon = 0.0;
  std::optional<double> omega_drive;  // empty = resonant, 2*Omega_L^0
  double duration = 0.0;
  double partner_tol = 1e-6;
  int oracle_modes = 6;
  double beta = infinity;
  std::optional<SweepSpec> sweep;
  std::string output_path;  // empty = caller decides (CLI prints to stdout)
  Engine engine = Engine::Rwa;

  void validate() const {
    geometry.validate();
    if (!(epsilon >= 0.0 && epsilon < 1.0)) {
      throw ValidationError("scenario: epsilon must satisfy 0 <= epsilon < 1");
    }
    if (omega_drive &&
        (!(*omega_drive > 0.0) || !std::isfinite(*omega_drive))) {
      throw ValidationError("scenario: omega_drive must be positive");
    }
    if (!(duration >= 0.0) || !std::isfinite(duration)) {
      throw ValidationError("scenario: duration must be finite and >= 0");
    }
    if (!(partner_tol > 0.0)) {
      throw ValidationError("scenario: partner_tol must be positive");
    }
    if (oracle_modes < 2) {
      throw ValidationError("scenario: oracle_modes must be >= 2");
    }
    if (!(beta > 0.0)) {
      throw ValidationError("scenario: beta must be positive (inf = vacuum)");
    }
    if (!sweep) return;
    const SweepSpec& s = *sweep;
    if (s.param != "gamma" && s.param != "beta" && s.param != "epsilon" &&
        s.param != "duration" && s.param != "omega_drive") {
      throw ValidationError(
          "scenario: sweep param must be one of gamma, beta, epsilon, "
          "duration, omega_drive (got '" +
          s.param + "')");
    }
    if (s.points < 1) {
      throw ValidationError("scenario: sweep points must be >= 1");
    }
    if (!std::isfinite(s.min) || !std::isfinite(s.max)) {
      throw ValidationError("scenario: sweep bounds must be finite");
    }
    if (s.log_spacing && !(s.min > 0.0 && s.max > 0.0)) {
      throw ValidationError("scenario: log spacing needs positive bounds");
    }
    if (s.param == "omega_drive" && engine == Engine::Rwa) {
      throw ValidationError(
          "scenario: omega_drive sweeps detune the drive; they require "
          "engine = oracle or both");
    }
    if (s.param == "gamma" && geometry.ideal) {
      throw ValidationError(
          "scenario: cannot sweep gamma of an ideal (gamma = inf) mirror");
    }
    const double lo = std::min(s.min, s.max);
    const double hi = std::max(s.min, s.max);
    if (s.param == "gamma" && !(lo > 0.0)) {
      throw ValidationError("scenario: swept gamma must be positive");
    }
    if (s.param == "beta" && !(lo > 0.0)) {
      throw ValidationError("scenario: swept beta must be positive");
    }
    if (s.param == "epsilon" && !(lo >= 0.0 && hi < 1.0)) {
      throw ValidationError("scenario: swept epsilon must stay in [0, 1)");
    }
    if (s.param == "duration" && lo < 0.0) {
      throw ValidationError("scenario: swept duration must be >= 0");
    }
    if (s.param == "omega_drive" && !(lo > 0.0)) {
      throw ValidationError("scenario: swept omega_drive must be positive");
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ValidationError("scenario: '" + v + "' is not a number (key " +
                          where + ")");
  }
}

inline int parse_count(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    const long x = std::stol(v, &pos);
    if (pos != v.size() || x < 0 || x > 100000000L) {
      throw std::invalid_argument(v);
    }
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ValidationError("scenario: '" + v +
                          "' is not a valid count (key " + where + ")");
  }
}

inline bool parse_flag(const std::string& v, const std::string& where) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ValidationError("scenario: '" + v + "' is not true/false (key " +
                        where + ")");
}

}  // namespace detail

// Strict INI-style parser.  '#' starts a comment; unknown sections, unknown
// keys, duplicate keys, and malformed values are all hard errors — batch
// runs should never silently ignore a typo.
inline Scenario parse_scenario(const std::string& text) {
  Scenario scn;
  std::set<std::string> seen;
  std::string section;
  bool saw_a0 = false, saw_b = false, saw_c = false;
  bool saw_gamma = false, ideal_on = false;
  bool saw_epsilon = false, saw_omega = false;
  bool saw_duration = false, saw_duration_s = false;
  bool saw_beta = false, saw_temperature = false, vacuum_on = false;
  bool saw_sweep_section = false;
  bool saw_param = false, saw_min = false, saw_max = false, saw_points = false;
  SweepSpec sweep;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = detail::trim(raw);
    if (line.empty()) continue;
    const std::string at = " (line " + std::to_string(lineno) + ")";

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ValidationError("scenario: malformed section header" + at);
      }
      section = line.substr(1, line.size() - 2);
      if (section != "geometry" && section != "drive" && section != "thermal" &&
          section != "sweep" && section != "output") {
        throw ValidationError("scenario: unknown section [" + section + "]" +
                              at);
      }
      if (section == "sweep") saw_sweep_section = true;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("scenario: expected 'key = value'" + at);
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ValidationError("scenario: empty key or value" + at);
    }
    if (section.empty()) {
      throw ValidationError("scenario: key '" + key +
                            "' appears before any section" + at);
    }
    if (!seen.insert(section + "." + key).second) {
      throw ValidationError("scenario: duplicate key '" + key + "' in [" +
                            section + "]" + at);
    }

    if (section == "geometry") {
      if (key == "a0") {
        scn.geometry.a0 = detail::parse_number(value, key);
        saw_a0 = true;
      } else if (key == "b") {
        scn.geometry.b = detail::parse_number(value, key);
        saw_b = true;
      } else if (key == "c") {
        scn.geometry.c = detail::parse_number(value, key);
        saw_c = true;
      } else if (key == "gamma") {
        scn.geometry.gamma = detail::parse_number(value, key);
        saw_gamma = true;
      } else if (key == "ideal") {
        ideal_on = detail::parse_flag(value, key);
      } else if (key == "k_perp") {
        scn.geometry.k_perp = detail::parse_number(value, key);
      } else {
        throw ValidationError("scenario: unknown key '" + key +
                              "' in [geometry]" + at);
      }
    } else if (section == "drive") {
      if (key == "epsilon") {
        scn.epsilon = detail::parse_number(value, key);
        saw_epsilon = true;
      } else if (key == "omega_drive") {
        if (value == "resonant") {
          scn.omega_drive.reset();
        } else {
          scn.omega_drive = detail::parse_number(value, key);
        }
        saw_omega = true;
      } else if (key == "duration") {
        scn.duration = detail::parse_number(value, key);
        saw_duration = true;
      } else if (key == "duration_s") {
        scn.duration =
            detail::parse_number(value, key) * speed_of_light_m_per_s;
        saw_duration_s = true;
      } else if (key == "partner_tol") {
        scn.partner_tol = detail::parse_number(value, key);
      } else if (key == "oracle_modes") {
        scn.oracle_modes = detail::parse_count(value, key);
      } else {
        throw ValidationError("scenario: unknown key '" + key +
                              "' in [drive]" + at);
      }
    } else if (section == "thermal") {
      if (key == "vacuum") {
        vacuum_on = detail::parse_flag(value, key);
      } else if (key == "beta") {
        scn.beta = detail::parse_number(value, key);
        saw_beta = true;
      } else if (key == "temperature_K") {
        const double t_kelvin = detail::parse_number(value, key);
        if (!(t_kelvin > 0.0)) {
          throw ValidationError("scenario: temperature_K must be positive" +
                                at);
        }
        scn.beta = beta_m_kelvin / t_kelvin;
        saw_temperature = true;
      } else {
        throw ValidationError("scenario: unknown key '" + key +
                              "' in [thermal]" + at);
      }
    } else if (section == "sweep") {
      if (key == "param") {
        sweep.param = value;
        saw_param = true;
      } else if (key == "min") {
        sweep.min = detail::parse_number(value, key);
        saw_min = true;
      } else if (key == "max") {
        sweep.max = detail::parse_number(value, key);
        saw_max = true;
      } else if (key == "points") {
        sweep.points = detail::parse_count(value, key);
        saw_points = true;
      } else if (key == "spacing") {
        if (value == "linear") {
          sweep.log_spacing = false;
        } else if (value == "log") {
          sweep.log_spacing = true;
        } else {
          throw ValidationError("scenario: spacing must be linear or log" +
                                at);
        }
      } else {
        throw ValidationError("scenario: unknown key '" + key +
                              "' in [sweep]" + at);
      }
    } else {  // output
      if (key == "path") {
        scn.output_path = value;
      } else if (key == "engine") {
        if (value == "rwa") {
          scn.engine = Engine::Rwa;
        } else if (value == "oracle") {
          scn.engine = Engine::Oracle;
        } else if (value == "both") {
          scn.engine = Engine::Both;
        } else {
          throw ValidationError("scenario: engine must be rwa, oracle, or "
                                "both" +
                                at);
        }
      } else {
        throw ValidationError("scenario: unknown key '" + key +
                              "' in [output]" + at);
      }
    }
  }

  if (!saw_a0 || !saw_b || !saw_c) {
    throw ValidationError("scenario: [geometry] requires a0, b, and c");
  }
  if (ideal_on && saw_gamma) {
    throw ValidationError(
        "scenario: give either gamma or ideal = true, not both");
  }
  if (!ideal_on && !saw_gamma) {
    throw ValidationError(
        "scenario: [geometry] requires gamma or ideal = true");
  }
  if (ideal_on) {
    scn.geometry.ideal = true;
    scn.geometry.gamma = infinity;
  }
  if (!saw_epsilon || !saw_omega) {
    throw ValidationError("scenario: [drive] requires epsilon and "
                          "omega_drive (a number or 'resonant')");
  }
  if (saw_duration && saw_duration_s) {
    throw ValidationError(
        "scenario: give either duration or duration_s, not both");
  }
  if (!saw_duration && !saw_duration_s) {
    throw ValidationError("scenario: [drive] requires duration or duration_s");
  }
  if (vacuum_on && (saw_beta || saw_temperature)) {
    throw ValidationError(
        "scenario: vacuum = true excludes beta/temperature_K");
  }
  if (saw_beta && saw_temperature) {
    throw ValidationError(
        "scenario: give either beta or temperature_K, not both");
  }
  if (saw_sweep_section) {
    if (!saw_param || !saw_min || !saw_max || !saw_points) {
      throw ValidationError(
          "scenario: [sweep] requires param, min, max, and points");
    }
    scn.sweep = sweep;
  }
  scn.validate();
  return scn;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("scenario: cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw IoError("scenario: failed while reading '" + path + "'");
  }
  return parse_scenario(buffer.str());
}

// A particle number that may exceed double range: `value` saturates to +inf
// while `ln1p` = log(1 + n) stays finite and exact.
struct LogValue {
  double value = 0.0;
  double ln1p = 0.0;
};

// One CSV row.  Optional fields print as empty cells: engine columns are
// empty when that engine did not run, omega_R/n0_R/n_R when no resonant
// partner exists, and xi/chi/regime when the drive is detuned from
// 2*Omega_L^0 (those parameters model the resonant pair only).
struct ResultRow {
  std::optional<std::string> sweep_param;
  std::optional<double> sweep_value;
  double omega_L = 0.0;
  std::optional<double> omega_R;
  double eta = 0.0;
  double q_factor = 0.0;
  std::optional<double> xi;
  std::optional<double> chi;
  std::optional<rwa::Regime> regime;
  double beta = infinity;
  double n0_L = 0.0;
  std::optional<double> n0_R;
  double duration = 0.0;
  std::optional<LogValue> n_L_rwa;
  std::optional<LogValue> n_R_rwa;
  std::optional<double> n_L_oracle;
  std::optional<double> n_R_oracle;
};

namespace detail {

inline std::vector<double> sweep_values(const SweepSpec& s) {
  std::vector<double> v(static_cast<std::size_t>(s.points));
  if (s.points == 1) {
    v[0] = s.min;
    return v;
  }
  for (int i = 0; i < s.points; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(s.points - 1);
    v[static_cast<std::size_t>(i)] =
        s.log_spacing ? s.min * std::pow(s.max / s.min, t)
                      : s.min + (s.max - s.min) * t;
  }
  return v;
}

inline ResultRow compute_row(const Scenario& scn,
                             std::optional<double> sweep_value) {
  CavityGeometry geom = scn.geometry;
  double epsilon = scn.epsilon;
  std::optional<double> omega_opt = scn.omega_drive;
  double duration = scn.duration;
  double beta = scn.beta;

  ResultRow row;
  if (scn.sweep) {
    row.sweep_param = scn.sweep->param;
    row.sweep_value = sweep_value;
    const std::string& p = scn.sweep->param;
    if (p == "gamma") {
      geom.gamma = *sweep_value;
    } else if (p == "beta") {
      beta = *sweep_value;
    } else if (p == "epsilon") {
      epsilon = *sweep_value;
    } else if (p == "duration") {
      duration = *sweep_value;
    } else {
      omega_opt = *sweep_value;
    }
  }

  const double omega_max = 4.0 * std::hypot(pi / geom.d_left(), geom.k_perp);
  const std::vector<spectral::Mode> modes = spectral::spectrum(geom, omega_max);
  int l_pos = -1;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes[i].dominance == spectral::Dominance::LeftDominated) {
      l_pos = static_cast<int>(i);
      break;
    }
  }
  if (l_pos < 0) {
    throw ValidationError(
        "scenario: no left-dominated mode found below 4x the fundamental");
  }
  const spectral::Mode& mode_l = modes[static_cast<std::size_t>(l_pos)];
  const double omega_drive = omega_opt ? *omega_opt : 2.0 * mode_l.omega0;
  coupling::DriveSpec drive;
  drive.epsilon = epsilon;
  drive.omega_drive = omega_drive;
  drive.duration = duration;
  drive.validate();

  const auto partner = coupling::find_resonant_partner(
      modes, mode_l, omega_drive, scn.partner_tol);
  int r_pos = -1;
  if (partner) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (modes[i].index == partner->mode.index) {
        r_pos = static_cast<int>(i);
        break;
      }
    }
  }

  row.omega_L = mode_l.omega0;
  row.eta = mode_l.eta_mu;
  row.q_factor =
      mirror_properties(geom.ideal ? infinity : geom.gamma, mode_l.omega_x)
          .quality;
  row.beta = beta;
  row.n0_L = rwa::ThermalState::occupation(beta, mode_l.omega0);
  row.duration = duration;
  if (partner) {
    row.omega_R = partner->mode.omega0;
    row.n0_R = rwa::ThermalState::occupation(beta, partner->mode.omega0);
  }

  const double resonant_rel =
      std::abs(omega_drive - 2.0 * mode_l.omega0) / (2.0 * mode_l.omega0);
  const bool resonant = resonant_rel <= 1e-9;
  std::optional<coupling::EffectiveParams> params;
  if (resonant) {
    std::optional<spectral::Mode> mode_r;
    if (partner) mode_r = partner->mode;
    params = coupling::effective_params(geom, drive, mode_l, mode_r);
    row.xi = params->xi;
    row.chi = params->chi;
    row.regime = rwa::classify_regime(params->xi, params->chi);
  }

  if (scn.engine != Engine::Oracle) {
    if (!resonant) {
      if (scn.engine == Engine::Rwa) {
        throw ValidationError(
            "scenario: engine rwa needs the drive resonant with 2*Omega_L^0 "
            "(relative detuning " +
            std::to_string(resonant_rel) +
            "); detuned drives belong to the oracle engine");
      }
      // engine both: leave the rwa cells of this detuned row empty
    } else {
      rwa::ThermalState state;
      state.beta = beta;
      state.n0_L = row.n0_L;
      state.n0_R = row.n0_R.value_or(0.0);
      const rwa::EvolutionMatrix ev = rwa::build_generator(*params);
      const rwa::ResponseResult resp = rwa::response(ev, duration, state);
      row.n_L_rwa = LogValue{resp.n_L, resp.ln1p_n_L};
      if (partner) row.n_R_rwa = LogValue{resp.n_R, resp.ln1p_n_R};
    }
  }

  if (scn.engine != Engine::Rwa) {
    if (modes.size() < 2) {
      throw ValidationError(
          "scenario: the oracle engine needs at least two modes in range");
    }
    // Truncation: the driven mode, its partner, then nearest-in-frequency
    // spectators, presented in ascending frequency.
    std::vector<int> order(modes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      return std::abs(modes[static_cast<std::size_t>(x)].omega0 -
                      mode_l.omega0) <
             std::abs(modes[static_cast<std::size_t>(y)].omega0 -
                      mode_l.omega0);
    });
    const std::size_t want =
        std::min<std::size_t>(static_cast<std::size_t>(scn.oracle_modes),
                              modes.size());
    std::vector<int> chosen;
    chosen.push_back(l_pos);
    if (r_pos >= 0) chosen.push_back(r_pos);
    for (int idx : order) {
      if (chosen.size() >= want) break;
      if (std::find(chosen.begin(), chosen.end(), idx) == chosen.end()) {
        chosen.push_back(idx);
      }
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<spectral::Mode> trunc;
    trunc.reserve(chosen.size());
    int l_slot = -1, r_slot = -1;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (chosen[i] == l_pos) l_slot = static_cast<int>(i);
      if (chosen[i] == r_pos) r_slot = static_cast<int>(i);
      trunc.push_back(modes[static_cast<std::size_t>(chosen[i])]);
    }
    const oracle::CoefficientSet cs =
        oracle::assemble_time_dependent_hamiltonian(geom, drive, trunc);
    const oracle::TransferState ts = oracle::integrate_transfer(cs, duration);
    rwa::ThermalState state;
    state.beta = beta;
    const Eigen::VectorXd numbers = oracle::particle_numbers(ts, trunc, state);
    row.n_L_oracle = numbers(l_slot);
    if (r_slot >= 0) row.n_R_oracle = numbers(r_slot);
  }
  return row;
}

inline std::string format_double(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Overflowed occupations print as a synthesized decimal from log(1+n);
// relative accuracy is that of the stored log (~1e-13), which is all the
// linear value ever had out there.
inline std::string format_log_value(const LogValue& lv) {
  if (std::isfinite(lv.value)) return format_double(lv.value);
  const double log10_n = lv.ln1p / std::log(10.0);
  double exponent = std::floor(log10_n);
  double mantissa = std::pow(10.0, log10_n - exponent);
  if (mantissa >= 10.0) {
    mantissa /= 10.0;
    exponent += 1.0;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17ge+%lld", mantissa,
                static_cast<long long>(exponent));
  return buf;
}

inline const char* regime_name(rwa::Regime r) {
  switch (r) {
    case rwa::Regime::Growth: return "Growth";
    case rwa::Regime::Oscillation: return "Oscillation";
    case rwa::Regime::Threshold: return "Threshold";
  }
  return "Threshold";
}

}  // namespace detail

// Evaluate every row of the scenario.  Rows are independent, so sweeps are
// dispatched to a small worker pool; results land in index-addressed slots
// and errors are rethrown lowest-index-first, keeping output and failure
// behavior deterministic regardless of scheduling.
inline std::vector<ResultRow> run(const Scenario& scn) {
  scn.validate();
  std::vector<double> values;
  if (scn.sweep) values = detail::sweep_values(*scn.sweep);
  const std::size_t n_rows = scn.sweep ? values.size() : 1;

  std::vector<ResultRow> rows(n_rows);
  std::vector<std::exception_ptr> errors(n_rows);
  std::atomic<std::size_t> cursor{0};
  auto work = [&]() {
    for (std::size_t i = cursor.fetch_add(1); i < n_rows;
         i = cursor.fetch_add(1)) {
      try {
        rows[i] = detail::compute_row(
            scn, scn.sweep ? std::optional<double>(values[i]) : std::nullopt);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers = std::min<std::size_t>(n_rows, hw);
  std::vector<std::future<void>> pool;
  for (std::size_t w = 1; w < n_workers; ++w) {
    pool.push_back(std::async(std::launch::async, work));
  }
  work();
  for (auto& f : pool) f.get();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return rows;
}

// CSV with a fixed header, 17 significant digits, LF line endings.
// Infinite beta (vacuum) and infinite Q print as "inf".
inline std::string emit_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "sweep_param,sweep_value,omega_L,omega_R,eta,Q,xi,chi,regime,beta,"
      "n0_L,n0_R,duration,n_L_rwa,n_R_rwa,n_L_oracle,n_R_oracle\n";
  const auto opt_num = [](const std::optional<double>& v) {
    return v ? detail::format_double(*v) : std::string();
  };
  const auto opt_log = [](const std::optional<LogValue>& v) {
    return v ? detail::format_log_value(*v) : std::string();
  };
  for (const ResultRow& r : rows) {
    out += r.sweep_param.value_or("");
    out += ',';
    out += opt_num(r.sweep_value);
    out += ',';
    out += detail::format_double(r.omega_L);
    out += ',';
    out += opt_num(r.omega_R);
    out += ',';
    out += detail::format_double(r.eta);
    out += ',';
    out += detail::format_double(r.q_factor);
    out += ',';
    out += opt_num(r.xi);
    out += ',';
    out += opt_num(r.chi);
    out += ',';
    out += r.regime ? detail::regime_name(*r.regime) : "";
    out += ',';
    out += detail::format_double(r.beta);
    out += ',';
    out += detail::format_double(r.n0_L);
    out += ',';
    out += opt_num(r.n0_R);
    out += ',';
    out += detail::format_double(r.duration);
    out += ',';
    out += opt_log(r.n_L_rwa);
    out += ',';
    out += opt_log(r.n_R_rwa);
    out += ',';
    out += opt_num(r.n_L_oracle);
    out += ',';
    out += opt_num(r.n_R_oracle);
    out += '\n';
  }
  return out;
}

inline void emit_csv_file(const std::string& path,
                          const std::vector<ResultRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("scenario: cannot open '" + path + "' for writing");
  }
  const std::string text = emit_csv(rows);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out.good()) {
    throw IoError("scenario: failed while writing '" + path + "'");
  }
}

}  // namespace leakycav::scenario
