#pragma once

// Run configuration: a flat dotted-key text format, one `key = value` per
// line, `#` comments. Values are decimal literals, whitespace/comma separated
// lists, or the sentinels "zero"/"inf" for the inverse temperature.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "qsb/dynamics.hpp"
#include "qsb/errors.hpp"
#include "qsb/mat2.hpp"
#include "qsb/model.hpp"

namespace qsb {

struct RunConfig {
  ModelParams model;
  bool polar_drive = false;  // drive given as {beta0, phi} rather than {alpha, beta}
  double beta0 = 0.0;
  double phi = 0.0;

  double t_start = 0.0;
  double t_end = 0.0;
  int steps = 1;

  bool has_state = false;
  Mat2 state{};

  SpectrumPath path = SpectrumPath::automatic;
  std::string output;

  std::string sweep_variable;
  std::vector<double> sweep_values;

  std::vector<double> times() const { return time_grid(t_start, t_end, steps); }

  DensityMatrix2 initial_state() const {
    if (!has_state) throw config_error("config: no initial state given (state.bx/by/bz or state.rho** keys)");
    try {
      return DensityMatrix2(state);
    } catch (const contract_error& e) {
      throw config_error(std::string("config: invalid initial state: ") + e.what());
    }
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "inf" || v == "+inf" || v == "infinity")
    return std::numeric_limits<double>::infinity();
  if (v == "zero") return 0.0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0')
    throw config_error("config: cannot parse number for '" + key + "': " + v);
  return x;
}

inline std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::string v = raw;
  for (char& c : v)
    if (c == ',') c = ' ';
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_number(key, tok));
  if (out.empty()) throw config_error("config: empty list for '" + key + "'");
  return out;
}

inline int parse_int(const std::string& key, const std::string& raw) {
  const double x = parse_number(key, raw);
  const int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    throw config_error("config: '" + key + "' must be an integer");
  return i;
}

}  // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config: line " + std::to_string(lineno) + " is not 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw config_error("config: line " + std::to_string(lineno) + " has an empty key or value");
    if (!kv.emplace(key, val).second)
      throw config_error("config: duplicate key '" + key + "'");
  }

  auto has = [&](const std::string& k) { return kv.count(k) != 0; };
  auto take = [&](const std::string& k) {
    const std::string v = kv.at(k);
    kv.erase(k);
    return v;
  };

  RunConfig cfg;

  // --- model ---
  if (!has("model.N")) throw config_error("config: missing model.N");
  cfg.model.N = detail::parse_int("model.N", take("model.N"));
  if (cfg.model.N < 1) throw config_error("config: model.N must be >= 1");

  const bool omega_scalar = has("model.omega"), omega_list = has("model.omega_n");
  if (omega_scalar == omega_list)
    throw config_error("config: give exactly one of model.omega (uniform) or model.omega_n (list)");
  cfg.model.omega_n =
      omega_scalar
          ? std::vector<double>(static_cast<std::size_t>(cfg.model.N),
                                detail::parse_number("model.omega", take("model.omega")))
          : detail::parse_list("model.omega_n", take("model.omega_n"));

  const bool g_scalar = has("model.g"), g_list = has("model.g_n");
  if (g_scalar == g_list)
    throw config_error("config: give exactly one of model.g (uniform) or model.g_n (list)");
  cfg.model.g_n = g_scalar
                      ? std::vector<double>(static_cast<std::size_t>(cfg.model.N),
                                            detail::parse_number("model.g", take("model.g")))
                      : detail::parse_list("model.g_n", take("model.g_n"));

  if (cfg.model.omega_n.size() != static_cast<std::size_t>(cfg.model.N) ||
      cfg.model.g_n.size() != static_cast<std::size_t>(cfg.model.N))
    throw config_error("config: model.omega_n / model.g_n lists must have length model.N");

  cfg.model.theta = has("model.theta") ? detail::parse_number("model.theta", take("model.theta")) : 0.0;
  if (std::isnan(cfg.model.theta) || cfg.model.theta < 0.0)
    throw config_error("config: model.theta must be >= 0 (or 'zero'/'inf')");

  // --- drive ---
  const bool cart = has("drive.alpha") || has("drive.beta");
  const bool polar = has("drive.beta0") || has("drive.phi");
  if (cart == polar)
    throw config_error("config: give exactly one drive form: {drive.alpha, drive.beta} or {drive.beta0, drive.phi}");
  if (cart) {
    if (!has("drive.alpha") || !has("drive.beta"))
      throw config_error("config: drive.alpha and drive.beta must both be present");
    cfg.model.alpha = detail::parse_number("drive.alpha", take("drive.alpha"));
    cfg.model.beta = detail::parse_number("drive.beta", take("drive.beta"));
    cfg.beta0 = std::hypot(cfg.model.alpha, cfg.model.beta);
    cfg.phi = cfg.beta0 == 0.0 ? 0.0 : std::atan2(cfg.model.alpha, cfg.model.beta);
  } else {
    if (!has("drive.beta0") || !has("drive.phi"))
      throw config_error("config: drive.beta0 and drive.phi must both be present");
    cfg.polar_drive = true;
    cfg.beta0 = detail::parse_number("drive.beta0", take("drive.beta0"));
    cfg.phi = detail::parse_number("drive.phi", take("drive.phi"));
    if (cfg.beta0 < 0.0) throw config_error("config: drive.beta0 must be >= 0");
    cfg.model.alpha = cfg.beta0 * std::sin(cfg.phi);
    cfg.model.beta = cfg.beta0 * std::cos(cfg.phi);
  }
  cfg.model.omega_drive = has("drive.omega") ? detail::parse_number("drive.omega", take("drive.omega")) : 0.0;

  // --- time grid ---
  cfg.t_start = has("time.start") ? detail::parse_number("time.start", take("time.start")) : 0.0;
  if (!has("time.end")) throw config_error("config: missing time.end");
  cfg.t_end = detail::parse_number("time.end", take("time.end"));
  if (!has("time.steps")) throw config_error("config: missing time.steps");
  cfg.steps = detail::parse_int("time.steps", take("time.steps"));
  if (cfg.steps < 1) throw config_error("config: time.steps must be >= 1");
  if (cfg.steps > 1 && !(cfg.t_end > cfg.t_start))
    throw config_error("config: time.end must exceed time.start");

  // --- initial state ---
  const bool bloch = has("state.bx") || has("state.by") || has("state.bz");
  const bool entries = has("state.rho00_re") || has("state.rho01_re") ||
                       has("state.rho01_im") || has("state.rho11_re");
  if (bloch && entries)
    throw config_error("config: give the state either as a Bloch vector or as matrix entries, not both");
  if (bloch) {
    const double bx = has("state.bx") ? detail::parse_number("state.bx", take("state.bx")) : 0.0;
    const double by = has("state.by") ? detail::parse_number("state.by", take("state.by")) : 0.0;
    const double bz = has("state.bz") ? detail::parse_number("state.bz", take("state.bz")) : 0.0;
    if (bx * bx + by * by + bz * bz > 1.0 + 1e-12)
      throw config_error("config: Bloch vector must have norm <= 1");
    cfg.has_state = true;
    cfg.state = {cplx(0.5 * (1.0 + bz), 0.0), 0.5 * cplx(bx, -by), 0.5 * cplx(bx, by),
                 cplx(0.5 * (1.0 - bz), 0.0)};
  } else if (entries) {
    if (!has("state.rho00_re") || !has("state.rho01_re") || !has("state.rho01_im") ||
        !has("state.rho11_re"))
      throw config_error("config: matrix state needs state.rho00_re, rho01_re, rho01_im, rho11_re");
    const double r00 = detail::parse_number("state.rho00_re", take("state.rho00_re"));
    const double r01r = detail::parse_number("state.rho01_re", take("state.rho01_re"));
    const double r01i = detail::parse_number("state.rho01_im", take("state.rho01_im"));
    const double r11 = detail::parse_number("state.rho11_re", take("state.rho11_re"));
    cfg.has_state = true;
    cfg.state = {cplx(r00, 0.0), cplx(r01r, r01i), cplx(r01r, -r01i), cplx(r11, 0.0)};
  }

  // --- mode / output / sweep ---
  if (has("mode")) {
    const std::string m = take("mode");
    if (m == "enumerate") cfg.path = SpectrumPath::enumerate;
    else if (m == "hamming") cfg.path = SpectrumPath::hamming;
    else if (m == "auto") cfg.path = SpectrumPath::automatic;
    else throw config_error("config: mode must be enumerate, hamming, or auto");
  }
  if (has("output")) cfg.output = take("output");
  if (has("sweep.variable")) {
    cfg.sweep_variable = take("sweep.variable");
    if (cfg.sweep_variable != "x" && cfg.sweep_variable != "g" &&
        cfg.sweep_variable != "theta" && cfg.sweep_variable != "N")
      throw config_error("config: sweep.variable must be one of x, g, theta, N");
    if (!has("sweep.values")) throw config_error("config: sweep.variable without sweep.values");
    cfg.sweep_values = detail::parse_list("sweep.values", take("sweep.values"));
  } else if (has("sweep.values")) {
    throw config_error("config: sweep.values without sweep.variable");
  }

  if (!kv.empty()) throw config_error("config: unknown key '" + kv.begin()->first + "'");

  try {
    cfg.model.validate();
  } catch (const contract_error& e) {
    throw config_error(std::string("config: ") + e.what());
  }
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace qsb
