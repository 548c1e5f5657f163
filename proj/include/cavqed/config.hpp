#pragma once

// key=value run configuration: physical parameters, the scaled-time grid,
// and optional parameter-sweep scenarios.

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "cavqed/errors.hpp"
#include "cavqed/model.hpp"

namespace cavqed {

// One sweep scenario, both knobs in units of the atom-field coupling.
struct Scenario {
  double chi_over_lambda = 0.0;
  double delta_over_lambda = 0.0;
};

struct RunConfig {
  ModelParams params;
  double tau_start = 0.0;
  double tau_end = 30.0;
  int tau_steps = 600;  // number of samples, endpoints included
  std::vector<Scenario> sweep;
  std::string output_path;
};

inline std::vector<double> tau_grid(const RunConfig& c) {
  std::vector<double> g(c.tau_steps);
  for (int i = 0; i < c.tau_steps; ++i)
    g[i] = c.tau_start +
           double(i) * (c.tau_end - c.tau_start) / double(c.tau_steps - 1);
  return g;
}

// Parameters with the Kerr strength and the detuning pinned to the given
// ratios. The detuning is set through the atomic frequencies, so the
// rotated-frame machinery stays untouched.
inline ModelParams scenario_params(const ModelParams& base,
                                   const Scenario& s) {
  ModelParams p = base;
  p.kerr = s.chi_over_lambda * p.coupling1;
  const RotatedFrame f = rotated_frame(p);
  const double gap = f.mode_freq2 - f.mode_freq1;
  p.atom_freq1 = gap + s.delta_over_lambda * p.coupling1;
  p.atom_freq2 = p.atom_freq1;
  return p;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view v, int line) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw ConfigError(line, "cannot parse number '" + std::string(v) + "'");
  if (!std::isfinite(out))
    throw ConfigError(line, "non-finite value '" + std::string(v) + "'");
  return out;
}

inline int parse_int(std::string_view v, int line) {
  int out = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end)
    throw ConfigError(line, "cannot parse integer '" + std::string(v) + "'");
  return out;
}

// "c,d; c,d; ..." pairs of chi/lambda and delta/lambda.
inline std::vector<Scenario> parse_sweep(std::string_view v, int line) {
  std::vector<Scenario> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    std::size_t semi = v.find(';', pos);
    if (semi == std::string_view::npos) semi = v.size();
    std::string_view item = trim(v.substr(pos, semi - pos));
    if (!item.empty()) {
      const std::size_t comma = item.find(',');
      if (comma == std::string_view::npos)
        throw ConfigError(line, "sweep entry '" + std::string(item) +
                                    "' is not 'chi,delta'");
      Scenario s;
      s.chi_over_lambda = parse_double(trim(item.substr(0, comma)), line);
      s.delta_over_lambda = parse_double(trim(item.substr(comma + 1)), line);
      out.push_back(s);
    }
    pos = semi + 1;
  }
  return out;
}

}  // namespace detail

// Accepted keys: omega1 omega2 Omega1 Omega2 lambda12 lambda chi beta
// alpha1_sq alpha2_sq n_max tail_tol tau_start tau_end tau_steps sweep.
// '#' starts a comment; unknown keys, bad values and violated invariants
// are rejected with the line number.
inline RunConfig parse_config(std::string_view text) {
  RunConfig c;
  int tau_line = 0;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(line_no, "expected key=value, got '" +
                                     std::string(line) + "'");
    const std::string key{detail::trim(line.substr(0, eq))};
    const std::string_view val = detail::trim(line.substr(eq + 1));

    if (key == "omega1") {
      c.params.atom_freq1 = detail::parse_double(val, line_no);
    } else if (key == "omega2") {
      c.params.atom_freq2 = detail::parse_double(val, line_no);
    } else if (key == "Omega1") {
      c.params.mode_freq1 = detail::parse_double(val, line_no);
    } else if (key == "Omega2") {
      c.params.mode_freq2 = detail::parse_double(val, line_no);
    } else if (key == "lambda12") {
      c.params.mode_coupling = detail::parse_double(val, line_no);
    } else if (key == "lambda") {
      const double v = detail::parse_double(val, line_no);
      if (!(v > 0.0)) throw ConfigError(line_no, "lambda must be positive");
      c.params.coupling1 = v;
      c.params.coupling2 = v;
    } else if (key == "chi") {
      c.params.kerr = detail::parse_double(val, line_no);
    } else if (key == "beta") {
      const double v = detail::parse_double(val, line_no);
      if (v < 0.0 || v > std::numbers::pi)
        throw ConfigError(line_no, "beta must lie in [0, pi]");
      c.params.beta = v;
    } else if (key == "alpha1_sq") {
      const double v = detail::parse_double(val, line_no);
      if (v < 0.0) throw ConfigError(line_no, "alpha1_sq must be >= 0");
      c.params.alpha1 = std::sqrt(v);
    } else if (key == "alpha2_sq") {
      const double v = detail::parse_double(val, line_no);
      if (v < 0.0) throw ConfigError(line_no, "alpha2_sq must be >= 0");
      c.params.alpha2 = std::sqrt(v);
    } else if (key == "n_max") {
      const int v = detail::parse_int(val, line_no);
      if (v < 1) throw ConfigError(line_no, "n_max must be >= 1");
      c.params.n_max = v;
    } else if (key == "tail_tol") {
      const double v = detail::parse_double(val, line_no);
      if (!(v > 0.0)) throw ConfigError(line_no, "tail_tol must be positive");
      c.params.tail_tol = v;
    } else if (key == "tau_start") {
      c.tau_start = detail::parse_double(val, line_no);
      tau_line = line_no;
    } else if (key == "tau_end") {
      c.tau_end = detail::parse_double(val, line_no);
      tau_line = line_no;
    } else if (key == "tau_steps") {
      c.tau_steps = detail::parse_int(val, line_no);
      tau_line = line_no;
    } else if (key == "sweep") {
      c.sweep = detail::parse_sweep(val, line_no);
    } else {
      throw ConfigError(line_no, "unknown key '" + key + "'");
    }
  }

  if (!(c.tau_start >= 0.0) || !(c.tau_end > c.tau_start))
    throw ConfigError(tau_line, "need tau_end > tau_start >= 0");
  if (c.tau_steps < 2) throw ConfigError(tau_line, "tau_steps must be >= 2");
  return c;
}

}  // namespace cavqed
