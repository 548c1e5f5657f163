#pragma once

// Simulation drivers: measure series over a scaled-time grid, bulk
// closed-form-vs-integrator validation, parameter sweeps, and the CSV
// emitters behind the command-line tool. All outputs are byte-deterministic
// for a fixed configuration, independent of the worker count.

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "cavqed/config.hpp"
#include "cavqed/measures.hpp"
#include "cavqed/oracle.hpp"
#include "cavqed/state.hpp"

namespace cavqed {

// Worker count: CAVITY_THREADS if set, hardware concurrency otherwise.
inline unsigned worker_count() {
  if (const char* env = std::getenv("CAVITY_THREADS")) {
    int v = 0;
    auto [p, ec] = std::from_chars(env, env + std::string_view(env).size(), v);
    (void)p;
    if (ec == std::errc() && v >= 1) return unsigned(v);
    return 1;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Index-based work distribution; results must be written to per-index
// slots, which keeps every output independent of scheduling. The
// lowest-index exception wins, so failures are deterministic too.
template <typename F>
inline void parallel_for(std::size_t n, F&& body) {
  const unsigned workers =
      unsigned(std::min<std::size_t>(worker_count(), n ? n : 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::size_t err_index = SIZE_MAX;
  std::exception_ptr err;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

namespace detail {

// Locale-independent shortest-faithful float formatting, 17 significant
// digits.
inline void append_num(std::string& out, double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v,
                               std::chars_format::general, 17);
  (void)ec;
  out.append(buf, p);
}

inline void append_num(std::string& out, int v) {
  char buf[16];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.append(buf, p);
}

// shortest round-trip form, for labels
inline void append_num_short(std::string& out, double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  out.append(buf, p);
}

}  // namespace detail

inline std::vector<MeasureSample> run_simulate(const RunConfig& c) {
  const StateSolver solver = make_state_solver(c.params);
  const std::vector<double> grid = tau_grid(c);
  std::vector<MeasureSample> rows(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    try {
      const double t = grid[i] / c.params.coupling1;
      rows[i] = measure_state(assemble_state(solver, t), grid[i]);
    } catch (const Error& e) {
      std::string tau;
      detail::append_num(tau, grid[i]);
      throw Error("tau=" + tau + ": " + e.what());
    }
  });
  return rows;
}

inline std::string measures_csv(const std::vector<MeasureSample>& rows,
                                const std::string& scenario_label = {}) {
  std::string out;
  out += scenario_label.empty()
             ? "tau,entropy,concurrence,negativity,norm_error\n"
             : "scenario,tau,entropy,concurrence,negativity,norm_error\n";
  for (const MeasureSample& m : rows) {
    if (!scenario_label.empty()) {
      out += scenario_label;
      out += ',';
    }
    detail::append_num(out, m.tau);
    out += ',';
    detail::append_num(out, m.entropy);
    out += ',';
    detail::append_num(out, m.concurrence);
    out += ',';
    detail::append_num(out, m.negativity);
    out += ',';
    detail::append_num(out, m.norm_error);
    out += '\n';
  }
  return out;
}

struct BlockValidation {
  int n1 = 0;
  int n2 = 0;
  double max_deviation = 0.0;
  double norm_drift = 0.0;
};

struct ValidationReport {
  std::vector<BlockValidation> blocks;
  double max_deviation = 0.0;
  double worst_norm_drift = 0.0;
  double worst_closed_form_gap = 0.0;
  double threshold = 1e-6;

  bool passed() const { return max_deviation <= threshold; }

  std::string csv() const {
    std::string out = "block_n1,block_n2,max_deviation,norm_drift\n";
    for (const BlockValidation& b : blocks) {
      detail::append_num(out, b.n1);
      out += ',';
      detail::append_num(out, b.n2);
      out += ',';
      detail::append_num(out, b.max_deviation);
      out += ',';
      detail::append_num(out, b.norm_drift);
      out += '\n';
    }
    return out;
  }

  std::string summary() const {
    std::string out = "max_deviation=";
    detail::append_num(out, max_deviation);
    out += " blocks=";
    detail::append_num(out, int(blocks.size()));
    return out;
  }
};

struct ValidateOptions {
  int block_max = 25;           // integrate blocks with n1, n2 <= block_max
  double target_accuracy = 0.0; // 0: pick from the Kerr strength
  double threshold = 1e-6;      // pass/fail deviation bound
};

// Integrate every block against the closed-form amplitudes on the config's
// time grid. The integrator runs in the Kerr-rotated picture with a
// per-block step; the step-choice rule is certified by step-halving on a
// deterministic subset of blocks including the fastest one.
inline ValidationReport run_validate(const RunConfig& c,
                                     const ValidateOptions& vopt = {}) {
  c.params.validate();
  const RotatedFrame frame = rotated_frame(c.params);
  if (!c.params.identical_atoms() || frame.detuning1 != frame.detuning2)
    throw std::invalid_argument(
        "run_validate: closed-form path requires identical atoms");

  std::vector<double> grid = tau_grid(c);
  for (double& t : grid) t /= c.params.coupling1;
  // the integrator starts from the t = 0 state; anchor the grid there
  if (grid.front() > 0.0) grid.insert(grid.begin(), 0.0);

  const int side = vopt.block_max + 1;
  const double target = vopt.target_accuracy > 0.0
                            ? vopt.target_accuracy
                            : (c.params.kerr != 0.0 ? 2.5e-7 : 6e-9);

  ValidationReport rep;
  rep.threshold = vopt.threshold;
  rep.blocks.resize(std::size_t(side) * side);
  std::vector<double> gaps(rep.blocks.size(), 0.0);

  parallel_for(rep.blocks.size(), [&](std::size_t idx) {
    const int n1 = int(idx) / side;
    const int n2 = int(idx) % side;
    try {
      IntegratorOptions opt;
      opt.factor_kerr_phase = true;
      opt.target_accuracy = target;
      // step-halving certification on a sparse deterministic subset
      opt.validate_steps = ((n1 + n2) % 16 == 0) ||
                           (n1 == vopt.block_max && n2 == vopt.block_max);
      const OdeTrajectory traj =
          integrate_block(c.params, n1, n2, grid, opt);
      const BlockSolution sol = solve_block(c.params, frame, n1, n2);
      rep.blocks[idx] = {n1, n2, compare_block(sol, traj, grid),
                         traj.norm_drift};
      gaps[idx] = sol.closed_form_gap;
    } catch (const Error& e) {
      throw Error("block (" + std::to_string(n1) + "," + std::to_string(n2) +
                  "): " + e.what());
    }
  });

  for (std::size_t i = 0; i < rep.blocks.size(); ++i) {
    rep.max_deviation = std::max(rep.max_deviation, rep.blocks[i].max_deviation);
    rep.worst_norm_drift = std::max(rep.worst_norm_drift, rep.blocks[i].norm_drift);
    rep.worst_closed_form_gap = std::max(rep.worst_closed_form_gap, gaps[i]);
  }
  return rep;
}

struct SweepResult {
  std::vector<std::string> labels;
  std::vector<std::vector<MeasureSample>> series;
  std::string series_csv;
  std::string summary_csv;
};

inline std::string scenario_label(const Scenario& s) {
  std::string out = "chi";
  detail::append_num_short(out, s.chi_over_lambda);
  out += "_delta";
  detail::append_num_short(out, s.delta_over_lambda);
  return out;
}

// Default scenario grid: Kerr off/on crossed with resonance/detuned.
inline std::vector<Scenario> default_sweep() {
  return {{0.0, 0.0}, {0.0, 5.0}, {0.4, 0.0}, {0.4, 5.0}};
}

inline SweepResult run_sweep(const RunConfig& c) {
  SweepResult out;
  const std::vector<Scenario> scenarios =
      c.sweep.empty() ? default_sweep() : c.sweep;

  out.labels.resize(scenarios.size());
  out.series.resize(scenarios.size());
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    RunConfig sc = c;
    sc.params = scenario_params(c.params, scenarios[s]);
    sc.sweep.clear();
    out.labels[s] = scenario_label(scenarios[s]);
    out.series[s] = run_simulate(sc);
  }

  out.series_csv = "scenario,tau,entropy,concurrence,negativity,norm_error\n";
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const std::string body = measures_csv(out.series[s], out.labels[s]);
    out.series_csv += body.substr(body.find('\n') + 1);
  }

  out.summary_csv =
      "scenario,max_entropy,mean_entropy,max_concurrence,max_negativity\n";
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    double smax = 0.0, ssum = 0.0, cmax = 0.0, nmax = 0.0;
    for (const MeasureSample& m : out.series[s]) {
      smax = std::max(smax, m.entropy);
      ssum += m.entropy;
      cmax = std::max(cmax, m.concurrence);
      nmax = std::max(nmax, m.negativity);
    }
    out.summary_csv += out.labels[s];
    out.summary_csv += ',';
    detail::append_num(out.summary_csv, smax);
    out.summary_csv += ',';
    detail::append_num(out.summary_csv, ssum / double(out.series[s].size()));
    out.summary_csv += ',';
    detail::append_num(out.summary_csv, cmax);
    out.summary_csv += ',';
    detail::append_num(out.summary_csv, nmax);
    out.summary_csv += '\n';
  }
  return out;
}

// Debug dump of a state's stored amplitudes, atoms numbered 1..4.
inline std::string state_csv(const JointState& st) {
  std::string out = "atom_index,n1,n2,re,im\n";
  for (int atom = 0; atom < 4; ++atom) {
    for (int m1 = 0; m1 < st.dim; ++m1) {
      for (int m2 = 0; m2 < st.dim; ++m2) {
        const cplx z = st.at(atom, m1, m2);
        if (z == cplx(0.0)) continue;
        detail::append_num(out, atom + 1);
        out += ',';
        detail::append_num(out, m1);
        out += ',';
        detail::append_num(out, m2);
        out += ',';
        detail::append_num(out, z.real());
        out += ',';
        detail::append_num(out, z.imag());
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace cavqed
