// Command-line driver: measure series, closed-form-vs-integrator
// validation, parameter sweeps, and per-block root dumps.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cavqed/config.hpp"
#include "cavqed/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitValidation = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cavqed::ConfigError(0, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cavqed::Error("cannot write '" + path + "'");
  out << data;
}

void append_kv(std::string& out, const char* key, double v) {
  out += key;
  out += '=';
  cavqed::detail::append_num(out, v);
  out += '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"entanglement dynamics of two atoms in a two-mode Kerr cavity"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string summary_path;
  std::string dump_path;
  double dump_tau = -1.0;
  int block_max = 25;
  int n1 = 0, n2 = 0;

  CLI::App* sim = app.add_subcommand("simulate", "measure series over the time grid");
  sim->add_option("--config", config_path, "configuration file")->required();
  sim->add_option("--out", out_path, "CSV output path (default stdout)");
  sim->add_option("--dump-state", dump_path, "also dump the state amplitudes to this CSV");
  sim->add_option("--dump-tau", dump_tau, "scaled time of the state dump (default tau_end)");

  CLI::App* val = app.add_subcommand("validate", "integrate every block and compare with the closed form");
  val->add_option("--config", config_path, "configuration file")->required();
  val->add_option("--out", out_path, "per-block CSV output path (default stdout)");
  val->add_option("--max-n", block_max, "largest block index to check (default 25)");

  CLI::App* swp = app.add_subcommand("sweep", "measure series for each (chi, delta) scenario");
  swp->add_option("--config", config_path, "configuration file")->required();
  swp->add_option("--out", out_path, "series CSV output path (default stdout)");
  swp->add_option("--summary-out", summary_path, "summary CSV output path");

  CLI::App* roots = app.add_subcommand("roots", "dump one block's coefficients, roots and weights");
  roots->add_option("--config", config_path, "configuration file")->required();
  roots->add_option("--n1", n1, "mode-1 block index")->required();
  roots->add_option("--n2", n2, "mode-2 block index")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    cavqed::RunConfig config = cavqed::parse_config(read_file(config_path));
    config.output_path = out_path;

    if (sim->parsed()) {
      const auto rows = cavqed::run_simulate(config);
      write_output(config.output_path, cavqed::measures_csv(rows));
      if (!dump_path.empty()) {
        const double tau = dump_tau >= 0.0 ? dump_tau : config.tau_end;
        const auto solver = cavqed::make_state_solver(config.params);
        const auto state =
            cavqed::assemble_state(solver, tau / config.params.coupling1);
        write_output(dump_path, cavqed::state_csv(state));
      }
      return 0;
    }

    if (val->parsed()) {
      cavqed::ValidateOptions opt;
      opt.block_max = block_max;
      const cavqed::ValidationReport rep = cavqed::run_validate(config, opt);
      write_output(config.output_path, rep.csv());
      std::cout << rep.summary() << "\n";
      std::string diag = "closed_form_weight_gap=";
      cavqed::detail::append_num(diag, rep.worst_closed_form_gap);
      diag += " norm_drift=";
      cavqed::detail::append_num(diag, rep.worst_norm_drift);
      std::cout << diag << "\n";
      return rep.passed() ? 0 : kExitValidation;
    }

    if (swp->parsed()) {
      const cavqed::SweepResult res = cavqed::run_sweep(config);
      write_output(config.output_path, res.series_csv);
      if (summary_path.empty() && !out_path.empty())
        summary_path = out_path + ".summary.csv";
      write_output(summary_path, res.summary_csv);
      return 0;
    }

    if (roots->parsed()) {
      const cavqed::ModelParams& p = config.params;
      p.validate();
      const cavqed::RotatedFrame frame = cavqed::rotated_frame(p);
      const cavqed::BlockCoefficients b =
          cavqed::block_coefficients(n1, n2, p.coupling1, p.kerr);
      const cavqed::CubicCoefficients cub =
          cavqed::characteristic_cubic(b, frame.detuning1);
      const cavqed::BlockSolution sol =
          cavqed::solve_block(p, frame, n1, n2);

      std::string out;
      append_kv(out, "n1", n1);
      append_kv(out, "n2", n2);
      append_kv(out, "delta", frame.detuning1);
      append_kv(out, "f1", b.f1);
      append_kv(out, "f2", b.f2);
      append_kv(out, "V1", b.v1);
      append_kv(out, "V2", b.v2);
      append_kv(out, "V3", b.v3);
      append_kv(out, "x1", cub.x1);
      append_kv(out, "x2", cub.x2);
      append_kv(out, "x3", cub.x3);
      append_kv(out, "mu1", sol.roots.mu[0]);
      append_kv(out, "mu2", sol.roots.mu[1]);
      append_kv(out, "mu3", sol.roots.mu[2]);
      append_kv(out, "b1", sol.weights[0].real());
      append_kv(out, "b2", sol.weights[1].real());
      append_kv(out, "b3", sol.weights[2].real());
      append_kv(out, "closed_form_gap", sol.closed_form_gap);
      std::cout << out;
      return 0;
    }
  } catch (const cavqed::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
