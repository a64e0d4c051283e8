// Command-line runner: time evolutions, parameter sweeps, and the gate
// design/analysis utilities, with CSV or JSON-lines output.

#include "qrabi/config.hpp"
#include "qrabi/errors.hpp"
#include "qrabi/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitVerification = 4;

fs::path executable_dir() {
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  return ec ? fs::path{} : exe.parent_path();
}

fs::path find_preset(const std::string& name) {
  std::vector<fs::path> candidates;
  candidates.emplace_back(fs::path("presets") / (name + ".cfg"));
  const fs::path exe_dir = executable_dir();
  if (!exe_dir.empty()) {
    candidates.emplace_back(exe_dir / "presets" / (name + ".cfg"));
    candidates.emplace_back(exe_dir / ".." / "presets" / (name + ".cfg"));
  }
#ifdef QRABI_PRESET_DIR
  candidates.emplace_back(fs::path(QRABI_PRESET_DIR) / (name + ".cfg"));
#endif
  for (const auto& path : candidates) {
    std::error_code ec;
    if (fs::exists(path, ec)) return path;
  }
  throw qrabi::ConfigError("preset '" + name + "' not found (looked for presets/" + name +
                           ".cfg next to the working directory, the executable, and the "
                           "source tree)");
}

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string out_path;
  std::string format = "csv";
  std::string frame;
  std::string cutoff;
  std::string threads;
  std::vector<std::string> overrides;  // key=value
};

void add_common_options(CLI::App* cmd, CommonOptions& opts, bool with_config = true) {
  if (with_config) {
    cmd->add_option("--config", opts.config_path, "Path to a key = value config file");
    cmd->add_option("--preset", opts.preset, "Named in-repo config (fig2, fig3, fig4, fig5)");
    cmd->add_option("--set", opts.overrides, "Override a config entry, e.g. --set samples=801")
        ->type_name("KEY=VALUE");
    cmd->add_option("--frame", opts.frame, "Frame for numeric-engine metrics (lab|rotating)")
        ->check(CLI::IsMember({"lab", "rotating"}));
    cmd->add_option("--cutoff", opts.cutoff, "Fock cutoff (integer or auto)");
    cmd->add_option("--threads", opts.threads, "Concurrent sweep points");
  }
  cmd->add_option("--out", opts.out_path, "Output path (default: stdout)");
  cmd->add_option("--format", opts.format, "Output format (csv|jsonl)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

qrabi::ExperimentConfig build_config(const CommonOptions& opts) {
  if (!opts.config_path.empty() && !opts.preset.empty()) {
    throw qrabi::ConfigError("give either --config or --preset, not both");
  }
  qrabi::ExperimentConfig cfg;
  if (!opts.preset.empty()) {
    cfg = qrabi::load_config_file(find_preset(opts.preset).string());
  } else if (!opts.config_path.empty()) {
    cfg = qrabi::load_config_file(opts.config_path);
  }
  for (const auto& entry : opts.overrides) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) {
      throw qrabi::ConfigError("override must be key=value, got '" + entry + "'");
    }
    qrabi::apply_config_entry(cfg, entry.substr(0, eq), entry.substr(eq + 1));
  }
  if (!opts.frame.empty()) qrabi::apply_config_entry(cfg, "frame", opts.frame);
  if (!opts.cutoff.empty()) qrabi::apply_config_entry(cfg, "cutoff", opts.cutoff);
  if (!opts.threads.empty()) qrabi::apply_config_entry(cfg, "threads", opts.threads);
  return cfg;
}

void emit(const qrabi::Table& table, const CommonOptions& opts) {
  if (opts.out_path.empty()) {
    if (opts.format == "csv") {
      qrabi::write_csv(table, std::cout);
    } else {
      qrabi::write_jsonl(table, std::cout);
    }
    return;
  }
  std::ofstream out(opts.out_path);
  if (!out) throw qrabi::ConfigError("cannot open output file " + opts.out_path);
  if (opts.format == "csv") {
    qrabi::write_csv(table, out);
  } else {
    qrabi::write_jsonl(table, out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qubit Rabi model simulator: Bell-state generation in the "
               "ultra-strong coupling regime"};
  app.require_subcommand(1);

  CommonOptions evolve_opts;
  CLI::App* evolve = app.add_subcommand("evolve", "Metrics along a time evolution");
  add_common_options(evolve, evolve_opts);

  CommonOptions sweep_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "Metrics at the peak times across a sweep");
  add_common_options(sweep, sweep_opts);

  CommonOptions design_opts;
  qrabi::GateDesignQuery query;
  CLI::App* design = app.add_subcommand("design", "Enumerate gate designs from the "
                                                  "coupling condition");
  design->add_option("--gamma1", query.gamma1, "Coupling of qubit 1 (absolute)")->required();
  design->add_option("--delta", query.delta, "Detuning (default 1)");
  design->add_option("--n-min", query.n_min, "Smallest revival index");
  design->add_option("--n-max", query.n_max, "Largest revival index");
  design->add_option("--m-min", query.m_min, "Smallest phase index");
  design->add_option("--m-max", query.m_max, "Largest phase index");
  design->add_option("--gamma2-max", query.gamma2_max,
                     "Drop designs whose solved gamma2 exceeds this bound");
  bool no_verify = false;
  design->add_flag("--no-verify", no_verify, "Skip propagator verification");
  add_common_options(design, design_opts, /*with_config=*/false);

  CommonOptions analyze_opts;
  std::string bell_name;
  CLI::App* analyze = app.add_subcommand("analyze", "Evolve a Bell state to the first peak "
                                                    "and report the basis outcome");
  analyze->add_option("--bell", bell_name, "psi_plus|psi_minus|phi_plus|phi_minus")
      ->required()
      ->check(CLI::IsMember({"psi_plus", "psi_minus", "phi_plus", "phi_minus"}));
  add_common_options(analyze, analyze_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (evolve->parsed()) {
      emit(qrabi::run_evolve(build_config(evolve_opts)), evolve_opts);
    } else if (sweep->parsed()) {
      emit(qrabi::run_sweep(build_config(sweep_opts)), sweep_opts);
    } else if (design->parsed()) {
      query.verify = !no_verify;
      const qrabi::Table table = qrabi::run_gate_design(query);
      emit(table, design_opts);
      if (table.rows.empty()) {
        std::cerr << "design: no (n, m) solutions within the requested bounds\n";
      }
      if (query.verify && !qrabi::all_designs_verified(table)) {
        std::cerr << "design: at least one design failed propagator verification\n";
        return kExitVerification;
      }
    } else if (analyze->parsed()) {
      emit(qrabi::run_gate_analyze(qrabi::bell_label_from_string(bell_name),
                                   build_config(analyze_opts)),
           analyze_opts);
    }
  } catch (const qrabi::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qrabi::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
