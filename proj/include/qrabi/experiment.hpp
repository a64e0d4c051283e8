// Configuration-driven experiment runner: time evolutions, parameter sweeps,
// and the gate design/analysis utilities, all emitting machine-readable tables.

#pragma once

#include "qrabi/config.hpp"
#include "qrabi/metrics.hpp"

#include <iosfwd>
#include <variant>

namespace qrabi {

using Value = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  std::size_t column(const std::string& name) const;  // throws if absent
  double number(std::size_t row, const std::string& name) const;
  const std::string& text(std::size_t row, const std::string& name) const;
};

// One row per time sample with the requested metrics; deterministic given the
// config. Throws ConfigError on invalid configs and ConvergenceError when the
// Fock tail exceeds the cutoff tolerance.
Table run_evolve(const ExperimentConfig& cfg);

// One row per (sweep value, peak time) pair, metrics sampled at t1 and t3;
// peak times are recomputed from the detuning of each sweep point. Points run
// concurrently up to cfg.threads; row order is independent of scheduling.
Table run_sweep(const ExperimentConfig& cfg);

struct GateDesignQuery {
  double gamma1 = 0.0;  // absolute coupling of qubit 1
  double delta = 1.0;
  int n_min = 1;
  int n_max = 1;
  int m_min = 0;
  int m_max = 8;
  double gamma2_max = 0.0;  // drop designs whose solved gamma2 exceeds this; 0 = no bound
  bool verify = true;       // check each design against the propagator
};

// Coupling-condition solutions in the requested (n, m) window, as domain
// values. May be empty when the gamma2 bound filters everything out.
std::vector<GateDesign> enumerate_gate_designs(const GateDesignQuery& query);

// The same enumeration as a table, optionally verified against the propagator.
Table run_gate_design(const GateDesignQuery& query);

// Whether every verified design row met the overlap threshold (1 - 1e-8).
bool all_designs_verified(const Table& designs);

// Evolve the chosen Bell state ⊗ |0> forward to the first peak and report the
// dominant computational-basis outcome.
Table run_gate_analyze(BellLabel bell, const ExperimentConfig& cfg);

// CSV: one header row, fixed column order, 17 significant digits.
void write_csv(const Table& table, std::ostream& os);

// JSON-lines alternative: one object per row, keys in column order.
void write_jsonl(const Table& table, std::ostream& os);

std::string format_value(const Value& v);

}  // namespace qrabi
