// Declarative experiment configuration: a flat key = value text format with
// '#' comments, plus resolution of derived quantities (absolute couplings,
// detuning, cutoff, frame) for a run or a sweep point.

#pragma once

#include "qrabi/model.hpp"
#include "qrabi/numeric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qrabi {

enum class EngineKind { analytic, numeric, both };

struct BosonSpec {
  enum class Kind { vacuum, fock, coherent, thermal };
  Kind kind = Kind::vacuum;
  double value = 0.0;  // Fock level, coherent amplitude, or mean occupancy

  bool is_pure() const { return kind != Kind::thermal; }
};

enum class CouplingUnit { delta, omega };

// Which frequency defines the revival times 2*pi*n sampled by sweeps: the
// slow-qubit detuning (the model's own peaks) or the bare boson frequency
// (where the full dynamics actually revives once omega_q is not negligible).
enum class PeakReference { delta, omega };

struct SweepSpec {
  std::string parameter;  // omega_q_over_omega | omega1_over_omega
  std::vector<double> values;
};

struct ExperimentConfig {
  EngineKind engine = EngineKind::analytic;
  double omega = 1.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
  CouplingUnit coupling_unit = CouplingUnit::delta;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  QubitLabel initial_qubits = QubitLabel::gg;
  BosonSpec initial_boson;
  FrameSpec::Kind frame = FrameSpec::Kind::rotating;
  PeakReference peak_reference = PeakReference::delta;
  double t_delta_max = 8.0 * kPi;
  int samples = 4001;
  std::optional<int> cutoff;         // empty = auto
  std::vector<std::string> outputs;  // empty = all metric columns
  std::optional<SweepSpec> sweep;
  int threads = 1;
};

// Parse one key = value assignment into the config; throws ConfigError on
// unknown keys or malformed values. Shared by the file parser and CLI flags.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Semantic checks beyond per-entry syntax (ordered sweep values, engine
// preconditions, positive grid, ...). Throws ConfigError.
void validate_config(const ExperimentConfig& cfg);

// Canonical single-string form of the fully resolved config; identical
// configs serialize identically.
std::string canonical_text(const ExperimentConfig& cfg);

// 16-hex-digit FNV-1a hash of canonical_text, echoed on every output row.
std::string config_hash(const ExperimentConfig& cfg);
std::string fnv1a_hex(const std::string& bytes);

// One fully resolved parameter point of a run.
struct ResolvedPoint {
  RabiParams params;   // absolute frequencies and couplings
  double delta_ref;    // detuning used for time scaling (omega - omega1)
  double peak_freq;    // frequency whose period sets the sweep peak times
  FockCutoff cutoff;
  FrameSpec frame;
};

ResolvedPoint resolve(const ExperimentConfig& cfg);
ResolvedPoint resolve_at(const ExperimentConfig& cfg, double sweep_value);

std::string to_string(EngineKind e);
std::string to_string(CouplingUnit u);
std::string to_string(PeakReference r);
std::string to_string(const BosonSpec& b);
std::string to_string(FrameSpec::Kind k);

}  // namespace qrabi
