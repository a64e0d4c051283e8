#include "qrabi/config.hpp"

#include "qrabi/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qrabi {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(x)) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + value);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("config: bad integer value for '" + key + "': " + value);
  }
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

// start:stop:count, inclusive endpoints; count = 1 emits start only.
void expand_range(const std::string& key, const std::string& token, std::vector<double>& out) {
  const auto parts = split(token, ':');
  if (parts.size() != 3) {
    throw ConfigError("config: '" + key + "' range must be start:stop:count, got " + token);
  }
  const double start = parse_double(key, parts[0]);
  const double stop = parse_double(key, parts[1]);
  const int count = parse_int(key, parts[2]);
  if (count < 1) throw ConfigError("config: range count must be >= 1 in '" + key + "'");
  if (count == 1) {
    out.push_back(start);
    return;
  }
  for (int i = 0; i < count; ++i) {
    out.push_back(start + (stop - start) * static_cast<double>(i) / (count - 1));
  }
}

std::string format17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string to_string(EngineKind e) {
  switch (e) {
    case EngineKind::analytic: return "analytic";
    case EngineKind::numeric: return "numeric";
    case EngineKind::both: return "both";
  }
  throw std::invalid_argument("bad EngineKind");
}

std::string to_string(CouplingUnit u) {
  return u == CouplingUnit::delta ? "delta" : "omega";
}

std::string to_string(PeakReference r) {
  return r == PeakReference::delta ? "delta" : "omega";
}

std::string to_string(const BosonSpec& b) {
  switch (b.kind) {
    case BosonSpec::Kind::vacuum: return "vacuum";
    case BosonSpec::Kind::fock: return "fock:" + std::to_string(static_cast<int>(b.value));
    case BosonSpec::Kind::coherent: return "coherent:" + format17(b.value);
    case BosonSpec::Kind::thermal: return "thermal:" + format17(b.value);
  }
  throw std::invalid_argument("bad BosonSpec");
}

std::string to_string(FrameSpec::Kind k) {
  return k == FrameSpec::Kind::lab ? "lab" : "rotating";
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "engine") {
    if (value == "analytic") cfg.engine = EngineKind::analytic;
    else if (value == "numeric") cfg.engine = EngineKind::numeric;
    else if (value == "both") cfg.engine = EngineKind::both;
    else throw ConfigError("config: engine must be analytic|numeric|both, got " + value);
  } else if (key == "omega") {
    cfg.omega = parse_double(key, value);
  } else if (key == "omega_q") {
    cfg.omega1 = cfg.omega2 = parse_double(key, value);
  } else if (key == "omega1") {
    cfg.omega1 = parse_double(key, value);
  } else if (key == "omega2") {
    cfg.omega2 = parse_double(key, value);
  } else if (key == "coupling_unit") {
    if (value == "delta") cfg.coupling_unit = CouplingUnit::delta;
    else if (value == "omega") cfg.coupling_unit = CouplingUnit::omega;
    else throw ConfigError("config: coupling_unit must be delta|omega, got " + value);
  } else if (key == "gamma1") {
    cfg.gamma1 = parse_double(key, value);
  } else if (key == "gamma2") {
    cfg.gamma2 = parse_double(key, value);
  } else if (key == "initial_qubits") {
    try {
      cfg.initial_qubits = qubit_label_from_string(value);
    } catch (const std::exception&) {
      throw ConfigError("config: initial_qubits must be gg|ge|eg|ee, got " + value);
    }
  } else if (key == "initial_boson") {
    if (value == "vacuum") {
      cfg.initial_boson = BosonSpec{};
    } else {
      const auto parts = split(value, ':');
      if (parts.size() != 2) {
        throw ConfigError("config: initial_boson must be vacuum|fock:N|coherent:A|thermal:NBAR");
      }
      BosonSpec spec;
      if (parts[0] == "fock") {
        spec.kind = BosonSpec::Kind::fock;
        spec.value = parse_int(key, parts[1]);
        if (spec.value < 0) throw ConfigError("config: fock level must be >= 0");
      } else if (parts[0] == "coherent") {
        spec.kind = BosonSpec::Kind::coherent;
        spec.value = parse_double(key, parts[1]);
      } else if (parts[0] == "thermal") {
        spec.kind = BosonSpec::Kind::thermal;
        spec.value = parse_double(key, parts[1]);
        if (spec.value < 0) throw ConfigError("config: thermal occupancy must be >= 0");
      } else {
        throw ConfigError("config: unknown boson preparation '" + parts[0] + "'");
      }
      cfg.initial_boson = spec;
    }
  } else if (key == "frame") {
    if (value == "lab") cfg.frame = FrameSpec::Kind::lab;
    else if (value == "rotating") cfg.frame = FrameSpec::Kind::rotating;
    else throw ConfigError("config: frame must be lab|rotating, got " + value);
  } else if (key == "peak_reference") {
    if (value == "delta") cfg.peak_reference = PeakReference::delta;
    else if (value == "omega") cfg.peak_reference = PeakReference::omega;
    else throw ConfigError("config: peak_reference must be delta|omega, got " + value);
  } else if (key == "t_delta_max") {
    cfg.t_delta_max = parse_double(key, value);
  } else if (key == "samples") {
    cfg.samples = parse_int(key, value);
  } else if (key == "cutoff") {
    if (value == "auto") cfg.cutoff.reset();
    else cfg.cutoff = parse_int(key, value);
  } else if (key == "outputs") {
    cfg.outputs = split(value, ',');
  } else if (key == "sweep_parameter") {
    if (!cfg.sweep) cfg.sweep.emplace();
    cfg.sweep->parameter = value;
  } else if (key == "sweep_values") {
    if (!cfg.sweep) cfg.sweep.emplace();
    for (const auto& tok : split(value, ',')) {
      cfg.sweep->values.push_back(parse_double(key, tok));
    }
  } else if (key == "sweep_range") {
    if (!cfg.sweep) cfg.sweep.emplace();
    for (const auto& tok : split(value, ',')) expand_range(key, tok, cfg.sweep->values);
  } else if (key == "threads") {
    cfg.threads = parse_int(key, value);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(line_no) + " is not 'key = value'");
    }
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (!(cfg.omega > 0.0)) throw ConfigError("config: omega must be > 0");
  if (cfg.omega1 < 0.0 || cfg.omega2 < 0.0) throw ConfigError("config: qubit frequencies < 0");
  if (cfg.gamma1 < 0.0 || cfg.gamma2 < 0.0) throw ConfigError("config: couplings must be >= 0");
  if (cfg.samples < 2) throw ConfigError("config: samples must be >= 2");
  if (!(cfg.t_delta_max > 0.0)) throw ConfigError("config: t_delta_max must be > 0");
  if (cfg.threads < 1) throw ConfigError("config: threads must be >= 1");
  if (cfg.cutoff && *cfg.cutoff < 2) throw ConfigError("config: cutoff must be >= 2 or auto");
  if (cfg.sweep) {
    const auto& sweep = *cfg.sweep;
    if (sweep.parameter != "omega_q_over_omega" && sweep.parameter != "omega1_over_omega") {
      throw ConfigError("config: sweep_parameter must be omega_q_over_omega|omega1_over_omega");
    }
    if (sweep.values.empty()) throw ConfigError("config: sweep has no values");
    for (double v : sweep.values) {
      if (!std::isfinite(v)) throw ConfigError("config: sweep value not finite");
    }
    if (!std::is_sorted(sweep.values.begin(), sweep.values.end()) ||
        std::adjacent_find(sweep.values.begin(), sweep.values.end()) != sweep.values.end()) {
      throw ConfigError("config: sweep values must be strictly increasing");
    }
  }
  // Engine preconditions that do not depend on the sweep point.
  if (cfg.engine != EngineKind::numeric && !cfg.sweep) {
    if (cfg.omega1 != cfg.omega2) {
      throw ConfigError("config: analytic engine requires equal qubit frequencies");
    }
    if (!(cfg.omega - cfg.omega1 > 0.0)) {
      throw ConfigError("config: analytic engine requires positive detuning");
    }
  }
  if (cfg.engine == EngineKind::both && !cfg.initial_boson.is_pure()) {
    throw ConfigError("config: engine=both requires a pure initial boson state");
  }
}

std::string canonical_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "engine=" << to_string(cfg.engine) << '\n';
  out << "omega=" << format17(cfg.omega) << '\n';
  out << "omega1=" << format17(cfg.omega1) << '\n';
  out << "omega2=" << format17(cfg.omega2) << '\n';
  out << "coupling_unit=" << to_string(cfg.coupling_unit) << '\n';
  out << "gamma1=" << format17(cfg.gamma1) << '\n';
  out << "gamma2=" << format17(cfg.gamma2) << '\n';
  out << "initial_qubits=" << to_string(cfg.initial_qubits) << '\n';
  out << "initial_boson=" << to_string(cfg.initial_boson) << '\n';
  out << "frame=" << to_string(cfg.frame) << '\n';
  out << "peak_reference=" << to_string(cfg.peak_reference) << '\n';
  out << "t_delta_max=" << format17(cfg.t_delta_max) << '\n';
  out << "samples=" << cfg.samples << '\n';
  out << "cutoff=" << (cfg.cutoff ? std::to_string(*cfg.cutoff) : std::string("auto")) << '\n';
  out << "outputs=";
  for (std::size_t i = 0; i < cfg.outputs.size(); ++i) {
    if (i) out << ',';
    out << cfg.outputs[i];
  }
  out << '\n';
  if (cfg.sweep) {
    out << "sweep_parameter=" << cfg.sweep->parameter << '\n';
    out << "sweep_values=";
    for (std::size_t i = 0; i < cfg.sweep->values.size(); ++i) {
      if (i) out << ',';
      out << format17(cfg.sweep->values[i]);
    }
    out << '\n';
  }
  return out.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string config_hash(const ExperimentConfig& cfg) { return fnv1a_hex(canonical_text(cfg)); }

namespace {

ResolvedPoint resolve_impl(const ExperimentConfig& cfg, double omega1, double omega2) {
  const double delta_ref = cfg.omega - omega1;
  if (!(delta_ref > 0.0)) {
    throw ConfigError("config: resolved detuning must be positive (omega1 < omega)");
  }
  const double unit = (cfg.coupling_unit == CouplingUnit::delta) ? delta_ref : cfg.omega;
  ResolvedPoint point;
  point.params = RabiParams{cfg.omega, omega1, omega2, cfg.gamma1 * unit, cfg.gamma2 * unit};
  point.delta_ref = delta_ref;
  point.peak_freq = (cfg.peak_reference == PeakReference::delta) ? delta_ref : cfg.omega;

  if (cfg.cutoff) {
    point.cutoff = make_cutoff(*cfg.cutoff);
  } else {
    // Extend the coupling-driven reach by the spread of the initial boson state.
    double extent = 0.0;
    switch (cfg.initial_boson.kind) {
      case BosonSpec::Kind::vacuum: extent = 0.0; break;
      case BosonSpec::Kind::fock: extent = 2.0 * std::sqrt(cfg.initial_boson.value + 1.0); break;
      case BosonSpec::Kind::coherent: extent = std::abs(cfg.initial_boson.value); break;
      case BosonSpec::Kind::thermal: extent = 2.0 * std::sqrt(cfg.initial_boson.value + 1.0); break;
    }
    // Displacement reach: the slow-qubit model swings by 2(G1+G2)/Delta; the
    // full Hamiltonian swings on the bare oscillator scale 2(G1+G2)/omega.
    const double coupling_sum = point.params.gamma1 + point.params.gamma2;
    double reach = 0.0;
    if (cfg.engine != EngineKind::numeric) reach = 2.0 * coupling_sum / delta_ref;
    if (cfg.engine != EngineKind::analytic) {
      reach = std::max(reach, 2.0 * coupling_sum / cfg.omega);
    }
    reach += extent;
    const int n_max = static_cast<int>(std::ceil(reach * reach + 8.0 * reach + 20.0));
    point.cutoff = make_cutoff(std::max(n_max, 2));
  }

  point.frame = (cfg.frame == FrameSpec::Kind::lab)
                    ? FrameSpec::lab()
                    : FrameSpec::rotating(std::min(omega1, omega2), omega1, omega2);
  return point;
}

}  // namespace

ResolvedPoint resolve(const ExperimentConfig& cfg) {
  return resolve_impl(cfg, cfg.omega1, cfg.omega2);
}

ResolvedPoint resolve_at(const ExperimentConfig& cfg, double sweep_value) {
  if (!cfg.sweep) throw ConfigError("config: resolve_at without a sweep");
  if (cfg.sweep->parameter == "omega_q_over_omega") {
    const double wq = sweep_value * cfg.omega;
    return resolve_impl(cfg, wq, wq);
  }
  return resolve_impl(cfg, sweep_value * cfg.omega, cfg.omega2);
}

}  // namespace qrabi
