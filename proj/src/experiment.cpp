#include "qrabi/experiment.hpp"

#include "qrabi/analytic.hpp"
#include "qrabi/errors.hpp"
#include "qrabi/numeric.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace qrabi {

namespace {

constexpr std::array<const char*, 9> kMetricColumns = {
    "P_gg_0",        "P_ee_0",        "purity_q",     "concurrence", "fid_psi_plus",
    "fid_psi_minus", "fid_phi_plus",  "fid_phi_minus", "parity_exp"};

constexpr double kThermalWeightCut = 1e-14;

std::vector<std::string> selected_metrics(const ExperimentConfig& cfg) {
  if (cfg.outputs.empty()) {
    return {kMetricColumns.begin(), kMetricColumns.end()};
  }
  std::vector<std::string> selected;
  for (const char* name : kMetricColumns) {
    if (std::find(cfg.outputs.begin(), cfg.outputs.end(), name) != cfg.outputs.end()) {
      selected.push_back(name);
    }
  }
  for (const auto& requested : cfg.outputs) {
    if (std::find(kMetricColumns.begin(), kMetricColumns.end(), requested) ==
        kMetricColumns.end()) {
      throw ConfigError("config: unknown output metric '" + requested + "'");
    }
  }
  return selected;
}

double metric_value(const MetricsRecord& rec, const std::string& name) {
  if (name == "P_gg_0") return rec.joint(QubitLabel::gg, 0);
  if (name == "P_ee_0") return rec.joint(QubitLabel::ee, 0);
  if (name == "purity_q") return rec.purity_q;
  if (name == "concurrence") return rec.concurrence;
  if (name == "fid_psi_plus") return rec.bell_fidelity[0];
  if (name == "fid_psi_minus") return rec.bell_fidelity[1];
  if (name == "fid_phi_plus") return rec.bell_fidelity[2];
  if (name == "fid_phi_minus") return rec.bell_fidelity[3];
  if (name == "parity_exp") return rec.parity_expectation;
  throw std::invalid_argument("unknown metric " + name);
}

StateVector initial_pure_state(const ExperimentConfig& cfg, const FockCutoff& cutoff) {
  const Index n = cutoff.n_max;
  switch (cfg.initial_boson.kind) {
    case BosonSpec::Kind::vacuum:
      return basis_state(cfg.initial_qubits, 0, n);
    case BosonSpec::Kind::fock: {
      const int level = static_cast<int>(cfg.initial_boson.value);
      if (level >= n) throw ConfigError("config: initial Fock level exceeds cutoff");
      return basis_state(cfg.initial_qubits, level, n);
    }
    case BosonSpec::Kind::coherent: {
      const Vector boson = coherent_state(cfg.initial_boson.value, cutoff).amplitudes;
      Vector amps = Vector::Zero(4 * n);
      amps.segment(static_cast<Index>(cfg.initial_qubits) * n, n) = boson;
      return StateVector{std::move(amps), composite_dims(n)};
    }
    case BosonSpec::Kind::thermal:
      break;
  }
  throw std::invalid_argument("initial_pure_state: not a pure preparation");
}

// Diagonal Fock components of a thermal preparation, heaviest first.
std::vector<std::pair<int, double>> thermal_components(double nbar, const FockCutoff& cutoff) {
  const DensityMatrix rho = thermal_state(nbar, cutoff);
  std::vector<std::pair<int, double>> parts;
  for (Index k = 0; k < cutoff.n_max; ++k) {
    const double p = rho.entries(k, k).real();
    if (p >= kThermalWeightCut) parts.emplace_back(static_cast<int>(k), p);
  }
  return parts;
}

struct EngineOutput {
  std::vector<MetricsRecord> records;
  std::vector<StateVector> pure_states;  // populated for pure preparations only
  double max_tail = 0.0;
};

EngineOutput run_analytic_at(const ExperimentConfig& cfg, const ResolvedPoint& point,
                             const std::vector<double>& t_raw,
                             const std::vector<double>& t_delta) {
  const AnalyticEngine engine(point.params, point.cutoff);
  EngineOutput out;
  out.records.reserve(t_raw.size());
  if (cfg.initial_boson.is_pure()) {
    const StateVector psi0 = initial_pure_state(cfg, point.cutoff);
    out.pure_states.reserve(t_raw.size());
    for (std::size_t i = 0; i < t_raw.size(); ++i) {
      StateVector psi = engine.evolve(psi0, t_raw[i]);
      out.max_tail = std::max(out.max_tail, fock_tail_population(psi));
      out.records.push_back(record(psi, t_delta[i]));
      out.pure_states.push_back(std::move(psi));
    }
    return out;
  }
  const auto parts = thermal_components(cfg.initial_boson.value, point.cutoff);
  std::vector<MetricsAccumulator> acc(t_raw.size(), MetricsAccumulator(point.cutoff.n_max));
  for (const auto& [level, weight] : parts) {
    const StateVector psi0 = basis_state(cfg.initial_qubits, level, point.cutoff.n_max);
    for (std::size_t i = 0; i < t_raw.size(); ++i) {
      const StateVector psi = engine.evolve(psi0, t_raw[i]);
      out.max_tail = std::max(out.max_tail, weight * fock_tail_population(psi));
      acc[i].add(psi, weight);
    }
  }
  for (std::size_t i = 0; i < t_raw.size(); ++i) {
    out.records.push_back(acc[i].finalize(t_delta[i]));
  }
  return out;
}

EngineOutput run_numeric_at(const ExperimentConfig& cfg, const ResolvedPoint& point,
                            const std::vector<double>& t_raw,
                            const std::vector<double>& t_delta) {
  const Operator h = build_full_hamiltonian(point.params, point.cutoff);
  const Spectrum spectrum = eigendecompose(h);
  EngineOutput out;
  out.records.reserve(t_raw.size());
  if (cfg.initial_boson.is_pure()) {
    const StateVector psi0 = initial_pure_state(cfg, point.cutoff);
    Trajectory traj = propagate(spectrum, psi0, t_raw);
    out.pure_states.reserve(t_raw.size());
    for (std::size_t i = 0; i < t_raw.size(); ++i) {
      StateVector framed = to_frame(traj.states[i], t_raw[i], point.frame);
      out.max_tail = std::max(out.max_tail, fock_tail_population(framed));
      out.records.push_back(record(framed, t_delta[i]));
      out.pure_states.push_back(std::move(framed));
    }
    return out;
  }
  const auto parts = thermal_components(cfg.initial_boson.value, point.cutoff);
  std::vector<MetricsAccumulator> acc(t_raw.size(), MetricsAccumulator(point.cutoff.n_max));
  for (const auto& [level, weight] : parts) {
    const StateVector psi0 = basis_state(cfg.initial_qubits, level, point.cutoff.n_max);
    const Trajectory traj = propagate(spectrum, psi0, t_raw);
    for (std::size_t i = 0; i < t_raw.size(); ++i) {
      const StateVector framed = to_frame(traj.states[i], t_raw[i], point.frame);
      out.max_tail = std::max(out.max_tail, weight * fock_tail_population(framed));
      acc[i].add(framed, weight);
    }
  }
  for (std::size_t i = 0; i < t_raw.size(); ++i) {
    out.records.push_back(acc[i].finalize(t_delta[i]));
  }
  return out;
}

void require_converged(const EngineOutput& output, const ResolvedPoint& point,
                       const char* engine_name) {
  if (output.max_tail > point.cutoff.tail_tolerance) {
    const int recommended = static_cast<int>(std::ceil(1.5 * point.cutoff.n_max));
    std::ostringstream msg;
    msg << engine_name << " engine: Fock tail population " << output.max_tail
        << " exceeds tolerance " << point.cutoff.tail_tolerance << " at n_max "
        << point.cutoff.n_max << "; rerun with cutoff >= " << recommended;
    throw ConvergenceError(msg.str(), recommended);
  }
}

// Rows for one resolved point over one time grid; shared by evolve and sweep.
struct PointRows {
  std::vector<MetricsRecord> records;       // from the engine that owns the metrics
  std::vector<double> cross_fidelity;       // engine=both only
};

PointRows evaluate_point(const ExperimentConfig& cfg, const ResolvedPoint& point,
                         const std::vector<double>& t_raw, const std::vector<double>& t_delta) {
  const bool want_analytic = cfg.engine != EngineKind::numeric;
  const bool want_numeric = cfg.engine != EngineKind::analytic;
  PointRows rows;
  EngineOutput analytic_out;
  EngineOutput numeric_out;
  if (want_analytic) {
    analytic_out = run_analytic_at(cfg, point, t_raw, t_delta);
    require_converged(analytic_out, point, "analytic");
  }
  if (want_numeric) {
    numeric_out = run_numeric_at(cfg, point, t_raw, t_delta);
    require_converged(numeric_out, point, "numeric");
  }
  if (cfg.engine == EngineKind::both) {
    rows.cross_fidelity.reserve(t_raw.size());
    for (std::size_t i = 0; i < t_raw.size(); ++i) {
      const Complex ov = overlap(analytic_out.pure_states[i], numeric_out.pure_states[i]);
      rows.cross_fidelity.push_back(std::norm(ov));
    }
  }
  rows.records = want_numeric ? std::move(numeric_out.records) : std::move(analytic_out.records);
  return rows;
}

void parallel_for(int n_tasks, int threads, const std::function<void(int)>& body) {
  threads = std::clamp(threads, 1, std::max(1, n_tasks));
  if (threads == 1) {
    for (int i = 0; i < n_tasks; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n_tasks) break;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::invalid_argument("Table: no column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

double Table::number(std::size_t row, const std::string& name) const {
  return std::get<double>(rows.at(row).at(column(name)));
}

const std::string& Table::text(std::size_t row, const std::string& name) const {
  return std::get<std::string>(rows.at(row).at(column(name)));
}

Table run_evolve(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.sweep) throw ConfigError("run_evolve: config has a sweep; use run_sweep");
  const ResolvedPoint point = resolve(cfg);
  const std::string hash = config_hash(cfg);
  const std::vector<std::string> metrics = selected_metrics(cfg);

  std::vector<double> t_delta(static_cast<std::size_t>(cfg.samples));
  std::vector<double> t_raw(t_delta.size());
  for (std::size_t i = 0; i < t_delta.size(); ++i) {
    t_delta[i] = cfg.t_delta_max * static_cast<double>(i) / (cfg.samples - 1);
    t_raw[i] = t_delta[i] / point.delta_ref;
  }

  const PointRows rows = evaluate_point(cfg, point, t_raw, t_delta);

  Table table;
  table.columns.push_back("t_delta");
  table.columns.insert(table.columns.end(), metrics.begin(), metrics.end());
  if (cfg.engine == EngineKind::both) table.columns.push_back("fid_analytic");
  table.columns.push_back("config_hash");
  table.rows.reserve(rows.records.size());
  for (std::size_t i = 0; i < rows.records.size(); ++i) {
    std::vector<Value> row;
    row.reserve(table.columns.size());
    row.emplace_back(rows.records[i].t_delta);
    for (const auto& name : metrics) row.emplace_back(metric_value(rows.records[i], name));
    if (cfg.engine == EngineKind::both) row.emplace_back(rows.cross_fidelity[i]);
    row.emplace_back(hash);
    table.rows.push_back(std::move(row));
  }
  return table;
}

Table run_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (!cfg.sweep) throw ConfigError("run_sweep: config has no sweep");
  if (cfg.engine != EngineKind::numeric && cfg.sweep->parameter == "omega1_over_omega") {
    // The closed-form engine assumes a common qubit frequency.
    if (cfg.omega2 != 0.0) {
      throw ConfigError("config: analytic engine cannot sweep omega1 with fixed omega2 != 0");
    }
  }
  const std::string hash = config_hash(cfg);
  const std::vector<std::string> metrics = selected_metrics(cfg);
  const std::vector<double>& values = cfg.sweep->values;

  std::vector<PointRows> results(values.size());
  std::vector<ResolvedPoint> points(values.size());
  parallel_for(static_cast<int>(values.size()), cfg.threads, [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    const ResolvedPoint point = resolve_at(cfg, values[idx]);
    const double t1 = 2.0 * kPi / point.peak_freq;
    const std::vector<double> t_raw{t1, 3.0 * t1};
    const std::vector<double> t_delta{t1 * point.delta_ref, 3.0 * t1 * point.delta_ref};
    results[idx] = evaluate_point(cfg, point, t_raw, t_delta);
    points[idx] = point;
  });

  Table table;
  table.columns.push_back("t_delta");
  table.columns.insert(table.columns.end(), metrics.begin(), metrics.end());
  table.columns.push_back("omega1_over_omega");
  table.columns.push_back("omega2_over_omega");
  if (cfg.engine == EngineKind::both) table.columns.push_back("fid_analytic");
  table.columns.push_back("config_hash");
  for (std::size_t v = 0; v < values.size(); ++v) {
    for (std::size_t peak = 0; peak < results[v].records.size(); ++peak) {
      const MetricsRecord& rec = results[v].records[peak];
      std::vector<Value> row;
      row.reserve(table.columns.size());
      row.emplace_back(rec.t_delta);
      for (const auto& name : metrics) row.emplace_back(metric_value(rec, name));
      row.emplace_back(points[v].params.omega1 / cfg.omega);
      row.emplace_back(points[v].params.omega2 / cfg.omega);
      if (cfg.engine == EngineKind::both) row.emplace_back(results[v].cross_fidelity[peak]);
      row.emplace_back(hash);
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

std::vector<GateDesign> enumerate_gate_designs(const GateDesignQuery& query) {
  if (!(query.gamma1 > 0.0)) throw ConfigError("gate design: gamma1 must be > 0");
  if (!(query.delta > 0.0)) throw ConfigError("gate design: delta must be > 0");
  if (query.n_min < 1 || query.n_max < query.n_min || query.m_min < 0 ||
      query.m_max < query.m_min) {
    throw ConfigError("gate design: need 1 <= n_min <= n_max and 0 <= m_min <= m_max");
  }
  std::vector<GateDesign> designs;
  for (int n = query.n_min; n <= query.n_max; ++n) {
    for (int m = query.m_min; m <= query.m_max; ++m) {
      GateDesign design;
      design.n = n;
      design.m = m;
      design.gamma1 = query.gamma1;
      design.gamma2 = solve_gamma2(query.gamma1, query.delta, n, m);
      design.delta = query.delta;
      design.t_peak = 2.0 * kPi * n / query.delta;
      for (QubitLabel q : kQubitLabels) {
        design.bell_map[static_cast<std::size_t>(q)] = gate_map(q, m);
      }
      if (query.gamma2_max > 0.0 && design.gamma2 > query.gamma2_max) continue;
      designs.push_back(design);
    }
  }
  return designs;
}

Table run_gate_design(const GateDesignQuery& query) {
  const std::vector<GateDesign> designs = enumerate_gate_designs(query);

  std::ostringstream canonical;
  canonical << "design gamma1=" << query.gamma1 << " delta=" << query.delta << " n=["
            << query.n_min << ',' << query.n_max << "] m=[" << query.m_min << ',' << query.m_max
            << "] gamma2_max=" << query.gamma2_max << " verify=" << (query.verify ? 1 : 0);
  const std::string hash = fnv1a_hex(canonical.str());

  Table table;
  table.columns = {"n",      "m",      "gamma1",      "gamma2",  "delta",
                   "t_peak", "residual", "map_gg",    "map_ge",  "map_eg",
                   "map_ee", "verified", "min_overlap", "config_hash"};
  for (const GateDesign& design : designs) {
    const RabiParams params{design.delta, 0.0, 0.0, design.gamma1, design.gamma2};
    const CouplingCheck check = check_coupling_condition(params, design.n, design.m);

    std::string verified = "skipped";
    double min_overlap = 0.0;
    if (query.verify) {
      const FockCutoff cutoff = required_cutoff(params);
      const AnalyticEngine engine(params, cutoff);
      min_overlap = 1.0;
      for (QubitLabel q : kQubitLabels) {
        const StateVector evolved =
            engine.evolve(basis_state(q, 0, cutoff.n_max), design.t_peak);
        const Vector bell =
            bell_state(design.bell_map[static_cast<std::size_t>(q)]).amplitudes;
        Vector target = Vector::Zero(4 * cutoff.n_max);
        for (Index qi = 0; qi < 4; ++qi) target(qi * cutoff.n_max) = bell(qi);
        const Complex ov =
            overlap(StateVector{std::move(target), composite_dims(cutoff.n_max)}, evolved);
        min_overlap = std::min(min_overlap, std::abs(ov));
      }
      verified = (min_overlap >= 1.0 - 1e-8) ? "yes" : "no";
    }

    std::vector<Value> row;
    row.emplace_back(static_cast<double>(design.n));
    row.emplace_back(static_cast<double>(design.m));
    row.emplace_back(design.gamma1);
    row.emplace_back(design.gamma2);
    row.emplace_back(design.delta);
    row.emplace_back(design.t_peak);
    row.emplace_back(check.residual);
    for (BellLabel label : design.bell_map) row.emplace_back(to_string(label));
    row.emplace_back(verified);
    row.emplace_back(min_overlap);
    row.emplace_back(hash);
    table.rows.push_back(std::move(row));
  }
  return table;
}

bool all_designs_verified(const Table& designs) {
  const std::size_t col = designs.column("verified");
  for (const auto& row : designs.rows) {
    if (std::get<std::string>(row.at(col)) == "no") return false;
  }
  return true;
}

Table run_gate_analyze(BellLabel bell, const ExperimentConfig& cfg) {
  validate_config(cfg);
  const ResolvedPoint point = resolve(cfg);
  const AnalyticEngine engine(point.params, point.cutoff);
  const Index n_fock = point.cutoff.n_max;

  const Vector bell_amps = bell_state(bell).amplitudes;
  Vector amps = Vector::Zero(4 * n_fock);
  for (Index q = 0; q < 4; ++q) amps(q * n_fock) = bell_amps(q);
  const StateVector psi0{std::move(amps), composite_dims(n_fock)};

  const double t1 = engine.revival_time(1);
  const StateVector evolved = engine.evolve(psi0, t1);

  Index best = 0;
  evolved.amplitudes.cwiseAbs2().maxCoeff(&best);
  const Index q_out = best / n_fock;
  const Index fock_out = best % n_fock;
  const double probability = std::norm(evolved.amplitudes(best));

  Table table;
  table.columns = {"bell", "outcome_qubits", "outcome_fock", "probability", "t_delta",
                   "config_hash"};
  std::vector<Value> row;
  row.emplace_back(to_string(bell));
  row.emplace_back(to_string(static_cast<QubitLabel>(q_out)));
  row.emplace_back(static_cast<double>(fock_out));
  row.emplace_back(probability);
  row.emplace_back(t1 * point.delta_ref);
  row.emplace_back(config_hash(cfg));
  table.rows.push_back(std::move(row));
  return table;
}

std::string format_value(const Value& v) {
  if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(v));
  return buf;
}

void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) os << ',';
    os << table.columns[c];
  }
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      os << format_value(row[c]);
    }
    os << '\n';
  }
}

void write_jsonl(const Table& table, std::ostream& os) {
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (std::holds_alternative<double>(row[c])) {
        obj[table.columns[c]] = std::get<double>(row[c]);
      } else {
        obj[table.columns[c]] = std::get<std::string>(row[c]);
      }
    }
    os << obj.dump() << '\n';
  }
}

}  // namespace qrabi
