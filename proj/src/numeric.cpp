#include "qrabi/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrabi {

namespace {

// Tail starts at the lowest level of the top 10% band.
Index tail_start(Index n_fock) { return (9 * n_fock + 9) / 10; }

void require_increasing(const std::vector<double>& times, const char* op) {
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (times[i] <= times[i - 1]) {
      throw std::invalid_argument(std::string(op) + ": times must be strictly increasing");
    }
  }
}

void require_composite(const std::vector<Index>& dims, const char* op) {
  if (dims.size() != 3 || dims[0] != 2 || dims[1] != 2) {
    throw std::invalid_argument(std::string(op) + ": expected space_dims {2, 2, N}");
  }
}

}  // namespace

Spectrum eigendecompose(const Operator& h) {
  if (!h.hermitian) throw std::invalid_argument("eigendecompose: operator not Hermitian-tagged");
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
  return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

Trajectory propagate(const Spectrum& spec, const StateVector& psi0,
                     const std::vector<double>& times) {
  if (spec.dim() != psi0.dim()) throw std::invalid_argument("propagate: dimension mismatch");
  require_increasing(times, "propagate");
  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  const Vector coefficients = spec.eigenvectors.adjoint() * psi0.amplitudes;
  for (double t : times) {
    Vector phased(coefficients.size());
    for (Index k = 0; k < coefficients.size(); ++k) {
      phased(k) = std::exp(-kI * (spec.eigenvalues(k) * t)) * coefficients(k);
    }
    traj.states.push_back(StateVector{spec.eigenvectors * phased, psi0.space_dims});
  }
  return traj;
}

DensityTrajectory propagate_density(const Spectrum& spec, const DensityMatrix& rho0,
                                    const std::vector<double>& times) {
  if (spec.dim() != rho0.dim()) {
    throw std::invalid_argument("propagate_density: dimension mismatch");
  }
  require_increasing(times, "propagate_density");
  DensityTrajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  for (double t : times) {
    Vector phases(spec.dim());
    for (Index k = 0; k < spec.dim(); ++k) {
      phases(k) = std::exp(-kI * (spec.eigenvalues(k) * t));
    }
    const Matrix u = spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
    traj.states.push_back(DensityMatrix{u * rho0.entries * u.adjoint(), rho0.space_dims});
  }
  return traj;
}

StateVector to_frame(const StateVector& s, double t, const FrameSpec& f) {
  if (f.kind == FrameSpec::Kind::lab) return s;
  require_composite(s.space_dims, "to_frame");
  const Index n_fock = s.space_dims[2];
  Vector out(s.dim());
  for (QubitLabel q : kQubitLabels) {
    const int idx = static_cast<int>(q);
    const double z1 = (idx & 2) ? 1.0 : -1.0;  // qubit 1 excited in eg, ee
    const double z2 = (idx & 1) ? 1.0 : -1.0;  // qubit 2 excited in ge, ee
    const double qubit_phase = 0.5 * (f.f_qubit1 * z1 + f.f_qubit2 * z2);
    for (Index n = 0; n < n_fock; ++n) {
      const Index i = basis_index(q, n, n_fock);
      out(i) = std::exp(kI * (t * (f.f_boson * static_cast<double>(n) + qubit_phase))) *
               s.amplitudes(i);
    }
  }
  return StateVector{std::move(out), s.space_dims};
}

FockCutoff required_cutoff(double gamma1, double gamma2, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("required_cutoff: requires Delta > 0");
  const double reach = 2.0 * (gamma1 + gamma2) / delta;  // max |gamma_t| over time
  const int n_max = static_cast<int>(std::ceil(reach * reach + 8.0 * reach + 20.0));
  return make_cutoff(std::max(n_max, 2));
}

FockCutoff required_cutoff(const RabiParams& p) {
  return required_cutoff(p.gamma1, p.gamma2, p.delta());
}

double fock_tail_population(const StateVector& psi) {
  require_composite(psi.space_dims, "fock_tail_population");
  const Index n_fock = psi.space_dims[2];
  const Index start = tail_start(n_fock);
  double population = 0.0;
  for (Index q = 0; q < 4; ++q) {
    population += psi.amplitudes.segment(q * n_fock + start, n_fock - start).squaredNorm();
  }
  return population;
}

double fock_tail_population(const DensityMatrix& rho) {
  require_composite(rho.space_dims, "fock_tail_population");
  const Index n_fock = rho.space_dims[2];
  const Index start = tail_start(n_fock);
  double population = 0.0;
  for (Index q = 0; q < 4; ++q) {
    for (Index n = start; n < n_fock; ++n) {
      population += std::real(rho.entries(q * n_fock + n, q * n_fock + n));
    }
  }
  return population;
}

namespace {

template <typename Traj>
CutoffReport convergence_impl(const Traj& traj, double tolerance) {
  if (traj.states.empty()) throw std::invalid_argument("cutoff_convergence: empty trajectory");
  CutoffReport report;
  report.tolerance = tolerance;
  report.n_max = static_cast<int>(traj.states.front().space_dims[2]);
  for (const auto& state : traj.states) {
    report.max_tail_population = std::max(report.max_tail_population, fock_tail_population(state));
  }
  report.pass = report.max_tail_population <= tolerance;
  report.recommended_n_max =
      report.pass ? report.n_max : static_cast<int>(std::ceil(1.5 * report.n_max));
  return report;
}

}  // namespace

CutoffReport cutoff_convergence(const Trajectory& traj, double tolerance) {
  return convergence_impl(traj, tolerance);
}

CutoffReport cutoff_convergence(const DensityTrajectory& traj, double tolerance) {
  return convergence_impl(traj, tolerance);
}

}  // namespace qrabi
