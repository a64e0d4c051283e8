// Exact propagation under the full Rabi Hamiltonian on the truncated space:
// one dense Hermitian eigendecomposition per Hamiltonian, then per-time phase
// application. Also frame transformations and Fock-cutoff convergence control.

#pragma once

#include "qrabi/model.hpp"

#include <vector>

namespace qrabi {

struct Spectrum {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // columns, unitary

  Index dim() const { return eigenvalues.size(); }
};

struct FrameSpec {
  enum class Kind { lab, rotating };
  Kind kind = Kind::lab;
  double f_boson = 0.0;
  double f_qubit1 = 0.0;
  double f_qubit2 = 0.0;

  static FrameSpec lab() { return FrameSpec{}; }
  static FrameSpec rotating(double boson, double qubit1, double qubit2) {
    return FrameSpec{Kind::rotating, boson, qubit1, qubit2};
  }
};

struct Trajectory {
  std::vector<double> times;  // physical times, strictly increasing
  std::vector<StateVector> states;
};

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
};

struct CutoffReport {
  double max_tail_population = 0.0;  // worst population in the top 10% of levels
  double tolerance = 0.0;
  bool pass = false;
  int n_max = 0;
  int recommended_n_max = 0;  // equals n_max when passing
};

// Full dense Hermitian eigendecomposition; requires the hermitian tag.
Spectrum eigendecompose(const Operator& h);

// psi(t) = V exp(-i E t) V+ psi0 at each requested time.
Trajectory propagate(const Spectrum& spec, const StateVector& psi0,
                     const std::vector<double>& times);

// rho(t) = U rho0 U+ at each requested time.
DensityTrajectory propagate_density(const Spectrum& spec, const DensityMatrix& rho0,
                                    const std::vector<double>& times);

// Apply exp(+i t [f_boson a+a + (f_q1/2) sigma_z(1) + (f_q2/2) sigma_z(2)]),
// a diagonal phase multiplication. Lab frame is the identity.
StateVector to_frame(const StateVector& s, double t, const FrameSpec& f);

// Cutoff covering displacements up to 2 gamma_plus with an 8-sigma tail margin:
// n_max = ceil((2g+)^2 + 8 (2g+) + 20).
FockCutoff required_cutoff(double gamma1, double gamma2, double delta);
FockCutoff required_cutoff(const RabiParams& p);

// Max population in the top 10% of Fock levels across the trajectory;
// passes iff it stays below the tolerance.
CutoffReport cutoff_convergence(const Trajectory& traj, double tolerance = 1e-10);
CutoffReport cutoff_convergence(const DensityTrajectory& traj, double tolerance = 1e-10);

// Population of the top 10% of Fock levels in one state.
double fock_tail_population(const StateVector& psi);
double fock_tail_population(const DensityMatrix& rho);

}  // namespace qrabi
