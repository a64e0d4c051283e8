// Closed-form slow-qubit dynamics: the factorized propagator, its global and
// local phases, conditional-displacement cat superpositions, revival states,
// Bell states and the gate map, and mixed-boson revivals.
//
// Everything here assumes equal qubit frequencies and positive detuning
// Delta = omega - omega_q; the full-model engine without that assumption
// lives in numeric.hpp.

#pragma once

#include "qrabi/model.hpp"

namespace qrabi {

struct PhasePair {
  double phi_g = 0.0;  // radians; multiplies the identity
  double phi_l = 0.0;  // radians; multiplies sigma_x(1) sigma_x(2)
};

// t*Delta - sin(t*Delta).
double phi_t(double t, double delta);

// phi_g = phi_t (G1^2 + G2^2)/Delta^2, phi_l = phi_t 2 G1 G2 / Delta^2.
PhasePair phases(double t, const RabiParams& p);

// Minimal Fock levels for a displacement of the given magnitude to stay
// clear of the truncation edge (coherent tail bound: mean + 8 sigma).
int fock_levels_for_displacement(double abs_displacement);

// Truncated exp(alpha a+ - alpha* a); exactly unitary by construction
// (exponential of the truncated anti-Hermitian generator). Throws
// ConvergenceError when the cutoff cannot hold the displaced support.
Operator displacement_operator(Complex alpha, const FockCutoff& cutoff);

// Coherent state |alpha> from the normalized Fock series.
StateVector coherent_state(Complex alpha, const FockCutoff& cutoff);

// Normalized |alpha> ± |-alpha>; even cats occupy even Fock levels only,
// odd cats odd levels only. Odd cat at alpha = 0 is degenerate and throws.
StateVector cat_state(Complex alpha, ParityChain parity, const FockCutoff& cutoff);

// The four Bell states (dim 4): psi± = (|gg> ± i|ee>)/sqrt(2),
// phi± = (|eg> ± i|ge>)/sqrt(2).
StateVector bell_state(BellLabel label);

// Bell state reached from |Q 0> at the design peak, by the parity of m.
BellLabel gate_map(QubitLabel q0, int m);

// Two-qubit state at the n-th revival from |gg 0>:
// cos(phi_l(t_n))|gg> + i sin(phi_l(t_n))|ee>.
StateVector revival_state(int n, const RabiParams& p);

// ---------------------------------------------------------------------------
// Propagator engine
// ---------------------------------------------------------------------------

// Caches the branch structure of the conditional displacement so that states
// can be evolved at many times cheaply: one N x N eigendecomposition of the
// displacement generator at construction, O(N^2) work per branch per time.
class AnalyticEngine {
 public:
  AnalyticEngine(const RabiParams& p, const FockCutoff& cutoff);

  const RabiParams& params() const { return params_; }
  const FockCutoff& cutoff() const { return cutoff_; }
  double delta() const { return delta_; }

  // Revival time 2*pi*n / Delta.
  double revival_time(int n) const;

  // Full 4N x 4N propagator U(t); exactly unitary by construction.
  Operator propagator(double t) const;

  // U(t)|psi>; equivalent to apply(propagator(t), psi) without forming U.
  StateVector evolve(const StateVector& psi0, double t) const;

  // U(t) rho U+(t).
  DensityMatrix evolve_density(const DensityMatrix& rho0, double t) const;

 private:
  // D(gamma_t_s) for branch s at time t, as an N x N matrix.
  Matrix branch_displacement(double t, int branch) const;

  RabiParams params_;
  FockCutoff cutoff_;
  double delta_;
  std::array<double, 4> branch_gamma_;  // eigenvalues of the gamma operator
  Matrix rotation_;                     // Hadamard ⊗ Hadamard (4x4, symmetric)
  RealVector generator_eigs_;           // of i(a+ - a)
  Matrix generator_vecs_;
};

// Evolved state from |Q0 0>. For Q0 = gg this is built from the explicit
// cat-state superposition (coherent-state series per branch), independent of
// the propagator construction; other initial labels go through the engine.
StateVector analytic_evolved_state(double t, QubitLabel q0, const RabiParams& p,
                                   const FockCutoff& cutoff);

// rho(t_n) for initial |gg><gg| ⊗ rho_b0, by density-matrix conjugation with
// the propagator. At revival times this factorizes with the boson part intact.
DensityMatrix mixed_boson_revival(const DensityMatrix& rho_b0, int n, const RabiParams& p,
                                  const FockCutoff& cutoff);

// Thermal boson state with the given mean occupancy, normalized on the
// truncated space.
DensityMatrix thermal_state(double mean_occupancy, const FockCutoff& cutoff);

}  // namespace qrabi
