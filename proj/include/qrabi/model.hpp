// Physical operators of the two-qubit Rabi model on the truncated composite
// space, the parity structure, and the coupling-condition solver.
//
// Natural units throughout: hbar = 1, boson frequency omega defaults to 1, and
// every other frequency/coupling is expressed relative to it.

#pragma once

#include "qrabi/hilbert.hpp"

#include <array>

namespace qrabi {

struct RabiParams {
  double omega = 1.0;   // boson frequency
  double omega1 = 0.0;  // qubit 1 transition frequency
  double omega2 = 0.0;  // qubit 2 transition frequency
  double gamma1 = 0.0;  // coupling qubit 1 <-> boson
  double gamma2 = 0.0;  // coupling qubit 2 <-> boson

  bool equal_qubit_frequencies() const { return omega1 == omega2; }

  // Slow-qubit detuning omega - omega_q; requires a common qubit frequency.
  double delta() const;
};

void validate(const RabiParams& p);

struct FockCutoff {
  int n_max = 2;                 // number of retained Fock levels |0> .. |n_max-1>
  double tail_tolerance = 1e-10;
};

FockCutoff make_cutoff(int n_max, double tail_tolerance = 1e-10);

enum class PauliKind { x, z, plus, minus };
enum class ParityChain { even, odd };

// Bell-state assignment at the gate peak for each initial two-qubit basis
// state, as produced by a coupling-condition design; see gate_map in analytic.
struct GateDesign {
  int n = 1;
  int m = 0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double delta = 0.0;
  double t_peak = 0.0;                  // 2*pi*n / delta
  std::array<BellLabel, 4> bell_map{};  // indexed by QubitLabel
};

struct CouplingCheck {
  bool satisfied = false;
  double residual = 0.0;  // |g1*g2 - (2m+1) d^2 / (16 n)| / d^2
};

// ---------------------------------------------------------------------------
// Operator builders
// ---------------------------------------------------------------------------

// Boson annihilation operator on the truncated space, <n-1|a|n> = sqrt(n).
// Note [a, a+] = I only on the first n_max-1 levels; the top diagonal entry
// of the truncated commutator is -(n_max-1).
Operator annihilation(const FockCutoff& cutoff);

// Bare 2x2 qubit operator. Basis order (g, e) with sigma_z = |e><e| - |g><g|,
// so sigma_z = diag(-1, +1).
Matrix pauli2(PauliKind which);

// Requested single-qubit operator embedded in the full 4N space.
Operator pauli(PauliKind which, int qubit, const FockCutoff& cutoff);

// H = omega a+a + sum_i (omega_i/2) sigma_z(i) + sum_i Gamma_i sigma_x(i) (a+ + a)
Operator build_full_hamiltonian(const RabiParams& p, const FockCutoff& cutoff);

// H' = Delta a+a + sum_i Gamma_i sigma_x(i) (a+ + a); requires omega1 == omega2.
Operator build_slow_qubit_hamiltonian(const RabiParams& p, const FockCutoff& cutoff);

// Parity Pi2 = sigma_z(1) sigma_z(2) (-1)^(a+a); Hermitian, unitary, involutory.
Operator parity_operator(const FockCutoff& cutoff);

// Two-qubit operator (Gamma1/Delta) sigma_x(1) + (Gamma2/Delta) sigma_x(2), 4x4.
// Eigenvalues {g+, g-, -g-, -g+} with g± = (Gamma1 ± Gamma2)/Delta on the
// rotated basis |±±>, |±> = (|g> ± |e>)/sqrt(2).
Operator gamma_operator(const RabiParams& p);

// Branch eigenvalues of gamma_operator in the (++, +-, -+, --) order.
std::array<double, 4> gamma_branch_values(const RabiParams& p);

// Hadamard ⊗ Hadamard, the rotation diagonalizing gamma_operator.
Matrix plus_minus_rotation();

// ---------------------------------------------------------------------------
// Coupling condition
// ---------------------------------------------------------------------------

// Gamma1*Gamma2 = (2m+1)/(16n) * Delta^2, checked to relative 1e-12.
CouplingCheck check_coupling_condition(const RabiParams& p, int n, int m);

// Gamma2 solving the condition for given Gamma1, Delta, n, m.
double solve_gamma2(double gamma1, double delta, int n, int m);

// Which parity chain the basis state |Q n> belongs to.
ParityChain parity_chain_of(QubitLabel q, int n);

}  // namespace qrabi
