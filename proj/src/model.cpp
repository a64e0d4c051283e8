#include "qrabi/model.hpp"

#include <cmath>
#include <stdexcept>

namespace qrabi {

double RabiParams::delta() const {
  if (!equal_qubit_frequencies()) {
    throw std::invalid_argument("RabiParams::delta: requires omega1 == omega2");
  }
  return omega - omega1;
}

void validate(const RabiParams& p) {
  if (!(p.omega > 0.0)) throw std::invalid_argument("RabiParams: omega must be > 0");
  if (p.omega1 < 0.0 || p.omega2 < 0.0 || p.gamma1 < 0.0 || p.gamma2 < 0.0) {
    throw std::invalid_argument("RabiParams: frequencies and couplings must be >= 0");
  }
}

FockCutoff make_cutoff(int n_max, double tail_tolerance) {
  if (n_max < 2) throw std::invalid_argument("FockCutoff: n_max must be >= 2");
  if (!(tail_tolerance > 0.0)) throw std::invalid_argument("FockCutoff: tail_tolerance <= 0");
  return FockCutoff{n_max, tail_tolerance};
}

Operator annihilation(const FockCutoff& cutoff) {
  const Index n = cutoff.n_max;
  Matrix a = Matrix::Zero(n, n);
  for (Index k = 1; k < n; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return Operator{std::move(a)};
}

Matrix pauli2(PauliKind which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case PauliKind::x:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliKind::z:
      m(0, 0) = -1.0;  // |g> = index 0
      m(1, 1) = 1.0;
      break;
    case PauliKind::plus:
      m(1, 0) = 1.0;  // |e><g|
      break;
    case PauliKind::minus:
      m(0, 1) = 1.0;  // |g><e|
      break;
  }
  return m;
}

Operator pauli(PauliKind which, int qubit, const FockCutoff& cutoff) {
  if (qubit != 1 && qubit != 2) throw std::invalid_argument("pauli: qubit must be 1 or 2");
  const Operator id2{Matrix::Identity(2, 2), true, true};
  const Operator idb{Matrix::Identity(cutoff.n_max, cutoff.n_max), true, true};
  Operator single{pauli2(which)};
  single.hermitian = (which == PauliKind::x || which == PauliKind::z);
  return (qubit == 1) ? tensor(single, id2, idb) : tensor(id2, single, idb);
}

Operator build_full_hamiltonian(const RabiParams& p, const FockCutoff& cutoff) {
  validate(p);
  const Operator a = annihilation(cutoff);
  const Operator id2{Matrix::Identity(2, 2), true, true};
  const Matrix number = (a.entries.adjoint() * a.entries).eval();
  const Matrix position = (a.entries + a.entries.adjoint()).eval();

  Matrix h = tensor(id2, id2, Operator{number}).entries * p.omega;
  h += pauli(PauliKind::z, 1, cutoff).entries * (p.omega1 / 2.0);
  h += pauli(PauliKind::z, 2, cutoff).entries * (p.omega2 / 2.0);
  const Operator pos_op{position};
  h += p.gamma1 * tensor(Operator{pauli2(PauliKind::x)}, id2, pos_op).entries;
  h += p.gamma2 * tensor(id2, Operator{pauli2(PauliKind::x)}, pos_op).entries;

  Operator out{std::move(h)};
  out.hermitian = true;
  return out;
}

Operator build_slow_qubit_hamiltonian(const RabiParams& p, const FockCutoff& cutoff) {
  if (!p.equal_qubit_frequencies()) {
    throw std::invalid_argument("build_slow_qubit_hamiltonian: requires omega1 == omega2");
  }
  RabiParams effective = p;
  effective.omega = p.delta();
  effective.omega1 = 0.0;
  effective.omega2 = 0.0;
  return build_full_hamiltonian(effective, cutoff);
}

Operator parity_operator(const FockCutoff& cutoff) {
  const Index n = cutoff.n_max;
  Vector diag(4 * n);
  for (QubitLabel q : kQubitLabels) {
    const double qubit_sign = (excitation_count(q) % 2 == 0) ? 1.0 : -1.0;
    for (Index k = 0; k < n; ++k) {
      const double boson_sign = (k % 2 == 0) ? 1.0 : -1.0;
      diag(basis_index(q, k, n)) = qubit_sign * boson_sign;
    }
  }
  Operator out{Matrix(diag.asDiagonal())};
  out.hermitian = true;
  out.unitary = true;
  return out;
}

Operator gamma_operator(const RabiParams& p) {
  const double delta = p.delta();
  if (!(delta > 0.0)) throw std::invalid_argument("gamma_operator: requires Delta > 0");
  const Matrix sx = pauli2(PauliKind::x);
  const Matrix id = Matrix::Identity(2, 2);
  Matrix g = (p.gamma1 / delta) * tensor(Operator{sx}, Operator{id}).entries +
             (p.gamma2 / delta) * tensor(Operator{id}, Operator{sx}).entries;
  Operator out{std::move(g)};
  out.hermitian = true;
  return out;
}

std::array<double, 4> gamma_branch_values(const RabiParams& p) {
  const double delta = p.delta();
  if (!(delta > 0.0)) throw std::invalid_argument("gamma_branch_values: requires Delta > 0");
  const double gp = (p.gamma1 + p.gamma2) / delta;
  const double gm = (p.gamma1 - p.gamma2) / delta;
  return {gp, gm, -gm, -gp};  // branches (++, +-, -+, --)
}

Matrix plus_minus_rotation() {
  Matrix h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;  // columns |+>, |-> in the (g, e) basis
  return tensor(Operator{h}, Operator{h}).entries;
}

CouplingCheck check_coupling_condition(const RabiParams& p, int n, int m) {
  if (n < 1 || m < 0) throw std::invalid_argument("check_coupling_condition: need n >= 1, m >= 0");
  const double delta = p.delta();
  const double target = (2.0 * m + 1.0) / (16.0 * n) * delta * delta;
  const double residual = std::abs(p.gamma1 * p.gamma2 - target) / (delta * delta);
  return CouplingCheck{residual <= 1e-12, residual};
}

double solve_gamma2(double gamma1, double delta, int n, int m) {
  if (!(gamma1 > 0.0)) throw std::invalid_argument("solve_gamma2: gamma1 must be > 0");
  if (!(delta > 0.0)) throw std::invalid_argument("solve_gamma2: delta must be > 0");
  if (n < 1 || m < 0) throw std::invalid_argument("solve_gamma2: need n >= 1, m >= 0");
  return (2.0 * m + 1.0) * delta * delta / (16.0 * n * gamma1);
}

ParityChain parity_chain_of(QubitLabel q, int n) {
  if (n < 0) throw std::invalid_argument("parity_chain_of: n must be >= 0");
  const int total_excitations = n + excitation_count(q);
  return (total_excitations % 2 == 0) ? ParityChain::even : ParityChain::odd;
}

}  // namespace qrabi
