#include "qrabi/hilbert.hpp"

#include <numeric>
#include <stdexcept>

namespace qrabi {

namespace {

Index product_of(const std::vector<Index>& dims) {
  return std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
}

void require_qubit_qubit_boson(const std::vector<Index>& dims, const char* op) {
  if (dims.size() != 3 || dims[0] != 2 || dims[1] != 2 || dims[2] < 1) {
    throw std::invalid_argument(std::string(op) + ": space_dims must be {2, 2, N}");
  }
}

}  // namespace

std::string to_string(QubitLabel q) {
  switch (q) {
    case QubitLabel::gg: return "gg";
    case QubitLabel::ge: return "ge";
    case QubitLabel::eg: return "eg";
    case QubitLabel::ee: return "ee";
  }
  throw std::invalid_argument("bad QubitLabel");
}

std::string to_string(BellLabel b) {
  switch (b) {
    case BellLabel::psi_plus: return "psi_plus";
    case BellLabel::psi_minus: return "psi_minus";
    case BellLabel::phi_plus: return "phi_plus";
    case BellLabel::phi_minus: return "phi_minus";
  }
  throw std::invalid_argument("bad BellLabel");
}

QubitLabel qubit_label_from_string(const std::string& s) {
  for (QubitLabel q : kQubitLabels) {
    if (to_string(q) == s) return q;
  }
  throw std::invalid_argument("unknown qubit label: " + s);
}

BellLabel bell_label_from_string(const std::string& s) {
  for (BellLabel b : kBellLabels) {
    if (to_string(b) == s) return b;
  }
  throw std::invalid_argument("unknown Bell label: " + s);
}

int excitation_count(QubitLabel q) {
  switch (q) {
    case QubitLabel::gg: return 0;
    case QubitLabel::ge: return 1;
    case QubitLabel::eg: return 1;
    case QubitLabel::ee: return 2;
  }
  throw std::invalid_argument("bad QubitLabel");
}

StateVector make_state(Vector amplitudes, std::vector<Index> space_dims) {
  if (amplitudes.size() == 0) throw std::invalid_argument("make_state: empty amplitudes");
  if (product_of(space_dims) != amplitudes.size()) {
    throw std::invalid_argument("make_state: product of space_dims must equal dim");
  }
  return StateVector{std::move(amplitudes), std::move(space_dims)};
}

Operator make_operator(Matrix entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw std::invalid_argument("make_operator: matrix must be square and non-empty");
  }
  return Operator{std::move(entries)};
}

Operator make_hermitian(Matrix entries) {
  Operator op = make_operator(std::move(entries));
  if (!is_hermitian(op.entries)) throw std::invalid_argument("make_hermitian: tag violated");
  op.hermitian = true;
  return op;
}

Operator make_unitary(Matrix entries) {
  Operator op = make_operator(std::move(entries));
  if (!is_unitary(op.entries)) throw std::invalid_argument("make_unitary: tag violated");
  op.unitary = true;
  return op;
}

DensityMatrix make_density(Matrix entries, std::vector<Index> space_dims) {
  if (entries.rows() != entries.cols() || entries.rows() == 0) {
    throw std::invalid_argument("make_density: matrix must be square and non-empty");
  }
  if (product_of(space_dims) != entries.rows()) {
    throw std::invalid_argument("make_density: product of space_dims must equal dim");
  }
  return DensityMatrix{std::move(entries), std::move(space_dims)};
}

bool is_hermitian(const Matrix& m, double tol) {
  return max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
  Matrix residual = m.adjoint() * m;
  residual -= Matrix::Identity(m.rows(), m.cols());
  return max_abs(residual) <= tol;
}

void validate_density(const DensityMatrix& rho) {
  if (!is_hermitian(rho.entries, kHermitianTol)) {
    throw std::invalid_argument("density matrix not Hermitian to 1e-12");
  }
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > kTraceTol) {
    throw std::invalid_argument("density matrix trace not 1 to 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw std::invalid_argument("density matrix has eigenvalue below -1e-10");
  }
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Operator tensor(std::span<const Operator> factors) {
  if (factors.empty()) throw std::invalid_argument("tensor: empty factor list");
  Matrix result = factors[0].entries;
  bool hermitian = factors[0].hermitian;
  bool unitary = factors[0].unitary;
  for (std::size_t k = 1; k < factors.size(); ++k) {
    const Matrix& b = factors[k].entries;
    const Index ra = result.rows(), ca = result.cols();
    const Index rb = b.rows(), cb = b.cols();
    Matrix next(ra * rb, ca * cb);
    for (Index i = 0; i < ra; ++i) {
      for (Index j = 0; j < ca; ++j) {
        next.block(i * rb, j * cb, rb, cb) = result(i, j) * b;
      }
    }
    result = std::move(next);
    hermitian = hermitian && factors[k].hermitian;
    unitary = unitary && factors[k].unitary;
  }
  Operator op{std::move(result)};
  op.hermitian = hermitian;
  op.unitary = unitary;
  return op;
}

Operator tensor(const Operator& a, const Operator& b) {
  const Operator factors[] = {a, b};
  return tensor(std::span<const Operator>(factors));
}

Operator tensor(const Operator& a, const Operator& b, const Operator& c) {
  const Operator factors[] = {a, b, c};
  return tensor(std::span<const Operator>(factors));
}

Operator dagger(const Operator& op) {
  Operator out{op.entries.adjoint()};
  out.hermitian = op.hermitian;
  out.unitary = op.unitary;
  return out;
}

StateVector apply(const Operator& op, const StateVector& s) {
  if (op.dim() != s.dim()) {
    throw std::invalid_argument("apply: operator/state dimension mismatch");
  }
  return StateVector{op.entries * s.amplitudes, s.space_dims};
}

DensityMatrix partial_trace_boson(const DensityMatrix& rho) {
  require_qubit_qubit_boson(rho.space_dims, "partial_trace_boson");
  const Index n_fock = rho.space_dims[2];
  Matrix reduced = Matrix::Zero(4, 4);
  for (Index q = 0; q < 4; ++q) {
    for (Index p = 0; p < 4; ++p) {
      Complex sum = 0.0;
      for (Index n = 0; n < n_fock; ++n) {
        sum += rho.entries(q * n_fock + n, p * n_fock + n);
      }
      reduced(q, p) = sum;
    }
  }
  return DensityMatrix{std::move(reduced), {2, 2}};
}

DensityMatrix partial_trace_qubits(const DensityMatrix& rho) {
  require_qubit_qubit_boson(rho.space_dims, "partial_trace_qubits");
  const Index n_fock = rho.space_dims[2];
  Matrix reduced = Matrix::Zero(n_fock, n_fock);
  for (Index q = 0; q < 4; ++q) {
    reduced += rho.entries.block(q * n_fock, q * n_fock, n_fock, n_fock);
  }
  return DensityMatrix{std::move(reduced), {n_fock}};
}

StateVector normalize(const StateVector& s) {
  const double n = s.norm();
  if (n <= 1e-14) throw std::domain_error("normalize: zero vector");
  return StateVector{s.amplitudes / n, s.space_dims};
}

DensityMatrix outer_product(const StateVector& psi) {
  return DensityMatrix{psi.amplitudes * psi.amplitudes.adjoint(), psi.space_dims};
}

Complex overlap(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("overlap: dimension mismatch");
  return a.amplitudes.dot(b.amplitudes);  // Eigen's dot conjugates the left factor
}

DensityMatrix reduced_qubit_state(const StateVector& psi) {
  require_qubit_qubit_boson(psi.space_dims, "reduced_qubit_state");
  const Index n_fock = psi.space_dims[2];
  Matrix reduced(4, 4);
  for (Index q = 0; q < 4; ++q) {
    for (Index p = 0; p < 4; ++p) {
      // rho_q(q, p) = sum_n psi[qN+n] conj(psi[pN+n]); Eigen's dot conjugates the left side
      reduced(q, p) = psi.amplitudes.segment(p * n_fock, n_fock)
                          .dot(psi.amplitudes.segment(q * n_fock, n_fock));
    }
  }
  return DensityMatrix{std::move(reduced), {2, 2}};
}

StateVector basis_state(QubitLabel q, Index n, Index n_fock) {
  if (n < 0 || n >= n_fock) throw std::invalid_argument("basis_state: Fock index out of range");
  Vector amps = Vector::Zero(4 * n_fock);
  amps(basis_index(q, n, n_fock)) = 1.0;
  return StateVector{std::move(amps), composite_dims(n_fock)};
}

StateVector qubit_basis_state(QubitLabel q) {
  Vector amps = Vector::Zero(4);
  amps(static_cast<Index>(q)) = 1.0;
  return StateVector{std::move(amps), {2, 2}};
}

}  // namespace qrabi
