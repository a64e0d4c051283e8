#include "qrabi/metrics.hpp"

#include "qrabi/analytic.hpp"
#include "qrabi/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrabi {

namespace {

Index fock_dim_of(const std::vector<Index>& dims, const char* op) {
  if (dims.size() != 3 || dims[0] != 2 || dims[1] != 2) {
    throw std::invalid_argument(std::string(op) + ": expected space_dims {2, 2, N}");
  }
  return dims[2];
}

void require_fock_index(int n, Index n_fock, const char* op) {
  if (n < 0 || n >= n_fock) {
    throw std::invalid_argument(std::string(op) + ": Fock index out of range");
  }
}

// (sigma_y ⊗ sigma_y): antidiagonal {-1, 1, 1, -1} in the {gg, ge, eg, ee} basis.
Matrix spin_flip_kernel() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 3) = -1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 0) = -1.0;
  return m;
}

double chain_sign(QubitLabel q, Index n) {
  return (parity_chain_of(q, static_cast<int>(n)) == ParityChain::even) ? 1.0 : -1.0;
}

MetricsRecord record_from_parts(const Matrix& rho_q, const RealVector& probs, Index n_fock,
                                double t_delta, double threshold) {
  MetricsRecord rec;
  rec.t_delta = t_delta;
  rec.purity_q = (rho_q * rho_q).trace().real();
  const DensityMatrix reduced{rho_q, {2, 2}};
  rec.concurrence = concurrence(reduced);
  for (BellLabel b : kBellLabels) {
    rec.bell_fidelity[static_cast<std::size_t>(b)] = fidelity_to_bell(reduced, b);
  }
  double parity = 0.0;
  for (QubitLabel q : kQubitLabels) {
    for (Index n = 0; n < n_fock; ++n) {
      const double p = probs(basis_index(q, n, n_fock));
      parity += chain_sign(q, n) * p;
      if (p > threshold) {
        rec.joint_probs.push_back(JointProbability{q, static_cast<int>(n), p});
      }
    }
  }
  rec.parity_expectation = parity;
  return rec;
}

}  // namespace

double MetricsRecord::joint(QubitLabel q, int n) const {
  for (const auto& jp : joint_probs) {
    if (jp.q == q && jp.n == n) return jp.p;
  }
  return 0.0;
}

double joint_probability(const StateVector& psi, QubitLabel q, int n) {
  const Index n_fock = fock_dim_of(psi.space_dims, "joint_probability");
  require_fock_index(n, n_fock, "joint_probability");
  return std::norm(psi.amplitudes(basis_index(q, n, n_fock)));
}

double joint_probability(const DensityMatrix& rho, QubitLabel q, int n) {
  const Index n_fock = fock_dim_of(rho.space_dims, "joint_probability");
  require_fock_index(n, n_fock, "joint_probability");
  const Index i = basis_index(q, n, n_fock);
  return rho.entries(i, i).real();
}

double purity(const DensityMatrix& rho) { return (rho.entries * rho.entries).trace().real(); }

double concurrence(const DensityMatrix& rho_q) {
  if (rho_q.dim() != 4) throw std::invalid_argument("concurrence: expected a 4x4 state");
  static const Matrix kernel = spin_flip_kernel();
  // With rho = L L+ (Hermitian square root, negative round-off eigenvalues
  // clamped at 0), the Wootters lambdas are the singular values of the
  // complex symmetric matrix L^T (sy⊗sy) L: rho rho~ = L [conj(B) B] L^-1
  // up to the null space, with B = L^T (sy⊗sy) L and conj(B) = B+. The SVD
  // route keeps the small lambdas accurate where the plain eigensolver of
  // rho rho~ loses half the digits through the square root.
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_q.entries);
  if (es.info() != Eigen::Success) throw std::runtime_error("concurrence: eigensolver failed");
  Matrix root = es.eigenvectors();
  for (Index k = 0; k < 4; ++k) {
    root.col(k) *= std::sqrt(std::max(0.0, es.eigenvalues()(k)));
  }
  const Matrix b = root.transpose() * kernel * root;
  Eigen::JacobiSVD<Matrix> svd(b);
  const Eigen::VectorXd& lambdas = svd.singularValues();  // descending
  return std::max(0.0, lambdas(0) - lambdas(1) - lambdas(2) - lambdas(3));
}

double fidelity_to_bell(const DensityMatrix& rho_q, BellLabel label) {
  if (rho_q.dim() != 4) throw std::invalid_argument("fidelity_to_bell: expected a 4x4 state");
  const Vector b = bell_state(label).amplitudes;
  return std::real(b.dot(rho_q.entries * b));
}

MetricsRecord record(const StateVector& psi, double t_delta, double threshold) {
  const Index n_fock = fock_dim_of(psi.space_dims, "record");
  const RealVector probs = psi.amplitudes.cwiseAbs2();
  return record_from_parts(reduced_qubit_state(psi).entries, probs, n_fock, t_delta, threshold);
}

MetricsRecord record(const DensityMatrix& rho, double t_delta, double threshold) {
  const Index n_fock = fock_dim_of(rho.space_dims, "record");
  const RealVector probs = rho.entries.diagonal().real();
  return record_from_parts(partial_trace_boson(rho).entries, probs, n_fock, t_delta, threshold);
}

MetricsAccumulator::MetricsAccumulator(Index n_fock)
    : n_fock_(n_fock), rho_q_(Matrix::Zero(4, 4)), probs_(RealVector::Zero(4 * n_fock)) {}

void MetricsAccumulator::add(const StateVector& psi, double weight) {
  if (psi.dim() != 4 * n_fock_) throw std::invalid_argument("MetricsAccumulator: dim mismatch");
  rho_q_ += weight * reduced_qubit_state(psi).entries;
  probs_ += weight * psi.amplitudes.cwiseAbs2().eval();
}

MetricsRecord MetricsAccumulator::finalize(double t_delta, double threshold) const {
  return record_from_parts(rho_q_, probs_, n_fock_, t_delta, threshold);
}

}  // namespace qrabi
