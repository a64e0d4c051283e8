// Figures of merit: joint probabilities, reduced-state purity, Wootters
// concurrence, Bell fidelities, and the per-time record bundling them.

#pragma once

#include "qrabi/hilbert.hpp"

#include <array>
#include <vector>

namespace qrabi {

struct JointProbability {
  QubitLabel q;
  int n;
  double p;
};

struct MetricsRecord {
  double t_delta = 0.0;
  std::vector<JointProbability> joint_probs;  // sparse, entries above threshold
  double purity_q = 0.0;
  double concurrence = 0.0;
  std::array<double, 4> bell_fidelity{};  // indexed by BellLabel
  double parity_expectation = 0.0;

  double joint(QubitLabel q, int n) const;  // 0 when below threshold
};

inline constexpr double kJointProbThreshold = 1e-12;

double joint_probability(const StateVector& psi, QubitLabel q, int n);
double joint_probability(const DensityMatrix& rho, QubitLabel q, int n);

// Tr[rho^2].
double purity(const DensityMatrix& rho);

// Wootters concurrence of a 4x4 two-qubit state: descending square roots of
// the eigenvalues of rho * (sy⊗sy) rho* (sy⊗sy), C = max(0, l1-l2-l3-l4).
double concurrence(const DensityMatrix& rho_q);

// <bell| rho_q |bell>.
double fidelity_to_bell(const DensityMatrix& rho_q, BellLabel label);

// All metrics of one full-space state at one time point.
MetricsRecord record(const StateVector& psi, double t_delta,
                     double threshold = kJointProbThreshold);
MetricsRecord record(const DensityMatrix& rho, double t_delta,
                     double threshold = kJointProbThreshold);

// Accumulates a weighted mixture of pure full-space states and produces the
// record of the mixed state without ever forming it.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(Index n_fock);
  void add(const StateVector& psi, double weight);
  MetricsRecord finalize(double t_delta, double threshold = kJointProbThreshold) const;

 private:
  Index n_fock_;
  Matrix rho_q_;
  RealVector probs_;
};

}  // namespace qrabi
