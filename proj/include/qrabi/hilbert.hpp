// Complex linear algebra over the composite Hilbert space qubit ⊗ qubit ⊗ Fock(N):
// tensor products, adjoints, state application, partial traces, normalization.
//
// Layout convention, fixed globally: subsystem order is (qubit 1, qubit 2, boson).
// A product basis state |Q n> sits at flat index q*N + n, where
// q in {gg=0, ge=1, eg=2, ee=3} and |g> = qubit index 0, |e> = qubit index 1.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace qrabi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Tolerances used by the advisory tag / density-matrix validators.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kEigenvalueFloor = -1e-10;
inline constexpr double kNormTol = 1e-10;

// ---------------------------------------------------------------------------
// Basis vocabulary
// ---------------------------------------------------------------------------

enum class QubitLabel : int { gg = 0, ge = 1, eg = 2, ee = 3 };
enum class BellLabel : int { psi_plus = 0, psi_minus = 1, phi_plus = 2, phi_minus = 3 };

inline constexpr std::array<QubitLabel, 4> kQubitLabels{QubitLabel::gg, QubitLabel::ge,
                                                        QubitLabel::eg, QubitLabel::ee};
inline constexpr std::array<BellLabel, 4> kBellLabels{BellLabel::psi_plus, BellLabel::psi_minus,
                                                      BellLabel::phi_plus, BellLabel::phi_minus};

std::string to_string(QubitLabel q);
std::string to_string(BellLabel b);
QubitLabel qubit_label_from_string(const std::string& s);
BellLabel bell_label_from_string(const std::string& s);

// Number of excited qubits in |Q>.
int excitation_count(QubitLabel q);

// ---------------------------------------------------------------------------
// Value types
// ---------------------------------------------------------------------------

struct StateVector {
  Vector amplitudes;
  std::vector<Index> space_dims;  // ordered subsystem dimensions, e.g. {2, 2, N}

  Index dim() const { return amplitudes.size(); }
  double norm() const { return amplitudes.norm(); }
};

struct Operator {
  Matrix entries;
  bool hermitian = false;  // advisory tag
  bool unitary = false;    // advisory tag

  Index dim() const { return entries.rows(); }
};

struct DensityMatrix {
  Matrix entries;
  std::vector<Index> space_dims;

  Index dim() const { return entries.rows(); }
  Complex trace() const { return entries.trace(); }
};

// Factories. All validate shape; the tagging factories also check the tag
// invariants (hermitian to 1e-12, unitary to 1e-10) and throw on violation.
StateVector make_state(Vector amplitudes, std::vector<Index> space_dims);
Operator make_operator(Matrix entries);
Operator make_hermitian(Matrix entries);
Operator make_unitary(Matrix entries);
DensityMatrix make_density(Matrix entries, std::vector<Index> space_dims);

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
bool is_unitary(const Matrix& m, double tol = kUnitaryTol);

// Full density-matrix validity check: Hermitian to 1e-12, unit trace to 1e-10,
// eigenvalues >= -1e-10. Costs an eigendecomposition; meant for tests and
// input validation, not hot loops.
void validate_density(const DensityMatrix& rho);

// Largest entry magnitude; the norm used by most tolerance statements here.
double max_abs(const Matrix& m);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Kronecker product in the declared subsystem order. Tags propagate:
// a product of hermitian (unitary) factors is hermitian (unitary).
Operator tensor(std::span<const Operator> factors);
Operator tensor(const Operator& a, const Operator& b);
Operator tensor(const Operator& a, const Operator& b, const Operator& c);

// Conjugate transpose.
Operator dagger(const Operator& op);

// Matrix-vector product; preserves space_dims.
StateVector apply(const Operator& op, const StateVector& s);

// Reduce over the boson factor: space_dims {2,2,N} -> 4x4 two-qubit state.
DensityMatrix partial_trace_boson(const DensityMatrix& rho);

// Reduce over both qubits: space_dims {2,2,N} -> NxN boson state.
DensityMatrix partial_trace_qubits(const DensityMatrix& rho);

// Rescale to unit norm; throws on an effectively zero vector (norm <= 1e-14).
StateVector normalize(const StateVector& s);

// |psi><psi|.
DensityMatrix outer_product(const StateVector& psi);

// <a|b>.
Complex overlap(const StateVector& a, const StateVector& b);

// Two-qubit reduced state of a pure full-space state; equals
// partial_trace_boson(outer_product(psi)) without forming the full outer product.
DensityMatrix reduced_qubit_state(const StateVector& psi);

// ---------------------------------------------------------------------------
// Basis helpers for the composite space
// ---------------------------------------------------------------------------

inline std::vector<Index> composite_dims(Index n_fock) { return {2, 2, n_fock}; }

inline Index basis_index(QubitLabel q, Index n, Index n_fock) {
  return static_cast<Index>(q) * n_fock + n;
}

// |Q n> in the composite space with N Fock levels.
StateVector basis_state(QubitLabel q, Index n, Index n_fock);

// |Q> alone (dim 4, space_dims {2,2}).
StateVector qubit_basis_state(QubitLabel q);

}  // namespace qrabi
