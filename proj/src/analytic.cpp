#include "qrabi/analytic.hpp"

#include "qrabi/errors.hpp"

#include <cmath>
#include <stdexcept>

namespace qrabi {

double phi_t(double t, double delta) { return t * delta - std::sin(t * delta); }

PhasePair phases(double t, const RabiParams& p) {
  const double delta = p.delta();
  if (!(delta > 0.0)) throw std::invalid_argument("phases: requires Delta > 0");
  const double phi = phi_t(t, delta);
  return PhasePair{phi * (p.gamma1 * p.gamma1 + p.gamma2 * p.gamma2) / (delta * delta),
                   phi * 2.0 * p.gamma1 * p.gamma2 / (delta * delta)};
}

int fock_levels_for_displacement(double abs_displacement) {
  const double d = std::abs(abs_displacement);
  return static_cast<int>(std::ceil(d * d + 8.0 * d)) + 2;
}

namespace {

void require_cutoff_for(double abs_displacement, const FockCutoff& cutoff, const char* op) {
  const int needed = fock_levels_for_displacement(abs_displacement);
  if (cutoff.n_max < needed) {
    throw ConvergenceError(std::string(op) + ": cutoff " + std::to_string(cutoff.n_max) +
                               " too small for displacement " +
                               std::to_string(abs_displacement) + " (need >= " +
                               std::to_string(needed) + ")",
                           needed);
  }
}

// Diagonal phases exp(i phase_per_level * n), n = 0..N-1.
Vector level_phases(double phase_per_level, Index n_fock) {
  Vector v(n_fock);
  for (Index n = 0; n < n_fock; ++n) {
    v(n) = std::exp(kI * (phase_per_level * static_cast<double>(n)));
  }
  return v;
}

}  // namespace

Operator displacement_operator(Complex alpha, const FockCutoff& cutoff) {
  require_cutoff_for(std::abs(alpha), cutoff, "displacement_operator");
  const Index n = cutoff.n_max;
  const Matrix a = annihilation(cutoff).entries;
  // alpha a+ - alpha* a = -i r M with M = i(a+ - a) Hermitian and r = |alpha|,
  // after rotating by the phase of alpha: D(r e^{i phi}) = P(phi) D(r) P(-phi).
  const Matrix generator = kI * (a.adjoint() - a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(generator);
  const double r = std::abs(alpha);
  Vector branch_phases(n);
  for (Index k = 0; k < n; ++k) branch_phases(k) = std::exp(-kI * (r * es.eigenvalues()(k)));
  Matrix d_real = es.eigenvectors() * branch_phases.asDiagonal() * es.eigenvectors().adjoint();
  if (alpha != Complex{0.0, 0.0}) {
    const Vector p = level_phases(std::arg(alpha), n);
    d_real = p.asDiagonal() * d_real * p.conjugate().asDiagonal();
  }
  Operator out{std::move(d_real)};
  out.unitary = true;
  return out;
}

StateVector coherent_state(Complex alpha, const FockCutoff& cutoff) {
  require_cutoff_for(std::abs(alpha), cutoff, "coherent_state");
  const Index n = cutoff.n_max;
  Vector amps(n);
  amps(0) = std::exp(-0.5 * std::norm(alpha));
  for (Index k = 1; k < n; ++k) amps(k) = amps(k - 1) * alpha / std::sqrt(static_cast<double>(k));
  StateVector out{std::move(amps), {n}};
  return normalize(out);  // absorbs the truncated tail
}

StateVector cat_state(Complex alpha, ParityChain parity, const FockCutoff& cutoff) {
  const StateVector plus = coherent_state(alpha, cutoff);
  const StateVector minus = coherent_state(-alpha, cutoff);
  const double sign = (parity == ParityChain::even) ? 1.0 : -1.0;
  StateVector cat{plus.amplitudes + sign * minus.amplitudes, plus.space_dims};
  return normalize(cat);  // throws for the degenerate odd cat at alpha = 0
}

StateVector bell_state(BellLabel label) {
  Vector amps = Vector::Zero(4);
  const double r = 1.0 / std::sqrt(2.0);
  switch (label) {
    case BellLabel::psi_plus:
      amps(static_cast<Index>(QubitLabel::gg)) = r;
      amps(static_cast<Index>(QubitLabel::ee)) = kI * r;
      break;
    case BellLabel::psi_minus:
      amps(static_cast<Index>(QubitLabel::gg)) = r;
      amps(static_cast<Index>(QubitLabel::ee)) = -kI * r;
      break;
    case BellLabel::phi_plus:
      amps(static_cast<Index>(QubitLabel::eg)) = r;
      amps(static_cast<Index>(QubitLabel::ge)) = kI * r;
      break;
    case BellLabel::phi_minus:
      amps(static_cast<Index>(QubitLabel::eg)) = r;
      amps(static_cast<Index>(QubitLabel::ge)) = -kI * r;
      break;
  }
  return StateVector{std::move(amps), {2, 2}};
}

BellLabel gate_map(QubitLabel q0, int m) {
  if (m < 0) throw std::invalid_argument("gate_map: m must be >= 0");
  const bool even_m = (m % 2 == 0);
  switch (q0) {
    case QubitLabel::gg: return even_m ? BellLabel::psi_plus : BellLabel::psi_minus;
    case QubitLabel::ee: return even_m ? BellLabel::psi_minus : BellLabel::psi_plus;
    case QubitLabel::eg: return even_m ? BellLabel::phi_plus : BellLabel::phi_minus;
    case QubitLabel::ge: return even_m ? BellLabel::phi_minus : BellLabel::phi_plus;
  }
  throw std::invalid_argument("bad QubitLabel");
}

StateVector revival_state(int n, const RabiParams& p) {
  if (n < 1) throw std::invalid_argument("revival_state: n must be >= 1");
  const double delta = p.delta();
  const double t_n = 2.0 * kPi * n / delta;
  const double phi_l = phases(t_n, p).phi_l;
  Vector amps = Vector::Zero(4);
  amps(static_cast<Index>(QubitLabel::gg)) = std::cos(phi_l);
  amps(static_cast<Index>(QubitLabel::ee)) = kI * std::sin(phi_l);
  return normalize(StateVector{std::move(amps), {2, 2}});
}

// ---------------------------------------------------------------------------
// AnalyticEngine
// ---------------------------------------------------------------------------

AnalyticEngine::AnalyticEngine(const RabiParams& p, const FockCutoff& cutoff)
    : params_(p), cutoff_(cutoff) {
  validate(p);
  delta_ = p.delta();
  if (!(delta_ > 0.0)) throw std::invalid_argument("AnalyticEngine: requires Delta > 0");
  branch_gamma_ = gamma_branch_values(p);
  // Largest displacement reached over time is 2 gamma_plus.
  require_cutoff_for(2.0 * std::abs(branch_gamma_[0]), cutoff_, "AnalyticEngine");
  rotation_ = plus_minus_rotation();
  const Matrix a = annihilation(cutoff_).entries;
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(kI * (a.adjoint() - a)));
  generator_eigs_ = es.eigenvalues();
  generator_vecs_ = es.eigenvectors();
}

double AnalyticEngine::revival_time(int n) const {
  if (n < 0) throw std::invalid_argument("revival_time: n must be >= 0");
  return 2.0 * kPi * n / delta_;
}

Matrix AnalyticEngine::branch_displacement(double t, int branch) const {
  const Complex amplitude =
      (std::exp(-kI * (t * delta_)) - 1.0) * branch_gamma_[static_cast<std::size_t>(branch)];
  const Index n = cutoff_.n_max;
  const double r = std::abs(amplitude);
  Vector phases_vec(n);
  for (Index k = 0; k < n; ++k) phases_vec(k) = std::exp(-kI * (r * generator_eigs_(k)));
  Matrix d = generator_vecs_ * phases_vec.asDiagonal() * generator_vecs_.adjoint();
  if (r > 0.0) {
    const Vector p = level_phases(std::arg(amplitude), n);
    d = p.asDiagonal() * d * p.conjugate().asDiagonal();
  }
  return d;
}

Operator AnalyticEngine::propagator(double t) const {
  const Index n = cutoff_.n_max;
  const double phi = phi_t(t, delta_);
  const Vector free_rotation = level_phases(-t * delta_, n);
  Matrix u = Matrix::Zero(4 * n, 4 * n);
  for (int s = 0; s < 4; ++s) {
    const double g = branch_gamma_[static_cast<std::size_t>(s)];
    const Complex branch_phase = std::exp(kI * (phi * g * g));
    const Matrix block = branch_phase * (branch_displacement(t, s) *
                                         Matrix(free_rotation.asDiagonal()));
    for (Index q = 0; q < 4; ++q) {
      for (Index q2 = 0; q2 < 4; ++q2) {
        u.block(q * n, q2 * n, n, n) += (rotation_(q, s) * rotation_(q2, s)) * block;
      }
    }
  }
  Operator out{std::move(u)};
  out.unitary = true;
  return out;
}

StateVector AnalyticEngine::evolve(const StateVector& psi0, double t) const {
  const Index n = cutoff_.n_max;
  if (psi0.dim() != 4 * n) throw std::invalid_argument("evolve: state dimension mismatch");
  // Columns of `branches` hold the boson component of each qubit branch.
  Matrix branches(n, 4);
  for (Index q = 0; q < 4; ++q) branches.col(q) = psi0.amplitudes.segment(q * n, n);
  branches = branches * rotation_;  // into the ± basis (rotation is real symmetric)

  const double phi = phi_t(t, delta_);
  const Vector free_rotation = level_phases(-t * delta_, n);
  for (int s = 0; s < 4; ++s) {
    const double g = branch_gamma_[static_cast<std::size_t>(s)];
    Vector boson = free_rotation.asDiagonal() * branches.col(s);
    boson = branch_displacement(t, s) * boson;
    branches.col(s) = std::exp(kI * (phi * g * g)) * boson;
  }

  branches = branches * rotation_;  // back to the computational basis
  Vector out(4 * n);
  for (Index q = 0; q < 4; ++q) out.segment(q * n, n) = branches.col(q);
  return StateVector{std::move(out), psi0.space_dims};
}

DensityMatrix AnalyticEngine::evolve_density(const DensityMatrix& rho0, double t) const {
  if (rho0.dim() != 4 * cutoff_.n_max) {
    throw std::invalid_argument("evolve_density: dimension mismatch");
  }
  const Matrix u = propagator(t).entries;
  return DensityMatrix{u * rho0.entries * u.adjoint(), rho0.space_dims};
}

// ---------------------------------------------------------------------------

StateVector analytic_evolved_state(double t, QubitLabel q0, const RabiParams& p,
                                   const FockCutoff& cutoff) {
  if (q0 != QubitLabel::gg) {
    AnalyticEngine engine(p, cutoff);
    return engine.evolve(basis_state(q0, 0, cutoff.n_max), t);
  }

  // Literal cat-superposition expansion for the |gg 0> start: per qubit label,
  // a combination of even/odd cat components over the two displacement branches.
  const double delta = p.delta();
  const PhasePair ph = phases(t, p);
  const Complex prefactor = 0.25 * std::exp(kI * (ph.phi_g + ph.phi_l));
  const Complex relative = std::exp(-2.0 * kI * ph.phi_l);
  const std::array<double, 4> branch = gamma_branch_values(p);
  const Complex winding = std::exp(-kI * (t * delta)) - 1.0;
  const Complex amp_plus = winding * branch[0];   // gamma_plus branch
  const Complex amp_minus = winding * branch[1];  // gamma_minus branch

  const Index n = cutoff.n_max;
  const Vector plus_p = coherent_state(amp_plus, cutoff).amplitudes;
  const Vector plus_m = coherent_state(-amp_plus, cutoff).amplitudes;
  const Vector minus_p = coherent_state(amp_minus, cutoff).amplitudes;
  const Vector minus_m = coherent_state(-amp_minus, cutoff).amplitudes;
  const Vector even_plus = plus_p + plus_m;    // |c_E^(+)>
  const Vector odd_plus = plus_p - plus_m;     // |c_O^(+)>
  const Vector even_minus = minus_p + minus_m; // |c_E^(-)>
  const Vector odd_minus = minus_p - minus_m;  // |c_O^(-)>

  Vector out = Vector::Zero(4 * n);
  out.segment(static_cast<Index>(QubitLabel::gg) * n, n) = even_plus + relative * even_minus;
  out.segment(static_cast<Index>(QubitLabel::ge) * n, n) = odd_plus - relative * odd_minus;
  out.segment(static_cast<Index>(QubitLabel::eg) * n, n) = odd_plus + relative * odd_minus;
  out.segment(static_cast<Index>(QubitLabel::ee) * n, n) = even_plus - relative * even_minus;
  out *= prefactor;
  // The printed prefactor already normalizes this; renormalize to absorb
  // truncation round-off only.
  return normalize(StateVector{std::move(out), composite_dims(n)});
}

DensityMatrix mixed_boson_revival(const DensityMatrix& rho_b0, int n, const RabiParams& p,
                                  const FockCutoff& cutoff) {
  if (n < 1) throw std::invalid_argument("mixed_boson_revival: n must be >= 1");
  if (rho_b0.dim() != cutoff.n_max) {
    throw std::invalid_argument("mixed_boson_revival: boson state does not match cutoff");
  }
  const Operator qubit_part{
      qubit_basis_state(QubitLabel::gg).amplitudes *
      qubit_basis_state(QubitLabel::gg).amplitudes.adjoint()};
  const DensityMatrix rho0 = make_density(
      tensor(qubit_part, Operator{rho_b0.entries}).entries, composite_dims(cutoff.n_max));
  AnalyticEngine engine(p, cutoff);
  return engine.evolve_density(rho0, engine.revival_time(n));
}

DensityMatrix thermal_state(double mean_occupancy, const FockCutoff& cutoff) {
  if (mean_occupancy < 0.0) throw std::invalid_argument("thermal_state: negative occupancy");
  const Index n = cutoff.n_max;
  Vector diag = Vector::Zero(n);
  if (mean_occupancy == 0.0) {
    diag(0) = 1.0;
  } else {
    const double ratio = mean_occupancy / (1.0 + mean_occupancy);
    double weight = 1.0;
    double total = 0.0;
    for (Index k = 0; k < n; ++k) {
      diag(k) = weight;
      total += weight;
      weight *= ratio;
    }
    diag /= total;  // exact unit trace on the truncated space
  }
  return DensityMatrix{Matrix(diag.asDiagonal()), {n}};
}

}  // namespace qrabi
