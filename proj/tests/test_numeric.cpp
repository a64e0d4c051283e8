#include "qrabi/numeric.hpp"

#include "qrabi/analytic.hpp"
#include "qrabi/metrics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace qrabi;

namespace {

double real_expectation(const Matrix& op, const Vector& psi) {
  return std::real(psi.dot(op * psi));
}

double odd_chain_population(const StateVector& psi) {
  const Index n_fock = psi.space_dims[2];
  double population = 0.0;
  for (QubitLabel q : kQubitLabels) {
    for (Index n = 0; n < n_fock; ++n) {
      if (parity_chain_of(q, static_cast<int>(n)) == ParityChain::odd) {
        population += std::norm(psi.amplitudes(basis_index(q, n, n_fock)));
      }
    }
  }
  return population;
}

}  // namespace

TEST_CASE("eigendecompose") {
  SUBCASE("diagonal input reproduces itself") {
    Vector d(4);
    d << -1.5, -0.25, 0.0, 2.0;
    const Operator h{Matrix(d.asDiagonal()), true, false};
    const Spectrum s = eigendecompose(h);
    for (Index k = 0; k < 4; ++k) {
      CHECK(s.eigenvalues(k) == doctest::Approx(d(k).real()).epsilon(1e-14));
    }
  }
  SUBCASE("uncoupled slow-qubit Hamiltonian has a 4-fold degenerate ladder") {
    const RabiParams p{1.0, 0.3, 0.3, 0.0, 0.0};  // Delta = 0.7
    const Spectrum s = eigendecompose(build_slow_qubit_hamiltonian(p, make_cutoff(5)));
    for (Index k = 0; k < 20; ++k) {
      CHECK(s.eigenvalues(k) == doctest::Approx(0.7 * static_cast<double>(k / 4)).epsilon(1e-12));
    }
  }
  SUBCASE("reconstruction residual on a random Hermitian matrix") {
    std::mt19937 rng(2024);
    const Matrix a = oracles::random_complex_matrix(64, 64, rng);
    const Matrix h = 0.5 * (a + a.adjoint());
    const Spectrum s = eigendecompose(Operator{h, true, false});
    const Matrix residual =
        h * s.eigenvectors - s.eigenvectors * s.eigenvalues.asDiagonal().toDenseMatrix();
    CHECK(max_abs(residual) <= 1e-10 * max_abs(h));
    CHECK(is_unitary(s.eigenvectors, 1e-10));
  }
  SUBCASE("untagged operators are rejected") {
    CHECK_THROWS_AS(eigendecompose(Operator{Matrix::Identity(3, 3)}), std::invalid_argument);
  }
}

TEST_CASE("propagate") {
  SUBCASE("t = 0 returns the initial state") {
    const RabiParams p{1.0, 0.2, 0.3, 0.4, 0.5};
    const FockCutoff cutoff = make_cutoff(10);
    const Spectrum s = eigendecompose(build_full_hamiltonian(p, cutoff));
    const StateVector psi0 = basis_state(QubitLabel::ge, 2, 10);
    const Trajectory traj = propagate(s, psi0, {0.0});
    CHECK(max_abs(traj.states[0].amplitudes - psi0.amplitudes) <= 1e-12);
  }
  SUBCASE("free boson keeps its occupation") {
    const RabiParams p{1.0, 0.0, 0.0, 0.0, 0.0};
    const FockCutoff cutoff = make_cutoff(8);
    const Spectrum s = eigendecompose(build_full_hamiltonian(p, cutoff));
    const Matrix a = annihilation(cutoff).entries;
    const Matrix number = oracles::brute_kron(Matrix::Identity(4, 4), Matrix(a.adjoint() * a));
    const StateVector psi0 = basis_state(QubitLabel::gg, 1, 8);
    for (const auto& state : propagate(s, psi0, {0.5, 1.8, 4.4}).states) {
      CHECK(real_expectation(number, state.amplitudes) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("norm is preserved along the trajectory") {
    const RabiParams p{1.0, 0.15, 0.08, 0.8, 0.6};
    const FockCutoff cutoff = required_cutoff(p.gamma1, p.gamma2, 1.0 - 0.15);
    const Spectrum s = eigendecompose(build_full_hamiltonian(p, cutoff));
    std::mt19937 rng(5150);
    const StateVector psi0{oracles::random_unit_vector(4 * cutoff.n_max, rng),
                           composite_dims(cutoff.n_max)};
    for (const auto& state : propagate(s, psi0, {1.0, 7.7, 31.4}).states) {
      CHECK(state.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("dimension mismatch and unsorted times throw") {
    const Spectrum s = eigendecompose(Operator{Matrix::Identity(4, 4), true, false});
    const StateVector psi0 = basis_state(QubitLabel::gg, 0, 2);
    CHECK_THROWS_AS(propagate(s, basis_state(QubitLabel::gg, 0, 3), {0.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(propagate(s, psi0, {1.0, 0.5}), std::invalid_argument);
  }
}

TEST_CASE("slow-qubit limit converges to the analytic engine") {
  // omega_q = 1e-3 omega; modest couplings keep the test quick.
  const double omega_q = 1e-3;
  const double delta = 1.0 - omega_q;
  const RabiParams p{1.0, omega_q, omega_q, 0.25 * delta, 0.25 * delta};
  const FockCutoff cutoff = required_cutoff(p);
  const double t1 = 2.0 * kPi / delta;

  const Spectrum s = eigendecompose(build_full_hamiltonian(p, cutoff));
  const StateVector psi0 = basis_state(QubitLabel::gg, 0, cutoff.n_max);
  const StateVector lab = propagate(s, psi0, {t1}).states[0];
  const StateVector rotating =
      to_frame(lab, t1, FrameSpec::rotating(omega_q, omega_q, omega_q));

  const AnalyticEngine engine(p, cutoff);
  const StateVector analytic = engine.evolve(psi0, t1);
  CHECK(std::norm(overlap(analytic, rotating)) >= 0.999);
}

TEST_CASE("propagate_density") {
  const RabiParams p{1.0, 0.1, 0.1, 0.35, 0.2};
  const FockCutoff cutoff = make_cutoff(24);
  const Spectrum s = eigendecompose(build_full_hamiltonian(p, cutoff));
  SUBCASE("pure density matches the outer product of the pure propagation") {
    const StateVector psi0 = basis_state(QubitLabel::gg, 0, cutoff.n_max);
    const std::vector<double> times{0.9, 3.1};
    const Trajectory pure = propagate(s, psi0, times);
    const DensityTrajectory mixed = propagate_density(s, outer_product(psi0), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(max_abs(mixed.states[i].entries - outer_product(pure.states[i]).entries) <= 1e-12);
    }
  }
  SUBCASE("trace is preserved for a mixed input") {
    const Matrix mixed_qubits = Matrix::Identity(4, 4) / 4.0;
    Matrix vac = Matrix::Zero(cutoff.n_max, cutoff.n_max);
    vac(0, 0) = 1.0;
    const DensityMatrix rho0 =
        make_density(oracles::brute_kron(mixed_qubits, vac), composite_dims(cutoff.n_max));
    for (const auto& rho : propagate_density(s, rho0, {2.2, 6.6}).states) {
      CHECK(std::abs(rho.trace() - Complex{1.0}) <= 1e-10);
    }
  }
}

TEST_CASE("thermal preparation factorizes at the revival in the slow-qubit limit") {
  const double omega_q = 1e-4;
  const double delta = 1.0 - omega_q;
  const RabiParams p{1.0, omega_q, omega_q, 0.25 * delta, 0.25 * delta};
  const FockCutoff cutoff = required_cutoff(p);
  const double t1 = 2.0 * kPi / delta;

  const DensityMatrix rho_b0 = thermal_state(0.3, cutoff);
  Matrix qubit_part = Matrix::Zero(4, 4);
  qubit_part(0, 0) = 1.0;
  const DensityMatrix rho0 = make_density(oracles::brute_kron(qubit_part, rho_b0.entries),
                                          composite_dims(cutoff.n_max));
  const Spectrum s = eigendecompose(build_full_hamiltonian(p, cutoff));
  const DensityMatrix rho_t1 = propagate_density(s, rho0, {t1}).states[0];

  // Compare against the analytic revival prediction.
  const DensityMatrix analytic = mixed_boson_revival(rho_b0, 1, p, cutoff);
  CHECK(purity(partial_trace_boson(rho_t1)) >= 0.998);
  CHECK(max_abs(partial_trace_qubits(rho_t1).entries - rho_b0.entries) <= 2e-3);
  CHECK(max_abs(partial_trace_boson(analytic).entries -
                partial_trace_boson(rho_t1).entries) <= 0.05);
}

TEST_CASE("to_frame") {
  std::mt19937 rng(11);
  const StateVector psi{oracles::random_unit_vector(24, rng), composite_dims(6)};
  SUBCASE("lab frame and t = 0 are identities") {
    CHECK(max_abs(to_frame(psi, 3.7, FrameSpec::lab()).amplitudes - psi.amplitudes) == 0.0);
    const FrameSpec rot = FrameSpec::rotating(0.3, 0.2, 0.1);
    CHECK(max_abs(to_frame(psi, 0.0, rot).amplitudes - psi.amplitudes) <= 1e-15);
  }
  SUBCASE("opposite frequencies invert") {
    const FrameSpec fwd = FrameSpec::rotating(0.4, 0.9, 0.3);
    const FrameSpec bwd = FrameSpec::rotating(-0.4, -0.9, -0.3);
    const StateVector round = to_frame(to_frame(psi, 2.9, fwd), 2.9, bwd);
    CHECK(max_abs(round.amplitudes - psi.amplitudes) <= 1e-14);
  }
  SUBCASE("matches the diagonal of the generating Hamiltonian") {
    // exp(+i t H0) with H0 = f_b n + (f1/2) sz1 + (f2/2) sz2 on a basis state.
    const FrameSpec f = FrameSpec::rotating(0.25, 0.5, 0.75);
    const StateVector basis = basis_state(QubitLabel::eg, 2, 6);
    const StateVector framed = to_frame(basis, 1.0, f);
    // eg: z1 = +1, z2 = -1.
    const Complex expected = std::exp(kI * (0.25 * 2.0 + 0.5 * 0.5 - 0.75 * 0.5));
    CHECK(std::abs(framed.amplitudes(basis_index(QubitLabel::eg, 2, 6)) - expected) <= 1e-14);
  }
}

TEST_CASE("required_cutoff") {
  CHECK(required_cutoff(0.0, 0.0, 1.0).n_max == 20);
  const FockCutoff fig2 = required_cutoff(2.0, 65.0 / 32.0, 1.0);
  CHECK(fig2.n_max == 150);
  // Doubling the cutoff changes the figure-2 state at t1 only marginally.
  const RabiParams p{1.0, 0.0, 0.0, 2.0, 65.0 / 32.0};
  const AnalyticEngine coarse(p, fig2);
  const AnalyticEngine fine(p, make_cutoff(2 * fig2.n_max));
  const StateVector psi_coarse =
      coarse.evolve(basis_state(QubitLabel::gg, 0, fig2.n_max), 2.0 * kPi);
  const StateVector psi_fine =
      fine.evolve(basis_state(QubitLabel::gg, 0, 2 * fig2.n_max), 2.0 * kPi);
  Complex ov = 0.0;
  for (Index q = 0; q < 4; ++q) {
    ov += psi_coarse.amplitudes.segment(q * fig2.n_max, fig2.n_max)
              .dot(psi_fine.amplitudes.segment(q * 2 * fig2.n_max, fig2.n_max));
  }
  CHECK(std::abs(1.0 - std::norm(ov)) <= 1e-8);
}

TEST_CASE("cutoff_convergence") {
  SUBCASE("free evolution from the vacuum has no tail") {
    const RabiParams p{1.0, 0.0, 0.0, 0.0, 0.0};
    const FockCutoff cutoff = make_cutoff(20);
    const Spectrum s = eigendecompose(build_full_hamiltonian(p, cutoff));
    const Trajectory traj =
        propagate(s, basis_state(QubitLabel::gg, 0, 20), {1.0, 2.0, 3.0});
    const CutoffReport report = cutoff_convergence(traj);
    CHECK(report.pass);
    CHECK(report.max_tail_population == 0.0);
  }
  SUBCASE("figure-2 couplings at N = 16 fail") {
    const RabiParams p{1.0, 0.1, 0.1, 1.8, 65.0 / 32.0 * 0.9};
    const FockCutoff cutoff = make_cutoff(16);
    const Spectrum s = eigendecompose(build_full_hamiltonian(p, cutoff));
    std::vector<double> times;
    for (int i = 1; i <= 40; ++i) times.push_back(0.25 * i);
    const CutoffReport report =
        cutoff_convergence(propagate(s, basis_state(QubitLabel::gg, 0, 16), times));
    CHECK_FALSE(report.pass);
    CHECK(report.recommended_n_max > 16);
  }
  SUBCASE("the recommended cutoff passes") {
    const RabiParams p{1.0, 0.0, 0.0, 2.0, 65.0 / 32.0};
    const FockCutoff cutoff = required_cutoff(p);
    const AnalyticEngine engine(p, cutoff);
    Trajectory traj;
    const StateVector psi0 = basis_state(QubitLabel::gg, 0, cutoff.n_max);
    for (int i = 0; i <= 40; ++i) {
      traj.times.push_back(0.2 * kPi * i);
      traj.states.push_back(engine.evolve(psi0, traj.times.back()));
    }
    CHECK(cutoff_convergence(traj).pass);
  }
}

TEST_CASE("conservation laws along numeric trajectories") {
  std::mt19937 rng(8787);
  std::uniform_real_distribution<double> coupling(0.1, 0.9);
  std::uniform_real_distribution<double> freq(0.0, 0.5);
  for (int trial = 0; trial < 4; ++trial) {
    const RabiParams p{1.0, freq(rng), freq(rng), coupling(rng), coupling(rng)};
    const FockCutoff cutoff = required_cutoff(p.gamma1, p.gamma2, 0.5);
    const Operator h = build_full_hamiltonian(p, cutoff);
    const Spectrum s = eigendecompose(h);
    const Matrix parity = parity_operator(cutoff).entries;
    const StateVector psi0 = basis_state(QubitLabel::gg, 0, cutoff.n_max);
    const double e0 = real_expectation(h.entries, psi0.amplitudes);
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(1.1 * i);
    for (const auto& state : propagate(s, psi0, times).states) {
      CHECK(std::abs(state.norm() - 1.0) <= 1e-10);
      const double e = real_expectation(h.entries, state.amplitudes);
      CHECK(std::abs(e - e0) <= 1e-10 * std::max(1.0, std::abs(e0)));
      CHECK(std::abs(real_expectation(parity, state.amplitudes) - 1.0) <= 1e-10);
      CHECK(odd_chain_population(state) <= 1e-10);
    }
  }
}

TEST_CASE("slow-qubit convergence is monotone over three decades") {
  // Small couplings keep the spaces tiny; the acceptance suite runs the
  // figure-scale version.
  const double gamma_over_delta = 0.25;
  double previous = 0.0;
  for (double ratio : {1e-1, 1e-2, 1e-3}) {
    const double delta = 1.0 - ratio;
    const RabiParams p{1.0, ratio, ratio, gamma_over_delta * delta, gamma_over_delta * delta};
    const FockCutoff cutoff = required_cutoff(p);
    const double t1 = 2.0 * kPi / delta;
    const Spectrum s = eigendecompose(build_full_hamiltonian(p, cutoff));
    const StateVector psi0 = basis_state(QubitLabel::gg, 0, cutoff.n_max);
    const StateVector lab = propagate(s, psi0, {t1}).states[0];
    const StateVector rotating = to_frame(lab, t1, FrameSpec::rotating(ratio, ratio, ratio));
    const AnalyticEngine engine(p, cutoff);
    const double fidelity = std::norm(overlap(engine.evolve(psi0, t1), rotating));
    CHECK(fidelity > previous);
    previous = fidelity;
  }
  CHECK(previous >= 0.999);
}
