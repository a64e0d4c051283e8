#include "qrabi/analytic.hpp"

#include "qrabi/errors.hpp"
#include "qrabi/metrics.hpp"
#include "qrabi/numeric.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace qrabi;

namespace {

// Figure-2 parameters: Gamma1 = 2 Delta, Gamma2 = (65/32) Delta, Delta = 1.
const RabiParams kFig2{1.0, 0.0, 0.0, 2.0, 65.0 / 32.0};

double mod_two_pi(double x) {
  const double two_pi = 2.0 * kPi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

StateVector embed_qubit_state(const Vector& qubit_amps, Index n_fock) {
  Vector amps = Vector::Zero(4 * n_fock);
  for (Index q = 0; q < 4; ++q) amps(q * n_fock) = qubit_amps(q);
  return StateVector{std::move(amps), composite_dims(n_fock)};
}

}  // namespace

TEST_CASE("phi_t special points") {
  CHECK(phi_t(0.0, 0.7) == 0.0);
  CHECK(phi_t(2.0 * kPi * 3.0 / 0.7, 0.7) == doctest::Approx(6.0 * kPi).epsilon(1e-12));
  CHECK(phi_t(kPi / 0.7, 0.7) == doctest::Approx(kPi).epsilon(1e-12));
}

TEST_CASE("phases at the revival times for the figure-2 couplings") {
  const double t1 = 2.0 * kPi;  // Delta = 1
  SUBCASE("local phase at t1 reduces to pi/4") {
    const double phi_l = phases(t1, kFig2).phi_l;
    CHECK(phi_l == doctest::Approx(65.0 * kPi / 4.0).epsilon(1e-12));
    CHECK(mod_two_pi(phi_l) == doctest::Approx(kPi / 4.0).epsilon(1e-10));
  }
  SUBCASE("local phase at t2 reduces to pi/2 (both-qubit flip)") {
    CHECK(mod_two_pi(phases(2.0 * t1, kFig2).phi_l) ==
          doctest::Approx(kPi / 2.0).epsilon(1e-10));
  }
  SUBCASE("no second coupling, no local phase") {
    const RabiParams p{1.0, 0.0, 0.0, 1.7, 0.0};
    for (double t : {0.3, 2.0, 11.0}) CHECK(phases(t, p).phi_l == 0.0);
  }
  SUBCASE("global phase formula") {
    const PhasePair ph = phases(0.9, kFig2);
    const double expected = phi_t(0.9, 1.0) * (4.0 + std::pow(65.0 / 32.0, 2));
    CHECK(ph.phi_g == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("displacement operator") {
  const FockCutoff cutoff = make_cutoff(60);
  SUBCASE("zero displacement is the identity") {
    CHECK(max_abs(displacement_operator(0.0, cutoff).entries - Matrix::Identity(60, 60)) <=
          1e-14);
  }
  SUBCASE("coherent state statistics: <n> = |alpha|^2") {
    const Complex alpha{1.4, 0.8};
    const Vector displaced = displacement_operator(alpha, cutoff).entries.col(0);
    double mean = 0.0;
    for (Index k = 0; k < 60; ++k) mean += static_cast<double>(k) * std::norm(displaced(k));
    CHECK(mean == doctest::Approx(std::norm(alpha)).epsilon(1e-8));
  }
  SUBCASE("displacements invert exactly") {
    const Complex alpha{-0.9, 1.2};
    const Matrix product = displacement_operator(alpha, cutoff).entries *
                           displacement_operator(-alpha, cutoff).entries;
    CHECK(max_abs(product - Matrix::Identity(60, 60)) <= 1e-12);
  }
  SUBCASE("unitary by construction") {
    const Operator d = displacement_operator(Complex{2.0, -1.0}, cutoff);
    CHECK(d.unitary);
    CHECK(is_unitary(d.entries, 1e-12));
  }
  SUBCASE("insufficient cutoff is a convergence error") {
    CHECK_THROWS_AS(displacement_operator(5.0, make_cutoff(10)), ConvergenceError);
  }
}

TEST_CASE("cat states") {
  const FockCutoff cutoff = make_cutoff(40);
  SUBCASE("even cat at alpha = 0 is the vacuum") {
    const StateVector cat = cat_state(0.0, ParityChain::even, cutoff);
    CHECK(std::abs(cat.amplitudes(0) - Complex{1.0}) <= 1e-14);
  }
  SUBCASE("odd cat at alpha = 0 is degenerate") {
    CHECK_THROWS_AS(cat_state(0.0, ParityChain::odd, cutoff), std::domain_error);
  }
  SUBCASE("odd cat has no even Fock support, even cat no odd support") {
    const StateVector odd = cat_state(Complex{1.1, 0.4}, ParityChain::odd, cutoff);
    const StateVector even = cat_state(Complex{1.1, 0.4}, ParityChain::even, cutoff);
    for (Index k = 0; k < 40; k += 2) CHECK(std::abs(odd.amplitudes(k)) <= 1e-12);
    for (Index k = 1; k < 40; k += 2) CHECK(std::abs(even.amplitudes(k)) <= 1e-12);
  }
  SUBCASE("normalization matches the coherent overlap formula") {
    const double alpha = 0.8;
    const double x = std::exp(-2.0 * alpha * alpha);
    const StateVector even = cat_state(alpha, ParityChain::even, cutoff);
    const Complex ov = coherent_state(alpha, cutoff).amplitudes.dot(even.amplitudes);
    CHECK(std::abs(ov) == doctest::Approx(std::sqrt((1.0 + x) / 2.0)).epsilon(1e-12));
  }
}

TEST_CASE("bell states") {
  for (BellLabel a : kBellLabels) {
    for (BellLabel b : kBellLabels) {
      const Complex ov = bell_state(a).amplitudes.dot(bell_state(b).amplitudes);
      CHECK(std::abs(ov - (a == b ? Complex{1.0} : Complex{0.0})) <= 1e-15);
    }
  }
  CHECK(std::abs(bell_state(BellLabel::psi_plus).amplitudes(0)) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  const DensityMatrix bell_rho{
      bell_state(BellLabel::phi_minus).amplitudes *
          bell_state(BellLabel::phi_minus).amplitudes.adjoint(),
      {2, 2}};
  CHECK(concurrence(bell_rho) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic propagator") {
  const RabiParams p{1.0, 0.0, 0.0, 0.6, 0.3};
  const FockCutoff cutoff = required_cutoff(p);
  const AnalyticEngine engine(p, cutoff);

  SUBCASE("t = 0 is the identity") {
    const Matrix u = engine.propagator(0.0).entries;
    CHECK(max_abs(u - Matrix::Identity(u.rows(), u.cols())) <= 1e-13);
  }
  SUBCASE("unitary on a 100-point time grid") {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Matrix u = engine.propagator(0.21 * i).entries;
      worst = std::max(worst,
                       max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())));
    }
    CHECK(worst <= 1e-8);
  }
  SUBCASE("at revival times the boson factor is the identity") {
    const Matrix u = engine.propagator(engine.revival_time(1)).entries;
    // U(t_n) acts on the qubits alone: block (q, q') proportional to I_N.
    const Index n = cutoff.n_max;
    for (Index q = 0; q < 4; ++q) {
      for (Index q2 = 0; q2 < 4; ++q2) {
        const Matrix block = u.block(q * n, q2 * n, n, n);
        CHECK(max_abs(block - block(0, 0) * Matrix::Identity(n, n)) <= 1e-10);
      }
    }
  }
  SUBCASE("matches exp(-i H' t) from dense diagonalization") {
    // Generous cutoff: the initial support (n < 20) plus the displacement
    // reach must sit well below the truncation edge for both routes.
    const FockCutoff roomy = make_cutoff(90);
    const AnalyticEngine fine(p, roomy);
    const Spectrum s = eigendecompose(build_slow_qubit_hamiltonian(p, roomy));
    std::mt19937 rng(1234);
    for (double t : {0.37, 1.9, 5.2, 2.0 * kPi, 9.8}) {
      Vector phases_vec(s.dim());
      for (Index k = 0; k < s.dim(); ++k) {
        phases_vec(k) = std::exp(-kI * (s.eigenvalues(k) * t));
      }
      const Matrix expm =
          s.eigenvectors * phases_vec.asDiagonal() * s.eigenvectors.adjoint();
      for (int trial = 0; trial < 3; ++trial) {
        const Index n = roomy.n_max;
        Vector low = Vector::Zero(s.dim());
        for (Index q = 0; q < 4; ++q) {
          low.segment(q * n, 20) = oracles::random_complex_vector(20, rng);
        }
        low /= low.norm();
        const StateVector psi0{low, composite_dims(n)};
        const Vector via_expm = expm * low;
        const Vector via_engine = fine.evolve(psi0, t).amplitudes;
        const double fidelity = std::norm(via_expm.dot(via_engine));
        CHECK(fidelity >= 1.0 - 1e-8);
      }
    }
  }
  SUBCASE("propagator and evolve agree") {
    std::mt19937 rng(777);
    const StateVector psi0{oracles::random_unit_vector(4 * cutoff.n_max, rng),
                           composite_dims(cutoff.n_max)};
    const double t = 3.3;
    const Vector via_matrix = apply(engine.propagator(t), psi0).amplitudes;
    const Vector via_evolve = engine.evolve(psi0, t).amplitudes;
    CHECK(max_abs(via_matrix - via_evolve) <= 1e-12);
  }
  SUBCASE("cutoff below the displacement reach is rejected") {
    CHECK_THROWS_AS(AnalyticEngine(kFig2, make_cutoff(16)), ConvergenceError);
  }
}

TEST_CASE("figure-2 gate: U(t1)|gg 0> is the psi+ Bell state") {
  const FockCutoff cutoff = required_cutoff(kFig2);
  CHECK(cutoff.n_max == 150);
  const AnalyticEngine engine(kFig2, cutoff);
  const StateVector evolved =
      engine.evolve(basis_state(QubitLabel::gg, 0, cutoff.n_max), engine.revival_time(1));
  const StateVector target =
      embed_qubit_state(bell_state(BellLabel::psi_plus).amplitudes, cutoff.n_max);
  CHECK(std::abs(overlap(target, evolved)) >= 1.0 - 1e-8);
}

TEST_CASE("evolved state from the cat expansion") {
  SUBCASE("t = 0 recovers the initial state") {
    const FockCutoff cutoff = required_cutoff(kFig2);
    const StateVector psi = analytic_evolved_state(0.0, QubitLabel::gg, kFig2, cutoff);
    CHECK(std::abs(overlap(basis_state(QubitLabel::gg, 0, cutoff.n_max), psi)) >=
          1.0 - 1e-12);
  }
  SUBCASE("overlap with psi+ ⊗ |0> at t1 has unit modulus") {
    const FockCutoff cutoff = required_cutoff(kFig2);
    const StateVector psi =
        analytic_evolved_state(2.0 * kPi, QubitLabel::gg, kFig2, cutoff);
    const StateVector target =
        embed_qubit_state(bell_state(BellLabel::psi_plus).amplitudes, cutoff.n_max);
    CHECK(std::abs(overlap(target, psi)) >= 1.0 - 1e-8);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("cat expansion and propagator route are mutual oracles") {
    const RabiParams p{1.0, 0.0, 0.0, 0.9, 0.4};
    const FockCutoff cutoff = required_cutoff(p);
    const AnalyticEngine engine(p, cutoff);
    const StateVector psi0 = basis_state(QubitLabel::gg, 0, cutoff.n_max);
    for (double t : {0.45, 1.7, 3.9, 7.1, 12.6}) {
      const StateVector via_cats = analytic_evolved_state(t, QubitLabel::gg, p, cutoff);
      const StateVector via_engine = engine.evolve(psi0, t);
      CHECK(std::norm(overlap(via_cats, via_engine)) >= 1.0 - 1e-10);
    }
  }
  SUBCASE("printed prefactor 1/4 yields a normalized superposition") {
    // Rebuild the expansion without the final normalization and check its norm.
    const RabiParams p{1.0, 0.0, 0.0, 0.9, 0.4};
    const FockCutoff cutoff = required_cutoff(p);
    const double t = 2.3;
    const PhasePair ph = phases(t, p);
    const auto branch = gamma_branch_values(p);
    const Complex winding = std::exp(-kI * t) - 1.0;
    const Vector pp = coherent_state(winding * branch[0], cutoff).amplitudes;
    const Vector pm = coherent_state(-winding * branch[0], cutoff).amplitudes;
    const Vector mp = coherent_state(winding * branch[1], cutoff).amplitudes;
    const Vector mm = coherent_state(-winding * branch[1], cutoff).amplitudes;
    const Complex rel = std::exp(-2.0 * kI * ph.phi_l);
    Vector out = Vector::Zero(4 * cutoff.n_max);
    const Index n = cutoff.n_max;
    out.segment(0 * n, n) = (pp + pm) + rel * (mp + mm);
    out.segment(1 * n, n) = (pp - pm) - rel * (mp - mm);
    out.segment(2 * n, n) = (pp - pm) + rel * (mp - mm);
    out.segment(3 * n, n) = (pp + pm) - rel * (mp + mm);
    CHECK((0.25 * out).norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("other initial labels route through the propagator") {
    const RabiParams p{1.0, 0.0, 0.0, 0.9, 0.4};
    const FockCutoff cutoff = required_cutoff(p);
    const AnalyticEngine engine(p, cutoff);
    const StateVector via_free = analytic_evolved_state(1.3, QubitLabel::eg, p, cutoff);
    const StateVector direct =
        engine.evolve(basis_state(QubitLabel::eg, 0, cutoff.n_max), 1.3);
    CHECK(max_abs(via_free.amplitudes - direct.amplitudes) <= 1e-12);
  }
}

TEST_CASE("revival states for the figure-2 design") {
  SUBCASE("first revival is psi+") {
    const StateVector r1 = revival_state(1, kFig2);
    CHECK(std::abs(r1.amplitudes.dot(bell_state(BellLabel::psi_plus).amplitudes)) >=
          1.0 - 1e-10);
  }
  SUBCASE("second revival flips both qubits") {
    const StateVector r2 = revival_state(2, kFig2);
    CHECK(std::abs(r2.amplitudes(static_cast<Index>(QubitLabel::ee))) >= 1.0 - 1e-10);
  }
  SUBCASE("third revival is psi- up to a global phase") {
    const StateVector r3 = revival_state(3, kFig2);
    CHECK(std::abs(r3.amplitudes.dot(bell_state(BellLabel::psi_minus).amplitudes)) >=
          1.0 - 1e-10);
  }
}

TEST_CASE("gate map") {
  SUBCASE("even m assignment") {
    CHECK(gate_map(QubitLabel::gg, 32) == BellLabel::psi_plus);
    CHECK(gate_map(QubitLabel::ee, 32) == BellLabel::psi_minus);
    CHECK(gate_map(QubitLabel::eg, 0) == BellLabel::phi_plus);
    CHECK(gate_map(QubitLabel::ge, 0) == BellLabel::phi_minus);
  }
  SUBCASE("odd m swaps the ± families") {
    CHECK(gate_map(QubitLabel::gg, 1) == BellLabel::psi_minus);
    CHECK(gate_map(QubitLabel::ee, 3) == BellLabel::psi_plus);
    CHECK(gate_map(QubitLabel::eg, 5) == BellLabel::phi_minus);
    CHECK(gate_map(QubitLabel::ge, 1) == BellLabel::phi_plus);
  }
  SUBCASE("verified against the propagator for three designs") {
    struct Design {
      double gamma1;
      int n;
      int m;
    };
    for (const Design d : {Design{0.25, 1, 0}, Design{0.6, 2, 3}, Design{0.9, 1, 5}}) {
      const double gamma2 = solve_gamma2(d.gamma1, 1.0, d.n, d.m);
      const RabiParams p{1.0, 0.0, 0.0, d.gamma1, gamma2};
      const FockCutoff cutoff = required_cutoff(p);
      const AnalyticEngine engine(p, cutoff);
      const double t_peak = engine.revival_time(d.n);
      for (QubitLabel q : kQubitLabels) {
        const StateVector evolved =
            engine.evolve(basis_state(q, 0, cutoff.n_max), t_peak);
        const StateVector target =
            embed_qubit_state(bell_state(gate_map(q, d.m)).amplitudes, cutoff.n_max);
        CHECK(std::abs(overlap(target, evolved)) >= 1.0 - 1e-8);
      }
    }
  }
}

TEST_CASE("entangling identity: exp(i phi gamma^2) splits into global and local parts") {
  const RabiParams p{1.0, 0.0, 0.0, 1.2, 0.55};
  const Matrix g = gamma_operator(p).entries;
  const auto b = gamma_branch_values(p);
  const Matrix sxsx = oracles::brute_kron(pauli2(PauliKind::x), pauli2(PauliKind::x));
  Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(g * g));
  for (double phi : {0.0, 0.31, 1.7, 6.9, 40.0}) {
    Vector exp_eigs(4);
    for (Index k = 0; k < 4; ++k) exp_eigs(k) = std::exp(kI * (phi * es.eigenvalues()(k)));
    const Matrix lhs = es.eigenvectors() * exp_eigs.asDiagonal() * es.eigenvectors().adjoint();
    const double phi_g = phi * 0.5 * (b[0] * b[0] + b[1] * b[1]);
    const double phi_l = phi * 0.5 * (b[0] * b[0] - b[1] * b[1]);
    const Matrix rhs = std::exp(kI * phi_g) *
                       (std::cos(phi_l) * Matrix::Identity(4, 4) +
                        kI * std::sin(phi_l) * sxsx);
    CHECK(max_abs(lhs - rhs) <= 1e-12);
  }
}

TEST_CASE("revivals restore the boson vacuum and purity") {
  const FockCutoff cutoff = required_cutoff(kFig2);
  for (int n = 1; n <= 5; ++n) {
    const double t_n = 2.0 * kPi * n;
    const StateVector psi = analytic_evolved_state(t_n, QubitLabel::gg, kFig2, cutoff);
    const DensityMatrix rho_b = partial_trace_qubits(outer_product(psi));
    CHECK(rho_b.entries(0, 0).real() >= 1.0 - 1e-8);  // vacuum population
    CHECK(purity(rho_b) == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("mixed boson preparations revive factorized") {
  const RabiParams p{1.0, 0.0, 0.0, 0.8, solve_gamma2(0.8, 1.0, 1, 1)};
  const FockCutoff cutoff = required_cutoff(p);
  SUBCASE("vacuum preparation reduces to the pure case") {
    Matrix vac = Matrix::Zero(cutoff.n_max, cutoff.n_max);
    vac(0, 0) = 1.0;
    const DensityMatrix rho_t1 =
        mixed_boson_revival(DensityMatrix{vac, {cutoff.n_max}}, 1, p, cutoff);
    const StateVector pure =
        analytic_evolved_state(2.0 * kPi, QubitLabel::gg, p, cutoff);
    CHECK(max_abs(rho_t1.entries - outer_product(pure).entries) <= 1e-10);
  }
  SUBCASE("coherent preparation leaves the qubits pure") {
    const Vector coh = coherent_state(1.0, cutoff).amplitudes;
    const DensityMatrix rho_b0{coh * coh.adjoint(), {cutoff.n_max}};
    const DensityMatrix rho_t1 = mixed_boson_revival(rho_b0, 1, p, cutoff);
    CHECK(purity(partial_trace_boson(rho_t1)) == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("thermal preparation is returned intact") {
    const DensityMatrix rho_b0 = thermal_state(0.5, cutoff);
    const DensityMatrix rho_t1 = mixed_boson_revival(rho_b0, 1, p, cutoff);
    CHECK(max_abs(partial_trace_qubits(rho_t1).entries - rho_b0.entries) <= 1e-8);
    // The qubit state matches the predicted revival superposition.
    const StateVector predicted = revival_state(1, p);
    const Matrix expected = predicted.amplitudes * predicted.amplitudes.adjoint();
    CHECK(max_abs(partial_trace_boson(rho_t1).entries - expected) <= 1e-8);
  }
}

TEST_CASE("thermal state basics") {
  const FockCutoff cutoff = make_cutoff(30);
  const DensityMatrix rho = thermal_state(0.5, cutoff);
  CHECK(std::abs(rho.trace() - Complex{1.0}) <= 1e-14);
  double mean = 0.0;
  for (Index k = 0; k < 30; ++k) mean += static_cast<double>(k) * rho.entries(k, k).real();
  CHECK(mean == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(thermal_state(-0.1, cutoff), std::invalid_argument);
}
