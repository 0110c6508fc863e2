#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lmg/spectral.hpp"

using namespace lmg;

TEST_CASE("H = Jz at j=1: unit eigenvalues and basis eigenvectors") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(1.0));
    const Spectrum s = diagonalize(build_hamiltonian(ops, ModelParams{1.0, 0.0, 0.0}));
    CHECK(s.energies(0) == doctest::Approx(-1.0));
    CHECK(s.energies(1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.energies(2) == doctest::Approx(1.0));
    CHECK((s.states - RealMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("linear Hamiltonian: eigenvalues m*sqrt(1+wx^2)") {
    const double wx = 0.8;
    const SpinMagnitude j(7.0);
    const SpinOperators ops = build_spin_operators(j);
    const Spectrum s = diagonalize(build_hamiltonian(ops, ModelParams{1.0, wx, 0.0}));
    const double scale = std::sqrt(1.0 + wx * wx);
    for (int k = 0; k < j.dim(); ++k)
        CHECK(s.energies(k) == doctest::Approx(j.m(k) * scale).epsilon(1e-12));
}

TEST_CASE("residual and orthonormality at random parameter points") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> wx(-3.0, 3.0), xy(-2.0, 3.0);
    for (double j : {0.5, 1.0, 32.0, 256.0}) {
        const SpinOperators ops = build_spin_operators(SpinMagnitude(j));
        const RealMatrix h = build_hamiltonian(ops, ModelParams{1.0, wx(rng), xy(rng)});
        const Spectrum s = diagonalize(h);
        const double hnorm = h.cwiseAbs().maxCoeff();
        const RealMatrix residual = h * s.states - s.states * s.energies.asDiagonal();
        CHECK(residual.cwiseAbs().maxCoeff() <= 1e-10 * hnorm);
        const RealMatrix gram = s.states.transpose() * s.states;
        CHECK((gram - RealMatrix::Identity(s.states.cols(), s.states.cols()))
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
        for (int k = 1; k < s.energies.size(); ++k) CHECK(s.energies(k) >= s.energies(k - 1));
    }
}

TEST_CASE("eigenvector sign convention: largest component positive") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(16.0));
    const Spectrum s = diagonalize(build_hamiltonian(ops, ModelParams{1.0, 1.1, 0.7}));
    for (int c = 0; c < s.states.cols(); ++c) {
        int imax = 0;
        s.states.col(c).cwiseAbs().maxCoeff(&imax);
        CHECK(s.states(imax, c) > 0.0);
    }
}

TEST_CASE("hermitian path agrees with the real path on a real Hamiltonian") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(5.0));
    const RealMatrix h = build_hamiltonian(ops, ModelParams{1.0, 0.9, 1.4});
    const Spectrum sr = diagonalize(h);
    const ComplexSpectrum sc = diagonalize_hermitian(h.cast<std::complex<double>>());
    CHECK((sr.energies - sc.energies).cwiseAbs().maxCoeff() <= 1e-10);
    for (int c = 0; c < h.cols(); ++c) {
        const double ov = std::abs(sc.states.col(c).dot(sr.states.col(c).cast<std::complex<double>>()));
        CHECK(ov == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("spectrum symmetric under omega_x sign flip") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(24.0));
    const Spectrum sp = diagonalize(build_hamiltonian(ops, ModelParams{1.0, 1.3, 2.0}));
    const Spectrum sm = diagonalize(build_hamiltonian(ops, ModelParams{1.0, -1.3, 2.0}));
    CHECK((sp.energies - sm.energies).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("select_state") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(1.0));
    const Spectrum s = diagonalize(build_hamiltonian(ops, ModelParams{}));
    CHECK(select_state(3, StateSelector::ground()) == 0);
    CHECK(select_state(3, StateSelector::highest()) == 2);
    CHECK(select_state(3, StateSelector::at(1)) == 1);
    CHECK_THROWS_AS(select_state(3, StateSelector::at(3)), DomainError);
    CHECK_THROWS_AS(select_state(3, StateSelector::at(-1)), DomainError);
    (void)s;
}

TEST_CASE("density of states: count conservation and edge handling") {
    const SpinMagnitude j(4.0);
    const SpinOperators ops = build_spin_operators(j);
    const Spectrum s = diagonalize(build_hamiltonian(ops, ModelParams{1.0, 0.3, 1.1}));
    const DosHistogram h = density_of_states(s, j, 3);
    long total = 0;
    for (long c : h.counts) total += c;
    CHECK(total == 9);
    CHECK(h.bin_edges.size() == 4);
    for (size_t b = 1; b < h.bin_edges.size(); ++b) CHECK(h.bin_edges[b] > h.bin_edges[b - 1]);
    CHECK_THROWS_AS(density_of_states(s, j, 1), DomainError);
}

TEST_CASE("dos: linear spectrum is approximately flat") {
    const SpinMagnitude j(128.0);
    const SpinOperators ops = build_spin_operators(j);
    const Spectrum s = diagonalize(build_hamiltonian(ops, ModelParams{1.0, 0.6, 0.0}));
    const DosHistogram h = density_of_states(s, j, 16);
    long lo = 1 << 30, hi = 0;
    for (size_t b = 1; b + 1 < h.counts.size(); ++b) {  // away from edges
        lo = std::min(lo, h.counts[b]);
        hi = std::max(hi, h.counts[b]);
    }
    CHECK(static_cast<double>(hi) / lo <= 1.5);
}

TEST_CASE("dos: ESQPT pile-up sits at e1 = sqrt(1+wx^2)") {
    const SpinMagnitude j(256.0);
    const double wx = 0.2 * std::sqrt(15.0);
    const SpinOperators ops = build_spin_operators(j);
    const Spectrum s = diagonalize(build_hamiltonian(ops, ModelParams{1.0, wx, 2.0}));
    const DosHistogram h = density_of_states(s, j, 40);
    size_t kmax = 0;
    for (size_t b = 1; b < h.counts.size(); ++b)
        if (h.counts[b] > h.counts[kmax]) kmax = b;
    const double target = std::sqrt(1.0 + wx * wx);
    CHECK(h.bin_edges[kmax] <= target);
    CHECK(target <= h.bin_edges[kmax + 1]);
}
