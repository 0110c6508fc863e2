#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lmg/spectral.hpp"
#include "lmg/spin_model.hpp"

using namespace lmg;

TEST_CASE("spin magnitude validation") {
    CHECK(SpinMagnitude(0.5).dim() == 2);
    CHECK(SpinMagnitude(1.0).dim() == 3);
    CHECK(SpinMagnitude(512.0).dim() == 1025);
    CHECK_THROWS_AS(SpinMagnitude(0.3), DomainError);
    CHECK_THROWS_AS(SpinMagnitude(-1.0), DomainError);
    CHECK_THROWS_AS(SpinMagnitude(0.0), DomainError);
}

TEST_CASE("j=1/2 operators are half the Pauli matrices") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(0.5));
    // basis order m = -1/2, +1/2
    CHECK(ops.jz(0, 0) == doctest::Approx(-0.5));
    CHECK(ops.jz(1, 1) == doctest::Approx(0.5));
    CHECK(ops.jx(0, 1) == doctest::Approx(0.5));
    CHECK(ops.jx(1, 0) == doctest::Approx(0.5));
    CHECK(ops.jy(1, 0).imag() == doctest::Approx(0.5));
    CHECK(ops.jy(0, 1).imag() == doctest::Approx(-0.5));
    CHECK(ops.jy(0, 0) == std::complex<double>(0, 0));
}

TEST_CASE("su(2) algebra and Casimir") {
    for (double j : {0.5, 1.0, 7.5, 32.0, 512.0}) {
        const SpinOperators ops = build_spin_operators(SpinMagnitude(j));
        const ComplexMatrix jx = ops.jx.cast<std::complex<double>>();
        const ComplexMatrix jz = ops.jz.cast<std::complex<double>>();
        const ComplexMatrix comm = jx * ops.jy - ops.jy * jx;
        const ComplexMatrix expect = std::complex<double>(0, 1) * jz;
        CHECK((comm - expect).cwiseAbs().maxCoeff() <= 1e-10);

        const RealMatrix casimir =
            ops.jx * ops.jx + ops.jy2 + ops.jz * ops.jz -
            j * (j + 1.0) * RealMatrix::Identity(ops.j.dim(), ops.j.dim());
        CHECK(casimir.cwiseAbs().maxCoeff() <= 1e-10);

        CHECK(is_hermitian(ops.jy));
        CHECK(is_hermitian(ops.jx.cast<std::complex<double>>()));
        CHECK(is_hermitian(ops.jy2.cast<std::complex<double>>()));
    }
}

TEST_CASE("hamiltonian at j=1 with wx=xy=0 is diag(-1,0,1)") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(1.0));
    const RealMatrix h = build_hamiltonian(ops, ModelParams{1.0, 0.0, 0.0});
    CHECK(h(0, 0) == doctest::Approx(-1.0));
    CHECK(h(1, 1) == doctest::Approx(0.0));
    CHECK(h(2, 2) == doctest::Approx(1.0));
    CHECK(h.cwiseAbs().sum() == doctest::Approx(2.0));
}

TEST_CASE("hamiltonian at j=1/2: Jy^2 term is xi_y/2 times identity") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(0.5));
    const double xy = 1.7;
    const RealMatrix h = build_hamiltonian(ops, ModelParams{1.0, 0.3, xy});
    const RealMatrix expected =
        ops.jz + 0.3 * ops.jx + (xy / 2.0) * RealMatrix::Identity(2, 2);
    CHECK((h - expected).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("hamiltonian is real symmetric") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(17.5));
    const RealMatrix h = build_hamiltonian(ops, ModelParams{1.0, 0.7, -1.3});
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("extremal eigenvalue approaches the classical e4 ceiling") {
    // xy=2, wx=0.775: e4 = (1+wx^2)/(4 xy) + xy
    const double e4 = (1.0 + 0.775 * 0.775) / 8.0 + 2.0;
    double prev_err = 1e9;
    for (double j : {32.0, 64.0, 128.0}) {
        const SpinOperators ops = build_spin_operators(SpinMagnitude(j));
        const Spectrum s = diagonalize(build_hamiltonian(ops, ModelParams{1.0, 0.775, 2.0}));
        const double err = std::abs(s.energies(s.energies.size() - 1) / j - e4);
        CHECK(err < 3.0 / j);
        CHECK(err < prev_err);
        prev_err = err;
    }
}

TEST_CASE("parameter derivatives match finite differences (H affine in both)") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(6.0));
    const ParameterDerivatives d = build_parameter_derivatives(ops);
    const double h = 1e-5;
    const ModelParams p{1.0, 0.4, 0.9};

    ModelParams pp = p, pm = p;
    pp.omega_x += h;
    pm.omega_x -= h;
    RealMatrix fd = (build_hamiltonian(ops, pp) - build_hamiltonian(ops, pm)) / (2 * h);
    CHECK((fd - d.d_omega_x).cwiseAbs().maxCoeff() <= 1e-9);

    pp = pm = p;
    pp.xi_y += h;
    pm.xi_y -= h;
    fd = (build_hamiltonian(ops, pp) - build_hamiltonian(ops, pm)) / (2 * h);
    CHECK((fd - d.d_xi_y).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("d H / d xi_y at j=1/2 is identity/2") {
    const SpinOperators ops = build_spin_operators(SpinMagnitude(0.5));
    const ParameterDerivatives d = build_parameter_derivatives(ops);
    CHECK((d.d_xi_y - 0.5 * RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("hermiticity of constructed operators across random j") {
    std::mt19937 rng(1234);
    std::uniform_int_distribution<int> two_j(1, 64);
    for (int it = 0; it < 10; ++it) {
        const SpinMagnitude j(two_j(rng) / 2.0);
        const SpinOperators ops = build_spin_operators(j);
        CHECK((ops.jx - ops.jx.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((ops.jy2 - ops.jy2.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((ops.jplus - ops.jminus.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}
