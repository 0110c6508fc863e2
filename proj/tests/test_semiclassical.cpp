#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lmg/semiclassical.hpp"
#include "lmg/spectral.hpp"

using namespace lmg;

namespace {

const StationaryPoint* find(const std::vector<StationaryPoint>& v, StationaryLabel l) {
    for (const auto& p : v)
        if (p.label == l) return &p;
    return nullptr;
}

}  // namespace

TEST_CASE("poles of the energy surface at wx=xy=0") {
    const ModelParams p{1.0, 0.0, 0.0};
    CHECK(classical_energy(p, 0.0, 0.0) == doctest::Approx(-1.0));
    CHECK(classical_energy(p, 2.0, 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)classical_energy(p, 2.5, 0.0), DomainError);
}

TEST_CASE("canonical and angular forms agree through the (Q,P) map") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> th(0.01, 3.1), ph(-3.1, 3.1);
    const ModelParams p{1.0, 0.8, 1.7};
    for (int it = 0; it < 50; ++it) {
        const double theta = th(rng), phi = ph(rng);
        const double q = std::sqrt(2.0 * (1.0 - std::cos(theta))) * std::cos(phi);
        const double pp = -std::sqrt(2.0 * (1.0 - std::cos(theta))) * std::sin(phi);
        CHECK(classical_energy(p, q, pp) ==
              doctest::Approx(classical_energy_angles(p, theta, phi)).epsilon(1e-12));
    }
}

TEST_CASE("P -> -P invariance of the energy surface") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.3, 1.3);
    const ModelParams p{1.0, 1.1, 2.0};
    for (int it = 0; it < 100; ++it) {
        const double q = u(rng), pp = u(rng);
        CHECK(classical_energy(p, q, pp) == doctest::Approx(classical_energy(p, q, -pp)));
    }
}

TEST_CASE("equations of motion match finite differences of the energy") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    const ModelParams p{1.0, 0.9, 1.8};
    const double h = 1e-6;
    for (int it = 0; it < 30; ++it) {
        const double q = u(rng), pp = u(rng);
        const PhaseVelocity v = equations_of_motion(p, q, pp);
        const double dh_dp = (classical_energy(p, q, pp + h) - classical_energy(p, q, pp - h)) / (2 * h);
        const double dh_dq = (classical_energy(p, q + h, pp) - classical_energy(p, q - h, pp)) / (2 * h);
        CHECK(std::abs(v.dq - dh_dp) <= 1e-8);
        CHECK(std::abs(v.dp + dh_dq) <= 1e-8);
    }
}

TEST_CASE("EOM parity: dQ/dt odd, dP/dt even under P -> -P") {
    const ModelParams p{1.0, 1.4, 2.2};
    for (double q : {-0.8, 0.3, 1.1}) {
        for (double pp : {0.2, 0.9}) {
            const PhaseVelocity a = equations_of_motion(p, q, pp);
            const PhaseVelocity b = equations_of_motion(p, q, -pp);
            CHECK(a.dq == doctest::Approx(-b.dq));
            CHECK(a.dp == doctest::Approx(b.dp));
        }
    }
}

TEST_CASE("small-amplitude rotation at the origin for wx=xy=0") {
    const ModelParams p{1.0, 0.0, 0.0};
    const PhaseVelocity v = equations_of_motion(p, 0.01, 0.02);
    CHECK(v.dq == doctest::Approx(0.02).epsilon(1e-3));
    CHECK(v.dp == doctest::Approx(-0.01).epsilon(1e-3));
}

TEST_CASE("stationary points at wx=0, xy=0") {
    const auto pts = stationary_points(ModelParams{1.0, 0.0, 0.0});
    REQUIRE(pts.size() == 2);
    const StationaryPoint* x1 = find(pts, StationaryLabel::X1);
    const StationaryPoint* x2 = find(pts, StationaryLabel::X2);
    REQUIRE(x1);
    REQUIRE(x2);
    CHECK(x1->point.q == doctest::Approx(2.0));
    CHECK(x1->energy == doctest::Approx(1.0));
    CHECK(x2->point.q == doctest::Approx(0.0));
    CHECK(x2->energy == doctest::Approx(-1.0));
    CHECK(find(pts, StationaryLabel::X4) == nullptr);
    CHECK(find(pts, StationaryLabel::X3) == nullptr);
}

TEST_CASE("x4 pair above the separatrix with Table-I energy") {
    const auto pts = stationary_points(ModelParams{1.0, 0.0, 2.0});
    const StationaryPoint* x4 = find(pts, StationaryLabel::X4);
    const StationaryPoint* x4p = find(pts, StationaryLabel::X4p);
    REQUIRE(x4);
    REQUIRE(x4p);
    CHECK(x4->energy == doctest::Approx(2.125));
    CHECK(x4->energy > esqpt_energy(0.0));
    CHECK(x4->point.p == doctest::Approx(-x4p->point.p));
    CHECK(x4->stability == Stability::UnstableCenter);
    CHECK(x4->lyapunov == doctest::Approx(0.0));
    // x1 is hyperbolic here
    const StationaryPoint* x1 = find(pts, StationaryLabel::X1);
    REQUIRE(x1);
    CHECK(x1->stability == Stability::Hyperbolic);
    CHECK(x1->lyapunov > 0.0);
}

TEST_CASE("x3 pair mirrors below -separatrix and ordering e3 <= e2 <= e1 <= e4") {
    const auto neg = stationary_points(ModelParams{1.0, 0.7, -2.0});
    const StationaryPoint* x3 = find(neg, StationaryLabel::X3);
    const StationaryPoint* x2 = find(neg, StationaryLabel::X2);
    const StationaryPoint* x1 = find(neg, StationaryLabel::X1);
    REQUIRE(x3);
    CHECK(x3->energy <= x2->energy);
    CHECK(x2->energy <= x1->energy);
    CHECK(x3->stability == Stability::StableCenter);
    CHECK(x2->stability == Stability::Hyperbolic);  // xy < -sep

    const auto pos = stationary_points(ModelParams{1.0, 0.7, 2.0});
    const StationaryPoint* x4 = find(pos, StationaryLabel::X4);
    REQUIRE(x4);
    CHECK(find(pos, StationaryLabel::X1)->energy <= x4->energy);
}

TEST_CASE("stationarity residual at every interior stationary point") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> wx(-3.0, 3.0), xy(-3.0, 3.0);
    for (int it = 0; it < 40; ++it) {
        const ModelParams p{1.0, wx(rng), xy(rng)};
        for (const StationaryPoint& sp : stationary_points(p)) {
            const double r2 = sp.point.q * sp.point.q + sp.point.p * sp.point.p;
            if (r2 >= 4.0 - 1e-9) continue;  // chart-singular rim point
            const PhaseVelocity v = equations_of_motion(p, sp.point.q, sp.point.p);
            CHECK(std::hypot(v.dq, v.dp) <= 1e-10);
        }
    }
}

TEST_CASE("energies are even in omega_x") {
    for (double wx : {0.4, 1.7}) {
        const auto a = stationary_points(ModelParams{1.0, wx, 2.2});
        const auto b = stationary_points(ModelParams{1.0, -wx, 2.2});
        for (auto l : {StationaryLabel::X1, StationaryLabel::X2, StationaryLabel::X4}) {
            REQUIRE(find(a, l));
            REQUIRE(find(b, l));
            CHECK(find(a, l)->energy == doctest::Approx(find(b, l)->energy).epsilon(1e-12));
        }
    }
}

TEST_CASE("separatrix continuity: e4 = e1 on the critical line") {
    for (double wx : {0.0, 1.0, 3.0}) {
        const double xy = separatrix_xi_y(wx);
        const auto pts = stationary_points(ModelParams{1.0, wx, xy});
        const StationaryPoint* x1 = find(pts, StationaryLabel::X1);
        const StationaryPoint* x4 = find(pts, StationaryLabel::X4);
        REQUIRE(x1);
        REQUIRE(x4);
        CHECK(x4->energy == doctest::Approx(x1->energy).epsilon(1e-12));
    }
}

TEST_CASE("lyapunov exponent values") {
    CHECK(lyapunov_exponent(ModelParams{1.0, 0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(lyapunov_exponent(ModelParams{1.0, 1.0, separatrix_xi_y(1.0)}) ==
          doctest::Approx(0.0));
    const double a = std::sqrt(1.0 + 0.775 * 0.775);
    CHECK(lyapunov_exponent(ModelParams{1.0, 0.775, 2.0}) ==
          doctest::Approx(std::sqrt(a * (4.0 - a))));
    CHECK(lyapunov_exponent(ModelParams{1.0, 0.3, 0.2}) == 0.0);
}

TEST_CASE("lyapunov squared matches the closed form in the unstable region") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> wx(-2.0, 2.0), up(0.05, 2.0);
    for (int it = 0; it < 100; ++it) {
        const double w = wx(rng);
        const double a = std::sqrt(1.0 + w * w);
        const double xy = a / 2.0 + up(rng);
        const double lam = lyapunov_exponent(ModelParams{1.0, w, xy});
        CHECK(lam * lam == doctest::Approx(a * (2.0 * xy - a)).epsilon(1e-12));
    }
}

TEST_CASE("critical lines") {
    CHECK(critical_omega_x(2.3) == doctest::Approx(4.490).epsilon(2.5e-4));
    CHECK(separatrix_xi_y(0.0) == doctest::Approx(0.5));
    const double wx = 0.2 * std::sqrt(15.0);
    CHECK(esqpt_energy(wx) == doctest::Approx(1.265).epsilon(1e-3));
    CHECK_THROWS_AS((void)critical_omega_x(0.3), DomainError);
}

TEST_CASE("coherent expectations: reference states and limits") {
    const ModelParams p{1.0, 0.0, 0.0};
    const Observables south = coherent_expectations(SpinMagnitude(4.0), 0.0, 0.0, p);
    CHECK(south.jx == doctest::Approx(0.0));
    CHECK(south.jy == doctest::Approx(0.0));
    CHECK(south.jz == doctest::Approx(-1.0));

    const Observables eq = coherent_expectations(SpinMagnitude(4.0), M_PI / 2.0, 0.0, p);
    CHECK(eq.jx == doctest::Approx(1.0));
    CHECK(std::abs(eq.jz) <= 1e-12);
}

TEST_CASE("coherent energy at the x4 angles approaches e4 as j grows") {
    const ModelParams p{1.0, 2.0, 2.3};
    const auto pts = stationary_points(p);
    const StationaryPoint* x4 = find(pts, StationaryLabel::X4);
    REQUIRE(x4);
    const double e4 = (1.0 + 4.0) / (4.0 * 2.3) + 2.3;
    const Observables o = coherent_expectations(SpinMagnitude(1e6), x4->point.theta,
                                                x4->point.phi, p);
    CHECK(std::abs(o.energy - e4) <= 1e-5);
    const Observables o2 = coherent_expectations(SpinMagnitude(100.0), x4->point.theta,
                                                 x4->point.phi, p);
    CHECK(std::abs(o2.energy - e4) <= 1e-2);
}

TEST_CASE("coherent expectations match the operator algebra on the spin space") {
    // cross-check <Jy^2>/j^2 against the explicit matrix on a coherent vector
    const SpinMagnitude j(6.0);
    const SpinOperators ops = build_spin_operators(j);
    const double theta = 1.1, phi = 0.7;
    // reuse the analytic coherent vector from the coherent module contract:
    // c_m = binom^(1/2) sin^{j+m} cos^{j-m} e^{-i(j+m)phi}
    ComplexVector c(j.dim());
    for (int k = 0; k < j.dim(); ++k) {
        const double jm = k, jmm = j.dim() - 1.0 - k;
        const double lb = std::lgamma(2.0 * j.j() + 1.0) - std::lgamma(jm + 1.0) -
                          std::lgamma(jmm + 1.0);
        c(k) = std::exp(0.5 * lb) * std::pow(std::sin(theta / 2), jm) *
               std::pow(std::cos(theta / 2), jmm) *
               std::exp(std::complex<double>(0, -jm * phi));
    }
    const ModelParams p{1.0, 0.4, 1.2};
    const Observables o = coherent_expectations(j, theta, phi, p);
    const auto jy2v = c.dot(ops.jy2.cast<std::complex<double>>() * c).real() / (j.j() * j.j());
    CHECK(o.jy2 == doctest::Approx(jy2v).epsilon(1e-10));
    const auto jxv = c.dot(ops.jx.cast<std::complex<double>>() * c).real() / j.j();
    CHECK(o.jx == doctest::Approx(jxv).epsilon(1e-10));
    const auto jzv = c.dot(ops.jz.cast<std::complex<double>>() * c).real() / j.j();
    CHECK(o.jz == doctest::Approx(jzv).epsilon(1e-10));
}

TEST_CASE("phase point angle consistency") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 50; ++it) {
        const double q = u(rng), p = u(rng);
        const PhasePoint pp = phase_point_from_qp(q, p);
        const double rho = std::sqrt(2.0 * (1.0 - std::cos(pp.theta)));
        CHECK(std::abs(rho * std::cos(pp.phi) - q) <= 1e-10);
        CHECK(std::abs(-rho * std::sin(pp.phi) - p) <= 1e-10);
    }
}
