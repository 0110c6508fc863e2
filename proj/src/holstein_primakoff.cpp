#include "lmg/holstein_primakoff.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "lmg/spectral.hpp"

namespace lmg {

namespace {

void require_unit_omega(const ModelParams& p, const char* where) {
    if (std::abs(p.omega - 1.0) > 1e-12)
        throw DomainError(std::string(where) + ": closed forms are in omega = 1 units");
}

double sqrt1p(double wx) { return std::sqrt(1.0 + wx * wx); }

HpMetricPoint closed_form_metric(SpinMagnitude j, const ModelParams& p, double sign_xy,
                                 HpPhase phase) {
    const double wx = p.omega_x;
    const double xy = p.xi_y;
    const double A = wx * wx + 1.0;
    const double a = std::sqrt(A);
    const double b = a + sign_xy * 2.0 * xy;
    if (!(b > 0.0))
        throw DomainError("hp metric singular: sqrt(1+wx^2) " +
                          std::string(sign_xy > 0 ? "+" : "-") + " 2 xi_y = " + std::to_string(b));

    HpMetricPoint m;
    m.phase = phase;
    m.j = j.j();
    m.omega = std::sqrt(a * b);
    m.g11 = j.j() / (2.0 * std::pow(A, 1.75) * std::sqrt(b)) +
            xy * xy * wx * wx / (8.0 * A * A * b * b);
    m.g12 = -xy * wx / (8.0 * A * b * b);
    m.g22 = 1.0 / (8.0 * b * b);
    m.det_g = m.g11 * m.g22 - m.g12 * m.g12;
    return m;
}

}  // namespace

HpMetricPoint hp_ground_metric(SpinMagnitude j, const ModelParams& p) {
    require_unit_omega(p, "hp_ground_metric");
    return closed_form_metric(j, p, +1.0, HpPhase::Ground);
}

HpMetricPoint hp_symmetric_metric(SpinMagnitude j, const ModelParams& p) {
    require_unit_omega(p, "hp_symmetric_metric");
    if (!(p.xi_y < sqrt1p(p.omega_x) / 2.0))
        throw DomainError("hp_symmetric_metric: point not below the separatrix");
    return closed_form_metric(j, p, -1.0, HpPhase::SymmetricHighest);
}

QuadraticHamiltonian hp_broken_quadratic(SpinMagnitude j, const ModelParams& p) {
    require_unit_omega(p, "hp_broken_quadratic");
    const double wx = p.omega_x;
    const double xy = p.xi_y;
    const double w2 = 4.0 * xy * xy - wx * wx - 1.0;
    if (!(w2 > 0.0)) throw DomainError("hp_broken_quadratic: point not inside the broken phase");
    const double W2 = 4.0 * xy * xy - 1.0;

    QuadraticHamiltonian h;
    h.constant = j.j() * (4.0 * xy * xy + wx * wx + 1.0) / (4.0 * xy);
    h.c_pp = -xy * w2 / W2;
    h.c_qp = wx * std::sqrt(w2) / (2.0 * W2);
    h.c_qq = -(16.0 * std::pow(xy, 4) - 8.0 * xy * xy + wx * wx + 1.0) / (4.0 * xy * W2);
    h.omega = std::sqrt(w2);
    return h;
}

double hp_broken_berry(SpinMagnitude j, const ModelParams& p) {
    require_unit_omega(p, "hp_broken_berry");
    const double wx = p.omega_x;
    const double xy = p.xi_y;
    const double w2 = 4.0 * xy * xy - wx * wx - 1.0;
    if (!(w2 > 0.0)) throw DomainError("hp_broken_berry: point not inside the broken phase");
    return -(2.0 * j.j() + 1.0) / (4.0 * xy * xy * std::sqrt(w2)) +
           (16.0 * xy * xy - wx * wx + 1.0) / (16.0 * std::pow(xy, 3) * w2);
}

double e_max(const ModelParams& p) {
    require_unit_omega(p, "e_max");
    const double wx = p.omega_x;
    const double xy = p.xi_y;
    if (xy >= 0.5 && std::abs(wx) < std::sqrt(4.0 * xy * xy - 1.0))
        return (1.0 + wx * wx + 4.0 * xy * xy) / (4.0 * xy);
    return sqrt1p(wx);
}

// ---------------------------------------------------------------------------
// Broken-phase Gaussian family
// ---------------------------------------------------------------------------

namespace {

// Rotation U(theta,phi) = exp(-i phi Jz) exp(+i theta Jy); maps |j,-j> to the
// coherent state with <J>/j = (sin th cos ph, sin th sin ph, -cos th).
// exp(i theta Jy) is built from a cached eigendecomposition of Jy.
struct JyEigen {
    ComplexMatrix v;
    RealVector m;
};

const JyEigen& jy_eigen(SpinMagnitude j) {
    static std::mutex mu;
    static std::map<int, JyEigen> cache;
    std::scoped_lock lock(mu);
    auto it = cache.find(j.dim());
    if (it == cache.end()) {
        const SpinOperators ops = build_spin_operators(j);
        ComplexSpectrum s = diagonalize_hermitian(ops.jy);
        it = cache.emplace(j.dim(), JyEigen{std::move(s.states), std::move(s.energies)}).first;
    }
    return it->second;
}

ComplexMatrix rotation_u(SpinMagnitude j, double theta, double phi) {
    const JyEigen& e = jy_eigen(j);
    const int n = j.dim();
    ComplexVector ph(n);
    for (int k = 0; k < n; ++k) ph(k) = std::exp(std::complex<double>(0.0, theta * e.m(k)));
    ComplexMatrix u = e.v * ph.asDiagonal() * e.v.adjoint();
    for (int r = 0; r < n; ++r) {
        const std::complex<double> zrot = std::exp(std::complex<double>(0.0, -phi * (-j.j() + r)));
        u.row(r) *= zrot;
    }
    return u;
}

struct BrokenAngles {
    double theta, phi;
};

BrokenAngles broken_angles(const ModelParams& p) {
    const double xy = p.xi_y;
    const double W = std::sqrt(4.0 * xy * xy - 1.0);
    // (Q,P)-consistent branch: cos th4 = -1/(2 xy), cos ph4 = +wx/W, sin ph4 > 0
    return {std::acos(-1.0 / (2.0 * xy)), std::acos(std::clamp(p.omega_x / W, -1.0, 1.0))};
}

// Highest eigenvector of the quadratic bosonic Hamiltonian on the 2j+1 Fock
// levels the Holstein-Primakoff image provides. In the U(theta,phi) frame the
// Eq.-(34) cross term enters with opposite sign (verified against the corner
// elements of U^H H U in the unit tests).
ComplexVector broken_gaussian(SpinMagnitude j, const ModelParams& p) {
    const QuadraticHamiltonian qh = hp_broken_quadratic(j, p);
    const int n = j.dim();

    RealMatrix q = RealMatrix::Zero(n, n);
    ComplexMatrix pp = ComplexMatrix::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double s = std::sqrt(static_cast<double>(k)) / std::sqrt(2.0);
        q(k - 1, k) = q(k, k - 1) = s;                       // (a^dag + a)/sqrt2
        pp(k - 1, k) = std::complex<double>(0.0, s);         // i(a^dag - a)/sqrt2
        pp(k, k - 1) = std::complex<double>(0.0, -s);
    }
    ComplexMatrix h2 = qh.c_pp * (pp * pp) +
                       (-qh.c_qp) * (q.cast<std::complex<double>>() * pp +
                                     pp * q.cast<std::complex<double>>()) +
                       qh.c_qq * (q * q).cast<std::complex<double>>();
    h2 = (0.5 * (h2 + h2.adjoint())).eval();

    ComplexSpectrum s = diagonalize_hermitian(h2);
    ComplexVector v = s.states.col(n - 1);
    // Fock-tail check: the truncation must hold the squeezed vacuum
    const double tail = std::norm(v(n - 1)) + (n > 1 ? std::norm(v(n - 2)) : 0.0);
    if (tail > 1e-12)
        throw DomainError("hp_broken_metric: squeezing exceeds the Fock truncation "
                          "(too close to the separatrix for this j)");
    return v;
}

ComplexVector broken_state(SpinMagnitude j, const ModelParams& p) {
    const BrokenAngles a = broken_angles(p);
    return rotation_u(j, a.theta, a.phi) * broken_gaussian(j, p);
}

}  // namespace

ComplexVector hp_broken_state(SpinMagnitude j, const ModelParams& p) {
    require_unit_omega(p, "hp_broken_state");
    return broken_state(j, p);
}

HpMetricPoint hp_broken_metric(SpinMagnitude j, const ModelParams& p, double delta) {
    require_unit_omega(p, "hp_broken_metric");
    if (!(4.0 * p.xi_y * p.xi_y - p.omega_x * p.omega_x - 1.0 > 0.0))
        throw DomainError("hp_broken_metric: point not inside the broken phase");

    const ComplexVector base = broken_state(j, p);
    auto quad = [&](double dx, double dy, double d) {
        ModelParams q = p;
        q.omega_x += dx;
        q.xi_y += dy;
        const ComplexVector v = broken_state(j, q);
        const double ov = std::abs(base.dot(v));  // |<base|v>|
        return 2.0 * (1.0 - ov) / (d * d);
    };

    double e11[2], e22[2], edd[2];
    const double ds[2] = {delta, delta / 2.0};
    for (int r = 0; r < 2; ++r) {
        e11[r] = quad(ds[r], 0.0, ds[r]);
        e22[r] = quad(0.0, ds[r], ds[r]);
        edd[r] = quad(ds[r], ds[r], ds[r]);
    }
    const double g11 = 2.0 * e11[1] - e11[0];
    const double g22 = 2.0 * e22[1] - e22[0];
    const double gdd = 2.0 * edd[1] - edd[0];

    HpMetricPoint m;
    m.phase = HpPhase::BrokenHighest;
    m.j = j.j();
    m.omega = std::sqrt(4.0 * p.xi_y * p.xi_y - p.omega_x * p.omega_x - 1.0);
    m.g11 = g11;
    m.g22 = g22;
    m.g12 = 0.5 * (gdd - g11 - g22);
    m.det_g = m.g11 * m.g22 - m.g12 * m.g12;
    return m;
}

}  // namespace lmg
