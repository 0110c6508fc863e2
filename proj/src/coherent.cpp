#include "lmg/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace lmg {

namespace {

// binomials in log space; C(1024,512) overflows double otherwise
double log_binomial(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

struct BranchAngles {
    double theta, phi;
};

BranchAngles branch_angles(const ModelParams& p, CoherentBranch branch) {
    const double wx = p.omega_x;
    const double xy = p.xi_y;
    const double a = std::sqrt(1.0 + wx * wx);
    if (branch == CoherentBranch::Broken) {
        if (!(xy > a / 2.0))
            throw DomainError("coherent broken branch undefined below the separatrix");
        const double w = std::sqrt(4.0 * xy * xy - 1.0);
        return {std::acos(-1.0 / (2.0 * xy)), std::acos(std::clamp(wx / w, -1.0, 1.0))};
    }
    if (!(xy <= a / 2.0))
        throw DomainError("coherent symmetric branch undefined above the separatrix");
    return {std::acos(-1.0 / a), 0.0};
}

void basic_checks(const ModelParams& p) {
    if (std::abs(p.omega - 1.0) > 1e-12)
        throw DomainError("coherent layer: closed forms are in omega = 1 units");
}

}  // namespace

CoherentState coherent_vector(SpinMagnitude j, double theta, double phi) {
    const int n = j.dim();
    CoherentState st{j, theta, phi, ComplexVector::Zero(n)};
    const double s = std::sin(theta / 2.0);
    const double c = std::cos(theta / 2.0);

    if (s == 0.0) {
        st.coefficients(0) = 1.0;  // |j,-j>
        return st;
    }
    if (c == 0.0) {
        st.coefficients(n - 1) = std::exp(std::complex<double>(0.0, -2.0 * j.j() * phi));
        return st;
    }
    const double ls = std::log(std::abs(s));
    const double lc = std::log(std::abs(c));
    for (int k = 0; k < n; ++k) {
        const double jm = k;            // j + m
        const double jmm = n - 1 - k;   // j - m
        const double amp = std::exp(0.5 * log_binomial(2.0 * j.j(), jm) + jm * ls + jmm * lc);
        st.coefficients(k) = amp * std::exp(std::complex<double>(0.0, -jm * phi));
    }
    return st;
}

CoherentQgt coherent_qgt_numeric(SpinMagnitude j, const ModelParams& p, CoherentBranch branch,
                                 double delta) {
    basic_checks(p);
    auto state = [&](double wx, double xy) {
        const BranchAngles a = branch_angles(ModelParams{1.0, wx, xy}, branch);
        return coherent_vector(j, a.theta, a.phi).coefficients;
    };

    ComplexVector c0 = state(p.omega_x, p.xi_y);
    ComplexVector dc[2];
    dc[0] = (state(p.omega_x + delta, p.xi_y) - state(p.omega_x - delta, p.xi_y)) / (2.0 * delta);
    dc[1] = (state(p.omega_x, p.xi_y + delta) - state(p.omega_x, p.xi_y - delta)) / (2.0 * delta);

    std::complex<double> q[2][2];
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            q[a][b] = dc[a].dot(dc[b]) - dc[a].dot(c0) * c0.dot(dc[b]);

    CoherentQgt out;
    out.g11 = q[0][0].real();
    out.g22 = q[1][1].real();
    out.g12 = q[0][1].real();
    out.f12 = -2.0 * q[0][1].imag();
    out.det_g = out.g11 * out.g22 - out.g12 * out.g12;
    out.degenerate = branch == CoherentBranch::Symmetric;
    return out;
}

CoherentQgt coherent_qgt_closed_form(SpinMagnitude j, const ModelParams& p,
                                     CoherentBranch branch) {
    basic_checks(p);
    const double wx = p.omega_x;
    const double xy = p.xi_y;
    const double jj = j.j();
    CoherentQgt out;

    if (branch == CoherentBranch::Broken) {
        const double d2 = 4.0 * xy * xy - wx * wx - 1.0;
        if (!(d2 > 0.0))
            throw DomainError("coherent closed form singular at/below the separatrix");
        out.f12 = -(jj / 2.0) / (xy * xy * std::sqrt(d2));
        out.g11 = (jj / 2.0) * (4.0 * xy * xy - 1.0) / (4.0 * xy * xy * d2);
        out.g12 = -(jj / 2.0) * wx / (xy * d2);
        out.g22 = (jj / 2.0) * (wx * wx + 1.0) / (xy * xy * d2);
        out.det_g = jj * jj / (16.0 * std::pow(xy, 4) * d2);
        out.degenerate = false;
        return out;
    }
    const double A = wx * wx + 1.0;
    out.g11 = (jj / 2.0) / (A * A);
    out.g12 = out.g22 = out.f12 = 0.0;
    out.det_g = 0.0;
    out.degenerate = true;
    return out;
}

}  // namespace lmg
