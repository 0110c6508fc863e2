#include "lmg/semiclassical.hpp"

#include <algorithm>
#include <cmath>

namespace lmg {

namespace {

void check_omega(const ModelParams& p) {
    if (!(p.omega > 0.0)) throw DomainError("semiclassical layer requires omega > 0");
}

double clamp1(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

PhasePoint phase_point_from_qp(double q, double p) {
    const double r2 = q * q + p * p;
    if (r2 > 4.0 + 1e-12) throw DomainError("phase point outside the Q^2+P^2 <= 4 disk");
    PhasePoint out;
    out.q = q;
    out.p = p;
    out.theta = std::acos(clamp1(1.0 - r2 / 2.0));
    const double rho = std::sqrt(std::max(0.0, 2.0 * (1.0 - std::cos(out.theta))));
    out.phi = rho > 1e-14 ? std::atan2(-p / rho, q / rho) : 0.0;
    return out;
}

double classical_energy(const ModelParams& par, double q, double p) {
    check_omega(par);
    const double r2 = q * q + p * p;
    if (r2 > 4.0 + 1e-12)
        throw DomainError("classical_energy: Q^2+P^2 = " + std::to_string(r2) + " > 4");
    const double s2 = 1.0 - r2 / 4.0;
    const double s = std::sqrt(std::max(0.0, s2));
    return par.omega * (r2 / 2.0 - 1.0) + par.omega_x * q * s + par.xi_y * p * p * s2;
}

double classical_energy_angles(const ModelParams& par, double theta, double phi) {
    check_omega(par);
    const double st = std::sin(theta);
    return -par.omega * std::cos(theta) + par.omega_x * st * std::cos(phi) +
           par.xi_y * st * st * std::sin(phi) * std::sin(phi);
}

PhaseVelocity equations_of_motion(const ModelParams& par, double q, double p) {
    check_omega(par);
    const double r2 = q * q + p * p;
    if (!(r2 < 4.0)) throw DomainError("equations_of_motion: need Q^2+P^2 < 4");
    const double s2 = 1.0 - r2 / 4.0;
    const double s = std::sqrt(s2);
    PhaseVelocity v;
    // dh/dP and -dh/dQ of classical_energy
    v.dq = p * (par.omega - par.omega_x * q / (4.0 * s) + 2.0 * par.xi_y * s2 -
                par.xi_y * p * p / 2.0);
    v.dp = -(par.omega * q + par.omega_x * s - par.omega_x * q * q / (4.0 * s) -
             par.xi_y * p * p * q / 2.0);
    return v;
}

std::vector<StationaryPoint> stationary_points(const ModelParams& par) {
    check_omega(par);
    // rescale to omega = 1 units; (Q,P) are invariant, energies scale by omega
    const double wx = par.omega_x / par.omega;
    const double xy = par.xi_y / par.omega;
    const double a = std::sqrt(1.0 + wx * wx);
    const double sep = a / 2.0;
    const double sigma = wx >= 0.0 ? 1.0 : -1.0;

    std::vector<StationaryPoint> out;

    auto push = [&](StationaryLabel label, double q, double p, double energy, Stability st,
                    double lam) {
        StationaryPoint sp;
        sp.label = label;
        sp.point = phase_point_from_qp(q, p);
        sp.energy = par.omega * energy;
        sp.stability = st;
        sp.lyapunov = par.omega * lam;
        out.push_back(sp);
    };

    // x1: energy maximum of the linear part; hyperbolic above the separatrix
    {
        const double q1 = sigma * std::sqrt(2.0 + 2.0 / a);
        const bool hyper = xy > sep;
        const double lam = hyper ? std::sqrt(a * (2.0 * xy - a)) : 0.0;
        push(StationaryLabel::X1, q1, 0.0, a, hyper ? Stability::Hyperbolic : Stability::UnstableCenter,
             lam);
    }
    // x2: ground state; hyperbolic below -separatrix
    {
        const double q2 = -sigma * std::sqrt(2.0 - 2.0 / a);
        const bool hyper = xy < -sep;
        const double lam = hyper ? std::sqrt(a * (-2.0 * xy - a)) : 0.0;
        push(StationaryLabel::X2, q2, 0.0, -a,
             hyper ? Stability::Hyperbolic : Stability::StableCenter, lam);
    }
    // x3/x3' (xi_y <= -sep) and x4/x4' (xi_y >= sep): degenerate pair energies
    const double e34 = (1.0 + wx * wx) / (4.0 * xy) + xy;  // only used when valid
    if (xy <= -sep) {
        const double den = std::sqrt(xy * (2.0 * xy - 1.0));
        const double q3 = -wx / den;
        const double p3 = std::sqrt(std::max(0.0, 4.0 * xy * xy - wx * wx - 1.0)) / den;
        push(StationaryLabel::X3, q3, -p3, e34, Stability::StableCenter, 0.0);
        push(StationaryLabel::X3p, q3, p3, e34, Stability::StableCenter, 0.0);
    }
    if (xy >= sep) {
        const double den = std::sqrt(xy * (2.0 * xy - 1.0));
        const double q4 = wx / den;
        const double p4 = std::sqrt(std::max(0.0, 4.0 * xy * xy - wx * wx - 1.0)) / den;
        push(StationaryLabel::X4, q4, -p4, e34, Stability::UnstableCenter, 0.0);
        push(StationaryLabel::X4p, q4, p4, e34, Stability::UnstableCenter, 0.0);
    }
    return out;
}

double lyapunov_exponent(const ModelParams& par) {
    check_omega(par);
    const double wx = par.omega_x / par.omega;
    const double xy = par.xi_y / par.omega;
    const double a = std::sqrt(1.0 + wx * wx);
    if (!(xy > a / 2.0)) return 0.0;
    return par.omega * std::sqrt(a * (2.0 * xy - a));
}

double critical_omega_x(double xi_y, double omega) {
    if (!(xi_y >= omega / 2.0))
        throw DomainError("critical_omega_x undefined for xi_y < omega/2");
    return std::sqrt(4.0 * xi_y * xi_y - omega * omega);
}

double separatrix_xi_y(double omega_x, double omega) {
    return std::sqrt(omega * omega + omega_x * omega_x) / 2.0;
}

double esqpt_energy(double omega_x, double omega) {
    return std::sqrt(omega * omega + omega_x * omega_x);
}

Observables coherent_expectations(SpinMagnitude j, double theta, double phi,
                                  const ModelParams& par) {
    // |z> with z = tan(th/2) e^{-i ph}: <Jx>/j = sin th cos ph,
    // <Jy>/j = sin th sin ph, <Jz>/j = -cos th (theta = 0 is |j,-j>).
    Observables o;
    const double st = std::sin(theta);
    o.jx = st * std::cos(phi);
    o.jy = st * std::sin(phi);
    o.jz = -std::cos(theta);
    // transverse variance of a coherent state is j/2:
    // <Jy^2> = j^2 ny^2 + (j/2)(1 - ny^2) with ny the y-projection
    o.jy2 = o.jy * o.jy + (1.0 - o.jy * o.jy) / (2.0 * j.j());
    o.energy = par.omega * o.jz + par.omega_x * o.jx + par.xi_y * o.jy2;
    return o;
}

std::string to_string(StationaryLabel l) {
    switch (l) {
        case StationaryLabel::X1: return "x1";
        case StationaryLabel::X2: return "x2";
        case StationaryLabel::X3: return "x3";
        case StationaryLabel::X3p: return "x3'";
        case StationaryLabel::X4: return "x4";
        case StationaryLabel::X4p: return "x4'";
    }
    return "?";
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::StableCenter: return "stable_center";
        case Stability::UnstableCenter: return "unstable_center";
        case Stability::Hyperbolic: return "hyperbolic";
    }
    return "?";
}

}  // namespace lmg
