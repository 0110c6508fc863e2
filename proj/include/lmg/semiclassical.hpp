#pragma once

#include <string>
#include <vector>

#include "lmg/spin_model.hpp"

namespace lmg {

/// Canonical phase-space point with its Bloch angles.
/// Q = sqrt(2(1-cos th)) cos ph, P = -sqrt(2(1-cos th)) sin ph.
struct PhasePoint {
    double q = 0.0, p = 0.0;
    double theta = 0.0, phi = 0.0;
};

PhasePoint phase_point_from_qp(double q, double p);

enum class StationaryLabel { X1, X2, X3, X3p, X4, X4p };
enum class Stability { StableCenter, UnstableCenter, Hyperbolic };

std::string to_string(StationaryLabel l);
std::string to_string(Stability s);

struct StationaryPoint {
    StationaryLabel label;
    PhasePoint point;
    double energy = 0.0;  // h at the point, units of omega*j
    Stability stability = Stability::StableCenter;
    double lyapunov = 0.0;
};

/// h(Q,P) of the classical Hamiltonian; domain Q^2 + P^2 <= 4.
double classical_energy(const ModelParams& p, double q, double pp);

/// Bloch-angle form of the same energy surface.
double classical_energy_angles(const ModelParams& p, double theta, double phi);

/// (dQ/dt, dP/dt) = (dh/dP, -dh/dQ); strict interior Q^2+P^2 < 4.
struct PhaseVelocity {
    double dq = 0.0, dp = 0.0;
};
PhaseVelocity equations_of_motion(const ModelParams& p, double q, double pp);

/// x1, x2 always; x3/x3' when xi_y <= -sqrt(omega^2+omega_x^2)/2; x4/x4'
/// when xi_y >= +sqrt(omega^2+omega_x^2)/2. Angles derived from (Q,P).
std::vector<StationaryPoint> stationary_points(const ModelParams& p);

/// Lyapunov exponent of x1: sqrt(sqrt(1+wx^2)(2 xy - sqrt(1+wx^2))) above the
/// separatrix, 0 elsewhere (omega-rescaled for omega != 1).
double lyapunov_exponent(const ModelParams& p);

/// Critical omega_x at fixed xi_y: sqrt(4 xi_y^2 - omega^2); xi_y >= omega/2.
double critical_omega_x(double xi_y, double omega = 1.0);
/// Separatrix xi_y(omega_x) = sqrt(omega^2 + omega_x^2)/2.
double separatrix_xi_y(double omega_x, double omega = 1.0);
/// ESQPT energy per spin: e1 = sqrt(omega^2 + omega_x^2).
double esqpt_energy(double omega_x, double omega = 1.0);

/// Bloch coherent-state expectation values per spin. jy2 = <Jy^2>/j^2 is
/// exact at finite j (keeps the 1/(2j) width term); energy = <H>/j.
struct Observables {
    double jx = 0.0, jy = 0.0, jz = 0.0;
    double jy2 = 0.0;
    double energy = 0.0;
};

Observables coherent_expectations(SpinMagnitude j, double theta, double phi,
                                  const ModelParams& p);

}  // namespace lmg
