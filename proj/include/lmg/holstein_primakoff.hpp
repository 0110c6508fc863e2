#pragma once

#include "lmg/spin_model.hpp"

namespace lmg {

enum class HpPhase { Ground, SymmetricHighest, BrokenHighest };

/// Thermodynamic-limit metric point from the truncated Holstein-Primakoff
/// layer. For the ground/symmetric phases these are the closed forms; the
/// broken phase is reconstructed numerically from the Gaussian family.
struct HpMetricPoint {
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    double det_g = 0.0;
    double omega = 0.0;  // oscillator frequency of the phase
    HpPhase phase = HpPhase::Ground;
    double j = 0.0;
};

/// Closed forms around the ground state; frequency
/// sqrt(sqrt(1+wx^2)(sqrt(1+wx^2)+2 xy)). Both g11 terms retained.
HpMetricPoint hp_ground_metric(SpinMagnitude j, const ModelParams& p);

/// Closed forms around the highest state below the separatrix
/// (xi_y < sqrt(1+wx^2)/2); the +2xy of the ground case becomes -2xy.
HpMetricPoint hp_symmetric_metric(SpinMagnitude j, const ModelParams& p);

/// Generalized-oscillator coefficients of the broken-phase quadratic
/// Hamiltonian: H ~ constant + c_pp P^2 + c_qp (QP+PQ) + c_qq Q^2.
struct QuadraticHamiltonian {
    double constant = 0.0;  // j (4xy^2+wx^2+1)/(4xy)
    double c_pp = 0.0, c_qq = 0.0, c_qp = 0.0;
    double omega = 0.0;  // sqrt(4xy^2 - wx^2 - 1)
};

QuadraticHamiltonian hp_broken_quadratic(SpinMagnitude j, const ModelParams& p);

/// Broken-phase metric from the extremal Gaussian family: coherent rotation
/// fixed by the x4 stationary point times the squeezed vacuum of the
/// quadratic Hamiltonian, differentiated through overlaps (delta, one
/// Richardson step). Strictly inside the broken phase.
HpMetricPoint hp_broken_metric(SpinMagnitude j, const ModelParams& p, double delta = 1e-5);

/// Analytic broken-phase Berry curvature (the only nonzero component).
double hp_broken_berry(SpinMagnitude j, const ModelParams& p);

/// Per-spin maximal energy, piecewise across omega_xc = sqrt(4 xy^2 - 1);
/// continuous with continuous first derivative there.
double e_max(const ModelParams& p);

/// The Gaussian family state itself (exposed for cross-checks against exact
/// diagonalization).
ComplexVector hp_broken_state(SpinMagnitude j, const ModelParams& p);

}  // namespace lmg
