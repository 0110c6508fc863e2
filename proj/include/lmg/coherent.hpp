#pragma once

#include "lmg/spin_model.hpp"

namespace lmg {

/// Bloch coherent state |z>, z = tan(theta/2) e^{-i phi}, expanded on
/// |j,m>, m = -j..+j. theta = 0 is the lowest-weight state |j,-j>.
struct CoherentState {
    SpinMagnitude j;
    double theta = 0.0, phi = 0.0;
    ComplexVector coefficients;
};

CoherentState coherent_vector(SpinMagnitude j, double theta, double phi);

/// Stationary branch whose angles theta(x), phi(x) parameterize the state.
enum class CoherentBranch { Broken, Symmetric };

struct CoherentQgt {
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    double f12 = 0.0;
    double det_g = 0.0;
    /// Set for the symmetric branch, where the pulled-back metric has
    /// det g = 0 (the coherent state does not depend on xi_y there).
    bool degenerate = false;
};

/// QGT from coefficient derivatives through theta(x), phi(x) of the branch
/// (central differences, default step 1e-6).
CoherentQgt coherent_qgt_numeric(SpinMagnitude j, const ModelParams& p, CoherentBranch branch,
                                 double delta = 1e-6);

/// Literal closed forms of the coherent-state QGT in both phases.
CoherentQgt coherent_qgt_closed_form(SpinMagnitude j, const ModelParams& p,
                                     CoherentBranch branch);

}  // namespace lmg
