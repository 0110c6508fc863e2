#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lmg/qgt.hpp"

namespace lmg {

/// A sampled quantity along a parameter cut.
struct Curve {
    std::vector<double> x;
    std::vector<double> y;
    std::string quantity;  // meta: "g22", "R", ...
    double j = 0.0;        // meta
    double fixed_xi_y = 0.0;
};

enum class ExtremumKind { Max, Min };

struct Extremum {
    double location = 0.0;
    double value = 0.0;
};

/// Thrown when the discrete extremum sits on an endpoint.
struct ExtremumOnBoundary : Error {
    using Error::Error;
};

/// Discrete extremum refined by a parabola through the three bracketing
/// samples (general spacing).
Extremum extract_extremum(const Curve& c, ExtremumKind kind);

/// Parametric model y(x; theta). Analytic Jacobian when available,
/// finite differences otherwise.
struct FitModel {
    std::string name;
    int n_params = 0;
    std::function<double(double, const std::vector<double>&)> eval;
    /// optional: fill jac[0..n_params) with d y / d theta_k at x
    std::function<void(double, const std::vector<double>&, double*)> jacobian;
};

/// Named families used by the scaling analysis:
///   linear            y = a + b x
///   power_offset      y = a + b/(x-c)^d
///   power_offset_sq   y = a + b/(x^2-c)^d
///   reciprocal_linear y = 1/(a + b x)
///   exp_offset        y = a + b e^{c x}
///   squared_linear    y = (a + b x)^2
FitModel make_fit_model(const std::string& name);

struct FitResult {
    std::string model_name;
    std::vector<double> parameters;
    double residual_rms = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Damped (Levenberg-Marquardt) least squares; deterministic. Converged when
/// the largest relative parameter change in an accepted step is < 1e-10.
/// Non-convergence returns best-so-far with converged = false.
FitResult fit_model(const Curve& data, const FitModel& model, std::vector<double> initial);

enum class CutQuantity { G11, G12, G22, R };

CutQuantity cut_quantity_from_string(const std::string& s);
std::string to_string(CutQuantity q);

/// One scaling-study cut: either "peak of quantity over an omega_x window"
/// or "value of quantity at a fixed omega_x".
struct CutSpec {
    double xi_y = 2.3;
    StateSelector state = StateSelector::highest();
    QgtMethod method = QgtMethod::Auto;
    // peak mode
    double window_lo = 3.3, window_hi = 4.85;
    int coarse_count = 61;
    int refine_count = 21;
    // value-at-point mode
    bool at_point = false;
    double omega_x0 = 0.0;
    // finite-difference step for R (both modes)
    double r_step = 0.02;
};

struct ScalingRow {
    double j = 0.0;
    double location = 0.0;
    double value = 0.0;
    std::string status = "ok";
};

/// One row per j (peak location and value, or point value); parallel over j,
/// deterministic output order. Failures are carried per row.
std::vector<ScalingRow> scaling_study(const std::vector<double>& j_list, const CutSpec& cut,
                                      CutQuantity quantity, int threads = 0);

}  // namespace lmg
