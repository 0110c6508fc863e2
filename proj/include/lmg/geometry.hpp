#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lmg/qgt.hpp"

namespace lmg {

struct Metric2 {
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    double det() const { return g11 * g22 - g12 * g12; }
};

using MetricFunction = std::function<Metric2(double x1, double x2)>;

/// Scalar curvature of a 2D metric at (x1,x2), nested central differences of
/// step h for the inner and outer derivatives of the A/B expression.
/// Throws SingularMetric when det g <= 1e-14 * scale(g)^2 on the stencil.
double scalar_curvature_at(const MetricFunction& metric, double x1, double x2, double h);

struct MetricChecks {
    double det = 0.0;
    double eig_min = 0.0, eig_max = 0.0;
    bool positive_definite = false;
};

MetricChecks metric_checks(const Metric2& g);

/// Gaussian curvature K = R/2.
inline double gaussian_curvature(double r) { return 0.5 * r; }

struct CurvatureNode {
    double r = 0.0;
    std::string status = "ok";  // ok | boundary | singular:* | failed-input
    bool ok() const { return status == "ok"; }
};

struct CurvatureField {
    GridSpec grid;
    std::vector<CurvatureNode> nodes;  // row-major, omega_x fastest
};

/// Curvature on the interior of a tabulated QGT field (stencil width 2 per
/// axis); boundary nodes are marked, failed input nodes propagate. Requires
/// uniform spacing per axis and at least 5 nodes per axis.
CurvatureField scalar_curvature_field(const QgtField& f, int threads = 0);

}  // namespace lmg
