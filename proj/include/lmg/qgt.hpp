#pragma once

#include <string>
#include <vector>

#include "lmg/spectral.hpp"
#include "lmg/spin_model.hpp"

namespace lmg {

/// Relative (to spectral width) gap below which Eq.-(5)-type sums are refused.
inline constexpr double kDefaultDegeneracyGuard = 1e-12;

/// QGT of one eigenstate at one parameter point. g is the quantum metric,
/// f12 the Berry curvature (NaN when the method cannot produce it).
/// min_gap is the smallest |E_m - E_n| that entered the computation.
struct QgtPoint {
    ModelParams params;
    StateSelector state;
    double g11 = 0.0, g12 = 0.0, g22 = 0.0;
    double f12 = 0.0;
    double det_g = 0.0;
    double min_gap = 0.0;
};

enum class QgtMethod { Perturbative, Overlap, MultiPrecision, Auto };

QgtMethod qgt_method_from_string(const std::string& s);
std::string to_string(QgtMethod m);

/// Second-order perturbative sum (all m != n), compensated summation.
/// Throws DegenerateState when the smallest gap falls under
/// eps_deg_rel * spectral width.
QgtPoint qgt_perturbative(const SpinOperators& ops, const ModelParams& p, StateSelector sel,
                          double eps_deg_rel = kDefaultDegeneracyGuard);

/// Same sum on an existing decomposition (spectrum reuse for sweeps).
QgtPoint qgt_perturbative(const Spectrum& s, const ParameterDerivatives& d, const ModelParams& p,
                          StateSelector sel, double eps_deg_rel = kDefaultDegeneracyGuard);

/// General Hermitian path; f12 = -2 Im Q12 is meaningful here.
QgtPoint qgt_perturbative(const ComplexSpectrum& s, const ParameterDerivatives& d,
                          const ModelParams& p, StateSelector sel,
                          double eps_deg_rel = kDefaultDegeneracyGuard);

/// Metric from overlaps 1 - |<n(x)|n(x+delta v)>| along e1, e2 and e1+e2,
/// one Richardson step (delta and delta/2). Berry part not recoverable:
/// f12 = NaN. States are tracked by maximal overlap; below 0.5 the oracle
/// throws StateTrackingLost.
QgtPoint qgt_overlap_oracle(const SpinOperators& ops, const ModelParams& p, StateSelector sel,
                            double delta = 1e-4);

/// MPFR-backed perturbative sum for quasi-degenerate doublets (deep broken
/// phase). digits = 0 selects precision from j; escalates once if the top
/// gap stays unresolved, then throws DegenerateState.
QgtPoint qgt_multiprecision(SpinMagnitude j, const ModelParams& p, StateSelector sel,
                            int digits = 0);

/// Dimension cap for the Auto fallback into qgt_multiprecision.
inline constexpr int kAutoMpDimCap = 260;

/// Perturbative, falling back to the multiprecision path on DegenerateState
/// (only when dim <= kAutoMpDimCap; otherwise the error propagates).
QgtPoint qgt_auto(const SpinOperators& ops, const ModelParams& p, StateSelector sel,
                  double eps_deg_rel = kDefaultDegeneracyGuard);

/// Inclusive axis start:stop:count; count >= 1, start <= stop.
struct GridAxis {
    double start = 0.0, stop = 0.0;
    int count = 1;
    double value(int i) const {
        return count < 2 ? start : start + (stop - start) * static_cast<double>(i) / (count - 1);
    }
    double step() const { return count < 2 ? 0.0 : (stop - start) / (count - 1); }
};

struct GridSpec {
    GridAxis omega_x;
    GridAxis xi_y;
    double omega = 1.0;
    int size() const { return omega_x.count * xi_y.count; }
    /// Row-major node index, omega_x fastest.
    int node(int ix, int iy) const { return iy * omega_x.count + ix; }
    ModelParams params_at(int ix, int iy) const {
        return ModelParams{omega, omega_x.value(ix), xi_y.value(iy)};
    }
};

struct QgtNode {
    QgtPoint point;
    std::string status = "ok";  // "ok" or the per-node error message
    bool ok() const { return status == "ok"; }
};

/// Rectangular field of QGT points, row-major with omega_x fastest.
struct QgtField {
    SpinMagnitude j;
    StateSelector state;
    GridSpec grid;
    std::vector<QgtNode> nodes;
};

/// Sweep the grid; one node per point, failures recorded per node. Output is
/// deterministic and independent of the thread count (threads = 0 uses the
/// hardware count).
QgtField qgt_mesh(SpinMagnitude j, const GridSpec& grid, StateSelector sel, QgtMethod method,
                  int threads = 0, double eps_deg_rel = kDefaultDegeneracyGuard,
                  double overlap_delta = 1e-4);

}  // namespace lmg
