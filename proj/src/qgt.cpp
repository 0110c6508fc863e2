#include "lmg/qgt.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <limits>
#include <thread>

namespace lmg {

namespace {

// Compensated (Kahan) accumulator; the Eq.(5) sum has 2j terms with severe
// cancellation near the separatrix.
struct Kahan {
    double sum = 0.0, c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
};

void finish_point(QgtPoint& q) { q.det_g = q.g11 * q.g22 - q.g12 * q.g12; }

template <typename Vec>
QgtPoint perturbative_sum(const RealVector& energies, const Vec& w1, const Vec& w2, int n,
                          const ModelParams& p, StateSelector sel, double eps_deg_rel) {
    const int dim = static_cast<int>(energies.size());
    const double width = energies(dim - 1) - energies(0);

    double min_gap = std::numeric_limits<double>::infinity();
    for (int m = 0; m < dim; ++m)
        if (m != n) min_gap = std::min(min_gap, std::abs(energies(m) - energies(n)));
    if (!(min_gap > eps_deg_rel * width))
        throw DegenerateState("qgt_perturbative: level gap " + std::to_string(min_gap) +
                                  " under guard " + std::to_string(eps_deg_rel) +
                                  "*width at omega_x=" + std::to_string(p.omega_x) +
                                  ", xi_y=" + std::to_string(p.xi_y),
                              min_gap);

    Kahan q11, q22, q12re, q12im;
    for (int m = 0; m < dim; ++m) {
        if (m == n) continue;
        const double de = energies(m) - energies(n);
        const double inv2 = 1.0 / (de * de);
        const std::complex<double> a(w1(m)), b(w2(m));
        q11.add(std::norm(a) * inv2);
        q22.add(std::norm(b) * inv2);
        const std::complex<double> cross = std::conj(a) * b * inv2;
        q12re.add(cross.real());
        q12im.add(cross.imag());
    }

    QgtPoint out;
    out.params = p;
    out.state = sel;
    out.g11 = q11.sum;
    out.g22 = q22.sum;
    out.g12 = q12re.sum;
    out.f12 = -2.0 * q12im.sum;
    out.min_gap = min_gap;
    finish_point(out);
    return out;
}

}  // namespace

QgtMethod qgt_method_from_string(const std::string& s) {
    if (s == "perturbative") return QgtMethod::Perturbative;
    if (s == "overlap") return QgtMethod::Overlap;
    if (s == "mp") return QgtMethod::MultiPrecision;
    if (s == "auto") return QgtMethod::Auto;
    throw DomainError("unknown qgt method '" + s + "'");
}

std::string to_string(QgtMethod m) {
    switch (m) {
        case QgtMethod::Perturbative: return "perturbative";
        case QgtMethod::Overlap: return "overlap";
        case QgtMethod::MultiPrecision: return "mp";
        case QgtMethod::Auto: return "auto";
    }
    return "?";
}

QgtPoint qgt_perturbative(const Spectrum& s, const ParameterDerivatives& d, const ModelParams& p,
                          StateSelector sel, double eps_deg_rel) {
    const int dim = static_cast<int>(s.energies.size());
    const int n = select_state(dim, sel);
    const RealVector w1 = s.states.transpose() * (d.d_omega_x * s.states.col(n));
    const RealVector w2 = s.states.transpose() * (d.d_xi_y * s.states.col(n));
    return perturbative_sum(s.energies, w1, w2, n, p, sel, eps_deg_rel);
}

QgtPoint qgt_perturbative(const ComplexSpectrum& s, const ParameterDerivatives& d,
                          const ModelParams& p, StateSelector sel, double eps_deg_rel) {
    const int dim = static_cast<int>(s.energies.size());
    const int n = select_state(dim, sel);
    const ComplexMatrix d1 = d.d_omega_x.cast<std::complex<double>>();
    const ComplexMatrix d2 = d.d_xi_y.cast<std::complex<double>>();
    const ComplexVector w1 = s.states.adjoint() * (d1 * s.states.col(n));
    const ComplexVector w2 = s.states.adjoint() * (d2 * s.states.col(n));
    return perturbative_sum(s.energies, w1, w2, n, p, sel, eps_deg_rel);
}

QgtPoint qgt_perturbative(const SpinOperators& ops, const ModelParams& p, StateSelector sel,
                          double eps_deg_rel) {
    const Spectrum s = diagonalize(build_hamiltonian(ops, p));
    return qgt_perturbative(s, build_parameter_derivatives(ops), p, sel, eps_deg_rel);
}

namespace {

// Track the selected state from a base eigenvector by maximal overlap.
int track_state(const RealMatrix& states, const RealVector& base) {
    int best = 0;
    double best_ov = -1.0;
    const RealVector ov = (states.transpose() * base).cwiseAbs();
    for (int k = 0; k < ov.size(); ++k)
        if (ov(k) > best_ov) {
            best_ov = ov(k);
            best = k;
        }
    if (best_ov < 0.5)
        throw StateTrackingLost("qgt_overlap_oracle: best overlap " + std::to_string(best_ov) +
                                " < 0.5 while tracking the state across the stencil");
    return best;
}

// E(delta) = 2(1 - |<n(x)|n(x+delta v)>|)/delta^2 = g_vv + O(delta).
double overlap_quadratic(const SpinOperators& ops, const ModelParams& p, const RealVector& base,
                         double dx, double dy, double delta) {
    ModelParams q = p;
    q.omega_x += dx;
    q.xi_y += dy;
    const Spectrum s = diagonalize(build_hamiltonian(ops, q));
    const int k = track_state(s.states, base);
    const double ov = std::abs(base.dot(s.states.col(k)));
    return 2.0 * (1.0 - ov) / (delta * delta);
}

}  // namespace

QgtPoint qgt_overlap_oracle(const SpinOperators& ops, const ModelParams& p, StateSelector sel,
                            double delta) {
    if (!(delta > 0.0)) throw DomainError("qgt_overlap_oracle: delta must be positive");
    const Spectrum s0 = diagonalize(build_hamiltonian(ops, p));
    const int n = select_state(ops.j.dim(), sel);
    const RealVector base = s0.states.col(n);

    double e11[2], e22[2], edd[2];
    const double deltas[2] = {delta, delta / 2.0};
    for (int r = 0; r < 2; ++r) {
        const double d = deltas[r];
        e11[r] = overlap_quadratic(ops, p, base, d, 0.0, d);
        e22[r] = overlap_quadratic(ops, p, base, 0.0, d, d);
        edd[r] = overlap_quadratic(ops, p, base, d, d, d);
    }
    // one Richardson step removes the O(delta) error
    const double g11 = 2.0 * e11[1] - e11[0];
    const double g22 = 2.0 * e22[1] - e22[0];
    const double gdd = 2.0 * edd[1] - edd[0];  // g11 + 2 g12 + g22

    double min_gap = std::numeric_limits<double>::infinity();
    for (int m = 0; m < ops.j.dim(); ++m)
        if (m != n) min_gap = std::min(min_gap, std::abs(s0.energies(m) - s0.energies(n)));

    QgtPoint out;
    out.params = p;
    out.state = sel;
    out.g11 = g11;
    out.g22 = g22;
    out.g12 = 0.5 * (gdd - g11 - g22);
    out.f12 = std::numeric_limits<double>::quiet_NaN();  // not recoverable from |overlap|
    out.min_gap = min_gap;
    finish_point(out);
    return out;
}

QgtPoint qgt_auto(const SpinOperators& ops, const ModelParams& p, StateSelector sel,
                  double eps_deg_rel) {
    try {
        return qgt_perturbative(ops, p, sel, eps_deg_rel);
    } catch (const DegenerateState&) {
        if (ops.j.dim() > kAutoMpDimCap) throw;
        return qgt_multiprecision(ops.j, p, sel);
    }
}

QgtField qgt_mesh(SpinMagnitude j, const GridSpec& grid, StateSelector sel, QgtMethod method,
                  int threads, double eps_deg_rel, double overlap_delta) {
    if (grid.omega_x.count < 1 || grid.xi_y.count < 1)
        throw DomainError("qgt_mesh: axis count must be >= 1");
    if (grid.omega_x.start > grid.omega_x.stop || grid.xi_y.start > grid.xi_y.stop)
        throw DomainError("qgt_mesh: axis start must be <= stop");

    const SpinOperators ops = build_spin_operators(j);
    QgtField field{j, sel, grid, std::vector<QgtNode>(grid.size())};

    const int total = grid.size();
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, total);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
            const int ix = k % grid.omega_x.count;
            const int iy = k / grid.omega_x.count;
            const ModelParams p = grid.params_at(ix, iy);
            QgtNode& node = field.nodes[k];
            try {
                switch (method) {
                    case QgtMethod::Perturbative:
                        node.point = qgt_perturbative(ops, p, sel, eps_deg_rel);
                        break;
                    case QgtMethod::Overlap:
                        node.point = qgt_overlap_oracle(ops, p, sel, overlap_delta);
                        break;
                    case QgtMethod::MultiPrecision:
                        node.point = qgt_multiprecision(j, p, sel);
                        break;
                    case QgtMethod::Auto:
                        node.point = qgt_auto(ops, p, sel, eps_deg_rel);
                        break;
                }
                node.status = "ok";
            } catch (const std::exception& e) {
                node.point = QgtPoint{};
                node.point.params = p;
                node.point.state = sel;
                node.point.g11 = node.point.g12 = node.point.g22 = node.point.f12 =
                    node.point.det_g = node.point.min_gap = std::numeric_limits<double>::quiet_NaN();
                node.status = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return field;
}

}  // namespace lmg
