#include "lmg/analysis.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "lmg/geometry.hpp"

namespace lmg {

Extremum extract_extremum(const Curve& c, ExtremumKind kind) {
    const size_t n = c.x.size();
    if (n < 3 || c.y.size() != n)
        throw DomainError("extract_extremum: need >= 3 samples with matching lengths");
    for (size_t i = 1; i < n; ++i)
        if (!(c.x[i] > c.x[i - 1])) throw DomainError("extract_extremum: abscissa not monotone");

    size_t k = 0;
    for (size_t i = 1; i < n; ++i) {
        const bool better = kind == ExtremumKind::Max ? c.y[i] > c.y[k] : c.y[i] < c.y[k];
        if (better) k = i;
    }
    if (k == 0 || k == n - 1)
        throw ExtremumOnBoundary("extract_extremum: discrete extremum at x=" +
                                 std::to_string(c.x[k]) + " is an endpoint");

    // parabola through the three bracketing samples, general spacing
    const double h1 = c.x[k] - c.x[k - 1];
    const double h2 = c.x[k + 1] - c.x[k];
    const double s1 = (c.y[k] - c.y[k - 1]) / h1;
    const double s2 = (c.y[k + 1] - c.y[k]) / h2;
    const double curv = (s2 - s1) / (h1 + h2);             // = alpha
    const double slope = (s1 * h2 + s2 * h1) / (h1 + h2);  // dy/dx at x[k]
    if (curv == 0.0) return {c.x[k], c.y[k]};
    const double dx = -slope / (2.0 * curv);
    return {c.x[k] + dx, c.y[k] + slope * dx + curv * dx * dx};
}

FitModel make_fit_model(const std::string& name) {
    FitModel m;
    m.name = name;
    if (name == "linear") {
        m.n_params = 2;
        m.eval = [](double x, const std::vector<double>& t) { return t[0] + t[1] * x; };
        m.jacobian = [](double x, const std::vector<double>&, double* j) {
            j[0] = 1.0;
            j[1] = x;
        };
    } else if (name == "power_offset") {
        m.n_params = 4;  // a + b/(x-c)^d
        m.eval = [](double x, const std::vector<double>& t) {
            return t[0] + t[1] * std::pow(x - t[2], -t[3]);
        };
        m.jacobian = [](double x, const std::vector<double>& t, double* j) {
            const double u = x - t[2];
            const double p = std::pow(u, -t[3]);
            j[0] = 1.0;
            j[1] = p;
            j[2] = t[1] * t[3] * std::pow(u, -t[3] - 1.0);
            j[3] = -t[1] * std::log(u) * p;
        };
    } else if (name == "power_offset_sq") {
        m.n_params = 4;  // a + b/(x^2-c)^d
        m.eval = [](double x, const std::vector<double>& t) {
            return t[0] + t[1] * std::pow(x * x - t[2], -t[3]);
        };
        m.jacobian = [](double x, const std::vector<double>& t, double* j) {
            const double u = x * x - t[2];
            const double p = std::pow(u, -t[3]);
            j[0] = 1.0;
            j[1] = p;
            j[2] = t[1] * t[3] * std::pow(u, -t[3] - 1.0);
            j[3] = -t[1] * std::log(u) * p;
        };
    } else if (name == "reciprocal_linear") {
        m.n_params = 2;  // 1/(a + b x)
        m.eval = [](double x, const std::vector<double>& t) { return 1.0 / (t[0] + t[1] * x); };
        m.jacobian = [](double x, const std::vector<double>& t, double* j) {
            const double d = t[0] + t[1] * x;
            j[0] = -1.0 / (d * d);
            j[1] = -x / (d * d);
        };
    } else if (name == "exp_offset") {
        m.n_params = 3;  // a + b e^{c x}
        m.eval = [](double x, const std::vector<double>& t) {
            return t[0] + t[1] * std::exp(t[2] * x);
        };
        m.jacobian = [](double x, const std::vector<double>& t, double* j) {
            const double e = std::exp(t[2] * x);
            j[0] = 1.0;
            j[1] = e;
            j[2] = t[1] * x * e;
        };
    } else if (name == "squared_linear") {
        m.n_params = 2;  // (a + b x)^2
        m.eval = [](double x, const std::vector<double>& t) {
            const double u = t[0] + t[1] * x;
            return u * u;
        };
        m.jacobian = [](double x, const std::vector<double>& t, double* j) {
            const double u = t[0] + t[1] * x;
            j[0] = 2.0 * u;
            j[1] = 2.0 * x * u;
        };
    } else {
        throw DomainError("unknown fit model '" + name + "'");
    }
    return m;
}

namespace {

// residual vector; returns false when the model leaves its domain
bool residuals(const Curve& d, const FitModel& m, const std::vector<double>& t,
               Eigen::VectorXd& r) {
    const int n = static_cast<int>(d.x.size());
    r.resize(n);
    for (int i = 0; i < n; ++i) {
        const double v = m.eval(d.x[i], t);
        if (!std::isfinite(v)) return false;
        r(i) = v - d.y[i];
    }
    return true;
}

void jacobian_matrix(const Curve& d, const FitModel& m, const std::vector<double>& t,
                     Eigen::MatrixXd& jac) {
    const int n = static_cast<int>(d.x.size());
    const int np = m.n_params;
    jac.resize(n, np);
    if (m.jacobian) {
        std::vector<double> row(np);
        for (int i = 0; i < n; ++i) {
            m.jacobian(d.x[i], t, row.data());
            for (int k = 0; k < np; ++k) jac(i, k) = row[k];
        }
        return;
    }
    // forward-mode finite differences
    std::vector<double> tp = t;
    for (int k = 0; k < np; ++k) {
        const double h = std::max(1e-7, 1e-7 * std::abs(t[k]));
        tp[k] = t[k] + h;
        for (int i = 0; i < n; ++i)
            jac(i, k) = (m.eval(d.x[i], tp) - m.eval(d.x[i], t)) / h;
        tp[k] = t[k];
    }
}

}  // namespace

FitResult fit_model(const Curve& data, const FitModel& model, std::vector<double> initial) {
    const int n = static_cast<int>(data.x.size());
    if (static_cast<int>(initial.size()) != model.n_params)
        throw DomainError("fit_model: initial guess size mismatch for model " + model.name);
    if (n < model.n_params + 1)
        throw DomainError("fit_model: need at least n_params+1 points");

    std::vector<double> t = initial;
    Eigen::VectorXd r;
    if (!residuals(data, model, t, r))
        throw DomainError("fit_model: model undefined at the initial guess");
    double cost = r.squaredNorm();

    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    const int max_iter = 400;

    Eigen::MatrixXd jac;
    for (; iter < max_iter; ++iter) {
        jacobian_matrix(data, model, t, jac);
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd jtr = jac.transpose() * r;

        bool stepped = false;
        for (int tries = 0; tries < 25 && !stepped; ++tries) {
            Eigen::MatrixXd a = jtj;
            for (int k = 0; k < model.n_params; ++k)
                a(k, k) += lambda * std::max(jtj(k, k), 1e-12);
            const Eigen::VectorXd delta = a.ldlt().solve(-jtr);

            std::vector<double> tn(t);
            double max_rel = 0.0;
            for (int k = 0; k < model.n_params; ++k) {
                tn[k] = t[k] + delta(k);
                max_rel = std::max(max_rel,
                                   std::abs(delta(k)) / std::max(1e-30, std::abs(t[k])));
            }
            Eigen::VectorXd rn;
            if (residuals(data, model, tn, rn) && rn.squaredNorm() < cost) {
                t = tn;
                r = rn;
                cost = rn.squaredNorm();
                lambda = std::max(lambda / 3.0, 1e-14);
                stepped = true;
                if (max_rel < 1e-10) converged = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e12) break;
            }
        }
        if (converged || !stepped) break;
    }

    FitResult out;
    out.model_name = model.name;
    out.parameters = t;
    out.residual_rms = std::sqrt(cost / n);
    out.converged = converged;
    out.iterations = iter;
    return out;
}

CutQuantity cut_quantity_from_string(const std::string& s) {
    if (s == "g11") return CutQuantity::G11;
    if (s == "g12") return CutQuantity::G12;
    if (s == "g22") return CutQuantity::G22;
    if (s == "R" || s == "r") return CutQuantity::R;
    throw DomainError("unknown cut quantity '" + s + "'");
}

std::string to_string(CutQuantity q) {
    switch (q) {
        case CutQuantity::G11: return "g11";
        case CutQuantity::G12: return "g12";
        case CutQuantity::G22: return "g22";
        case CutQuantity::R: return "R";
    }
    return "?";
}

namespace {

double pick(const QgtPoint& p, CutQuantity q) {
    switch (q) {
        case CutQuantity::G11: return p.g11;
        case CutQuantity::G12: return p.g12;
        case CutQuantity::G22: return p.g22;
        default: throw DomainError("pick: R handled elsewhere");
    }
}

Curve metric_cut(SpinMagnitude j, const CutSpec& cut, CutQuantity q, double lo, double hi,
                 int count) {
    GridSpec grid;
    grid.omega_x = {lo, hi, count};
    grid.xi_y = {cut.xi_y, cut.xi_y, 1};
    const QgtField f = qgt_mesh(j, grid, cut.state, cut.method, 1);
    Curve c;
    c.quantity = to_string(q);
    c.j = j.j();
    c.fixed_xi_y = cut.xi_y;
    for (int i = 0; i < count; ++i) {
        if (!f.nodes[i].ok()) continue;  // failed nodes drop out of the cut
        c.x.push_back(grid.omega_x.value(i));
        c.y.push_back(pick(f.nodes[i].point, q));
    }
    return c;
}

Curve r_cut(SpinMagnitude j, const CutSpec& cut, double lo, double hi, int count) {
    GridSpec grid;
    grid.omega_x = {lo, hi, count};
    grid.xi_y = {cut.xi_y - 2.0 * cut.r_step, cut.xi_y + 2.0 * cut.r_step, 5};
    const QgtField f = qgt_mesh(j, grid, cut.state, cut.method, 1);
    const CurvatureField rf = scalar_curvature_field(f, 1);
    Curve c;
    c.quantity = "R";
    c.j = j.j();
    c.fixed_xi_y = cut.xi_y;
    for (int i = 2; i < count - 2; ++i) {
        const CurvatureNode& node = rf.nodes[rf.grid.node(i, 2)];
        if (!node.ok()) continue;
        c.x.push_back(grid.omega_x.value(i));
        c.y.push_back(node.r);
    }
    return c;
}

ScalingRow study_one(SpinMagnitude j, const CutSpec& cut, CutQuantity q) {
    ScalingRow row;
    row.j = j.j();
    const ExtremumKind kind = q == CutQuantity::G12 ? ExtremumKind::Min : ExtremumKind::Max;

    if (cut.at_point) {
        row.location = cut.omega_x0;
        auto point_at = [&](const SpinOperators& ops, const ModelParams& mp) {
            if (cut.method == QgtMethod::MultiPrecision) return qgt_multiprecision(j, mp, cut.state);
            if (cut.method == QgtMethod::Overlap) return qgt_overlap_oracle(ops, mp, cut.state);
            if (cut.method == QgtMethod::Perturbative) return qgt_perturbative(ops, mp, cut.state);
            return qgt_auto(ops, mp, cut.state);
        };
        const SpinOperators ops = build_spin_operators(j);
        if (q == CutQuantity::R) {
            MetricFunction metric = [&](double x1, double x2) {
                const QgtPoint p = point_at(ops, ModelParams{1.0, x1, x2});
                return Metric2{p.g11, p.g12, p.g22};
            };
            row.value = scalar_curvature_at(metric, cut.omega_x0, cut.xi_y, cut.r_step);
        } else {
            row.value = pick(point_at(ops, ModelParams{1.0, cut.omega_x0, cut.xi_y}), q);
        }
        return row;
    }

    // two-pass peak hunt: coarse window scan, then a refined scan around the
    // discrete peak
    auto cut_fn = [&](double lo, double hi, int count) {
        return q == CutQuantity::R ? r_cut(j, cut, lo, hi, count)
                                   : metric_cut(j, cut, lo, hi, count);
    };
    const Curve coarse = cut_fn(cut.window_lo, cut.window_hi, cut.coarse_count);
    const Extremum e0 = extract_extremum(coarse, kind);
    const double step = (cut.window_hi - cut.window_lo) / (cut.coarse_count - 1);
    const double pad = q == CutQuantity::R ? 3.0 * step : 2.0 * step;
    const Curve fine = cut_fn(e0.location - pad, e0.location + pad, cut.refine_count);
    const Extremum e1 = extract_extremum(fine, kind);
    row.location = e1.location;
    row.value = e1.value;
    return row;
}

}  // namespace

std::vector<ScalingRow> scaling_study(const std::vector<double>& j_list, const CutSpec& cut,
                                      CutQuantity quantity, int threads) {
    const int total = static_cast<int>(j_list.size());
    std::vector<ScalingRow> rows(total);
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, total);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
            try {
                rows[k] = study_one(SpinMagnitude(j_list[k]), cut, quantity);
            } catch (const std::exception& e) {
                rows[k].j = j_list[k];
                rows[k].location = rows[k].value = std::numeric_limits<double>::quiet_NaN();
                rows[k].status = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return rows;
}

}  // namespace lmg
