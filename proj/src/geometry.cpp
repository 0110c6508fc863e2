#include "lmg/geometry.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace lmg {

namespace {

double checked_sqrt_det(const Metric2& g, double x1, double x2) {
    const double scale = std::max({std::abs(g.g11), std::abs(g.g12), std::abs(g.g22)});
    const double det = g.det();
    if (!(det > 1e-14 * scale * scale))
        throw SingularMetric("metric determinant " + std::to_string(det) +
                             " at (" + std::to_string(x1) + "," + std::to_string(x2) +
                             ") is at or below the singularity floor");
    return std::sqrt(det);
}

}  // namespace

double scalar_curvature_at(const MetricFunction& metric, double x1, double x2, double h) {
    if (!(h > 0.0)) throw DomainError("scalar_curvature_at: h must be positive");

    // 13-point stencil: center, axis points out to 2h, and the diagonals.
    // Offsets are in units of h.
    struct P {
        int i, k;
    };
    static constexpr P pts[] = {{0, 0},  {1, 0},  {-1, 0}, {0, 1},  {0, -1}, {2, 0}, {-2, 0},
                                {0, 2},  {0, -2}, {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    Metric2 g[5][5];
    bool have[5][5] = {};
    for (const auto& p : pts) {
        g[p.i + 2][p.k + 2] = metric(x1 + p.i * h, x2 + p.k * h);
        have[p.i + 2][p.k + 2] = true;
    }
    auto at = [&](int i, int k) -> const Metric2& { return g[i + 2][k + 2]; };
    auto sg = [&](int i, int k) {
        return checked_sqrt_det(at(i, k), x1 + i * h, x2 + k * h);
    };
    (void)have;

    // inner central derivatives of the components at offset (i,k)
    auto d1g11 = [&](int i, int k) { return (at(i + 1, k).g11 - at(i - 1, k).g11) / (2 * h); };
    auto d2g11 = [&](int i, int k) { return (at(i, k + 1).g11 - at(i, k - 1).g11) / (2 * h); };
    auto d1g12 = [&](int i, int k) { return (at(i + 1, k).g12 - at(i - 1, k).g12) / (2 * h); };
    auto d1g22 = [&](int i, int k) { return (at(i + 1, k).g22 - at(i - 1, k).g22) / (2 * h); };

    auto t1 = [&](int i, int k) {
        const Metric2& m = at(i, k);
        const double s = sg(i, k);
        return m.g12 / (m.g11 * s) * d2g11(i, k) - d1g22(i, k) / s;
    };
    auto t2 = [&](int i, int k) {
        const Metric2& m = at(i, k);
        const double s = sg(i, k);
        return 2.0 * d1g12(i, k) / s - d2g11(i, k) / s - m.g12 / (m.g11 * s) * d1g11(i, k);
    };

    const double a = (t1(1, 0) - t1(-1, 0)) / (2 * h);
    const double b = (t2(0, 1) - t2(0, -1)) / (2 * h);
    return (a + b) / sg(0, 0);
}

MetricChecks metric_checks(const Metric2& g) {
    MetricChecks c;
    c.det = g.det();
    const double tr = g.g11 + g.g22;
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - c.det));
    c.eig_min = tr / 2.0 - disc;
    c.eig_max = tr / 2.0 + disc;
    c.positive_definite = c.eig_min > 0.0;
    return c;
}

CurvatureField scalar_curvature_field(const QgtField& f, int threads) {
    const int nx = f.grid.omega_x.count;
    const int ny = f.grid.xi_y.count;
    if (nx < 5 || ny < 5)
        throw DomainError("scalar_curvature_field: need at least 5 nodes per axis");
    const double h1 = f.grid.omega_x.step();
    const double h2 = f.grid.xi_y.step();

    CurvatureField out{f.grid, std::vector<CurvatureNode>(f.grid.size())};

    auto gat = [&](int ix, int iy) -> const QgtPoint& { return f.nodes[f.grid.node(ix, iy)].point; };
    auto ok = [&](int ix, int iy) { return f.nodes[f.grid.node(ix, iy)].ok(); };
    auto metric = [&](int ix, int iy) {
        const QgtPoint& p = gat(ix, iy);
        return Metric2{p.g11, p.g12, p.g22};
    };

    // the nested-difference stencil of one node
    static constexpr int offs[][2] = {{0, 0},  {1, 0},  {-1, 0}, {0, 1},  {0, -1}, {2, 0}, {-2, 0},
                                      {0, 2},  {0, -2}, {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};

    const int total = f.grid.size();
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, total);

    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int k = next.fetch_add(1); k < total; k = next.fetch_add(1)) {
            const int ix = k % nx;
            const int iy = k / nx;
            CurvatureNode& node = out.nodes[k];
            node.r = std::numeric_limits<double>::quiet_NaN();
            if (ix < 2 || ix >= nx - 2 || iy < 2 || iy >= ny - 2) {
                node.status = "boundary";
                continue;
            }
            bool input_ok = true;
            for (const auto& o : offs)
                if (!ok(ix + o[0], iy + o[1])) input_ok = false;
            if (!input_ok) {
                node.status = "failed-input";
                continue;
            }
            try {
                auto d1g = [&](int i, int q, double Metric2::* c) {
                    return (metric(i + 1, q).*c - metric(i - 1, q).*c) / (2 * h1);
                };
                auto d2g = [&](int i, int q, double Metric2::* c) {
                    return (metric(i, q + 1).*c - metric(i, q - 1).*c) / (2 * h2);
                };
                auto sg = [&](int i, int q) {
                    return checked_sqrt_det(metric(i, q), f.grid.omega_x.value(i),
                                            f.grid.xi_y.value(q));
                };
                auto t1 = [&](int i, int q) {
                    const Metric2 m = metric(i, q);
                    const double s = sg(i, q);
                    return m.g12 / (m.g11 * s) * d2g(i, q, &Metric2::g11) -
                           d1g(i, q, &Metric2::g22) / s;
                };
                auto t2 = [&](int i, int q) {
                    const Metric2 m = metric(i, q);
                    const double s = sg(i, q);
                    return 2.0 * d1g(i, q, &Metric2::g12) / s - d2g(i, q, &Metric2::g11) / s -
                           m.g12 / (m.g11 * s) * d1g(i, q, &Metric2::g11);
                };
                const double a = (t1(ix + 1, iy) - t1(ix - 1, iy)) / (2 * h1);
                const double b = (t2(ix, iy + 1) - t2(ix, iy - 1)) / (2 * h2);
                node.r = (a + b) / sg(ix, iy);
                node.status = "ok";
            } catch (const std::exception& e) {
                node.status = std::string("singular: ") + e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace lmg
