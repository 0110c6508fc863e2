#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lmg/io.hpp"

using namespace lmg;

namespace {

QgtField synthetic_field(int nx, int ny, unsigned seed, bool with_failure) {
    GridSpec grid;
    grid.omega_x = {-1.0, 1.0, nx};
    grid.xi_y = {0.5, 2.0, ny};
    QgtField f{SpinMagnitude(4.0), StateSelector::ground(), grid, {}};
    f.nodes.resize(grid.size());
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (auto& n : f.nodes) {
        n.point.g11 = std::exp(u(rng));
        n.point.g12 = 0.1 * u(rng);
        n.point.g22 = std::exp(u(rng));
        n.point.f12 = 0.0;
        n.point.det_g = n.point.g11 * n.point.g22 - n.point.g12 * n.point.g12;
        n.point.min_gap = std::abs(u(rng)) + 1e-3;
    }
    if (with_failure) {
        auto& bad = f.nodes[grid.node(1, 1)];
        bad.status = "qgt_perturbative: level gap under guard";
        bad.point.g11 = bad.point.g12 = bad.point.g22 = bad.point.f12 = bad.point.det_g =
            bad.point.min_gap = std::numeric_limits<double>::quiet_NaN();
    }
    return f;
}

}  // namespace

TEST_CASE("field csv round-trip is the identity, including failed rows") {
    const QgtField f = synthetic_field(3, 3, 42, true);
    std::stringstream ss;
    write_field(ss, f);
    const QgtField g = read_field(ss);
    REQUIRE(g.nodes.size() == f.nodes.size());
    CHECK(g.grid.omega_x.count == 3);
    CHECK(g.grid.xi_y.count == 3);
    for (size_t k = 0; k < f.nodes.size(); ++k) {
        if (f.nodes[k].ok()) {
            CHECK(g.nodes[k].point.g11 == f.nodes[k].point.g11);  // bitwise via 17 digits
            CHECK(g.nodes[k].point.g12 == f.nodes[k].point.g12);
            CHECK(g.nodes[k].point.g22 == f.nodes[k].point.g22);
            CHECK(g.nodes[k].point.min_gap == f.nodes[k].point.min_gap);
        } else {
            CHECK_FALSE(g.nodes[k].ok());
            CHECK(std::isnan(g.nodes[k].point.g11));
        }
    }
}

TEST_CASE("field header is exact and missing columns are named") {
    std::stringstream ss;
    ss << "omega_x,xi_y,g11,g12,g22,det_g,min_gap,status\n";  // f12 missing
    try {
        (void)read_field(ss);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("f12") != std::string::npos);
    }
}

TEST_CASE("non-rectangular input is rejected") {
    const QgtField f = synthetic_field(3, 2, 7, false);
    std::stringstream ss;
    write_field(ss, f);
    std::string text = ss.str();
    // drop the last data row
    text.erase(text.rfind('\n', text.size() - 2) + 1);
    std::stringstream cut(text);
    CHECK_THROWS_AS((void)read_field(cut), SchemaError);
}

TEST_CASE("17-digit serialization round-trips doubles exactly") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 1000; ++it) {
        const double v = u(rng) * std::pow(10.0, (it % 61) - 30);
        const double back = std::stod(format_double(v));
        CHECK(back == v);
    }
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("json mirror carries the same rows") {
    const QgtField f = synthetic_field(2, 2, 5, false);
    std::stringstream ss;
    write_field(ss, f, FileFormat::Json);
    const std::string text = ss.str();
    CHECK(text.find("\"g11\"") != std::string::npos);
    CHECK(text.find("\"rows\"") != std::string::npos);
    CHECK(text.find("\"status\"") != std::string::npos);
}

TEST_CASE("curvature and dos writers emit the documented headers") {
    CurvatureField cf;
    cf.grid.omega_x = {0.0, 1.0, 2};
    cf.grid.xi_y = {0.0, 1.0, 1};
    cf.nodes = {{1.5, "ok"}, {NAN, "boundary"}};
    std::stringstream ss;
    write_curvature(ss, cf);
    CHECK(ss.str().rfind("omega_x,xi_y,R,status\n", 0) == 0);
    CHECK(ss.str().find("boundary") != std::string::npos);

    DosHistogram h;
    h.bin_edges = {0.0, 0.5, 1.0};
    h.counts = {3, 4};
    std::stringstream ds;
    write_dos(ds, h);
    CHECK(ds.str().rfind("bin_left,bin_right,count\n", 0) == 0);
}

TEST_CASE("curve round-trip") {
    Curve c;
    c.quantity = "g22";
    c.x = {1.0, 2.0, 3.0};
    c.y = {0.1, 0.2, 0.30000000000000004};
    std::stringstream ss;
    write_curve(ss, c);
    const Curve d = read_curve(ss);
    CHECK(d.quantity == "g22");
    REQUIRE(d.x.size() == 3);
    CHECK(d.y[2] == c.y[2]);
}
