#include "lmg/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lmg {

namespace {

const char* kFieldHeader = "omega_x,xi_y,g11,g12,g22,f12,det_g,min_gap,status";
const char* kCurvatureHeader = "omega_x,xi_y,R,status";

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open '" + path + "' for writing");
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open '" + path + "' for reading");
    return is;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, const char* column) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SchemaError("bad value '" + s + "' in column " + column);
    }
}

// a status cell must not contain the separator
std::string sanitize_status(std::string s) {
    for (char& ch : s)
        if (ch == ',' || ch == '\n') ch = ';';
    return s;
}

void grid_to_json(nlohmann::json& j, const GridSpec& g) {
    j["grid"] = {{"omega_x", {{"start", g.omega_x.start}, {"stop", g.omega_x.stop}, {"count", g.omega_x.count}}},
                 {"xi_y", {{"start", g.xi_y.start}, {"stop", g.xi_y.stop}, {"count", g.xi_y.count}}},
                 {"omega", g.omega}};
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

FileFormat file_format_from_string(const std::string& s) {
    if (s == "csv") return FileFormat::Csv;
    if (s == "json") return FileFormat::Json;
    throw DomainError("unknown format '" + s + "' (expected csv or json)");
}

void write_field(std::ostream& os, const QgtField& f, FileFormat fmt) {
    if (fmt == FileFormat::Json) {
        nlohmann::json j;
        j["j"] = f.j.j();
        grid_to_json(j, f.grid);
        auto& rows = j["rows"] = nlohmann::json::array();
        for (int iy = 0; iy < f.grid.xi_y.count; ++iy)
            for (int ix = 0; ix < f.grid.omega_x.count; ++ix) {
                const QgtNode& n = f.nodes[f.grid.node(ix, iy)];
                rows.push_back({{"omega_x", f.grid.omega_x.value(ix)},
                                {"xi_y", f.grid.xi_y.value(iy)},
                                {"g11", n.point.g11},
                                {"g12", n.point.g12},
                                {"g22", n.point.g22},
                                {"f12", n.point.f12},
                                {"det_g", n.point.det_g},
                                {"min_gap", n.point.min_gap},
                                {"status", n.ok() ? "ok" : n.status}});
            }
        os << j.dump(1) << '\n';
        return;
    }
    os << kFieldHeader << '\n';
    for (int iy = 0; iy < f.grid.xi_y.count; ++iy)
        for (int ix = 0; ix < f.grid.omega_x.count; ++ix) {
            const QgtNode& n = f.nodes[f.grid.node(ix, iy)];
            os << format_double(f.grid.omega_x.value(ix)) << ','
               << format_double(f.grid.xi_y.value(iy)) << ',' << format_double(n.point.g11) << ','
               << format_double(n.point.g12) << ',' << format_double(n.point.g22) << ','
               << format_double(n.point.f12) << ',' << format_double(n.point.det_g) << ','
               << format_double(n.point.min_gap) << ','
               << (n.ok() ? "ok" : sanitize_status(n.status)) << '\n';
        }
}

void write_field(const std::string& path, const QgtField& f, FileFormat fmt) {
    auto os = open_out(path);
    write_field(os, f, fmt);
}

QgtField read_field(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw SchemaError("empty field file");
    {
        const auto want = split_csv(kFieldHeader);
        const auto got = split_csv(line);
        for (size_t c = 0; c < want.size(); ++c)
            if (c >= got.size() || got[c] != want[c])
                throw SchemaError("field file header mismatch: missing or wrong column '" +
                                  want[c] + "'");
        if (got.size() != want.size())
            throw SchemaError("field file header mismatch: extra column '" + got[want.size()] +
                              "'");
    }

    struct Row {
        double wx, xy;
        QgtNode node;
    };
    std::vector<Row> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 9)
            throw SchemaError("field file row " + std::to_string(lineno) + " has " +
                              std::to_string(cells.size()) + " cells, expected 9");
        Row r;
        r.wx = parse_double(cells[0], "omega_x");
        r.xy = parse_double(cells[1], "xi_y");
        r.node.point.g11 = parse_double(cells[2], "g11");
        r.node.point.g12 = parse_double(cells[3], "g12");
        r.node.point.g22 = parse_double(cells[4], "g22");
        r.node.point.f12 = parse_double(cells[5], "f12");
        r.node.point.det_g = parse_double(cells[6], "det_g");
        r.node.point.min_gap = parse_double(cells[7], "min_gap");
        r.node.status = cells[8];
        rows.push_back(std::move(r));
    }
    if (rows.empty()) throw SchemaError("field file has no data rows");

    // reconstruct the rectangular grid: omega_x fastest, row-major
    std::vector<double> wxs;
    for (const Row& r : rows) {
        if (!wxs.empty() && r.wx == wxs.front()) break;
        wxs.push_back(r.wx);
    }
    const int nx = static_cast<int>(wxs.size());
    if (nx == 0 || rows.size() % nx != 0)
        throw SchemaError("field file rows do not form a rectangular grid");
    const int ny = static_cast<int>(rows.size()) / nx;

    std::vector<double> xys;
    for (int iy = 0; iy < ny; ++iy) xys.push_back(rows[iy * nx].xy);
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const Row& r = rows[iy * nx + ix];
            if (r.wx != wxs[ix] || r.xy != xys[iy])
                throw SchemaError("field file is not a row-major rectangular grid at data row " +
                                  std::to_string(iy * nx + ix + 1));
        }
    for (int i = 1; i < nx; ++i)
        if (!(wxs[i] > wxs[i - 1])) throw SchemaError("omega_x values not strictly increasing");
    for (int i = 1; i < ny; ++i)
        if (!(xys[i] > xys[i - 1])) throw SchemaError("xi_y values not strictly increasing");
    // curvature on a read-back field requires uniform spacing
    auto uniform = [](const std::vector<double>& v) {
        if (v.size() < 2) return true;
        const double h = (v.back() - v.front()) / (static_cast<double>(v.size()) - 1);
        for (size_t i = 1; i < v.size(); ++i)
            if (std::abs(v[i] - v[i - 1] - h) > 1e-9 * std::max(1.0, std::abs(h))) return false;
        return true;
    };
    if (!uniform(wxs) || !uniform(xys))
        throw SchemaError("field file grid is not uniformly spaced");

    QgtField f{SpinMagnitude(0.5), StateSelector::ground(), GridSpec{}, {}};
    f.grid.omega_x = {wxs.front(), wxs.back(), nx};
    f.grid.xi_y = {xys.front(), xys.back(), ny};
    f.nodes.resize(rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
        f.nodes[k] = rows[k].node;
        f.nodes[k].point.params = ModelParams{1.0, rows[k].wx, rows[k].xy};
    }
    return f;
}

QgtField read_field(const std::string& path) {
    auto is = open_in(path);
    return read_field(is);
}

void write_curvature(std::ostream& os, const CurvatureField& f, FileFormat fmt) {
    if (fmt == FileFormat::Json) {
        nlohmann::json j;
        grid_to_json(j, f.grid);
        auto& rows = j["rows"] = nlohmann::json::array();
        for (int iy = 0; iy < f.grid.xi_y.count; ++iy)
            for (int ix = 0; ix < f.grid.omega_x.count; ++ix) {
                const CurvatureNode& n = f.nodes[f.grid.node(ix, iy)];
                rows.push_back({{"omega_x", f.grid.omega_x.value(ix)},
                                {"xi_y", f.grid.xi_y.value(iy)},
                                {"R", n.r},
                                {"status", n.status}});
            }
        os << j.dump(1) << '\n';
        return;
    }
    os << kCurvatureHeader << '\n';
    for (int iy = 0; iy < f.grid.xi_y.count; ++iy)
        for (int ix = 0; ix < f.grid.omega_x.count; ++ix) {
            const CurvatureNode& n = f.nodes[f.grid.node(ix, iy)];
            os << format_double(f.grid.omega_x.value(ix)) << ','
               << format_double(f.grid.xi_y.value(iy)) << ',' << format_double(n.r) << ','
               << sanitize_status(n.status) << '\n';
        }
}

void write_curvature(const std::string& path, const CurvatureField& f, FileFormat fmt) {
    auto os = open_out(path);
    write_curvature(os, f, fmt);
}

void write_dos(std::ostream& os, const DosHistogram& h, FileFormat fmt) {
    if (fmt == FileFormat::Json) {
        nlohmann::json j = nlohmann::json::array();
        for (size_t b = 0; b + 1 < h.bin_edges.size(); ++b)
            j.push_back({{"bin_left", h.bin_edges[b]},
                         {"bin_right", h.bin_edges[b + 1]},
                         {"count", h.counts[b]}});
        os << j.dump(1) << '\n';
        return;
    }
    os << "bin_left,bin_right,count\n";
    for (size_t b = 0; b + 1 < h.bin_edges.size(); ++b)
        os << format_double(h.bin_edges[b]) << ',' << format_double(h.bin_edges[b + 1]) << ','
           << h.counts[b] << '\n';
}

void write_dos(const std::string& path, const DosHistogram& h, FileFormat fmt) {
    auto os = open_out(path);
    write_dos(os, h, fmt);
}

void write_curve(std::ostream& os, const Curve& c) {
    os << "x," << (c.quantity.empty() ? "y" : c.quantity) << '\n';
    for (size_t i = 0; i < c.x.size(); ++i)
        os << format_double(c.x[i]) << ',' << format_double(c.y[i]) << '\n';
}

Curve read_curve(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw SchemaError("empty curve file");
    auto header = split_csv(line);
    if (header.size() != 2) throw SchemaError("curve file needs exactly two columns");
    Curve c;
    c.quantity = header[1];
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != 2)
            throw SchemaError("curve row " + std::to_string(lineno) + " needs two cells");
        c.x.push_back(parse_double(cells[0], "x"));
        c.y.push_back(parse_double(cells[1], header[1].c_str()));
    }
    return c;
}

Curve read_curve(const std::string& path) {
    auto is = open_in(path);
    return read_curve(is);
}

}  // namespace lmg
