// Command-line surface for the LMG quantum-geometry library.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lmg/analysis.hpp"
#include "lmg/coherent.hpp"
#include "lmg/geometry.hpp"
#include "lmg/holstein_primakoff.hpp"
#include "lmg/io.hpp"
#include "lmg/qgt.hpp"
#include "lmg/semiclassical.hpp"
#include "lmg/spectral.hpp"

namespace {

using namespace lmg;

GridAxis parse_range(const std::string& s) {
    GridAxis a;
    double start = 0, stop = 0;
    int count = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &start, &stop, &count) != 3)
        throw CLI::ValidationError("range", "expected start:stop:count, got '" + s + "'");
    if (count < 1) throw CLI::ValidationError("range", "count must be >= 1 in '" + s + "'");
    if (start > stop) throw CLI::ValidationError("range", "start must be <= stop in '" + s + "'");
    a.start = start;
    a.stop = stop;
    a.count = count;
    return a;
}

StateSelector parse_state(const std::string& s) {
    if (s == "ground") return StateSelector::ground();
    if (s == "highest") return StateSelector::highest();
    try {
        size_t pos = 0;
        const int k = std::stoi(s, &pos);
        if (pos == s.size()) return StateSelector::at(k);
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--state", "expected ground, highest or an index, got '" + s + "'");
}

std::ostream& output_for(std::optional<std::ofstream>& holder, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    holder.emplace(path);
    if (!*holder) throw Error("cannot open '" + path + "' for writing");
    return *holder;
}

void print_qgt_point(const QgtPoint& p) {
    auto line = [](const char* name, double v) {
        std::printf("%s = %.12g\n", name, v);
    };
    line("g11", p.g11);
    line("g12", p.g12);
    line("g22", p.g22);
    line("f12", p.f12);
    line("det_g", p.det_g);
    line("min_gap", p.min_gap);
}

std::vector<double> parse_j_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stod(tok));
    }
    if (out.empty()) throw CLI::ValidationError("--j-list", "no values in '" + s + "'");
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"quantum geometric tensor of the extended LMG model"};
    app.require_subcommand(1);

    double j_val = 0.5, omega = 1.0, omega_x = 0.0, xi_y = 0.0;
    std::string out_path, format_str = "csv", state_str = "ground", method_str = "auto";
    int threads = 0;

    auto add_params = [&](CLI::App* cmd, bool with_j = true) {
        if (with_j) cmd->add_option("--j", j_val, "spin magnitude j (half-integer)")->required();
        cmd->add_option("--omega", omega, "energy unit Omega (default 1)");
        cmd->add_option("--omega-x", omega_x, "parameter Omega_x");
        cmd->add_option("--xi-y", xi_y, "parameter xi_y");
    };

    // ---- spectrum ----
    auto* c_spec = app.add_subcommand("spectrum", "full eigenvalue list of H");
    add_params(c_spec);
    c_spec->add_option("--out", out_path, "output file (default stdout)");
    c_spec->add_option("--format", format_str, "csv or json");

    // ---- dos ----
    int bins = 40;
    auto* c_dos = app.add_subcommand("dos", "density-of-states histogram of E/j");
    add_params(c_dos);
    c_dos->add_option("--bins", bins, "number of bins (>= 2)");
    c_dos->add_option("--out", out_path, "output file (default stdout)");
    c_dos->add_option("--format", format_str, "csv or json");

    // ---- qgt ----
    double delta = 1e-4, guard = kDefaultDegeneracyGuard;
    auto* c_qgt = app.add_subcommand("qgt", "QGT at a single parameter point");
    add_params(c_qgt);
    c_qgt->add_option("--state", state_str, "ground, highest or an index");
    c_qgt->add_option("--method", method_str, "perturbative, overlap, mp or auto");
    c_qgt->add_option("--delta", delta, "overlap-oracle displacement");
    c_qgt->add_option("--guard", guard, "relative degeneracy guard");

    // ---- mesh ----
    std::string wx_range, xy_range;
    auto* c_mesh = app.add_subcommand("mesh", "QGT field on a rectangular grid -> FieldFile");
    c_mesh->add_option("--j", j_val, "spin magnitude")->required();
    c_mesh->add_option("--omega", omega, "energy unit Omega");
    c_mesh->add_option("--omega-x", wx_range, "omega_x range start:stop:count")->required();
    c_mesh->add_option("--xi-y", xy_range, "xi_y range start:stop:count")->required();
    c_mesh->add_option("--state", state_str, "ground, highest or an index");
    c_mesh->add_option("--method", method_str, "perturbative, overlap, mp or auto");
    c_mesh->add_option("--threads", threads, "worker threads (0 = hardware)");
    c_mesh->add_option("--out", out_path, "output file")->required();
    c_mesh->add_option("--format", format_str, "csv or json");

    // ---- curvature ----
    std::string in_path;
    auto* c_curv = app.add_subcommand("curvature", "scalar curvature of a FieldFile");
    c_curv->add_option("--in", in_path, "input FieldFile (csv)")->required();
    c_curv->add_option("--out", out_path, "output file")->required();
    c_curv->add_option("--format", format_str, "csv or json");
    c_curv->add_option("--threads", threads, "worker threads");

    // ---- classical ----
    auto* c_cl = app.add_subcommand("classical", "semiclassical layer");
    c_cl->require_subcommand(1);
    auto* c_pts = c_cl->add_subcommand("points", "stationary points with stability");
    add_params(c_pts, false);
    auto* c_lyap = c_cl->add_subcommand("lyapunov", "Lyapunov exponent of x1");
    add_params(c_lyap, false);
    std::string q_range = "-2:2:41", p_range = "-2:2:41";
    auto* c_surf = c_cl->add_subcommand("surface", "energy surface h(Q,P) on a grid");
    add_params(c_surf, false);
    c_surf->add_option("--q", q_range, "Q range start:stop:count");
    c_surf->add_option("--p", p_range, "P range start:stop:count");
    c_surf->add_option("--out", out_path, "output file (default stdout)");
    double theta = -1.0, phi = 0.0;
    auto* c_obs = c_cl->add_subcommand("observables", "coherent-state expectations");
    add_params(c_obs);
    c_obs->add_option("--theta", theta, "polar angle (default: highest-branch angles)");
    c_obs->add_option("--phi", phi, "azimuthal angle");

    // ---- hp ----
    auto* c_hp = app.add_subcommand("hp", "Holstein-Primakoff layer");
    c_hp->require_subcommand(1);
    auto* c_hp_g = c_hp->add_subcommand("ground", "ground-phase closed-form metric");
    add_params(c_hp_g);
    auto* c_hp_s = c_hp->add_subcommand("symmetric", "symmetric-phase closed-form metric");
    add_params(c_hp_s);
    auto* c_hp_b = c_hp->add_subcommand("broken", "broken-phase Gaussian metric");
    add_params(c_hp_b);
    auto* c_hp_be = c_hp->add_subcommand("berry", "broken-phase Berry curvature");
    add_params(c_hp_be);
    auto* c_hp_em = c_hp->add_subcommand("emax", "per-spin maximal energy");
    add_params(c_hp_em, false);

    // ---- coherent ----
    auto* c_coh = app.add_subcommand("coherent", "Bloch coherent-state layer");
    c_coh->require_subcommand(1);
    double coh_theta = 0.0, coh_phi = 0.0;
    auto* c_coh_st = c_coh->add_subcommand("state", "coefficient vector of |theta,phi>");
    c_coh_st->add_option("--j", j_val, "spin magnitude")->required();
    c_coh_st->add_option("--theta", coh_theta, "polar angle")->required();
    c_coh_st->add_option("--phi", coh_phi, "azimuthal angle");
    c_coh_st->add_option("--out", out_path, "output file (default stdout)");
    std::string branch_str = "broken";
    bool closed_form = false;
    auto* c_coh_q = c_coh->add_subcommand("qgt", "coherent-state QGT");
    add_params(c_coh_q);
    c_coh_q->add_option("--branch", branch_str, "broken or symmetric");
    c_coh_q->add_flag("--closed-form", closed_form, "use the closed forms");
    double curv_h = 2e-3;
    auto* c_coh_c = c_coh->add_subcommand("curvature", "scalar curvature of the coherent metric");
    add_params(c_coh_c);
    c_coh_c->add_option("--h", curv_h, "finite-difference step");

    // ---- peaks ----
    std::string quantity_str = "g22", j_list_str, window_str = "3.3:4.85:61";
    double at_omega_x = std::numeric_limits<double>::quiet_NaN();
    double r_step = 0.02;
    auto* c_peaks = app.add_subcommand("peaks", "peak location/value table over j");
    c_peaks->add_option("--quantity", quantity_str, "g11, g12, g22 or R")->required();
    c_peaks->add_option("--j-list", j_list_str, "comma-separated j values")->required();
    c_peaks->add_option("--xi-y", xi_y, "fixed xi_y of the cut")->required();
    c_peaks->add_option("--state", state_str, "ground, highest or an index");
    c_peaks->add_option("--method", method_str, "perturbative, overlap, mp or auto");
    c_peaks->add_option("--window", window_str, "scan window start:stop:count");
    c_peaks->add_option("--at-omega-x", at_omega_x, "value-at-point mode at this omega_x");
    c_peaks->add_option("--r-step", r_step, "finite-difference step for R");
    c_peaks->add_option("--threads", threads, "worker threads");
    c_peaks->add_option("--out", out_path, "output file (default stdout)");

    // ---- fit ----
    std::string model_str, init_str;
    auto* c_fit = app.add_subcommand("fit", "least-squares fit of a curve file");
    c_fit->add_option("--in", in_path, "input curve csv (x,y)")->required();
    c_fit->add_option("--model", model_str,
                      "linear, power_offset, power_offset_sq, reciprocal_linear, exp_offset, "
                      "squared_linear")
        ->required();
    c_fit->add_option("--init", init_str, "comma-separated initial parameters")->required();

    // ---- compare ----
    auto* c_cmp = app.add_subcommand("compare",
                                     "numeric vs Holstein-Primakoff vs coherent metric rows");
    c_cmp->add_option("--j", j_val, "spin magnitude")->required();
    c_cmp->add_option("--xi-y", xi_y, "fixed xi_y")->required();
    c_cmp->add_option("--omega-x", wx_range, "omega_x range start:stop:count")->required();
    c_cmp->add_option("--state", state_str, "ground or highest");
    c_cmp->add_option("--method", method_str, "numeric method (default auto)");
    c_cmp->add_option("--out", out_path, "output file (default stdout)");

    app.parse(argc, argv);  // ParseError propagates to main: usage -> exit 2

    std::optional<std::ofstream> ofs;
    const FileFormat fmt = file_format_from_string(format_str);

    if (*c_spec) {
        const SpinMagnitude j(j_val);
        const ModelParams p{omega, omega_x, xi_y};
        const Spectrum s = diagonalize(build_hamiltonian(build_spin_operators(j), p));
        std::ostream& os = output_for(ofs, out_path);
        if (fmt == FileFormat::Csv) {
            os << "k,energy\n";
            for (int k = 0; k < s.energies.size(); ++k)
                os << k << ',' << format_double(s.energies(k)) << '\n';
        } else {
            os << "[";
            for (int k = 0; k < s.energies.size(); ++k)
                os << (k ? "," : "") << format_double(s.energies(k));
            os << "]\n";
        }
        return 0;
    }
    if (*c_dos) {
        const SpinMagnitude j(j_val);
        const ModelParams p{omega, omega_x, xi_y};
        const Spectrum s = diagonalize(build_hamiltonian(build_spin_operators(j), p));
        const DosHistogram h = density_of_states(s, j, bins);
        write_dos(output_for(ofs, out_path), h, fmt);
        return 0;
    }
    if (*c_qgt) {
        const SpinMagnitude j(j_val);
        const ModelParams p{omega, omega_x, xi_y};
        const StateSelector sel = parse_state(state_str);
        const QgtMethod method = qgt_method_from_string(method_str);
        QgtPoint q;
        switch (method) {
            case QgtMethod::Perturbative:
                q = qgt_perturbative(build_spin_operators(j), p, sel, guard);
                break;
            case QgtMethod::Overlap:
                q = qgt_overlap_oracle(build_spin_operators(j), p, sel, delta);
                break;
            case QgtMethod::MultiPrecision:
                q = qgt_multiprecision(j, p, sel);
                break;
            case QgtMethod::Auto:
                q = qgt_auto(build_spin_operators(j), p, sel, guard);
                break;
        }
        print_qgt_point(q);
        return 0;
    }
    if (*c_mesh) {
        const SpinMagnitude j(j_val);
        GridSpec grid;
        grid.omega_x = parse_range(wx_range);
        grid.xi_y = parse_range(xy_range);
        grid.omega = omega;
        const QgtField f = qgt_mesh(j, grid, parse_state(state_str),
                                    qgt_method_from_string(method_str), threads);
        write_field(out_path, f, fmt);
        return 0;
    }
    if (*c_curv) {
        const QgtField f = read_field(in_path);
        const CurvatureField r = scalar_curvature_field(f, threads);
        write_curvature(out_path, r, fmt);
        return 0;
    }
    if (*c_pts) {
        const ModelParams p{omega, omega_x, xi_y};
        for (const StationaryPoint& sp : stationary_points(p)) {
            std::printf("%-3s Q=%.12g P=%.12g theta=%.12g phi=%.12g energy=%.12g %s lyapunov=%.12g\n",
                        to_string(sp.label).c_str(), sp.point.q, sp.point.p, sp.point.theta,
                        sp.point.phi, sp.energy, to_string(sp.stability).c_str(), sp.lyapunov);
        }
        return 0;
    }
    if (*c_lyap) {
        std::printf("lambda = %.12g\n", lyapunov_exponent(ModelParams{omega, omega_x, xi_y}));
        return 0;
    }
    if (*c_surf) {
        const ModelParams p{omega, omega_x, xi_y};
        const GridAxis qa = parse_range(q_range), pa = parse_range(p_range);
        std::ostream& os = output_for(ofs, out_path);
        os << "q,p,h\n";
        for (int ip = 0; ip < pa.count; ++ip)
            for (int iq = 0; iq < qa.count; ++iq) {
                const double qv = qa.value(iq), pv = pa.value(ip);
                os << format_double(qv) << ',' << format_double(pv) << ',';
                if (qv * qv + pv * pv <= 4.0)
                    os << format_double(classical_energy(p, qv, pv));
                else
                    os << "nan";
                os << '\n';
            }
        return 0;
    }
    if (*c_obs) {
        const SpinMagnitude j(j_val);
        const ModelParams p{omega, omega_x, xi_y};
        double th = theta, ph = phi;
        if (th < 0.0) {
            // default to the highest-branch stationary angles at (omega_x, xi_y)
            const auto pts = stationary_points(p);
            const StationaryPoint* best = nullptr;
            for (const auto& sp : pts)
                if (!best || sp.energy > best->energy) best = &sp;
            th = best->point.theta;
            ph = best->point.phi;
        }
        const Observables o = coherent_expectations(j, th, ph, p);
        std::printf("jx = %.12g\njy = %.12g\njz = %.12g\njy2 = %.12g\nenergy = %.12g\n", o.jx,
                    o.jy, o.jz, o.jy2, o.energy);
        return 0;
    }
    if (*c_hp_g || *c_hp_s || *c_hp_b) {
        const SpinMagnitude j(j_val);
        const ModelParams p{omega, omega_x, xi_y};
        const HpMetricPoint m = *c_hp_g   ? hp_ground_metric(j, p)
                                : *c_hp_s ? hp_symmetric_metric(j, p)
                                          : hp_broken_metric(j, p);
        std::printf("g11 = %.12g\ng12 = %.12g\ng22 = %.12g\ndet_g = %.12g\nomega_freq = %.12g\n",
                    m.g11, m.g12, m.g22, m.det_g, m.omega);
        return 0;
    }
    if (*c_hp_be) {
        const SpinMagnitude j(j_val);
        std::printf("F12 = %.12g\n", hp_broken_berry(j, ModelParams{omega, omega_x, xi_y}));
        return 0;
    }
    if (*c_hp_em) {
        std::printf("e_max = %.12g\n", e_max(ModelParams{omega, omega_x, xi_y}));
        return 0;
    }
    if (*c_coh_st) {
        const CoherentState st = coherent_vector(SpinMagnitude(j_val), coh_theta, coh_phi);
        std::ostream& os = output_for(ofs, out_path);
        os << "m,re,im\n";
        for (int k = 0; k < st.coefficients.size(); ++k)
            os << format_double(-st.j.j() + k) << ',' << format_double(st.coefficients(k).real())
               << ',' << format_double(st.coefficients(k).imag()) << '\n';
        return 0;
    }
    if (*c_coh_q) {
        const CoherentBranch br =
            branch_str == "broken" ? CoherentBranch::Broken : CoherentBranch::Symmetric;
        const ModelParams p{omega, omega_x, xi_y};
        const CoherentQgt q = closed_form
                                  ? coherent_qgt_closed_form(SpinMagnitude(j_val), p, br)
                                  : coherent_qgt_numeric(SpinMagnitude(j_val), p, br);
        std::printf("g11 = %.12g\ng12 = %.12g\ng22 = %.12g\nf12 = %.12g\ndet_g = %.12g\n"
                    "degenerate = %s\n",
                    q.g11, q.g12, q.g22, q.f12, q.det_g, q.degenerate ? "true" : "false");
        return 0;
    }
    if (*c_coh_c) {
        const SpinMagnitude j(j_val);
        MetricFunction metric = [&](double x1, double x2) {
            const CoherentQgt q = coherent_qgt_closed_form(j, ModelParams{omega, x1, x2},
                                                           CoherentBranch::Broken);
            return Metric2{q.g11, q.g12, q.g22};
        };
        std::printf("R = %.12g\n", scalar_curvature_at(metric, omega_x, xi_y, curv_h));
        return 0;
    }
    if (*c_peaks) {
        CutSpec cut;
        cut.xi_y = xi_y;
        cut.state = parse_state(state_str);
        cut.method = qgt_method_from_string(method_str);
        cut.r_step = r_step;
        const GridAxis w = parse_range(window_str);
        cut.window_lo = w.start;
        cut.window_hi = w.stop;
        cut.coarse_count = w.count;
        if (!std::isnan(at_omega_x)) {
            cut.at_point = true;
            cut.omega_x0 = at_omega_x;
        }
        const auto rows = scaling_study(parse_j_list(j_list_str), cut,
                                        cut_quantity_from_string(quantity_str), threads);
        std::ostream& os = output_for(ofs, out_path);
        os << "j,location,value,status\n";
        for (const auto& r : rows)
            os << format_double(r.j) << ',' << format_double(r.location) << ','
               << format_double(r.value) << ',' << r.status << '\n';
        return 0;
    }
    if (*c_fit) {
        const Curve c = read_curve(in_path);
        std::vector<double> init;
        for (double v : parse_j_list(init_str)) init.push_back(v);
        const FitResult r = fit_model(c, make_fit_model(model_str), init);
        std::printf("model = %s\nconverged = %s\nresidual_rms = %.12g\n",
                    r.model_name.c_str(), r.converged ? "true" : "false", r.residual_rms);
        for (size_t k = 0; k < r.parameters.size(); ++k)
            std::printf("p%zu = %.12g\n", k, r.parameters[k]);
        return 0;
    }
    if (*c_cmp) {
        const SpinMagnitude j(j_val);
        const GridAxis wxs = parse_range(wx_range);
        const StateSelector sel = parse_state(state_str.empty() ? "highest" : state_str);
        const QgtMethod method = qgt_method_from_string(method_str);
        const SpinOperators ops = build_spin_operators(j);
        std::ostream& os = output_for(ofs, out_path);
        os << "omega_x,xi_y,g11_num,g12_num,g22_num,g11_hp,g12_hp,g22_hp,g11_coh,g12_coh,"
              "g22_coh,status\n";
        for (int i = 0; i < wxs.count; ++i) {
            const ModelParams p{omega, wxs.value(i), xi_y};
            std::string status = "ok";
            QgtPoint num{};
            HpMetricPoint hp{};
            CoherentQgt coh{};
            try {
                num = method == QgtMethod::MultiPrecision ? qgt_multiprecision(j, p, sel)
                                                          : qgt_auto(ops, p, sel);
                const double sep = separatrix_xi_y(p.omega_x, p.omega);
                if (sel.kind == StateSelector::Kind::Ground) {
                    hp = hp_ground_metric(j, p);
                    coh = coherent_qgt_closed_form(j, p, CoherentBranch::Symmetric);
                } else if (p.xi_y > sep) {
                    hp = hp_broken_metric(j, p);
                    coh = coherent_qgt_closed_form(j, p, CoherentBranch::Broken);
                } else {
                    hp = hp_symmetric_metric(j, p);
                    coh = coherent_qgt_closed_form(j, p, CoherentBranch::Symmetric);
                }
            } catch (const std::exception& e) {
                status = e.what();
            }
            os << format_double(p.omega_x) << ',' << format_double(p.xi_y) << ','
               << format_double(num.g11) << ',' << format_double(num.g12) << ','
               << format_double(num.g22) << ',' << format_double(hp.g11) << ','
               << format_double(hp.g12) << ',' << format_double(hp.g22) << ','
               << format_double(coh.g11) << ',' << format_double(coh.g12) << ','
               << format_double(coh.g22) << ','
               << (status == "ok" ? status : std::string("failed")) << '\n';
        }
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0;
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
