// Command-line front end: every analysis of the library is reachable as a
// subcommand, and `repro` bundles the configurations that regenerate the
// reference artifacts checked by the acceptance suite.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "rtm/hamiltonian.hpp"
#include "rtm/io.hpp"
#include "rtm/local.hpp"
#include "rtm/manifold.hpp"
#include "rtm/map.hpp"
#include "rtm/raster.hpp"
#include "rtm/rotation.hpp"

using namespace rtm;
namespace io = rtm::io;

namespace {

std::vector<double> parse_range(const std::string& s) {
    // "lo:hi:step" inclusive, or a single value
    double lo, hi, step;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) == 3) {
        std::vector<double> out;
        for (double x = lo; x <= hi + 1e-12; x += step) out.push_back(x);
        return out;
    }
    return {std::stod(s)};
}

std::string cell_color_name(grid::Cell c) {
    switch (c) {
        case grid::Cell::white: return "escaped";
        case grid::Cell::blue: return "chaotic";
        case grid::Cell::green: return "island";
        case grid::Cell::red: return "ric";
    }
    return "?";
}

std::array<std::uint8_t, 3> cell_rgb(grid::Cell c) {
    switch (c) {
        case grid::Cell::white: return {255, 255, 255};
        case grid::Cell::blue: return {0, 0, 255};
        case grid::Cell::green: return {0, 160, 0};
        case grid::Cell::red: return {220, 0, 0};
    }
    return {0, 0, 0};
}

io::PpmImage raster_image(const grid::StabilityRaster& r) {
    io::PpmImage img;
    img.width = static_cast<int>(r.fcols);
    img.height = static_cast<int>(r.frows);
    img.pixels.resize(r.full.size());
    for (size_t k = 0; k < r.full.size(); ++k) img.pixels[k] = cell_rgb(r.full[k]);
    return img;
}

io::PpmImage section_image(const grid::SectionRaster& s) {
    io::PpmImage img;
    img.width = static_cast<int>(s.npsi);
    img.height = static_cast<int>(s.nmu);
    img.pixels.resize(s.cells.size());
    for (size_t k = 0; k < s.cells.size(); ++k) img.pixels[k] = cell_rgb(s.cells[k]);
    return img;
}

void write_raster_outputs(const grid::StabilityRaster& r, const std::string& prefix) {
    io::write_ppm(raster_image(r), prefix + ".ppm");
    grid::Areas a = grid::areas(r);
    grid::Extents e = grid::extents(r);
    io::CsvTable t;
    t.header = {"mu", "ell", "area_A", "area_D", "psi_min_D", "psi_max_D",
                "w_min_D", "w_max_D", "efficiency"};
    t.rows.push_back({io::format_double(r.mu), io::format_double(r.spec.cell),
                      io::format_double(a.area_A), io::format_double(a.area_D),
                      io::format_double(e.psi_min), io::format_double(e.psi_max),
                      io::format_double(e.w_min), io::format_double(e.w_max),
                      io::format_double(e.efficiency)});
    io::write_csv(t, prefix + ".csv");
    std::cout << "mu=" << r.mu << " area_A=" << a.area_A << " area_D=" << a.area_D << "\n";
}

struct RasterCliOpts {
    double cell = 1.0 / 1000;
    long budget_fast = 1000, budget_deep = 100000;
    int threads = 0, Q = 15, P = 7;
    double tol = 1e-10;
    std::string window = "auto";
};

grid::RasterSpec make_spec(const RasterCliOpts& o, double mu) {
    grid::RasterSpec s;
    if (o.window == "sc") s = grid::RasterSpec::saddle_center_window(mu, o.cell);
    else if (o.window == "third") s = grid::RasterSpec::third_order_window(mu, o.cell);
    else s = grid::RasterSpec::auto_window(o.cell);
    s.budget_fast = o.budget_fast;
    s.budget_deep = o.budget_deep;
    s.threads = o.threads;
    s.classify.P = o.P;
    s.classify.Q = o.Q;
    s.classify.tol = o.tol;
    return s;
}

void add_raster_flags(CLI::App* cmd, RasterCliOpts& o) {
    cmd->add_option("--cell", o.cell, "cell side of the raster grid");
    cmd->add_option("--budget-fast", o.budget_fast, "iterates of the first escape pass");
    cmd->add_option("--budget-deep", o.budget_deep, "iterates of the boundary passes");
    cmd->add_option("--threads", o.threads, "worker count (0 = all, 1 = serial)");
    cmd->add_option("--P", o.P, "rotation-number averaging order");
    cmd->add_option("--Q", o.Q, "rotation-number orbit length exponent");
    cmd->add_option("--tol", o.tol, "chaos tolerance on the error bound");
    cmd->add_option("--window", o.window)->check(CLI::IsMember({"auto", "sc", "third"}));
}

int run_repro(const std::string& id, const std::string& out_dir, int threads);

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"race-track microtron longitudinal phase-map toolkit"};
    app.require_subcommand(1);

    // ---- map ----
    double mu = 1.0, psi = 0.0, w = 0.0;
    long nit = 1;
    auto* c_map = app.add_subcommand("map", "iterate the phase map");
    c_map->add_option("--mu", mu)->required();
    c_map->add_option("--psi", psi)->required();
    c_map->add_option("--w", w)->required();
    c_map->add_option("-n,--iterates", nit);
    c_map->callback([&] {
        RtmParams par = params_from_mu(mu);
        PhasePoint p{psi, w};
        std::cout << "n,psi,w\n";
        for (long i = 0; i <= nit; ++i) {
            std::cout << i << "," << io::format_double(p.psi) << "," << io::format_double(p.w)
                      << "\n";
            p = map_forward(p, par);
        }
    });

    // ---- classify ----
    auto* c_cls = app.add_subcommand("classify", "local stability at mu");
    c_cls->add_option("--mu", mu)->required();
    c_cls->callback([&] {
        auto v = local::classify_local_stability(mu);
        static const char* names[] = {"hyperbolic_unstable",
                                      "saddle_center_parabolic_unstable",
                                      "elliptic_twist_stable",
                                      "fourth_order_simo_stable",
                                      "twist_root_higher_order_stable",
                                      "third_order_resonance_unstable",
                                      "second_order_parabolic_stable"};
        std::cout << "mu,stable,reason\n"
                  << io::format_double(mu) << "," << (v.stable ? "1" : "0") << ","
                  << names[static_cast<int>(v.reason)] << "\n";
    });

    // ---- rotnum ----
    int P = 7, Q = 15;
    double tol = 1e-10;
    std::string grid_arg;
    std::string out_path;
    auto* c_rot = app.add_subcommand("rotnum", "refined rotation number of orbits");
    c_rot->add_option("--mu", mu)->required();
    c_rot->add_option("--psi", psi);
    c_rot->add_option("--w", w);
    c_rot->add_option("--P", P);
    c_rot->add_option("--Q", Q);
    c_rot->add_option("--tol", tol);
    c_rot->add_option("--grid", grid_arg, "psi range lo:hi:step on Fix(r0)");
    c_rot->add_option("--out", out_path, "write CSV here instead of stdout");
    c_rot->callback([&] {
        RtmParams par = params_from_mu(mu);
        rot::ClassifyOptions opt;
        opt.P = P;
        opt.Q = Q;
        opt.tol = tol;
        io::CsvTable t;
        t.header = {"psi", "w", "mu", "theta_pq", "err_bound", "class"};
        std::vector<PhasePoint> pts;
        if (!grid_arg.empty())
            for (double x : parse_range(grid_arg)) pts.push_back({x, 0.0});
        else
            pts.push_back({psi, w});
        for (PhasePoint p : pts) {
            rot::OrbitClass oc = rot::classify_point(p, par, opt);
            std::string cls;
            switch (oc.kind) {
                case rot::OrbitKind::chaotic: cls = "chaotic"; break;
                case rot::OrbitKind::rational:
                    cls = "rational(" + std::to_string(oc.m) + "/" + std::to_string(oc.n) + ")";
                    break;
                case rot::OrbitKind::irrational: cls = "irrational"; break;
                case rot::OrbitKind::escaped: cls = "escaped"; break;
                case rot::OrbitKind::degenerate: cls = "degenerate"; break;
            }
            t.rows.push_back({io::format_double(p.psi), io::format_double(p.w),
                              io::format_double(mu), io::format_double(oc.rho * two_pi),
                              io::format_double(oc.err_bound), cls});
        }
        if (!out_path.empty()) io::write_csv(t, out_path);
        else {
            for (size_t i = 0; i < t.header.size(); ++i)
                std::cout << t.header[i] << (i + 1 < t.header.size() ? "," : "\n");
            for (auto& r : t.rows)
                for (size_t i = 0; i < r.size(); ++i)
                    std::cout << r[i] << (i + 1 < r.size() ? "," : "\n");
        }
    });

    // ---- raster ----
    RasterCliOpts ro;
    std::string prefix = "raster";
    auto* c_ras = app.add_subcommand("raster", "stability-domain raster (PPM + CSV)");
    c_ras->add_option("--mu", mu)->required();
    add_raster_flags(c_ras, ro);
    c_ras->add_option("--out-prefix", prefix);
    c_ras->callback([&] {
        grid::StabilityRaster r = grid::raster_stability(make_spec(ro, mu), params_from_mu(mu));
        write_raster_outputs(r, prefix);
    });

    // ---- sweep ----
    std::string mu_range;
    auto* c_swp = app.add_subcommand("sweep", "areas |A|, |D| over a mu range");
    c_swp->add_option("--mu", mu_range)->required();
    add_raster_flags(c_swp, ro);
    c_swp->add_option("--out", out_path);
    c_swp->callback([&] {
        auto mus = parse_range(mu_range);
        grid::WindowKind kind = ro.window == "sc" ? grid::WindowKind::saddle_center
                                : ro.window == "third" ? grid::WindowKind::third_order
                                                       : grid::WindowKind::fixed_box;
        auto rows = grid::sweep_mu(mus, kind, make_spec(ro, mus.front()));
        io::CsvTable t;
        t.header = {"mu", "area_A", "area_D"};
        for (auto& r : rows)
            t.rows.push_back({io::format_double(r.mu), io::format_double(r.area_A),
                              io::format_double(r.area_D)});
        if (out_path.empty()) out_path = "sweep.csv";
        io::write_csv(t, out_path);
        std::cout << "wrote " << out_path << " (" << rows.size() << " rows)\n";
    });

    // ---- sections ----
    grid::SectionSpec sspec;
    std::string mu_r_arg = "0.05:4.6:0.05", psi_r_arg = "-0.45:0.35:0.002";
    auto* c_sec = app.add_subcommand("sections", "symmetry-line section sets S0/S1");
    c_sec->add_option("--mu", mu_r_arg, "mu range lo:hi:step");
    c_sec->add_option("--psi", psi_r_arg, "psi range lo:hi:step");
    c_sec->add_option("--budget", sspec.budget);
    c_sec->add_option("--threads", sspec.threads);
    c_sec->add_option("--Q", sspec.classify.Q);
    c_sec->add_option("--out-prefix", prefix);
    c_sec->callback([&] {
        auto mus = parse_range(mu_r_arg);
        auto psis = parse_range(psi_r_arg);
        sspec.mu_min = mus.front();
        sspec.mu_max = mus.back();
        sspec.dmu = mus.size() > 1 ? mus[1] - mus[0] : 1.0;
        sspec.psi_min = psis.front();
        sspec.psi_max = psis.back();
        sspec.dpsi = psis.size() > 1 ? psis[1] - psis[0] : 1.0;
        auto [s0, s1] = grid::section_sets(sspec);
        io::write_ppm(section_image(s0), prefix + "_s0.ppm");
        io::write_ppm(section_image(s1), prefix + "_s1.ppm");
        io::CsvTable t;
        t.header = {"set", "mu", "psi", "class"};
        for (int which = 0; which < 2; ++which) {
            const auto& s = which == 0 ? s0 : s1;
            for (long r = 0; r < s.nmu; ++r)
                for (long c = 0; c < s.npsi; ++c)
                    if (s.at(r, c) != grid::Cell::white)
                        t.rows.push_back({which == 0 ? "S0" : "S1",
                                          io::format_double(s.spec.mu_max - r * s.spec.dmu),
                                          io::format_double(s.spec.psi_min + c * s.spec.dpsi),
                                          cell_color_name(s.at(r, c))});
        }
        io::write_csv(t, prefix + "_sections.csv");
        std::cout << "wrote " << prefix << "_s0.ppm, _s1.ppm, _sections.csv\n";
    });

    // ---- extents ----
    auto* c_ext = app.add_subcommand("extents", "axis extents of the component of p_s");
    c_ext->add_option("--mu", mu)->required();
    add_raster_flags(c_ext, ro);
    c_ext->add_option("--out", out_path);
    c_ext->callback([&] {
        grid::StabilityRaster r = grid::raster_stability(make_spec(ro, mu), params_from_mu(mu));
        grid::Extents e = grid::extents(r);
        io::CsvTable t;
        t.header = {"mu", "psi_extent", "w_extent", "efficiency"};
        t.rows.push_back({io::format_double(mu), io::format_double(e.psi_extent),
                          io::format_double(e.w_extent), io::format_double(e.efficiency)});
        if (!out_path.empty()) io::write_csv(t, out_path);
        std::cout << "psi_extent=" << e.psi_extent << " w_extent=" << e.w_extent
                  << " efficiency=" << e.efficiency << "\n";
    });

    // ---- hamiltonian ----
    std::string scenario = "sc";
    int order = 4;
    std::string levels_arg;
    double eval_x = 0, eval_y = 0;
    bool do_eval = false;
    auto* c_ham = app.add_subcommand("hamiltonian", "interpolating-Hamiltonian values and levels");
    c_ham->add_option("--scenario", scenario)->check(CLI::IsMember({"sc", "fourth", "third"}));
    c_ham->add_option("--order", order);
    c_ham->add_option("--mu", mu);
    c_ham->add_option("--levels", levels_arg, "comma list of level values");
    c_ham->add_option("--psi", eval_x);
    c_ham->add_flag("--value", do_eval, "print H(psi, w) for --psi/--w");
    c_ham->add_option("--w", eval_y);
    c_ham->add_option("--out", out_path);
    c_ham->callback([&] {
        RtmParams par = params_from_mu(mu);
        auto H = [&](double ps, double ww) {
            if (scenario == "sc") return ham::h_corrected_saddle_center({ps, ww}, par, order);
            if (scenario == "fourth") return ham::h_fourth_order({ps, ww}, order);
            double eps = mu - 3.0;
            constexpr double pi_d = 3.141592653589793238462643383280;
            return ham::h1_third_order(pi_d * ps / eps, pi_d * ww / eps);
        };
        if (do_eval) {
            std::cout << "H=" << io::format_double(H(eval_x, eval_y)) << "\n";
            return;
        }
        io::CsvTable t;
        t.header = {"level", "segment", "psi", "w"};
        for (double level : parse_range(levels_arg.empty() ? "-0.00465" : levels_arg)) {
            auto curves = ham::level_curves(H, level, -0.6, 0.45, -0.8, 0.8, 2000);
            int seg = 0;
            for (const auto& c : curves) {
                for (const auto& p : c)
                    t.rows.push_back({io::format_double(level), std::to_string(seg),
                                      io::format_double(p[0]), io::format_double(p[1])});
                ++seg;
            }
        }
        if (out_path.empty()) out_path = "hamiltonian.csv";
        io::write_csv(t, out_path);
        std::cout << "wrote " << out_path << "\n";
    });

    // ---- manifold ----
    unsigned bits = 256;
    int period = 1, fund = 8, sign = +1;
    std::string res_arg, line_arg = "r0";
    auto* c_man = app.add_subcommand("manifold", "invariant-curve polyline (CSV)");
    c_man->add_option("--mu", mu)->required();
    c_man->add_option("--bits", bits);
    c_man->add_option("--fund", fund, "fundamental domains to globalize");
    c_man->add_option("--sign", sign)->check(CLI::IsMember({-1, 1}));
    c_man->add_option("--spo", res_arg, "m/n: use the hyperbolic (m,n)-SPO instead of p_h");
    c_man->add_option("--line", line_arg)->check(CLI::IsMember({"r0", "r1"}));
    std::string branch_arg = "unstable";
    c_man->add_option("--branch", branch_arg)->check(CLI::IsMember({"unstable", "stable"}));
    c_man->add_option("--out", out_path);
    c_man->callback([&] {
        RtmParams par = params_from_mu(mu);
        mfd::PrecisionContext ctx{bits};
        mfd::BigPoint base;
        if (res_arg.empty()) {
            base = mfd::hyperbolic_fixed_point_big(par, ctx);
            period = 1;
        } else {
            int m, n;
            if (std::sscanf(res_arg.c_str(), "%d/%d", &m, &n) != 2)
                throw std::domain_error("manifold: --spo expects m/n");
            auto line = line_arg == "r0" ? mfd::SymLine::fix_r0 : mfd::SymLine::fix_r1;
            auto spo = mfd::find_spo(local::make_resonance(m, n), line, par);
            const mfd::SpoPoint* hyp = nullptr;
            for (const auto& s : spo)
                if (s.hyperbolic) hyp = &s;
            if (!hyp) throw std::runtime_error("manifold: no hyperbolic SPO found on that line");
            base = mfd::refine_periodic_point_big(hyp->point, n, line, par, ctx);
            period = n;
        }
        mfd::ManifoldSeries u = mfd::unstable_series(base, period, par, ctx);
        mfd::ManifoldSeries series =
            branch_arg == "stable" ? mfd::stable_from_unstable(u) : std::move(u);
        mfd::Polyline poly = mfd::globalize(series, fund, 1e-3, 2.0, sign);
        io::CsvTable t;
        t.header = {"psi", "w"};
        for (const auto& p : poly.pts)
            t.rows.push_back({io::format_double(p[0]), io::format_double(p[1])});
        if (out_path.empty()) out_path = "manifold.csv";
        io::write_csv(t, out_path);
        std::cout << "wrote " << out_path << " (" << poly.pts.size() << " points"
                  << (poly.truncated ? ", truncated at window" : "") << ")\n";
    });

    // ---- lobe ----
    auto* c_lob = app.add_subcommand("lobe", "lobe area between the primary homoclinic points");
    c_lob->add_option("--mu", mu)->required();
    c_lob->add_option("--bits", bits);
    c_lob->add_option("--out", out_path);
    c_lob->callback([&] {
        mfd::PrecisionContext ctx{bits};
        mfd::LobeResult lr = mfd::lobe_area(mu, ctx);
        mfd::PrecisionScope scope(ctx);
        io::CsvTable t;
        t.header = {"mu", "h", "area", "area_quadrature", "digits", "order"};
        t.rows.push_back({io::format_double(lr.mu), io::format_double(lr.h),
                          lr.area_action.str(static_cast<int>(ctx.digits10())),
                          lr.area_quadrature.str(17), std::to_string(ctx.digits10()),
                          std::to_string(lr.order)});
        if (!out_path.empty()) io::write_csv(t, out_path);
        std::cout << "mu=" << lr.mu << " h=" << lr.h
                  << " |L|=" << lr.area_action.str(20) << "\n";
    });

    // ---- splitfit ----
    std::string h_arg = "0.30:0.60:0.042857142857142857";
    auto* c_fit = app.add_subcommand("splitfit", "asymptotic splitting coefficients");
    c_fit->add_option("--h", h_arg, "h grid lo:hi:step");
    c_fit->add_option("--bits", bits);
    c_fit->add_option("--out", out_path);
    c_fit->callback([&] {
        auto grid_h = parse_range(h_arg);
        mfd::PrecisionContext ctx{bits};
        mfd::SplittingFit fit = mfd::splitting_fit(grid_h, ctx);
        io::CsvTable t;
        t.header = {"h", "scaled_lobe", "a0", "a1"};
        for (size_t i = 0; i < fit.h.size(); ++i)
            t.rows.push_back({io::format_double(fit.h[i]), io::format_double(fit.scaled[i]),
                              io::format_double(fit.a0), io::format_double(fit.a1)});
        if (out_path.empty()) out_path = "splitfit.csv";
        io::write_csv(t, out_path);
        std::cout << "a0=" << io::format_double(fit.a0) << " a1=" << io::format_double(fit.a1)
                  << "\n";
    });

    // ---- spo ----
    auto* c_spo = app.add_subcommand("spo", "symmetric periodic orbits on a symmetry line");
    c_spo->add_option("--mu", mu)->required();
    c_spo->add_option("--res", res_arg, "m/n")->required();
    c_spo->add_option("--line", line_arg)->check(CLI::IsMember({"r0", "r1"}));
    c_spo->callback([&] {
        int m, n;
        if (std::sscanf(res_arg.c_str(), "%d/%d", &m, &n) != 2)
            throw std::domain_error("spo: --res expects m/n");
        RtmParams par = params_from_mu(mu);
        auto line = line_arg == "r0" ? mfd::SymLine::fix_r0 : mfd::SymLine::fix_r1;
        auto spo = m == 0 && n == 1
                       ? mfd::find_spo(local::ResonanceId{0, 1}, line, par)
                       : mfd::find_spo(local::make_resonance(m, n), line, par);
        std::cout << "psi,w,m,n,type,trace\n";
        for (const auto& s : spo)
            std::cout << io::format_double(s.point.psi) << "," << io::format_double(s.point.w)
                      << "," << s.m << "," << s.n << ","
                      << (s.hyperbolic ? "hyperbolic" : "elliptic") << ","
                      << io::format_double(s.trace) << "\n";
    });

    // ---- obstruct ----
    auto* c_obs = app.add_subcommand("obstruct", "obstruction-criterion crossing test");
    c_obs->add_option("--mu", mu)->required();
    c_obs->add_option("--res", res_arg, "m/n of the second orbit")->required();
    c_obs->add_option("--bits", bits);
    c_obs->callback([&] {
        int m, n;
        if (std::sscanf(res_arg.c_str(), "%d/%d", &m, &n) != 2)
            throw std::domain_error("obstruct: --res expects m/n");
        RtmParams par = params_from_mu(mu);
        mfd::PrecisionContext ctx{bits};
        mfd::BigPoint ph = mfd::hyperbolic_fixed_point_big(par, ctx);
        mfd::ManifoldSeries u_ph = mfd::unstable_series(ph, 1, par, ctx);
        mfd::Polyline wu = mfd::globalize(u_ph, 9, 1e-3);
        auto spo = mfd::find_spo(local::make_resonance(m, n), mfd::SymLine::fix_r0, par);
        const mfd::SpoPoint* hyp = nullptr;
        for (const auto& s : spo)
            if (s.hyperbolic) hyp = &s;
        if (!hyp) throw std::runtime_error("obstruct: no hyperbolic SPO found");
        mfd::BigPoint base = mfd::refine_periodic_point_big(hyp->point, n, mfd::SymLine::fix_r0,
                                                            par, ctx);
        mfd::ManifoldSeries u_spo = mfd::unstable_series(base, n, par, ctx);
        mfd::ManifoldSeries s_spo = mfd::stable_from_unstable(u_spo);
        mfd::Polyline ws_p = mfd::globalize(s_spo, 22, 1e-3, 2.0, +1);
        mfd::Polyline ws_m = mfd::globalize(s_spo, 22, 1e-3, 2.0, -1);
        bool crossing = mfd::obstruction_check(wu.pts, ws_p.pts) ||
                        mfd::obstruction_check(wu.pts, ws_m.pts);
        std::cout << "crossing=" << (crossing ? "true" : "false") << "\n";
    });

    // ---- repro ----
    std::string repro_id, out_dir = ".";
    bool list_only = false;
    int repro_threads = 0;
    auto* c_rep = app.add_subcommand("repro", "regenerate a named reference artifact");
    c_rep->add_option("id", repro_id);
    c_rep->add_flag("--list", list_only);
    c_rep->add_option("--out-dir", out_dir);
    c_rep->add_option("--threads", repro_threads);
    c_rep->callback([&] {
        if (list_only || repro_id.empty()) {
            std::cout
                << "fig8               raster pair mu=2.037, 2.038 (cell 1/1000)   [criterion 5]\n"
                << "table3-row-1-4     escape bracket of the (1,4) chain           [criterion 8]\n"
                << "table3-row-1-3     escape bracket of the (1,3) chain           [criterion 8]\n"
                << "table3-row-2-5     escape bracket of the (2,5) chain           [criterion 8]\n"
                << "lobe-mu-0.859      16-digit lobe area at mu=0.859              [criterion 9]\n"
                << "splitfit           a0, a1 over 8 h-points in [0.30, 0.60]      [criterion 10]\n"
                << "sweep-saddle-center  |A| vs leading order, mu in [0.05,0.30]   [criterion 6]\n"
                << "sweep-third-order  |D| vs leading order at mu = 3 +/- 0.1      [criterion 6]\n"
                << "area-extrema       reduced mu grid around the area maximum     [criterion 7]\n"
                << "fig16-separatrices invariant curves of p_h at mu=0.859         [criterion 9]\n"
                << "fig18-obstruction  crossing of W^u(p_h) and W^s((1,3))         [criterion 11]\n"
                << "flat-fit-mu-r      quartic rotation-number fit at mu_r         [criterion 4]\n"
                << "extents-mu-2       axis extents and capture efficiency         [criterion 13]\n"
                << "sections           S0/S1 sets on a medium grid                 [figures]\n";
            return;
        }
        int rc = run_repro(repro_id, out_dir, repro_threads);
        if (rc != 0) throw std::runtime_error("unknown repro id: " + repro_id);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

namespace {

int run_repro(const std::string& id, const std::string& dir, int threads) {
    auto path = [&](const std::string& name) { return dir + "/" + name; };
    RasterCliOpts ro;
    ro.threads = threads;

    if (id == "fig8") {
        for (double mu : {2.037, 2.038}) {
            grid::StabilityRaster r =
                grid::raster_stability(make_spec(ro, mu), params_from_mu(mu));
            write_raster_outputs(r, path("fig8_mu" + std::to_string(mu).substr(0, 5)));
        }
        return 0;
    }
    if (id.rfind("table3-row-", 0) == 0) {
        int m = 0, n = 0;
        if (std::sscanf(id.c_str(), "table3-row-%d-%d", &m, &n) != 2) return 1;
        ro.cell = 1.0 / 500;
        double lo = m == 1 && n == 4 ? 2.00 : (n == 3 ? 2.80 : 3.70);
        double hi = lo + 0.10;
        grid::EscapeBracket br =
            grid::escape_value(local::make_resonance(m, n), lo, hi, 0.01, make_spec(ro, lo));
        io::CsvTable t;
        t.header = {"m", "n", "mu_lo", "mu_hi"};
        t.rows.push_back({std::to_string(m), std::to_string(n), io::format_double(br.mu_lo),
                          io::format_double(br.mu_hi)});
        io::write_csv(t, path(id + ".csv"));
        std::cout << id << ": mu* in (" << br.mu_lo << ", " << br.mu_hi << ")\n";
        return 0;
    }
    if (id == "lobe-mu-0.859") {
        mfd::PrecisionContext ctx{256};
        mfd::LobeResult lr = mfd::lobe_area(0.859, ctx);
        mfd::PrecisionScope scope(ctx);
        io::CsvTable t;
        t.header = {"mu", "h", "area", "area_quadrature"};
        t.rows.push_back({io::format_double(lr.mu), io::format_double(lr.h),
                          lr.area_action.str(20), lr.area_quadrature.str(17)});
        io::write_csv(t, path("lobe_mu_0.859.csv"));
        std::cout << "|L| = " << lr.area_action.str(20) << "\n";
        return 0;
    }
    if (id == "splitfit") {
        std::vector<double> grid_h;
        for (int i = 0; i < 8; ++i) grid_h.push_back(0.30 + 0.30 * i / 7.0);
        mfd::PrecisionContext ctx{512};
        mfd::SplittingFit fit = mfd::splitting_fit(grid_h, ctx);
        io::CsvTable t;
        t.header = {"h", "scaled_lobe", "a0", "a1"};
        for (size_t i = 0; i < fit.h.size(); ++i)
            t.rows.push_back({io::format_double(fit.h[i]), io::format_double(fit.scaled[i]),
                              io::format_double(fit.a0), io::format_double(fit.a1)});
        io::write_csv(t, path("splitfit.csv"));
        std::cout << "a0=" << fit.a0 << " a1=" << fit.a1 << "\n";
        return 0;
    }
    if (id == "sweep-saddle-center") {
        ro.cell = 1.0 / 2000;
        ro.window = "sc";
        std::vector<double> mus = {0.05, 0.10, 0.15, 0.20, 0.25, 0.30};
        auto rows = grid::sweep_mu(mus, grid::WindowKind::saddle_center, make_spec(ro, 0.05));
        io::CsvTable t;
        t.header = {"mu", "area_A", "area_D", "leading_order"};
        for (auto& r : rows)
            t.rows.push_back({io::format_double(r.mu), io::format_double(r.area_A),
                              io::format_double(r.area_D),
                              io::format_double(local::asymptotic_area_saddle_center(r.mu))});
        io::write_csv(t, path("sweep_saddle_center.csv"));
        return 0;
    }
    if (id == "sweep-third-order") {
        ro.cell = 1.0 / 2000;
        ro.window = "third";
        std::vector<double> mus = {2.9, 3.1};
        auto rows = grid::sweep_mu(mus, grid::WindowKind::third_order, make_spec(ro, 2.9));
        io::CsvTable t;
        t.header = {"mu", "area_A", "area_D", "leading_order"};
        for (auto& r : rows)
            t.rows.push_back({io::format_double(r.mu), io::format_double(r.area_A),
                              io::format_double(r.area_D),
                              io::format_double(local::asymptotic_area_third_order(r.mu - 3.0))});
        io::write_csv(t, path("sweep_third_order.csv"));
        return 0;
    }
    if (id == "area-extrema") {
        ro.cell = 1.0 / 500;
        std::vector<double> mus;
        for (double m2 = 1.80; m2 <= 2.001; m2 += 0.02) mus.push_back(m2);
        mus.push_back(4.2);
        mus.push_back(4.6);
        auto rows = grid::sweep_mu(mus, grid::WindowKind::fixed_box, make_spec(ro, 1.8));
        io::CsvTable t;
        t.header = {"mu", "area_A", "area_D"};
        for (auto& r : rows)
            t.rows.push_back({io::format_double(r.mu), io::format_double(r.area_A),
                              io::format_double(r.area_D)});
        io::write_csv(t, path("area_extrema.csv"));
        return 0;
    }
    if (id == "fig16-separatrices") {
        mfd::PrecisionContext ctx{256};
        RtmParams par = params_from_mu(0.859);
        mfd::BigPoint ph = mfd::hyperbolic_fixed_point_big(par, ctx);
        mfd::ManifoldSeries u = mfd::unstable_series(ph, 1, par, ctx);
        mfd::ManifoldSeries s = mfd::stable_from_unstable(u);
        for (auto [series, name] : {std::pair{&u, "unstable"}, {&s, "stable"}}) {
            mfd::Polyline poly = mfd::globalize(*series, 10, 1e-3);
            io::CsvTable t;
            t.header = {"psi", "w"};
            for (const auto& p : poly.pts)
                t.rows.push_back({io::format_double(p[0]), io::format_double(p[1])});
            io::write_csv(t, path(std::string("fig16_") + name + ".csv"));
        }
        return 0;
    }
    if (id == "fig18-obstruction") {
        RtmParams par = params_from_mu(2.9);
        mfd::PrecisionContext ctx{192};
        mfd::BigPoint ph = mfd::hyperbolic_fixed_point_big(par, ctx);
        mfd::ManifoldSeries u_ph = mfd::unstable_series(ph, 1, par, ctx);
        mfd::Polyline wu = mfd::globalize(u_ph, 9, 1e-3);
        auto spo = mfd::find_spo(local::make_resonance(1, 3), mfd::SymLine::fix_r0, par);
        const mfd::SpoPoint* hyp = nullptr;
        for (const auto& s : spo)
            if (s.hyperbolic) hyp = &s;
        if (!hyp) return 1;
        mfd::BigPoint base =
            mfd::refine_periodic_point_big(hyp->point, 3, mfd::SymLine::fix_r0, par, ctx);
        mfd::ManifoldSeries u_spo = mfd::unstable_series(base, 3, par, ctx);
        mfd::ManifoldSeries s_spo = mfd::stable_from_unstable(u_spo);
        mfd::Polyline ws = mfd::globalize(s_spo, 22, 1e-3, 2.0, +1);
        io::CsvTable t;
        t.header = {"curve", "psi", "w"};
        for (const auto& p : wu.pts)
            t.rows.push_back({"wu_ph", io::format_double(p[0]), io::format_double(p[1])});
        for (const auto& p : ws.pts)
            t.rows.push_back({"ws_13", io::format_double(p[0]), io::format_double(p[1])});
        io::write_csv(t, path("fig18_curves.csv"));
        bool crossing = mfd::obstruction_check(wu.pts, ws.pts);
        std::cout << "crossing=" << (crossing ? "true" : "false") << "\n";
        return 0;
    }
    if (id == "flat-fit-mu-r") {
        double mu_r = local::twist_root().mu_r;
        RtmParams par = params_from_mu(mu_r);
        std::vector<std::pair<double, double>> samples;
        for (int i = 2; i <= 20; ++i) {
            for (double sgn : {-1.0, 1.0}) {
                double psi = sgn * 0.0025 * i;
                rot::OrbitClass oc = rot::classify_point({psi, 0.0}, par);
                if (oc.kind == rot::OrbitKind::irrational || oc.kind == rot::OrbitKind::rational)
                    samples.push_back({psi, oc.rho});
            }
        }
        auto fit = local::flat_rotation_fit(samples);
        io::CsvTable t;
        t.header = {"rho0", "rho2", "samples"};
        t.rows.push_back({io::format_double(fit.rho0), io::format_double(fit.rho2),
                          std::to_string(samples.size())});
        io::write_csv(t, path("flat_fit_mu_r.csv"));
        std::cout << "rho0=" << fit.rho0 << " rho2=" << fit.rho2 << "\n";
        return 0;
    }
    if (id == "extents-mu-2") {
        ro.cell = 1.0 / 500;
        grid::StabilityRaster r = grid::raster_stability(make_spec(ro, 2.0), params_from_mu(2.0));
        grid::Extents e = grid::extents(r);
        io::CsvTable t;
        t.header = {"mu", "psi_extent", "w_extent", "efficiency"};
        t.rows.push_back({"2", io::format_double(e.psi_extent), io::format_double(e.w_extent),
                          io::format_double(e.efficiency)});
        io::write_csv(t, path("extents_mu_2.csv"));
        std::cout << "psi_extent=" << e.psi_extent << " efficiency=" << e.efficiency << "\n";
        return 0;
    }
    if (id == "sections") {
        grid::SectionSpec sspec;
        sspec.mu_min = 0.2;
        sspec.mu_max = 4.5;
        sspec.dmu = 0.02;
        sspec.dpsi = 1.0 / 250;
        sspec.budget = 20000;
        sspec.threads = threads;
        auto [s0, s1] = grid::section_sets(sspec);
        io::write_ppm(section_image(s0), path("sections_s0.ppm"));
        io::write_ppm(section_image(s1), path("sections_s1.ppm"));
        return 0;
    }
    return 1;
}

}  // namespace
