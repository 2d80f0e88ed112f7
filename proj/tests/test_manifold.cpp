#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rtm/manifold.hpp"

using namespace rtm;
using namespace rtm::mfd;

namespace {

BigPoint ph_big(double mu, const PrecisionContext& ctx) {
    return hyperbolic_fixed_point_big(params_from_mu(mu), ctx);
}

double dist_to_polyline(const std::array<double, 2>& p,
                        const std::vector<std::array<double, 2>>& poly) {
    double best = 1e300;
    for (size_t i = 0; i + 1 < poly.size(); ++i) {
        double ax = poly[i][0], ay = poly[i][1];
        double bx = poly[i + 1][0], by = poly[i + 1][1];
        double vx = bx - ax, vy = by - ay;
        double t = ((p[0] - ax) * vx + (p[1] - ay) * vy) / (vx * vx + vy * vy + 1e-300);
        t = std::clamp(t, 0.0, 1.0);
        double dx = p[0] - (ax + t * vx), dy = p[1] - (ay + t * vy);
        best = std::min(best, std::hypot(dx, dy));
    }
    return best;
}

}  // namespace

TEST_CASE("unstable series satisfies the conjugacy") {
    PrecisionContext ctx{256};
    RtmParams par = params_from_mu(0.859);
    ManifoldSeries u = unstable_series(ph_big(0.859, ctx), 1, par, ctx);
    PrecisionScope scope(ctx);

    // multiplier equals e^h
    CHECK(u.multiplier.convert_to<double>() ==
          doctest::Approx(std::exp(*par.h)).epsilon(1e-14));

    // first coefficient is along the unstable eigenvector (1, lambda-1)
    double slope = (u.b[1] / u.a[1]).convert_to<double>();
    CHECK(slope == doctest::Approx(std::exp(*par.h) - 1.0).epsilon(1e-12));

    // residual target at the fundamental parameter
    big target = ldexp(big(1), -static_cast<long>(0.8 * 256));
    CHECK(u.residual <= target);
    CHECK(u.defect(u.t_fund / 3) <= target);

    // non-hyperbolic base is rejected
    CHECK_THROWS_AS(unstable_series(BigPoint{big(0), big(0)}, 1, params_from_mu(2.0),
                                    PrecisionContext{128}),
                    std::domain_error);
}

TEST_CASE("stable branch is the r0 image of the unstable one") {
    PrecisionContext ctx{192};
    RtmParams par = params_from_mu(1.2);
    ManifoldSeries u = unstable_series(ph_big(1.2, ctx), 1, par, ctx);
    ManifoldSeries s = stable_from_unstable(u);
    PrecisionScope scope(ctx);
    for (double td : {0.1, 0.6, 2.7}) {
        big t = td;
        BigPoint up = u.point(t);
        BigPoint sp = s.point(t);
        big dpsi = abs((up.psi + up.w) - sp.psi);
        big dw = abs(-up.w - sp.w);
        CHECK(dpsi.convert_to<double>() < 1e-30);
        CHECK(dw.convert_to<double>() < 1e-30);
    }
}

TEST_CASE("primary homoclinic points at mu = 0.859") {
    PrecisionContext ctx{256};
    RtmParams par = params_from_mu(0.859);
    ManifoldSeries u = unstable_series(ph_big(0.859, ctx), 1, par, ctx);
    PrecisionScope scope(ctx);

    HomoclinicPoint h0 = primary_homoclinic(u, SymLine::fix_r0, ctx);
    CHECK(abs(h0.point.w).convert_to<double>() < 1e-50);
    CHECK(h0.point.psi.convert_to<double>() == doctest::Approx(0.11858021).epsilon(1e-6));

    HomoclinicPoint h1 = primary_homoclinic(u, SymLine::fix_r1, ctx);
    big pi2 = 2 * acos(big(-1));
    big res = h1.point.w - (pi2 * (cos(h1.point.psi) - 1) - big(0.859) * sin(h1.point.psi)) / 2;
    CHECK(abs(res).convert_to<double>() < 1e-50);
    CHECK(h1.point.psi.convert_to<double>() == doctest::Approx(0.14716302).epsilon(1e-6));

    // the Fix(r1) point comes later along the branch than the Fix(r0) one
    CHECK(h1.t_star > h0.t_star);
}

TEST_CASE("lobe area reproduces the reference value to 12+ digits") {
    PrecisionContext ctx{256};
    LobeResult lr = lobe_area(0.859, ctx);
    PrecisionScope scope(ctx);
    big ref("3.808194826948494e-5");
    double rel = (abs(lr.area_action - ref) / ref).convert_to<double>();
    CHECK(rel < 5e-13);

    // the two routes agree well beyond the acceptance tolerance
    double agree =
        (abs(lr.area_action - lr.area_quadrature) / lr.area_action).convert_to<double>();
    CHECK(agree < 1e-6);

    // doubling the precision does not move the value
    PrecisionContext ctx2{512};
    LobeResult lr2 = lobe_area(0.859, ctx2);
    PrecisionScope scope2(ctx2);
    double drift = (abs(lr.area_action - lr2.area_action) / lr2.area_action).convert_to<double>();
    CHECK(drift < 1e-20);
}

TEST_CASE("lobe area in the deep exponentially-small regime") {
    PrecisionContext ctx{256};
    LobeResult lr = lobe_area(0.2, ctx);
    double val = lr.area_action.convert_to<double>();
    CHECK(val == doctest::Approx(6.7000e-15).epsilon(1e-3));
}

TEST_CASE("Fontich-Simo bound along an h grid") {
    PrecisionContext ctx{192};
    double prev = -1;
    for (double h : {0.60, 0.50, 0.40, 0.30}) {
        double mu = 2.0 * (std::cosh(h) - 1.0);
        LobeResult lr = lobe_area(mu, ctx);
        PrecisionScope scope(ctx);
        big pi_b = acos(big(-1));
        double scaled =
            (lr.area_action * exp(big(0.9) * 2 * pi_b * pi_b / big(h))).convert_to<double>();
        if (prev >= 0) CHECK(scaled < prev);
        prev = scaled;
    }
}

TEST_CASE("splitting fit recovers the leading coefficient") {
    PrecisionContext ctx{320};
    std::vector<double> grid = {0.60, 0.54, 0.48, 0.42, 0.36, 0.30};
    SplittingFit fit = splitting_fit(grid, ctx);
    CHECK(fit.a0 == doctest::Approx(1.42098502709189813726617259727e5).epsilon(1e-5));
    CHECK(std::abs(fit.a1) / fit.a0 < 1e-3);
}

TEST_CASE("globalized polylines stay on the invariant curve") {
    PrecisionContext ctx{128};
    RtmParams par = params_from_mu(2.9);
    ManifoldSeries u = unstable_series(ph_big(2.9, ctx), 1, par, ctx);
    Polyline poly = globalize(u, 0, 1e-3);
    REQUIRE(poly.pts.size() > 3);

    Polyline longer = globalize(u, 6, 1e-3);
    REQUIRE(longer.pts.size() > poly.pts.size());
    // orbit relation: the image of a vertex lies on the polyline
    for (size_t i = 0; i < poly.pts.size(); i += std::max<size_t>(1, poly.pts.size() / 15)) {
        PhasePoint q = map_forward({poly.pts[i][0], poly.pts[i][1]}, par);
        CHECK(dist_to_polyline({q.psi, q.w}, longer.pts) < 1e-6);
    }
}

TEST_CASE("symmetric periodic orbits") {
    RtmParams par = params_from_mu(2.9);
    auto spo = find_spo(local::make_resonance(1, 3), SymLine::fix_r0, par);
    REQUIRE(spo.size() >= 2);
    bool have_h = false, have_e = false;
    for (const auto& s : spo) {
        if (s.hyperbolic && std::abs(s.point.psi + 0.042442) < 5e-4) have_h = true;
        if (!s.hyperbolic && std::abs(s.point.psi + 0.220183) < 5e-4) have_e = true;
        PhasePoint q = iterate(s.point, 3, par);
        CHECK(std::hypot(q.psi - s.point.psi, q.w - s.point.w) < 1e-9);
    }
    CHECK(have_h);
    CHECK(have_e);

    // (1,4) elliptic SPO at mu = 2.037 has two points on Fix(r1)
    RtmParams par4 = params_from_mu(2.037);
    auto spo4 = find_spo(local::make_resonance(1, 4), SymLine::fix_r1, par4);
    int elliptic_on_r1 = 0;
    for (const auto& s : spo4)
        if (!s.hyperbolic) ++elliptic_on_r1;
    CHECK(elliptic_on_r1 == 2);

    // (0,1) returns the hyperbolic fixed point
    auto fp = find_spo(local::ResonanceId{0, 1}, SymLine::fix_r0, par);
    REQUIRE(fp.size() == 1);
    CHECK(fp[0].point.psi == doctest::Approx(fixed_point_h(par).psi).epsilon(1e-14));
    CHECK(fp[0].hyperbolic);
}

TEST_CASE("obstruction criterion at mu = 2.9") {
    PrecisionContext ctx{192};
    RtmParams par = params_from_mu(2.9);

    ManifoldSeries u_ph = unstable_series(ph_big(2.9, ctx), 1, par, ctx);
    Polyline wu = globalize(u_ph, 9, 1e-3);

    auto spo = find_spo(local::make_resonance(1, 3), SymLine::fix_r0, par);
    PhasePoint hyp{};
    bool found = false;
    for (const auto& s : spo)
        if (s.hyperbolic) {
            hyp = s.point;
            found = true;
        }
    REQUIRE(found);
    BigPoint base = refine_periodic_point_big(hyp, 3, SymLine::fix_r0, par, ctx);
    ManifoldSeries u_spo = unstable_series(base, 3, par, ctx);
    ManifoldSeries s_spo = stable_from_unstable(u_spo);
    Polyline ws_p = globalize(s_spo, 22, 1e-3, 2.0, +1);
    Polyline ws_m = globalize(s_spo, 22, 1e-3, 2.0, -1);

    bool crossing = obstruction_check(wu.pts, ws_p.pts) || obstruction_check(wu.pts, ws_m.pts);
    CHECK(crossing);

    // trivial negatives
    std::vector<std::array<double, 2>> seg1 = {{0, 0}, {1, 0}};
    std::vector<std::array<double, 2>> seg2 = {{0, 1}, {1, 1}};
    CHECK(!obstruction_check(seg1, seg2));
    std::vector<std::array<double, 2>> arc;
    for (int i = 0; i <= 50; ++i) {
        double t = i / 50.0;
        arc.push_back({t, t * t});
    }
    CHECK(!obstruction_check(arc, arc));
}
