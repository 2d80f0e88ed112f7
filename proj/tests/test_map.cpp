#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rtm/map.hpp"

using namespace rtm;

namespace {
constexpr double pi = 3.141592653589793238462643383280;
}

TEST_CASE("params_from_mu derived fields") {
    RtmParams p = params_from_mu(2.0);
    CHECK(p.theta.has_value());
    CHECK(*p.theta == doctest::Approx(pi / 2).epsilon(1e-14));
    CHECK(p.phi_s == doctest::Approx(0.30816907111598494).epsilon(1e-14));
    CHECK(std::cos(*p.theta) == doctest::Approx(1.0 - p.mu / 2).epsilon(1e-12));
    CHECK(std::cosh(*p.h) == doctest::Approx(1.0 + p.mu / 2).epsilon(1e-14));

    RtmParams p4 = params_from_mu(two_pi * std::tan(std::atan(2.0 / pi)));
    CHECK(p4.mu == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(p4.phi_s == doctest::Approx(std::atan(2.0 / pi)).epsilon(1e-14));
    CHECK(*p4.theta == doctest::Approx(pi).epsilon(1e-7));

    RtmParams pneg = params_from_mu(-0.3);
    CHECK(!pneg.theta.has_value());
    CHECK(!pneg.h.has_value());
    RtmParams p5 = params_from_mu(5.0);
    CHECK(!p5.theta.has_value());
    CHECK(p5.h.has_value());

    CHECK_THROWS_AS(params_from_mu(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(params_from_mu(INFINITY), std::domain_error);
}

TEST_CASE("fixed points of the map") {
    for (double mu : {0.5, 2.0, 3.7, 4.5}) {
        RtmParams par = params_from_mu(mu);
        PhasePoint s = map_forward(fixed_point_s(), par);
        CHECK(std::abs(s.psi) < 1e-14);
        CHECK(std::abs(s.w) < 1e-14);
        PhasePoint h = map_forward(fixed_point_h(par), par);
        CHECK(std::abs(h.psi - fixed_point_h(par).psi) < 1e-13);
        CHECK(std::abs(h.w) < 1e-13);
    }
}

TEST_CASE("hand-evaluated image at mu=2") {
    RtmParams par = params_from_mu(2.0);
    PhasePoint q = map_forward({0.1, 0.0}, par);
    CHECK(q.psi == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(q.w == doctest::Approx(-0.23105658861586243).epsilon(1e-14));
    // invert the hand evaluation
    PhasePoint back = map_inverse(q, par);
    CHECK(back.psi == doctest::Approx(0.1).epsilon(1e-13));
    CHECK(std::abs(back.w) < 1e-14);
}

TEST_CASE("inverse round-trip on random points") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> upsi(-pi, pi), uw(-1.5, 1.5);
    for (double mu : {0.3, 2.0, 3.9}) {
        RtmParams par = params_from_mu(mu);
        for (int i = 0; i < 2000; ++i) {
            PhasePoint p{upsi(rng), uw(rng)};
            PhasePoint rt = map_inverse(map_forward(p, par), par);
            CHECK(std::abs(rt.psi - p.psi) < 1e-12);
            CHECK(std::abs(rt.w - p.w) < 1e-12);
        }
    }
}

TEST_CASE("iteration composes the map") {
    RtmParams par = params_from_mu(1.3);
    PhasePoint p{0.2, 0.1};
    CHECK(iterate(p, 0, par).psi == p.psi);
    PhasePoint q3 = map_forward(map_forward(map_forward(p, par), par), par);
    PhasePoint it3 = iterate(p, 3, par);
    CHECK(it3.psi == doctest::Approx(q3.psi).epsilon(1e-15));
    CHECK(it3.w == doctest::Approx(q3.w).epsilon(1e-15));
    PhasePoint back = iterate(it3, -3, par);
    CHECK(back.psi == doctest::Approx(p.psi).epsilon(1e-12));
}

TEST_CASE("third iterate near identity at mu=3") {
    RtmParams par = params_from_mu(3.0);
    PhasePoint p{1e-3, 0.0};
    PhasePoint q = iterate(p, 3, par);
    // f^3 = id + O(|p|^2) at the third-order resonance
    CHECK(std::abs(q.psi - p.psi) < 1e-4);
    CHECK(std::abs(q.w - p.w) < 1e-4);
    CHECK(std::abs(q.psi - p.psi) > 1e-7);  // but not exactly the identity
}

TEST_CASE("reversors") {
    RtmParams par = params_from_mu(2.0);
    PhasePoint p{0.1, 0.0};

    // involutions
    PhasePoint rr = reversor_r0(reversor_r0(p));
    CHECK(rr.psi == doctest::Approx(p.psi).epsilon(1e-15));
    CHECK(rr.w == doctest::Approx(p.w).epsilon(1e-15));
    PhasePoint p2{0.3, 0.25};
    PhasePoint r1r1 = reversor_r1(reversor_r1(p2, par), par);
    CHECK(r1r1.psi == p2.psi);
    CHECK(r1r1.w == doctest::Approx(p2.w).epsilon(1e-15));

    // f = r1 o r0 componentwise
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> upsi(-pi, pi), uw(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        PhasePoint z{upsi(rng), uw(rng)};
        PhasePoint a = map_forward(z, par);
        PhasePoint b = reversor_r1(reversor_r0(z), par);
        CHECK(std::abs(a.psi - b.psi) < 1e-14);
        CHECK(std::abs(a.w - b.w) < 1e-14);
    }

    // Fix(r0) = {w = 0}
    PhasePoint fx = reversor_r0({0.3, 0.0});
    CHECK(fx.psi == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(fx.w == 0.0);

    // conjugacy r0 o f o r0 = f^{-1}
    for (int i = 0; i < 200; ++i) {
        PhasePoint z{upsi(rng), uw(rng)};
        PhasePoint lhs = reversor_r0(map_forward(reversor_r0(z), par));
        PhasePoint rhs = map_inverse(z, par);
        CHECK(std::abs(lhs.psi - rhs.psi) < 1e-12);
        CHECK(std::abs(lhs.w - rhs.w) < 1e-12);
    }
}

TEST_CASE("jacobian and linear types") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> upsi(-pi, pi), uw(-1.0, 1.0);
    for (double mu : {0.5, 2.0, 4.4}) {
        RtmParams par = params_from_mu(mu);
        for (int i = 0; i < 3000; ++i) {
            PhasePoint p{upsi(rng), uw(rng)};
            CHECK(std::abs(jacobian(p, par).det() - 1.0) < 1e-12);
        }
    }
    auto i2 = linear_type_at_fixed_points(params_from_mu(2.0));
    CHECK(i2.trace_s == 0.0);
    CHECK(i2.type_s == LinearType::elliptic);
    auto i0 = linear_type_at_fixed_points(params_from_mu(0.0));
    CHECK(i0.trace_s == 2.0);
    CHECK(i0.type_s == LinearType::parabolic);
    auto i1 = linear_type_at_fixed_points(params_from_mu(1.0));
    CHECK(i1.trace_h == 3.0);
    CHECK(std::cosh(*params_from_mu(1.0).h) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(i1.type_h == LinearType::hyperbolic);
}

TEST_CASE("generating function reproduces the map") {
    RtmParams par = params_from_mu(1.0);
    double psi = 0.1, psi1 = 0.2, h = 1e-6;
    // w = -dL/dpsi, w1 = dL/dpsi1
    double dLdpsi = (generating_action(psi + h, psi1, par) - generating_action(psi - h, psi1, par)) / (2 * h);
    double dLdpsi1 = (generating_action(psi, psi1 + h, par) - generating_action(psi, psi1 - h, par)) / (2 * h);
    PhasePoint p{psi, psi1 - psi};  // w chosen so the map lands on psi1
    PhasePoint q = map_forward(p, par);
    CHECK(-dLdpsi == doctest::Approx(p.w).epsilon(1e-8));
    CHECK(dLdpsi1 == doctest::Approx(q.w).epsilon(1e-8));

    // L(psi, psi) = V(psi)
    CHECK(generating_action(0.4, 0.4, par) == doctest::Approx(potential(0.4, par)).epsilon(1e-15));

    // V' = eta
    double Vp = (potential(0.5 + h, par) - potential(0.5 - h, par)) / (2 * h);
    CHECK(Vp == doctest::Approx(eta(0.5, par)).epsilon(1e-8));

    // normalization V(psi_h) = 0
    CHECK(std::abs(potential(fixed_point_h(par).psi, par)) < 1e-15);
}

TEST_CASE("lifted iteration") {
    RtmParams par = params_from_mu(2.0);

    // bounded orbit: no winding, the two paths are the same fp sequence
    LiftedPoint lb{0.05, 0.0};
    PhasePoint tb{0.05, 0.0};
    for (int n = 0; n < 2000; ++n) {
        lb = iterate_lifted(lb, 1, par);
        tb = map_forward(tb, par);
        CHECK(lb.psi_tilde == tb.psi);
        CHECK(lb.w == tb.w);
    }

    // winding orbit: paths agree modulo 2 pi over a short horizon (chaotic
    // amplification separates them afterwards)
    LiftedPoint lp{0.2, 0.9};
    PhasePoint tp{0.2, 0.9};
    for (int n = 0; n < 8; ++n) {
        lp = iterate_lifted(lp, 1, par);
        tp = map_forward(tp, par);
        CHECK(reduce_angle(lp.psi_tilde) == doctest::Approx(tp.psi).epsilon(1e-9));
    }

    // unbounded flag
    CHECK_THROWS_AS(iterate_lifted({0.0, 2e11}, 100, par), std::runtime_error);
}
