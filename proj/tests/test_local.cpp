#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "rtm/local.hpp"

using namespace rtm;
using namespace rtm::local;

namespace {
constexpr double pi = 3.141592653589793238462643383280;
}

TEST_CASE("twist coefficient closed form") {
    CHECK(twist_coefficient(pi / 2) == doctest::Approx(-(1.0 + pi * pi)).epsilon(1e-13));
    CHECK_THROWS_AS(twist_coefficient(2.0 * pi / 3.0), std::domain_error);
    CHECK_THROWS_AS(twist_coefficient(1e-12), std::domain_error);
    CHECK_THROWS_AS(twist_coefficient(pi - 1e-12), std::domain_error);
    CHECK_THROWS_AS(twist_coefficient(-0.5), std::domain_error);
}

TEST_CASE("twist root constants") {
    TwistRoot r = twist_root();
    CHECK(r.theta_r == doctest::Approx(1.8429983434121990).epsilon(1e-14));
    CHECK(r.mu_r == doctest::Approx(2.5377060556581890).epsilon(1e-14));
    CHECK(std::abs(twist_coefficient(r.theta_r)) < 1e-12);

    // discriminant of the numerator cubic in cos(theta)
    double a = 2, b = -3, c = 4 * pi * pi, d = 1 + pi * pi;
    double disc = b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d +
                  18 * a * b * c * d;
    CHECK(disc == doctest::Approx(-536135.0).epsilon(1e-5));
}

TEST_CASE("twist sign structure") {
    TwistRoot r = twist_root();
    // tau > 0 exactly on (theta_r, 2pi/3)
    for (double th : {r.theta_r + 1e-6, 1.9, 2.0, 2.0 * pi / 3.0 - 1e-6})
        CHECK(twist_coefficient(th) > 0.0);
    for (double th : {0.2, 1.0, 1.5, r.theta_r - 1e-6})
        CHECK(twist_coefficient(th) < 0.0);
    for (double th : {2.0 * pi / 3.0 + 1e-6, 2.5, 3.0, pi - 1e-6})
        CHECK(twist_coefficient(th) < 0.0);

    // exactly one sign change on (0, pi) minus the poles: grid each
    // pole-free interval separately
    auto count_changes = [](double lo, double hi) {
        int changes = 0;
        double prev = twist_coefficient(lo);
        for (int i = 1; i <= 10000; ++i) {
            double cur = twist_coefficient(lo + (hi - lo) * i / 10000.0);
            if ((prev < 0) != (cur < 0)) ++changes;
            prev = cur;
        }
        return changes;
    };
    CHECK(count_changes(0.01, 2.0 * pi / 3.0 - 1e-4) == 1);
    CHECK(count_changes(2.0 * pi / 3.0 + 1e-4, pi - 1e-4) == 0);

    // simple-pole limit at 2pi/3: (theta - 2pi/3) tau finite, negative,
    // consistent from both sides
    double thp = 2.0 * pi / 3.0;
    double left = (thp - 1e-6 - thp) * twist_coefficient(thp - 1e-6);
    double right = (thp + 1e-6 - thp) * twist_coefficient(thp + 1e-6);
    CHECK(left < 0.0);
    CHECK(right < 0.0);
    CHECK(std::abs(left - right) / std::abs(left) < 0.01);
}

TEST_CASE("local stability classification") {
    CHECK(classify_local_stability(3.0).stable == false);
    CHECK(classify_local_stability(3.0).reason == StabilityReason::third_order_resonance_unstable);
    CHECK(classify_local_stability(4.0).stable == true);
    CHECK(classify_local_stability(4.0).reason == StabilityReason::second_order_parabolic_stable);
    CHECK(classify_local_stability(2.0).stable == true);
    CHECK(classify_local_stability(2.0).reason == StabilityReason::fourth_order_simo_stable);
    CHECK(classify_local_stability(0.0).stable == false);
    CHECK(classify_local_stability(0.0).reason ==
          StabilityReason::saddle_center_parabolic_unstable);
    CHECK(classify_local_stability(-0.5).reason == StabilityReason::hyperbolic_unstable);
    CHECK(classify_local_stability(4.5).reason == StabilityReason::hyperbolic_unstable);
    CHECK(classify_local_stability(twist_root().mu_r).reason ==
          StabilityReason::twist_root_higher_order_stable);
    CHECK(classify_local_stability(1.7).reason == StabilityReason::elliptic_twist_stable);

    // scan: stable exactly on (0,4] \ {3}
    std::vector<double> mus = {-0.5, 0.0, twist_root().mu_r, 2.0, 3.0, 4.0};
    for (int i = 1; i <= 45; ++i) mus.push_back(0.1 * i);
    for (double mu : mus) {
        bool expect = (mu > 0.0 && mu <= 4.0 + 1e-12) && std::abs(mu - 3.0) > 1e-12;
        CHECK(classify_local_stability(mu).stable == expect);
    }
}

TEST_CASE("parabolic-case Taylor data") {
    auto f4 = taylor_coeffs_fourth_order();
    CHECK(f4.a2 == pi);
    CHECK(f4.a3 == -1.0 / 3.0);
    CHECK(f4.simo_unstable == false);  // NOT(0 < a3 <= a2^2)

    auto s2 = taylor_coeffs_second_order();
    CHECK(s2.b2 == -pi);
    CHECK(s2.b3 == 2.0 / 3.0);
    CHECK(s2.criterion == doctest::Approx(4.0 / 3.0 + pi * pi).epsilon(1e-15));
    CHECK(s2.criterion > 0.0);

    // coefficients agree with the series of a(x) and b(u) by finite check
    auto a_fn = [](double x) { return 2 * pi * (1 - std::cos(x)) - 2 * (x - std::sin(x)); };
    auto b_fn = [](double u) { return 2 * pi * (std::cos(u) - 1) + 4 * (u - std::sin(u)); };
    double x = 1e-2;
    CHECK(a_fn(x) == doctest::Approx(f4.a2 * x * x + f4.a3 * x * x * x).epsilon(1e-3));
    CHECK(b_fn(x) == doctest::Approx(s2.b2 * x * x + s2.b3 * x * x * x).epsilon(1e-3));
}

TEST_CASE("resonance parameter values") {
    CHECK(resonance_mu(make_resonance(1, 4)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(resonance_mu(make_resonance(1, 8)) ==
          doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
    CHECK(resonance_mu(make_resonance(1, 2)) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(resonance_mu(make_resonance(1, 6)) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(make_resonance(2, 4), std::domain_error);  // not coprime
    CHECK_THROWS_AS(make_resonance(3, 5), std::domain_error);  // m > n/2
    CHECK_THROWS_AS(make_resonance(0, 3), std::domain_error);

    // strictly increasing in m/n
    std::vector<ResonanceId> rs = {make_resonance(1, 9), make_resonance(1, 6),
                                   make_resonance(1, 4), make_resonance(1, 3),
                                   make_resonance(2, 5), make_resonance(1, 2)};
    for (size_t i = 0; i + 1 < rs.size(); ++i)
        CHECK(resonance_mu(rs[i]) < resonance_mu(rs[i + 1]));
}

TEST_CASE("asymptotic areas and the triangle") {
    CHECK(asymptotic_area_saddle_center(0.0) == 0.0);
    CHECK(asymptotic_area_saddle_center(1e-6) < 1e-12);
    CHECK(asymptotic_area_saddle_center(0.2) ==
          doctest::Approx(6.0 * std::pow(0.2, 2.5) / (5 * pi * pi)).epsilon(1e-15));

    // shoelace of the triangle vertices equals the closed form
    for (double eps : {0.3, -0.15, 0.05}) {
        auto v = third_order_triangle(eps);
        double area2 = 0;
        for (int i = 0; i < 3; ++i) {
            auto& p = v[i];
            auto& q = v[(i + 1) % 3];
            area2 += p.psi * q.w - q.psi * p.w;
        }
        CHECK(std::abs(area2) / 2 ==
              doctest::Approx(asymptotic_area_third_order(eps)).epsilon(1e-13));
    }
    // scaled vertices (1,0), (1,-3), (-2,3) have area 9/2
    auto v = third_order_triangle(pi);
    double area2 = 0;
    for (int i = 0; i < 3; ++i) {
        auto& p = v[i];
        auto& q = v[(i + 1) % 3];
        area2 += p.psi * q.w - q.psi * p.w;
    }
    CHECK(std::abs(area2) / 2 == doctest::Approx(4.5).epsilon(1e-14));
}

TEST_CASE("flat rotation fit") {
    // synthetic pure quartic recovers coefficients
    std::vector<std::pair<double, double>> samples;
    double c = 0.29332, d = -212.5;
    for (int i = 1; i <= 20; ++i) {
        double psi = 0.0025 * i;
        samples.push_back({psi, c + d * std::pow(psi, 4)});
        samples.push_back({-psi, c + d * std::pow(psi, 4)});
    }
    auto fit = flat_rotation_fit(samples);
    CHECK(fit.rho0 == doctest::Approx(c).epsilon(1e-10));
    CHECK(fit.rho2 == doctest::Approx(d).epsilon(1e-10));

    samples.resize(7);
    CHECK_THROWS_AS(flat_rotation_fit(samples), std::runtime_error);
}
