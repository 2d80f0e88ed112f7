#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rtm/rotation.hpp"

using namespace rtm;
using namespace rtm::rot;

namespace {
constexpr double pi = 3.141592653589793238462643383280;

RotationEstimate estimate_synthetic(int P, int Q, double theta) {
    RefinedSums sums(P, Q);
    for (long n = 1; n <= (1L << Q); ++n) sums.push(n * theta);
    return sums.estimate();
}
}  // namespace

TEST_CASE("estimator is exact on rigid rotations") {
    double golden = two_pi * (std::sqrt(5.0) - 1.0) / 2.0;
    for (auto [P, Q] : {std::pair{1, 5}, {2, 6}, {3, 8}, {7, 15}}) {
        RotationEstimate e = estimate_synthetic(P, Q, golden);
        CHECK(e.theta_pq == doctest::Approx(golden).epsilon(1e-12));
    }
    RotationEstimate e = estimate_synthetic(7, 15, golden);
    CHECK(std::abs(e.rho() - golden / two_pi) < 1e-12);
    CHECK(e.err_bound < 1e-10);
}

TEST_CASE("streaming sums equal direct sums on integer data") {
    // Integer inputs make every nested sum an exact integer in long double,
    // so the streaming recurrence and the naive double loop agree exactly.
    const int P = 7, Q = 9;
    const long N = 1L << Q;
    std::vector<long double> x(N + 1);
    for (long j = 1; j <= N; ++j) x[j] = static_cast<long double>(j % 7);

    RefinedSums sums(P, Q);
    for (long j = 1; j <= N; ++j) sums.push(static_cast<double>(x[j]));
    RotationEstimate streaming = sums.estimate();

    // direct: S^p_n by definition
    std::vector<std::vector<long double>> S(P + 1, std::vector<long double>(N + 1, 0.0L));
    for (long n = 1; n <= N; ++n) S[1][n] = S[1][n - 1] + x[n];
    for (int p = 2; p <= P; ++p)
        for (long n = 1; n <= N; ++n) S[p][n] = S[p][n - 1] + S[p - 1][n];

    auto binom = [](long n, int k) {
        long double r = 1.0L;
        for (int i = 1; i <= k; ++i) r *= static_cast<long double>(n - k + i) / i;
        return r;
    };
    auto theta_direct = [&](int QQ) {
        std::vector<long double> delta(P + 1, 1.0L);
        for (int p = 1; p <= P; ++p) delta[p] = delta[p - 1] * ((1L << p) - 1);
        long double tot = 0, wsum = 0;
        for (int p = 0; p <= P; ++p) {
            long double c =
                static_cast<long double>(1ULL << (p * (p + 1) / 2)) / (delta[p] * delta[P - p]);
            if (p % 2 == 0) c = -c;
            int q = QQ - P + p;
            long double stilde = S[P][1L << q] / binom((1L << q) + P, P + 1);
            tot += c * stilde;
            wsum += c;
        }
        return tot / wsum;
    };
    long double direct = theta_direct(Q);
    CHECK(static_cast<double>(direct) == streaming.theta_pq);
}

TEST_CASE("unwrapped arguments converge to the linear tune") {
    RtmParams par = params_from_mu(2.0);
    auto phis = unwrapped_arguments({1e-4, 0.0}, 8192, par);
    double r512 = (phis[512] - phis[0]) / (two_pi * 512);
    double r8192 = (phis[8192] - phis[0]) / (two_pi * 8192);
    CHECK(std::abs(r512 - 0.25) < 1e-4);
    CHECK(std::abs(r8192 - 0.25) < 1e-6);

    CHECK_THROWS_AS(unwrapped_arguments({0.0, 0.0}, 10, par), std::runtime_error);
}

TEST_CASE("refined rotation number near the elliptic point") {
    // The rotation number differs from the linear tune by the twist
    // correction tau r^2 / 2pi, so the limit 1/4 is approached as the
    // amplitude shrinks.
    RtmParams par = params_from_mu(2.0);
    RotationEstimate e3 = refined_rotation_number({1e-3, 0.0}, 7, 15, par);
    RotationEstimate e4 = refined_rotation_number({1e-4, 0.0}, 7, 15, par);
    CHECK(std::abs(e3.rho() - 0.25) < 2e-6);
    CHECK(std::abs(e4.rho() - 0.25) < 1e-7);
    CHECK(std::abs(e4.rho() - 0.25) < std::abs(e3.rho() - 0.25));

    RtmParams par15 = params_from_mu(1.5);
    RotationEstimate e15 = refined_rotation_number({1e-4, 0.0}, 7, 15, par15);
    double expect = std::acos(1.0 - 1.5 / 2.0) / two_pi;
    CHECK(std::abs(e15.rho() - expect) < 1e-7);

    CHECK_THROWS_AS(refined_rotation_number({0.0, 0.99}, 7, 15, params_from_mu(0.1)),
                    std::runtime_error);
}

TEST_CASE("time reversal through r0 preserves the estimate") {
    RtmParams par = params_from_mu(1.5);
    PhasePoint p{0.05, 0.01};
    RotationEstimate fwd = refined_rotation_number(p, 7, 12, par);

    // backward orbit of r0(p): feed the estimator with inverse-map sweeps
    PhasePoint q = reversor_r0(p);
    RefinedSums sums(7, 12);
    double phi = 0;
    PhasePoint cur = q;
    for (long n = 1; n <= (1L << 12); ++n) {
        PhasePoint nxt = map_inverse(cur, par);
        phi += -std::atan2(cur.psi * nxt.w - cur.w * nxt.psi, cur.psi * nxt.psi + cur.w * nxt.w);
        sums.push(phi);
        cur = nxt;
    }
    RotationEstimate bwd = sums.estimate();
    // reversal flips the sweep sign
    CHECK(std::abs(bwd.theta_pq + fwd.theta_pq) <
          2 * (fwd.err_bound + bwd.err_bound) + 1e-10);
}

TEST_CASE("error bound decreases with Q on a smooth orbit") {
    RtmParams par = params_from_mu(1.5);
    double prev = 0;
    int improved = 0;
    for (int Q = 9; Q <= 13; ++Q) {
        RotationEstimate e = refined_rotation_number({1e-3, 0.0}, 4, Q, par);
        if (Q > 9 && e.err_bound < prev / 8.0) ++improved;
        prev = e.err_bound;
    }
    CHECK(improved >= 3);  // near 2^{P+1}=32 per step until the fp floor
    RotationEstimate e = refined_rotation_number({1e-3, 0.0}, 7, 15, par);
    CHECK(e.err_bound < 1e-10);
}

TEST_CASE("classification of orbits") {
    // irrational RIC point
    RtmParams par15 = params_from_mu(1.5);
    OrbitClass oc = classify_point({1e-3, 0.0}, par15);
    CHECK(oc.kind == OrbitKind::irrational);
    CHECK(oc.rho == doctest::Approx(std::acos(0.25) / two_pi).epsilon(1e-6));

    // escaped
    OrbitClass esc = classify_point({0.0, 0.99}, params_from_mu(0.1));
    CHECK(esc.kind == OrbitKind::escaped);

    // degenerate at p_s
    CHECK(classify_point({0.0, 0.0}, par15).kind == OrbitKind::degenerate);

    // chaotic shell crossing Fix(r0) just after the (1,4) loss
    RtmParams par2038 = params_from_mu(2.038);
    bool found_chaotic = false;
    for (double psi = 0.06; psi <= 0.22; psi += 0.004) {
        OrbitClass c = classify_point({psi, 0.0}, par2038);
        if (c.kind == OrbitKind::chaotic) {
            found_chaotic = true;
            break;
        }
    }
    CHECK(found_chaotic);
}

TEST_CASE("rho at the (1,4) escape matches the linear tune") {
    // at mu inside (2.037, 2.038) the fixed-point rotation number is close
    // to 0.25302
    RtmParams par = params_from_mu(2.0375);
    double lin = std::acos(1.0 - 2.0375 / 2.0) / two_pi;
    CHECK(lin == doctest::Approx(0.25302).epsilon(2e-4));
    OrbitClass oc = classify_point({1e-4, 0.0}, par);
    CHECK(oc.rho == doctest::Approx(lin).epsilon(1e-6));
}

TEST_CASE("continued fractions and rationality") {
    auto cf = continued_fraction(0.25, 10);
    REQUIRE(cf.size() >= 1);
    CHECK(cf[0] == 4);

    double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    auto cfg = continued_fraction(golden, 12);
    REQUIRE(cfg.size() == 12);
    for (long q : cfg) CHECK(q == 1);

    auto r = rational_from_cf(0.2500000000012);
    REQUIRE(r.has_value());
    CHECK(r->num == 1);
    CHECK(r->den == 4);
    // the measured rotation number at the (1,4) loss is irrational
    double rho_star = std::acos(1.0 - 2.0375 / 2.0) / two_pi;
    CHECK(!rational_from_cf(rho_star).has_value());
    CHECK(!rational_from_cf(golden).has_value());

    auto twofifths = rational_from_cf(0.4 + 2e-13);
    REQUIRE(twofifths.has_value());
    CHECK(twofifths->num == 2);
    CHECK(twofifths->den == 5);
}

TEST_CASE("smallest denominator rational in an interval") {
    Rational r = smallest_denominator_in(0.25, 0.25302);
    CHECK(r.num == 21);
    CHECK(r.den == 83);
    Rational half = smallest_denominator_in(0.4, 0.6);
    CHECK(half.num == 1);
    CHECK(half.den == 2);
    Rational i = smallest_denominator_in(0.2, 1.5);
    CHECK(i.num == 1);
    CHECK(i.den == 1);
}
