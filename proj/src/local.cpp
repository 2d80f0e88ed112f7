#include "rtm/local.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rtm::local {

namespace {
constexpr double pi = 3.141592653589793238462643383280;

double tau_numerator(double c) {
    return 2.0 * c * c * c - 3.0 * c * c + 4.0 * pi * pi * c + 1.0 + pi * pi;
}
}  // namespace

double twist_coefficient(double theta) {
    if (!(theta > 0.0 && theta < pi)) throw std::domain_error("twist_coefficient: theta outside (0, pi)");
    if (std::abs(theta - 2.0 * pi / 3.0) < 1e-9 || theta < 1e-9 || pi - theta < 1e-9)
        throw std::domain_error("twist_coefficient: theta at a pole of tau");
    double c = std::cos(theta), s = std::sin(theta);
    return tau_numerator(c) / ((c - 1.0) * (2.0 * c + 1.0) * s * s);
}

TwistRoot twist_root() {
    // Bracket (1.5, 2.09) avoids the poles at 0, 2pi/3, pi.
    double lo = 1.5, hi = 2.09;
    auto f = [](double th) { return twist_coefficient(th); };
    double flo = f(lo);
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    double th = 0.5 * (lo + hi);
    // Newton polish on the numerator cubic in c = cos(theta); the
    // denominator is nonzero and smooth near the root.
    for (int i = 0; i < 6; ++i) {
        double c = std::cos(th), s = std::sin(th);
        double num = tau_numerator(c);
        double dnum_dth = (6.0 * c * c - 6.0 * c + 4.0 * pi * pi) * (-s);
        double den = (c - 1.0) * (2.0 * c + 1.0) * s * s;
        th -= (num / den) / (dnum_dth / den);
    }
    return {th, 2.0 - 2.0 * std::cos(th)};
}

StabilityVerdict classify_local_stability(double mu) {
    if (!std::isfinite(mu)) throw std::domain_error("classify_local_stability: mu must be finite");
    constexpr double tol = 1e-12;
    if (mu < -tol || mu > 4.0 + tol)
        return {false, StabilityReason::hyperbolic_unstable};
    if (std::abs(mu) <= tol)
        return {false, StabilityReason::saddle_center_parabolic_unstable};
    if (std::abs(mu - 3.0) <= tol)
        return {false, StabilityReason::third_order_resonance_unstable};
    if (std::abs(mu - 4.0) <= tol)
        return {true, StabilityReason::second_order_parabolic_stable};
    if (std::abs(mu - 2.0) <= tol)
        return {true, StabilityReason::fourth_order_simo_stable};
    static const double mu_r = twist_root().mu_r;
    if (std::abs(mu - mu_r) <= tol)
        return {true, StabilityReason::twist_root_higher_order_stable};
    return {true, StabilityReason::elliptic_twist_stable};
}

FourthOrderCoeffs taylor_coeffs_fourth_order() {
    // a(x) = 2pi(1 - cos x) - 2(x - sin x) = pi x^2 - x^3/3 - ...
    double a2 = pi;
    double a3 = -1.0 / 3.0;
    bool unstable = (a3 > 0.0) && (a3 <= a2 * a2);
    return {a2, a3, unstable};
}

SecondOrderCoeffs taylor_coeffs_second_order() {
    // b(u) = 2pi(cos u - 1) + 4(u - sin u) = -pi u^2 + (2/3) u^3 + ...
    double b2 = -pi;
    double b3 = 2.0 / 3.0;
    return {b2, b3, 2.0 * b3 + b2 * b2};
}

ResonanceId make_resonance(int m, int n) {
    if (m < 1 || n < 2 || 2 * m > n || std::gcd(m, n) != 1)
        throw std::domain_error("make_resonance: need coprime m, n with 1 <= m <= n/2");
    return {m, n};
}

double resonance_mu(ResonanceId r) {
    return 2.0 - 2.0 * std::cos(2.0 * pi * r.m / r.n);
}

double asymptotic_area_saddle_center(double mu) {
    if (mu < 0.0) throw std::domain_error("asymptotic_area_saddle_center: mu must be >= 0");
    return 6.0 * std::pow(mu, 2.5) / (5.0 * pi * pi);
}

double asymptotic_area_third_order(double eps) {
    return 4.5 * eps * eps / (pi * pi);
}

std::array<PhasePoint, 3> third_order_triangle(double eps) {
    double s = eps / pi;
    return {PhasePoint{s, 0.0}, PhasePoint{s, -3.0 * s}, PhasePoint{-2.0 * s, 3.0 * s}};
}

FlatFit flat_rotation_fit(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 8) throw std::runtime_error("flat_rotation_fit: fewer than 8 valid samples");
    // Normal equations for rho = rho0 + rho2 * psi^4.
    double s0 = 0, s4 = 0, s8 = 0, sy = 0, s4y = 0;
    for (const auto& [psi, rho] : samples) {
        double p4 = psi * psi * psi * psi;
        s0 += 1.0;
        s4 += p4;
        s8 += p4 * p4;
        sy += rho;
        s4y += p4 * rho;
    }
    double det = s0 * s8 - s4 * s4;
    if (det == 0.0) throw std::runtime_error("flat_rotation_fit: degenerate sample set");
    return {(s8 * sy - s4 * s4y) / det, (s0 * s4y - s4 * sy) / det};
}

}  // namespace rtm::local
