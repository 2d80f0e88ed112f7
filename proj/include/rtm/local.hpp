// Closed-form local theory at the elliptic fixed point: twist coefficient
// and its root, the local-stability classification over mu, resonance
// parameter values, Taylor data for the parabolic cases, and the asymptotic
// area/shape formulas near mu = 0 and mu = 3.
#pragma once

#include <array>
#include <span>
#include <utility>

#include "rtm/map.hpp"

namespace rtm::local {

/// Twist coefficient tau(theta) of the elliptic fixed point,
///   tau = (2c^3 - 3c^2 + 4 pi^2 c + 1 + pi^2) / ((c-1)(2c+1) s^2),
/// c = cos theta, s = sin theta.  Poles at theta in {0, 2pi/3, pi}.
/// Throws std::domain_error within 1e-9 of a pole or outside (0, pi).
double twist_coefficient(double theta);

struct TwistRoot {
    double theta_r;  // unique root of tau in (0, pi)
    double mu_r;     // 2 - 2 cos(theta_r)
};

/// Root of the twist coefficient, bracketed bisection on (1.5, 2.09)
/// plus Newton polish; |tau(theta_r)| < 1e-14.
TwistRoot twist_root();

enum class StabilityReason {
    hyperbolic_unstable,
    saddle_center_parabolic_unstable,
    elliptic_twist_stable,
    fourth_order_simo_stable,
    twist_root_higher_order_stable,
    third_order_resonance_unstable,
    second_order_parabolic_stable,
};

struct StabilityVerdict {
    bool stable;
    StabilityReason reason;
};

/// Local stability of the synchronous trajectory: stable iff
/// mu in (0,4] \ {3}.  Special values matched within 1e-12.
StabilityVerdict classify_local_stability(double mu);

/// Taylor data a(x) = 2pi(1-cos x) - 2(x - sin x) at the fourth-order
/// resonance (mu = 2); closed-form coefficients, not numerical derivatives.
struct FourthOrderCoeffs {
    double a2, a3;
    bool simo_unstable;  // 0 < a3 <= a2^2 would mean instability
};
FourthOrderCoeffs taylor_coeffs_fourth_order();

/// Taylor data b(u) = 2pi(cos u - 1) + 4(u - sin u) at the second-order
/// resonance (mu = 4); stability requires 2 b3 + b2^2 > 0.
struct SecondOrderCoeffs {
    double b2, b3;
    double criterion;  // 2 b3 + b2^2
};
SecondOrderCoeffs taylor_coeffs_second_order();

/// (m, n)-resonance identifier: coprime, 1 <= m <= n/2.
struct ResonanceId {
    int m, n;
};
/// Validates a ResonanceId; throws std::domain_error otherwise.
ResonanceId make_resonance(int m, int n);

/// Parameter value mu = 2 - 2 cos(2 pi m / n) at which p_s becomes
/// (m, n)-resonant.
double resonance_mu(ResonanceId r);

/// Leading-order stability-domain area 6 mu^{5/2} / (5 pi^2) near mu = 0.
double asymptotic_area_saddle_center(double mu);

/// Leading-order area 9 eps^2 / (2 pi^2) of the connected component near
/// mu = 3 + eps.
double asymptotic_area_third_order(double eps);

/// Triangle vertices (eps/pi)(1,0), (eps/pi)(1,-3), (eps/pi)(-2,3)
/// approximating the connected component near mu = 3 + eps.
std::array<PhasePoint, 3> third_order_triangle(double eps);

/// Least-squares fit rho(psi) = rho0 + rho2 psi^4 over samples on Fix(r0).
/// Requires at least 8 samples; throws std::runtime_error otherwise.
struct FlatFit {
    double rho0, rho2;
};
FlatFit flat_rotation_fit(std::span<const std::pair<double, double>> samples);

}  // namespace rtm::local
