// Longitudinal phase map of a race-track microtron and its basic geometry:
// forward/inverse map, reversors, fixed points, Jacobians, twist generating
// function.  Phase space is the cylinder T x R with psi reduced to [-pi, pi).
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace rtm {

inline constexpr double two_pi = 6.283185307179586476925286766559;

/// Map parameter mu = 2*pi*tan(phi_s) plus the derived local quantities.
/// theta is defined iff 0 < mu < 4 (cos theta = 1 - mu/2), h iff mu > 0
/// (cosh h = 1 + mu/2).
struct RtmParams {
    double mu = 0.0;
    double phi_s = 0.0;
    std::optional<double> theta;
    std::optional<double> h;
};

/// Builds RtmParams from mu.  Throws std::domain_error for non-finite mu.
RtmParams params_from_mu(double mu);

struct PhasePoint {
    double psi = 0.0;  // reduced to [-pi, pi) after any map application
    double w = 0.0;
};

/// Point on the lift R x R; psi_tilde accumulates winding.
struct LiftedPoint {
    double psi_tilde = 0.0;
    double w = 0.0;
};

/// Reduces an angle to [-pi, pi).
inline double reduce_angle(double psi) {
    double r = std::remainder(psi, two_pi);
    return r == 3.141592653589793238462643383280 ? -r : r;
}

/// eta(psi) = 2*pi*(cos psi - 1) - mu*sin psi, the kick of the second
/// map component; eta(0) = eta(psi_h) = 0.
inline double eta(double psi, const RtmParams& par) {
    return two_pi * (std::cos(psi) - 1.0) - par.mu * std::sin(psi);
}

inline double eta_prime(double psi, const RtmParams& par) {
    return -two_pi * std::sin(psi) - par.mu * std::cos(psi);
}

inline PhasePoint map_forward(PhasePoint p, const RtmParams& par) {
    double psi1 = reduce_angle(p.psi + p.w);
    return {psi1, p.w + eta(psi1, par)};
}

/// Exact algebraic inverse: w = w1 - eta(psi1), psi = psi1 - w.
inline PhasePoint map_inverse(PhasePoint p, const RtmParams& par) {
    double w = p.w - eta(p.psi, par);
    return {reduce_angle(p.psi - w), w};
}

/// n-fold composition of map_forward (n > 0) or map_inverse (n < 0).
PhasePoint iterate(PhasePoint p, long n, const RtmParams& par);

/// Lifted variant; psi_tilde is never reduced.  Throws std::runtime_error
/// once |psi_tilde| exceeds 1e12 (orbit flagged unbounded).
LiftedPoint iterate_lifted(LiftedPoint p, long n, const RtmParams& par);

/// Reversor r0(psi, w) = (psi + w, -w); an involution with Fix(r0) = {w = 0}.
inline PhasePoint reversor_r0(PhasePoint p) {
    return {reduce_angle(p.psi + p.w), -p.w};
}

/// Reversor r1(psi, w) = (psi, eta(psi) - w); f = r1 o r0.
inline PhasePoint reversor_r1(PhasePoint p, const RtmParams& par) {
    return {p.psi, eta(p.psi, par) - p.w};
}

inline PhasePoint fixed_point_s() { return {0.0, 0.0}; }

/// Hyperbolic fixed point p_h = (-2*phi_s, 0).
inline PhasePoint fixed_point_h(const RtmParams& par) {
    return {-2.0 * par.phi_s, 0.0};
}

struct Mat2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
};

inline Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a11 * r.a11 + l.a12 * r.a21, l.a11 * r.a12 + l.a12 * r.a22,
            l.a21 * r.a11 + l.a22 * r.a21, l.a21 * r.a12 + l.a22 * r.a22};
}

/// Jacobian of map_forward at p: [[1, 1], [eta'(psi1), 1 + eta'(psi1)]].
inline Mat2 jacobian(PhasePoint p, const RtmParams& par) {
    double d = eta_prime(reduce_angle(p.psi + p.w), par);
    return {1.0, 1.0, d, 1.0 + d};
}

enum class LinearType { hyperbolic, parabolic, elliptic };

struct FixedPointLinearInfo {
    double trace_s = 0, trace_h = 0;
    LinearType type_s = LinearType::elliptic;
    LinearType type_h = LinearType::hyperbolic;
};

/// Traces T_s = 2 - mu, T_h = 2 + mu and the linear type of both fixed points.
FixedPointLinearInfo linear_type_at_fixed_points(const RtmParams& par);

/// Potential V with V' = eta, normalized so V(psi_h) = 0.  The normalization
/// makes homoclinic action sums absolutely convergent.
double potential(double psi, const RtmParams& par);

/// Twist generating function L(psi, psi1) = (psi1 - psi)^2/2 + V(psi1);
/// w = -dL/dpsi and w1 = dL/dpsi1 reproduce the map.
inline double generating_action(double psi, double psi1, const RtmParams& par) {
    double d = psi1 - psi;
    return 0.5 * d * d + potential(psi1, par);
}

}  // namespace rtm
