#include "rtm/map.hpp"

#include <algorithm>

namespace rtm {

RtmParams params_from_mu(double mu) {
    if (!std::isfinite(mu)) throw std::domain_error("params_from_mu: mu must be finite");
    RtmParams par;
    par.mu = mu;
    par.phi_s = std::atan(mu / two_pi);
    // theta extends to the boundary mu = 4 (theta = pi); guard the acos
    // argument against rounding just past -1.
    if (mu > 0.0 && mu <= 4.0 + 1e-12)
        par.theta = std::acos(std::clamp(1.0 - mu / 2.0, -1.0, 1.0));
    if (mu > 0.0) par.h = std::acosh(1.0 + mu / 2.0);
    return par;
}

PhasePoint iterate(PhasePoint p, long n, const RtmParams& par) {
    if (n >= 0) {
        for (long i = 0; i < n; ++i) p = map_forward(p, par);
    } else {
        for (long i = 0; i < -n; ++i) p = map_inverse(p, par);
    }
    return p;
}

LiftedPoint iterate_lifted(LiftedPoint p, long n, const RtmParams& par) {
    long steps = n >= 0 ? n : -n;
    for (long i = 0; i < steps; ++i) {
        if (n >= 0) {
            double psi1 = p.psi_tilde + p.w;
            p = {psi1, p.w + eta(psi1, par)};
        } else {
            double w = p.w - eta(p.psi_tilde, par);
            p = {p.psi_tilde - w, w};
        }
        if (std::abs(p.psi_tilde) > 1e12)
            throw std::runtime_error("iterate_lifted: orbit unbounded (|psi_tilde| > 1e12)");
    }
    return p;
}

FixedPointLinearInfo linear_type_at_fixed_points(const RtmParams& par) {
    auto classify = [](double trace) {
        double a = std::abs(trace);
        if (a > 2.0) return LinearType::hyperbolic;
        if (a < 2.0) return LinearType::elliptic;
        return LinearType::parabolic;
    };
    FixedPointLinearInfo info;
    info.trace_s = 2.0 - par.mu;
    info.trace_h = 2.0 + par.mu;
    info.type_s = classify(info.trace_s);
    info.type_h = classify(info.trace_h);
    return info;
}

double potential(double psi, const RtmParams& par) {
    auto raw = [&](double x) { return two_pi * std::sin(x) - two_pi * x + par.mu * std::cos(x); };
    return raw(psi) - raw(-2.0 * par.phi_s);
}

}  // namespace rtm
