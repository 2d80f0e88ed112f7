#include "rtm/rotation.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rtm::rot {

namespace {
constexpr double pi_d = 3.141592653589793238462643383280;
constexpr long double two_pi_l = 6.283185307179586476925286766559L;

// Clockwise angle swept from p to q around the origin, in (-pi, pi].
inline double swept_angle(double px, double pw, double qx, double qw) {
    double cross = px * qw - pw * qx;
    double dot = px * qx + pw * qw;
    return -std::atan2(cross, dot);
}

long double binomial_ld(long n, int k) {
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r *= static_cast<long double>(n - k + i) / i;
    return r;
}
}  // namespace

RefinedSums::RefinedSums(int P, int Q) : P_(P), Q_(Q) {
    if (P <= 0 || Q <= P) throw std::domain_error("RefinedSums: need 0 < P < Q");
    run_.assign(P, 0.0L);
    snapshot_.assign(Q + 1, 0.0L);
}

void RefinedSums::push(double x_n) {
    ++n_;
    run_[0] += static_cast<long double>(x_n);
    for (int p = 1; p < P_; ++p) run_[p] += run_[p - 1];
    if ((n_ & (n_ - 1)) == 0) {
        int q = 0;
        for (long v = n_; v > 1; v >>= 1) ++q;
        if (q <= Q_) snapshot_[q] = run_[P_ - 1];
    }
}

long double RefinedSums::theta_at(int Q) const {
    // Theta(P,Q) = sum_p c_p * Stilde^P_{Q-P+p} / sum_p c_p with
    // c_p = (-1)^{p-1} 2^{p(p+1)/2} / (delta_p delta_{P-p}); the weights on
    // linear data sum to +-1 exactly, so normalizing keeps Theta exact for
    // rigid rotations.
    std::vector<long double> delta(P_ + 1, 1.0L);
    for (int p = 1; p <= P_; ++p) delta[p] = delta[p - 1] * ((1L << p) - 1);
    long double total = 0.0L, wsum = 0.0L;
    for (int p = 0; p <= P_; ++p) {
        long double c = static_cast<long double>(1ULL << (p * (p + 1) / 2)) / (delta[p] * delta[P_ - p]);
        if ((p % 2) == 0) c = -c;  // (-1)^{p-1}
        int q = Q - P_ + p;
        long double stilde = snapshot_[q] / binomial_ld((1L << q) + P_, P_ + 1);
        total += c * stilde;
        wsum += c;
    }
    return total / wsum;
}

RotationEstimate RefinedSums::estimate() const {
    if (!complete()) throw std::runtime_error("RefinedSums: estimate before 2^Q samples");
    long double tq = theta_at(Q_);
    long double tq1 = theta_at(Q_ - 1);
    RotationEstimate e;
    e.theta_pq = static_cast<double>(tq);
    e.err_bound = static_cast<double>(std::abs(tq - tq1) / std::pow(2.0L, P_ + 1));
    e.P = P_;
    e.Q = Q_;
    return e;
}

std::vector<double> unwrapped_arguments(PhasePoint p, long N, const RtmParams& par,
                                        double control_w) {
    std::vector<double> phis;
    phis.reserve(N + 1);
    if (std::abs(p.psi) < 1e-13 && std::abs(p.w) < 1e-13)
        throw std::runtime_error("unwrapped_arguments: degenerate argument at p_s");
    double phi = -std::atan2(p.w, p.psi);
    phis.push_back(phi);
    PhasePoint cur = p;
    for (long n = 1; n <= N; ++n) {
        PhasePoint nxt = map_forward(cur, par);
        if (std::abs(nxt.w) > control_w)
            throw std::runtime_error("unwrapped_arguments: orbit escaped control region");
        if (std::abs(nxt.psi) < 1e-13 && std::abs(nxt.w) < 1e-13)
            throw std::runtime_error("unwrapped_arguments: degenerate argument at p_s");
        phi += swept_angle(cur.psi, cur.w, nxt.psi, nxt.w);
        phis.push_back(phi);
        cur = nxt;
    }
    return phis;
}

RotationEstimate refined_rotation_number(PhasePoint p, int P, int Q, const RtmParams& par,
                                         double control_w) {
    RefinedSums sums(P, Q);
    long N = 1L << Q;
    double phi0 = 0.0, phi = 0.0;
    PhasePoint cur = p;
    if (std::abs(p.psi) < 1e-13 && std::abs(p.w) < 1e-13)
        throw std::runtime_error("refined_rotation_number: degenerate argument at p_s");
    for (long n = 1; n <= N; ++n) {
        PhasePoint nxt = map_forward(cur, par);
        if (std::abs(nxt.w) > control_w)
            throw std::runtime_error("refined_rotation_number: orbit escaped control region");
        phi += swept_angle(cur.psi, cur.w, nxt.psi, nxt.w);
        sums.push(phi - phi0);
        cur = nxt;
    }
    return sums.estimate();
}

namespace {

// Provisional per-step clockwise angle from the second-iterate map, for
// orbits whose single-step swing approaches pi (theta near pi).  The
// two-step swing 2*theta mod 2pi stays away from the branch cut.
double provisional_step_angle(PhasePoint p, const RtmParams& par, double control_w, bool& escaped) {
    const int pairs = 1 << 11;
    PhasePoint cur = p;
    double acc = 0.0;
    for (int k = 0; k < pairs; ++k) {
        PhasePoint mid = map_forward(cur, par);
        PhasePoint nxt = map_forward(mid, par);
        if (std::abs(mid.w) > control_w || std::abs(nxt.w) > control_w) {
            escaped = true;
            return 0.0;
        }
        acc += swept_angle(cur.psi, cur.w, nxt.psi, nxt.w);
        cur = nxt;
    }
    double mean2 = acc / pairs;            // ~ 2*theta - 2*pi, in (-pi, pi]
    return 0.5 * (mean2 + 2.0 * pi_d);     // expected single-step angle
}

}  // namespace

OrbitClass classify_point(PhasePoint p, const RtmParams& par, const ClassifyOptions& opt) {
    OrbitClass out;
    if (std::abs(p.psi) < 1e-13 && std::abs(p.w) < 1e-13) {
        out.kind = OrbitKind::degenerate;
        return out;
    }
    bool two_pass = par.theta && *par.theta > opt.two_pass_theta;
    double expected = 0.0;
    if (two_pass) {
        bool escaped = false;
        expected = provisional_step_angle(p, par, opt.control_w, escaped);
        if (escaped) {
            out.kind = OrbitKind::escaped;
            return out;
        }
    }

    RefinedSums sums(opt.P, opt.Q);
    long N = 1L << opt.Q;
    double phi = 0.0;
    PhasePoint cur = p;
    for (long n = 1; n <= N; ++n) {
        PhasePoint nxt = map_forward(cur, par);
        if (std::abs(nxt.w) > opt.control_w) {
            out.kind = OrbitKind::escaped;
            return out;
        }
        if (std::abs(nxt.psi) < 1e-13 && std::abs(nxt.w) < 1e-13) {
            out.kind = OrbitKind::degenerate;
            return out;
        }
        double d = swept_angle(cur.psi, cur.w, nxt.psi, nxt.w);
        if (two_pass) d += two_pi * std::round((expected - d) / two_pi);
        phi += d;
        sums.push(phi);
        cur = nxt;
    }
    RotationEstimate est = sums.estimate();
    out.rho = std::abs(est.rho());
    out.err_bound = est.err_bound;
    if (est.err_bound > opt.tol) {
        out.kind = OrbitKind::chaotic;
        return out;
    }
    if (auto rat = rational_from_cf(out.rho)) {
        out.kind = OrbitKind::rational;
        out.m = static_cast<int>(rat->num);
        out.n = static_cast<int>(rat->den);
    } else {
        out.kind = OrbitKind::irrational;
    }
    return out;
}

std::vector<long> continued_fraction(double rho, int max_terms) {
    if (!(rho > 0.0 && rho < 1.0)) throw std::domain_error("continued_fraction: rho outside (0,1)");
    std::vector<long> terms;
    double x = rho;
    for (int i = 0; i < max_terms; ++i) {
        double inv = 1.0 / x;
        if (inv > 1e15) break;
        long a = static_cast<long>(std::floor(inv));
        terms.push_back(a);
        x = inv - a;
        if (x <= 0.0 || a > 1000000L) break;
    }
    return terms;
}

std::optional<Rational> rational_from_cf(double rho, int max_terms, double blowup) {
    if (!(rho > 0.0 && rho < 1.0)) return std::nullopt;
    // Convergents p_k/q_k of [0; a1, a2, ...]; stop at quotient blow-up.
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double x = rho;
    for (int i = 0; i < max_terms; ++i) {
        double inv = 1.0 / x;
        if (inv > blowup) {
            long g = std::gcd(p0, q0);
            return Rational{p0 / g, q0 / g};
        }
        long a = static_cast<long>(std::floor(inv));
        long p2 = a * p0 + p1, q2 = a * q0 + q1;
        p1 = p0;
        q1 = q0;
        p0 = p2;
        q0 = q2;
        x = inv - a;
        if (x <= 0.0) {
            long g = std::gcd(p0, q0);
            return Rational{p0 / g, q0 / g};
        }
    }
    return std::nullopt;
}

Rational smallest_denominator_in(double lo, double hi) {
    if (!(lo < hi)) throw std::domain_error("smallest_denominator_in: empty interval");
    // Stern-Brocot descent; hi_inf marks an unbounded upper endpoint after
    // inverting at an integer boundary.
    struct Frame {
        long a;
    };
    std::vector<Frame> stack;
    bool hi_inf = false;
    for (int depth = 0; depth < 64; ++depth) {
        long a = static_cast<long>(std::floor(lo));
        if (hi_inf || static_cast<double>(a + 1) < hi) {
            // integer a+1 lies inside (lo, hi): unwind
            long num = a + 1, den = 1;
            for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
                // undo x_outer = a + 1/x_inner
                long n2 = it->a * num + den;
                den = num;
                num = n2;
            }
            return {num, den};
        }
        stack.push_back({a});
        double flo = lo - a, fhi = hi - a;
        if (flo <= 0.0) {
            lo = 1.0 / fhi;
            hi_inf = true;
        } else {
            lo = 1.0 / fhi;
            hi = 1.0 / flo;
            hi_inf = false;
        }
    }
    throw std::runtime_error("smallest_denominator_in: descent did not terminate");
}

}  // namespace rtm::rot
