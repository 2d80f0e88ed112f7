#include "rtm/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rtm::mfd {

namespace {

big pi_big() { return acos(big(-1)); }

big eta_big(const big& psi, const big& mu, const big& pi2) {
    return pi2 * (cos(psi) - 1) - mu * sin(psi);
}

big etap_big(const big& psi, const big& mu, const big& pi2) {
    return -pi2 * sin(psi) - mu * cos(psi);
}

}  // namespace

unsigned PrecisionContext::digits10() const {
    return static_cast<unsigned>(std::ceil(mantissa_bits * 0.30102999566398119522)) + 2;
}

PrecisionScope::PrecisionScope(const PrecisionContext& ctx) {
    if (ctx.mantissa_bits < 64) throw std::domain_error("PrecisionContext: need >= 64 mantissa bits");
    saved_ = big::default_precision();
    big::default_precision(ctx.digits10());
}

PrecisionScope::~PrecisionScope() { big::default_precision(saved_); }

BigPoint map_forward_big(const BigPoint& p, const big& mu, const big& pi2) {
    big psi1 = p.psi + p.w;
    return {psi1, p.w + eta_big(psi1, mu, pi2)};
}

BigPoint map_inverse_big(const BigPoint& p, const big& mu, const big& pi2) {
    big w = p.w - eta_big(p.psi, mu, pi2);
    return {p.psi - w, w};
}

BigPoint hyperbolic_fixed_point_big(const RtmParams& par, const PrecisionContext& ctx) {
    PrecisionScope scope(ctx);
    return {-2 * atan(big(par.mu) / (2 * pi_big())), big(0)};
}

BigPoint ManifoldSeries::eval(const big& t) const {
    big x = 0, y = 0;
    for (int k = order(); k >= 1; --k) {
        x = (x + a[k]) * t;
        y = (y + b[k]) * t;
    }
    return {a[0] + x, b[0] + y};
}

BigPoint ManifoldSeries::point(const big& t) const {
    big s = t;
    int m = 0;
    big tf = t_fund;
    while (abs(s) > tf) {
        s /= multiplier;
        ++m;
    }
    BigPoint z = eval(s);
    for (int i = 0; i < m * period; ++i)
        z = branch == Branch::unstable ? map_forward_big(z, mu, pi2) : map_inverse_big(z, mu, pi2);
    return z;
}

big ManifoldSeries::defect(const big& t) const {
    BigPoint z = eval(t);
    for (int i = 0; i < period; ++i)
        z = branch == Branch::unstable ? map_forward_big(z, mu, pi2) : map_inverse_big(z, mu, pi2);
    BigPoint zl = eval(multiplier * t);
    big d1 = abs(z.psi - zl.psi), d2 = abs(z.w - zl.w);
    return d1 > d2 ? d1 : d2;
}

namespace {

struct CycleData {
    std::vector<BigPoint> next;  // cycle points p_1..p_n (p_n == p_0)
    std::vector<big> A, B;       // per-leg eta coefficients at p_{j+1}
    big m00, m01, m10, m11;      // n-fold Jacobian
    big lambda, vx, vy;          // unstable multiplier and eigenvector
};

CycleData build_cycle(const BigPoint& base, int period, const big& mu, const big& pi2) {
    CycleData c;
    c.m00 = 1; c.m01 = 0; c.m10 = 0; c.m11 = 1;
    BigPoint p = base;
    for (int j = 0; j < period; ++j) {
        big psi1 = p.psi + p.w;
        big d = etap_big(psi1, mu, pi2);
        c.A.push_back(pi2 * cos(psi1) - mu * sin(psi1));
        c.B.push_back(d);
        // leg Jacobian [[1,1],[d,1+d]] times accumulated
        big n00 = c.m00 + c.m10, n01 = c.m01 + c.m11;
        big n10 = d * n00 + c.m10, n11 = d * n01 + c.m11;
        c.m00 = n00; c.m01 = n01; c.m10 = n10; c.m11 = n11;
        p = map_forward_big(p, mu, pi2);
        c.next.push_back(p);
    }
    big tr = c.m00 + c.m11;
    if (tr <= 2) throw std::domain_error("unstable_series: base point is not hyperbolic (trace <= 2)");
    c.lambda = tr / 2 + sqrt(tr * tr / 4 - 1);
    c.vx = c.m01;
    c.vy = c.lambda - c.m00;
    big nv = sqrt(c.vx * c.vx + c.vy * c.vy);
    c.vx /= nv;
    c.vy /= nv;
    return c;
}

// Order-by-order solve of f^period(z(t)) = z(lambda t).  Per-leg sin/cos
// series are kept incrementally, so order k costs O(period * k).
void solve_series(const CycleData& c, const BigPoint& base, int period, int N,
                  std::vector<big>& a_out, std::vector<big>& b_out) {
    int n = period;
    std::vector<std::vector<big>> P(n + 1, std::vector<big>(N + 1, big(0)));
    std::vector<std::vector<big>> W(n + 1, std::vector<big>(N + 1, big(0)));
    std::vector<std::vector<big>> S(n, std::vector<big>(N + 1, big(0)));
    std::vector<std::vector<big>> C(n, std::vector<big>(N + 1, big(0)));
    P[0][0] = base.psi;
    W[0][0] = base.w;
    for (int j = 0; j < n; ++j) {
        C[j][0] = 1;
        P[j + 1][0] = c.next[j].psi;
        W[j + 1][0] = c.next[j].w;
    }
    P[0][1] = c.vx;
    W[0][1] = c.vy;
    for (int j = 0; j < n; ++j) {
        P[j + 1][1] = P[j][1] + W[j][1];
        S[j][1] = P[j + 1][1];
        W[j + 1][1] = W[j][1] + c.B[j] * S[j][1];
    }
    std::vector<big> slow(n), clow(n), Pk(n + 1), Wk(n + 1);
    for (int k = 2; k <= N; ++k) {
        for (int j = 0; j < n; ++j) {
            big s = 0, cc = 0;
            for (int i = 1; i < k; ++i) {
                s += i * P[j + 1][i] * C[j][k - i];
                cc += i * P[j + 1][i] * S[j][k - i];
            }
            slow[j] = s / k;
            clow[j] = -cc / k;
        }
        auto propagate = [&](const big& xi_p, const big& xi_w) {
            Pk[0] = xi_p;
            Wk[0] = xi_w;
            for (int j = 0; j < n; ++j) {
                Pk[j + 1] = Pk[j] + Wk[j];
                Wk[j + 1] = Wk[j] + c.A[j] * clow[j] + c.B[j] * (slow[j] + Pk[j + 1]);
            }
        };
        propagate(big(0), big(0));
        big rx = Pk[n], ry = Wk[n];
        big lk = pow(c.lambda, k);
        big det = (c.m00 - lk) * (c.m11 - lk) - c.m01 * c.m10;
        big xi_p = ((c.m11 - lk) * (-rx) - c.m01 * (-ry)) / det;
        big xi_w = (-c.m10 * (-rx) + (c.m00 - lk) * (-ry)) / det;
        propagate(xi_p, xi_w);
        for (int j = 0; j <= n; ++j) {
            P[j][k] = Pk[j];
            W[j][k] = Wk[j];
        }
        for (int j = 0; j < n; ++j) {
            S[j][k] = slow[j] + Pk[j + 1];
            C[j][k] = clow[j];
        }
    }
    a_out = std::move(P[0]);
    b_out = std::move(W[0]);
}

}  // namespace

ManifoldSeries unstable_series(const BigPoint& base, int period, const RtmParams& par,
                               const PrecisionContext& ctx, const SeriesOptions& opt) {
    PrecisionScope scope(ctx);
    ManifoldSeries s;
    s.mu = big(par.mu);
    s.pi2 = 2 * pi_big();
    s.base = base;
    s.period = period;
    s.branch = Branch::unstable;

    CycleData cyc = build_cycle(base, period, s.mu, s.pi2);
    s.multiplier = cyc.lambda;

    big target = ldexp(big(1), -static_cast<long>(0.8 * ctx.mantissa_bits));
    int N = opt.order > 0 ? opt.order : 60;
    bool fixed_order = opt.order > 0;
    while (true) {
        solve_series(cyc, base, period, N, s.a, s.b);
        // Largest dyadic t with conjugacy defect below target.
        int found = 1;
        for (int e = 0; e >= -40; --e) {
            big t = ldexp(big(1), e);
            if (s.defect(t) <= target) {
                found = e;
                break;
            }
        }
        if (found <= 0 && found >= -(fixed_order ? 40 : 12)) {
            s.t_fund = ldexp(big(1), found);
            break;
        }
        if (fixed_order || N >= opt.max_order) {
            if (found == 1)
                throw std::runtime_error("unstable_series: residual target unreachable at max order");
            s.t_fund = ldexp(big(1), found);
            break;
        }
        N = std::min(opt.max_order, N + N / 2);
    }
    if (opt.t_fund_hint > 0) s.t_fund = big(opt.t_fund_hint);
    // Rescale so the fundamental parameter is 1; dyadic scale keeps the
    // coefficients exact.
    big scale = s.t_fund, p = 1;
    for (size_t k = 1; k < s.a.size(); ++k) {
        p *= scale;
        s.a[k] *= p;
        s.b[k] *= p;
    }
    s.t_fund = 1;
    s.residual = s.defect(s.t_fund);
    return s;
}

ManifoldSeries stable_from_unstable(const ManifoldSeries& u) {
    ManifoldSeries s = u;
    s.branch = Branch::stable;
    for (size_t k = 0; k < s.a.size(); ++k) {
        s.a[k] = u.a[k] + u.b[k];  // r0: (psi, w) -> (psi + w, -w)
        s.b[k] = -u.b[k];
    }
    return s;
}

HomoclinicPoint primary_homoclinic(const ManifoldSeries& u, SymLine line,
                                   const PrecisionContext& ctx) {
    PrecisionScope scope(ctx);
    auto g = [&](const big& t) {
        BigPoint z = u.point(t);
        if (line == SymLine::fix_r0) return z.w;
        return z.w - eta_big(z.psi, u.mu, u.pi2) / 2;
    };
    // Scan outward from deep inside the fundamental domain in small
    // multiplicative steps; the first sign change brackets t*.
    big step = pow(u.multiplier, big(1) / 32);
    big t = u.t_fund / (u.multiplier * u.multiplier * u.multiplier);
    big g0 = g(t);
    const int max_steps = 32 * 3 + 32 * 40;
    bool bracketed = false;
    big lo = t, hi = t;
    for (int i = 0; i < max_steps; ++i) {
        big t1 = t * step;
        big g1 = g(t1);
        if ((g0 < 0) != (g1 < 0)) {
            lo = t;
            hi = t1;
            bracketed = true;
            break;
        }
        t = t1;
        g0 = g1;
    }
    if (!bracketed)
        throw std::runtime_error("primary_homoclinic: no symmetry-line crossing in scan window");
    big glo = g(lo);
    int iters = static_cast<int>(3.4 * ctx.digits10()) + 16;
    for (int i = 0; i < iters; ++i) {
        big mid = (lo + hi) / 2;
        big gm = g(mid);
        if ((glo < 0) == (gm < 0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    HomoclinicPoint hp;
    hp.t_star = (lo + hi) / 2;
    hp.point = u.point(hp.t_star);
    return hp;
}

namespace {

// Total generating-function action of the symmetric homoclinic orbit
// through z(t*) on the given symmetry line.  Only the lifted psi sequence
// enters the action; the forward half is the reversor image of the
// backward half.
big homoclinic_action(const ManifoldSeries& u, const big& t_star, SymLine line,
                      unsigned digits10) {
    const big& mu = u.mu;
    const big& pi2 = u.pi2;
    big psih = u.a[0];
    // V(psi) = 2 pi sin psi - 2 pi psi + mu cos psi, normalized at psi_h so
    // the tail terms of the action sum vanish quadratically.
    big vh = pi2 * sin(psih) - pi2 * psih + mu * cos(psih);
    auto V = [&](const big& psi) { return pi2 * sin(psi) - pi2 * psi + mu * cos(psi) - vh; };
    big cut = pow(big(10), -static_cast<long>(digits10 + 10));

    // Backward points p_0, p_-1, ... until the action terms fall below cut.
    std::vector<BigPoint> back;
    back.push_back(u.point(t_star));
    const int cap = 50000;
    for (int k = 1; k < cap; ++k) {
        back.push_back(u.point(t_star / pow(u.multiplier, k)));
        if (k > 4) {
            const BigPoint& q = back[k];
            big d1 = abs(q.psi - psih), d2 = abs(q.w);
            big term = d1 * d1 + d2 * d2;
            if (term < cut) break;
        }
    }
    int M = static_cast<int>(back.size()) - 1;

    // psi lift sequence from n = -M .. M.
    std::vector<big> psis;
    psis.reserve(2 * M + 1);
    for (int i = M; i >= 0; --i) psis.push_back(back[i].psi);
    for (int nfw = 1; nfw <= M; ++nfw) {
        const BigPoint& q = back[nfw];
        if (line == SymLine::fix_r0)
            psis.push_back(q.psi + q.w);  // r0 image
        else
            psis.push_back(q.psi);  // r1 keeps psi
    }
    big total = 0;
    for (size_t i = 0; i + 1 < psis.size(); ++i) {
        big d = psis[i + 1] - psis[i];
        total += d * d / 2 + V(psis[i + 1]);
    }
    return total;
}

big shoelace_lobe(const ManifoldSeries& u, const big& t1, const big& t0, int K) {
    // Closed boundary: unstable arc z(t), t in [t1, t0], then the stable
    // arc back, which is the r0 image of the unstable arc over [t1/lambda, t0]
    // traversed in reverse.
    std::vector<BigPoint> poly;
    poly.reserve(2 * K + 2);
    big ratio = t0 / t1;
    for (int i = 0; i <= K; ++i)
        poly.push_back(u.point(t1 * pow(ratio, big(i) / K)));
    big ratio2 = t0 / (t1 / u.multiplier);
    for (int i = K; i >= 0; --i) {
        BigPoint z = u.point((t1 / u.multiplier) * pow(ratio2, big(i) / K));
        poly.push_back({z.psi + z.w, -z.w});
    }
    big area2 = 0;
    for (size_t i = 0; i < poly.size(); ++i) {
        const BigPoint& p = poly[i];
        const BigPoint& q = poly[(i + 1) % poly.size()];
        area2 += p.psi * q.w - q.psi * p.w;
    }
    return abs(area2) / 2;
}

}  // namespace

LobeResult lobe_area(double mu, const PrecisionContext& ctx, const SeriesOptions& opt) {
    RtmParams par = params_from_mu(mu);
    if (!(mu > 0) || !par.h) throw std::domain_error("lobe_area: mu must be positive");
    PrecisionScope scope(ctx);

    BigPoint ph = hyperbolic_fixed_point_big(par, ctx);
    ManifoldSeries u = unstable_series(ph, 1, par, ctx, opt);

    HomoclinicPoint h1 = primary_homoclinic(u, SymLine::fix_r1, ctx);
    HomoclinicPoint h0 = primary_homoclinic(u, SymLine::fix_r0, ctx);

    big wa = homoclinic_action(u, h0.t_star, SymLine::fix_r0, ctx.digits10());
    big wb = homoclinic_action(u, h1.t_star, SymLine::fix_r1, ctx.digits10());

    LobeResult out;
    out.mu = mu;
    out.h = *par.h;
    out.bits = ctx.mantissa_bits;
    out.order = u.order();
    out.area_action = abs(wa - wb);

    // Loop quadrature, refined until stable to 1e-7 relative.
    int K = 512;
    big prev = shoelace_lobe(u, h1.t_star, h0.t_star, K);
    for (; K <= 16384; K *= 2) {
        big cur = shoelace_lobe(u, h1.t_star, h0.t_star, 2 * K);
        big rel = abs(cur - prev) / abs(cur);
        prev = cur;
        if (rel < 1e-7) break;
    }
    out.area_quadrature = prev;
    return out;
}

SplittingFit splitting_fit(std::span<const double> h_grid, const PrecisionContext& ctx) {
    if (h_grid.size() < 4) throw std::runtime_error("splitting_fit: need at least 4 grid points");
    SplittingFit fit;
    fit.h.assign(h_grid.begin(), h_grid.end());
    fit.scaled.resize(h_grid.size());

    std::vector<big> scaled_big(h_grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1)
#endif
    for (long i = 0; i < static_cast<long>(h_grid.size()); ++i) {
        PrecisionScope scope(ctx);
        double h = h_grid[i];
        double mu = 2.0 * (std::cosh(h) - 1.0);
        LobeResult lr = lobe_area(mu, ctx);
        big pi_b = acos(big(-1));
        big s = lr.area_action * exp(2 * pi_b * pi_b / big(h));
        scaled_big[i] = s;
    }
    PrecisionScope scope(ctx);
    for (size_t i = 0; i < h_grid.size(); ++i) fit.scaled[i] = scaled_big[i].convert_to<double>();

    // Least squares on {1, h^2, h^4, h^6}: normal equations in big.
    constexpr int B = 4;
    big ata[B][B] = {};
    big aty[B] = {};
    for (size_t r = 0; r < h_grid.size(); ++r) {
        big h2 = big(h_grid[r]) * h_grid[r];
        big basis[B] = {big(1), h2, h2 * h2, h2 * h2 * h2};
        for (int i = 0; i < B; ++i) {
            for (int j = 0; j < B; ++j) ata[i][j] += basis[i] * basis[j];
            aty[i] += basis[i] * scaled_big[r];
        }
    }
    // Gaussian elimination with partial pivoting.
    for (int col = 0; col < B; ++col) {
        int piv = col;
        for (int r = col + 1; r < B; ++r)
            if (abs(ata[r][col]) > abs(ata[piv][col])) piv = r;
        if (piv != col) {
            for (int j = 0; j < B; ++j) std::swap(ata[col][j], ata[piv][j]);
            std::swap(aty[col], aty[piv]);
        }
        for (int r = col + 1; r < B; ++r) {
            big f = ata[r][col] / ata[col][col];
            for (int j = col; j < B; ++j) ata[r][j] -= f * ata[col][j];
            aty[r] -= f * aty[col];
        }
    }
    big coef[B];
    for (int r = B - 1; r >= 0; --r) {
        big s = aty[r];
        for (int j = r + 1; j < B; ++j) s -= ata[r][j] * coef[j];
        coef[r] = s / ata[r][r];
    }
    fit.a0 = coef[0].convert_to<double>();
    fit.a1 = coef[1].convert_to<double>();
    fit.residual.resize(h_grid.size());
    for (size_t r = 0; r < h_grid.size(); ++r) {
        double h2 = h_grid[r] * h_grid[r];
        double model = fit.a0 + fit.a1 * h2 + coef[2].convert_to<double>() * h2 * h2 +
                       coef[3].convert_to<double>() * h2 * h2 * h2;
        fit.residual[r] = fit.scaled[r] - model;
    }
    return fit;
}

Polyline globalize(const ManifoldSeries& s, int n_fund_domains, double max_spacing,
                   double w_window, int sign) {
    Polyline out;
    big t_end = s.t_fund * pow(s.multiplier, n_fund_domains);
    big t_begin = s.t_fund / s.multiplier;
    auto pd = [&](const big& t) -> std::array<double, 2> {
        BigPoint z = s.point(sign >= 0 ? t : -t);
        return {z.psi.convert_to<double>(), z.w.convert_to<double>()};
    };
    constexpr double pi_d = 3.141592653589793238462643383280;
    auto inside = [&](const std::array<double, 2>& p) {
        return p[0] >= -pi_d && p[0] < pi_d && std::abs(p[1]) <= w_window;
    };
    // Depth-first subdivision of [t_begin, t_end] in log t.
    struct Seg {
        big ta, tb;
        std::array<double, 2> pa, pb;
        int depth;
    };
    std::vector<Seg> stack;
    std::array<double, 2> p0 = pd(t_begin);
    out.pts.push_back(p0);
    stack.push_back({t_begin, t_end, p0, pd(t_end), 0});
    const size_t max_pts = 2000000;
    while (!stack.empty() && out.pts.size() < max_pts) {
        Seg s2 = stack.back();
        stack.pop_back();
        double dx = s2.pb[0] - s2.pa[0], dy = s2.pb[1] - s2.pa[1];
        double dist = std::sqrt(dx * dx + dy * dy);
        if ((dist > max_spacing && s2.depth < 48)) {
            big tm = sqrt(s2.ta * s2.tb);
            std::array<double, 2> pm = pd(tm);
            stack.push_back({tm, s2.tb, pm, s2.pb, s2.depth + 1});
            stack.push_back({s2.ta, tm, s2.pa, pm, s2.depth + 1});
        } else {
            if (!inside(s2.pb)) {
                out.pts.push_back(s2.pb);
                out.truncated = true;
                break;
            }
            out.pts.push_back(s2.pb);
        }
    }
    return out;
}

namespace {

// Half-orbit symmetry conditions: a point of Fix(r0) lies on a symmetric
// n-periodic orbit iff f^{n/2} returns to Fix(r0) (n even) or f^{(n+1)/2}
// lands on Fix(r1) (n odd); mirrored conditions hold on Fix(r1).
double spo_condition(double psi, SymLine line, int n, const RtmParams& par) {
    PhasePoint p;
    long steps;
    if (line == SymLine::fix_r0) {
        p = {psi, 0.0};
        steps = (n % 2) ? (n + 1) / 2 : n / 2;
        PhasePoint q = iterate(p, steps, par);
        return (n % 2) ? q.w - eta(q.psi, par) / 2 : q.w;
    }
    p = {psi, eta(psi, par) / 2};
    steps = (n % 2) ? (n - 1) / 2 : n / 2;
    PhasePoint q = iterate(p, steps, par);
    return (n % 2) ? q.w : q.w - eta(q.psi, par) / 2;
}

PhasePoint line_point(double psi, SymLine line, const RtmParams& par) {
    return line == SymLine::fix_r0 ? PhasePoint{psi, 0.0}
                                   : PhasePoint{psi, eta(psi, par) / 2};
}

}  // namespace

BigPoint refine_periodic_point_big(PhasePoint approx, int n, SymLine line, const RtmParams& par,
                                   const PrecisionContext& ctx) {
    PrecisionScope scope(ctx);
    big mu = big(par.mu);
    big pi2 = 2 * pi_big();
    auto cond = [&](const big& psi) {
        BigPoint p = line == SymLine::fix_r0 ? BigPoint{psi, big(0)}
                                             : BigPoint{psi, eta_big(psi, mu, pi2) / 2};
        long steps = (n % 2) ? ((line == SymLine::fix_r0) ? (n + 1) / 2 : (n - 1) / 2) : n / 2;
        for (long i = 0; i < steps; ++i) p = map_forward_big(p, mu, pi2);
        bool to_r1 = (n % 2) ? (line == SymLine::fix_r0) : (line == SymLine::fix_r1);
        return to_r1 ? p.w - eta_big(p.psi, mu, pi2) / 2 : p.w;
    };
    big half = 1e-9;
    big lo = big(approx.psi) - half, hi = big(approx.psi) + half;
    big flo = cond(lo), fhi = cond(hi);
    for (int widen = 0; widen < 24 && (flo < 0) == (fhi < 0); ++widen) {
        half *= 4;
        lo = big(approx.psi) - half;
        hi = big(approx.psi) + half;
        flo = cond(lo);
        fhi = cond(hi);
    }
    if ((flo < 0) == (fhi < 0))
        throw std::runtime_error("refine_periodic_point_big: no bracket around the seed");
    int iters = static_cast<int>(3.4 * ctx.digits10()) + 16;
    for (int i = 0; i < iters; ++i) {
        big mid = (lo + hi) / 2;
        big fm = cond(mid);
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    big psi = (lo + hi) / 2;
    return line == SymLine::fix_r0 ? BigPoint{psi, big(0)}
                                   : BigPoint{psi, eta_big(psi, mu, pi2) / 2};
}

std::vector<SpoPoint> find_spo(local::ResonanceId res, SymLine line, const RtmParams& par,
                               double psi_lo, double psi_hi, double scan_step) {
    if (res.m == 0 && res.n == 1) {
        PhasePoint ph = fixed_point_h(par);
        return {SpoPoint{ph, 0, 1, true, 2.0 + par.mu}};
    }
    std::vector<SpoPoint> out;
    double prev = spo_condition(psi_lo, line, res.n, par);
    for (double x = psi_lo + scan_step; x <= psi_hi; x += scan_step) {
        double cur = spo_condition(x, line, res.n, par);
        if ((prev < 0) != (cur < 0)) {
            double lo = x - scan_step, hi = x;
            double flo = prev;
            for (int i = 0; i < 80; ++i) {
                double mid = 0.5 * (lo + hi);
                double fm = spo_condition(mid, line, res.n, par);
                if ((flo < 0) == (fm < 0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            double root = 0.5 * (lo + hi);
            PhasePoint p = line_point(root, line, par);
            if (std::abs(p.psi) + std::abs(p.w) > 1e-9) {
                // verify period, winding around p_s, and stability type
                PhasePoint q = p;
                Mat2 J{1, 0, 0, 1};
                double wind = 0;
                bool proper = true;
                for (int k = 1; k <= res.n; ++k) {
                    J = jacobian(q, par) * J;
                    PhasePoint qn = map_forward(q, par);
                    wind += -std::atan2(q.psi * qn.w - q.w * qn.psi,
                                        q.psi * qn.psi + q.w * qn.w);
                    q = qn;
                    if (k < res.n && std::hypot(q.psi - p.psi, q.w - p.w) < 1e-8) {
                        proper = false;  // period divides k < n
                        break;
                    }
                }
                double close = std::hypot(q.psi - p.psi, q.w - p.w);
                double m_est = std::abs(wind) / two_pi;
                if (proper && close < 1e-9 && std::abs(m_est - res.m) < 0.05) {
                    bool dup = false;
                    for (const auto& e : out)
                        if (std::abs(e.point.psi - p.psi) < 1e-8) dup = true;
                    if (!dup)
                        out.push_back({p, res.m, res.n, std::abs(J.trace()) > 2.0, J.trace()});
                }
            }
        }
        prev = cur;
    }
    return out;
}

bool obstruction_check(const std::vector<std::array<double, 2>>& a,
                       const std::vector<std::array<double, 2>>& b, double min_angle) {
    if (a.size() < 2 || b.size() < 2) return false;
    // Uniform spatial hash over b's segments.
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : b) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    const int G = 512;
    double sx = (xmax - xmin) > 0 ? G / (xmax - xmin) : 1.0;
    double sy = (ymax - ymin) > 0 ? G / (ymax - ymin) : 1.0;
    auto cell_of = [&](double x, double y) {
        int cx = std::clamp(static_cast<int>((x - xmin) * sx), 0, G - 1);
        int cy = std::clamp(static_cast<int>((y - ymin) * sy), 0, G - 1);
        return std::pair<int, int>(cx, cy);
    };
    std::vector<std::vector<std::int32_t>> buckets(static_cast<size_t>(G) * G);
    for (size_t i = 0; i + 1 < b.size(); ++i) {
        auto [cx0, cy0] = cell_of(std::min(b[i][0], b[i + 1][0]), std::min(b[i][1], b[i + 1][1]));
        auto [cx1, cy1] = cell_of(std::max(b[i][0], b[i + 1][0]), std::max(b[i][1], b[i + 1][1]));
        for (int cx = cx0; cx <= cx1; ++cx)
            for (int cy = cy0; cy <= cy1; ++cy)
                buckets[static_cast<size_t>(cx) * G + cy].push_back(static_cast<std::int32_t>(i));
    }
    auto orient = [](const std::array<double, 2>& p, const std::array<double, 2>& q,
                     const std::array<double, 2>& r) {
        return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
    };
    for (size_t i = 0; i + 1 < a.size(); ++i) {
        if (a[i][0] < xmin - 1 && a[i + 1][0] < xmin - 1) continue;
        auto [cx0, cy0] = cell_of(std::min(a[i][0], a[i + 1][0]), std::min(a[i][1], a[i + 1][1]));
        auto [cx1, cy1] = cell_of(std::max(a[i][0], a[i + 1][0]), std::max(a[i][1], a[i + 1][1]));
        for (int cx = std::max(0, cx0 - 1); cx <= std::min(G - 1, cx1 + 1); ++cx) {
            for (int cy = std::max(0, cy0 - 1); cy <= std::min(G - 1, cy1 + 1); ++cy) {
                for (std::int32_t j : buckets[static_cast<size_t>(cx) * G + cy]) {
                    double o1 = orient(a[i], a[i + 1], b[j]);
                    double o2 = orient(a[i], a[i + 1], b[j + 1]);
                    double o3 = orient(b[j], b[j + 1], a[i]);
                    double o4 = orient(b[j], b[j + 1], a[i + 1]);
                    if (o1 * o2 < 0 && o3 * o4 < 0) {
                        double ux = a[i + 1][0] - a[i][0], uy = a[i + 1][1] - a[i][1];
                        double vx = b[j + 1][0] - b[j][0], vy = b[j + 1][1] - b[j][1];
                        double cross = std::abs(ux * vy - uy * vx);
                        double dot = std::abs(ux * vx + uy * vy);
                        if (std::atan2(cross, dot) > min_angle) return true;
                    }
                }
            }
        }
    }
    return false;
}

}  // namespace rtm::mfd
