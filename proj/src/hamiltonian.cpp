#include "rtm/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace rtm::ham {

namespace {
constexpr double pi = 3.141592653589793238462643383280;
}

double h1_saddle_center(double x, double y) {
    return 0.5 * (x * x + y * y) + pi / 3.0 * x * x * x - 1.0 / (6.0 * pi * pi);
}

double h_tilde_saddle_center(int j, double x, double y) {
    double c = x + pi * x * x;  // (H~1)_x
    switch (j) {
        case 1:
            return h1_saddle_center(x, y);
        case 2:
            return 0.5 * c * y;
        case 3:
            return c * c / 12.0 + (1.0 + 2.0 * pi * x) * y * y / 12.0;
        case 4:
            return (1.0 + 2.0 * pi * x) * c * y / 12.0;
        default:
            throw std::domain_error("h_tilde_saddle_center: order must be 1..4");
    }
}

double h_corrected_saddle_center(PhasePoint p, const RtmParams& par, int order) {
    if (par.mu <= 0) throw std::domain_error("h_corrected_saddle_center: mu must be positive");
    if (order < 1 || order > 4) throw std::domain_error("h_corrected_saddle_center: order must be 1..4");
    double x = p.psi / par.mu;
    double y = p.w / std::pow(par.mu, 1.5);
    double sum = 0.0;
    for (int j = 1; j <= order; ++j) sum += std::pow(par.mu, 0.5 * j) * h_tilde_saddle_center(j, x, y);
    return sum;
}

double generating_series_term(const ScalarField3& G, int j, double x, double y) {
    switch (j) {
        case 1:
            return G.G(x, y);
        case 2:
            return 0.5 * G.Gx(x, y) * G.Gy(x, y);
        case 3: {
            double gx = G.Gx(x, y), gy = G.Gy(x, y);
            return (G.Gxx(x, y) * gy * gy + 4.0 * G.Gxy(x, y) * gx * gy +
                    G.Gyy(x, y) * gx * gx) / 12.0;
        }
        case 4: {
            double gx = G.Gx(x, y), gy = G.Gy(x, y);
            double gxx = G.Gxx(x, y), gxy = G.Gxy(x, y), gyy = G.Gyy(x, y);
            return (G.Gxxy(x, y) * gy + G.Gxyy(x, y) * gx + gxx * gyy + 3.0 * gxy * gxy) * gx *
                       gy / 12.0 +
                   gxy * (gxx * gy * gy + gyy * gx * gx) / 12.0;
        }
        default:
            throw std::domain_error("generating_series_term: order must be 1..4");
    }
}

double h_tilde_fourth_order(int j, double x, double y) {
    switch (j) {
        case 4:
            return -(std::pow(x, 4) + std::pow(y, 4)) / 6.0 - pi * pi * x * x * y * y;
        case 5:
            return -std::pow(pi, 3) * (std::pow(x, 4) * y + x * std::pow(y, 4)) -
                   pi * (x * x * x * y * y + x * x * y * y * y) / 3.0;
        case 6: {
            double alpha = 1.0 / 180.0 - std::pow(pi, 4) / 3.0;
            double beta = -5.0 * pi * pi / 12.0;
            double gamma = 1.0 / 9.0 - 2.0 * std::pow(pi, 4);
            return alpha * (std::pow(x, 6) + std::pow(y, 6)) +
                   beta * (std::pow(x, 4) * y * y + x * x * std::pow(y, 4)) +
                   gamma * x * x * x * y * y * y;
        }
        default:
            throw std::domain_error("h_tilde_fourth_order: order must be 4..6");
    }
}

double h_fourth_order(PhasePoint p, int order) {
    if (order < 4 || order > 6) throw std::domain_error("h_fourth_order: order must be 4..6");
    double x = p.psi + p.w, y = p.psi;
    double sum = 0.0;
    for (int j = 4; j <= order; ++j) sum += h_tilde_fourth_order(j, x, y);
    return sum;
}

double h1_third_order(double x, double y) {
    return (1.0 - x) * (x + y - 1.0) * (2.0 * x + y + 1.0);
}

std::array<std::array<double, 2>, 4> equilibria_third_order() {
    return {{{0.0, 0.0}, {1.0, 0.0}, {1.0, -3.0}, {-2.0, 3.0}}};
}

std::array<double, 2> homoclinic_trajectory(double t) {
    double ch = std::cosh(0.5 * t), sh = std::sinh(0.5 * t);
    return {3.0 / (2.0 * pi * ch * ch) - 1.0 / pi, 3.0 * sh / (2.0 * pi * ch * ch * ch)};
}

double separatrix_area() { return 6.0 / (5.0 * pi * pi); }

double separatrix_area_quadrature() {
    // Simpson rule on y(t) x'(t); the integrand decays like exp(-|t|), so
    // the [-40, 40] truncation is below 1e-17.
    auto integrand = [](double t) {
        double ch = std::cosh(0.5 * t), sh = std::sinh(0.5 * t);
        double y = 3.0 * sh / (2.0 * pi * ch * ch * ch);
        double xp = -3.0 * sh / (2.0 * pi * ch * ch * ch);  // d/dt of x(t)
        return y * xp;
    };
    const int n = 40000;  // even
    const double a = -40.0, b = 40.0, h = (b - a) / n;
    double sum = integrand(a) + integrand(b);
    for (int i = 1; i < n; ++i) sum += integrand(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return std::abs(sum * h / 3.0);
}

std::array<double, 2> flow_rk4(const std::function<double(double, double)>& H,
                               std::array<double, 2> q, double time, double dt) {
    const double eps = 1e-6;
    auto field = [&](std::array<double, 2> z) -> std::array<double, 2> {
        double hx = (H(z[0] + eps, z[1]) - H(z[0] - eps, z[1])) / (2.0 * eps);
        double hy = (H(z[0], z[1] + eps) - H(z[0], z[1] - eps)) / (2.0 * eps);
        return {hy, -hx};
    };
    long steps = static_cast<long>(std::ceil(std::abs(time) / dt));
    double h = time / steps;
    for (long s = 0; s < steps; ++s) {
        auto k1 = field(q);
        auto k2 = field({q[0] + 0.5 * h * k1[0], q[1] + 0.5 * h * k1[1]});
        auto k3 = field({q[0] + 0.5 * h * k2[0], q[1] + 0.5 * h * k2[1]});
        auto k4 = field({q[0] + h * k3[0], q[1] + h * k3[1]});
        q[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        q[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    }
    return q;
}

std::vector<std::vector<std::array<double, 2>>> level_curves(
    const std::function<double(double, double)>& H, double level, double x0, double x1,
    double y0, double y1, int n) {
    // Marching squares emitting raw segments, then chained into polylines.
    double dx = (x1 - x0) / n, dy = (y1 - y0) / n;
    std::vector<double> vals(static_cast<size_t>(n + 1) * (n + 1));
    for (int iy = 0; iy <= n; ++iy)
        for (int ix = 0; ix <= n; ++ix)
            vals[iy * (n + 1) + ix] = H(x0 + ix * dx, y0 + iy * dy) - level;

    using Pt = std::array<double, 2>;
    std::vector<std::pair<Pt, Pt>> segs;
    auto interp = [&](double xa, double ya, double va, double xb, double yb, double vb) -> Pt {
        double t = va / (va - vb);
        return {xa + t * (xb - xa), ya + t * (yb - ya)};
    };
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            double v00 = vals[iy * (n + 1) + ix], v10 = vals[iy * (n + 1) + ix + 1];
            double v01 = vals[(iy + 1) * (n + 1) + ix], v11 = vals[(iy + 1) * (n + 1) + ix + 1];
            double xa = x0 + ix * dx, ya = y0 + iy * dy;
            Pt pts[4];
            int cnt = 0;
            if ((v00 < 0) != (v10 < 0)) pts[cnt++] = interp(xa, ya, v00, xa + dx, ya, v10);
            if ((v10 < 0) != (v11 < 0)) pts[cnt++] = interp(xa + dx, ya, v10, xa + dx, ya + dy, v11);
            if ((v01 < 0) != (v11 < 0)) pts[cnt++] = interp(xa, ya + dy, v01, xa + dx, ya + dy, v11);
            if ((v00 < 0) != (v01 < 0)) pts[cnt++] = interp(xa, ya, v00, xa, ya + dy, v01);
            if (cnt == 2) segs.emplace_back(pts[0], pts[1]);
            else if (cnt == 4) {  // saddle cell: pair by x order
                segs.emplace_back(pts[0], pts[3]);
                segs.emplace_back(pts[1], pts[2]);
            }
        }
    }
    // Chain segments into polylines by endpoint matching on a snapped grid.
    auto key = [&](const Pt& p) {
        return std::pair<long long, long long>(std::llround(p[0] / dx * 512.0),
                                               std::llround(p[1] / dy * 512.0));
    };
    std::multimap<std::pair<long long, long long>, size_t> ends;
    for (size_t i = 0; i < segs.size(); ++i) {
        ends.emplace(key(segs[i].first), i);
        ends.emplace(key(segs[i].second), i);
    }
    std::vector<bool> used(segs.size(), false);
    std::vector<std::vector<Pt>> out;
    for (size_t i = 0; i < segs.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::vector<Pt> line{segs[i].first, segs[i].second};
        for (int dir = 0; dir < 2; ++dir) {
            bool grew = true;
            while (grew) {
                grew = false;
                auto range = ends.equal_range(key(line.back()));
                for (auto it = range.first; it != range.second; ++it) {
                    size_t s = it->second;
                    if (used[s]) continue;
                    auto kb = key(line.back());
                    Pt next;
                    if (key(segs[s].first) == kb) next = segs[s].second;
                    else if (key(segs[s].second) == kb) next = segs[s].first;
                    else continue;
                    used[s] = true;
                    line.push_back(next);
                    grew = true;
                    break;
                }
            }
            std::reverse(line.begin(), line.end());
        }
        out.push_back(std::move(line));
    }
    return out;
}

}  // namespace rtm::ham
