#include "rtm/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rtm::grid {

namespace {

int resolve_threads(int requested) {
#ifdef _OPENMP
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

// Runs fn(k) for k in [0, n); threads <= 1 is the serial reference path.
template <class Fn>
void for_each_index(long n, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (long k = 0; k < n; ++k) fn(k);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (long k = 0; k < n; ++k) fn(k);
#else
    for (long k = 0; k < n; ++k) fn(k);
#endif
}

}  // namespace

RasterSpec RasterSpec::auto_window(double cell) {
    RasterSpec s;
    s.cell = cell;
    return s;
}

RasterSpec RasterSpec::saddle_center_window(double mu, double cell) {
    if (mu <= 0) throw std::domain_error("saddle_center_window: mu must be positive");
    RasterSpec s;
    // Separatrix loop of the limit flow: x in [-1/pi, 1/(2 pi)],
    // |y| <= 3sqrt(3)/(8 pi); scaled by (mu, mu^{3/2}) plus 50% margin.
    double span = mu / two_pi * 3.0;
    s.psi_min = -mu / 3.141592653589793 - 0.5 * span;
    s.psi_max = mu / two_pi + 0.5 * span;
    s.w_max = 0.1838 * std::pow(mu, 1.5) * 1.6;
    s.cell = cell;
    return s;
}

RasterSpec RasterSpec::third_order_window(double mu, double cell) {
    double t = std::abs(mu - 3.0) / 3.141592653589793;
    if (t == 0) t = 1e-3;
    RasterSpec s;
    s.psi_min = -2.9 * t;
    s.psi_max = 2.9 * t;
    s.w_max = 3.6 * t;
    s.cell = cell;
    return s;
}

Cell StabilityRaster::at_full(long i, long j) const {
    if (i >= 0) {
        if (i > ni || j < j0 || j > j1) return Cell::white;
        return at_upper(i, j);
    }
    long ju = j + i;  // r0 reflection: lower (i,j) <-> upper (-i, j+i)
    if (-i > ni || ju < j0 || ju > j1) return Cell::white;
    return at_upper(-i, ju);
}

std::int32_t StabilityRaster::label_at(long i, long j) const {
    long r = ni - i, c = j - j0;
    if (r < 0 || r >= frows || c < 0 || c >= fcols) return 0;
    return labels[r * fcols + c];
}

std::optional<long> escape_time(PhasePoint p, long budget, double control_w, const RtmParams& par) {
    PhasePoint fwd = p, bwd = p;
    for (long n = 1; n <= budget; ++n) {
        fwd = map_forward(fwd, par);
        if (std::abs(fwd.w) > control_w) return n;
        bwd = map_inverse(bwd, par);
        if (std::abs(bwd.w) > control_w) return -n;
    }
    return std::nullopt;
}

namespace {

struct Grid {
    long j0, j1, ni;
    double cell;
    long cols() const { return j1 - j0 + 1; }
    long size() const { return (ni + 1) * cols(); }
    long idx(long i, long j) const { return i * cols() + (j - j0); }
};

// Whitens the upper-representation cell of a full-plane point: upper points
// round to the nearest center; lower points map through the exact
// center-to-center r0 reflection of their containing cell.
inline void mark_point(const Grid& g, double psi, double w, std::vector<std::uint8_t>& bitmap,
                       std::vector<std::int32_t>& touched) {
    long i = std::lround(w / g.cell);
    long j = std::lround(psi / g.cell);
    if (i < 0) {
        long ju = j + i;
        i = -i;
        j = ju;
    }
    if (i > g.ni || j < g.j0 || j > g.j1) return;
    long k = g.idx(i, j);
    if (!bitmap[k]) {
        bitmap[k] = 1;
        touched.push_back(static_cast<std::int32_t>(k));
    }
}

// Deep scan: iterate both directions up to `budget`; if either direction
// leaves the control region, report every visited cell and every r0 image.
bool deep_orbit_whitens(const Grid& g, PhasePoint p, long budget, double control_w,
                        const RtmParams& par, std::vector<std::uint8_t>& bitmap,
                        std::vector<std::int32_t>& touched) {
    bool escaped = false;
    for (int dir = 0; dir < 2; ++dir) {
        PhasePoint cur = p;
        for (long n = 0; n < budget; ++n) {
            cur = dir == 0 ? map_forward(cur, par) : map_inverse(cur, par);
            mark_point(g, cur.psi, cur.w, bitmap, touched);
            mark_point(g, cur.psi + cur.w, -cur.w, bitmap, touched);  // r0 image
            if (std::abs(cur.w) > control_w) {
                escaped = true;
                break;
            }
        }
    }
    return escaped;
}

}  // namespace

StabilityRaster raster_stability(const RasterSpec& spec, const RtmParams& par) {
    StabilityRaster out;
    out.spec = spec;
    out.mu = par.mu;
    Grid g;
    g.cell = spec.cell;
    g.j0 = static_cast<long>(std::ceil(spec.psi_min / spec.cell - 1e-9));
    g.j1 = static_cast<long>(std::floor(spec.psi_max / spec.cell + 1e-9));
    g.ni = static_cast<long>(std::floor(spec.w_max / spec.cell + 1e-9));
    out.j0 = g.j0;
    out.j1 = g.j1;
    out.ni = g.ni;
    const long ncells = g.size();
    const int threads = resolve_threads(spec.threads);

    std::vector<std::uint8_t> white(ncells, 0);

    // Fast pass: short interleaved escape check on every cell center.
    for_each_index(ncells, threads, [&](long k) {
        long i = k / g.cols(), j = g.j0 + k % g.cols();
        PhasePoint p{j * g.cell, i * g.cell};
        if (escape_time(p, spec.budget_fast, spec.control_w, par)) white[k] = 1;
    });

    // Deep passes: grow the white region from its boundary until stable.
    // Each pass reads a frozen `white` state and merges its discoveries
    // afterwards, so the result is independent of the thread partition.
    for (int pass = 0; pass < spec.max_deep_passes; ++pass) {
        std::vector<std::int32_t> seeds;
        for (long k = 0; k < ncells; ++k) {
            if (white[k]) continue;
            long i = k / g.cols(), j = g.j0 + k % g.cols();
            bool boundary = false;
            for (long di = -1; di <= 1 && !boundary; ++di)
                for (long dj = -1; dj <= 1; ++dj) {
                    long ii = i + di, jj = j + dj;
                    if (ii < 0 || ii > g.ni || jj < g.j0 || jj > g.j1) continue;
                    if (white[g.idx(ii, jj)]) {
                        boundary = true;
                        break;
                    }
                }
            if (boundary) seeds.push_back(static_cast<std::int32_t>(k));
        }
        if (seeds.empty()) break;

        std::vector<std::vector<std::int32_t>> found(threads);
#ifdef _OPENMP
#pragma omp parallel num_threads(threads) if (threads > 1)
#endif
        {
#ifdef _OPENMP
            int tid = threads > 1 ? omp_get_thread_num() : 0;
#else
            int tid = 0;
#endif
            std::vector<std::uint8_t> bitmap(ncells, 0);
            std::vector<std::int32_t> touched;
            touched.reserve(4096);
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 4)
#endif
            for (long s = 0; s < static_cast<long>(seeds.size()); ++s) {
                long k = seeds[s];
                long i = k / g.cols(), j = g.j0 + k % g.cols();
                PhasePoint p{j * g.cell, i * g.cell};
                touched.clear();
                if (deep_orbit_whitens(g, p, spec.budget_deep, spec.control_w, par, bitmap,
                                       touched)) {
                    found[tid].insert(found[tid].end(), touched.begin(), touched.end());
                }
                for (long t : touched) bitmap[t] = 0;
            }
        }
        long added = 0;
        for (const auto& v : found)
            for (long k : v)
                if (!white[k]) {
                    white[k] = 1;
                    ++added;
                }
        if (added == 0) break;
    }

    // Classification of surviving cells.
    out.upper.assign(ncells, Cell::white);
    out.upper_rmn.assign(ncells, 0);
    for_each_index(ncells, threads, [&](long k) {
        if (white[k]) return;
        long i = k / g.cols(), j = g.j0 + k % g.cols();
        PhasePoint p{j * g.cell, i * g.cell};
        rot::ClassifyOptions opt = spec.classify;
        opt.control_w = spec.control_w;
        rot::OrbitClass oc = rot::classify_point(p, par, opt);
        switch (oc.kind) {
            case rot::OrbitKind::chaotic:
                out.upper[k] = Cell::blue;
                break;
            case rot::OrbitKind::rational:
                out.upper[k] = Cell::green;
                out.upper_rmn[k] = (oc.m << 16) | oc.n;
                break;
            case rot::OrbitKind::irrational:
                out.upper[k] = Cell::red;
                break;
            case rot::OrbitKind::escaped:
                out.upper[k] = Cell::white;
                break;
            case rot::OrbitKind::degenerate:
                // Exact fixed point: measure-zero bounded set.  Elliptic
                // p_s is classified through its linear rotation number;
                // otherwise the cell contributes nothing to the area.
                if (par.theta) {
                    double rho = *par.theta / two_pi;
                    if (auto rat = rot::rational_from_cf(rho)) {
                        out.upper[k] = Cell::green;
                        out.upper_rmn[k] = (static_cast<int>(rat->num) << 16) |
                                           static_cast<int>(rat->den);
                    } else {
                        out.upper[k] = Cell::red;
                    }
                } else {
                    out.upper[k] = Cell::white;
                }
                break;
        }
    });

    label_components(out);
    return out;
}

void label_components(StabilityRaster& r) {
    const long ni = r.ni;
    r.frows = 2 * ni + 1;
    r.fcols = (r.j1 - r.j0 + 1) + ni;
    r.full.assign(r.frows * r.fcols, Cell::white);
    for (long i = ni; i >= -ni; --i) {
        long row = ni - i;
        for (long j = r.j0; j <= r.j0 + r.fcols - 1; ++j)
            r.full[row * r.fcols + (j - r.j0)] = r.at_full(i, j);
    }

    // Two-pass 4-connectivity labeling with union-find.
    r.labels.assign(r.frows * r.fcols, 0);
    std::vector<std::int32_t> parent(1, 0);
    auto find = [&](std::int32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    for (long rr = 0; rr < r.frows; ++rr) {
        for (long cc = 0; cc < r.fcols; ++cc) {
            long k = rr * r.fcols + cc;
            if (r.full[k] == Cell::white) continue;
            std::int32_t up = rr > 0 ? r.labels[k - r.fcols] : 0;
            std::int32_t left = cc > 0 ? r.labels[k - 1] : 0;
            if (up == 0 && left == 0) {
                parent.push_back(static_cast<std::int32_t>(parent.size()));
                r.labels[k] = parent.back();
            } else if (up != 0 && left != 0) {
                r.labels[k] = std::min(find(up), find(left));
                unite(up, left);
            } else {
                r.labels[k] = up != 0 ? up : left;
            }
        }
    }
    // Resolve and compact labels; force the p_s component to label 1.
    std::int32_t ps_root = 0;
    {
        long row = ni, col = -r.j0;  // cell (i=0, j=0)
        if (col >= 0 && col < r.fcols && r.labels[row * r.fcols + col] != 0)
            ps_root = find(r.labels[row * r.fcols + col]);
    }
    std::vector<std::int32_t> remap(parent.size(), 0);
    std::int32_t next = 1;
    if (ps_root != 0) remap[ps_root] = next++;
    for (std::int32_t x = 1; x < static_cast<std::int32_t>(parent.size()); ++x) {
        std::int32_t root = find(x);
        if (remap[root] == 0) remap[root] = next++;
        remap[x] = remap[root];
    }
    for (auto& l : r.labels)
        if (l != 0) l = remap[l];
    r.label_ps = ps_root != 0 ? 1 : 0;
}

Areas areas(const StabilityRaster& r) {
    long colored = 0, comp = 0;
    for (size_t k = 0; k < r.full.size(); ++k) {
        if (r.full[k] == Cell::white) continue;
        ++colored;
        if (r.label_ps != 0 && r.labels[k] == r.label_ps) ++comp;
    }
    double c2 = r.spec.cell * r.spec.cell;
    return {c2 * colored, c2 * comp};
}

Extents extents(const StabilityRaster& r) {
    Extents e;
    if (r.label_ps == 0) return e;
    bool any_psi = false, any_w = false;
    for (long j = r.j0; j <= r.j0 + r.fcols - 1; ++j) {
        if (r.label_at(0, j) == r.label_ps) {
            double psi = j * r.spec.cell;
            if (!any_psi || psi < e.psi_min) e.psi_min = psi;
            if (!any_psi || psi > e.psi_max) e.psi_max = psi;
            any_psi = true;
        }
    }
    for (long i = -r.ni; i <= r.ni; ++i) {
        if (r.label_at(i, 0) == r.label_ps) {
            double w = i * r.spec.cell;
            if (!any_w || w < e.w_min) e.w_min = w;
            if (!any_w || w > e.w_max) e.w_max = w;
            any_w = true;
        }
    }
    if (any_psi) e.psi_extent = e.psi_max - e.psi_min + r.spec.cell;
    if (any_w) e.w_extent = e.w_max - e.w_min + r.spec.cell;
    e.efficiency = e.psi_extent / two_pi;
    return e;
}

std::vector<SweepRow> sweep_mu(std::span<const double> mus, WindowKind kind,
                               const RasterSpec& base) {
    std::vector<SweepRow> rows;
    rows.reserve(mus.size());
    for (double mu : mus) {
        RasterSpec spec = base;
        if (kind == WindowKind::saddle_center)
            spec = RasterSpec::saddle_center_window(mu, base.cell);
        else if (kind == WindowKind::third_order)
            spec = RasterSpec::third_order_window(mu, base.cell);
        spec.budget_fast = base.budget_fast;
        spec.budget_deep = base.budget_deep;
        spec.control_w = base.control_w;
        spec.classify = base.classify;
        spec.threads = base.threads;
        spec.max_deep_passes = base.max_deep_passes;
        StabilityRaster r = raster_stability(spec, params_from_mu(mu));
        Areas a = areas(r);
        rows.push_back({mu, a.area_A, a.area_D});
    }
    return rows;
}

std::array<SectionRaster, 2> section_sets(const SectionSpec& spec) {
    SectionRaster s0, s1;
    s0.spec = s1.spec = spec;
    long nmu = static_cast<long>(std::floor((spec.mu_max - spec.mu_min) / spec.dmu + 1e-9)) + 1;
    long npsi = static_cast<long>(std::floor((spec.psi_max - spec.psi_min) / spec.dpsi + 1e-9)) + 1;
    s0.nmu = s1.nmu = nmu;
    s0.npsi = s1.npsi = npsi;
    s0.cells.assign(nmu * npsi, Cell::white);
    s1.cells.assign(nmu * npsi, Cell::white);
    const int threads = resolve_threads(spec.threads);

    for_each_index(nmu, threads, [&](long r) {
        // row 0 at the top = largest mu
        double mu = spec.mu_max - r * spec.dmu;
        RtmParams par = params_from_mu(mu);
        for (long c = 0; c < npsi; ++c) {
            double psi = spec.psi_min + c * spec.dpsi;
            for (int which = 0; which < 2; ++which) {
                PhasePoint p{psi, which == 0 ? 0.0 : eta(psi, par) / 2.0};
                auto& target = which == 0 ? s0 : s1;
                if (escape_time(p, spec.budget, spec.control_w, par)) continue;
                rot::ClassifyOptions opt = spec.classify;
                opt.control_w = spec.control_w;
                rot::OrbitClass oc = rot::classify_point(p, par, opt);
                Cell cell = Cell::white;
                if (oc.kind == rot::OrbitKind::chaotic) cell = Cell::blue;
                else if (oc.kind == rot::OrbitKind::rational) cell = Cell::green;
                else if (oc.kind == rot::OrbitKind::irrational) cell = Cell::red;
                else if (oc.kind == rot::OrbitKind::degenerate && par.theta) {
                    cell = rot::rational_from_cf(*par.theta / two_pi) ? Cell::green : Cell::red;
                }
                target.cells[r * npsi + c] = cell;
            }
        }
    });
    return {s0, s1};
}

EscapeBracket escape_value(local::ResonanceId res, double lo, double hi, double step,
                           const RasterSpec& base) {
    if (!(lo < hi) || step <= 0) throw std::domain_error("escape_value: bad bracket");
    auto attached = [&](double mu) {
        StabilityRaster r = raster_stability(base, params_from_mu(mu));
        std::int32_t want = (res.m << 16) | res.n;
        for (long i = 0; i <= r.ni; ++i)
            for (long j = r.j0; j <= r.j1; ++j) {
                long k = i * r.ucols() + (j - r.j0);
                if (r.upper[k] == Cell::green && r.upper_rmn[k] == want &&
                    r.label_at(i, j) == r.label_ps && r.label_ps != 0)
                    return true;
            }
        return false;
    };
    long n = static_cast<long>(std::llround((hi - lo) / step));
    if (n < 1) throw std::domain_error("escape_value: bracket narrower than step");
    long a = 0, b = n;
    if (!attached(lo)) throw std::runtime_error("escape_value: chain already detached at bracket start");
    if (attached(hi)) throw std::runtime_error("escape_value: chain still attached at bracket end");
    while (b - a > 1) {
        long mid = (a + b) / 2;
        if (attached(lo + mid * step)) a = mid;
        else b = mid;
    }
    return {lo + a * step, lo + b * step};
}

}  // namespace rtm::grid
