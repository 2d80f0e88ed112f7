// The orbit method: rasterize the stability domain on the upper half plane,
// whiten cells visited by escaping orbits (and their r0 images), classify
// survivors by rotation number, assemble the full raster by r0 reflection,
// label connected components, and measure areas/extents.
//
// All kernels are deterministic: identical output bytes for any thread
// count.  threads <= 1 runs the serial reference path.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rtm/local.hpp"
#include "rtm/map.hpp"
#include "rtm/rotation.hpp"

namespace rtm::grid {

struct RasterSpec {
    double psi_min = -0.45, psi_max = 0.35;  // auto window contains the
    double w_max = 0.8;                      // empirical bound of the domain
    double cell = 1.0 / 1000;
    long budget_fast = 1000;
    long budget_deep = 100000;
    double control_w = 1.0;
    rot::ClassifyOptions classify;
    int threads = 0;  // 0 = hardware concurrency, 1 = serial reference
    int max_deep_passes = 50;

    static RasterSpec auto_window(double cell = 1.0 / 1000);
    /// Window scaled to the separatrix loop near mu = 0.
    static RasterSpec saddle_center_window(double mu, double cell);
    /// Window scaled to the resonance triangle near mu = 3.
    static RasterSpec third_order_window(double mu, double cell);
};

enum class Cell : std::uint8_t { white = 0, blue, green, red };

/// Upper-half raster plus the r0-reflected full assembly.
/// Upper grid: centers psi = j*cell (j0 <= j <= j1), w = i*cell (0 <= i <= ni).
/// Full grid: rows i = -ni..ni, cols j = j0..j1+ni; a lower cell (i<0, j)
/// mirrors upper cell (-i, j+i), which is exact center-to-center under r0.
struct StabilityRaster {
    RasterSpec spec;
    double mu = 0;
    long j0 = 0, j1 = 0, ni = 0;
    std::vector<Cell> upper;           // (ni+1) x (j1-j0+1)
    std::vector<std::int32_t> upper_rmn;  // m<<16|n for green cells, else 0

    long fcols = 0, frows = 0;         // full raster dims
    std::vector<Cell> full;            // row r=0 is i=+ni (top)
    std::vector<std::int32_t> labels;  // component labels on full, white=0
    std::int32_t label_ps = 0;         // label of the p_s cell, 0 if white

    long ucols() const { return j1 - j0 + 1; }
    Cell& at_upper(long i, long j) { return upper[i * ucols() + (j - j0)]; }
    Cell at_upper(long i, long j) const { return upper[i * ucols() + (j - j0)]; }
    /// Full-raster cell by (i, j) index; out-of-window cells are white.
    Cell at_full(long i, long j) const;
    std::int32_t label_at(long i, long j) const;
};

/// Smallest |n| <= budget with |w_n| > control_w, stepping forward and
/// backward interleaved (+1, -1, +2, -2, ...).  Returns the signed n, or
/// nullopt if the orbit stays inside the control region.
std::optional<long> escape_time(PhasePoint p, long budget, double control_w, const RtmParams& par);

/// Full orbit-method raster (escape passes + classification + labels).
StabilityRaster raster_stability(const RasterSpec& spec, const RtmParams& par);

/// Connected components of the full raster, 4-connectivity, two passes.
/// Label 1 is the component of the p_s cell when that cell is non-white.
void label_components(StabilityRaster& r);

struct Areas {
    double area_A = 0, area_D = 0;
};
/// cell^2 times the counts of non-white / label-1 cells of the full raster.
Areas areas(const StabilityRaster& r);

struct Extents {
    double psi_min = 0, psi_max = 0;  // of component 1 along w = 0
    double w_min = 0, w_max = 0;      // of component 1 along psi = 0
    double psi_extent = 0, w_extent = 0;
    double efficiency = 0;  // psi_extent / 2 pi
};
Extents extents(const StabilityRaster& r);

enum class WindowKind { fixed_box, saddle_center, third_order };

struct SweepRow {
    double mu = 0, area_A = 0, area_D = 0;
};
std::vector<SweepRow> sweep_mu(std::span<const double> mus, WindowKind kind,
                               const RasterSpec& base);

/// Section sets over the (psi, mu) plane: S0 samples (psi, 0), S1 samples
/// (psi, eta(psi)/2).
struct SectionSpec {
    double mu_min = 0.05, mu_max = 4.6, dmu = 0.05;
    double psi_min = -0.45, psi_max = 0.35, dpsi = 1.0 / 500;
    long budget = 20000;
    double control_w = 1.0;
    rot::ClassifyOptions classify;
    int threads = 0;
};
struct SectionRaster {
    SectionSpec spec;
    long npsi = 0, nmu = 0;
    std::vector<Cell> cells;  // row-major, row 0 = mu_max (top)
    Cell at(long imu, long jpsi) const { return cells[imu * npsi + jpsi]; }
};
/// Returns {S0, S1}.
std::array<SectionRaster, 2> section_sets(const SectionSpec& spec);

struct EscapeBracket {
    double mu_lo = 0, mu_hi = 0;
};
/// Brackets the value mu* at which the (m,n) chain of elliptic islands
/// leaves the connected component, by bisection on the step-grid over
/// [lo, hi] of the predicate "some (m,n)-rational cell carries label 1".
/// Throws std::runtime_error if the predicate does not flip across [lo, hi].
EscapeBracket escape_value(local::ResonanceId res, double lo, double hi, double step,
                           const RasterSpec& base);

}  // namespace rtm::grid
