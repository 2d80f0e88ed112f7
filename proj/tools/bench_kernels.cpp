// Timing comparison of the serial reference path (threads = 1) against the
// OpenMP path for the two grid kernels: the escape passes and the
// rotation-number classification.  Also checks that both paths produce the
// same raster.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rtm/raster.hpp"

using namespace rtm;
using Clock = std::chrono::steady_clock;

namespace {

double run_case(double mu, int threads, grid::StabilityRaster* out) {
    grid::RasterSpec spec = grid::RasterSpec::auto_window(1.0 / 250);
    spec.budget_fast = 1000;
    spec.budget_deep = 20000;
    spec.classify.Q = 13;
    spec.threads = threads;
    auto t0 = Clock::now();
    grid::StabilityRaster r = grid::raster_stability(spec, params_from_mu(mu));
    auto t1 = Clock::now();
    if (out) *out = std::move(r);
    return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main() {
    int max_threads = 1;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    std::printf("raster kernel, cell 1/250, deep budget 2e4\n");
    std::printf("%-8s %-10s %-10s %-8s\n", "mu", "serial[s]", "omp[s]", "speedup");
    for (double mu : {1.0, 2.037}) {
        grid::StabilityRaster serial, parallel;
        double ts = run_case(mu, 1, &serial);
        double tp = run_case(mu, max_threads, &parallel);
        bool same = serial.upper == parallel.upper && serial.labels == parallel.labels;
        std::printf("%-8.3f %-10.3f %-10.3f %-8.2f %s\n", mu, ts, tp, ts / tp,
                    same ? "outputs identical" : "OUTPUT MISMATCH");
        if (!same) return 1;
    }
    return 0;
}
