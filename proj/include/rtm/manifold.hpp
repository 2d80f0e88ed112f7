// Multiple-precision parameterization of stable/unstable invariant curves of
// hyperbolic fixed and periodic points, primary homoclinic points on the
// symmetry lines, lobe areas by action sums and loop quadrature, the
// exponentially small splitting fit, and the obstruction-criterion
// intersection test.
//
// The conjugacy f^period(z(t)) = z(lambda t) is solved order by order; the
// composed trigonometric series are maintained incrementally so building a
// series of order N costs O(period * N^2) arithmetic operations.
#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <array>
#include <span>
#include <vector>

#include "rtm/local.hpp"
#include "rtm/map.hpp"

namespace rtm::mfd {

using big = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                          boost::multiprecision::et_off>;

/// Working-precision request; mantissa bits of every big value created
/// while a context is active.
struct PrecisionContext {
    unsigned mantissa_bits = 256;
    unsigned digits10() const;
};

/// RAII guard setting the thread default mpfr precision.
class PrecisionScope {
  public:
    explicit PrecisionScope(const PrecisionContext& ctx);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

  private:
    unsigned saved_;
};

struct BigPoint {
    big psi, w;
};

BigPoint map_forward_big(const BigPoint& p, const big& mu, const big& pi2);
BigPoint map_inverse_big(const BigPoint& p, const big& mu, const big& pi2);

/// The hyperbolic fixed point (-2 atan(mu/2pi), 0) at context precision.
BigPoint hyperbolic_fixed_point_big(const RtmParams& par, const PrecisionContext& ctx);

enum class Branch { unstable, stable };

/// Power-series parameterization z(t) = base + sum_k (a_k, b_k) t^k of one
/// branch of an invariant curve of a hyperbolic period-`period` point.
struct ManifoldSeries {
    BigPoint base;
    int period = 1;
    big multiplier;           // lambda > 1 of f^period along the orbit
    Branch branch = Branch::unstable;
    std::vector<big> a, b;    // index k = 0..N; a[0], b[0] are the base point
    big t_fund;               // validated fundamental parameter
    big residual;             // conjugacy defect achieved at t_fund
    big mu, pi2;              // frozen map constants at working precision

    int order() const { return static_cast<int>(a.size()) - 1; }
    /// Pure series evaluation (|t| should not exceed t_fund by much).
    BigPoint eval(const big& t) const;
    /// Globalized evaluation: pulls t back below t_fund and applies the
    /// map period*m times (inverse map for the stable branch).
    BigPoint point(const big& t) const;
    /// Direct conjugacy defect |f^period(z(t)) - z(lambda t)| at t.
    big defect(const big& t) const;
};

struct SeriesOptions {
    int order = 0;       // 0 = auto (grown until the residual target holds)
    int max_order = 400;
    double t_fund_hint = 0.0;  // 0 = auto
};

/// Unstable-curve series of the hyperbolic fixed point p_h (period 1) or of
/// a periodic point (period n, winding handled on the lift).  Throws
/// std::domain_error if the base is not hyperbolic, std::runtime_error if
/// max_order cannot meet the residual target 2^(-0.8 * mantissa_bits).
ManifoldSeries unstable_series(const BigPoint& base, int period, const RtmParams& par,
                               const PrecisionContext& ctx, const SeriesOptions& opt = {});

/// Stable branch as the r0 image of an unstable series (coefficientwise).
ManifoldSeries stable_from_unstable(const ManifoldSeries& u);

enum class SymLine { fix_r0, fix_r1 };

struct HomoclinicPoint {
    big t_star;
    BigPoint point;
};

/// Smallest t* > 0 at which the globalized unstable curve meets the
/// symmetry line (w = 0 on Fix(r0), w = eta(psi)/2 on Fix(r1)).
/// Throws std::runtime_error when no sign change is found in the scan.
HomoclinicPoint primary_homoclinic(const ManifoldSeries& u, SymLine line,
                                   const PrecisionContext& ctx);

struct LobeResult {
    double mu = 0, h = 0;
    big area_action;      // |W[A] - W[B]| over the two primary homoclinic orbits
    big area_quadrature;  // |∮ w dpsi| around the lobe boundary
    int order = 0;
    unsigned bits = 0;
};

/// Lobe area between the Fix(r0) and Fix(r1) primary homoclinic points of
/// p_h at the given mu; both routes are computed and stored.
LobeResult lobe_area(double mu, const PrecisionContext& ctx, const SeriesOptions& opt = {});

struct SplittingFit {
    double a0 = 0, a1 = 0;
    std::vector<double> h;       // grid
    std::vector<double> scaled;  // |L|(h) * exp(2 pi^2 / h)
    std::vector<double> residual;
};

/// Least-squares fit of |L|(h) e^{2 pi^2/h} on the basis {1, h^2, h^4, h^6}.
/// Requires at least 4 grid points.
SplittingFit splitting_fit(std::span<const double> h_grid, const PrecisionContext& ctx);

/// Polyline of the globalized curve covering n_fund fundamental domains,
/// adaptively resampled so adjacent vertices are closer than max_spacing;
/// truncated (with `truncated` set) on leaving the window
/// [-pi, pi) x [-w_window, w_window].
struct Polyline {
    std::vector<std::array<double, 2>> pts;
    bool truncated = false;
};
Polyline globalize(const ManifoldSeries& s, int n_fund_domains, double max_spacing = 1e-3,
                   double w_window = 2.0, int sign = +1);

/// Sharpens a periodic point found in double precision to the working
/// precision by bisection of the half-orbit condition along its line.
BigPoint refine_periodic_point_big(PhasePoint approx, int n, SymLine line, const RtmParams& par,
                                   const PrecisionContext& ctx);

struct SpoPoint {
    PhasePoint point;
    int m = 0, n = 0;
    bool hyperbolic = false;
    double trace = 0;  // of the n-fold Jacobian
};

/// Symmetric (m,n)-periodic points on one symmetry line, located by 1-D
/// root finding of the half-orbit condition; winding is verified from the
/// swept argument around p_s.  (0,1) returns p_h directly.
std::vector<SpoPoint> find_spo(local::ResonanceId res, SymLine line, const RtmParams& par,
                               double psi_lo = -1.2, double psi_hi = 1.2,
                               double scan_step = 2e-4);

/// True iff the two polylines have a transversal crossing with angle above
/// min_angle (radians).
bool obstruction_check(const std::vector<std::array<double, 2>>& a,
                       const std::vector<std::array<double, 2>>& b, double min_angle = 1e-8);

}  // namespace rtm::mfd
