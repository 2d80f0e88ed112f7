// Refined rotation-number estimator with the empirical error bound, and the
// classification of bounded orbits into chaotic / rational / irrational.
//
// Arguments around p_s are measured clockwise (the rotation sense of the
// map for mu > 0), so estimates come out positive; the lift is chosen per
// step from the atan2 of consecutive offsets.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rtm/map.hpp"

namespace rtm::rot {

struct RotationEstimate {
    double theta_pq = 0;   // Theta(P,Q), estimated clockwise angle per step
    double err_bound = 0;  // 2^{-(P+1)} |Theta(P,Q) - Theta(P,Q-1)|
    int P = 0, Q = 0;
    double rho() const { return theta_pq / two_pi; }
};

/// Streaming accumulator for the iterated sums S^1..S^P of the argument
/// drifts x_n = phi_n - phi_0.  O(P) state per step; snapshots of S^P are
/// kept at n = 2^q.  Accumulation runs in long double.
class RefinedSums {
  public:
    RefinedSums(int P, int Q);
    void push(double x_n);  // call with n = 1, 2, ..., 2^Q in order
    bool complete() const { return n_ == (1L << Q_); }
    long pushed() const { return n_; }
    /// Theta(P,Q) and the empirical error bound; requires complete().
    RotationEstimate estimate() const;

  private:
    long double theta_at(int Q) const;
    int P_, Q_;
    long n_ = 0;
    std::vector<long double> run_;       // run_[p] = S^{p+1}_n
    std::vector<long double> snapshot_;  // S^P at n = 2^q
};

/// Clockwise-measured arguments of p_n - p_s on the universal cover,
/// n = 0..N.  Throws std::runtime_error if the orbit hits p_s within 1e-13
/// (degenerate argument) or leaves |w| <= control_w.
std::vector<double> unwrapped_arguments(PhasePoint p, long N, const RtmParams& par,
                                        double control_w = 1.0);

/// Refined estimate Theta(P,Q) from N = 2^Q iterates of the map.
/// Pre: 0 < P < Q.  Throws std::runtime_error on escape or degenerate orbit.
RotationEstimate refined_rotation_number(PhasePoint p, int P, int Q, const RtmParams& par,
                                         double control_w = 1.0);

enum class OrbitKind : std::uint8_t { chaotic, rational, irrational, escaped, degenerate };

struct OrbitClass {
    OrbitKind kind = OrbitKind::chaotic;
    int m = 0, n = 0;      // reduced fraction when kind == rational
    double rho = 0.0;      // estimated rotation number
    double err_bound = 0;  // empirical bound of the estimate
};

struct ClassifyOptions {
    int P = 7;
    int Q = 15;
    double tol = 1e-10;
    double control_w = 1.0;
    // Above this theta the per-step swing approaches pi and the unwrap
    // switches to a two-pass scheme: a provisional rate from the
    // second-iterate map picks the lift of each step.
    double two_pass_theta = 2.8;
};

/// Red/green/blue classification of a single orbit.  err_bound > tol gives
/// chaotic; otherwise rational vs irrational is decided by the continued
/// fraction of rho.  Escape and degenerate-argument orbits are reported as
/// their own kinds.
OrbitClass classify_point(PhasePoint p, const RtmParams& par, const ClassifyOptions& opt = {});

/// Continued-fraction expansion of rho in (0,1); stops after max_terms or
/// at a quotient exceeding 1e6 (rationality blow-up).
std::vector<long> continued_fraction(double rho, int max_terms);

struct Rational {
    long num = 0, den = 1;
};

/// Rational detection: the convergent before the first partial quotient
/// above `blowup` within the first `max_terms` terms, if any.
std::optional<Rational> rational_from_cf(double rho, int max_terms = 12, double blowup = 1e6);

/// Smallest-denominator rational in the open interval (lo, hi)
/// (Stern-Brocot descent).
Rational smallest_denominator_in(double lo, double hi);

}  // namespace rtm::rot
