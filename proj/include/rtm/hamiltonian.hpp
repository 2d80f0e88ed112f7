// Interpolating Hamiltonians for the three semi-local scenarios: the
// saddle-center limit flow with its generating-function corrections, the
// fourth-order-resonance polynomial family, and the third-order-resonance
// limit flow; plus the homoclinic trajectory and separatrix area.
#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rtm/map.hpp"

namespace rtm::ham {

/// Limit Hamiltonian of the saddle-center scenario in scaled coordinates
/// x = psi/mu, y = w/mu^{3/2}:  (x^2 + y^2)/2 + (pi/3) x^3 - 1/(6 pi^2).
/// The constant puts the separatrix on the zero level.
double h1_saddle_center(double x, double y);

/// Closed-form correction terms H~_j, j = 1..4 (H~_1 is the limit
/// Hamiltonian above).
double h_tilde_saddle_center(int j, double x, double y);

/// Order-n truncation sum_{j<=n} mu^{j/2} H~_j(psi/mu, w/mu^{3/2}) in the
/// original coordinates; n in 1..4, mu > 0.
double h_corrected_saddle_center(PhasePoint p, const RtmParams& par, int order);

/// Scalar field with analytic partials up to third order, the input of the
/// generic generating-series evaluator.
struct ScalarField3 {
    std::function<double(double, double)> G, Gx, Gy, Gxx, Gxy, Gyy, Gxxy, Gxyy;
};

/// Generic series terms H^_j, j = 1..4, built from a generating function
/// G(x1, y):
///   H^_1 = G, H^_2 = Gx Gy / 2,
///   H^_3 = (Gxx Gy^2 + 4 Gxy Gx Gy + Gyy Gx^2)/12,
///   H^_4 = (Gxxy Gy + Gxyy Gx + Gxx Gyy + 3 Gxy^2) Gx Gy / 12
///        + Gxy (Gxx Gy^2 + Gyy Gx^2) / 12.
double generating_series_term(const ScalarField3& G, int j, double x, double y);

/// Coordinates of the fourth-order scenario: x = psi + w, y = psi.
double h_tilde_fourth_order(int j, double x, double y);  // j in {4,5,6}

/// H^{[n]}(psi, w) = sum_{j=4}^{n} H~_j(psi+w, psi), n in {4,5,6}.
double h_fourth_order(PhasePoint p, int order);

/// Limit Hamiltonian of the third-order scenario in scaled coordinates
/// x = pi psi/eps, y = pi w/eps: (1-x)(x+y-1)(2x+y+1).
double h1_third_order(double x, double y);

/// Equilibria of the third-order limit flow: elliptic (0,0) and the three
/// saddles (1,0), (1,-3), (-2,3).
std::array<std::array<double, 2>, 4> equilibria_third_order();

/// Homoclinic trajectory of the saddle-center limit flow:
/// x(t) = 3/(2 pi cosh^2(t/2)) - 1/pi, y(t) = 3 sinh(t/2)/(2 pi cosh^3(t/2)).
std::array<double, 2> homoclinic_trajectory(double t);

/// Area enclosed by the separatrix loop: 6/(5 pi^2).
double separatrix_area();
/// Same area by quadrature of y x' over t in [-40, 40] (oracle route).
double separatrix_area_quadrature();

/// RK4 integrator for a planar Hamiltonian vector field given by
/// numerical partials of H (used by the conservation checks and the CLI).
std::array<double, 2> flow_rk4(const std::function<double(double, double)>& H,
                               std::array<double, 2> q, double time, double dt);

/// Marching-squares extraction of the level set H = level on a uniform
/// grid over [x0,x1] x [y0,y1]; returns disconnected segments as polylines.
std::vector<std::vector<std::array<double, 2>>> level_curves(
    const std::function<double(double, double)>& H, double level, double x0, double x1,
    double y0, double y1, int n);

}  // namespace rtm::ham
