#pragma once

#include <functional>
#include <vector>

#include "logsurf/closed_forms.hpp"
#include "logsurf/core.hpp"
#include "logsurf/grid.hpp"

namespace logsurf {

// Midpoint rule in polar coordinates over the disk of radius r_max:
// n_r radial cells uniform in r, n_theta angular cells. Exact area weights
// pi (r_right^2 - r_left^2) / n_theta per cell.
double polar_integral(const PointFn& f, double r_max, int n_r, int n_theta,
                      ExecMode mode = ExecMode::Serial);

// Same, but radial cells uniform in ln r between r_min and r_max. Better for
// integrands with power-law tails or a concentration near the origin.
double log_polar_integral(const PointFn& f, double r_min, double r_max, int n_r,
                          int n_theta, ExecMode mode = ExecMode::Serial);

struct CurvatureIntegral {
    double value = 0.0;      // window integral plus tail estimate
    double window = 0.0;     // integral over |x| <= r_max
    double tail = 0.0;       // analytic tail beyond r_max (0 if none applies)
    double tail_share = 0.0; // |tail| / max(|value|, tiny)
    double r_max = 0.0;
    bool refined_agree = false; // two refinement levels within rel. tolerance
};

// Integral of K e^{2u} over the plane. The integrand is sampled as f;
// tail_exponent p > 2 declares f ~ C r^{-p}, in which case the analytic
// remainder C_hat * 2 pi r_max^{2-p} / (p - 2) is added with C_hat fitted at
// r_max. Pass p <= 2 for "no valid tail" (window only).
CurvatureIntegral integral_curvature(const PointFn& integrand, double r_max,
                                     double tail_exponent, int n_r, int n_theta,
                                     ExecMode mode = ExecMode::Serial);

// Window-only integral of a gridded integrand over its own square, with the
// two-level refinement comparison done by coarsening the grid by 2.
CurvatureIntegral integral_curvature(const PlanarField& integrand);

// Integral of f over the dyadic ring 2^k r0 <= |x| < 2^{k+1} r0.
double ring_integral(const PointFn& f, double r0, int k, int n_r = 24,
                     int n_theta = 64);

// Mean of ln(ring[k+1]/ring[k]) over the last few octaves. Negative means the
// ring mass decays geometrically, i.e. the full integral converges. Returns
// +inf if any ring is non-positive after a positive one (treated as noise).
struct RingDecay {
    std::vector<double> rings; // ring integrals, octave by octave
    double mean_log_ratio = 0.0;
    bool conclusive = false;
};
RingDecay ring_decay(const PointFn& f, double r0, int n_octaves,
                     int tail_octaves = 4);

// Closed forms for int_R^inf s^{1-p} (ln s)^k ds, k = 0, 1, 2, p > 2.
// Used by the comparison-function builder to close its cumulative integrals.
double tail_moment(double R, double p, int k);

} // namespace logsurf
