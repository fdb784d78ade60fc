#pragma once

#include <functional>
#include <vector>

#include "logsurf/closed_forms.hpp"
#include "logsurf/core.hpp"
#include "logsurf/grid.hpp"

namespace logsurf {

// ---------- ring-decay finiteness engine ----------

enum class Finiteness { Finite, Divergent, Inconclusive };

// Integrates f over octave rings [r0 2^k, r0 2^(k+1)] and watches the share
// each new ring adds to the running total. Shares under 1e-3 three rings in
// a row settle the integral as finite; shares at or above 1/2 three rings in
// a row (or a non-finite ring) settle it as divergent. If the doubling cap
// is reached, the trailing geometric rate of the rings themselves decides
// (for f ~ r^{-a} the rings scale by exactly 2^{2-a} per octave, with no
// transient): clear decay is finite, clear growth divergent, and a rate
// within the margin of zero sits on the critical power -> inconclusive.
struct FinitenessReport {
    Finiteness verdict = Finiteness::Inconclusive;
    int doublings = 0;
    double last_share = 0.0;
    double mean_log_ratio = 0.0; // trailing d ln(ring)/dk at the cap
};

FinitenessReport integral_finiteness(const PointFn& f, double r0 = 4.0,
                                     int max_doublings = 40);

// ---------- moment edges of the reference measure ----------

// kappa_* = pi * q_edge where q_edge is the infimum of q >= 0 with
// int_{|x|>=1} Upsilon e^{2H} |x|^{-q} dx finite. Monotone in q on |x| >= 1,
// so a coarse grid scan plus bisection pins the edge to 1e-3. Finiteness at
// the probe floor q = 1e-3 reports exactly 0.
struct KappaLowerBound {
    double kappa_star = 0.0;
    double q_edge = 0.0;
    bool finite_at_floor = false;  // already finite at the smallest probe
    bool divergent_at_cap = false; // still divergent at the largest probe
};

KappaLowerBound kappa_lower_bound(const CurvatureSpec& curvature,
                                  const HarmonicSpec& H = {});

// q* = supremum of q >= 0 with int_{|x|>=1} Upsilon e^{2H} |x|^{+q} dx finite.
// The admissible inverse temperatures are beta in (beta*, 4) with
// beta* = -2 q* (kappa* = pi beta*). All probes finite marks the measure as
// having unbounded moments (beta* = -infinity); a divergent q = 0 probe marks
// the measure itself as inadmissible.
struct KappaSupStar {
    double q_star = 0.0;
    double beta_star = 0.0;  // -2 q*, or -inf when unbounded
    double kappa_edge = 0.0; // -2 pi q*
    bool unbounded = false;
    bool inadmissible = false;
};

KappaSupStar kappa_sup_star(const CurvatureSpec& curvature,
                            const HarmonicSpec& H = {});

// ---------- asymptotic slope ----------

// Least-squares fit of the angular average of v against ln r over log-spaced
// radii in [r1, r2]; for v = u - H the surface opens with slope
// -kappa/(2 pi), so kappa_hat = -2 pi slope. kappa_err propagates the fit
// residual. Requires r2 >= 10 r1 and n_radii >= 20.
struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double kappa_hat = 0.0;
    double kappa_err = 0.0;
    std::vector<double> radii;
    std::vector<double> averages;
};

SlopeFit asymptotic_slope(const PointFn& v, double r1, double r2,
                          int n_radii = 24, int n_angles = 64);

// ---------- comparison profile ----------

// Radial comparison profile for a weight w >= 0:
//   A(r) = int_r^inf w(s) s ln^2 s ds,  B(r) = int_r^inf w(s) s ln s ds,
//   g(r) = r A(r) - r ln r B(r),
// with g' = A - (ln r + 1) B and g'' = -B/r + w r ln r in closed form, and
// the defining identity g_tt - 2 g_t + g = w e^{3t} t in t = ln r. The grid
// is log-spaced on [r_lo, r_hi]; beyond r_hi the integrals use the declared
// power tail w ~ tail_C r^{-tail_p} (closed forms, requires tail_p > 2), and
// below r_lo the weight is taken as zero, freezing A and B.
struct ComparisonG {
    std::vector<double> r, t, w, A, B, g;
    double tail_p = 0.0;
    double tail_C = 0.0;

    std::size_t size() const { return r.size(); }
    double A_at(double rr) const;
    double B_at(double rr) const;
    double w_at(double rr) const;
    double at(double rr) const;     // g
    double deriv_at(double rr) const;  // g'
    double second_at(double rr) const; // g''
};

ComparisonG comparison_g(const std::function<double(double)>& w, double r_lo,
                         double r_hi, int n, double tail_p = 0.0,
                         double tail_C = 0.0);

// Max over interior grid nodes of the pointwise-relative defect of the
// identity g_tt - 2 g_t + g = w e^{3t} t, using order-2 stencils for the
// left side. The denominator is |g_tt| + 2|g_t| + |g| + |rhs|, floored at
// 1e-3 sup|rhs| so nodes where everything vanishes cannot blow the ratio up.
double comparison_residual(const ComparisonG& g);

// ---------- barrier ----------

// Laplacian of f_alpha = ln(r - alpha g) from the closed-form derivatives:
//   Delta f = [alpha(-r^2 g'' + r g' - g)
//              + alpha^2 (r g g'' - r g'^2 + g g')] / (r (r - alpha g)^2).
double barrier_laplacian(const ComparisonG& g, double alpha, double r);

// Margin Delta f_alpha + 2 f_alpha * source_max(r) sampled on log-spaced
// radii beyond the entry radius R(alpha), the root of r - alpha g(r) = e
// (so f_alpha > 1 on the sampled range). source_max(r) is the angular max of
// K e^{2u} at radius r. The comparison argument needs the margin strictly
// negative at alpha = 2 alpha_star.
struct BarrierReport {
    double alpha = 0.0;
    double alpha_star = 0.0;
    double r_entry = 0.0;
    std::vector<double> radii;
    std::vector<double> margins;
    double worst_margin = 0.0; // largest sampled margin
    bool strictly_negative = false;
};

BarrierReport barrier_check(const ComparisonG& g, double alpha_star, double alpha,
                            const std::function<double(double)>& source_max,
                            int n_samples = 200);

// ---------- reflection ----------

// Minimum over a half-space lattice of rho(x^lambda) - rho(x), where
// x^lambda reflects across the line {x_1 = lambda} and x runs over a lattice
// on [-L, L]^2 intersected with {x_1 <= lambda}, including points exactly on
// the line. Densities radially decreasing about the origin give exactly 0
// (attained on the line); genuinely asymmetric densities can go negative.
double reflection_min(const PointFn& rho, double lambda, double halfwidth,
                      int n_cells = 64);

struct LambdaScan {
    std::vector<double> lambdas;
    std::vector<double> minima;
    bool any_negative = false;
    // bracket around the first verdict change along the scan, when one exists
    bool has_crossing = false;
    double crossing_lo = 0.0;
    double crossing_hi = 0.0;
};

LambdaScan lambda_scan(const PointFn& rho, double lambda_lo, double lambda_hi,
                       int n_lambda, double halfwidth, int n_cells = 64);

// ---------- radial symmetry about a candidate center ----------

// For each candidate center c, samples f on circles c + r e^{i theta} over
// the given radii and takes the worst angular deviation from the circle mean.
// The verdict is radial when the best candidate's score is below
// 1e-8 * (dynamic range of the sampled values).
struct SymmetryReport {
    std::vector<Vec2> candidates;
    std::vector<double> scores;
    Vec2 best_center{0.0, 0.0};
    double best_score = 0.0;
    double dynamic_range = 0.0;
    bool radial = false;
};

SymmetryReport radial_asymmetry(const PointFn& f, const std::vector<double>& radii,
                                const std::vector<Vec2>& candidates,
                                int n_angles = 64);

// Center of the cell holding the largest value.
Vec2 field_argmax(const PlanarField& f);

// Interior local maxima of a grid: non-strict 8-neighbor test, plateau cells
// merged by 8-connectivity, one representative (the component's best cell)
// per plateau. Border cells are excluded, so a constant field reports one
// representative, not n^2 of them.
std::vector<Vec2> local_maxima(const PlanarField& f);

// Coordinate-descent refinement of a smooth peak near c0: golden-section
// line searches alternating in x and y, the search span halving each round.
// Returns the refined location and its value.
std::pair<Vec2, double> refine_peak(const PointFn& f, Vec2 c0, double span,
                                    int rounds = 8);

} // namespace logsurf
