#include "logsurf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "logsurf/errors.hpp"
#include "logsurf/quadrature.hpp"

namespace logsurf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Ring-share thresholds for the finiteness engine.
constexpr double kShareSettled = 1e-3; // ring adds under 0.1%: finite
constexpr double kShareDiverge = 0.5;  // three such rings in a row: divergent
constexpr int kSettleStreak = 3;
constexpr int kDivergeStreak = 3;
// Cap decision uses the geometric rate of the rings themselves; the share
// sequence has a slow transient near critical powers that biases the bound.
constexpr double kRingRateMargin = 5e-3;
constexpr int kTrailingRings = 8;
constexpr double kRingRateClamp = 10.0; // stands in for ratios with a zero ring

// Probe grid for the moment edges.
constexpr double kProbeFloor = 1e-3;
constexpr double kProbeCap = 8.0;
constexpr int kProbePoints = 28;
constexpr double kEdgeWidth = 1e-3; // bisection stop in q

} // namespace

FinitenessReport integral_finiteness(const PointFn& f, double r0,
                                     int max_doublings) {
    if (!(r0 > 1.0))
        throw config_error("ring engine needs a base radius above 1");
    FinitenessReport rep;
    // Base mass over [1, r0]; only the tail behavior beyond r = 1 matters.
    double total = log_polar_integral(f, 1.0, r0, 48, 64);
    if (!std::isfinite(total))
        return {Finiteness::Divergent, 0, kInf, 0.0};

    std::vector<double> rings;
    int settle_streak = 0, diverge_streak = 0;
    for (int k = 0; k < max_doublings; ++k) {
        rep.doublings = k + 1;
        const double ring = ring_integral(f, r0, k);
        if (!std::isfinite(ring)) {
            rep.verdict = Finiteness::Divergent;
            rep.last_share = kInf;
            return rep;
        }
        total += ring;
        rings.push_back(ring);
        const double share = total > 0.0 ? ring / total : 0.0;
        rep.last_share = share;
        // total == 0 means nothing seen yet; tiny shares only count as
        // settled once there is mass to take a share of
        settle_streak = total > 0.0 && share < kShareSettled ? settle_streak + 1 : 0;
        if (settle_streak >= kSettleStreak) {
            rep.verdict = Finiteness::Finite;
            return rep;
        }
        diverge_streak = share >= kShareDiverge ? diverge_streak + 1 : 0;
        if (diverge_streak >= kDivergeStreak) {
            rep.verdict = Finiteness::Divergent;
            return rep;
        }
    }
    if (total == 0.0) {
        rep.verdict = Finiteness::Finite; // nothing anywhere
        return rep;
    }

    // Doubling cap reached with shares stuck between the two thresholds:
    // decide from the geometric rate of the rings, which settles immediately
    // for power tails (rings scale by 2^{2-a} per octave for r^{-a}).
    const int n = static_cast<int>(rings.size());
    const int m = std::min(kTrailingRings, n - 1);
    double mean = 0.0;
    for (int i = n - m; i < n; ++i) {
        double ratio;
        if (rings[i] > 0.0 && rings[i - 1] > 0.0)
            ratio = std::log(rings[i] / rings[i - 1]);
        else if (rings[i] == rings[i - 1])
            ratio = 0.0;
        else
            ratio = rings[i] > 0.0 ? kRingRateClamp : -kRingRateClamp;
        mean += ratio;
    }
    mean = m > 0 ? mean / m : 0.0;
    rep.mean_log_ratio = mean;
    if (mean < -kRingRateMargin)
        rep.verdict = Finiteness::Finite;
    else if (mean > kRingRateMargin)
        rep.verdict = Finiteness::Divergent;
    else
        rep.verdict = Finiteness::Inconclusive; // sitting on the critical power
    return rep;
}

namespace {

// Probe whether int_{|x|>=1} Upsilon e^{2H} |x|^s dx is finite.
bool moment_finite(const CurvatureSpec& curvature, const HarmonicSpec& H,
                   double s) {
    auto ups = curvature.upsilon;
    PointFn f = [ups, H, s](Vec2 x) {
        const double r = norm(x);
        return ups(x) * std::exp(2.0 * H.eval(x) + s * std::log(r));
    };
    return integral_finiteness(f).verdict == Finiteness::Finite;
}

std::vector<double> probe_grid() {
    return log_spaced(kProbeFloor, kProbeCap, kProbePoints);
}

} // namespace

KappaLowerBound kappa_lower_bound(const CurvatureSpec& curvature,
                                  const HarmonicSpec& H) {
    KappaLowerBound out;
    const std::vector<double> grid = probe_grid();
    if (moment_finite(curvature, H, -grid.front())) {
        // finite already at the floor: report the edge as exactly 0
        out.finite_at_floor = true;
        return out;
    }
    std::size_t first_finite = grid.size();
    for (std::size_t j = 1; j < grid.size(); ++j) {
        if (moment_finite(curvature, H, -grid[j])) {
            first_finite = j;
            break;
        }
    }
    if (first_finite == grid.size()) {
        out.divergent_at_cap = true;
        out.q_edge = kProbeCap;
        out.kappa_star = kPi * kProbeCap;
        return out;
    }
    double lo = grid[first_finite - 1]; // divergent
    double hi = grid[first_finite];     // finite
    while (hi - lo > kEdgeWidth) {
        const double mid = 0.5 * (lo + hi);
        if (moment_finite(curvature, H, -mid))
            hi = mid;
        else
            lo = mid;
    }
    out.q_edge = 0.5 * (lo + hi);
    out.kappa_star = kPi * out.q_edge;
    return out;
}

KappaSupStar kappa_sup_star(const CurvatureSpec& curvature, const HarmonicSpec& H) {
    KappaSupStar out;
    if (!moment_finite(curvature, H, 0.0)) {
        out.inadmissible = true; // the reference measure itself has infinite mass
        return out;
    }
    const std::vector<double> grid = probe_grid();
    std::size_t first_divergent = grid.size();
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (!moment_finite(curvature, H, grid[j])) {
            first_divergent = j;
            break;
        }
    }
    if (first_divergent == grid.size()) {
        out.unbounded = true;
        out.q_star = kProbeCap;
        out.beta_star = -kInf;
        out.kappa_edge = -kInf;
        return out;
    }
    double lo = first_divergent == 0 ? 0.0 : grid[first_divergent - 1]; // finite
    double hi = grid[first_divergent];                                  // divergent
    while (hi - lo > kEdgeWidth) {
        const double mid = 0.5 * (lo + hi);
        if (moment_finite(curvature, H, mid))
            lo = mid;
        else
            hi = mid;
    }
    out.q_star = 0.5 * (lo + hi);
    out.beta_star = -2.0 * out.q_star;
    out.kappa_edge = -2.0 * kPi * out.q_star;
    return out;
}

SlopeFit asymptotic_slope(const PointFn& v, double r1, double r2, int n_radii,
                          int n_angles) {
    if (!(r1 > 0.0) || !(r2 >= 10.0 * r1))
        throw config_error("slope fit needs 0 < r1 and r2 >= 10 r1");
    if (n_radii < 20)
        throw config_error("slope fit needs at least 20 radii");
    SlopeFit fit;
    fit.radii = log_spaced(r1, r2, n_radii);
    fit.averages = angular_average(v, fit.radii, n_angles).values;

    double tbar = 0.0, ybar = 0.0;
    std::vector<double> ts(fit.radii.size());
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
        ts[i] = std::log(fit.radii[i]);
        tbar += ts[i];
        ybar += fit.averages[i];
    }
    tbar /= ts.size();
    ybar /= ts.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        sxx += (ts[i] - tbar) * (ts[i] - tbar);
        sxy += (ts[i] - tbar) * (fit.averages[i] - ybar);
    }
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * tbar;
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double resid = fit.averages[i] - (fit.intercept + fit.slope * ts[i]);
        ss += resid * resid;
    }
    fit.kappa_hat = -2.0 * kPi * fit.slope;
    fit.kappa_err = 2.0 * kPi * std::sqrt(ss / ts.size()) / std::sqrt(sxx);
    return fit;
}

// ---------- comparison profile ----------

namespace {

// locate rr in the log grid; returns the left index of the bracketing cell
std::size_t cell_index(const std::vector<double>& t, double tt) {
    const std::size_t k =
        std::upper_bound(t.begin(), t.end(), tt) - t.begin();
    if (k == 0)
        return 0;
    return std::min(k - 1, t.size() - 2);
}

double interp_log(const std::vector<double>& t, const std::vector<double>& v,
                  double tt) {
    const std::size_t i = cell_index(t, tt);
    const double s = (tt - t[i]) / (t[i + 1] - t[i]);
    return v[i] + s * (v[i + 1] - v[i]);
}

} // namespace

double ComparisonG::A_at(double rr) const {
    if (rr <= r.front())
        return A.front(); // w vanishes below the grid
    if (rr >= r.back())
        return tail_p > 0.0 ? tail_C * tail_moment(rr, tail_p, 2) : 0.0;
    return interp_log(t, A, std::log(rr));
}

double ComparisonG::B_at(double rr) const {
    if (rr <= r.front())
        return B.front();
    if (rr >= r.back())
        return tail_p > 0.0 ? tail_C * tail_moment(rr, tail_p, 1) : 0.0;
    return interp_log(t, B, std::log(rr));
}

double ComparisonG::w_at(double rr) const {
    if (rr < r.front())
        return 0.0;
    if (rr > r.back())
        return tail_p > 0.0 ? tail_C * std::pow(rr, -tail_p) : 0.0;
    return interp_log(t, w, std::log(rr));
}

double ComparisonG::at(double rr) const {
    if (!(rr > 0.0))
        throw config_error("comparison profile is defined for r > 0");
    return rr * (A_at(rr) - std::log(rr) * B_at(rr));
}

double ComparisonG::deriv_at(double rr) const {
    return A_at(rr) - (std::log(rr) + 1.0) * B_at(rr);
}

double ComparisonG::second_at(double rr) const {
    return -B_at(rr) / rr + w_at(rr) * rr * std::log(rr);
}

ComparisonG comparison_g(const std::function<double(double)>& w_fn, double r_lo,
                         double r_hi, int n, double tail_p, double tail_C) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo) || n < 16)
        throw config_error("comparison grid needs 0 < r_lo < r_hi and >= 16 nodes");
    if (tail_p != 0.0 && !(tail_p > 2.0))
        throw config_error("comparison tail needs decay faster than r^-2");
    if (tail_C < 0.0)
        throw config_error("comparison tail constant must be nonnegative");

    ComparisonG out;
    out.tail_p = tail_p;
    out.tail_C = tail_C;
    out.r.resize(n);
    out.t.resize(n);
    out.w.resize(n);
    out.A.resize(n);
    out.B.resize(n);
    out.g.resize(n);
    const double t_lo = std::log(r_lo), t_hi = std::log(r_hi);
    const double dt = (t_hi - t_lo) / (n - 1);
    for (int i = 0; i < n; ++i) {
        out.t[i] = t_lo + i * dt;
        out.r[i] = std::exp(out.t[i]);
        const double wi = w_fn(out.r[i]);
        if (!(wi >= 0.0) || !std::isfinite(wi))
            throw config_error("comparison weight must be finite and nonnegative");
        out.w[i] = wi;
    }
    // right-cumulative trapezoid of the t-integrands w e^{2t} t^2 and
    // w e^{2t} t, seeded with the closed-form tail remainders
    out.A[n - 1] = tail_p > 0.0 ? tail_C * tail_moment(r_hi, tail_p, 2) : 0.0;
    out.B[n - 1] = tail_p > 0.0 ? tail_C * tail_moment(r_hi, tail_p, 1) : 0.0;
    auto fA = [&](int i) {
        return out.w[i] * out.r[i] * out.r[i] * out.t[i] * out.t[i];
    };
    auto fB = [&](int i) { return out.w[i] * out.r[i] * out.r[i] * out.t[i]; };
    for (int i = n - 2; i >= 0; --i) {
        out.A[i] = out.A[i + 1] + 0.5 * (fA(i) + fA(i + 1)) * dt;
        out.B[i] = out.B[i + 1] + 0.5 * (fB(i) + fB(i + 1)) * dt;
    }
    for (int i = 0; i < n; ++i)
        out.g[i] = out.r[i] * (out.A[i] - out.t[i] * out.B[i]);
    return out;
}

double comparison_residual(const ComparisonG& gp) {
    const std::size_t n = gp.size();
    if (n < 3)
        throw config_error("residual check needs at least 3 nodes");
    const double dt = gp.t[1] - gp.t[0];
    double sup_rhs = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sup_rhs = std::max(sup_rhs,
                           std::abs(gp.w[i] * std::pow(gp.r[i], 3) * gp.t[i]));
    const double floor = 1e-3 * sup_rhs;
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double gtt = (gp.g[i - 1] - 2.0 * gp.g[i] + gp.g[i + 1]) / (dt * dt);
        const double gt = (gp.g[i + 1] - gp.g[i - 1]) / (2.0 * dt);
        const double rhs = gp.w[i] * std::pow(gp.r[i], 3) * gp.t[i];
        const double resid = gtt - 2.0 * gt + gp.g[i] - rhs;
        const double denom = std::abs(gtt) + 2.0 * std::abs(gt) +
                             std::abs(gp.g[i]) + std::abs(rhs);
        worst = std::max(worst, std::abs(resid) / std::max(denom, floor));
    }
    return worst;
}

// ---------- barrier ----------

double barrier_laplacian(const ComparisonG& gp, double alpha, double r) {
    const double g = gp.at(r);
    const double g1 = gp.deriv_at(r);
    const double g2 = gp.second_at(r);
    const double lin = alpha * (-r * r * g2 + r * g1 - g);
    const double quad = alpha * alpha * (r * g * g2 - r * g1 * g1 + g * g1);
    const double barrier = r - alpha * g;
    return (lin + quad) / (r * barrier * barrier);
}

BarrierReport barrier_check(const ComparisonG& gp, double alpha_star,
                            double alpha,
                            const std::function<double(double)>& source_max,
                            int n_samples) {
    if (!(alpha > 0.0) || !(alpha_star > 0.0))
        throw config_error("barrier check needs positive alpha and alpha_star");
    if (n_samples < 8)
        throw config_error("barrier check needs at least 8 sample radii");
    BarrierReport rep;
    rep.alpha = alpha;
    rep.alpha_star = alpha_star;

    // entry radius: last root of r - alpha g(r) = e inside the grid
    const double e = std::exp(1.0);
    auto excess = [&](double r) { return r - alpha * gp.at(r) - e; };
    const double r_lo = gp.r.front(), r_hi = gp.r.back();
    if (!(excess(r_hi) > 0.0))
        throw config_error("barrier never clears e on the grid; extend the window");
    const int scan = 512;
    double lo = -1.0, hi = -1.0;
    double prev_r = r_lo, prev_v = excess(r_lo);
    for (int i = 1; i <= scan; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, static_cast<double>(i) / scan);
        const double v = excess(r);
        if (prev_v < 0.0 && v >= 0.0) {
            lo = prev_r;
            hi = r;
        }
        prev_r = r;
        prev_v = v;
    }
    if (lo < 0.0) {
        rep.r_entry = r_lo; // already above e everywhere sampled
    } else {
        for (int it = 0; it < 80; ++it) {
            const double mid = std::sqrt(lo * hi);
            (excess(mid) < 0.0 ? lo : hi) = mid;
        }
        rep.r_entry = hi;
    }

    const double start = rep.r_entry * 1.001;
    if (!(start < r_hi))
        throw config_error("no radii beyond the barrier entry; extend the window");
    rep.radii = log_spaced(start, r_hi, n_samples);
    rep.margins.resize(rep.radii.size());
    rep.worst_margin = -kInf;
    rep.strictly_negative = true;
    for (std::size_t i = 0; i < rep.radii.size(); ++i) {
        const double r = rep.radii[i];
        const double f = std::log(r - alpha * gp.at(r));
        const double m = barrier_laplacian(gp, alpha, r) + 2.0 * f * source_max(r);
        rep.margins[i] = m;
        rep.worst_margin = std::max(rep.worst_margin, m);
        if (!(m < 0.0))
            rep.strictly_negative = false;
    }
    return rep;
}

// ---------- reflection ----------

double reflection_min(const PointFn& rho, double lambda, double halfwidth,
                      int n_cells) {
    if (!(halfwidth > 0.0) || n_cells < 4)
        throw config_error("reflection lattice needs a positive window and >= 4 cells");
    if (!(lambda > -halfwidth))
        throw config_error("reflection line lies outside the lattice window");
    double best = kInf;
    for (int j = 0; j < n_cells; ++j) {
        // x1 runs from -L to lambda inclusive, so the fixed line is sampled
        const double x1 = -halfwidth + (lambda + halfwidth) * j / (n_cells - 1.0);
        for (int k = 0; k < n_cells; ++k) {
            const double x2 = -halfwidth + 2.0 * halfwidth * k / (n_cells - 1.0);
            const double v =
                rho({2.0 * lambda - x1, x2}) - rho({x1, x2});
            best = std::min(best, v);
        }
    }
    return best;
}

LambdaScan lambda_scan(const PointFn& rho, double lambda_lo, double lambda_hi,
                       int n_lambda, double halfwidth, int n_cells) {
    if (n_lambda < 2 || !(lambda_hi > lambda_lo))
        throw config_error("lambda scan needs an increasing range and >= 2 points");
    LambdaScan out;
    out.lambdas.resize(n_lambda);
    out.minima.resize(n_lambda);
    for (int i = 0; i < n_lambda; ++i) {
        out.lambdas[i] =
            lambda_lo + (lambda_hi - lambda_lo) * i / (n_lambda - 1.0);
        out.minima[i] = reflection_min(rho, out.lambdas[i], halfwidth, n_cells);
    }
    auto negative = [](double m) { return m < -1e-10; };
    for (int i = 0; i < n_lambda; ++i)
        out.any_negative = out.any_negative || negative(out.minima[i]);
    for (int i = 0; i + 1 < n_lambda; ++i) {
        if (negative(out.minima[i]) != negative(out.minima[i + 1])) {
            out.has_crossing = true;
            out.crossing_lo = out.lambdas[i];
            out.crossing_hi = out.lambdas[i + 1];
            break;
        }
    }
    return out;
}

// ---------- radial symmetry ----------

SymmetryReport radial_asymmetry(const PointFn& f, const std::vector<double>& radii,
                                const std::vector<Vec2>& candidates,
                                int n_angles) {
    if (candidates.empty())
        throw config_error("symmetry check needs at least one candidate center");
    if (radii.empty())
        throw config_error("symmetry check needs sample radii");
    if (n_angles < 16)
        throw config_error("symmetry check needs at least 16 angles");
    SymmetryReport rep;
    rep.candidates = candidates;
    rep.scores.resize(candidates.size());
    double vmin = kInf, vmax = -kInf;
    std::vector<double> ring(n_angles);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double score = 0.0;
        for (double r : radii) {
            double mean = 0.0;
            for (int j = 0; j < n_angles; ++j) {
                const double a = 2.0 * kPi * j / n_angles;
                ring[j] = f({candidates[c].x + r * std::cos(a),
                             candidates[c].y + r * std::sin(a)});
                mean += ring[j];
                vmin = std::min(vmin, ring[j]);
                vmax = std::max(vmax, ring[j]);
            }
            mean /= n_angles;
            for (int j = 0; j < n_angles; ++j)
                score = std::max(score, std::abs(ring[j] - mean));
        }
        rep.scores[c] = score;
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c)
        if (rep.scores[c] < rep.scores[best])
            best = c;
    rep.best_center = candidates[best];
    rep.best_score = rep.scores[best];
    rep.dynamic_range = vmax - vmin;
    rep.radial = rep.best_score < 1e-8 * rep.dynamic_range ||
                 rep.dynamic_range == 0.0;
    return rep;
}

Vec2 field_argmax(const PlanarField& f) {
    double best = -kInf;
    Vec2 where{0.0, 0.0};
    for (int iy = 0; iy < f.n_cells; ++iy)
        for (int ix = 0; ix < f.n_cells; ++ix) {
            const double v = f.at(ix, iy);
            if (std::isfinite(v) && v > best) {
                best = v;
                where = f.center(ix, iy);
            }
        }
    return where;
}

std::vector<Vec2> local_maxima(const PlanarField& f) {
    const int n = f.n_cells;
    std::vector<char> is_max(static_cast<std::size_t>(n) * n, 0);
    for (int iy = 1; iy + 1 < n; ++iy)
        for (int ix = 1; ix + 1 < n; ++ix) {
            const double v = f.at(ix, iy);
            bool ok = true;
            for (int dy = -1; dy <= 1 && ok; ++dy)
                for (int dx = -1; dx <= 1 && ok; ++dx)
                    if (dx != 0 || dy != 0)
                        ok = v >= f.at(ix + dx, iy + dy);
            is_max[static_cast<std::size_t>(iy) * n + ix] = ok ? 1 : 0;
        }
    std::vector<Vec2> peaks;
    std::vector<char> seen(is_max.size(), 0);
    for (int iy = 1; iy + 1 < n; ++iy)
        for (int ix = 1; ix + 1 < n; ++ix) {
            const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
            if (!is_max[idx] || seen[idx])
                continue;
            // flood the plateau component, keep its best cell
            std::deque<std::pair<int, int>> queue = {{ix, iy}};
            seen[idx] = 1;
            double best_v = f.at(ix, iy);
            Vec2 best_c = f.center(ix, iy);
            while (!queue.empty()) {
                const auto [cx, cy] = queue.front();
                queue.pop_front();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 1 || ny < 1 || nx + 1 >= n || ny + 1 >= n)
                            continue;
                        const std::size_t j = static_cast<std::size_t>(ny) * n + nx;
                        if (!is_max[j] || seen[j])
                            continue;
                        seen[j] = 1;
                        queue.push_back({nx, ny});
                        if (f.at(nx, ny) > best_v) {
                            best_v = f.at(nx, ny);
                            best_c = f.center(nx, ny);
                        }
                    }
            }
            peaks.push_back(best_c);
        }
    return peaks;
}

namespace {

double golden_max_1d(const std::function<double(double)>& f, double lo, double hi) {
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

std::pair<Vec2, double> refine_peak(const PointFn& f, Vec2 c0, double span,
                                    int rounds) {
    Vec2 c = c0;
    for (int round = 0; round < rounds; ++round) {
        c.x = golden_max_1d([&](double x) { return f({x, c.y}); }, c.x - span,
                            c.x + span);
        c.y = golden_max_1d([&](double y) { return f({c.x, y}); }, c.y - span,
                            c.y + span);
        span *= 0.5;
    }
    return {c, f(c)};
}

} // namespace logsurf
