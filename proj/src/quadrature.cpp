#include "logsurf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "logsurf/errors.hpp"

namespace logsurf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Two refinement levels agree when they differ by less than this relative
// amount. Midpoint quadrature is second order, so agreement at 5e-3 bounds
// the remaining error by roughly a third of that.
constexpr double kRefineRelTolPolar = 5e-3;
constexpr double kRefineRelTolField = 1e-2;

// Sum one radial ring serially; rings are then accumulated in index order so
// the result is bitwise identical for any thread count.
template <class RadiusAt>
double rings_total(const PointFn& f, int n_r, int n_theta, RadiusAt edges,
                   ExecMode mode) {
    std::vector<double> ring_sums(static_cast<std::size_t>(n_r), 0.0);
    const double dtheta = 2.0 * kPi / n_theta;
    // a throwing integrand must not unwind through the parallel region
    std::exception_ptr eval_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (mode == ExecMode::Parallel)
#endif
    for (int i = 0; i < n_r; ++i) {
        const auto [r_left, r_right, r_mid] = edges(i);
        const double w = kPi * (r_right * r_right - r_left * r_left) / n_theta;
        double s = 0.0;
        try {
            for (int j = 0; j < n_theta; ++j) {
                const double th = (j + 0.5) * dtheta;
                s += f({r_mid * std::cos(th), r_mid * std::sin(th)});
            }
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(rings_total_error)
#endif
            if (!eval_error)
                eval_error = std::current_exception();
        }
        ring_sums[static_cast<std::size_t>(i)] = w * s;
    }
    (void)mode;
    if (eval_error)
        std::rethrow_exception(eval_error);
    double total = 0.0;
    for (double v : ring_sums)
        total += v;
    return total;
}

} // namespace

double polar_integral(const PointFn& f, double r_max, int n_r, int n_theta,
                      ExecMode mode) {
    if (!(r_max > 0.0) || n_r < 1 || n_theta < 4)
        throw config_error("polar quadrature needs r_max > 0, n_r >= 1, n_theta >= 4");
    const double dr = r_max / n_r;
    return rings_total(
        f, n_r, n_theta,
        [dr](int i) {
            const double rl = i * dr;
            const double rr = (i + 1) * dr;
            return std::tuple{rl, rr, 0.5 * (rl + rr)};
        },
        mode);
}

double log_polar_integral(const PointFn& f, double r_min, double r_max, int n_r,
                          int n_theta, ExecMode mode) {
    if (!(r_min > 0.0) || !(r_max > r_min) || n_r < 1 || n_theta < 4)
        throw config_error("log-polar quadrature needs 0 < r_min < r_max");
    const double dt = std::log(r_max / r_min) / n_r;
    return rings_total(
        f, n_r, n_theta,
        [r_min, dt](int i) {
            const double rl = r_min * std::exp(i * dt);
            const double rr = r_min * std::exp((i + 1) * dt);
            return std::tuple{rl, rr, std::sqrt(rl * rr)}; // midpoint in ln r
        },
        mode);
}

CurvatureIntegral integral_curvature(const PointFn& integrand, double r_max,
                                     double tail_exponent, int n_r, int n_theta,
                                     ExecMode mode) {
    CurvatureIntegral out;
    out.r_max = r_max;
    const double coarse = polar_integral(integrand, r_max, n_r, n_theta, mode);
    const double fine = polar_integral(integrand, r_max, 2 * n_r, 2 * n_theta, mode);
    out.window = fine;
    const double scale = std::max({std::abs(coarse), std::abs(fine), 1e-300});
    out.refined_agree = std::abs(fine - coarse) <= kRefineRelTolPolar * scale;

    if (tail_exponent > 2.0) {
        // Fit the tail constant from the angular average at the window edge.
        const int n_fit = std::max(n_theta, 32);
        double edge_avg = 0.0;
        const double r_eval = r_max * (1.0 - 1e-9);
        for (int j = 0; j < n_fit; ++j) {
            const double th = (j + 0.5) * 2.0 * kPi / n_fit;
            edge_avg += integrand({r_eval * std::cos(th), r_eval * std::sin(th)});
        }
        edge_avg /= n_fit;
        const double c_hat = edge_avg * std::pow(r_max, tail_exponent);
        out.tail = c_hat * 2.0 * kPi * std::pow(r_max, 2.0 - tail_exponent) /
                   (tail_exponent - 2.0);
    }
    out.value = out.window + out.tail;
    out.tail_share = std::abs(out.tail) / std::max(std::abs(out.value), 1e-300);
    return out;
}

CurvatureIntegral integral_curvature(const PlanarField& integrand) {
    CurvatureIntegral out;
    out.r_max = integrand.halfwidth;
    const int n = integrand.n_cells;
    const double h = integrand.spacing();
    double fine = 0.0;
    for (double v : integrand.values)
        if (std::isfinite(v))
            fine += v;
    fine *= h * h;
    // Coarse level: every other cell carries four cells' area.
    double coarse = 0.0;
    for (int iy = 0; iy < n; iy += 2)
        for (int ix = 0; ix < n; ix += 2) {
            const double v = integrand.at(ix, iy);
            if (std::isfinite(v))
                coarse += v;
        }
    coarse *= 4.0 * h * h;
    out.window = fine;
    out.value = fine;
    const double scale = std::max({std::abs(coarse), std::abs(fine), 1e-300});
    out.refined_agree = std::abs(fine - coarse) <= kRefineRelTolField * scale;
    return out;
}

double ring_integral(const PointFn& f, double r0, int k, int n_r, int n_theta) {
    if (!(r0 > 0.0) || k < 0)
        throw config_error("ring integral needs r0 > 0 and octave k >= 0");
    const double lo = r0 * std::pow(2.0, k);
    return log_polar_integral(f, lo, 2.0 * lo, n_r, n_theta);
}

RingDecay ring_decay(const PointFn& f, double r0, int n_octaves, int tail_octaves) {
    if (n_octaves < 2 || tail_octaves < 1)
        throw config_error("ring decay needs at least two octaves");
    RingDecay out;
    out.rings.reserve(static_cast<std::size_t>(n_octaves));
    for (int k = 0; k < n_octaves; ++k)
        out.rings.push_back(ring_integral(f, r0, k));

    // Zero tail mass means the integrand has (numerically) compact support.
    if (out.rings.back() <= 0.0) {
        bool rising_after_zero = false;
        bool seen_zero = false;
        for (double v : out.rings) {
            if (v <= 0.0)
                seen_zero = true;
            else if (seen_zero)
                rising_after_zero = true;
        }
        out.mean_log_ratio = -kInf;
        out.conclusive = !rising_after_zero;
        return out;
    }

    const int first = std::max(1, n_octaves - tail_octaves);
    double sum = 0.0;
    int count = 0;
    for (int k = first; k < n_octaves; ++k) {
        const double prev = out.rings[static_cast<std::size_t>(k - 1)];
        const double cur = out.rings[static_cast<std::size_t>(k)];
        if (!(prev > 0.0)) {
            out.conclusive = false;
            return out;
        }
        sum += std::log(cur / prev);
        ++count;
    }
    out.mean_log_ratio = sum / count;
    out.conclusive = true;
    return out;
}

double tail_moment(double R, double p, int k) {
    if (!(R > 0.0) || !(p > 2.0))
        throw config_error("tail moment needs R > 0 and exponent p > 2");
    const double a = p - 2.0;
    const double Ra = std::pow(R, -a);
    const double L = std::log(R);
    switch (k) {
    case 0:
        return Ra / a;
    case 1:
        return Ra * (a * L + 1.0) / (a * a);
    case 2:
        return Ra * (a * a * L * L + 2.0 * a * L + 2.0) / (a * a * a);
    default:
        throw config_error("tail moment supports log powers 0, 1, 2");
    }
}

} // namespace logsurf
