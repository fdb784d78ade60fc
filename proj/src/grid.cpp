#include "logsurf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "logsurf/errors.hpp"

namespace logsurf {

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kNaN = std::numeric_limits<double>::quiet_NaN();
} // namespace

bool PlanarField::in_interpolation_range(Vec2 p) const {
    const double lim = halfwidth - 0.5 * spacing();
    return std::abs(p.x) <= lim && std::abs(p.y) <= lim;
}

double PlanarField::interpolate(Vec2 p) const {
    if (!in_interpolation_range(p))
        throw config_error("interpolation point outside evaluable grid region");
    const double h = spacing();
    // continuous cell-center coordinates
    const double fx = (p.x + halfwidth) / h - 0.5;
    const double fy = (p.y + halfwidth) / h - 0.5;
    int ix = static_cast<int>(std::floor(fx));
    int iy = static_cast<int>(std::floor(fy));
    ix = std::clamp(ix, 0, n_cells - 2);
    iy = std::clamp(iy, 0, n_cells - 2);
    const double tx = fx - ix;
    const double ty = fy - iy;
    const double v00 = at(ix, iy), v10 = at(ix + 1, iy);
    const double v01 = at(ix, iy + 1), v11 = at(ix + 1, iy + 1);
    return (1 - tx) * (1 - ty) * v00 + tx * (1 - ty) * v10 + (1 - tx) * ty * v01 + tx * ty * v11;
}

PlanarField make_empty_field(double halfwidth, int n_cells) {
    if (!(halfwidth > 0.0) || n_cells <= 0 || n_cells % 2 != 0)
        throw config_error("planar grid needs positive halfwidth and a positive even cell count");
    PlanarField f;
    f.halfwidth = halfwidth;
    f.n_cells = n_cells;
    f.values.assign(static_cast<std::size_t>(n_cells) * n_cells, 0.0);
    return f;
}

PlanarField make_field(double halfwidth, int n_cells, const PointFn& f, ExecMode mode) {
    PlanarField out = make_empty_field(halfwidth, n_cells);
    const int n = n_cells;
    bool bad = false;
    // a throwing evaluator must not unwind through the parallel region
    std::exception_ptr eval_error;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (mode == ExecMode::Parallel)
#endif
    for (int iy = 0; iy < n; ++iy) {
        try {
            for (int ix = 0; ix < n; ++ix) {
                const double v = f(out.center(ix, iy));
                out.at(ix, iy) = v;
                if (!std::isfinite(v))
                    bad = true;
            }
        } catch (...) {
#ifdef _OPENMP
#pragma omp critical(make_field_error)
#endif
            if (!eval_error)
                eval_error = std::current_exception();
        }
    }
    (void)mode;
    if (eval_error)
        std::rethrow_exception(eval_error);
    if (bad)
        throw config_error("field evaluator produced a non-finite value");
    return out;
}

double RadialProfile::integral() const {
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
        s += weights[i] * values[i];
    return s;
}

void RadialProfile::normalize() {
    const double m = integral();
    if (!(m > 0.0) || !std::isfinite(m))
        throw config_error("cannot normalize profile with non-positive integral");
    for (double& v : values)
        v /= m;
}

double RadialProfile::interpolate(double r) const {
    if (radii.empty())
        throw config_error("empty radial profile");
    if (r <= radii.front())
        return values.front();
    if (r >= radii.back())
        return values.back();
    const auto it = std::upper_bound(radii.begin(), radii.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - radii.begin()) - 1;
    const double t = (std::log(r) - std::log(radii[i])) / (std::log(radii[i + 1]) - std::log(radii[i]));
    return (1 - t) * values[i] + t * values[i + 1];
}

std::vector<double> log_spaced(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2)
        throw config_error("log_spaced needs 0 < lo < hi and n >= 2");
    std::vector<double> r(n);
    const double t0 = std::log(lo), dt = (std::log(hi) - t0) / (n - 1);
    for (int i = 0; i < n; ++i)
        r[i] = std::exp(t0 + i * dt);
    r.front() = lo;
    r.back() = hi;
    return r;
}

RadialProfile log_radial_grid(double r_min, double r_max, int n_points) {
    RadialProfile p;
    p.radii = log_spaced(r_min, r_max, n_points);
    p.values.assign(p.radii.size(), 0.0);
    p.weights.resize(p.radii.size());
    // ds = r dt on the log grid, so the area element 2 pi s ds becomes
    // 2 pi r^2 dt with uniform dt; trapezoid halves the endpoints.
    const double dt = (std::log(r_max) - std::log(r_min)) / (n_points - 1);
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        const double c = (i == 0 || i + 1 == p.radii.size()) ? 0.5 : 1.0;
        p.weights[i] = c * 2.0 * kPi * p.radii[i] * p.radii[i] * dt;
    }
    return p;
}

RadialProfile sample_profile(const RadialProfile& grid, const std::function<double(double)>& f) {
    RadialProfile out = grid;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values[i] = f(out.radii[i]);
    return out;
}

PlanarField laplacian(const PlanarField& u, ExecMode mode) {
    if (u.n_cells < 4)
        throw config_error("laplacian needs at least 4 cells per axis");
    PlanarField out = make_empty_field(u.halfwidth, u.n_cells);
    const int n = u.n_cells;
    const double inv_h2 = 1.0 / (u.spacing() * u.spacing());
    std::fill(out.values.begin(), out.values.end(), kNaN);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (mode == ExecMode::Parallel)
#endif
    for (int iy = 1; iy < n - 1; ++iy) {
        for (int ix = 1; ix < n - 1; ++ix) {
            out.at(ix, iy) = (u.at(ix + 1, iy) + u.at(ix - 1, iy) + u.at(ix, iy + 1) +
                              u.at(ix, iy - 1) - 4.0 * u.at(ix, iy)) * inv_h2;
        }
    }
    (void)mode;
    return out;
}

PlanarField gauss_curvature_of(const PlanarField& u, ExecMode mode) {
    PlanarField lap = laplacian(u, mode);
    const int n = u.n_cells;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (mode == ExecMode::Parallel)
#endif
    for (int iy = 1; iy < n - 1; ++iy)
        for (int ix = 1; ix < n - 1; ++ix)
            lap.at(ix, iy) = -std::exp(-2.0 * u.at(ix, iy)) * lap.at(ix, iy);
    (void)mode;
    return lap;
}

double interior_max_abs(const PlanarField& f) {
    double m = 0.0;
    const int n = f.n_cells;
    for (int iy = 1; iy < n - 1; ++iy)
        for (int ix = 1; ix < n - 1; ++ix)
            m = std::max(m, std::abs(f.at(ix, iy)));
    return m;
}

double interior_max_abs_diff(const PlanarField& a, const PlanarField& b) {
    if (a.n_cells != b.n_cells)
        throw config_error("grid size mismatch");
    double m = 0.0;
    const int n = a.n_cells;
    for (int iy = 1; iy < n - 1; ++iy)
        for (int ix = 1; ix < n - 1; ++ix)
            m = std::max(m, std::abs(a.at(ix, iy) - b.at(ix, iy)));
    return m;
}

namespace {

RadialProfile angular_average_impl(const PointFn& u, const std::vector<double>& radii, int n_angles) {
    if (n_angles < 16)
        throw config_error("angular average needs n_angles >= 16");
    if (radii.empty())
        throw config_error("angular average needs at least one radius");
    RadialProfile out;
    out.radii = radii;
    out.values.resize(radii.size());
    out.weights.resize(radii.size());
    const double w_angle = 1.0 / n_angles;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        double acc = 0.0;
        for (int j = 0; j < n_angles; ++j) {
            const double th = 2.0 * kPi * j / n_angles;
            acc += u({radii[i] * std::cos(th), radii[i] * std::sin(th)});
        }
        out.values[i] = acc * w_angle;
    }
    // Rebuild area weights from the (possibly irregular) radius list:
    // trapezoid in r against the 2 pi s ds measure.
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double left = (i == 0) ? radii[0] : 0.5 * (radii[i - 1] + radii[i]);
        const double right = (i + 1 == radii.size()) ? radii.back() : 0.5 * (radii[i] + radii[i + 1]);
        out.weights[i] = kPi * (right * right - left * left);
    }
    return out;
}

} // namespace

RadialProfile angular_average(const PointFn& u, const std::vector<double>& radii, int n_angles) {
    return angular_average_impl(u, radii, n_angles);
}

RadialProfile angular_average(const PlanarField& u, const std::vector<double>& radii, int n_angles) {
    for (double r : radii) {
        const double lim = u.halfwidth - 0.5 * u.spacing();
        if (r > lim)
            throw config_error("angular average radius exceeds evaluable grid region");
    }
    return angular_average_impl(field_evaluator(u), radii, n_angles);
}

double deviation_bound(const PointFn& u, const std::vector<double>& radii, int n_angles) {
    const RadialProfile ubar = angular_average(u, radii, n_angles);
    double dev = 0.0;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        for (int j = 0; j < n_angles; ++j) {
            const double th = 2.0 * kPi * j / n_angles;
            const double v = u({radii[i] * std::cos(th), radii[i] * std::sin(th)});
            dev = std::max(dev, std::abs(v - ubar.values[i]));
        }
    }
    return dev;
}

PointFn field_evaluator(const PlanarField& f) {
    return [f](Vec2 x) { return f.interpolate(x); };
}

} // namespace logsurf
