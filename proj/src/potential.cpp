#include "logsurf/potential.hpp"

#include <algorithm>
#include <cmath>

#include "logsurf/errors.hpp"

namespace logsurf {

namespace {
constexpr double kPi = 3.14159265358979323846;
} // namespace

double RadialPotential::at(double r) const {
    if (!(r > 0.0))
        throw config_error("radial potential is evaluated at r > 0");
    // index of the last node with radius <= r
    const auto it = std::upper_bound(radii.begin(), radii.end(), r);
    if (it == radii.begin())
        return total_moment; // all mass outside r: Phi = sum m_i ln r_i
    const std::size_t j = static_cast<std::size_t>(it - radii.begin()) - 1;
    return std::log(r) * cum_mass[j] + (total_moment - cum_moment[j]);
}

RadialPotential radial_potential(const RadialProfile& rho) {
    const std::size_t m = rho.size();
    if (m == 0)
        throw config_error("radial potential needs a nonempty profile");
    if (!std::is_sorted(rho.radii.begin(), rho.radii.end()))
        throw config_error("radial profile radii must be ascending");
    RadialPotential out;
    out.radii = rho.radii;
    out.cum_mass.resize(m);
    out.cum_moment.resize(m);
    double cm = 0.0, cmom = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double mass = rho.values[i] * rho.weights[i];
        cm += mass;
        cmom += mass * std::log(rho.radii[i]);
        out.cum_mass[i] = cm;
        out.cum_moment[i] = cmom;
    }
    out.total_mass = cm;
    out.total_moment = cmom;
    out.phi.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        out.phi[j] = std::log(rho.radii[j]) * out.cum_mass[j] +
                     (out.total_moment - out.cum_moment[j]);
    return out;
}

double radial_potential_naive(const RadialProfile& rho, double r) {
    if (!(r > 0.0))
        throw config_error("radial potential is evaluated at r > 0");
    double phi = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i)
        phi += rho.values[i] * rho.weights[i] * std::log(std::max(r, rho.radii[i]));
    return phi;
}

namespace {

// Integral of (a + b s) over [s0, s1] and of s (a + b s) over [s0, s1],
// for the in-cell pieces of the piecewise-linear density.
double seg_mass(double a, double b, double s0, double s1) {
    return a * (s1 - s0) + 0.5 * b * (s1 * s1 - s0 * s0);
}
double seg_moment(double a, double b, double s0, double s1) {
    return 0.5 * a * (s1 * s1 - s0 * s0) + b * (s1 * s1 * s1 - s0 * s0 * s0) / 3.0;
}

} // namespace

SmoothRadialPotential smooth_radial_potential(const RadialProfile& rho) {
    const std::size_t m = rho.size();
    if (m < 2)
        throw config_error("smooth radial potential needs at least two nodes");
    if (!std::is_sorted(rho.radii.begin(), rho.radii.end()))
        throw config_error("radial profile radii must be ascending");
    SmoothRadialPotential out;
    out.t.resize(m);
    out.lam.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double r = rho.radii[i];
        if (!(r > 0.0))
            throw config_error("radial profile needs positive radii");
        out.t[i] = std::log(r);
        out.lam[i] = 2.0 * kPi * r * r * rho.values[i];
    }
    out.cmass.assign(m, 0.0);
    for (std::size_t i = 1; i < m; ++i)
        out.cmass[i] = out.cmass[i - 1] +
                       0.5 * (out.lam[i - 1] + out.lam[i]) * (out.t[i] - out.t[i - 1]);
    out.total_mass = out.cmass[m - 1];
    out.rmoment.assign(m, 0.0);
    for (std::size_t i = m - 1; i-- > 0;)
        out.rmoment[i] = out.rmoment[i + 1] +
                         0.5 * (out.t[i] * out.lam[i] + out.t[i + 1] * out.lam[i + 1]) *
                             (out.t[i + 1] - out.t[i]);
    return out;
}

double SmoothRadialPotential::mass_at_log(double tq) const {
    if (tq <= t.front())
        return 0.0;
    if (tq >= t.back())
        return total_mass;
    const auto it = std::upper_bound(t.begin(), t.end(), tq);
    const std::size_t j = static_cast<std::size_t>(it - t.begin()) - 1;
    const double dt = t[j + 1] - t[j];
    const double b = (lam[j + 1] - lam[j]) / dt;
    const double a = lam[j] - b * t[j];
    return cmass[j] + seg_mass(a, b, t[j], tq);
}

double SmoothRadialPotential::at_log(double tq) const {
    if (tq <= t.front())
        return rmoment.front(); // all mass at larger radii
    if (tq >= t.back())
        return tq * total_mass;
    const auto it = std::upper_bound(t.begin(), t.end(), tq);
    const std::size_t j = static_cast<std::size_t>(it - t.begin()) - 1;
    const double dt = t[j + 1] - t[j];
    const double b = (lam[j + 1] - lam[j]) / dt;
    const double a = lam[j] - b * t[j];
    const double mass_here = cmass[j] + seg_mass(a, b, t[j], tq);
    const double moment_rest = seg_moment(a, b, tq, t[j + 1]) + rmoment[j + 1];
    return tq * mass_here + moment_rest;
}

double SmoothRadialPotential::at(double r) const {
    if (!(r > 0.0))
        throw config_error("radial potential is evaluated at r > 0");
    return at_log(std::log(r));
}

double self_cell_log_average(double h) {
    if (!(h > 0.0))
        throw config_error("cell side must be positive");
    return std::log(h) - 0.5 * std::log(2.0) - 1.5 + kPi / 4.0;
}

PlanarField planar_potential(const PlanarField& rho, ExecMode mode) {
    const int n = rho.n_cells;
    if (n < 1 || rho.values.size() != static_cast<std::size_t>(n) * n)
        throw config_error("planar potential needs a consistent field");
    const double h = rho.spacing();

    // Kernel over all integer offsets (dx, dy) in [-(n-1), n-1]^2.
    const int w = 2 * n - 1;
    std::vector<double> table(static_cast<std::size_t>(w) * w);
    const double logh = std::log(h);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (mode == ExecMode::Parallel)
#endif
    for (int dy = -(n - 1); dy <= n - 1; ++dy) {
        for (int dx = -(n - 1); dx <= n - 1; ++dx) {
            const std::size_t idx =
                static_cast<std::size_t>(dy + n - 1) * w + static_cast<std::size_t>(dx + n - 1);
            if (dx == 0 && dy == 0)
                table[idx] = self_cell_log_average(h);
            else
                table[idx] = logh + 0.5 * std::log(double(dx) * dx + double(dy) * dy);
        }
    }

    PlanarField out = make_empty_field(rho.halfwidth, n);
    const double cell_area = h * h;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (mode == ExecMode::Parallel)
#endif
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            double acc = 0.0;
            for (int jy = 0; jy < n; ++jy) {
                const double* trow =
                    table.data() + static_cast<std::size_t>(iy - jy + n - 1) * w + (ix + n - 1);
                const double* rrow = rho.values.data() + static_cast<std::size_t>(jy) * n;
                for (int jx = 0; jx < n; ++jx) {
                    const double rv = rrow[jx];
                    if (rv != 0.0)
                        acc += rv * trow[-jx];
                }
            }
            out.values[static_cast<std::size_t>(iy) * n + ix] = cell_area * acc;
        }
    }
    (void)mode;
    return out;
}

double planar_potential_at(const PlanarField& rho, Vec2 x) {
    const int n = rho.n_cells;
    const double h = rho.spacing();
    const double area = h * h;
    const double on_center = 1e-9 * h; // below this, use the exact cell integral
    double acc = 0.0;
    for (int iy = 0; iy < n; ++iy) {
        const double cy = rho.coord(iy);
        for (int ix = 0; ix < n; ++ix) {
            const double rv = rho.at(ix, iy);
            if (rv == 0.0)
                continue;
            const double dx = x.x - rho.coord(ix);
            const double dy = x.y - cy;
            const double d2 = dx * dx + dy * dy;
            if (d2 < on_center * on_center)
                acc += rv * self_cell_log_average(h);
            else
                acc += rv * 0.5 * std::log(d2);
        }
    }
    return area * acc;
}

double radial_pairing(const RadialProfile& density, const RadialPotential& potential) {
    if (density.size() != potential.size())
        throw config_error("pairing needs matching node counts");
    double s = 0.0;
    for (std::size_t i = 0; i < density.size(); ++i)
        s += density.values[i] * density.weights[i] * potential.phi[i];
    return s;
}

double planar_pairing(const PlanarField& density, const PlanarField& potential) {
    if (density.n_cells != potential.n_cells || density.values.size() != potential.values.size())
        throw config_error("pairing needs matching grids");
    const double area = density.spacing() * density.spacing();
    double s = 0.0;
    for (std::size_t i = 0; i < density.values.size(); ++i)
        s += density.values[i] * potential.values[i];
    return area * s;
}

} // namespace logsurf
