#ifndef LOGSURF_GRID_HPP
#define LOGSURF_GRID_HPP

#include <functional>
#include <vector>

#include "logsurf/core.hpp"

namespace logsurf {

using PointFn = std::function<double(Vec2)>;

// Scalar samples at the cell centers of a uniform square grid over
// [-L, L] x [-L, L]. Cell centers keep the logarithmic kernel singularity off
// sample points. Values are row-major: index = iy * n_cells + ix.
struct PlanarField {
    double halfwidth = 0.0; // L
    int n_cells = 0;        // per axis, even
    std::vector<double> values;

    double spacing() const { return 2.0 * halfwidth / n_cells; }
    double coord(int i) const { return -halfwidth + (i + 0.5) * spacing(); }
    Vec2 center(int ix, int iy) const { return {coord(ix), coord(iy)}; }
    double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * n_cells + ix]; }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * n_cells + ix]; }

    // Bilinear interpolation between cell centers; throws if x is outside the
    // interpolable region [-L + h/2, L - h/2]^2.
    double interpolate(Vec2 x) const;

    bool in_interpolation_range(Vec2 x) const;
};

// Allocates the grid and samples f at every cell center. Throws config_error
// on invalid (L, n_cells) or when f produces a non-finite value.
PlanarField make_field(double halfwidth, int n_cells, const PointFn& f,
                       ExecMode mode = ExecMode::Parallel);
PlanarField make_empty_field(double halfwidth, int n_cells);

// Scalar samples on a strictly increasing positive radius grid with
// quadrature weights: sum_i w_i f(r_i) ~ integral_0^{r_max} f(s) 2 pi s ds.
struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> values;
    std::vector<double> weights;

    std::size_t size() const { return radii.size(); }
    // sum_i w_i v_i, the area integral of the sampled function
    double integral() const;
    // scales values so integral() == 1; throws if the integral is not positive
    void normalize();
    // piecewise-linear interpolation in ln r; clamps below r_0, returns
    // values.back() above r_max (callers handle tails explicitly)
    double interpolate(double r) const;
};

// Log-spaced radius grid on [r_min, r_max] with trapezoid-in-log weights
// (w_i = 2 pi r_i^2 dt, halved at the endpoints). Asymptotics live on ln r
// scales, so all radial work uses this spacing.
RadialProfile log_radial_grid(double r_min, double r_max, int n_points);

// Samples f(r) onto an existing radius grid, keeping the weights.
RadialProfile sample_profile(const RadialProfile& grid, const std::function<double(double)>& f);

// --- discrete calculus on PlanarField ---

// 5-point stencil (u_E + u_W + u_N + u_S - 4 u_C) / h^2 on interior cells.
// The one-cell boundary ring carries quiet NaN and is excluded from the
// interior norms below. Throws config_error when n_cells < 4.
PlanarField laplacian(const PlanarField& u, ExecMode mode = ExecMode::Parallel);

// K = -e^{-2u} * laplacian(u); boundary ring NaN as in laplacian.
PlanarField gauss_curvature_of(const PlanarField& u, ExecMode mode = ExecMode::Parallel);

// Norms over interior cells only (the boundary ring of derived fields is a
// NaN mask by design).
double interior_max_abs(const PlanarField& f);
double interior_max_abs_diff(const PlanarField& a, const PlanarField& b);

// --- angular statistics ---

// ubar(r_i) = (1/2pi) sum_j u(r_i e^{i theta_j}) * (2pi/n_angles) on the
// uniform angle grid (periodic trapezoid). Weights of the returned profile
// are rebuilt from the given radii. n_angles >= 16 required.
RadialProfile angular_average(const PointFn& u, const std::vector<double>& radii, int n_angles);
RadialProfile angular_average(const PlanarField& u, const std::vector<double>& radii, int n_angles);

// max over the sampled (r_i, theta_j) of |u - ubar(r_i)|: an empirical
// stand-in for the deviation constant c(u).
double deviation_bound(const PointFn& u, const std::vector<double>& radii, int n_angles);

// Wraps a PlanarField as a PointFn via bilinear interpolation.
PointFn field_evaluator(const PlanarField& f);

std::vector<double> log_spaced(double lo, double hi, int n);

} // namespace logsurf

#endif
