#pragma once

#include <vector>

#include "logsurf/core.hpp"
#include "logsurf/grid.hpp"

namespace logsurf {

// Logarithmic potential Phi(x) = int ln|x-y| d mu(y).
//
// Radial case: mu is a sum of uniform rings, mass m_i on radius r_i. The
// potential of one ring at distance r from the center is m ln(max(r, r_i)),
// so with radii sorted ascending a single prefix pass gives all node values:
//   Phi(r_j) = ln(r_j) * sum_{r_i <= r_j} m_i + sum_{r_i > r_j} m_i ln r_i.
struct RadialPotential {
    std::vector<double> radii; // ascending node radii
    std::vector<double> phi;   // potential at the nodes
    std::vector<double> cum_mass;
    std::vector<double> cum_moment; // prefix sums of m_i ln r_i
    double total_mass = 0.0;
    double total_moment = 0.0;

    std::size_t size() const { return radii.size(); }
    double at(double r) const; // any r > 0, O(log M)
};

// Prefix-sum construction, O(M). Ring masses are rho.values[i] * rho.weights[i].
RadialPotential radial_potential(const RadialProfile& rho);

// Direct O(M) sum at one radius; O(M^2) across all nodes. Test reference.
double radial_potential_naive(const RadialProfile& rho, double r);

// C^1 variant of the radial potential. The ring construction concentrates
// mass on discrete shells, so its potential has kinks at every node and
// second differences across it are noisy. Here the density is treated as
// piecewise linear in t = ln r: with lam(t) = 2 pi r^2 rho(r) the mass
// function M(t) = int lam dt is a continuous trapezoid accumulation and
//   Phi(t) = t M(t) + int_t^{t_end} t' lam(t') dt',
// which has Phi_t = M continuous and Phi_tt = lam piecewise linear. All
// stored arrays are linear in rho, so damped mixes of two potentials equal
// the potential of the mixed density exactly.
struct SmoothRadialPotential {
    std::vector<double> t;       // node ln radii, ascending
    std::vector<double> lam;     // 2 pi r^2 rho at nodes
    std::vector<double> cmass;   // trapezoid mass from t[0] up to node
    std::vector<double> rmoment; // trapezoid of t'*lam from node to t.back()
    double total_mass = 0.0;

    std::size_t size() const { return t.size(); }
    double phi_node(std::size_t i) const { return t[i] * cmass[i] + rmoment[i]; }
    double mass_at_log(double tq) const; // M(t), clamped to [0, total]
    double at_log(double tq) const;
    double at(double r) const;
};

SmoothRadialPotential smooth_radial_potential(const RadialProfile& rho);

// Planar case: rho is piecewise constant on the cells of a square grid.
// Off-cell contributions use the midpoint value h^2 ln|x_c - x_c'|; the
// singular self cell uses its exact integral
//   int_cell ln|x_c - y| dy = h^2 (ln h - ln(2)/2 - 3/2 + pi/4).
// Direct O(n^4) summation against a precomputed (2n-1)^2 kernel table.
// Each output cell is owned by one task and summed in fixed order, so the
// parallel result is bitwise identical to the serial one.
PlanarField planar_potential(const PlanarField& rho, ExecMode mode = ExecMode::Serial);

// Potential of the gridded density at an arbitrary point (direct cell sum).
// If x lies exactly on a cell center, that cell contributes its exact
// self integral instead of a divergent midpoint term.
double planar_potential_at(const PlanarField& rho, Vec2 x);

// Pairings int Phi d(density). Interaction energy is half the self pairing;
// the solver also needs cross pairings between iterates, which are symmetric
// in exact arithmetic and on the discrete kernel alike.
double radial_pairing(const RadialProfile& density, const RadialPotential& potential);
double planar_pairing(const PlanarField& density, const PlanarField& potential);

// Exact average of ln|x| over the centered square of side h, i.e. the self
// cell integral divided by h^2. Exposed so tests can pin it against refined
// midpoint quadrature.
double self_cell_log_average(double h);

} // namespace logsurf
