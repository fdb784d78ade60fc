#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "logsurf/closed_forms.hpp"
#include "logsurf/core.hpp"
#include "logsurf/grid.hpp"
#include "logsurf/potential.hpp"

namespace logsurf {

// Reference measure tau = Upsilon e^{2H} dx restricted to the declared
// window. Its mass M1 is required to settle: the builder rejects the
// configuration when two quadrature refinements disagree or when the
// outermost radius-doubling octave still carries more than half of the
// mass (the signature of an integrand that grows toward the window edge).
struct AprioriMeasure {
    double M1 = 0.0;          // mass over the declared window
    double outer_share = 0.0; // fraction of M1 in the outermost octave
    bool radial = false;      // Upsilon radial and H constant
    int sign = 0;
    double r_max = 0.0; // declared radial extent
    TailSpec tail;      // tail of tau (inherited from Upsilon when H is constant)
    std::function<double(Vec2)> density; // Upsilon e^{2H}
    std::function<double(double)> density_radial; // valid when radial
};

AprioriMeasure build_apriori(const CurvatureSpec& curvature, const HarmonicSpec& H,
                             double r_max, ExecMode mode = ExecMode::Serial);

enum class Geometry { Radial, Planar };
enum class InitKind { Apriori, UniformDisk, Gaussian, User };

struct SolverDomain {
    double r_min = 1e-3; // radial geometry
    double r_max = 40.0;
    int n_radial = 2400;
    double halfwidth = 1.5; // planar geometry
    int n_cells = 96;
};

struct SolverConfig {
    double beta = 2.0;
    double beta_star = -std::numeric_limits<double>::infinity(); // caller-supplied lower edge
    Geometry geometry = Geometry::Radial;
    SolverDomain domain;
    InitKind init = InitKind::Apriori;
    double init_radius = 1.0; // uniform-disk start
    double init_sigma = 1.0;  // gaussian start
    RadialProfile user_init_radial;
    PlanarField user_init_planar;
    int max_iterations = 600;
    double tolerance = 1e-10; // sup-norm fixed-point residual
    double delta0 = 1.0;      // initial damping factor
    ExecMode mode = ExecMode::Serial;
};

struct IterationTrace {
    std::vector<double> free_energy;
    std::vector<double> residual;
    std::vector<double> delta;
};

struct MinimizerResult {
    Geometry geometry = Geometry::Radial;
    double beta = 0.0;
    double kappa = 0.0;      // beta * pi
    double M1 = 0.0;         // declared-window mass of tau
    double tail_share = 0.0; // outer-octave share of that mass

    RadialProfile rho_radial; // density values on the radial nodes
    RadialProfile mu_radial;  // normalized reference measure on the same nodes
    SmoothRadialPotential phi_radial;

    PlanarField rho_planar;
    PlanarField mu_planar;
    PlanarField phi_planar;

    double E = 0.0;  // 1/2 int Phi_rho d rho
    double S1 = 0.0; // -int rho ln(rho / mu1), <= 0
    double F = 0.0;  // beta E - S1

    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
    IterationTrace trace;

    // Potential of the converged density at an arbitrary radius / point.
    double potential_at_radius(double r) const;
    double potential_at(Vec2 x) const;
};

// Fixed-point target P(rho) proportional to tau e^{-beta Phi_rho}, normalized
// to unit mass on the grid. tau enters as its density values on the grid.
// The exponent is shifted by its maximum before exponentiation, so the step
// is overflow-safe and shift-invariant.
RadialProfile fixed_point_target(const RadialProfile& tau, double beta,
                                 const SmoothRadialPotential& phi);
PlanarField fixed_point_target(const PlanarField& tau, double beta,
                               const PlanarField& phi);

// S1 = -int rho ln(rho/mu) with the 0 ln 0 = 0 convention. Returns -inf when
// rho puts mass where mu vanishes.
double relative_entropy_s1(const RadialProfile& rho, const RadialProfile& mu);
double relative_entropy_s1(const PlanarField& rho, const PlanarField& mu);

// E, S1 and F = beta E - S1 of a density whose potential is already known.
struct FreeEnergy {
    double E = 0.0;
    double S1 = 0.0;
    double F = 0.0;
};
FreeEnergy free_energy(const RadialProfile& rho, const SmoothRadialPotential& phi,
                       const RadialProfile& mu, double beta);
FreeEnergy free_energy(const PlanarField& rho, const PlanarField& phi,
                       const PlanarField& mu, double beta);

// Damped fixed-point iteration for the free energy
//   F(rho) = beta E(rho) - S1(rho),  E = 1/2 iint ln|x-y| rho rho.
// The potential is linear in the density, so damped mixes reuse the two
// endpoint potentials instead of re-evaluating the planar kernel. The damping
// factor halves whenever a trial step raises F, down to a floor of 1/64; at
// the floor the step is accepted anyway so roundoff-scale plateaus cannot
// stall the iteration.
MinimizerResult solve_minimizer(const CurvatureSpec& curvature, const HarmonicSpec& H,
                                const SolverConfig& config);

// Surface reconstruction from a minimizer:
//   U = H - (beta/2) Phi_rho + U0,
//   U0 = 1/2 ln( kappa / (sigma int Upsilon e^{2(H - (beta/2) Phi)} ) ).
// Requires beta != 0 and a signed curvature with sign(beta) == sigma.
// The residual check depends on the geometry: radial runs difference U along
// the solver's own log-radius nodes (Delta u = u_tt / r^2 for radial u),
// planar runs apply the five-point Laplacian on the solve grid.
struct Reconstruction {
    double U0 = 0.0;
    double kappa = 0.0;
    int sign = 0;
    bool flat = false;             // K == 0 short-circuit, U = H exactly
    double pde_residual_rel = 0.0; // max |Delta U + K e^{2U}| / max |K e^{2U}|
    std::function<double(Vec2)> U;
    std::function<double(double)> U_radial; // populated for radial runs
};

Reconstruction reconstruct_u(const MinimizerResult& result,
                             const CurvatureSpec& curvature, const HarmonicSpec& H,
                             ExecMode mode = ExecMode::Serial);

// Flat special case K == 0, kappa = 0: the surface is U = H with no solve.
Reconstruction reconstruct_flat(const HarmonicSpec& H);

} // namespace logsurf
