#include "logsurf/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "logsurf/errors.hpp"
#include "logsurf/quadrature.hpp"

namespace logsurf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Damping floor: at 1/64 a trial step is accepted even if the free energy
// failed to decrease, so roundoff plateaus near the minimum cannot stall.
constexpr double kDeltaFloor = 1.0 / 64.0;

// Near the minimum the true free-energy decrease per step drops below double
// roundoff; increases within this relative slack count as a clean step, so
// the damping factor recovers instead of sinking to the floor.
constexpr double kFreeEnergySlack = 1e-12;

bool acceptable_step(double f_new, double f_old) {
    return f_new <= f_old + kFreeEnergySlack * (1.0 + std::abs(f_old));
}

// Outermost radius-doubling octave may carry at most this share of the mass.
constexpr double kOuterShareMax = 0.5;

// Admissibility margin above the caller-supplied beta* edge.
constexpr double kBetaStarMargin = 1e-6;

double entropy_term(double rho, double mu) {
    if (rho == 0.0)
        return 0.0; // 0 ln 0 = 0
    if (mu <= 0.0)
        return kInf; // rho charges a set the reference measure misses
    return rho * std::log(rho / mu);
}

// Window mass of a density over the disk of radius r_max. Uniform polar cells
// resolve the core; the remaining decades use cells uniform in ln r, so a
// window stretching over many orders of magnitude still converges under
// refinement.
double window_mass(const std::function<double(Vec2)>& f, double r_max, int n_r,
                   int n_theta, ExecMode mode) {
    const double r_core = std::min(1.0, r_max);
    double total = polar_integral(f, r_core, n_r, n_theta, mode);
    if (r_max > r_core)
        total += log_polar_integral(f, r_core, r_max, n_r, n_theta, mode);
    return total;
}

} // namespace

AprioriMeasure build_apriori(const CurvatureSpec& curvature, const HarmonicSpec& H,
                             double r_max, ExecMode mode) {
    if (!(r_max > 0.0))
        throw config_error("apriori measure needs a positive window radius");
    AprioriMeasure out;
    out.r_max = r_max;
    out.sign = curvature.sign;
    out.radial = curvature.radial && H.is_constant();
    auto ups = curvature.upsilon;
    out.density = [ups, H](Vec2 x) { return ups(x) * std::exp(2.0 * H.eval(x)); };
    if (out.radial) {
        auto upsr = curvature.upsilon_radial;
        const double h2 = std::exp(2.0 * H.a0);
        out.density_radial = [upsr, h2](double r) { return upsr(r) * h2; };
    }
    if (H.is_constant() || curvature.tail.kind == TailSpec::Compact)
        out.tail = curvature.tail;
    else
        out.tail = {TailSpec::Unknown, 0.0};

    const double coarse = window_mass(out.density, r_max, 240, 96, mode);
    const double fine = window_mass(out.density, r_max, 480, 192, mode);
    if (!std::isfinite(fine) || fine <= 0.0)
        throw config_error("reference measure has no positive finite mass on the window");
    if (std::abs(fine - coarse) > 5e-3 * std::abs(fine))
        throw config_error("reference-measure mass does not settle under quadrature refinement");
    out.M1 = fine;
    const double outer = ring_integral(out.density, 0.5 * r_max, 0, 96, 128);
    out.outer_share = outer / out.M1;
    if (!(out.outer_share <= kOuterShareMax))
        throw config_error("reference measure keeps growing toward the window edge; mass diverges");
    return out;
}

RadialProfile fixed_point_target(const RadialProfile& tau, double beta,
                                 const SmoothRadialPotential& phi) {
    const std::size_t m = tau.size();
    if (phi.size() != m)
        throw config_error("fixed-point step needs matching grid sizes");
    RadialProfile out = tau;
    double shift = -kInf;
    std::vector<double> logs(m, -kInf);
    for (std::size_t i = 0; i < m; ++i) {
        if (tau.values[i] > 0.0) {
            logs[i] = std::log(tau.values[i]) - beta * phi.phi_node(i);
            shift = std::max(shift, logs[i]);
        }
    }
    if (!std::isfinite(shift))
        throw config_error("fixed-point step on a vanishing reference measure");
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        out.values[i] = std::isfinite(logs[i]) ? std::exp(logs[i] - shift) : 0.0;
        z += out.values[i] * out.weights[i];
    }
    for (double& v : out.values)
        v /= z;
    return out;
}

PlanarField fixed_point_target(const PlanarField& tau, double beta,
                               const PlanarField& phi) {
    if (tau.n_cells != phi.n_cells)
        throw config_error("fixed-point step needs matching grid sizes");
    PlanarField out = tau;
    const std::size_t m = tau.values.size();
    double shift = -kInf;
    std::vector<double> logs(m, -kInf);
    for (std::size_t i = 0; i < m; ++i) {
        if (tau.values[i] > 0.0) {
            logs[i] = std::log(tau.values[i]) - beta * phi.values[i];
            shift = std::max(shift, logs[i]);
        }
    }
    if (!std::isfinite(shift))
        throw config_error("fixed-point step on a vanishing reference measure");
    const double area = tau.spacing() * tau.spacing();
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        out.values[i] = std::isfinite(logs[i]) ? std::exp(logs[i] - shift) : 0.0;
        z += out.values[i];
    }
    z *= area;
    for (double& v : out.values)
        v /= z;
    return out;
}

double relative_entropy_s1(const RadialProfile& rho, const RadialProfile& mu) {
    if (rho.size() != mu.size())
        throw config_error("entropy needs matching grids");
    double s = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
        const double term = entropy_term(rho.values[i], mu.values[i]);
        if (term == kInf)
            return -kInf;
        s += rho.weights[i] * term;
    }
    return -s;
}

double relative_entropy_s1(const PlanarField& rho, const PlanarField& mu) {
    if (rho.values.size() != mu.values.size())
        throw config_error("entropy needs matching grids");
    const double area = rho.spacing() * rho.spacing();
    double s = 0.0;
    for (std::size_t i = 0; i < rho.values.size(); ++i) {
        const double term = entropy_term(rho.values[i], mu.values[i]);
        if (term == kInf)
            return -kInf;
        s += term;
    }
    return -s * area;
}

FreeEnergy free_energy(const RadialProfile& rho, const SmoothRadialPotential& phi,
                       const RadialProfile& mu, double beta) {
    FreeEnergy fe;
    double pairing = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i)
        pairing += rho.values[i] * rho.weights[i] * phi.phi_node(i);
    fe.E = 0.5 * pairing;
    fe.S1 = relative_entropy_s1(rho, mu);
    fe.F = beta * fe.E - fe.S1;
    return fe;
}

FreeEnergy free_energy(const PlanarField& rho, const PlanarField& phi,
                       const PlanarField& mu, double beta) {
    FreeEnergy fe;
    fe.E = 0.5 * planar_pairing(rho, phi);
    fe.S1 = relative_entropy_s1(rho, mu);
    fe.F = beta * fe.E - fe.S1;
    return fe;
}

namespace {

void normalize_radial(RadialProfile& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        s += p.values[i] * p.weights[i];
    if (!(s > 0.0) || !std::isfinite(s))
        throw config_error("initial density has no positive finite mass on the grid");
    for (double& v : p.values)
        v /= s;
}

void normalize_planar(PlanarField& f) {
    double s = 0.0;
    for (double v : f.values)
        s += v;
    s *= f.spacing() * f.spacing();
    if (!(s > 0.0) || !std::isfinite(s))
        throw config_error("initial density has no positive finite mass on the grid");
    for (double& v : f.values)
        v /= s;
}

RadialProfile initial_radial(const SolverConfig& cfg, const RadialProfile& grid,
                             const RadialProfile& mu) {
    RadialProfile rho = grid;
    switch (cfg.init) {
    case InitKind::Apriori:
        rho.values = mu.values;
        return rho;
    case InitKind::UniformDisk:
        if (!(cfg.init_radius > 0.0))
            throw config_error("uniform-disk start needs a positive radius");
        for (std::size_t i = 0; i < rho.size(); ++i)
            rho.values[i] = rho.radii[i] <= cfg.init_radius ? 1.0 : 0.0;
        break;
    case InitKind::Gaussian:
        if (!(cfg.init_sigma > 0.0))
            throw config_error("gaussian start needs a positive width");
        for (std::size_t i = 0; i < rho.size(); ++i) {
            const double r = rho.radii[i];
            rho.values[i] = std::exp(-0.5 * r * r / (cfg.init_sigma * cfg.init_sigma));
        }
        break;
    case InitKind::User:
        if (cfg.user_init_radial.size() < 2)
            throw config_error("user start needs a radial profile");
        for (std::size_t i = 0; i < rho.size(); ++i) {
            const double v = cfg.user_init_radial.interpolate(rho.radii[i]);
            if (!(v >= 0.0))
                throw config_error("user start density must be nonnegative");
            rho.values[i] = v;
        }
        break;
    }
    normalize_radial(rho);
    return rho;
}

PlanarField initial_planar(const SolverConfig& cfg, const PlanarField& mu) {
    const int n = mu.n_cells;
    PlanarField rho = make_empty_field(mu.halfwidth, n);
    switch (cfg.init) {
    case InitKind::Apriori:
        rho.values = mu.values;
        return rho;
    case InitKind::UniformDisk:
        if (!(cfg.init_radius > 0.0))
            throw config_error("uniform-disk start needs a positive radius");
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Vec2 c = rho.center(ix, iy);
                rho.values[static_cast<std::size_t>(iy) * n + ix] =
                    norm2(c) <= cfg.init_radius * cfg.init_radius ? 1.0 : 0.0;
            }
        break;
    case InitKind::Gaussian:
        if (!(cfg.init_sigma > 0.0))
            throw config_error("gaussian start needs a positive width");
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Vec2 c = rho.center(ix, iy);
                rho.values[static_cast<std::size_t>(iy) * n + ix] =
                    std::exp(-0.5 * norm2(c) / (cfg.init_sigma * cfg.init_sigma));
            }
        break;
    case InitKind::User: {
        const PlanarField& u = cfg.user_init_planar;
        if (u.n_cells < 2)
            throw config_error("user start needs a planar field");
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix) {
                const Vec2 c = rho.center(ix, iy);
                const double v = u.in_interpolation_range(c) ? u.interpolate(c) : 0.0;
                if (!(v >= 0.0))
                    throw config_error("user start density must be nonnegative");
                rho.values[static_cast<std::size_t>(iy) * n + ix] = v;
            }
        break;
    }
    }
    normalize_planar(rho);
    return rho;
}

void mix_into(RadialProfile& a, const RadialProfile& b, double d, RadialProfile& out) {
    for (std::size_t i = 0; i < a.size(); ++i)
        out.values[i] = (1.0 - d) * a.values[i] + d * b.values[i];
}

SmoothRadialPotential mix_potential(const SmoothRadialPotential& a,
                                    const SmoothRadialPotential& b, double d) {
    SmoothRadialPotential out = a;
    for (std::size_t i = 0; i < a.size(); ++i) {
        out.lam[i] = (1.0 - d) * a.lam[i] + d * b.lam[i];
        out.cmass[i] = (1.0 - d) * a.cmass[i] + d * b.cmass[i];
        out.rmoment[i] = (1.0 - d) * a.rmoment[i] + d * b.rmoment[i];
    }
    out.total_mass = (1.0 - d) * a.total_mass + d * b.total_mass;
    return out;
}

PlanarField mix_field(const PlanarField& a, const PlanarField& b, double d) {
    PlanarField out = a;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        out.values[i] = (1.0 - d) * a.values[i] + d * b.values[i];
    return out;
}

void validate_common(const SolverConfig& cfg) {
    if (!(cfg.beta < 4.0))
        throw config_error("beta = " + std::to_string(cfg.beta) +
                           " is outside the admissible range (beta*, 4): the free "
                           "energy is unbounded below at or beyond 4");
    if (!(cfg.beta > cfg.beta_star + kBetaStarMargin))
        throw config_error("beta = " + std::to_string(cfg.beta) +
                           " is outside the admissible range (beta*, 4): at or "
                           "below the lower edge beta* = " +
                           std::to_string(cfg.beta_star));
    if (!(cfg.tolerance > 0.0) || cfg.max_iterations < 1)
        throw config_error("solver needs a positive tolerance and iteration budget");
    if (!(cfg.delta0 > 0.0) || cfg.delta0 > 1.0)
        throw config_error("damping factor must lie in (0, 1]");
}

} // namespace

MinimizerResult solve_minimizer(const CurvatureSpec& curvature, const HarmonicSpec& H,
                                const SolverConfig& config) {
    validate_common(config);
    MinimizerResult res;
    res.geometry = config.geometry;
    res.beta = config.beta;
    res.kappa = config.beta * kPi;

    if (config.geometry == Geometry::Radial) {
        if (!curvature.radial || !H.is_constant())
            throw config_error("radial geometry needs a radial curvature and constant H");
        const SolverDomain& dom = config.domain;
        if (!(dom.r_min > 0.0) || !(dom.r_max > dom.r_min) || dom.n_radial < 16)
            throw config_error("radial solver needs 0 < r_min < r_max and >= 16 nodes");
        const AprioriMeasure apriori =
            build_apriori(curvature, H, dom.r_max, config.mode);
        res.M1 = apriori.M1;
        res.tail_share = apriori.outer_share;

        RadialProfile grid = log_radial_grid(dom.r_min, dom.r_max, dom.n_radial);
        RadialProfile tau = grid;
        for (std::size_t i = 0; i < grid.size(); ++i)
            tau.values[i] = apriori.density_radial(grid.radii[i]);
        RadialProfile mu = tau;
        normalize_radial(mu);

        RadialProfile rho = initial_radial(config, grid, mu);
        SmoothRadialPotential phi = smooth_radial_potential(rho);
        double F = free_energy(rho, phi, mu, config.beta).F;
        double delta = config.delta0;
        double resid = kInf;
        RadialProfile cand = rho;

        int k = 0;
        for (; k < config.max_iterations; ++k) {
            const RadialProfile target = fixed_point_target(tau, config.beta, phi);
            resid = 0.0;
            for (std::size_t i = 0; i < rho.size(); ++i)
                resid = std::max(resid, std::abs(target.values[i] - rho.values[i]));
            res.trace.free_energy.push_back(F);
            res.trace.residual.push_back(resid);
            res.trace.delta.push_back(delta);
            if (resid < config.tolerance) {
                res.converged = true;
                break;
            }
            const SmoothRadialPotential phi_t = smooth_radial_potential(target);
            if (!std::isfinite(F)) {
                // The start charges cells the reference measure misses; only
                // the full step leaves that set.
                rho = target;
                phi = phi_t;
                F = free_energy(rho, phi, mu, config.beta).F;
                continue;
            }
            double d = delta;
            bool halved = false;
            double Fc;
            SmoothRadialPotential phi_c = phi;
            for (;;) {
                mix_into(rho, target, d, cand);
                phi_c = mix_potential(phi, phi_t, d);
                Fc = free_energy(cand, phi_c, mu, config.beta).F;
                if (acceptable_step(Fc, F) || d <= kDeltaFloor)
                    break;
                d = std::max(kDeltaFloor, 0.5 * d);
                halved = true;
            }
            rho.values = cand.values;
            phi = phi_c;
            F = Fc;
            delta = halved ? d : std::min(1.0, 1.5 * d);
        }
        res.iterations = k;
        res.residual = resid;
        res.rho_radial = rho;
        res.mu_radial = mu;
        res.phi_radial = phi;
        const FreeEnergy fe = free_energy(rho, phi, mu, config.beta);
        res.E = fe.E;
        res.S1 = fe.S1;
        res.F = fe.F;
        return res;
    }

    // Planar path. One O(cells^2) potential per iteration; the damped trial
    // mixes reuse the endpoint potentials through linearity.
    const SolverDomain& dom = config.domain;
    if (!(dom.halfwidth > 0.0) || dom.n_cells < 8)
        throw config_error("planar solver needs a positive halfwidth and >= 8 cells");
    const AprioriMeasure apriori =
        build_apriori(curvature, H, dom.halfwidth, config.mode);
    res.M1 = apriori.M1;
    res.tail_share = apriori.outer_share;

    PlanarField tau = make_field(dom.halfwidth, dom.n_cells, apriori.density, config.mode);
    PlanarField mu = tau;
    normalize_planar(mu);

    PlanarField rho = initial_planar(config, mu);
    PlanarField phi = planar_potential(rho, config.mode);
    double F = free_energy(rho, phi, mu, config.beta).F;
    double delta = config.delta0;
    double resid = kInf;

    int k = 0;
    for (; k < config.max_iterations; ++k) {
        const PlanarField target = fixed_point_target(tau, config.beta, phi);
        resid = 0.0;
        for (std::size_t i = 0; i < rho.values.size(); ++i)
            resid = std::max(resid, std::abs(target.values[i] - rho.values[i]));
        res.trace.free_energy.push_back(F);
        res.trace.residual.push_back(resid);
        res.trace.delta.push_back(delta);
        if (resid < config.tolerance) {
            res.converged = true;
            break;
        }
        const PlanarField phi_t = planar_potential(target, config.mode);
        if (!std::isfinite(F)) {
            rho = target;
            phi = phi_t;
            F = free_energy(rho, phi, mu, config.beta).F;
            continue;
        }
        double d = delta;
        bool halved = false;
        double Fc;
        PlanarField cand = rho, phi_c = phi;
        for (;;) {
            cand = mix_field(rho, target, d);
            phi_c = mix_field(phi, phi_t, d);
            Fc = free_energy(cand, phi_c, mu, config.beta).F;
            if (acceptable_step(Fc, F) || d <= kDeltaFloor)
                break;
            d = std::max(kDeltaFloor, 0.5 * d);
            halved = true;
        }
        rho = cand;
        phi = phi_c;
        F = Fc;
        delta = halved ? d : std::min(1.0, 1.5 * d);
    }
    res.iterations = k;
    res.residual = resid;
    res.rho_planar = rho;
    res.mu_planar = mu;
    res.phi_planar = phi;
    const FreeEnergy fe = free_energy(rho, phi, mu, config.beta);
    res.E = fe.E;
    res.S1 = fe.S1;
    res.F = fe.F;
    return res;
}

double MinimizerResult::potential_at_radius(double r) const {
    if (geometry != Geometry::Radial)
        throw config_error("radius-based potential lookup needs a radial result");
    if (std::abs(phi_radial.total_mass - 1.0) > 1e-8)
        throw config_error("potential lookup needs a normalized density");
    if (r <= 0.0)
        return phi_radial.rmoment.front();
    return phi_radial.at(r);
}

double MinimizerResult::potential_at(Vec2 x) const {
    if (geometry == Geometry::Radial)
        return potential_at_radius(norm(x));
    const double area = rho_planar.spacing() * rho_planar.spacing();
    double mass = 0.0;
    for (double v : rho_planar.values)
        mass += v;
    if (std::abs(mass * area - 1.0) > 1e-8)
        throw config_error("potential lookup needs a normalized density");
    return planar_potential_at(rho_planar, x);
}

Reconstruction reconstruct_flat(const HarmonicSpec& H) {
    Reconstruction rec;
    rec.flat = true;
    rec.U0 = 0.0;
    rec.kappa = 0.0;
    rec.sign = 0;
    rec.pde_residual_rel = 0.0; // U = H is harmonic by construction
    rec.U = [H](Vec2 x) { return H.eval(x); };
    if (H.is_constant())
        rec.U_radial = [H](double) { return H.a0; };
    return rec;
}

Reconstruction reconstruct_u(const MinimizerResult& result,
                             const CurvatureSpec& curvature, const HarmonicSpec& H,
                             ExecMode mode) {
    if (!result.converged)
        throw config_error("reconstruction needs a converged minimizer");
    const double beta = result.beta;
    const int sign = curvature.sign;
    if (sign == 0)
        throw config_error("curvature vanishes identically; use the flat reconstruction");
    if (beta == 0.0)
        throw config_error("kappa = 0 is incompatible with a non-vanishing curvature");
    if ((beta > 0.0) != (sign > 0))
        throw config_error("sign of beta must match the curvature sign");

    Reconstruction rec;
    rec.sign = sign;
    rec.kappa = beta * kPi;

    if (result.geometry == Geometry::Radial) {
        const RadialProfile& rho = result.rho_radial;
        const SmoothRadialPotential& phi = result.phi_radial;
        const double h0 = H.a0;
        const std::size_t m = rho.size();

        // ln integral of Upsilon e^{2(H - (beta/2) Phi)}, shift-protected.
        double shift = -kInf;
        std::vector<double> logs(m, -kInf);
        for (std::size_t i = 0; i < m; ++i) {
            const double ups = curvature.upsilon_radial(rho.radii[i]);
            if (ups > 0.0) {
                logs[i] = std::log(ups) + 2.0 * (h0 - 0.5 * beta * phi.phi_node(i));
                shift = std::max(shift, logs[i]);
            }
        }
        double z = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (std::isfinite(logs[i]))
                z += rho.weights[i] * std::exp(logs[i] - shift);
        const double log_integral = shift + std::log(z);
        rec.U0 = 0.5 * (std::log(std::abs(rec.kappa)) - log_integral);

        const double u0 = rec.U0;
        SmoothRadialPotential phi_copy = phi;
        rec.U_radial = [phi_copy, h0, beta, u0](double r) {
            const double p = r <= 0.0 ? phi_copy.rmoment.front() : phi_copy.at(r);
            return h0 - 0.5 * beta * p + u0;
        };
        auto ur = rec.U_radial;
        rec.U = [ur](Vec2 x) { return ur(norm(x)); };

        // Residual along the solver's own log-radius nodes: for radial u,
        // Delta u = u_tt / r^2 with t = ln r; stride-4 second differences.
        const std::size_t stride = 4;
        std::vector<double> unode(m);
        for (std::size_t i = 0; i < m; ++i)
            unode[i] = h0 - 0.5 * beta * phi.phi_node(i) + u0;
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = stride; i + stride < m; ++i) {
            const double ta = phi.t[i - stride], tb = phi.t[i], tc = phi.t[i + stride];
            const double ua = unode[i - stride], ub = unode[i], uc = unode[i + stride];
            const double utt = 2.0 * (ua / ((tb - ta) * (tc - ta)) -
                                      ub / ((tb - ta) * (tc - tb)) +
                                      uc / ((tc - ta) * (tc - tb)));
            const double r = rho.radii[i];
            const double lap = utt / (r * r);
            const double source = sign * curvature.upsilon_radial(r) * std::exp(2.0 * ub);
            worst = std::max(worst, std::abs(lap + source));
            scale = std::max(scale, std::abs(source));
        }
        rec.pde_residual_rel = scale > 0.0 ? worst / scale : worst;
        return rec;
    }

    // Planar: U on the solve grid from the converged potential field, with
    // arbitrary-point evaluation by direct cell sums over the density.
    const PlanarField& rho = result.rho_planar;
    const PlanarField& phi = result.phi_planar;
    const int n = rho.n_cells;
    const std::size_t m = rho.values.size();

    std::vector<double> logs(m, -kInf);
    double shift = -kInf;
    PlanarField ups_grid = make_field(rho.halfwidth, n, curvature.upsilon, mode);
    for (std::size_t i = 0; i < m; ++i) {
        if (ups_grid.values[i] > 0.0) {
            const int ix = static_cast<int>(i) % n;
            const int iy = static_cast<int>(i) / n;
            const double hval = H.eval(rho.center(ix, iy));
            logs[i] = std::log(ups_grid.values[i]) +
                      2.0 * (hval - 0.5 * beta * phi.values[i]);
            shift = std::max(shift, logs[i]);
        }
    }
    const double area = rho.spacing() * rho.spacing();
    double z = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (std::isfinite(logs[i]))
            z += std::exp(logs[i] - shift);
    const double log_integral = shift + std::log(z * area);
    rec.U0 = 0.5 * (std::log(std::abs(rec.kappa)) - log_integral);

    const double u0 = rec.U0;
    PlanarField rho_copy = rho;
    rec.U = [rho_copy, H, beta, u0](Vec2 x) {
        return H.eval(x) - 0.5 * beta * planar_potential_at(rho_copy, x) + u0;
    };

    PlanarField ufield = make_empty_field(rho.halfwidth, n);
    for (std::size_t i = 0; i < m; ++i) {
        const int ix = static_cast<int>(i) % n;
        const int iy = static_cast<int>(i) / n;
        ufield.values[i] =
            H.eval(rho.center(ix, iy)) - 0.5 * beta * phi.values[i] + u0;
    }
    const PlanarField lap = laplacian(ufield, mode);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::isfinite(lap.values[i]))
            continue; // boundary ring
        const double source = sign * ups_grid.values[i] * std::exp(2.0 * ufield.values[i]);
        worst = std::max(worst, std::abs(lap.values[i] + source));
        scale = std::max(scale, std::abs(source));
    }
    rec.pde_residual_rel = scale > 0.0 ? worst / scale : worst;
    return rec;
}

} // namespace logsurf
