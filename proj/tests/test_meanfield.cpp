#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>

#include "logsurf/closed_forms.hpp"
#include "logsurf/errors.hpp"
#include "logsurf/meanfield.hpp"

using namespace logsurf;

namespace {
constexpr double kPi = 3.14159265358979323846;

SolverConfig radial_config(double beta) {
    SolverConfig cfg;
    cfg.beta = beta;
    cfg.geometry = Geometry::Radial;
    cfg.domain.r_min = 1e-3;
    cfg.domain.r_max = 40.0;
    cfg.domain.n_radial = 800;
    cfg.max_iterations = 400;
    cfg.tolerance = 1e-10;
    return cfg;
}
} // namespace

TEST_CASE("a priori measure of the gamma = 0.6 profile has the closed-form mass") {
    const CurvatureSpec curv =
        curvature_of_family(FamilyInstance::special(0.6, {1.0, 0.0}));
    const HarmonicSpec H = HarmonicSpec::constant(0.0);
    const AprioriMeasure ap = build_apriori(curv, H, 10.0, ExecMode::Serial);
    // int_{|x|<=10} 2.4 (1+r^2)^{-0.8} dx = 12 pi (101^{1/5} - 1)
    const double want = 12.0 * kPi * (std::pow(101.0, 0.2) - 1.0);
    CHECK(ap.M1 == doctest::Approx(want).epsilon(1e-4));
    CHECK(ap.radial);
    CHECK(ap.sign == 1);
    CHECK(ap.tail.kind == TailSpec::Power);
    CHECK(ap.tail.exponent == doctest::Approx(1.6).epsilon(1e-12));

    // a reference whose window mass piles up at the edge is rejected: at
    // gamma = 1 the density is constant, so the outer octave holds 3/4
    const CurvatureSpec flat_ups =
        curvature_of_family(FamilyInstance::special(1.0, {1.0, 0.0}));
    CHECK_THROWS_AS(build_apriori(flat_ups, H, 10.0, ExecMode::Serial),
                    config_error);
}

TEST_CASE("minimizer reproduces the analytic density for the critical profile") {
    // For upsilon = 4 gamma (1+r^2)^{-2(1-gamma)} with gamma = 0.6 and
    // beta = 2.4, the minimizer is rho(r) = (1/pi) (1+r^2)^{-2} with E = 1/4.
    const FamilyInstance inst = FamilyInstance::special(0.6, {1.0, 0.0});
    const CurvatureSpec curv = curvature_of_family(inst);
    const HarmonicSpec H = HarmonicSpec::constant(0.0);
    const MinimizerResult res = solve_minimizer(curv, H, radial_config(2.4));
    REQUIRE(res.converged);
    CHECK(res.residual < 1e-10);
    CHECK(res.kappa == doctest::Approx(2.4 * kPi).epsilon(1e-14));

    double l1 = 0.0;
    for (std::size_t i = 0; i < res.rho_radial.size(); ++i) {
        const double r = res.rho_radial.radii[i];
        const double want = 1.0 / (kPi * (1.0 + r * r) * (1.0 + r * r));
        l1 += std::abs(res.rho_radial.values[i] - want) * res.rho_radial.weights[i];
    }
    CHECK(l1 < 1e-2);
    CHECK(res.E == doctest::Approx(0.25).epsilon(1e-2));
}

TEST_CASE("solver density is normalized and its free energy never increases") {
    const CurvatureSpec curv =
        curvature_of_family(FamilyInstance::special(0.7, {1.0, 0.0}));
    const HarmonicSpec H = HarmonicSpec::constant(0.0);
    const MinimizerResult res = solve_minimizer(curv, H, radial_config(1.0));
    REQUIRE(res.converged);
    CHECK(res.rho_radial.integral() == doctest::Approx(1.0).epsilon(1e-9));
    // Floor-damped steps may tread water at roundoff scale but never climb.
    const double slack = 1e-12;
    for (std::size_t k = 1; k < res.trace.free_energy.size(); ++k)
        CHECK(res.trace.free_energy[k] <=
              res.trace.free_energy[k - 1] + slack * std::abs(res.trace.free_energy[k - 1]));
}

TEST_CASE("beta = 0 minimizer is the normalized a priori measure") {
    const CurvatureSpec curv =
        curvature_of_family(FamilyInstance::special(0.7, {1.0, 0.0}));
    const HarmonicSpec H = HarmonicSpec::constant(0.0);
    SolverConfig cfg = radial_config(0.0);
    const MinimizerResult res = solve_minimizer(curv, H, cfg);
    REQUIRE(res.converged);
    for (std::size_t i = 0; i < res.rho_radial.size(); i += 37)
        CHECK(res.rho_radial.values[i] ==
              doctest::Approx(res.mu_radial.values[i]).epsilon(1e-12));
    CHECK(res.E == doctest::Approx(free_energy(res.rho_radial, res.phi_radial,
                                               res.mu_radial, 0.0)
                                       .E)
                       .epsilon(1e-12));
}

TEST_CASE("negative-beta minimizer is independent of the starting point") {
    const CurvatureSpec curv = curvature_exp_decay(1.0, -1);
    const HarmonicSpec H = HarmonicSpec::constant(0.0);
    SolverConfig a = radial_config(-2.0);
    a.domain.r_max = 30.0;
    SolverConfig b = a;
    b.init = InitKind::UniformDisk;
    b.init_radius = 3.0;
    const MinimizerResult ra = solve_minimizer(curv, H, a);
    const MinimizerResult rb = solve_minimizer(curv, H, b);
    REQUIRE(ra.converged);
    REQUIRE(rb.converged);
    double sup = 0.0;
    for (std::size_t i = 0; i < ra.rho_radial.size(); ++i)
        sup = std::max(sup, std::abs(ra.rho_radial.values[i] - rb.rho_radial.values[i]));
    CHECK(sup < 1e-8);
    CHECK(ra.F == doctest::Approx(rb.F).epsilon(1e-10));
}

TEST_CASE("planar fixed-point target is invariant under potential shifts") {
    const PlanarField tau = make_field(
        2.0, 24, [](Vec2 x) { return std::exp(-(x.x * x.x + x.y * x.y)); },
        ExecMode::Serial);
    const PlanarField phi = make_field(
        2.0, 24, [](Vec2 x) { return 0.3 * x.x - 0.1 * x.y * x.y; },
        ExecMode::Serial);
    PlanarField shifted = phi;
    for (double& v : shifted.values)
        v += 7.25;
    const PlanarField a = fixed_point_target(tau, 1.7, phi);
    const PlanarField b = fixed_point_target(tau, 1.7, shifted);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        CHECK(a.values[i] == doctest::Approx(b.values[i]).epsilon(1e-12));
}

TEST_CASE("relative entropy vanishes exactly at rho = mu and is negative otherwise") {
    RadialProfile mu = log_radial_grid(0.01, 10.0, 200);
    mu = sample_profile(mu, [](double r) { return std::exp(-r); });
    mu.normalize();
    CHECK(relative_entropy_s1(mu, mu) == 0.0);
    RadialProfile rho = mu;
    for (std::size_t i = 0; i < rho.size(); ++i)
        rho.values[i] *= (1.0 + 0.5 * std::sin(0.1 * static_cast<double>(i)));
    rho.normalize();
    CHECK(relative_entropy_s1(rho, mu) < 0.0);
}

TEST_CASE("planar minimizer smoke run converges and reconstructs") {
    const CurvatureSpec curv = curvature_smooth_bump(1.0);
    const HarmonicSpec H = HarmonicSpec::re_z(0.2);
    SolverConfig cfg;
    cfg.beta = 1.0;
    cfg.geometry = Geometry::Planar;
    cfg.domain.halfwidth = 1.5;
    cfg.domain.n_cells = 48;
    cfg.max_iterations = 400;
    cfg.tolerance = 1e-9;
    const MinimizerResult res = solve_minimizer(curv, H, cfg);
    REQUIRE(res.converged);
    double mass = 0.0;
    const double h = res.rho_planar.spacing();
    for (double v : res.rho_planar.values)
        mass += v * h * h;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));

    const Reconstruction rec = reconstruct_u(res, curv, H, ExecMode::Serial);
    CHECK(rec.kappa == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(rec.sign == 1);
    CHECK(rec.pde_residual_rel < 1e-2);
    CHECK(std::isfinite(rec.U({0.3, -0.2})));
}

TEST_CASE("radial reconstruction satisfies the curvature equation") {
    const FamilyInstance inst = FamilyInstance::special(0.6, {1.0, 0.0});
    const CurvatureSpec curv = curvature_of_family(inst);
    const HarmonicSpec H = HarmonicSpec::constant(0.0);
    const MinimizerResult res = solve_minimizer(curv, H, radial_config(2.4));
    REQUIRE(res.converged);
    const Reconstruction rec = reconstruct_u(res, curv, H, ExecMode::Serial);
    CHECK(rec.pde_residual_rel < 1e-3);
    CHECK(rec.U_radial(1.0) == doctest::Approx(rec.U({1.0, 0.0})).epsilon(1e-12));
}

TEST_CASE("solver rejects parameters outside the admissible range") {
    const CurvatureSpec curv =
        curvature_of_family(FamilyInstance::special(0.6, {1.0, 0.0}));
    const HarmonicSpec H = HarmonicSpec::constant(0.0);

    SolverConfig high = radial_config(4.0);
    CHECK_THROWS_WITH_AS(solve_minimizer(curv, H, high),
                         doctest::Contains("admissible range"), config_error);

    SolverConfig low = radial_config(0.3);
    low.beta_star = 0.4; // lower edge supplied by the curvature tail
    CHECK_THROWS_WITH_AS(solve_minimizer(curv, H, low),
                         doctest::Contains("admissible range"), config_error);

    SolverConfig bad_tol = radial_config(2.0);
    bad_tol.tolerance = 0.0;
    CHECK_THROWS_AS(solve_minimizer(curv, H, bad_tol), config_error);

    // radial geometry demands a radial problem
    SolverConfig cfg = radial_config(2.0);
    CHECK_THROWS_AS(solve_minimizer(curv, HarmonicSpec::re_z(1.0), cfg), config_error);
}

TEST_CASE("reconstruction rejects sign mismatches and the flat case") {
    const CurvatureSpec curv =
        curvature_of_family(FamilyInstance::special(0.6, {1.0, 0.0}));
    const HarmonicSpec H = HarmonicSpec::constant(0.0);
    const MinimizerResult res = solve_minimizer(curv, H, radial_config(2.4));
    REQUIRE(res.converged);

    const CurvatureSpec neg = curvature_exp_decay(1.0, -1);
    CHECK_THROWS_AS(reconstruct_u(res, neg, H, ExecMode::Serial), config_error);
    CHECK_THROWS_AS(reconstruct_u(res, curvature_flat(), H, ExecMode::Serial),
                    config_error);

    const Reconstruction flat = reconstruct_flat(HarmonicSpec::re_z(0.5));
    CHECK(flat.flat);
    CHECK(flat.kappa == 0.0);
    CHECK(flat.U({2.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
}
