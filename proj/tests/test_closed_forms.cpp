#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "logsurf/closed_forms.hpp"
#include "logsurf/errors.hpp"
#include "logsurf/grid.hpp"

using namespace logsurf;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSymmetry = 1e-12; // closed-form symmetry identities
} // namespace

TEST_CASE("flat family is constant with zero curvature") {
    const FamilyInstance inst = FamilyInstance::flat(0.7);
    CHECK(family_u(inst, {0.3, -2.0}) == 0.7);
    CHECK(family_K(inst, {5.0, 5.0}) == 0.0);
    CHECK(family_curvature_integrable(inst));
    CHECK(family_total_curvature(inst) == 0.0);
}

TEST_CASE("chakie with zeta = 0 is radial about the origin") {
    const FamilyInstance inst = FamilyInstance::chakie(2, {1.0, 0.0}, 0.0);
    for (double r : {0.3, 0.9, 1.7}) {
        const double u0 = family_u(inst, {r, 0.0});
        for (int j = 1; j < 8; ++j) {
            const double th = 2.0 * kPi * j / 8.0;
            const double u = family_u(inst, {r * std::cos(th), r * std::sin(th)});
            CHECK(u == doctest::Approx(u0).epsilon(kSymmetry));
        }
    }
}

TEST_CASE("chakie with n >= 2 has the stated angular period") {
    const FamilyInstance inst = FamilyInstance::chakie(3, {0.5, 0.5}, 1.2);
    const double period = 2.0 * kPi / 3.0;
    for (double r : {0.4, 1.1}) {
        for (int j = 0; j < 5; ++j) {
            const double th = 0.3 + 1.1 * j;
            const Vec2 a{r * std::cos(th), r * std::sin(th)};
            const Vec2 b{r * std::cos(th + period), r * std::sin(th + period)};
            CHECK(family_u(inst, a) == doctest::Approx(family_u(inst, b)).epsilon(kSymmetry));
        }
    }
}

TEST_CASE("chakie n = 1 is radial about tanh(zeta) y") {
    const FamilyInstance inst = FamilyInstance::chakie(1, {-1.0, 0.0}, 1.0);
    const Vec2 c{std::tanh(1.0) * -1.0, 0.0};
    for (double r : {0.2, 0.7}) {
        const double u0 = family_u(inst, {c.x + r, c.y});
        for (int j = 1; j < 8; ++j) {
            const double th = 2.0 * kPi * j / 8.0;
            const Vec2 x{c.x + r * std::cos(th), c.y + r * std::sin(th)};
            CHECK(family_u(inst, x) == doctest::Approx(u0).epsilon(kSymmetry));
        }
    }
    // and decreasing away from that center along a ray
    double prev = family_u(inst, {c.x + 0.1, c.y});
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
        const double u = family_u(inst, {c.x + r, c.y});
        CHECK(u < prev);
        prev = u;
    }
}

TEST_CASE("chakie curvature matches its closed form") {
    const FamilyInstance inst = FamilyInstance::chakie(2, {1.0, 0.0}, 1.0);
    for (double r : {0.5, 1.0, 2.0}) {
        const Vec2 x{r * 0.6, r * 0.8};
        CHECK(family_K(inst, x) ==
              doctest::Approx(16.0 * r * r).epsilon(1e-12));
    }
    CHECK(family_total_curvature(inst) == doctest::Approx(8.0 * kPi).epsilon(1e-14));
}

TEST_CASE("stuart is periodic along the rotated frame direction") {
    const FamilyInstance inst = FamilyInstance::stuart(2.0, {0.0, -1.0}, 1.0, 0.4);
    // period 2 pi / sqrt(K0) along the unit vector v_perp / sqrt(K0), i.e. a
    // displacement (2 pi / K0) v_perp
    const Vec2 vp = inst.v_perp();
    const double step = 2.0 * kPi / 2.0;
    for (double s : {0.0, 0.7, 2.1}) {
        const Vec2 a{0.3 + s * vp.x, -0.2 + s * vp.y};
        const Vec2 b{a.x + step * vp.x, a.y + step * vp.y};
        CHECK(family_u(inst, a) == doctest::Approx(family_u(inst, b)).epsilon(1e-10));
    }
    CHECK(family_K(inst, {3.0, -4.0}) == 2.0);
    CHECK_FALSE(family_curvature_integrable(inst));
    CHECK_THROWS_AS(family_total_curvature(inst), config_error);
}

TEST_CASE("stuart frame vectors are orthogonal with length sqrt(K0)") {
    const FamilyInstance inst = FamilyInstance::stuart(3.0, {0.0, 0.0}, 0.5, 1.1);
    const Vec2 v = inst.v(), vp = inst.v_perp();
    CHECK(v.x * vp.x + v.y * vp.y == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(v.x * v.x + v.y * v.y == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(vp.x * vp.x + vp.y * vp.y == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("special family is the gamma-scaled radial base profile") {
    const FamilyInstance sp = FamilyInstance::special(0.6, {1.0, 0.0});
    const FamilyInstance base = FamilyInstance::chakie(1, {1.0, 0.0}, 0.0);
    for (double r : {0.0, 0.5, 1.0, 3.0, 10.0}) {
        const Vec2 x{r, 0.0};
        CHECK(family_u(sp, x) ==
              doctest::Approx(0.6 * family_u(base, x)).epsilon(1e-13));
    }
    // K_gamma = 4 gamma (1 + r^2)^{-2(1-gamma)}
    for (double r : {0.5, 2.0}) {
        const double want = 2.4 * std::pow(1.0 + r * r, -0.8);
        CHECK(family_K(sp, {0.0, r}) == doctest::Approx(want).epsilon(1e-12));
    }
    CHECK(family_total_curvature(sp) == doctest::Approx(2.4 * kPi).epsilon(1e-14));
}

TEST_CASE("eval_family agrees with the split accessors") {
    const FamilyInstance inst = FamilyInstance::stuart(1.0, {0.0, -1.0}, 1.0, 0.0);
    const Vec2 x{0.8, 0.3};
    const auto [u, K] = eval_family(inst, x);
    CHECK(u == family_u(inst, x));
    CHECK(K == family_K(inst, x));
}

TEST_CASE("family PDE residual shrinks at second order") {
    // the identity lap u + K e^{2u} = 0 holds pointwise, so the 5-point
    // residual is pure truncation and drops 4x per halving
    const FamilyInstance inst = FamilyInstance::special(1.0, {1.0, 0.0});
    const auto residual = [&inst](int n) {
        const PlanarField u = make_field(
            1.5, n, [&inst](Vec2 x) { return family_u(inst, x); }, ExecMode::Serial);
        const PlanarField lap = laplacian(u, ExecMode::Serial);
        PlanarField res = make_empty_field(1.5, n);
        for (int iy = 0; iy < n; ++iy)
            for (int ix = 0; ix < n; ++ix)
                res.at(ix, iy) = lap.at(ix, iy) +
                                 family_K(inst, res.center(ix, iy)) *
                                     std::exp(2.0 * u.at(ix, iy));
        return interior_max_abs(res);
    };
    const double ratio = residual(100) / residual(200);
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.8);
}

TEST_CASE("parameter validation rejects out-of-domain instances") {
    CHECK_THROWS_AS(validate(FamilyInstance::chakie(0, {1.0, 0.0}, 0.0)), config_error);
    CHECK_THROWS_AS(validate(FamilyInstance::chakie(1, {0.0, 0.0}, 0.0)), config_error);
    CHECK_THROWS_AS(validate(FamilyInstance::stuart(0.0, {0.0, 0.0}, 1.0, 0.0)),
                    config_error);
    CHECK_THROWS_AS(validate(FamilyInstance::stuart(-1.0, {0.0, 0.0}, 1.0, 0.0)),
                    config_error);
    CHECK_THROWS_AS(validate(FamilyInstance::special(0.0, {1.0, 0.0})), config_error);
    CHECK_THROWS_AS(validate(FamilyInstance::special(1.5, {1.0, 0.0})), config_error);
}

TEST_CASE("harmonic specs evaluate their polynomial parts") {
    const HarmonicSpec c = HarmonicSpec::constant(2.5);
    CHECK(c.is_constant());
    CHECK(c.eval({3.0, -1.0}) == 2.5);

    const HarmonicSpec h = HarmonicSpec::re_z(1.5);
    CHECK_FALSE(h.is_constant());
    CHECK(h.eval({2.0, 7.0}) == doctest::Approx(3.0).epsilon(1e-14));

    HarmonicSpec q;
    q.a0 = 1.0;
    q.a = {0.0, 2.0}; // 2 Re z^2 = 2 (x^2 - y^2)
    q.b = {3.0};      // 3 Im z = 3 y
    CHECK(q.eval({1.0, 2.0}) ==
          doctest::Approx(1.0 + 2.0 * (1.0 - 4.0) + 6.0).epsilon(1e-14));
}

TEST_CASE("curvature specs carry sign, radial flag, and tails") {
    const CurvatureSpec fam = curvature_of_family(FamilyInstance::special(0.6, {1.0, 0.0}));
    CHECK(fam.sign == 1);
    CHECK(fam.radial);
    CHECK(fam.tail.kind == TailSpec::Power);
    CHECK(fam.tail.exponent == doctest::Approx(1.6).epsilon(1e-14));

    const CurvatureSpec disk = curvature_disk_indicator(2.0);
    CHECK(disk.sign == 1);
    CHECK(disk.upsilon({1.9, 0.0}) == 1.0);
    CHECK(disk.upsilon({2.1, 0.0}) == 0.0);
    CHECK(disk.tail.kind == TailSpec::Compact);

    const CurvatureSpec neg = curvature_exp_decay(1.0, -1);
    CHECK(neg.sign == -1);
    CHECK(neg.K({1.0, 0.0}) < 0.0);
    CHECK(neg.upsilon({1.0, 0.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));

    const CurvatureSpec flat = curvature_flat();
    CHECK(flat.sign == 0);
}
