#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "logsurf/errors.hpp"
#include "logsurf/grid.hpp"

using namespace logsurf;

namespace {
constexpr double kExact = 1e-12;     // identities up to accumulated roundoff
constexpr double kStencil = 1e-9;    // 5-point stencil on polynomials
} // namespace

TEST_CASE("cell centers tile the square symmetrically") {
    const PlanarField f = make_empty_field(2.0, 8);
    CHECK(f.spacing() == doctest::Approx(0.5).epsilon(kExact));
    CHECK(f.coord(0) == doctest::Approx(-1.75).epsilon(kExact));
    CHECK(f.coord(7) == doctest::Approx(1.75).epsilon(kExact));
    // mirror pairs: coord(i) = -coord(n-1-i) exactly
    for (int i = 0; i < 8; ++i)
        CHECK(f.coord(i) == -f.coord(7 - i));
}

TEST_CASE("make_field samples at centers, row-major") {
    const PlanarField f =
        make_field(1.0, 4, [](Vec2 x) { return x.x + 10.0 * x.y; }, ExecMode::Serial);
    CHECK(f.at(1, 2) == doctest::Approx(f.coord(1) + 10.0 * f.coord(2)).epsilon(kExact));
    CHECK(f.values[2 * 4 + 1] == f.at(1, 2));
}

TEST_CASE("make_field rejects bad domains and non-finite values") {
    CHECK_THROWS_AS(make_field(0.0, 8, [](Vec2) { return 1.0; }), config_error);
    CHECK_THROWS_AS(make_field(1.0, 3, [](Vec2) { return 1.0; }), config_error);
    CHECK_THROWS_AS(make_field(1.0, 0, [](Vec2) { return 1.0; }), config_error);
    CHECK_THROWS_AS(
        make_field(1.0, 8, [](Vec2 x) { return 1.0 / (x.x - x.x); }, ExecMode::Serial),
        config_error);
}

TEST_CASE("parallel field fill matches serial bitwise") {
    const PointFn f = [](Vec2 x) { return std::sin(3.0 * x.x) * std::exp(x.y); };
    const PlanarField a = make_field(1.5, 64, f, ExecMode::Serial);
    const PlanarField b = make_field(1.5, 64, f, ExecMode::Parallel);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i)
        CHECK(a.values[i] == b.values[i]);
}

TEST_CASE("laplacian is exact on quadratics") {
    // second differences of x^2 + 3 y^2 give 2 + 6 at every interior cell
    const PlanarField u = make_field(
        1.0, 32, [](Vec2 x) { return x.x * x.x + 3.0 * x.y * x.y; }, ExecMode::Serial);
    const PlanarField lap = laplacian(u, ExecMode::Serial);
    for (int iy = 1; iy < 31; ++iy)
        for (int ix = 1; ix < 31; ++ix)
            CHECK(lap.at(ix, iy) == doctest::Approx(8.0).epsilon(kStencil));
    // boundary ring is masked
    CHECK(std::isnan(lap.at(0, 5)));
    CHECK(std::isnan(lap.at(31, 5)));
}

TEST_CASE("laplacian refinement shows second order on a smooth field") {
    const PointFn u = [](Vec2 x) { return std::exp(x.x) * std::cos(x.y); };
    // exp(x) cos(y) is harmonic, so the discrete laplacian IS the error
    const PlanarField c = laplacian(make_field(1.0, 50, u, ExecMode::Serial));
    const PlanarField f = laplacian(make_field(1.0, 100, u, ExecMode::Serial));
    const double ratio = interior_max_abs(c) / interior_max_abs(f);
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.8);
}

TEST_CASE("gauss curvature of the model sphere patch") {
    // u = -ln(1 + r^2) satisfies lap u + 4 e^{2u} = 0, so the recovered
    // curvature -e^{-2u} lap u is the constant 4 up to stencil truncation
    const PlanarField u = make_field(
        0.8, 160, [](Vec2 x) { return -std::log(1.0 + x.x * x.x + x.y * x.y); },
        ExecMode::Serial);
    const PlanarField K = gauss_curvature_of(u, ExecMode::Serial);
    for (int i = 40; i < 120; i += 20)
        CHECK(K.at(i, i) == doctest::Approx(4.0).epsilon(5e-4));
}

TEST_CASE("interior norms skip the NaN boundary ring") {
    PlanarField f = make_empty_field(1.0, 8);
    for (int iy = 0; iy < 8; ++iy)
        for (int ix = 0; ix < 8; ++ix)
            f.at(ix, iy) = 0.0;
    f.at(0, 0) = std::nan("");
    f.at(3, 3) = -7.0;
    CHECK(interior_max_abs(f) == doctest::Approx(7.0).epsilon(kExact));
}

TEST_CASE("bilinear interpolation reproduces linear fields exactly") {
    const PlanarField f =
        make_field(1.0, 16, [](Vec2 x) { return 2.0 * x.x - x.y + 0.5; }, ExecMode::Serial);
    CHECK(f.interpolate({0.13, -0.41}) ==
          doctest::Approx(2.0 * 0.13 + 0.41 + 0.5).epsilon(kExact));
    CHECK_THROWS_AS(f.interpolate({1.0, 0.0}), config_error);
    CHECK(f.in_interpolation_range({0.9, 0.9}));
    CHECK_FALSE(f.in_interpolation_range({0.99, 0.0}));
}

TEST_CASE("angular average of a radial function is the function") {
    const PointFn u = [](Vec2 x) {
        const double r = std::sqrt(x.x * x.x + x.y * x.y);
        return std::exp(-r) + r * r;
    };
    const std::vector<double> radii = {0.5, 1.0, 2.0};
    const RadialProfile avg = angular_average(u, radii, 32);
    for (std::size_t i = 0; i < radii.size(); ++i) {
        const double r = radii[i];
        CHECK(avg.values[i] == doctest::Approx(std::exp(-r) + r * r).epsilon(kExact));
    }
    CHECK(deviation_bound(u, radii, 32) == doctest::Approx(0.0).epsilon(kExact));
}

TEST_CASE("angular average integrates one harmonic to zero") {
    // cos(k theta) averages to zero on the uniform angle grid for k < n
    const PointFn u = [](Vec2 x) {
        const double th = std::atan2(x.y, x.x);
        return std::cos(3.0 * th);
    };
    const RadialProfile avg = angular_average(u, {1.0}, 64);
    CHECK(std::abs(avg.values[0]) < kExact);
    CHECK(deviation_bound(u, {1.0}, 64) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("log grid covers the range with positive trapezoid weights") {
    const RadialProfile g = log_radial_grid(1e-2, 1e2, 2000);
    CHECK(g.radii.front() == doctest::Approx(1e-2).epsilon(kExact));
    CHECK(g.radii.back() == doctest::Approx(1e2).epsilon(kExact));
    for (std::size_t i = 1; i < g.size(); ++i)
        CHECK(g.radii[i] > g.radii[i - 1]);
    // integral of 1/ (pi r^2) * indicator... simpler: area of the annulus
    const RadialProfile one = sample_profile(g, [](double) { return 1.0; });
    const double area = 3.14159265358979323846 * (1e4 - 1e-4);
    CHECK(one.integral() == doctest::Approx(area).epsilon(1e-4));
}

TEST_CASE("radial interpolation clamps at both ends") {
    RadialProfile p = log_radial_grid(1.0, 10.0, 50);
    p = sample_profile(p, [](double r) { return r; });
    CHECK(p.interpolate(0.1) == doctest::Approx(1.0).epsilon(kExact));
    CHECK(p.interpolate(100.0) == doctest::Approx(10.0).epsilon(kExact));
    // piecewise-linear in ln r: second-order error on a smooth profile
    CHECK(p.interpolate(3.0) == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("log_spaced endpoints and monotonicity") {
    const std::vector<double> v = log_spaced(0.1, 100.0, 7);
    CHECK(v.size() == 7);
    CHECK(v.front() == doctest::Approx(0.1).epsilon(kExact));
    CHECK(v.back() == doctest::Approx(100.0).epsilon(kExact));
    for (std::size_t i = 1; i < v.size(); ++i)
        CHECK(v[i] > v[i - 1]);
}

TEST_CASE("field_evaluator round trips through interpolation") {
    const PlanarField f =
        make_field(1.0, 32, [](Vec2 x) { return x.x * x.y; }, ExecMode::Serial);
    const PointFn g = field_evaluator(f);
    CHECK(g({0.25, 0.5}) == doctest::Approx(0.125).epsilon(1e-12));
}
