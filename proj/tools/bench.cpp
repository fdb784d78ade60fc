// Serial vs OpenMP timings for the hot kernels: planar field fill, five-point
// Laplacian, planar potential assembly inside a solver step, and Monte Carlo
// chains. Prints one line per kernel with both times and the speedup.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "logsurf/closed_forms.hpp"
#include "logsurf/grid.hpp"
#include "logsurf/loggas.hpp"
#include "logsurf/meanfield.hpp"

using namespace logsurf;

namespace {

double seconds(const std::function<void()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %.2fx\n", name,
                serial, parallel, parallel > 0.0 ? serial / parallel : 0.0);
}

} // namespace

int main() {
    const FamilyInstance inst = FamilyInstance::chakie(2, {1.0, 0.0}, 1.0);
    const PointFn f = [inst](Vec2 x) { return std::exp(2.0 * family_u(inst, x)); };

    // grid fill: 1200^2 closed-form evaluations
    PlanarField field_s, field_p;
    const double t_fill_s =
        seconds([&] { field_s = make_field(3.0, 1200, f, ExecMode::Serial); });
    const double t_fill_p =
        seconds([&] { field_p = make_field(3.0, 1200, f, ExecMode::Parallel); });
    report("field fill 1200^2", t_fill_s, t_fill_p);

    // five-point Laplacian on the same grid
    PlanarField lap;
    const double t_lap_s = seconds([&] { lap = laplacian(field_s, ExecMode::Serial); });
    const double t_lap_p = seconds([&] { lap = laplacian(field_s, ExecMode::Parallel); });
    report("laplacian 1200^2", t_lap_s, t_lap_p);

    // planar solve: dominated by the logarithmic potential assembly
    const CurvatureSpec curv = curvature_smooth_bump(1.0);
    SolverConfig scfg;
    scfg.beta = 2.0;
    scfg.geometry = Geometry::Planar;
    scfg.domain.halfwidth = 1.5;
    scfg.domain.n_cells = 96;
    scfg.max_iterations = 40;
    scfg.tolerance = 1e-8;
    scfg.mode = ExecMode::Serial;
    const double t_solve_s = seconds([&] { solve_minimizer(curv, HarmonicSpec{}, scfg); });
    scfg.mode = ExecMode::Parallel;
    const double t_solve_p = seconds([&] { solve_minimizer(curv, HarmonicSpec{}, scfg); });
    report("planar solve 96^2", t_solve_s, t_solve_p);

    // Monte Carlo chains: 2e5 sweeps at N = 100
    const CurvatureSpec mc_curv =
        curvature_of_family(FamilyInstance::special(0.5, {1.0, 0.0}));
    const PointFn tau = [&mc_curv](Vec2 x) { return mc_curv.upsilon(x); };
    LogGasConfig mcfg;
    mcfg.n_particles = 100;
    mcfg.beta = 2.0;
    mcfg.sweeps = 200000;
    mcfg.seed = 1;
    mcfg.mode = ExecMode::Serial;
    const double t_mc_s = seconds([&] { sample_log_gas(tau, mcfg); });
    mcfg.mode = ExecMode::Parallel;
    const double t_mc_p = seconds([&] { sample_log_gas(tau, mcfg); });
    report("log-gas 2e5 sweeps N=100", t_mc_s, t_mc_p);

    return 0;
}
