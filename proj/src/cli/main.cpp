#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "logsurf/commands.hpp"
#include "logsurf/errors.hpp"

namespace {

using logsurf::Options;

// Flags are collected as (namespaced key, value) pairs and merged over the
// config file after parsing, so the precedence rule is explicit: flags win,
// and every override of a file value is logged.
struct FlagBuffer {
    std::vector<std::pair<std::string, std::string>> entries;
};

void add_keyed(CLI::App* cmd, FlagBuffer& buf, const std::string& flag,
               const std::string& key, const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag,
        [&buf, key](const std::string& v) { buf.entries.emplace_back(key, v); },
        desc);
}

void add_common(CLI::App* cmd, FlagBuffer& buf, std::string& config_path) {
    // the grid-spacing flag is spelled --h, so help keeps only its long form
    cmd->set_help_flag("--help", "print help and exit");
    cmd->add_option("--config", config_path, "flat key = value configuration file");
    add_keyed(cmd, buf, "--output-dir", "output.dir",
              "output directory (default: LOGSURF_OUTPUT_DIR or .)");
    add_keyed(cmd, buf, "--prefix", "output.prefix", "output file name prefix");
    add_keyed(cmd, buf, "--mode", "run.mode", "serial or parallel (default parallel)");
}

void add_family(CLI::App* cmd, FlagBuffer& buf) {
    add_keyed(cmd, buf, "--family", "family.name", "flat, chakie, stuart, or special");
    add_keyed(cmd, buf, "--n", "family.n", "chakie winding number");
    add_keyed(cmd, buf, "--y", "family.y", "family center, two comma-separated numbers");
    add_keyed(cmd, buf, "--zeta", "family.zeta", "chakie/stuart shape parameter");
    add_keyed(cmd, buf, "--K0", "family.K0", "stuart constant curvature");
    add_keyed(cmd, buf, "--phi", "family.phi", "stuart frame angle");
    add_keyed(cmd, buf, "--gamma", "family.gamma", "special-family exponent");
    add_keyed(cmd, buf, "--u0", "family.u0", "flat-family constant");
}

void add_curvature(CLI::App* cmd, FlagBuffer& buf) {
    add_keyed(cmd, buf, "--curvature", "curvature.kind",
              "family, disk, bump, exp, or flat (default family when --family given)");
    add_keyed(cmd, buf, "--radius", "curvature.radius", "disk/bump support radius");
    add_keyed(cmd, buf, "--rate", "curvature.rate", "exp-decay rate");
    add_keyed(cmd, buf, "--sign", "curvature.sign", "exp-decay curvature sign, +1 or -1");
}

void add_harmonic(CLI::App* cmd, FlagBuffer& buf) {
    add_keyed(cmd, buf, "--H-a0", "harmonic.a0", "harmonic part: constant term");
    add_keyed(cmd, buf, "--H-re", "harmonic.re",
              "harmonic part: comma list, m-th entry multiplies Re z^m");
    add_keyed(cmd, buf, "--H-im", "harmonic.im",
              "harmonic part: comma list, m-th entry multiplies Im z^m");
}

Options merge(const std::string& config_path, const FlagBuffer& buf) {
    Options opt;
    if (!config_path.empty())
        opt = logsurf::parse_config_file(config_path);
    for (const auto& [key, value] : buf.entries) {
        const auto it = opt.find(key);
        if (it != opt.end() && it->second != value)
            std::cerr << "note: flag value '" << value << "' overrides " << key
                      << " = '" << it->second << "' from " << config_path << "\n";
        opt[key] = value;
    }
    return opt;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"conformally flat surfaces with prescribed Gauss curvature: "
                 "closed forms, mean-field solver, log-gas sampler, verification"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help and exit");

    FlagBuffer buf;
    std::string config_path;

    CLI::App* closed = app.add_subcommand(
        "closed-form", "evaluate a closed-form surface on a grid");
    add_common(closed, buf, config_path);
    add_family(closed, buf);
    add_keyed(closed, buf, "--window", "grid.window", "grid halfwidth (default 2)");
    add_keyed(closed, buf, "--h", "grid.h", "grid spacing (default 0.01)");

    CLI::App* solve = app.add_subcommand(
        "solve", "minimize the mean-field free energy and reconstruct the surface");
    add_common(solve, buf, config_path);
    add_family(solve, buf);
    add_curvature(solve, buf);
    add_harmonic(solve, buf);
    add_keyed(solve, buf, "--beta", "solver.beta", "inverse temperature, must lie in (beta*, 4)");
    add_keyed(solve, buf, "--kappa", "solver.kappa", "integral curvature target, kappa = beta pi");
    add_keyed(solve, buf, "--geometry", "solver.geometry", "radial or planar (default: inferred)");
    add_keyed(solve, buf, "--r-min", "solver.r_min", "radial grid inner radius");
    add_keyed(solve, buf, "--r-max", "solver.r_max", "radial grid outer radius");
    add_keyed(solve, buf, "--n-radial", "solver.n_radial", "radial grid points");
    add_keyed(solve, buf, "--halfwidth", "solver.halfwidth", "planar grid halfwidth");
    add_keyed(solve, buf, "--n-cells", "solver.n_cells", "planar grid cells per axis");
    add_keyed(solve, buf, "--tol", "solver.tolerance", "fixed-point sup-norm tolerance");
    add_keyed(solve, buf, "--max-iter", "solver.max_iterations", "iteration budget");
    add_keyed(solve, buf, "--init", "solver.init", "apriori, uniform, or gaussian");
    add_keyed(solve, buf, "--init-radius", "solver.init_radius", "uniform-disk start radius");
    add_keyed(solve, buf, "--init-sigma", "solver.init_sigma", "gaussian start width");
    add_keyed(solve, buf, "--delta0", "solver.delta0", "initial damping factor");
    add_keyed(solve, buf, "--multi-start", "solver.multi_start",
              "run this many distinct initializations, keep the lowest free energy");

    CLI::App* sample = app.add_subcommand(
        "sample", "sample the N-particle log-gas ensemble");
    add_common(sample, buf, config_path);
    add_family(sample, buf);
    add_curvature(sample, buf);
    add_harmonic(sample, buf);
    add_keyed(sample, buf, "--beta", "mc.beta", "inverse temperature (default 0)");
    add_keyed(sample, buf, "--kappa", "mc.kappa", "integral curvature target, kappa = beta pi");
    add_keyed(sample, buf, "--N", "mc.n_particles", "particle count, at least 2");
    add_keyed(sample, buf, "--sweeps", "mc.sweeps", "post-burn-in sweeps across all chains");
    add_keyed(sample, buf, "--seed", "mc.seed", "RNG seed (fixed seed gives identical bytes)");
    add_keyed(sample, buf, "--chains", "mc.n_chains", "independent chains");
    add_keyed(sample, buf, "--burn", "mc.burn_fraction", "warm-up share per chain");
    add_keyed(sample, buf, "--sigma0", "mc.sigma0", "initial proposal width");
    add_keyed(sample, buf, "--window", "mc.r_window", "confinement disk radius");
    add_keyed(sample, buf, "--hist-window", "mc.r_hist", "histogram extent (default window)");
    add_keyed(sample, buf, "--bins", "mc.n_bins", "histogram bins");
    add_keyed(sample, buf, "--sample-cap", "mc.sample_cap", "max recorded particle rows");
    add_keyed(sample, buf, "--compare", "sample.compare",
              "radial CSV density; adds L1 distance to the summary");

    CLI::App* verify = app.add_subcommand(
        "verify", "run verification suites and print a pass/fail table");
    add_common(verify, buf, config_path);
    add_keyed(verify, buf, "--suite", "verify.suite",
              "pde-residual, curvature-integrals, solver-oracle, uniqueness, "
              "symmetry, kappa-bounds, barrier, mc-consistency, or all");
    add_keyed(verify, buf, "--criterion", "verify.criterion",
              "run a single acceptance criterion, 1..10");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // bad flags are an invalid configuration; --help still exits 0
        const int code = app.exit(e);
        return code == 0 ? 0 : logsurf::kExitConfig;
    }

    try {
        const Options opt = merge(config_path, buf);
        if (closed->parsed())
            return logsurf::run_closed_form(opt);
        if (solve->parsed())
            return logsurf::run_solve(opt);
        if (sample->parsed())
            return logsurf::run_sample(opt);
        return logsurf::run_verify(opt);
    } catch (const logsurf::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return logsurf::kExitConfig;
    } catch (const logsurf::convergence_error& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return logsurf::kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
