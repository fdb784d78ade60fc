#include "logsurf/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <vector>

#include "logsurf/closed_forms.hpp"
#include "logsurf/diagnostics.hpp"
#include "logsurf/errors.hpp"
#include "logsurf/io.hpp"
#include "logsurf/loggas.hpp"
#include "logsurf/meanfield.hpp"
#include "logsurf/verify.hpp"

namespace logsurf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// kappa and beta may both appear; they must agree through kappa = beta pi
// to this relative tolerance or the configuration is rejected.
constexpr double kKappaBetaAgreement = 1e-9;

// Refined maxima closer than this fraction of a cell are one peak.
constexpr double kPeakMergeCells = 0.5;

// Global maxima are the refined peaks within this relative slack of the best.
constexpr double kPeakValueTie = 1e-9;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

const std::string* find(const Options& opt, const std::string& key) {
    const auto it = opt.find(key);
    return it == opt.end() ? nullptr : &it->second;
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw config_error(key + " is not a number: '" + text + "'");
    return v;
}

long long parse_ll(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    char* end = nullptr;
    const long long v = std::strtoll(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw config_error(key + " is not an integer: '" + text + "'");
    return v;
}

double get_num(const Options& opt, const std::string& key, double fallback) {
    const std::string* s = find(opt, key);
    return s ? parse_double(key, *s) : fallback;
}

int get_int(const Options& opt, const std::string& key, int fallback) {
    const std::string* s = find(opt, key);
    if (!s)
        return fallback;
    const long long v = parse_ll(key, *s);
    return static_cast<int>(v);
}

long long get_ll(const Options& opt, const std::string& key, long long fallback) {
    const std::string* s = find(opt, key);
    return s ? parse_ll(key, *s) : fallback;
}

std::string get_str(const Options& opt, const std::string& key,
                    const std::string& fallback) {
    const std::string* s = find(opt, key);
    return s ? trim(*s) : fallback;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(parse_double(key, item));
    return out;
}

Vec2 get_vec2(const Options& opt, const std::string& key, Vec2 fallback) {
    const std::string* s = find(opt, key);
    if (!s)
        return fallback;
    const std::vector<double> v = parse_list(key, *s);
    if (v.size() != 2)
        throw config_error(key + " needs two comma-separated numbers, got '" + *s +
                           "'");
    return {v[0], v[1]};
}

// Every key any subcommand understands. A merged configuration may carry
// keys for other subcommands (one file driving solve and sample), but a key
// outside this list is a typo and is rejected.
const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "run.mode", "output.dir", "output.prefix",
        "family.name", "family.n", "family.y", "family.zeta", "family.K0",
        "family.phi", "family.gamma", "family.u0",
        "grid.window", "grid.h",
        "curvature.kind", "curvature.radius", "curvature.rate", "curvature.sign",
        "harmonic.a0", "harmonic.re", "harmonic.im",
        "solver.beta", "solver.kappa", "solver.geometry", "solver.r_min",
        "solver.r_max", "solver.n_radial", "solver.halfwidth", "solver.n_cells",
        "solver.tolerance", "solver.max_iterations", "solver.init",
        "solver.init_radius", "solver.init_sigma", "solver.delta0",
        "solver.multi_start",
        "mc.beta", "mc.kappa", "mc.n_particles", "mc.sweeps", "mc.seed",
        "mc.n_chains", "mc.burn_fraction", "mc.sigma0", "mc.r_window",
        "mc.r_hist", "mc.n_bins", "mc.sample_cap", "sample.compare",
        "verify.suite", "verify.criterion",
    };
    return keys;
}

void reject_unknown_keys(const Options& opt) {
    for (const auto& [key, value] : opt)
        if (!known_keys().count(key))
            throw config_error("unknown configuration key: " + key);
}

ExecMode exec_mode(const Options& opt) {
    const std::string m = get_str(opt, "run.mode", "parallel");
    if (m == "parallel")
        return ExecMode::Parallel;
    if (m == "serial")
        return ExecMode::Serial;
    throw config_error("run.mode must be serial or parallel, got '" + m + "'");
}

std::string output_path(const Options& opt, const std::string& default_prefix,
                        const std::string& suffix) {
    std::string dir = get_str(opt, "output.dir", "");
    if (dir.empty()) {
        const char* env = std::getenv("LOGSURF_OUTPUT_DIR");
        dir = (env && *env) ? env : ".";
    }
    const std::string prefix = get_str(opt, "output.prefix", default_prefix);
    return (std::filesystem::path(dir) / (prefix + suffix)).string();
}

FamilyInstance family_from(const Options& opt) {
    const std::string name = get_str(opt, "family.name", "");
    if (name.empty())
        throw config_error("missing family.name (flat, chakie, stuart, special)");
    FamilyInstance inst;
    if (name == "flat") {
        inst = FamilyInstance::flat(get_num(opt, "family.u0", 0.0));
    } else if (name == "chakie") {
        inst = FamilyInstance::chakie(get_int(opt, "family.n", 1),
                                      get_vec2(opt, "family.y", {1.0, 0.0}),
                                      get_num(opt, "family.zeta", 0.0));
    } else if (name == "stuart") {
        inst = FamilyInstance::stuart(get_num(opt, "family.K0", 1.0),
                                      get_vec2(opt, "family.y", {0.0, 0.0}),
                                      get_num(opt, "family.zeta", 0.0),
                                      get_num(opt, "family.phi", 0.0));
    } else if (name == "special") {
        inst = FamilyInstance::special(get_num(opt, "family.gamma", 1.0),
                                       get_vec2(opt, "family.y", {1.0, 0.0}));
    } else {
        throw config_error("unknown family.name '" + name +
                           "' (flat, chakie, stuart, special)");
    }
    validate(inst);
    return inst;
}

CurvatureSpec curvature_from(const Options& opt) {
    std::string kind = get_str(opt, "curvature.kind", "");
    if (kind.empty())
        kind = find(opt, "family.name") ? "family" : "";
    if (kind.empty())
        throw config_error(
            "missing curvature.kind (family, disk, bump, exp, flat)");
    if (kind == "family")
        return curvature_of_family(family_from(opt));
    if (kind == "disk")
        return curvature_disk_indicator(get_num(opt, "curvature.radius", 1.0));
    if (kind == "bump")
        return curvature_smooth_bump(get_num(opt, "curvature.radius", 1.0));
    if (kind == "exp")
        return curvature_exp_decay(get_num(opt, "curvature.rate", 1.0),
                                   get_int(opt, "curvature.sign", -1));
    if (kind == "flat")
        return curvature_flat();
    throw config_error("unknown curvature.kind '" + kind +
                       "' (family, disk, bump, exp, flat)");
}

HarmonicSpec harmonic_from(const Options& opt) {
    HarmonicSpec H;
    H.a0 = get_num(opt, "harmonic.a0", 0.0);
    if (const std::string* s = find(opt, "harmonic.re"))
        H.a = parse_list("harmonic.re", *s);
    if (const std::string* s = find(opt, "harmonic.im"))
        H.b = parse_list("harmonic.im", *s);
    return H;
}

// kappa-first entry: --kappa converts through kappa = beta pi. Both given
// must agree; neither given falls back (negative fallback_ok signals the
// caller requires one of them).
double resolve_beta(const Options& opt, const std::string& ns, bool required,
                    double fallback) {
    const std::string* sb = find(opt, ns + ".beta");
    const std::string* sk = find(opt, ns + ".kappa");
    if (sb && sk) {
        const double beta = parse_double(ns + ".beta", *sb);
        const double kappa = parse_double(ns + ".kappa", *sk);
        if (std::abs(kappa - beta * kPi) >
            kKappaBetaAgreement * std::max(1.0, std::abs(kappa)))
            throw config_error(ns + ".beta and " + ns +
                               ".kappa conflict: kappa = beta * pi requires " +
                               std::to_string(beta * kPi) + ", got " +
                               std::to_string(kappa));
        return beta;
    }
    if (sk) {
        const double kappa = parse_double(ns + ".kappa", *sk);
        std::cerr << "note: " << ns << ".kappa = " << kappa
                  << " converts to beta = kappa / pi = " << kappa / kPi << "\n";
        return kappa / kPi;
    }
    if (sb)
        return parse_double(ns + ".beta", *sb);
    if (required)
        throw config_error("missing " + ns + ".beta (or " + ns + ".kappa)");
    return fallback;
}

ordered_json family_json(const FamilyInstance& inst) {
    ordered_json j;
    switch (inst.id) {
    case FamilyId::Flat:
        j["family"] = "flat";
        j["u0"] = inst.u0;
        break;
    case FamilyId::Chakie:
        j["family"] = "chakie";
        j["n"] = inst.n;
        j["y"] = {inst.y.x, inst.y.y};
        j["zeta"] = inst.zeta;
        break;
    case FamilyId::Stuart:
        j["family"] = "stuart";
        j["K0"] = inst.K0;
        j["y"] = {inst.y.x, inst.y.y};
        j["zeta"] = inst.zeta;
        j["phi"] = inst.phi;
        break;
    case FamilyId::Special:
        j["family"] = "special";
        j["gamma"] = inst.gamma;
        j["y"] = {inst.y.x, inst.y.y};
        break;
    }
    return j;
}

} // namespace

Options parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path);
    Options opt;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": empty key");
        opt[key] = value;
    }
    return opt;
}

int run_closed_form(const Options& opt) {
    reject_unknown_keys(opt);
    const ExecMode mode = exec_mode(opt);
    const FamilyInstance inst = family_from(opt);
    const double window = get_num(opt, "grid.window", 2.0);
    const double h = get_num(opt, "grid.h", 0.01);
    if (!(window > 0.0) || !(h > 0.0))
        throw config_error("grid.window and grid.h must be positive");
    const int n = static_cast<int>(std::lround(2.0 * window / h));
    if (n < 4)
        throw config_error("grid.window / grid.h gives fewer than 4 cells");

    const PointFn factor = [inst](Vec2 x) {
        return std::exp(2.0 * family_u(inst, x));
    };
    const PlanarField field = make_field(window, n, factor, mode);

    // peaks on the grid, refined off-grid, deduplicated, global ties kept
    std::vector<Vec2> refined;
    std::vector<double> values;
    for (const Vec2& p : local_maxima(field)) {
        const auto [c, v] = refine_peak(factor, p, 5.0 * h);
        bool merged = false;
        for (const Vec2& q : refined)
            if (std::abs(q.x - c.x) < kPeakMergeCells * h &&
                std::abs(q.y - c.y) < kPeakMergeCells * h)
                merged = true;
        if (!merged) {
            refined.push_back(c);
            values.push_back(v);
        }
    }
    double vmax = 0.0;
    for (double v : values)
        vmax = std::max(vmax, v);
    std::vector<std::size_t> order(refined.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return refined[a].x != refined[b].x ? refined[a].x < refined[b].x
                                            : refined[a].y < refined[b].y;
    });
    ordered_json locations = ordered_json::array();
    for (std::size_t i : order)
        if (values[i] >= vmax * (1.0 - kPeakValueTie))
            locations.push_back({refined[i].x, refined[i].y});

    ordered_json summary = family_json(inst);
    summary["window"] = window;
    summary["h"] = h;
    summary["n_cells"] = n;
    summary["max_value"] = vmax;
    summary["max_locations"] = locations;
    if (family_curvature_integrable(inst)) {
        summary["curvature_finite"] = true;
        summary["total_curvature"] = family_total_curvature(inst);
    } else {
        summary["curvature_finite"] = false;
        summary["total_curvature"] = nullptr;
    }

    write_text_atomic(output_path(opt, "closed_form", "_grid.csv"),
                      planar_csv(field));
    write_text_atomic(output_path(opt, "closed_form", "_summary.json"),
                      dump_json(summary));
    return kExitOk;
}

namespace {

std::string trace_csv(const IterationTrace& trace) {
    std::string out = "iteration,free_energy,residual,delta\n";
    const std::size_t n = std::min(
        {trace.free_energy.size(), trace.residual.size(), trace.delta.size()});
    for (std::size_t i = 0; i < n; ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(trace.free_energy[i]);
        out += ',';
        out += format_double(trace.residual[i]);
        out += ',';
        out += format_double(trace.delta[i]);
        out += '\n';
    }
    return out;
}

InitKind init_from(const std::string& name) {
    if (name == "apriori")
        return InitKind::Apriori;
    if (name == "uniform")
        return InitKind::UniformDisk;
    if (name == "gaussian")
        return InitKind::Gaussian;
    throw config_error("solver.init must be apriori, uniform, or gaussian, got '" +
                       name + "'");
}

const char* init_name(InitKind k) {
    switch (k) {
    case InitKind::Apriori: return "apriori";
    case InitKind::UniformDisk: return "uniform";
    case InitKind::Gaussian: return "gaussian";
    case InitKind::User: break;
    }
    return "user";
}

} // namespace

int run_solve(const Options& opt) {
    reject_unknown_keys(opt);
    const ExecMode mode = exec_mode(opt);
    const CurvatureSpec curv = curvature_from(opt);
    const HarmonicSpec H = harmonic_from(opt);

    SolverConfig cfg;
    cfg.mode = mode;
    cfg.domain.r_min = get_num(opt, "solver.r_min", cfg.domain.r_min);
    cfg.domain.r_max = get_num(opt, "solver.r_max", cfg.domain.r_max);
    cfg.domain.n_radial = get_int(opt, "solver.n_radial", cfg.domain.n_radial);
    cfg.domain.halfwidth = get_num(opt, "solver.halfwidth", cfg.domain.halfwidth);
    cfg.domain.n_cells = get_int(opt, "solver.n_cells", cfg.domain.n_cells);

    // K == 0 needs no solve: the surface is U = H exactly.
    if (curv.sign == 0) {
        const Reconstruction rec = reconstruct_flat(H);
        const PlanarField U =
            make_field(cfg.domain.halfwidth, cfg.domain.n_cells, rec.U, mode);
        ordered_json summary;
        summary["flat"] = true;
        summary["beta"] = 0.0;
        summary["kappa"] = 0.0;
        summary["U0"] = rec.U0;
        write_text_atomic(output_path(opt, "solve", "_U.csv"), planar_csv(U));
        write_text_atomic(output_path(opt, "solve", "_summary.json"),
                          dump_json(summary));
        return kExitOk;
    }

    cfg.beta = resolve_beta(opt, "solver", true, 0.0);
    cfg.tolerance = get_num(opt, "solver.tolerance", cfg.tolerance);
    cfg.max_iterations = get_int(opt, "solver.max_iterations", cfg.max_iterations);
    cfg.delta0 = get_num(opt, "solver.delta0", cfg.delta0);
    cfg.init = init_from(get_str(opt, "solver.init", "apriori"));
    cfg.init_radius = get_num(opt, "solver.init_radius", cfg.init_radius);
    cfg.init_sigma = get_num(opt, "solver.init_sigma", cfg.init_sigma);

    const bool radial_problem = curv.radial && H.is_constant();
    const std::string geom = get_str(opt, "solver.geometry",
                                     radial_problem ? "radial" : "planar");
    if (geom == "radial") {
        if (!radial_problem)
            throw config_error("solver.geometry = radial needs a radial curvature "
                               "and a constant harmonic part");
        cfg.geometry = Geometry::Radial;
    } else if (geom == "planar") {
        cfg.geometry = Geometry::Planar;
    } else {
        throw config_error("solver.geometry must be radial or planar, got '" +
                           geom + "'");
    }

    const int starts = get_int(opt, "solver.multi_start", 1);
    if (starts < 1)
        throw config_error("solver.multi_start must be at least 1");

    std::vector<MinimizerResult> runs;
    ordered_json start_log = ordered_json::array();
    for (int j = 0; j < starts; ++j) {
        SolverConfig run_cfg = cfg;
        if (j > 0) {
            // deterministic alternation with growing spread
            const double scale = 1.0 + 0.7 * j;
            if (j % 2 == 1) {
                run_cfg.init = InitKind::UniformDisk;
                run_cfg.init_radius = cfg.init_radius * scale;
            } else {
                run_cfg.init = InitKind::Gaussian;
                run_cfg.init_sigma = cfg.init_sigma * scale;
            }
        }
        runs.push_back(solve_minimizer(curv, H, run_cfg));
        const MinimizerResult& r = runs.back();
        start_log.push_back({{"init", init_name(run_cfg.init)},
                             {"converged", r.converged},
                             {"iterations", r.iterations},
                             {"residual", r.residual},
                             {"F", r.F}});
    }

    int best = -1;
    for (int j = 0; j < starts; ++j)
        if (runs[j].converged && (best < 0 || runs[j].F < runs[best].F))
            best = j;
    if (best < 0) {
        write_text_atomic(output_path(opt, "solve", "_trace.csv"),
                          trace_csv(runs.front().trace));
        throw convergence_error(
            "no start converged within solver.max_iterations; iteration trace "
            "written alongside the outputs");
    }
    const MinimizerResult& result = runs[best];
    const Reconstruction rec = reconstruct_u(result, curv, H, mode);

    std::string rho_csv, u_csv;
    if (result.geometry == Geometry::Radial) {
        rho_csv = radial_csv(result.rho_radial);
        std::vector<double> uvals(result.rho_radial.size());
        for (std::size_t i = 0; i < uvals.size(); ++i)
            uvals[i] = rec.U_radial(result.rho_radial.radii[i]);
        u_csv = radial_csv(result.rho_radial.radii, uvals,
                           result.rho_radial.weights);
    } else {
        rho_csv = planar_csv(result.rho_planar);
        const PlanarField U =
            make_field(cfg.domain.halfwidth, cfg.domain.n_cells, rec.U, mode);
        u_csv = planar_csv(U);
    }

    ordered_json summary = meanfield_summary(result, rec.U0);
    summary["pde_residual_rel"] = rec.pde_residual_rel;
    summary["geometry"] = result.geometry == Geometry::Radial ? "radial" : "planar";
    if (starts > 1) {
        summary["starts"] = start_log;
        summary["selected_start"] = best;
    }

    write_text_atomic(output_path(opt, "solve", "_rho.csv"), rho_csv);
    write_text_atomic(output_path(opt, "solve", "_U.csv"), u_csv);
    write_text_atomic(output_path(opt, "solve", "_summary.json"),
                      dump_json(summary));
    return kExitOk;
}

namespace {

// L1 distance between the sampler's radial histogram and a reference density
// profile, compared through per-bin masses; the reference is averaged at
// five points per bin. Only the histogram window is compared; mass beyond it
// is reported separately as overflow_share.
double marginal_l1(const RadialProfile& marginal, const RadialProfile& ref) {
    if (marginal.size() < 2)
        throw config_error("marginal histogram has fewer than 2 bins");
    const double bin_w = marginal.radii[1] - marginal.radii[0];
    double l1 = 0.0;
    for (std::size_t k = 0; k < marginal.size(); ++k) {
        const double lo = marginal.radii[k] - 0.5 * bin_w;
        double ref_bin = 0.0;
        for (int j = 0; j < 5; ++j) {
            const double r = lo + (j + 0.5) / 5.0 * bin_w;
            ref_bin += ref.interpolate(r) * 2.0 * kPi * r * bin_w / 5.0;
        }
        l1 += std::abs(marginal.values[k] * marginal.weights[k] - ref_bin);
    }
    return l1;
}

} // namespace

int run_sample(const Options& opt) {
    reject_unknown_keys(opt);
    const ExecMode mode = exec_mode(opt);
    const CurvatureSpec curv = curvature_from(opt);
    const HarmonicSpec H = harmonic_from(opt);
    const PointFn tau = [&curv, &H](Vec2 x) {
        return curv.upsilon(x) * std::exp(2.0 * H.eval(x));
    };

    LogGasConfig cfg;
    cfg.mode = mode;
    cfg.beta = resolve_beta(opt, "mc", false, 0.0);
    if (!(cfg.beta < 4.0))
        throw config_error("beta = " + std::to_string(cfg.beta) +
                           " is outside the admissible range (beta*, 4)");
    cfg.n_particles = get_int(opt, "mc.n_particles", cfg.n_particles);
    cfg.sweeps = get_ll(opt, "mc.sweeps", cfg.sweeps);
    cfg.seed = static_cast<std::uint64_t>(get_ll(opt, "mc.seed", 1));
    cfg.n_chains = get_int(opt, "mc.n_chains", cfg.n_chains);
    cfg.burn_fraction = get_num(opt, "mc.burn_fraction", cfg.burn_fraction);
    cfg.sigma0 = get_num(opt, "mc.sigma0", cfg.sigma0);
    cfg.r_window = get_num(opt, "mc.r_window", cfg.r_window);
    cfg.r_hist = get_num(opt, "mc.r_hist", cfg.r_hist);
    cfg.n_bins = get_int(opt, "mc.n_bins", cfg.n_bins);
    cfg.sample_cap = get_ll(opt, "mc.sample_cap", cfg.sample_cap);

    const LogGasResult result = sample_log_gas(tau, cfg);

    ordered_json summary = loggas_summary(result);
    if (const std::string* cmp = find(opt, "sample.compare")) {
        const RadialProfile ref = read_radial_csv(read_text(*cmp));
        summary["compare_path"] = *cmp;
        summary["compare_l1"] = marginal_l1(result.marginal, ref);
    }

    write_text_atomic(output_path(opt, "sample", "_marginal.csv"),
                      radial_csv(result.marginal));
    write_text_atomic(output_path(opt, "sample", "_samples.csv"),
                      samples_csv(result));
    write_text_atomic(output_path(opt, "sample", "_summary.json"),
                      dump_json(summary));
    return kExitOk;
}

int run_verify(const Options& opt) {
    reject_unknown_keys(opt);
    const ExecMode mode = exec_mode(opt);
    std::vector<CheckResult> checks;
    if (const std::string* c = find(opt, "verify.criterion")) {
        checks.push_back(
            run_criterion(static_cast<int>(parse_ll("verify.criterion", *c)), mode));
    } else {
        const SuiteResult suite = run_suite(get_str(opt, "verify.suite", "all"), mode);
        checks = suite.checks;
    }
    int failed = 0;
    for (const CheckResult& c : checks) {
        std::cout << "criterion " << (c.criterion < 10 ? " " : "") << c.criterion
                  << " [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name << "\n"
                  << "    " << c.detail << "\n";
        if (!c.pass)
            ++failed;
    }
    if (failed == 0)
        std::cout << "verify: " << checks.size() << "/" << checks.size()
                  << " criteria passed\n";
    else
        std::cout << "verify: " << failed << " of " << checks.size()
                  << " criteria FAILED\n";
    return failed == 0 ? kExitOk : kExitVerification;
}

} // namespace logsurf
