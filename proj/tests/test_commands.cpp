#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "logsurf/commands.hpp"
#include "logsurf/errors.hpp"
#include "logsurf/io.hpp"

using namespace logsurf;
namespace fs = std::filesystem;

namespace {

// Each test writes into its own directory under the system temp dir so the
// byte-identity checks cannot collide across cases.
fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "logsurf_cmd_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) { return read_text(p.string()); }

Options base_closed_form(const fs::path& dir) {
    Options opt;
    opt["family.name"] = "chakie";
    opt["family.n"] = "2";
    opt["family.zeta"] = "1";
    opt["family.y"] = "1,0";
    opt["grid.window"] = "1.5";
    opt["grid.h"] = "0.05";
    opt["output.dir"] = dir.string();
    opt["run.mode"] = "serial";
    return opt;
}

} // namespace

TEST_CASE("config file parsing handles comments, blanks and errors") {
    const fs::path dir = fresh_dir("parse");
    const fs::path cfg = dir / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "# a comment line\n"
            << "\n"
            << "  family.name = special   # trailing comment\n"
            << "family.gamma=0.6\n"
            << "grid.window =  2\n";
    }
    const Options opt = parse_config_file(cfg.string());
    CHECK(opt.at("family.name") == "special");
    CHECK(opt.at("family.gamma") == "0.6");
    CHECK(opt.at("grid.window") == "2");
    CHECK(opt.size() == 3);

    {
        std::ofstream out(cfg);
        out << "family.name special\n";
    }
    CHECK_THROWS_AS(parse_config_file(cfg.string()), config_error);
    {
        std::ofstream out(cfg);
        out << " = value\n";
    }
    CHECK_THROWS_AS(parse_config_file(cfg.string()), config_error);
    CHECK_THROWS_AS(parse_config_file((dir / "missing.cfg").string()), config_error);
}

TEST_CASE("closed-form run is byte-reproducible and summarizes the twin peaks") {
    const fs::path dir = fresh_dir("closed_form");
    const Options opt = base_closed_form(dir);
    REQUIRE(run_closed_form(opt) == kExitOk);
    const std::string grid1 = slurp(dir / "closed_form_grid.csv");
    const std::string sum1 = slurp(dir / "closed_form_summary.json");

    REQUIRE(run_closed_form(opt) == kExitOk);
    CHECK(slurp(dir / "closed_form_grid.csv") == grid1);
    CHECK(slurp(dir / "closed_form_summary.json") == sum1);

    const auto j = ordered_json::parse(sum1);
    CHECK(j["family"] == "chakie");
    CHECK(j["n_cells"] == 60);
    CHECK(j["curvature_finite"] == true);
    // total curvature of the n = 2 profile is 8 pi
    CHECK(double(j["total_curvature"]) == doctest::Approx(8.0 * 3.14159265358979323846).epsilon(1e-12));
    // conformal factor peaks at cosh(zeta)^2 on both sides of the origin
    REQUIRE(j["max_locations"].size() == 2);
    CHECK(double(j["max_value"]) == doctest::Approx(std::cosh(1.0) * std::cosh(1.0)).epsilon(1e-9));
    const double x0 = j["max_locations"][0][0];
    const double x1 = j["max_locations"][1][0];
    CHECK(x0 == doctest::Approx(-std::sqrt(std::tanh(1.0))).epsilon(1e-6));
    CHECK(x1 == doctest::Approx(std::sqrt(std::tanh(1.0))).epsilon(1e-6));
}

TEST_CASE("flat family closed form has constant factor and zero total curvature") {
    const fs::path dir = fresh_dir("closed_form_flat");
    Options opt;
    opt["family.name"] = "flat";
    opt["family.u0"] = "0.25";
    opt["grid.window"] = "1";
    opt["grid.h"] = "0.25";
    opt["output.dir"] = dir.string();
    opt["run.mode"] = "serial";
    REQUIRE(run_closed_form(opt) == kExitOk);
    const auto j = ordered_json::parse(slurp(dir / "closed_form_summary.json"));
    CHECK(double(j["max_value"]) == doctest::Approx(std::exp(0.5)).epsilon(1e-12));
    CHECK(double(j["total_curvature"]) == 0.0);

    const PlanarField grid = read_planar_csv(slurp(dir / "closed_form_grid.csv"));
    for (double v : grid.values)
        CHECK(v == doctest::Approx(std::exp(0.5)).epsilon(1e-14));
}

TEST_CASE("unknown keys and malformed values are rejected") {
    const fs::path dir = fresh_dir("rejects");
    Options opt = base_closed_form(dir);
    opt["grid.windw"] = "2"; // typo
    CHECK_THROWS_WITH_AS(run_closed_form(opt), doctest::Contains("grid.windw"),
                         config_error);

    Options bad = base_closed_form(dir);
    bad["grid.h"] = "not-a-number";
    CHECK_THROWS_AS(run_closed_form(bad), config_error);

    Options nofam = base_closed_form(dir);
    nofam.erase("family.name");
    CHECK_THROWS_AS(run_closed_form(nofam), config_error);
}

TEST_CASE("kappa-first entry matches beta entry and conflicts are fatal") {
    const fs::path dir1 = fresh_dir("solve_beta");
    Options via_beta;
    via_beta["family.name"] = "special";
    via_beta["family.gamma"] = "0.6";
    via_beta["solver.beta"] = "2.4";
    via_beta["solver.r_max"] = "40";
    via_beta["solver.n_radial"] = "600";
    via_beta["output.dir"] = dir1.string();
    via_beta["run.mode"] = "serial";
    REQUIRE(run_solve(via_beta) == kExitOk);

    const fs::path dir2 = fresh_dir("solve_kappa");
    Options via_kappa = via_beta;
    via_kappa.erase("solver.beta");
    // kappa = 2.4 pi printed to 17 significant digits
    via_kappa["solver.kappa"] = "7.5398223686155035";
    via_kappa["output.dir"] = dir2.string();
    REQUIRE(run_solve(via_kappa) == kExitOk);

    const auto j1 = ordered_json::parse(slurp(dir1 / "solve_summary.json"));
    const auto j2 = ordered_json::parse(slurp(dir2 / "solve_summary.json"));
    CHECK(double(j1["beta"]) == doctest::Approx(double(j2["beta"])).epsilon(1e-12));
    CHECK(double(j1["kappa"]) == doctest::Approx(2.4 * 3.14159265358979323846).epsilon(1e-12));
    CHECK(double(j1["F"]) == doctest::Approx(double(j2["F"])).epsilon(1e-9));
    CHECK(j1["geometry"] == "radial");
    // 600 radial nodes: the second-order residual sits near 1.6e-3
    CHECK(double(j1["pde_residual_rel"]) < 5e-3);

    Options conflict = via_beta;
    conflict["solver.kappa"] = "3.0"; // not 2.4 pi
    CHECK_THROWS_WITH_AS(run_solve(conflict), doctest::Contains("conflict"),
                         config_error);
}

TEST_CASE("solve rejects out-of-range temperatures with the range in the message") {
    const fs::path dir = fresh_dir("solve_range");
    Options opt;
    opt["family.name"] = "special";
    opt["family.gamma"] = "0.6";
    opt["solver.beta"] = "4.5";
    opt["output.dir"] = dir.string();
    opt["run.mode"] = "serial";
    CHECK_THROWS_WITH_AS(run_solve(opt), doctest::Contains("admissible range"),
                         config_error);
}

TEST_CASE("vanishing curvature short-circuits to the harmonic surface") {
    const fs::path dir = fresh_dir("solve_flat");
    Options opt;
    opt["curvature.kind"] = "flat";
    opt["harmonic.a0"] = "0.5";
    opt["harmonic.re"] = "0.1";
    opt["solver.n_cells"] = "16";
    opt["solver.halfwidth"] = "1";
    opt["output.dir"] = dir.string();
    opt["run.mode"] = "serial";
    REQUIRE(run_solve(opt) == kExitOk);
    const auto j = ordered_json::parse(slurp(dir / "solve_summary.json"));
    CHECK(j["flat"] == true);
    CHECK(double(j["kappa"]) == 0.0);
    const PlanarField U = read_planar_csv(slurp(dir / "solve_U.csv"));
    // U = 0.5 + 0.1 x1 exactly
    CHECK(U.at(3, 7) == doctest::Approx(0.5 + 0.1 * U.center(3, 7).x).epsilon(1e-14));
    CHECK(!fs::exists(dir / "solve_rho.csv")); // no density was solved for
}

TEST_CASE("sampling is byte-reproducible and can compare against a reference") {
    const fs::path dir = fresh_dir("sample");

    // quick radial solve to produce a comparison profile
    Options solve;
    solve["family.name"] = "special";
    solve["family.gamma"] = "0.5";
    solve["solver.beta"] = "2";
    solve["solver.r_max"] = "10";
    solve["solver.n_radial"] = "400";
    solve["output.dir"] = dir.string();
    solve["run.mode"] = "serial";
    REQUIRE(run_solve(solve) == kExitOk);

    Options opt;
    opt["family.name"] = "special";
    opt["family.gamma"] = "0.5";
    opt["mc.beta"] = "2";
    opt["mc.n_particles"] = "16";
    opt["mc.sweeps"] = "2000";
    opt["mc.n_chains"] = "2";
    opt["mc.seed"] = "12";
    opt["mc.r_window"] = "10";
    opt["mc.n_bins"] = "24";
    opt["output.dir"] = dir.string();
    opt["run.mode"] = "serial";
    opt["sample.compare"] = (dir / "solve_rho.csv").string();
    REQUIRE(run_sample(opt) == kExitOk);
    const std::string marg1 = slurp(dir / "sample_marginal.csv");
    const std::string samp1 = slurp(dir / "sample_samples.csv");
    const std::string sum1 = slurp(dir / "sample_summary.json");

    REQUIRE(run_sample(opt) == kExitOk);
    CHECK(slurp(dir / "sample_marginal.csv") == marg1);
    CHECK(slurp(dir / "sample_samples.csv") == samp1);
    CHECK(slurp(dir / "sample_summary.json") == sum1);

    const auto j = ordered_json::parse(sum1);
    CHECK(j["N"] == 16);
    CHECK(j["seed"] == 12);
    CHECK(j.contains("compare_l1"));
    CHECK(double(j["compare_l1"]) >= 0.0);
    CHECK(double(j["compare_l1"]) < 2.0);

    // a different seed must change the sample stream
    Options other = opt;
    other["mc.seed"] = "13";
    REQUIRE(run_sample(other) == kExitOk);
    CHECK(slurp(dir / "sample_samples.csv") != samp1);

    Options hot = opt;
    hot["mc.beta"] = "4.5";
    CHECK_THROWS_WITH_AS(run_sample(hot), doctest::Contains("admissible range"),
                         config_error);
}

TEST_CASE("output directory falls back to the environment variable") {
    const fs::path dir = fresh_dir("envdir");
    setenv("LOGSURF_OUTPUT_DIR", dir.string().c_str(), 1);
    Options opt;
    opt["family.name"] = "flat";
    opt["grid.window"] = "1";
    opt["grid.h"] = "0.25";
    opt["run.mode"] = "serial";
    opt["output.prefix"] = "envcase";
    REQUIRE(run_closed_form(opt) == kExitOk);
    unsetenv("LOGSURF_OUTPUT_DIR");
    CHECK(fs::exists(dir / "envcase_grid.csv"));
    CHECK(fs::exists(dir / "envcase_summary.json"));
}

TEST_CASE("verify subcommand runs a single quick criterion") {
    Options opt;
    opt["verify.criterion"] = "7";
    opt["run.mode"] = "serial";
    CHECK(run_verify(opt) == kExitOk);

    Options bad;
    bad["verify.criterion"] = "11";
    CHECK_THROWS_AS(run_verify(bad), config_error);

    Options suite;
    suite["verify.suite"] = "no-such-suite";
    CHECK_THROWS_AS(run_verify(suite), config_error);
}
