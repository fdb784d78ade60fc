#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "logsurf/errors.hpp"
#include "logsurf/io.hpp"

using namespace logsurf;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "logsurf_io_test";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("double formatting round-trips through parsing") {
    for (double v : {1.0 / 3.0, 6.02214076e23, -1.1e-300, 0.0, -0.0, 42.0,
                     3.14159265358979323846}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    // integers stay compact, no trailing noise
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("radial csv round-trips to identical bytes") {
    RadialProfile p = log_radial_grid(0.01, 25.0, 40);
    p = sample_profile(p, [](double r) { return std::exp(-r) / (1.0 + r); });
    const std::string text = radial_csv(p);
    CHECK(text.rfind("r,value,weight\n", 0) == 0);

    const RadialProfile q = read_radial_csv(text);
    REQUIRE(q.size() == p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(q.radii[i] == p.radii[i]);
        CHECK(q.values[i] == p.values[i]);
        CHECK(q.weights[i] == p.weights[i]);
    }
    CHECK(radial_csv(q) == text);
}

TEST_CASE("planar csv round-trips to identical bytes") {
    const PlanarField f = make_field(
        1.5, 12, [](Vec2 x) { return std::sin(3.0 * x.x) * std::cos(2.0 * x.y); },
        ExecMode::Serial);
    const std::string text = planar_csv(f);
    CHECK(text.rfind("x1,x2,value\n", 0) == 0);

    const PlanarField g = read_planar_csv(text);
    CHECK(g.n_cells == f.n_cells);
    CHECK(g.halfwidth == doctest::Approx(f.halfwidth).epsilon(1e-15));
    for (std::size_t i = 0; i < f.values.size(); ++i)
        CHECK(g.values[i] == f.values[i]);
    CHECK(planar_csv(g) == text);
}

TEST_CASE("planar csv parser rejects ragged input") {
    const PlanarField f = make_field(
        1.0, 4, [](Vec2 x) { return x.x; }, ExecMode::Serial);
    std::string text = planar_csv(f);
    text += "0.1,0.2,0.3\n"; // 17 rows cannot form a square grid
    CHECK_THROWS_AS(read_planar_csv(text), config_error);
    CHECK_THROWS_AS(read_radial_csv("not,a,header\n1,2,3\n"), config_error);
}

TEST_CASE("samples csv uses the documented header and one row per particle") {
    LogGasResult res;
    res.n_particles = 2;
    res.sample_stride = 1;
    res.recorded_sweeps = 2;
    res.samples = {{0.0, 0.5}, {1.0, -1.0}, {0.25, 0.125}, {-2.0, 0.0}};
    const std::string text = samples_csv(res);
    CHECK(text.rfind("sweep,particle,x1,x2\n", 0) == 0);
    int rows = 0;
    for (char c : text)
        rows += (c == '\n') ? 1 : 0;
    CHECK(rows == 5); // header + 4 particle rows
    CHECK(text.find("0,1,1,-1\n") != std::string::npos);
}

TEST_CASE("atomic writes create parents, overwrite cleanly and leave no temp files") {
    const fs::path dir = temp_dir();
    const fs::path file = dir / "nested" / "out.txt";
    fs::remove_all(dir / "nested");

    write_text_atomic(file.string(), "first\n");
    CHECK(read_text(file.string()) == "first\n");
    write_text_atomic(file.string(), "second\n");
    CHECK(read_text(file.string()) == "second\n");

    int entries = 0;
    for (const auto& e : fs::directory_iterator(file.parent_path())) {
        (void)e;
        ++entries;
    }
    CHECK(entries == 1); // the temp file was renamed, not left behind
    fs::remove_all(dir);
}

TEST_CASE("read_text distinguishes a missing file") {
    CHECK_THROWS_AS(read_text("/nonexistent/dir/file.txt"), config_error);
}

TEST_CASE("summary json key order is stable") {
    MinimizerResult res;
    res.beta = 2.4;
    res.kappa = 2.4 * 3.14159265358979323846;
    res.E = 0.25;
    res.S1 = -0.1;
    res.F = res.beta * res.E - res.S1;
    res.iterations = 12;
    res.converged = true;
    res.residual = 1e-11;
    res.tail_share = 0.01;
    const std::string m = dump_json(meanfield_summary(res, 0.5));
    const char* order[] = {"\"beta\"",       "\"kappa\"",     "\"E\"",
                           "\"S1\"",         "\"F\"",         "\"U0\"",
                           "\"iterations\"", "\"converged\"", "\"residual\"",
                           "\"tail_share\""};
    std::size_t pos = 0;
    for (const char* key : order) {
        const std::size_t at = m.find(key, pos);
        REQUIRE(at != std::string::npos);
        pos = at;
    }

    LogGasResult lg;
    lg.seed = 17;
    lg.n_particles = 4;
    const std::string s = dump_json(loggas_summary(lg));
    CHECK(s.find("\"seed\"") < s.find("\"acceptance_rate\""));
    CHECK(s.find("\"acceptance_rate\"") < s.find("\"N\""));
    CHECK(s.find("\"pair_log_moment\"") < s.find("\"pair_log_se\""));
}

TEST_CASE("json dump is deterministic for equal inputs") {
    BarrierReport rep;
    rep.alpha = 4.0;
    rep.alpha_star = 2.0;
    rep.r_entry = 4.1;
    rep.radii = {4.1, 5.0};
    rep.margins = {-1e-6, -2e-6};
    rep.worst_margin = -1e-6;
    rep.strictly_negative = true;
    CHECK(dump_json(barrier_json(rep)) == dump_json(barrier_json(rep)));
    CHECK(dump_json(barrier_json(rep)).find("\"worst_margin\"") != std::string::npos);
}
