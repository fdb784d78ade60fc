#include "logsurf/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "logsurf/errors.hpp"

namespace logsurf {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string planar_csv(const PlanarField& f) {
    std::string out = "x1,x2,value\n";
    for (int iy = 0; iy < f.n_cells; ++iy)
        for (int ix = 0; ix < f.n_cells; ++ix) {
            const Vec2 c = f.center(ix, iy);
            out += format_double(c.x);
            out += ',';
            out += format_double(c.y);
            out += ',';
            out += format_double(f.at(ix, iy));
            out += '\n';
        }
    return out;
}

std::string radial_csv(const std::vector<double>& r, const std::vector<double>& v,
                       const std::vector<double>& w) {
    if (r.size() != v.size() || r.size() != w.size())
        throw config_error("radial CSV needs columns of equal length");
    std::string out = "r,value,weight\n";
    for (std::size_t i = 0; i < r.size(); ++i) {
        out += format_double(r[i]);
        out += ',';
        out += format_double(v[i]);
        out += ',';
        out += format_double(w[i]);
        out += '\n';
    }
    return out;
}

std::string radial_csv(const RadialProfile& p) {
    return radial_csv(p.radii, p.values, p.weights);
}

std::string samples_csv(const LogGasResult& result) {
    std::string out = "sweep,particle,x1,x2\n";
    const int n = result.n_particles;
    for (long long s = 0; s < result.recorded_sweeps; ++s)
        for (int p = 0; p < n; ++p) {
            const Vec2 x = result.samples[static_cast<std::size_t>(s) * n + p];
            out += std::to_string(s);
            out += ',';
            out += std::to_string(p);
            out += ',';
            out += format_double(x.x);
            out += ',';
            out += format_double(x.y);
            out += '\n';
        }
    return out;
}

namespace {

std::vector<std::vector<double>> parse_csv_rows(const std::string& text,
                                                const std::string& header,
                                                std::size_t n_cols) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != header)
        throw config_error("CSV header mismatch, expected: " + header);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::string cell =
                line.substr(pos, comma == std::string::npos ? std::string::npos
                                                            : comma - pos);
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw config_error("CSV cell is not a number: " + cell);
            row.push_back(v);
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        if (row.size() != n_cols)
            throw config_error("CSV row has wrong column count");
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

RadialProfile read_radial_csv(const std::string& text) {
    const auto rows = parse_csv_rows(text, "r,value,weight", 3);
    RadialProfile p;
    for (const auto& row : rows) {
        p.radii.push_back(row[0]);
        p.values.push_back(row[1]);
        p.weights.push_back(row[2]);
    }
    for (std::size_t i = 1; i < p.radii.size(); ++i)
        if (!(p.radii[i] > p.radii[i - 1]))
            throw config_error("radial CSV radii must increase");
    return p;
}

PlanarField read_planar_csv(const std::string& text) {
    const auto rows = parse_csv_rows(text, "x1,x2,value", 3);
    const std::size_t n2 = rows.size();
    const int n = static_cast<int>(std::lround(std::sqrt(double(n2))));
    if (n < 4 || static_cast<std::size_t>(n) * n != n2)
        throw config_error("planar CSV must hold a square cell grid");
    // infer the window from the cell centers: first center is at
    // -L + spacing/2 with spacing = 2L/n
    const double c0 = rows.front()[0];
    const double halfwidth = -c0 * n / (n - 1.0);
    if (!(halfwidth > 0.0))
        throw config_error("planar CSV cell centers are inconsistent");
    PlanarField f = make_empty_field(halfwidth, n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const auto& row = rows[static_cast<std::size_t>(iy) * n + ix];
            const Vec2 c = f.center(ix, iy);
            if (std::abs(row[0] - c.x) > 1e-9 * (1.0 + std::abs(c.x)) ||
                std::abs(row[1] - c.y) > 1e-9 * (1.0 + std::abs(c.y)))
                throw config_error("planar CSV is not row-major on a uniform grid");
            f.values[static_cast<std::size_t>(iy) * n + ix] = row[2];
        }
    return f;
}

void write_text_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw config_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw config_error("short write: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ordered_json meanfield_summary(const MinimizerResult& result, double U0) {
    ordered_json j;
    j["beta"] = result.beta;
    j["kappa"] = result.kappa;
    j["E"] = result.E;
    j["S1"] = result.S1;
    j["F"] = result.F;
    j["U0"] = U0;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["residual"] = result.residual;
    j["tail_share"] = result.tail_share;
    return j;
}

ordered_json loggas_summary(const LogGasResult& result) {
    ordered_json j;
    j["seed"] = result.seed;
    j["acceptance_rate"] = result.acceptance_rate;
    j["N"] = result.n_particles;
    j["beta"] = result.beta;
    j["sweeps"] = result.total_sweeps;
    j["pair_log_moment"] = result.pair_log_moment;
    j["pair_log_se"] = result.pair_log_se;
    j["sigma_final"] = result.sigma_final;
    j["overflow_share"] = result.overflow_share;
    return j;
}

ordered_json symmetry_json(const SymmetryReport& report) {
    ordered_json j;
    j["radial"] = report.radial;
    j["best_center"] = {report.best_center.x, report.best_center.y};
    j["best_score"] = report.best_score;
    j["dynamic_range"] = report.dynamic_range;
    ordered_json cands = ordered_json::array();
    for (std::size_t i = 0; i < report.candidates.size(); ++i)
        cands.push_back({{"center", {report.candidates[i].x, report.candidates[i].y}},
                         {"score", report.scores[i]}});
    j["candidates"] = std::move(cands);
    return j;
}

ordered_json barrier_json(const BarrierReport& report) {
    ordered_json j;
    j["alpha"] = report.alpha;
    j["alpha_star"] = report.alpha_star;
    j["r_entry"] = report.r_entry;
    j["worst_margin"] = report.worst_margin;
    j["strictly_negative"] = report.strictly_negative;
    j["radii"] = report.radii;
    j["margins"] = report.margins;
    return j;
}

std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace logsurf
