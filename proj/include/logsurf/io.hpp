#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "logsurf/diagnostics.hpp"
#include "logsurf/grid.hpp"
#include "logsurf/loggas.hpp"
#include "logsurf/meanfield.hpp"

namespace logsurf {

// All emitters print doubles with %.17g so files round-trip exactly and a
// fixed seed reproduces identical bytes.
std::string format_double(double v);

// CSV bodies. Planar: header x1,x2,value, row-major over cells. Radial:
// header r,value,weight. Samples: header sweep,particle,x1,x2 with the
// recorded-sweep index in the first column.
std::string planar_csv(const PlanarField& f);
std::string radial_csv(const RadialProfile& p);
std::string radial_csv(const std::vector<double>& r, const std::vector<double>& v,
                       const std::vector<double>& w);
std::string samples_csv(const LogGasResult& result);

// Parsers for the same formats (value column checks left to callers).
RadialProfile read_radial_csv(const std::string& text);
PlanarField read_planar_csv(const std::string& text);

// Writes content to path via a temp file in the same directory plus rename,
// so readers never observe a partial file. Creates parent directories.
void write_text_atomic(const std::string& path, const std::string& content);
std::string read_text(const std::string& path);

// JSON summaries (insertion-ordered keys, stable across runs).
using ordered_json = nlohmann::ordered_json;

ordered_json meanfield_summary(const MinimizerResult& result, double U0);
ordered_json loggas_summary(const LogGasResult& result);
ordered_json symmetry_json(const SymmetryReport& report);
ordered_json barrier_json(const BarrierReport& report);

std::string dump_json(const ordered_json& j);

} // namespace logsurf
