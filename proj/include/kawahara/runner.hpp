#pragma once

#include "kawahara/evolve.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kawahara {

/// Built-in setups: "experiment1" / "table1" (one soliton on [-40,40], t = 10),
/// "figure1" (one soliton on [-20,50], n = 5000, snapshots at 30/60/90/120),
/// "experiment2" (two solitons on [-100,100], n = 10000, t = 50).
std::vector<std::string> preset_names();
nlohmann::json preset_document(const std::string& name);

/// Applies `key=value` with a dotted key path ("scheme.kind=jmo"). The value
/// is parsed as JSON when possible, else taken as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

RunConfig parse_config(const nlohmann::json& doc);
RunConfig parse_config(std::string_view text);

nlohmann::json to_json(const RunConfig& config);

/// Writes snapshot_XXX.csv, diagnostics.csv and summary.json into `dir`.
/// Byte-identical for identical results (wall-clock time is not written).
std::vector<std::filesystem::path> write_outputs(const RunResult& result,
                                                 const std::filesystem::path& dir);

/// evolve + write_outputs into config.output_dir. On a numerical failure the
/// partial result is written together with a FAILED marker, then rethrown.
RunResult run_snapshots(const RunConfig& config);

struct ConvergenceRow {
    std::string scheme;
    std::int64_t n = 0;
    double l2_error = 0.0;
    std::optional<double> ratio;          // previous error / this error
    std::optional<double> observed_order; // log(ratio) / log(n / n_prev)
    bool failed = false;
    std::string failure;
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    bool complete = true;
};

/// Runs every (scheme, n) cell of `base` to t_end and tabulates the l2 error
/// against the exact solution. Cells run on up to `threads` workers. A failing
/// cell marks the table incomplete; cells that did finish are kept.
ConvergenceTable run_convergence(const std::vector<SchemeKind>& schemes,
                                 const std::vector<std::int64_t>& meshes, const RunConfig& base,
                                 unsigned threads = 1);

void write_convergence_csv(const ConvergenceTable& table, const std::filesystem::path& file);

/// %.17g
std::string format_number(double v);

} // namespace kawahara
