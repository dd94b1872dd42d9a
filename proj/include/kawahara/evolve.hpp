#pragma once

#include "kawahara/grid.hpp"
#include "kawahara/schemes.hpp"
#include "kawahara/solutions.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace kawahara {

struct RunConfig {
    double a = -40.0;
    double b = 40.0;
    std::int64_t n = 4000;
    SchemeParams scheme;
    InitialCondition ic;
    double t_end = 10.0;
    /// Sorted, within [0, t_end]. Empty means {t_end}.
    std::vector<double> snapshot_times;
    bool compare_exact = false;
    std::filesystem::path output_dir = "out";
    bool strict_ledger = true;
    /// Ledger residuals below -ledger_tolerance * mass(u^0) abort a strict run.
    double ledger_tolerance = 1e-10;
    double solve_tolerance = ImplicitFactorization::default_tolerance;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    PeriodicGrid grid() const;
    std::vector<double> effective_snapshot_times() const;
};

struct Snapshot {
    double t = 0.0;
    GridFunction u;
    std::optional<GridFunction> exact;
};

struct RunResult {
    RunConfig config;
    std::vector<Snapshot> snapshots;
    std::vector<StepDiagnostics> diagnostics;
    std::optional<GridFunction> final_state;
    std::optional<double> final_l2_error;
    double initial_mass = 0.0;
    double dt_initial = 0.0;
    std::size_t factorizations = 0;
    double wall_seconds = 0.0;
    std::vector<std::string> notes;
};

/// Time loop from t = 0 to t_end. Steps are shortened to land exactly on each
/// snapshot time and on t_end; a shortened step gets its own factorization.
RunResult evolve(const RunConfig& config);

/// Same as evolve, but fills `result` as it goes so that a caller catching a
/// NumericalError still has every step completed before the failure.
void evolve_into(const RunConfig& config, RunResult& result);

} // namespace kawahara
