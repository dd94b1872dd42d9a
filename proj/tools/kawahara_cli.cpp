// Command-line front end: run a configuration, tabulate a mesh-refinement
// study, or run the operator/ledger property suite.
//
// Exit codes: 0 success, 1 numerical failure, 2 configuration error.

#include "kawahara/checks.hpp"
#include "kawahara/errors.hpp"
#include "kawahara/runner.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using kawahara::ConfigError;
using nlohmann::json;

constexpr int exit_ok = 0;
constexpr int exit_numerical = 1;
constexpr int exit_config = 2;

json load_document(const std::string& config_file, const std::string& preset,
                   const std::vector<std::string>& overrides)
{
    json doc;
    if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) {
            throw ConfigError("--config: cannot open '" + config_file + "'");
        }
        std::stringstream text;
        text << in.rdbuf();
        doc = json::parse(text.str(), nullptr, false);
        if (doc.is_discarded()) {
            throw ConfigError("--config: '" + config_file + "' is not well-formed JSON");
        }
    } else {
        doc = kawahara::preset_document(preset);
    }
    for (const auto& o : overrides) {
        kawahara::apply_override(doc, o);
    }
    return doc;
}

int cmd_run(const std::string& config_file, const std::string& preset,
            const std::vector<std::string>& overrides)
{
    const kawahara::RunConfig cfg =
        kawahara::parse_config(load_document(config_file, preset, overrides));
    const kawahara::RunResult r = kawahara::run_snapshots(cfg);
    std::printf("scheme      %s\n", kawahara::to_string(cfg.scheme.kind).c_str());
    std::printf("grid        [%g, %g), n = %lld, dx = %.6g\n", cfg.a, cfg.b,
                static_cast<long long>(cfg.n), cfg.grid().dx());
    std::printf("dt          %.6g (%zu steps, %zu factorizations)\n", r.dt_initial,
                r.diagnostics.size(), r.factorizations);
    if (r.final_l2_error) {
        std::printf("l2 error    %.6e at t = %g\n", *r.final_l2_error, cfg.t_end);
    }
    for (const auto& note : r.notes) {
        std::printf("note        %s\n", note.c_str());
    }
    std::printf("wall time   %.2f s\n", r.wall_seconds);
    std::printf("output      %s\n", cfg.output_dir.string().c_str());
    return exit_ok;
}

std::vector<std::string> split(const std::string& list)
{
    std::vector<std::string> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

int cmd_convergence(const std::string& schemes, const std::string& meshes,
                    const std::string& preset, const std::vector<std::string>& overrides,
                    unsigned threads, const std::string& output)
{
    const kawahara::RunConfig base = kawahara::parse_config(load_document("", preset, overrides));
    std::vector<kawahara::SchemeKind> kinds;
    for (const auto& s : split(schemes)) {
        kinds.push_back(kawahara::scheme_kind(s));
    }
    std::vector<std::int64_t> ns;
    for (const auto& m : split(meshes)) {
        try {
            std::size_t used = 0;
            ns.push_back(std::stoll(m, &used));
            if (used != m.size()) {
                throw std::invalid_argument(m);
            }
        } catch (const std::exception&) {
            throw ConfigError("--meshes: '" + m + "' is not an integer");
        }
    }
    const auto table = kawahara::run_convergence(kinds, ns, base, threads);
    kawahara::write_convergence_csv(table, output);

    std::printf("%-6s %8s %14s %10s %8s\n", "scheme", "n", "l2 error", "ratio", "order");
    for (const auto& row : table.rows) {
        if (row.failed) {
            std::printf("%-6s %8lld FAILED: %s\n", row.scheme.c_str(),
                        static_cast<long long>(row.n), row.failure.c_str());
            continue;
        }
        std::printf("%-6s %8lld %14.6e", row.scheme.c_str(), static_cast<long long>(row.n),
                    row.l2_error);
        if (row.ratio) {
            std::printf(" %10.4f %8.4f", *row.ratio, *row.observed_order);
        }
        std::printf("\n");
    }
    std::printf("written to %s\n", output.c_str());
    return table.complete ? exit_ok : exit_numerical;
}

int cmd_check(std::size_t n, std::size_t trials, std::uint64_t seed)
{
    const auto results = kawahara::run_property_checks(n, trials, seed);
    bool all = true;
    for (const auto& r : results) {
        std::printf("%s  %-52s worst %.3e  tol %.0e\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.worst, r.tolerance);
        all = all && r.passed;
    }
    return all ? exit_ok : exit_numerical;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Finite-difference solver for the Kawahara equation u_t + u u_x + u_xxx = u_xxxxx"};
    app.require_subcommand(1);

    std::string config_file;
    std::string preset;
    std::vector<std::string> overrides;
    auto* run = app.add_subcommand("run", "Run one configuration and write snapshots");
    auto* config_opt = run->add_option("--config", config_file, "JSON configuration file");
    auto* preset_opt =
        run->add_option("--preset", preset, "Built-in configuration")
            ->check(CLI::IsMember(kawahara::preset_names()));
    config_opt->excludes(preset_opt);
    run->add_option("--set", overrides, "Override a field, e.g. scheme.kind=jmo");

    std::string schemes = "uk,jmo";
    std::string meshes = "4000,8000,12000,16000";
    std::string conv_preset = "table1";
    std::vector<std::string> conv_overrides;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::string conv_output = "out/convergence.csv";
    auto* conv = app.add_subcommand("convergence", "Mesh-refinement study against the exact solution");
    conv->add_option("--schemes", schemes, "Comma-separated schemes (uk, jmo, rk4)")->capture_default_str();
    conv->add_option("--meshes", meshes, "Comma-separated, strictly increasing node counts")
        ->capture_default_str();
    conv->add_option("--preset", conv_preset, "Base configuration")->capture_default_str()
        ->check(CLI::IsMember(kawahara::preset_names()));
    conv->add_option("--set", conv_overrides, "Override a field of the base configuration");
    conv->add_option("--threads", threads, "Worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    conv->add_option("--output", conv_output, "CSV file")->capture_default_str();

    std::size_t check_n = 64;
    std::size_t check_trials = 100;
    std::uint64_t check_seed = 20240611;
    auto* check = app.add_subcommand("check", "Operator and energy-ledger property suite");
    check->add_option("--n", check_n, "Grid size")->capture_default_str()->check(CLI::Range(8, 1024));
    check->add_option("--trials", check_trials, "Random functions per property")->capture_default_str()
        ->check(CLI::PositiveNumber);
    check->add_option("--seed", check_seed, "Random seed")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (*run) {
            if (config_file.empty() && preset.empty()) {
                throw ConfigError("run: one of --config or --preset is required");
            }
            return cmd_run(config_file, preset, overrides);
        }
        if (*conv) {
            return cmd_convergence(schemes, meshes, conv_preset, conv_overrides, threads,
                                   conv_output);
        }
        return cmd_check(check_n, check_trials, check_seed);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return exit_config;
    } catch (const kawahara::UsageError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return exit_config;
    } catch (const kawahara::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return exit_numerical;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_numerical;
    }
}
