#include "kawahara/runner.hpp"

#include "kawahara/diagnostics.hpp"
#include "kawahara/errors.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace kawahara {

using nlohmann::json;

std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> preset_names()
{
    return {"experiment1", "table1", "figure1", "experiment2"};
}

json preset_document(const std::string& name)
{
    const json courant_uk = {{"kind", "uk"},
                             {"cfl_fraction", 0.75},
                             {"dt_mode", "fixed_from_initial"},
                             {"cfl_rule", "courant"}};
    if (name == "experiment1" || name == "table1") {
        return {{"domain", {-40.0, 40.0}},
                {"n", 4000},
                {"scheme", courant_uk},
                {"ic", {{"id", "one_soliton"}, {"c", 0.0}}},
                {"t_end", 10.0},
                {"snapshot_times", {10.0}},
                {"compare_exact", true},
                {"output_dir", "out/" + name}};
    }
    if (name == "figure1") {
        return {{"domain", {-20.0, 50.0}},
                {"n", 5000},
                {"scheme", courant_uk},
                {"ic", {{"id", "one_soliton"}, {"c", 0.0}}},
                {"t_end", 120.0},
                {"snapshot_times", {30.0, 60.0, 90.0, 120.0}},
                {"compare_exact", true},
                {"output_dir", "out/figure1"}};
    }
    if (name == "experiment2") {
        return {{"domain", {-100.0, 100.0}},
                {"n", 10000},
                {"scheme", courant_uk},
                {"ic", {{"id", "two_soliton"}}},
                {"t_end", 50.0},
                {"snapshot_times", {0.0, 10.0, 20.0, 30.0, 40.0, 50.0}},
                {"compare_exact", false},
                {"output_dir", "out/experiment2"}};
    }
    std::string valid;
    for (const auto& p : preset_names()) {
        valid += (valid.empty() ? "" : ", ") + p;
    }
    throw ConfigError("preset: unknown preset '" + name + "' (valid: " + valid + ")");
}

void apply_override(json& doc, std::string_view assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("--set: expected key=value, got '" + std::string(assignment) + "'");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) {
        value = raw;
    }
    json* node = &doc;
    std::string parent;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
        if (part.empty()) {
            throw ConfigError("--set: malformed key '" + key + "'");
        }
        if (!node->is_object()) {
            // "scheme": "uk" shorthand followed by "scheme.cfl_fraction=..." etc.
            const bool shorthand_parent = parent == "scheme" || parent == "ic";
            if (!node->is_null() && !(node->is_string() && shorthand_parent)) {
                throw ConfigError("--set: '" + key + "' descends into a non-object");
            }
            const std::string shorthand = node->is_string() ? node->get<std::string>() : "";
            *node = json::object();
            if (!shorthand.empty()) {
                (*node)[parent == "scheme" ? "kind" : "id"] = shorthand;
            }
        }
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        parent = part;
        start = dot + 1;
    }
}

namespace {

double number_at(const json& obj, const char* key, const std::string& path)
{
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError(path + ": expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ConfigError(path + ": must be finite");
    }
    return d;
}

bool bool_at(const json& obj, const char* key, const std::string& path)
{
    const auto& v = obj.at(key);
    if (!v.is_boolean()) {
        throw ConfigError(path + ": expected true or false");
    }
    return v.get<bool>();
}

std::string string_at(const json& obj, const char* key, const std::string& path)
{
    const auto& v = obj.at(key);
    if (!v.is_string()) {
        throw ConfigError(path + ": expected a string");
    }
    return v.get<std::string>();
}

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where)
{
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) {
            throw ConfigError(where + (where.empty() ? "" : ".") + key + ": unknown field");
        }
    }
}

void require(const json& obj, const char* key)
{
    if (!obj.contains(key)) {
        throw ConfigError(std::string(key) + ": missing required field");
    }
}

SchemeParams parse_scheme(const json& node)
{
    SchemeParams p;
    if (node.is_string()) {
        p.kind = scheme_kind(node.get<std::string>());
        return p;
    }
    if (!node.is_object()) {
        throw ConfigError("scheme: expected a scheme name or an object");
    }
    reject_unknown(node,
                   {"kind", "cfl_fraction", "dt_mode", "dt_override", "enforce_secondary_cfl",
                    "cfl_rule", "dt_cap"},
                   "scheme");
    if (!node.contains("kind")) {
        throw ConfigError("scheme.kind: missing required field");
    }
    p.kind = scheme_kind(string_at(node, "kind", "scheme.kind"));
    if (node.contains("cfl_fraction")) {
        p.cfl_fraction = number_at(node, "cfl_fraction", "scheme.cfl_fraction");
    }
    if (node.contains("dt_mode")) {
        p.dt_mode = dt_mode(string_at(node, "dt_mode", "scheme.dt_mode"));
    }
    if (node.contains("dt_override") && !node.at("dt_override").is_null()) {
        p.dt_override = number_at(node, "dt_override", "scheme.dt_override");
    }
    if (node.contains("enforce_secondary_cfl")) {
        p.enforce_secondary_cfl =
            bool_at(node, "enforce_secondary_cfl", "scheme.enforce_secondary_cfl");
    }
    if (node.contains("cfl_rule")) {
        p.cfl_rule = cfl_rule(string_at(node, "cfl_rule", "scheme.cfl_rule"));
    }
    if (node.contains("dt_cap") && !node.at("dt_cap").is_null()) {
        p.dt_cap = number_at(node, "dt_cap", "scheme.dt_cap");
    }
    return p;
}

InitialCondition parse_ic(const json& node)
{
    InitialCondition ic;
    if (node.is_string()) {
        ic.id = initial_condition_id(node.get<std::string>());
        return ic;
    }
    if (!node.is_object()) {
        throw ConfigError("ic: expected an initial-condition name or an object");
    }
    reject_unknown(node, {"id", "c", "profile", "amplitude", "center", "width", "mode"}, "ic");
    if (!node.contains("id")) {
        throw ConfigError("ic.id: missing required field");
    }
    ic.id = initial_condition_id(string_at(node, "id", "ic.id"));
    if (node.contains("c")) {
        ic.c = number_at(node, "c", "ic.c");
    }
    if (ic.id == InitialCondition::Id::custom) {
        const std::string profile =
            node.contains("profile") ? string_at(node, "profile", "ic.profile") : "constant";
        if (profile == "constant") {
            ic.profile = InitialCondition::Profile::constant;
        } else if (profile == "sine") {
            ic.profile = InitialCondition::Profile::sine;
        } else if (profile == "gaussian") {
            ic.profile = InitialCondition::Profile::gaussian;
        } else {
            throw ConfigError("ic.profile: unknown profile '" + profile +
                              "' (valid: constant, sine, gaussian)");
        }
        if (node.contains("amplitude")) {
            ic.amplitude = number_at(node, "amplitude", "ic.amplitude");
        }
        if (node.contains("center")) {
            ic.center = number_at(node, "center", "ic.center");
        }
        if (node.contains("width")) {
            ic.width = number_at(node, "width", "ic.width");
            if (!(ic.width > 0.0)) {
                throw ConfigError("ic.width: must be positive");
            }
        }
        if (node.contains("mode")) {
            const auto& m = node.at("mode");
            if (!m.is_number_integer()) {
                throw ConfigError("ic.mode: expected an integer");
            }
            ic.mode = m.get<int>();
        }
    }
    return ic;
}

} // namespace

RunConfig parse_config(const json& input)
{
    if (!input.is_object()) {
        throw ConfigError("config: expected a JSON object");
    }
    json doc = input;
    if (doc.contains("preset")) {
        if (!doc.at("preset").is_string()) {
            throw ConfigError("preset: expected a preset name");
        }
        json base = preset_document(doc.at("preset").get<std::string>());
        doc.erase("preset");
        base.merge_patch(doc);
        doc = std::move(base);
    }
    reject_unknown(doc,
                   {"domain", "n", "scheme", "ic", "c", "t_end", "snapshot_times",
                    "compare_exact", "strict_ledger", "output_dir", "ledger_tolerance",
                    "solve_tolerance"},
                   "");
    for (const char* key : {"domain", "n", "scheme", "ic", "t_end"}) {
        require(doc, key);
    }

    RunConfig cfg;
    const auto& domain = doc.at("domain");
    if (!domain.is_array() || domain.size() != 2 || !domain[0].is_number() ||
        !domain[1].is_number()) {
        throw ConfigError("domain: expected [a, b]");
    }
    cfg.a = domain[0].get<double>();
    cfg.b = domain[1].get<double>();
    if (!doc.at("n").is_number_integer()) {
        throw ConfigError("n: expected an integer");
    }
    cfg.n = doc.at("n").get<std::int64_t>();
    cfg.scheme = parse_scheme(doc.at("scheme"));
    cfg.ic = parse_ic(doc.at("ic"));
    if (doc.contains("c")) {
        cfg.ic.c = number_at(doc, "c", "c");
    }
    if (cfg.ic.profile == InitialCondition::Profile::sine) {
        cfg.ic.period = cfg.b - cfg.a;
    }
    cfg.t_end = number_at(doc, "t_end", "t_end");
    if (doc.contains("snapshot_times")) {
        const auto& s = doc.at("snapshot_times");
        if (!s.is_array()) {
            throw ConfigError("snapshot_times: expected an array of times");
        }
        for (const auto& v : s) {
            if (!v.is_number()) {
                throw ConfigError("snapshot_times: expected numbers");
            }
            cfg.snapshot_times.push_back(v.get<double>());
        }
    }
    if (doc.contains("compare_exact")) {
        cfg.compare_exact = bool_at(doc, "compare_exact", "compare_exact");
    }
    cfg.strict_ledger = doc.contains("strict_ledger")
                            ? bool_at(doc, "strict_ledger", "strict_ledger")
                            : cfg.scheme.kind == SchemeKind::uk;
    if (doc.contains("output_dir")) {
        cfg.output_dir = string_at(doc, "output_dir", "output_dir");
    }
    if (doc.contains("ledger_tolerance")) {
        cfg.ledger_tolerance = number_at(doc, "ledger_tolerance", "ledger_tolerance");
    }
    if (doc.contains("solve_tolerance")) {
        cfg.solve_tolerance = number_at(doc, "solve_tolerance", "solve_tolerance");
    }
    cfg.validate();
    return cfg;
}

RunConfig parse_config(std::string_view text)
{
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) {
        throw ConfigError("config: not a well-formed JSON document");
    }
    return parse_config(doc);
}

json to_json(const RunConfig& c)
{
    json scheme = {{"kind", to_string(c.scheme.kind)},
                   {"cfl_fraction", c.scheme.cfl_fraction},
                   {"dt_mode", to_string(c.scheme.dt_mode)},
                   {"enforce_secondary_cfl", c.scheme.enforce_secondary_cfl},
                   {"cfl_rule", to_string(c.scheme.cfl_rule)}};
    if (c.scheme.dt_override) {
        scheme["dt_override"] = *c.scheme.dt_override;
    }
    if (c.scheme.dt_cap) {
        scheme["dt_cap"] = *c.scheme.dt_cap;
    }
    json ic = {{"id", to_string(c.ic.id)}};
    if (c.ic.id == InitialCondition::Id::one_soliton) {
        ic["c"] = c.ic.c;
    }
    if (c.ic.id == InitialCondition::Id::custom) {
        static constexpr const char* names[] = {"constant", "sine", "gaussian"};
        ic["profile"] = c.ic.function ? "function" : names[static_cast<int>(c.ic.profile)];
        ic["amplitude"] = c.ic.amplitude;
        ic["center"] = c.ic.center;
        ic["width"] = c.ic.width;
        ic["mode"] = c.ic.mode;
    }
    return {{"domain", {c.a, c.b}},
            {"n", c.n},
            {"scheme", scheme},
            {"ic", ic},
            {"t_end", c.t_end},
            {"snapshot_times", c.snapshot_times},
            {"compare_exact", c.compare_exact},
            {"strict_ledger", c.strict_ledger},
            {"output_dir", c.output_dir.string()},
            {"ledger_tolerance", c.ledger_tolerance},
            {"solve_tolerance", c.solve_tolerance}};
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& file)
{
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + file.string() + "' for writing");
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& file)
{
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + file.string() + "' failed");
    }
}

std::string snapshot_name(std::size_t index, double t)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "snapshot_%03zu_t%g.csv", index, t);
    return buf;
}

} // namespace

std::vector<std::filesystem::path> write_outputs(const RunResult& result,
                                                 const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" + dir.string() +
                                 "': " + ec.message());
    }
    std::vector<std::filesystem::path> files;

    json snapshots = json::array();
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
        const Snapshot& s = result.snapshots[k];
        const auto file = dir / snapshot_name(k, s.t);
        auto out = open_for_write(file);
        out << (s.exact ? "x,u,u_exact\n" : "x,u\n");
        const PeriodicGrid& g = s.u.grid();
        for (std::size_t i = 0; i < g.n(); ++i) {
            out << format_number(g.x(i)) << ',' << format_number(s.u[i]);
            if (s.exact) {
                out << ',' << format_number((*s.exact)[i]);
            }
            out << '\n';
        }
        finish(out, file);
        files.push_back(file);
        json entry = {{"t", s.t}, {"file", file.filename().string()}};
        if (s.exact) {
            entry["l2_error"] = l2_error(s.u, *s.exact);
        }
        snapshots.push_back(entry);
    }

    {
        const auto file = dir / "diagnostics.csv";
        auto out = open_for_write(file);
        out << "step,t,dt,mass,ledger_residual,hamiltonian,max_abs,solver_residual\n";
        for (const StepDiagnostics& d : result.diagnostics) {
            out << d.step << ',' << format_number(d.t) << ',' << format_number(d.dt) << ','
                << format_number(d.mass) << ',' << format_number(d.ledger_residual) << ','
                << format_number(d.hamiltonian) << ',' << format_number(d.max_abs) << ','
                << format_number(d.solver_residual) << '\n';
        }
        finish(out, file);
        files.push_back(file);
    }

    {
        json summary = {{"config", to_json(result.config)},
                        {"steps", result.diagnostics.size()},
                        {"dt_initial", result.dt_initial},
                        {"factorizations", result.factorizations},
                        {"initial_mass", result.initial_mass},
                        {"snapshots", snapshots},
                        {"notes", result.notes}};
        if (result.final_l2_error) {
            summary["final_l2_error"] = *result.final_l2_error;
        }
        const auto file = dir / "summary.json";
        auto out = open_for_write(file);
        out << summary.dump(2) << '\n';
        finish(out, file);
        files.push_back(file);
    }
    return files;
}

RunResult run_snapshots(const RunConfig& config)
{
    RunResult result;
    const auto marker = config.output_dir / "FAILED";
    try {
        evolve_into(config, result);
    } catch (const NumericalError& e) {
        write_outputs(result, config.output_dir);
        auto out = open_for_write(marker);
        out << e.what() << '\n';
        finish(out, marker);
        throw;
    }
    std::filesystem::remove(marker);
    write_outputs(result, config.output_dir);
    return result;
}

ConvergenceTable run_convergence(const std::vector<SchemeKind>& schemes,
                                 const std::vector<std::int64_t>& meshes, const RunConfig& base,
                                 unsigned threads)
{
    if (schemes.empty() || meshes.empty()) {
        throw ConfigError("convergence: need at least one scheme and one mesh");
    }
    for (std::size_t i = 1; i < meshes.size(); ++i) {
        if (!(meshes[i] > meshes[i - 1])) {
            throw ConfigError("convergence: meshes must be strictly increasing");
        }
    }
    if (!exact_solution(base.ic)) {
        throw ConfigError("convergence: the base initial condition has no exact solution");
    }

    struct Cell {
        SchemeKind scheme;
        std::int64_t n;
        ConvergenceRow row;
    };
    const auto cell_config = [&base](SchemeKind s, std::int64_t n) {
        RunConfig cfg = base;
        cfg.scheme.kind = s;
        cfg.n = n;
        cfg.compare_exact = true;
        cfg.snapshot_times.clear();
        // the energy ledger is an estimate for UK only
        cfg.strict_ledger = base.strict_ledger && s == SchemeKind::uk;
        return cfg;
    };
    std::vector<Cell> cells;
    for (SchemeKind s : schemes) {
        for (std::int64_t n : meshes) {
            cell_config(s, n).validate();
            cells.push_back({s, n, {}});
        }
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&]() {
        for (std::size_t k = next++; k < cells.size(); k = next++) {
            Cell& cell = cells[k];
            const RunConfig cfg = cell_config(cell.scheme, cell.n);
            cell.row.scheme = to_string(cell.scheme);
            cell.row.n = cell.n;
            try {
                const RunResult r = evolve(cfg);
                cell.row.l2_error = *r.final_l2_error;
            } catch (const NumericalError& e) {
                cell.row.failed = true;
                cell.row.failure = e.what();
            }
        }
    };
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    ConvergenceTable table;
    const ConvergenceRow* prev = nullptr;
    for (Cell& cell : cells) {
        ConvergenceRow& row = cell.row;
        if (prev != nullptr && prev->scheme != row.scheme) {
            prev = nullptr;
        }
        if (row.failed) {
            table.complete = false;
        } else if (prev != nullptr && !prev->failed && row.l2_error > 0.0 && prev->l2_error > 0.0) {
            row.ratio = prev->l2_error / row.l2_error;
            row.observed_order = std::log(*row.ratio) /
                                 std::log(static_cast<double>(row.n) / static_cast<double>(prev->n));
        }
        table.rows.push_back(row);
        prev = &table.rows.back();
    }
    return table;
}

void write_convergence_csv(const ConvergenceTable& table, const std::filesystem::path& file)
{
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    auto out = open_for_write(file);
    out << "scheme,n,l2_error,ratio,observed_order\n";
    std::string failures;
    for (const auto& row : table.rows) {
        if (row.failed) {
            failures += row.scheme + "," + std::to_string(row.n) + ": " + row.failure + "\n";
            continue;
        }
        out << row.scheme << ',' << row.n << ',' << format_number(row.l2_error) << ','
            << (row.ratio ? format_number(*row.ratio) : "") << ','
            << (row.observed_order ? format_number(*row.observed_order) : "") << '\n';
    }
    finish(out, file);
    auto marker = file;
    marker += ".FAILED";
    if (table.complete) {
        std::filesystem::remove(marker);
    } else {
        auto m = open_for_write(marker);
        m << failures;
        finish(m, marker);
    }
}

} // namespace kawahara
