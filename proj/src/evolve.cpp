#include "kawahara/evolve.hpp"

#include "kawahara/diagnostics.hpp"
#include "kawahara/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace kawahara {

void RunConfig::validate() const
{
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        std::ostringstream msg;
        msg << "domain: [" << a << ", " << b << "] is empty; need b > a";
        throw ConfigError(msg.str());
    }
    if (n < static_cast<std::int64_t>(PeriodicGrid::min_nodes)) {
        std::ostringstream msg;
        msg << "n: " << n << " is below the minimum of " << PeriodicGrid::min_nodes;
        throw ConfigError(msg.str());
    }
    scheme.validate();
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
        throw ConfigError("t_end: must be a finite nonnegative number");
    }
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        const double s = snapshot_times[i];
        if (!(s >= 0.0 && s <= t_end)) {
            std::ostringstream msg;
            msg << "snapshot_times: " << s << " lies outside [0, t_end = " << t_end << "]";
            throw ConfigError(msg.str());
        }
        if (i > 0 && !(s > snapshot_times[i - 1])) {
            throw ConfigError("snapshot_times: must be strictly increasing");
        }
    }
    if (compare_exact && !exact_solution(ic)) {
        throw ConfigError("compare_exact: no exact solution is known for initial condition '" +
                          to_string(ic.id) + "'");
    }
    if (!(ledger_tolerance > 0.0) || !(solve_tolerance > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
}

PeriodicGrid RunConfig::grid() const
{
    return make_grid(a, b, n);
}

std::vector<double> RunConfig::effective_snapshot_times() const
{
    if (snapshot_times.empty()) {
        return {t_end};
    }
    return snapshot_times;
}

namespace {

class FactorizationCache {
public:
    FactorizationCache(const PeriodicGrid& grid, double tolerance)
        : grid_(grid), tolerance_(tolerance)
    {
    }

    // `nominal` is the regular step; anything else is a landing step.
    const ImplicitFactorization& get(double dt, double nominal)
    {
        if (main_ && main_->dt() == dt) {
            return *main_;
        }
        if (tail_ && tail_->dt() == dt) {
            return *tail_;
        }
        ++built_;
        if (dt == nominal) {
            main_.emplace(grid_, dt, tolerance_);
            return *main_;
        }
        tail_.emplace(grid_, dt, tolerance_);
        return *tail_;
    }

    std::size_t built() const noexcept { return built_; }

private:
    PeriodicGrid grid_;
    double tolerance_;
    std::optional<ImplicitFactorization> main_;
    std::optional<ImplicitFactorization> tail_;
    std::size_t built_ = 0;
};

std::string where(std::size_t step, double t)
{
    std::ostringstream msg;
    msg.precision(10);
    msg << " (step " << step << ", t = " << t << ")";
    return msg.str();
}

} // namespace

void evolve_into(const RunConfig& config, RunResult& result)
{
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    result = RunResult{};
    result.config = config;

    const PeriodicGrid grid = config.grid();
    const SchemeParams& params = config.scheme;
    const auto exact = config.compare_exact ? exact_solution(config.ic) : std::nullopt;

    GridFunction u = sample(grid, initial_profile(config.ic));
    GridFunction u_prev = u;
    result.initial_mass = mass(u);
    const double ledger_floor = -config.ledger_tolerance * result.initial_mass;

    if (params.kind == SchemeKind::jmo && params.dt_mode != DtMode::override_dt) {
        result.notes.push_back("jmo runs under the " + to_string(params.cfl_rule) +
                               " CFL controller shared with uk");
    }

    const auto take_snapshot = [&](double t) {
        Snapshot snap{t, u, std::nullopt};
        if (exact) {
            const auto& f = *exact;
            snap.exact = sample(grid, [&f, t](double x) { return f(x, t); });
        }
        result.snapshots.push_back(std::move(snap));
    };

    const std::vector<double> snaps = config.effective_snapshot_times();
    std::vector<double> events;
    for (double s : snaps) {
        if (s > 0.0) {
            events.push_back(s);
        }
    }
    if (config.t_end > 0.0 && (events.empty() || events.back() < config.t_end)) {
        events.push_back(config.t_end);
    }
    if (!snaps.empty() && snaps.front() == 0.0) {
        take_snapshot(0.0);
    }

    const double dt_fixed = params.dt_mode == DtMode::override_dt ? *params.dt_override
                                                                  : max_dt(u, params);
    result.dt_initial = dt_fixed;

    SchemeParams bound_params = params;
    bound_params.cfl_fraction = 1.0;

    FactorizationCache cache(grid, config.solve_tolerance);
    double t = 0.0;
    std::size_t step = 0;

    for (double event : events) {
        while (t < event) {
            const double dt_nominal =
                params.dt_mode == DtMode::adaptive ? max_dt(u, params, &u_prev) : dt_fixed;
            const double remaining = event - t;
            const bool lands = dt_nominal >= remaining || remaining - dt_nominal <= 1e-9 * dt_nominal;
            const double dt = lands ? remaining : dt_nominal;

            if (params.dt_mode != DtMode::override_dt) {
                const double bound = max_dt(u, bound_params, &u_prev);
                if (dt > bound * (1.0 + 1e-12)) {
                    std::ostringstream msg;
                    msg.precision(10);
                    msg << "CFL violated: dt = " << dt << " exceeds the " << to_string(params.cfl_rule)
                        << " bound " << bound << where(step, t);
                    throw CflViolation(msg.str());
                }
            }

            StepResult next{u, u, 0.0};
            try {
                switch (params.kind) {
                case SchemeKind::uk:
                    next = uk_step_detailed(u, cache.get(dt, dt_nominal), dt);
                    break;
                case SchemeKind::jmo:
                    next = jmo_step_detailed(u, cache.get(dt, dt_nominal), dt);
                    break;
                case SchemeKind::semidiscrete_rk4:
                    next = StepResult{rk4_step(u, dt), u, 0.0};
                    break;
                }
            } catch (const DivergenceError& e) {
                throw DivergenceError(e.what() + where(step, t), step, t);
            } catch (const SolverError& e) {
                throw SolverError(e.what() + where(step, t), e.residual());
            }

            const LedgerRecord rec = ledger(u, next.u, next.explicit_part, dt);
            const double t_next = lands ? event : t + dt;

            StepDiagnostics d;
            d.step = step;
            d.t = t_next;
            d.dt = dt;
            d.mass = rec.mass_out;
            d.ledger_residual = rec.residual();
            d.hamiltonian = hamiltonian(next.u);
            d.max_abs = next.u.max_abs();
            d.solver_residual = next.solver_residual;
            result.diagnostics.push_back(d);

            if (config.strict_ledger && rec.residual() < ledger_floor) {
                std::ostringstream msg;
                msg.precision(6);
                msg << "energy ledger violated: residual " << rec.residual() << " < "
                    << ledger_floor << where(step, t);
                throw LedgerViolation(msg.str(), step, t);
            }

            u_prev = std::move(u);
            u = std::move(next.u);
            t = t_next;
            ++step;
            result.final_state = u;
            result.factorizations = cache.built();
        }
        if (std::find(snaps.begin(), snaps.end(), event) != snaps.end()) {
            take_snapshot(event);
        }
    }

    result.final_state = u;
    result.factorizations = cache.built();
    if (exact) {
        const auto& f = *exact;
        const double t_end = config.t_end;
        result.final_l2_error =
            l2_error(u, sample(grid, [&f, t_end](double x) { return f(x, t_end); }));
    }
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

RunResult evolve(const RunConfig& config)
{
    RunResult result;
    evolve_into(config, result);
    return result;
}

} // namespace kawahara
