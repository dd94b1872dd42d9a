#include "kawahara/schemes.hpp"

#include "kawahara/errors.hpp"
#include "kawahara/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kawahara {

std::string to_string(SchemeKind kind)
{
    switch (kind) {
    case SchemeKind::uk:
        return "uk";
    case SchemeKind::jmo:
        return "jmo";
    case SchemeKind::semidiscrete_rk4:
        return "rk4";
    }
    return "unknown";
}

std::string to_string(DtMode mode)
{
    switch (mode) {
    case DtMode::fixed_from_initial:
        return "fixed_from_initial";
    case DtMode::adaptive:
        return "adaptive";
    case DtMode::override_dt:
        return "override";
    }
    return "unknown";
}

std::string to_string(CflRule rule)
{
    return rule == CflRule::courant ? "courant" : "energy";
}

SchemeKind scheme_kind(const std::string& name)
{
    if (name == "uk") {
        return SchemeKind::uk;
    }
    if (name == "jmo") {
        return SchemeKind::jmo;
    }
    if (name == "rk4") {
        return SchemeKind::semidiscrete_rk4;
    }
    throw ConfigError("scheme.kind: unknown scheme '" + name + "' (valid: uk, jmo, rk4)");
}

DtMode dt_mode(const std::string& name)
{
    if (name == "fixed_from_initial") {
        return DtMode::fixed_from_initial;
    }
    if (name == "adaptive") {
        return DtMode::adaptive;
    }
    if (name == "override") {
        return DtMode::override_dt;
    }
    throw ConfigError("scheme.dt_mode: unknown mode '" + name +
                      "' (valid: fixed_from_initial, adaptive, override)");
}

CflRule cfl_rule(const std::string& name)
{
    if (name == "courant") {
        return CflRule::courant;
    }
    if (name == "energy") {
        return CflRule::energy;
    }
    throw ConfigError("scheme.cfl_rule: unknown rule '" + name + "' (valid: courant, energy)");
}

void SchemeParams::validate() const
{
    if (!(cfl_fraction > 0.0 && cfl_fraction <= 1.0)) {
        std::ostringstream msg;
        msg << "scheme.cfl_fraction: " << cfl_fraction << " is outside (0, 1]";
        throw ConfigError(msg.str());
    }
    if (dt_override.has_value() != (dt_mode == DtMode::override_dt)) {
        throw ConfigError("scheme.dt_override: must be given exactly when dt_mode is 'override'");
    }
    if (dt_override && !(*dt_override > 0.0 && std::isfinite(*dt_override))) {
        throw ConfigError("scheme.dt_override: must be a positive finite number");
    }
    if (dt_cap && !(*dt_cap > 0.0 && std::isfinite(*dt_cap))) {
        throw ConfigError("scheme.dt_cap: must be a positive finite number");
    }
}

double energy_cfl_root()
{
    return (std::sqrt(145.0) - 1.0) / 48.0;
}

double energy_max_dt(const GridFunction& u, double cfl_fraction)
{
    const double norm = norm_h(u);
    if (norm == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double dx = u.grid().dx();
    return cfl_fraction * energy_cfl_root() * dx * std::sqrt(dx) / norm;
}

double courant_max_dt(const GridFunction& u, double cfl_fraction)
{
    const double umax = u.max_abs();
    if (umax == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return cfl_fraction * u.grid().dx() / umax;
}

double secondary_max_dt(const GridFunction& u, const GridFunction& u_prev)
{
    const double m = u.max_abs();
    const double mp = u_prev.max_abs();
    const double qa = 4.0 * m * m + 2.0 * mp * mp;
    const double qb = m / 12.0;
    if (qa == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    // positive root of qa l^2 + qb l - 1/16; written to avoid cancellation
    const double lambda = (0.125) / (qb + std::sqrt(qb * qb + 0.25 * qa));
    return lambda * u.grid().dx();
}

double rk4_max_dt(const PeriodicGrid& grid, double cfl_fraction)
{
    const double dx = grid.dx();
    const double dx3 = dx * dx * dx;
    const double rho = 8.0 / dx3 + 32.0 / (dx3 * dx * dx);
    return cfl_fraction * 2.5 / rho;
}

double max_dt(const GridFunction& u, const SchemeParams& params, const GridFunction* u_prev)
{
    double dt = params.cfl_rule == CflRule::energy ? energy_max_dt(u, params.cfl_fraction)
                                                   : courant_max_dt(u, params.cfl_fraction);
    if (params.enforce_secondary_cfl) {
        dt = std::min(dt, secondary_max_dt(u, u_prev != nullptr ? *u_prev : u));
    }
    if (params.kind == SchemeKind::semidiscrete_rk4) {
        dt = std::min(dt, rk4_max_dt(u.grid(), params.cfl_fraction));
    }
    if (!std::isfinite(dt)) {
        dt = params.dt_cap.value_or(u.grid().dx());
    }
    return dt;
}

GridFunction burgers_substep(const GridFunction& u, double dt)
{
    const std::size_t n = u.size();
    const double inv2dx = 0.5 / u.grid().dx();
    GridFunction w(u.grid());
    for (std::size_t j = 0; j < n; ++j) {
        const double up = u[j + 1 == n ? 0 : j + 1];
        const double um = u[j == 0 ? n - 1 : j - 1];
        const double ubar = 0.5 * (up + um);
        w[j] = ubar - dt * ubar * (up - um) * inv2dx;
    }
    return w;
}

GridFunction jmo_explicit_part(const GridFunction& u, double dt)
{
    const std::size_t n = u.size();
    const double c = 0.5 * dt / u.grid().dx();
    GridFunction w(u.grid());
    for (std::size_t j = 0; j < n; ++j) {
        const double um = u[j == 0 ? n - 1 : j - 1];
        w[j] = u[j] - c * (u[j] * u[j] - um * um);
    }
    return w;
}

namespace {

void check_factorization(const GridFunction& u, const ImplicitFactorization& f, double dt,
                         const char* who)
{
    if (!(u.grid() == f.grid())) {
        throw UsageError(std::string(who) + ": state and factorization use different grids");
    }
    if (std::abs(f.dt() - dt) > 1e-14 * std::max(std::abs(dt), std::abs(f.dt()))) {
        std::ostringstream msg;
        msg.precision(17);
        msg << who << ": dt = " << dt << " but the factorization was built for dt = " << f.dt();
        throw UsageError(msg.str());
    }
}

void check_finite(const GridFunction& u, const char* who)
{
    if (!u.all_finite()) {
        throw DivergenceError(std::string(who) + ": non-finite values in the new state", 0, 0.0);
    }
}

StepResult implicit_step(GridFunction w, const ImplicitFactorization& f, const char* who)
{
    check_finite(w, who);
    SolveResult s = f.solve_with_residual(w);
    check_finite(s.u, who);
    return StepResult{std::move(s.u), std::move(w), s.backward_error};
}

} // namespace

StepResult uk_step_detailed(const GridFunction& u, const ImplicitFactorization& f, double dt)
{
    check_factorization(u, f, dt, "uk_step");
    return implicit_step(burgers_substep(u, dt), f, "uk_step");
}

GridFunction uk_step(const GridFunction& u, const ImplicitFactorization& f, double dt)
{
    return uk_step_detailed(u, f, dt).u;
}

StepResult jmo_step_detailed(const GridFunction& u, const ImplicitFactorization& f, double dt)
{
    check_factorization(u, f, dt, "jmo_step");
    return implicit_step(jmo_explicit_part(u, dt), f, "jmo_step");
}

GridFunction jmo_step(const GridFunction& u, const ImplicitFactorization& f, double dt)
{
    return jmo_step_detailed(u, f, dt).u;
}

GridFunction semidiscrete_nonlinear(const GridFunction& u)
{
    const std::size_t n = u.size();
    const double inv2dx = 0.5 / u.grid().dx();
    GridFunction out(u.grid());
    for (std::size_t j = 0; j < n; ++j) {
        const double up = u[j + 1 == n ? 0 : j + 1];
        const double um = u[j == 0 ? n - 1 : j - 1];
        const double d0u = (up - um) * inv2dx;
        const double d0u2 = (up * up - um * um) * inv2dx;
        out[j] = (u[j] * d0u + d0u2) / 3.0;
    }
    return out;
}

GridFunction semidiscrete_rhs(const GridFunction& u)
{
    GridFunction rhs = apply(builtin(BuiltinStencil::kawahara), u);
    rhs -= apply(builtin(BuiltinStencil::airy), u);
    rhs -= semidiscrete_nonlinear(u);
    return rhs;
}

GridFunction rk4_step(const GridFunction& u, double dt)
{
    const GridFunction k1 = semidiscrete_rhs(u);
    const GridFunction k2 = semidiscrete_rhs(u + (0.5 * dt) * k1);
    const GridFunction k3 = semidiscrete_rhs(u + (0.5 * dt) * k2);
    const GridFunction k4 = semidiscrete_rhs(u + dt * k3);
    GridFunction out = u;
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    }
    check_finite(out, "rk4_step");
    return out;
}

} // namespace kawahara
