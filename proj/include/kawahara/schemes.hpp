#pragma once

#include "kawahara/grid.hpp"
#include "kawahara/implicit_solver.hpp"

#include <cstddef>
#include <optional>
#include <string>

namespace kawahara {

enum class SchemeKind {
    uk,               // averaged Burgers substep + implicit dispersion
    jmo,              // upwind D-(u^2)/2 + the same implicit dispersion
    semidiscrete_rk4, // classical RK4 on the semi-discrete system (small n only)
};

enum class DtMode { fixed_from_initial, adaptive, override_dt };

/// How the CFL number maps to a time step.
enum class CflRule {
    /// dt = cfl * dx / max|u|, i.e. lambda * max|u| = cfl with lambda = dt/dx.
    courant,
    /// dt = cfl * s* dx^{3/2} / ||u||_h, the largest step for which
    /// (dt/dx^{3/2}) ||u|| (1 + 24 (dt/dx^{3/2}) ||u||) <= 3/2.
    energy,
};

std::string to_string(SchemeKind kind);
std::string to_string(DtMode mode);
std::string to_string(CflRule rule);
SchemeKind scheme_kind(const std::string& name);
DtMode dt_mode(const std::string& name);
CflRule cfl_rule(const std::string& name);

struct SchemeParams {
    SchemeKind kind = SchemeKind::uk;
    double cfl_fraction = 0.75;
    DtMode dt_mode = DtMode::fixed_from_initial;
    std::optional<double> dt_override;
    bool enforce_secondary_cfl = false;
    CflRule cfl_rule = CflRule::courant;
    /// Step used when the data put no bound on dt (u == 0). Defaults to dx.
    std::optional<double> dt_cap;

    /// Throws ConfigError on an inconsistent combination.
    void validate() const;
};

struct StepDiagnostics {
    std::size_t step = 0;
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double ledger_residual = 0.0;
    double hamiltonian = 0.0;
    double max_abs = 0.0;
    double solver_residual = 0.0;
};

/// s* = (sqrt(145) - 1) / 48, positive root of 24 s^2 + s - 3/2.
double energy_cfl_root();

/// +inf when u == 0.
double energy_max_dt(const GridFunction& u, double cfl_fraction);
double courant_max_dt(const GridFunction& u, double cfl_fraction);

/// Largest dt = lambda dx with
///   lambda^2 (4 max|u|^2 + 2 max|u_prev|^2) + lambda max|u| / 12 <= 1/16.
double secondary_max_dt(const GridFunction& u, const GridFunction& u_prev);

/// Explicit RK4 ceiling cfl * 2.5 / rho with rho = 8/dx^3 + 32/dx^5.
double rk4_max_dt(const PeriodicGrid& grid, double cfl_fraction);

/// Step chosen by the controller for state u (u_prev defaults to u).
double max_dt(const GridFunction& u, const SchemeParams& params,
              const GridFunction* u_prev = nullptr);

/// w = ubar - dt ubar D0 u, ubar_j = (u_{j+1} + u_{j-1}) / 2.
GridFunction burgers_substep(const GridFunction& u, double dt);

/// w = u - dt/2 D-(u^2).
GridFunction jmo_explicit_part(const GridFunction& u, double dt);

struct StepResult {
    GridFunction u;
    /// Right-hand side handed to the implicit solve.
    GridFunction explicit_part;
    double solver_residual = 0.0;
};

StepResult uk_step_detailed(const GridFunction& u, const ImplicitFactorization& f, double dt);
GridFunction uk_step(const GridFunction& u, const ImplicitFactorization& f, double dt);

StepResult jmo_step_detailed(const GridFunction& u, const ImplicitFactorization& f, double dt);
GridFunction jmo_step(const GridFunction& u, const ImplicitFactorization& f, double dt);

/// (1/3) [u D0 u + D0 (u^2)]
GridFunction semidiscrete_nonlinear(const GridFunction& u);

/// -(1/3)[u D0 u + D0 u^2] - D- D+^2 u + D+^3 D-^2 u
GridFunction semidiscrete_rhs(const GridFunction& u);

GridFunction rk4_step(const GridFunction& u, double dt);

} // namespace kawahara
