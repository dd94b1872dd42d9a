#pragma once

#include "kawahara/grid.hpp"

namespace kawahara {

/// norm_h(u - reference)
double l2_error(const GridFunction& u, const GridFunction& reference);

/// Discrete analogue of the conserved integral of u^2: ||u||_h^2.
double mass(const GridFunction& u);

/// dx * sum_j [ u_j^3 / 3 - (D+ u)_j^2 - (D+ D- u)_j^2 ].
/// Monitored only: the fully discrete schemes do not conserve it.
double hamiltonian(const GridFunction& u);

/// Terms of the one-step energy estimate
///   ||u^{n+1}||^2 + dt dx (||D- D+^2 u^{n+1}||^2 + ||D+ D- u^{n+1}||^2)
///       + dx^2/8 ||D0 u^n||^2  <=  ||u^n||^2.
/// Positive residual means slack in the inequality.
struct LedgerRecord {
    double mass_in = 0.0;
    double mass_out = 0.0;
    double dissipation_airy = 0.0;
    double dissipation_laplace = 0.0;
    double dissipation_burgers = 0.0;
    /// ||u^n||^2 - ||w||^2 - dx^2/8 ||D0 u^n||^2 for the explicit substep w.
    double burgers_residual = 0.0;

    double residual() const noexcept
    {
        return mass_in - mass_out -
               (dissipation_airy + dissipation_laplace + dissipation_burgers);
    }
};

LedgerRecord ledger(const GridFunction& u_n, const GridFunction& u_np1, const GridFunction& w,
                    double dt);

} // namespace kawahara
