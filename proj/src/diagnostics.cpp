#include "kawahara/diagnostics.hpp"

#include "kawahara/stencil.hpp"

namespace kawahara {

double l2_error(const GridFunction& u, const GridFunction& reference)
{
    require_same_grid(u, reference, "l2_error");
    return norm_h(u - reference);
}

double mass(const GridFunction& u)
{
    return inner_h(u, u);
}

double hamiltonian(const GridFunction& u)
{
    const GridFunction ux = apply(builtin(BuiltinStencil::dplus), u);
    const GridFunction uxx = apply(builtin(BuiltinStencil::laplace), u);
    double acc = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        acc += u[j] * u[j] * u[j] / 3.0 - ux[j] * ux[j] - uxx[j] * uxx[j];
    }
    return u.grid().dx() * acc;
}

LedgerRecord ledger(const GridFunction& u_n, const GridFunction& u_np1, const GridFunction& w,
                    double dt)
{
    require_same_grid(u_n, u_np1, "ledger");
    require_same_grid(u_n, w, "ledger");
    const double dx = u_n.grid().dx();

    LedgerRecord rec;
    rec.mass_in = mass(u_n);
    rec.mass_out = mass(u_np1);
    rec.dissipation_airy = dt * dx * mass(apply(builtin(BuiltinStencil::airy), u_np1));
    rec.dissipation_laplace = dt * dx * mass(apply(builtin(BuiltinStencil::laplace), u_np1));
    rec.dissipation_burgers = dx * dx / 8.0 * mass(apply(builtin(BuiltinStencil::dzero), u_n));
    rec.burgers_residual = rec.mass_in - mass(w) - rec.dissipation_burgers;
    return rec;
}

} // namespace kawahara
