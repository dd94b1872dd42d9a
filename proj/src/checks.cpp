#include "kawahara/checks.hpp"

#include "kawahara/diagnostics.hpp"
#include "kawahara/implicit_solver.hpp"
#include "kawahara/schemes.hpp"
#include "kawahara/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace kawahara {

namespace {

class Tally {
public:
    Tally(std::string name, double tolerance, bool upper)
        : name_(std::move(name)), tolerance_(tolerance), upper_(upper),
          worst_(upper ? 0.0 : std::numeric_limits<double>::infinity())
    {
    }

    // upper: value must stay <= tolerance; otherwise value must stay >= -tolerance
    void add(double value)
    {
        worst_ = upper_ ? std::max(worst_, value) : std::min(worst_, value);
    }

    CheckResult result() const
    {
        const bool ok = upper_ ? worst_ <= tolerance_ : worst_ >= -tolerance_;
        return {name_, worst_, tolerance_, ok && std::isfinite(worst_)};
    }

private:
    std::string name_;
    double tolerance_;
    bool upper_;
    double worst_;
};

double relative(double lhs, double rhs)
{
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

} // namespace

std::vector<CheckResult> run_property_checks(std::size_t n, std::size_t trials,
                                             std::uint64_t seed)
{
    const PeriodicGrid grid(0.0, 2.0 * std::acos(-1.0), n);
    const double dx = grid.dx();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const auto random_function = [&]() {
        GridFunction u(grid);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] = unit(rng);
        }
        return u;
    };

    const Stencil dplus = builtin(BuiltinStencil::dplus);
    const Stencil dminus = builtin(BuiltinStencil::dminus);
    const Stencil airy = builtin(BuiltinStencil::airy);
    const Stencil kaw = builtin(BuiltinStencil::kawahara);
    const Stencil lap = builtin(BuiltinStencil::laplace);

    Tally sbp("summation by parts (u, D+ v) = -(D- u, v)", 1e-12, true);
    Tally airy_form("(u, airy u) = dx/2 |laplace u|^2", 1e-12, true);
    Tally kaw_form("(u, kawahara u) = -dx/2 |airy u|^2", 1e-12, true);
    Tally skew("(u, N(u)) = 0 for the semi-discrete nonlinearity", 1e-12, true);
    Tally energy("(u, rhs(u)) = -dx/2 (|laplace u|^2 + |airy u|^2)", 1e-11, true);
    Tally positive("(v, M v) - |v|^2 >= 0", 1e-12, false);
    Tally oracle("fast solve vs dense oracle", 1e-10, true);
    Tally burgers("Burgers substep ledger", 1e-12, false);
    Tally uk("UK one-step energy ledger", 1e-10, false);

    const double dt_m = 0.01;
    const ImplicitFactorization m(grid, dt_m);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const GridFunction u = random_function();
        const GridFunction v = random_function();

        sbp.add(relative(inner_h(u, apply(dplus, v)), -inner_h(apply(dminus, u), v)));
        airy_form.add(relative(inner_h(u, apply(airy, u)), 0.5 * dx * mass(apply(lap, u))));
        kaw_form.add(relative(inner_h(u, apply(kaw, u)), -0.5 * dx * mass(apply(airy, u))));

        const GridFunction nl = semidiscrete_nonlinear(u);
        skew.add(std::abs(inner_h(u, nl)) / (norm_h(u) * norm_h(nl)));

        energy.add(relative(inner_h(u, semidiscrete_rhs(u)),
                            -0.5 * dx * (mass(apply(lap, u)) + mass(apply(airy, u)))));

        const double vv = mass(v);
        positive.add((inner_h(v, m.apply_operator(v)) - vv) / vv);

        if (trial < 10) {
            const GridFunction fast = m.solve(u);
            const GridFunction dense = dense_oracle(grid, dt_m, u);
            oracle.add((fast - dense).max_abs() / dense.max_abs());
        }

        SchemeParams params;
        params.cfl_rule = CflRule::energy;
        const double dt = max_dt(u, params);
        const ImplicitFactorization f(grid, dt);
        const StepResult step = uk_step_detailed(u, f, dt);
        const LedgerRecord rec = ledger(u, step.u, step.explicit_part, dt);
        burgers.add(rec.burgers_residual / rec.mass_in);
        uk.add(rec.residual() / rec.mass_in);
    }

    return {sbp.result(),      airy_form.result(), kaw_form.result(), skew.result(),
            energy.result(),   positive.result(),   oracle.result(),   burgers.result(),
            uk.result()};
}

} // namespace kawahara
