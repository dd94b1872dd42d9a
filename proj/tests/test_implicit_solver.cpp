#include "doctest.h"

#include "kawahara/errors.hpp"
#include "kawahara/implicit_solver.hpp"
#include "kawahara/stencil.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <thread>

using namespace kawahara;

namespace {

GridFunction random_function(const PeriodicGrid& g, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    GridFunction u(g);
    for (std::size_t i = 0; i < g.n(); ++i) {
        u[i] = unit(rng);
    }
    return u;
}

// M u assembled from the stencil module, independent of implicit_operator_row.
GridFunction apply_m(const GridFunction& u, double dt)
{
    GridFunction out = u;
    out += dt * apply(builtin(BuiltinStencil::airy), u);
    out -= dt * apply(builtin(BuiltinStencil::kawahara), u);
    return out;
}

double max_rel(const GridFunction& a, const GridFunction& b)
{
    return (a - b).max_abs() / std::max(a.max_abs(), b.max_abs());
}

// Bound on the condition number of M: its symbols have modulus in
// [1, 1 + dt (8/dx^3 + 32/dx^5)]. Any backward-stable solve, the dense
// oracle included, is only accurate to a small multiple of kappa * eps.
double forward_tolerance(const PeriodicGrid& g, double dt)
{
    const double kappa = 1.0 + dt * (8.0 / std::pow(g.dx(), 3) + 32.0 / std::pow(g.dx(), 5));
    return 1e-10 + 16.0 * kappa * std::numeric_limits<double>::epsilon();
}

} // namespace

TEST_SUITE("implicit_solver")
{
    TEST_CASE("dt = 0 gives the identity")
    {
        std::mt19937_64 rng(1);
        const PeriodicGrid g = make_grid(0.0, 1.0, 32);
        const GridFunction rhs = random_function(g, rng);
        const ImplicitFactorization f(g, 0.0);
        CHECK(max_rel(f.solve(rhs), rhs) == 0.0);
        CHECK(max_rel(dense_oracle(g, 0.0, rhs), rhs) == 0.0);
    }

    TEST_CASE("symbol of M at mode 0 is 1")
    {
        const PeriodicGrid g = make_grid(0.0, 1.0, 16);
        for (double dt : {1e-6, 1e-3, 0.1}) {
            const auto m = 1.0 + dt * (symbol(builtin(BuiltinStencil::airy), g, 0) -
                                       symbol(builtin(BuiltinStencil::kawahara), g, 0));
            CHECK(m.real() == 1.0);
            CHECK(m.imag() == 0.0);
        }
    }

    TEST_CASE("row 0 of M matches dense assembly")
    {
        const PeriodicGrid g = make_grid(0.0, 1.0, 32);
        const double dt = 0.01;
        const double dx = g.dx();
        const auto row = implicit_operator_row(dx, dt);
        // column j of row 0 is (M e_j)_0
        for (int o = -2; o <= 3; ++o) {
            GridFunction e(g);
            e[static_cast<std::size_t>((o + 32) % 32)] = 1.0;
            const double dense = apply_m(e, dt)[0];
            CHECK(row[static_cast<std::size_t>(o + 2)] == doctest::Approx(dense).epsilon(1e-15));
        }
        // by hand: 1 + dt (3/dx^3 + 10/dx^5) on the diagonal
        CHECK(row[2] == doctest::Approx(1.0 + dt * (3.0 / std::pow(dx, 3) + 10.0 / std::pow(dx, 5)))
                            .epsilon(1e-15));
        const ImplicitFactorization f(g, dt);
        std::mt19937_64 rng(5);
        const GridFunction u = random_function(g, rng);
        CHECK(max_rel(f.apply_operator(u), apply_m(u, dt)) <= 1e-14);
    }

    TEST_CASE("constants and zero")
    {
        const PeriodicGrid g = make_grid(-40.0, 40.0, 4000);
        const ImplicitFactorization f(g, 0.0241);
        const GridFunction c(g, 0.37);
        const GridFunction u = f.solve(c);
        CHECK((u - c).max_abs() <= forward_tolerance(g, 0.0241) * 0.37);
        CHECK(f.solve(GridFunction(g)).max_abs() == 0.0);
        const SolveResult r = f.solve_with_residual(GridFunction(g));
        CHECK(r.relative_residual == 0.0);
        CHECK(r.backward_error == 0.0);
    }

    TEST_CASE("wrap correction has rank 5")
    {
        const ImplicitFactorization f(make_grid(0.0, 1.0, 64), 1e-3);
        CHECK(f.wrap_rank() == 5);
    }

    TEST_CASE("solve matches the dense oracle")
    {
        std::mt19937_64 rng(2);
        for (std::int64_t n : {8, 16, 32, 64, 128, 256}) {
            for (double dt : {1e-5, 1e-3, 0.01}) {
                const PeriodicGrid g = make_grid(0.0, 1.0, n);
                const ImplicitFactorization f(g, dt);
                for (int trial = 0; trial < 5; ++trial) {
                    const GridFunction rhs = random_function(g, rng);
                    CHECK(max_rel(f.solve(rhs), dense_oracle(g, dt, rhs)) <= forward_tolerance(g, dt));
                }
            }
        }
    }

    TEST_CASE("dense oracle residual")
    {
        std::mt19937_64 rng(3);
        const PeriodicGrid g = make_grid(-40.0, 40.0, 64);
        const double dt = 0.75 * g.dx() / (105.0 / 169.0);
        for (int trial = 0; trial < 20; ++trial) {
            const GridFunction rhs = random_function(g, rng);
            const GridFunction u = dense_oracle(g, dt, rhs);
            CHECK((apply_m(u, dt) - rhs).max_abs() <= 1e-12 * rhs.max_abs());
        }
    }

    TEST_CASE("dense oracle guard")
    {
        const PeriodicGrid g = make_grid(0.0, 1.0, 1025);
        CHECK_THROWS_AS(dense_oracle(g, 0.1, GridFunction(g)), UsageError);
    }

    TEST_CASE("positivity of the symmetric part")
    {
        std::mt19937_64 rng(4);
        for (std::int64_t n : {16, 64, 256}) {
            const PeriodicGrid g = make_grid(0.0, 1.0, n);
            const ImplicitFactorization f(g, 1e-4);
            for (int trial = 0; trial < 100; ++trial) {
                const GridFunction u = random_function(g, rng);
                const double uu = inner_h(u, u);
                CHECK(inner_h(u, f.apply_operator(u)) >= uu - 1e-12 * uu);
            }
        }
    }

    TEST_CASE("symbol lower bound")
    {
        const Stencil airy = builtin(BuiltinStencil::airy);
        const Stencil kaw = builtin(BuiltinStencil::kawahara);
        for (std::int64_t n : {8, 16, 64, 256}) {
            const PeriodicGrid g = make_grid(-40.0, 40.0, n);
            for (double dt : {1e-3, 0.1, 10.0}) {
                for (std::int64_t k = 0; k < n; ++k) {
                    const auto m = 1.0 + dt * (symbol(airy, g, k) - symbol(kaw, g, k));
                    CHECK(m.real() >= 1.0 - 1e-12 * std::abs(m));
                }
            }
        }
    }

    TEST_CASE("solve inverts M on random input")
    {
        std::mt19937_64 rng(6);
        const PeriodicGrid g = make_grid(-40.0, 40.0, 4000);
        const double dt = 0.0241;
        const ImplicitFactorization f(g, dt);
        for (int trial = 0; trial < 10; ++trial) {
            const GridFunction u = random_function(g, rng);
            const GridFunction back = f.solve(f.apply_operator(u));
            CHECK(max_rel(back, u) <= forward_tolerance(g, dt));
            const SolveResult r = f.solve_with_residual(random_function(g, rng));
            CHECK(r.backward_error <= 64.0 * std::numeric_limits<double>::epsilon());
        }
    }

    TEST_CASE("tolerance failure is a solver error carrying the residual")
    {
        std::mt19937_64 rng(7);
        const PeriodicGrid g = make_grid(0.0, 1.0, 64);
        const ImplicitFactorization f(g, 0.01, 1e-300);
        try {
            f.solve(random_function(g, rng));
            FAIL("expected a SolverError");
        } catch (const SolverError& e) {
            CHECK(e.residual() > 1e-300);
        }
    }

    TEST_CASE("construction rejects invalid dt")
    {
        const PeriodicGrid g = make_grid(0.0, 1.0, 16);
        CHECK_THROWS_AS(ImplicitFactorization(g, -1.0), UsageError);
        CHECK_THROWS_AS(ImplicitFactorization(g, NAN), UsageError);
        const ImplicitFactorization f(g, 0.1);
        CHECK_THROWS_AS(f.solve(GridFunction(make_grid(0.0, 2.0, 16))), UsageError);
    }

    TEST_CASE("concurrent solves agree")
    {
        std::mt19937_64 rng(8);
        const PeriodicGrid g = make_grid(0.0, 1.0, 512);
        const ImplicitFactorization f(g, 1e-6);
        std::vector<GridFunction> rhs;
        std::vector<GridFunction> serial;
        for (int k = 0; k < 4; ++k) {
            rhs.push_back(random_function(g, rng));
            serial.push_back(f.solve(rhs.back()));
        }
        std::vector<std::optional<GridFunction>> parallel(4);
        std::vector<std::thread> pool;
        for (int k = 0; k < 4; ++k) {
            const auto slot = static_cast<std::size_t>(k);
            pool.emplace_back([&, slot] { parallel[slot] = f.solve(rhs[slot]); });
        }
        for (auto& t : pool) {
            t.join();
        }
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK((*parallel[k] - serial[k]).max_abs() == 0.0);
        }
    }

    TEST_CASE("solve cost is linear in n")
    {
        const auto seconds_per_solve = [](std::int64_t n) {
            std::mt19937_64 rng(9);
            const PeriodicGrid g = make_grid(-40.0, 40.0, n);
            const ImplicitFactorization f(g, 0.01);
            const GridFunction rhs = random_function(g, rng);
            double best = 1e300;
            for (int rep = 0; rep < 7; ++rep) {
                const auto t0 = std::chrono::steady_clock::now();
                for (int k = 0; k < 4; ++k) {
                    const GridFunction u = f.solve(rhs);
                    (void)u;
                }
                const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
                best = std::min(best, elapsed.count());
            }
            return best;
        };
        const double small = seconds_per_solve(1 << 17);
        const double large = seconds_per_solve(1 << 18);
        MESSAGE("solve time ratio for doubled n: " << large / small);
        CHECK(large / small <= 2.5);
    }
}
