#include "doctest.h"

#include "kawahara/errors.hpp"
#include "kawahara/grid.hpp"
#include "kawahara/solutions.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace kawahara;

namespace {

// Truncated Taylor series c_0 + c_1 h + ... + c_5 h^5 in extended precision.
// Forward-mode oracle for the soliton derivatives, independent of the
// tanh-polynomial recurrence in the library.
struct Jet {
    static constexpr std::size_t order = 5;
    std::array<long double, order + 1> c{};
};

Jet operator+(const Jet& a, const Jet& b)
{
    Jet r;
    for (std::size_t k = 0; k <= Jet::order; ++k) {
        r.c[k] = a.c[k] + b.c[k];
    }
    return r;
}

Jet operator*(const Jet& a, const Jet& b)
{
    Jet r;
    for (std::size_t k = 0; k <= Jet::order; ++k) {
        for (std::size_t j = 0; j <= k; ++j) {
            r.c[k] += a.c[j] * b.c[k - j];
        }
    }
    return r;
}

Jet scale(long double s, const Jet& a)
{
    Jet r;
    for (std::size_t k = 0; k <= Jet::order; ++k) {
        r.c[k] = s * a.c[k];
    }
    return r;
}

Jet exp(const Jet& a)
{
    Jet r;
    r.c[0] = std::exp(a.c[0]);
    for (std::size_t k = 1; k <= Jet::order; ++k) {
        long double acc = 0.0L;
        for (std::size_t j = 1; j <= k; ++j) {
            acc += static_cast<long double>(j) * a.c[j] * r.c[k - j];
        }
        r.c[k] = acc / static_cast<long double>(k);
    }
    return r;
}

Jet reciprocal(const Jet& a)
{
    Jet r;
    r.c[0] = 1.0L / a.c[0];
    for (std::size_t k = 1; k <= Jet::order; ++k) {
        long double acc = 0.0L;
        for (std::size_t j = 1; j <= k; ++j) {
            acc += a.c[j] * r.c[k - j];
        }
        r.c[k] = -acc / a.c[0];
    }
    return r;
}

// u_t + u u_x + u_xxx - u_xxxxx of A sech^4(k (x - s t - c)), using u_t = -s u_x.
long double jet_residual(double x, double t, double c, double speed)
{
    const long double k = 1.0L / (2.0L * std::sqrt(13.0L));
    const long double a = 105.0L / 169.0L;
    Jet xi; // x + h
    xi.c[0] = k * (static_cast<long double>(x) - static_cast<long double>(speed) * t - c);
    xi.c[1] = k;
    Jet minus_xi = scale(-1.0L, xi);
    const Jet sech = scale(2.0L, reciprocal(exp(xi) + exp(minus_xi)));
    const Jet s2 = sech * sech;
    const Jet u = scale(a, s2 * s2);
    // u^(m) = m! c_m
    const long double u0 = u.c[0];
    const long double u1 = u.c[1];
    const long double u3 = 6.0L * u.c[3];
    const long double u5 = 120.0L * u.c[5];
    return -static_cast<long double>(speed) * u1 + u0 * u1 + u3 - u5;
}

} // namespace

TEST_SUITE("solutions")
{
    TEST_CASE("exact_soliton values")
    {
        for (double c : {0.0, -3.5, 12.0}) {
            CHECK(exact_soliton(c, 0.0, c) == doctest::Approx(105.0 / 169.0).epsilon(1e-15));
            CHECK(exact_soliton(c, 0.0, c) == doctest::Approx(0.6213018).epsilon(1e-7));
            // peak at t = 10 sits at c + 360/169
            const double peak = c + 360.0 / 169.0;
            CHECK(360.0 / 169.0 == doctest::Approx(2.130178).epsilon(1e-6));
            CHECK(exact_soliton(peak, 10.0, c) == doctest::Approx(105.0 / 169.0).epsilon(1e-15));
            CHECK(exact_soliton(peak + 0.01, 10.0, c) < exact_soliton(peak, 10.0, c));
            CHECK(exact_soliton(peak - 0.01, 10.0, c) < exact_soliton(peak, 10.0, c));
            for (double y : {0.3, 2.0, 17.0, 100.0}) {
                CHECK(exact_soliton(c + y, 0.0, c) == exact_soliton(c - y, 0.0, c));
                CHECK(exact_soliton(c + y, 0.0, c) > 0.0);
            }
        }
    }

    TEST_CASE("the travelling wave is a pure translation")
    {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> ux(-40.0, 40.0);
        std::uniform_real_distribution<double> ut(0.0, 50.0);
        for (int trial = 0; trial < 100; ++trial) {
            const double x = ux(rng);
            const double t = ut(rng);
            CHECK(exact_soliton(x, t, 1.0) ==
                  doctest::Approx(exact_soliton(x, 0.0, 1.0 + 36.0 * t / 169.0)).epsilon(1e-12));
        }
    }

    TEST_CASE("sech4 overflow guard")
    {
        CHECK(sech4(351.0) == 0.0);
        CHECK(sech4(-351.0) == 0.0);
        CHECK(sech4(349.0) >= 0.0);
        CHECK(std::isfinite(sech4(349.0)));
        CHECK(sech4(0.0) == 1.0);
    }

    TEST_CASE("residual_check examples")
    {
        for (double c : {0.0, 4.0}) {
            CHECK(std::abs(residual_check(c, 0.0, c)) <= 1e-10);
            CHECK(std::abs(residual_check(c + 5.0, 7.0, c)) <= 1e-10);
        }
    }

    TEST_CASE("residual_check agrees with the jet oracle")
    {
        std::mt19937_64 rng(32);
        std::uniform_real_distribution<double> ux(-40.0, 40.0);
        std::uniform_real_distribution<double> ut(0.0, 20.0);
        for (int trial = 0; trial < 100; ++trial) {
            const double x = ux(rng);
            const double t = ut(rng);
            const double c = ux(rng) / 4.0;
            const long double oracle = jet_residual(x, t, c, soliton_speed);
            CHECK(std::abs(oracle) <= 1e-12L);
            CHECK(std::abs(residual_check(x, t, c)) <= 1e-10);
            for (double speed : {0.25, 0.1}) {
                const long double o = jet_residual(x, t, c, speed);
                const double r = residual_check(x, t, c, speed);
                CHECK(std::abs(static_cast<long double>(r) - o) <=
                      1e-12L + 1e-9L * std::abs(o));
            }
        }
    }

    TEST_CASE("a wrong speed leaves a visible residual")
    {
        double worst = 0.0;
        for (int i = -40; i <= 40; ++i) {
            worst = std::max(worst, std::abs(residual_check(0.5 * i, 1.0, 0.0, 0.25)));
        }
        CHECK(worst > 1e-3);
    }

    TEST_CASE("initial profiles")
    {
        InitialCondition one;
        CHECK(initial_profile(one)(0.0) == doctest::Approx(105.0 / 169.0).epsilon(1e-15));

        InitialCondition two;
        two.id = InitialCondition::Id::two_soliton;
        const auto f = initial_profile(two);
        const double a = 105.0 / 169.0;
        const double k = 1.0 / (2.0 * std::sqrt(13.0));
        const auto direct_sech4 = [](double y) { return std::pow(1.0 / std::cosh(y), 4); };
        CHECK(f(20.0) == doctest::Approx(a + a / 4.0 * direct_sech4(40.0 / std::sqrt(13.0))).epsilon(1e-14));
        CHECK(a / 4.0 * direct_sech4(40.0 / std::sqrt(13.0)) < 1e-9);
        CHECK(f(60.0) == doctest::Approx(a / 4.0 + a * direct_sech4(40.0 * k)).epsilon(1e-14));
        CHECK(a / 4.0 == doctest::Approx(0.1553254).epsilon(1e-7));

        InitialCondition flat;
        flat.id = InitialCondition::Id::custom;
        flat.profile = InitialCondition::Profile::constant;
        flat.amplitude = 0.4;
        CHECK(initial_profile(flat)(3.0) == 0.4);
        const auto ex = exact_solution(flat);
        REQUIRE(ex.has_value());
        CHECK((*ex)(1.0, 5.0) == 0.4);

        InitialCondition fn;
        fn.id = InitialCondition::Id::custom;
        fn.function = [](double x) { return x * x; };
        CHECK(initial_profile(fn)(3.0) == 9.0);
        CHECK_FALSE(exact_solution(fn).has_value());
        CHECK_FALSE(exact_solution(two).has_value());
        REQUIRE(exact_solution(one).has_value());
        CHECK((*exact_solution(one))(2.0, 3.0) == exact_soliton(2.0, 3.0, 0.0));
    }

    TEST_CASE("initial condition names")
    {
        CHECK(initial_condition_id("one_soliton") == InitialCondition::Id::one_soliton);
        CHECK(initial_condition_id("two_soliton") == InitialCondition::Id::two_soliton);
        CHECK(to_string(InitialCondition::Id::custom) == "custom");
        CHECK_THROWS_WITH_AS(initial_condition_id("three_soliton"), doctest::Contains("one_soliton"),
                             ConfigError);
    }

    TEST_CASE("soliton mass: grid quadrature against a Simpson oracle")
    {
        // Composite Simpson on [-40, 40] with 2e5 panels.
        const auto f2 = [](double x) {
            const double u = exact_soliton(x, 0.0, 0.0);
            return u * u;
        };
        const std::size_t m = 200000;
        const double h = 80.0 / static_cast<double>(m);
        long double acc = f2(-40.0) + f2(40.0);
        for (std::size_t i = 1; i < m; ++i) {
            acc += (i % 2 == 1 ? 4.0L : 2.0L) * f2(-40.0 + static_cast<double>(i) * h);
        }
        const double simpson = static_cast<double>(acc * h / 3.0L);
        const double closed = std::pow(105.0 / 169.0, 2) * 2.0 * std::sqrt(13.0) * 32.0 / 35.0;
        CHECK(simpson == doctest::Approx(closed).epsilon(1e-12));
        CHECK(closed == doctest::Approx(2.54499).epsilon(1e-5));

        for (std::int64_t n : {4000, 8000}) {
            const PeriodicGrid g = make_grid(-40.0, 40.0, n);
            const GridFunction u = sample(g, [](double x) { return exact_soliton(x, 0.0, 0.0); });
            CHECK(std::abs(inner_h(u, u) - simpson) <= 1e-6);
            CHECK(norm_h(u) == doctest::Approx(1.5953).epsilon(1e-4));
        }
        // the integrand's tail at the boundary is far below the tolerance
        CHECK(exact_soliton(40.0, 0.0, 0.0) < 1e-8);
        CHECK(std::pow(exact_soliton(40.0, 0.0, 0.0), 2) < 1e-12);
    }
}
