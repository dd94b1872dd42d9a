#include "kawahara/solutions.hpp"

#include "kawahara/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace kawahara {

double sech4(double y)
{
    if (std::abs(y) > 350.0) {
        return 0.0;
    }
    const double s = 2.0 / (std::exp(y) + std::exp(-y));
    const double s2 = s * s;
    return s2 * s2;
}

double exact_soliton(double x, double t, double c)
{
    return soliton_amplitude * sech4(soliton_wavenumber * (x - soliton_speed * t - c));
}

namespace {

// Polynomials in T = tanh(y); sech^4(y) = (1 - T^2)^2 and d/dy p(T) = p'(T) (1 - T^2).
constexpr std::size_t max_degree = 10;
using Poly = std::array<double, max_degree + 1>;

Poly differentiate(const Poly& p)
{
    Poly dp{};
    for (std::size_t k = 1; k <= max_degree; ++k) {
        dp[k - 1] += static_cast<double>(k) * p[k];
    }
    Poly out{};
    for (std::size_t k = 0; k <= max_degree; ++k) {
        if (dp[k] == 0.0) {
            continue;
        }
        out[k] += dp[k];
        if (k + 2 <= max_degree) {
            out[k + 2] -= dp[k];
        }
    }
    return out;
}

double evaluate(const Poly& p, double t)
{
    double acc = 0.0;
    for (std::size_t k = max_degree + 1; k-- > 0;) {
        acc = acc * t + p[k];
    }
    return acc;
}

} // namespace

double residual_check(double x, double t, double c, double speed)
{
    const double k = soliton_wavenumber;
    const double y = k * (x - speed * t - c);
    const double tanh_y = std::tanh(y);

    Poly p{};
    p[0] = 1.0;
    p[2] = -2.0;
    p[4] = 1.0;
    std::array<double, 6> d{};
    Poly q = p;
    d[0] = evaluate(q, tanh_y);
    for (std::size_t m = 1; m < d.size(); ++m) {
        q = differentiate(q);
        d[m] = evaluate(q, tanh_y);
    }
    const double a = soliton_amplitude;
    const double u = a * d[0];
    const double u_x = a * k * d[1];
    const double u_t = -speed * u_x;
    const double u_xxx = a * k * k * k * d[3];
    const double u_xxxxx = a * k * k * k * k * k * d[5];
    return u_t + u * u_x + u_xxx - u_xxxxx;
}

std::string to_string(InitialCondition::Id id)
{
    switch (id) {
    case InitialCondition::Id::one_soliton:
        return "one_soliton";
    case InitialCondition::Id::two_soliton:
        return "two_soliton";
    case InitialCondition::Id::custom:
        return "custom";
    }
    return "unknown";
}

InitialCondition::Id initial_condition_id(const std::string& name)
{
    if (name == "one_soliton") {
        return InitialCondition::Id::one_soliton;
    }
    if (name == "two_soliton") {
        return InitialCondition::Id::two_soliton;
    }
    if (name == "custom") {
        return InitialCondition::Id::custom;
    }
    throw ConfigError("ic.id: unknown initial condition '" + name +
                      "' (valid: one_soliton, two_soliton, custom)");
}

std::function<double(double)> initial_profile(const InitialCondition& ic)
{
    switch (ic.id) {
    case InitialCondition::Id::one_soliton: {
        const double c = ic.c;
        return [c](double x) { return exact_soliton(x, 0.0, c); };
    }
    case InitialCondition::Id::two_soliton:
        return [](double x) {
            const double k = soliton_wavenumber;
            return soliton_amplitude * (sech4(k * (x - 20.0)) + 0.25 * sech4(2.0 * k * (x - 60.0)));
        };
    case InitialCondition::Id::custom:
        break;
    }
    if (ic.function) {
        return ic.function;
    }
    switch (ic.profile) {
    case InitialCondition::Profile::constant: {
        const double a = ic.amplitude;
        return [a](double) { return a; };
    }
    case InitialCondition::Profile::sine: {
        const double a = ic.amplitude;
        const double w = 2.0 * std::numbers::pi * ic.mode / ic.period;
        const double x0 = ic.center;
        return [a, w, x0](double x) { return a * std::sin(w * (x - x0)); };
    }
    case InitialCondition::Profile::gaussian: {
        const double a = ic.amplitude;
        const double x0 = ic.center;
        const double s = ic.width;
        return [a, x0, s](double x) {
            const double z = (x - x0) / s;
            return a * std::exp(-0.5 * z * z);
        };
    }
    }
    throw UsageError("initial_profile: unknown custom profile");
}

std::optional<std::function<double(double, double)>> exact_solution(const InitialCondition& ic)
{
    if (ic.id == InitialCondition::Id::one_soliton) {
        const double c = ic.c;
        return [c](double x, double t) { return exact_soliton(x, t, c); };
    }
    if (ic.id == InitialCondition::Id::custom && !ic.function &&
        ic.profile == InitialCondition::Profile::constant) {
        const double a = ic.amplitude;
        return [a](double, double) { return a; };
    }
    return std::nullopt;
}

} // namespace kawahara
