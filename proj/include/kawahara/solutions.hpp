#pragma once

#include <functional>
#include <optional>
#include <string>

namespace kawahara {

/// Travelling sech^4 wave of u_t = -u u_x - u_xxx + u_xxxxx:
///   u(x,t) = A sech^4((x - s t - c) / (2 sqrt 13)),  A = 105/169, s = 36/169.
inline constexpr double soliton_amplitude = 105.0 / 169.0;
inline constexpr double soliton_speed = 36.0 / 169.0;
/// 1 / (2 sqrt 13)
inline constexpr double soliton_wavenumber = 0.13867504905630729;

/// sech^4(y) with a cutoff to zero for |y| > 350.
double sech4(double y);

double exact_soliton(double x, double t, double c);

/// u_t + u u_x + u_xxx - u_xxxxx for the travelling wave with the given speed,
/// evaluated from closed-form derivatives. Zero (to round-off) for the true
/// speed 36/169; any other speed leaves a visible residual.
double residual_check(double x, double t, double c, double speed = soliton_speed);

struct InitialCondition {
    enum class Id { one_soliton, two_soliton, custom };
    enum class Profile { constant, sine, gaussian };

    Id id = Id::one_soliton;
    double c = 0.0;  // phase center of the one-soliton

    // custom profiles
    Profile profile = Profile::constant;
    double amplitude = 0.0;
    double center = 0.0;
    double width = 1.0;
    int mode = 1;         // sine: number of periods over the domain
    double period = 1.0;  // sine: filled in from the domain length

    /// Arbitrary callable; when set it overrides `profile`.
    std::function<double(double)> function;
};

std::string to_string(InitialCondition::Id id);
InitialCondition::Id initial_condition_id(const std::string& name);

std::function<double(double)> initial_profile(const InitialCondition& ic);

/// Exact solution u(x, t) when one is known: the travelling soliton, or a
/// constant state. Empty otherwise.
std::optional<std::function<double(double, double)>> exact_solution(const InitialCondition& ic);

} // namespace kawahara
