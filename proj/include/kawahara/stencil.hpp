#pragma once

#include "kawahara/grid.hpp"

#include <complex>
#include <cstdint>
#include <string_view>
#include <vector>

namespace kawahara {

/// Circulant difference operator:
///   (S u)_i = dx^{-p} * sum_m coeffs[m] * u_{i + offsets[m]}
///
/// Coefficients of the built-in operators are dyadic rationals, so they and
/// all their compositions are exact in double precision.
class Stencil {
public:
    Stencil(std::vector<int> offsets, std::vector<double> coeffs, int dx_power);

    static Stencil identity();

    const std::vector<int>& offsets() const noexcept { return offsets_; }
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    int dx_power() const noexcept { return dx_power_; }

    int min_offset() const noexcept { return offsets_.front(); }
    int max_offset() const noexcept { return offsets_.back(); }
    std::size_t width() const noexcept
    {
        return static_cast<std::size_t>(max_offset() - min_offset() + 1);
    }

    bool operator==(const Stencil&) const = default;

private:
    std::vector<int> offsets_;
    std::vector<double> coeffs_;
    int dx_power_;
};

enum class BuiltinStencil {
    dplus,    // D+ u_i = (u_{i+1} - u_i) / dx
    dminus,   // D- u_i = (u_i - u_{i-1}) / dx
    dzero,    // D0 u_i = (u_{i+1} - u_{i-1}) / (2 dx)
    airy,     // D- D+^2
    kawahara, // D+^3 D-^2
    laplace,  // D+ D-
};

Stencil builtin(BuiltinStencil which);

/// Lookup by name ("dplus", "dminus", "dzero", "airy", "kawahara", "laplace").
Stencil builtin(std::string_view name);

/// Stencil of s1 ∘ s2 (discrete convolution of coefficients, dx powers add).
Stencil compose(const Stencil& s1, const Stencil& s2);

GridFunction apply(const Stencil& s, const GridFunction& u);

/// Multiplier of s on the discrete mode exp(2πi k j / n), 0 <= k < n.
std::complex<double> symbol(const Stencil& s, const PeriodicGrid& grid, std::int64_t k);

} // namespace kawahara
