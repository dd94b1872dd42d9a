#include "kawahara/stencil.hpp"

#include "kawahara/errors.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace kawahara {

Stencil::Stencil(std::vector<int> offsets, std::vector<double> coeffs, int dx_power)
    : offsets_(std::move(offsets)), coeffs_(std::move(coeffs)), dx_power_(dx_power)
{
    if (offsets_.empty() || offsets_.size() != coeffs_.size()) {
        throw UsageError("stencil: offsets and coefficients must be non-empty and equally long");
    }
    if (dx_power_ < 0) {
        throw UsageError("stencil: dx power must be nonnegative");
    }
    double sum = 0.0;
    for (std::size_t m = 0; m < offsets_.size(); ++m) {
        if (m > 0 && offsets_[m] <= offsets_[m - 1]) {
            throw UsageError("stencil: offsets must be strictly increasing");
        }
        if (coeffs_[m] == 0.0 || !std::isfinite(coeffs_[m])) {
            throw UsageError("stencil: coefficients must be finite and nonzero");
        }
        sum += coeffs_[m];
    }
    if (dx_power_ >= 1 && sum != 0.0) {
        throw UsageError("stencil: a difference operator must annihilate constants");
    }
}

Stencil Stencil::identity()
{
    return Stencil({0}, {1.0}, 0);
}

Stencil builtin(BuiltinStencil which)
{
    switch (which) {
    case BuiltinStencil::dplus:
        return Stencil({0, 1}, {-1.0, 1.0}, 1);
    case BuiltinStencil::dminus:
        return Stencil({-1, 0}, {-1.0, 1.0}, 1);
    case BuiltinStencil::dzero:
        return Stencil({-1, 1}, {-0.5, 0.5}, 1);
    case BuiltinStencil::airy:
        return Stencil({-1, 0, 1, 2}, {-1.0, 3.0, -3.0, 1.0}, 3);
    case BuiltinStencil::kawahara:
        return Stencil({-2, -1, 0, 1, 2, 3}, {-1.0, 5.0, -10.0, 10.0, -5.0, 1.0}, 5);
    case BuiltinStencil::laplace:
        return Stencil({-1, 0, 1}, {1.0, -2.0, 1.0}, 2);
    }
    throw UsageError("stencil: unknown builtin");
}

Stencil builtin(std::string_view name)
{
    static const std::map<std::string_view, BuiltinStencil> table = {
        {"dplus", BuiltinStencil::dplus},   {"dminus", BuiltinStencil::dminus},
        {"dzero", BuiltinStencil::dzero},   {"airy", BuiltinStencil::airy},
        {"kawahara", BuiltinStencil::kawahara}, {"laplace", BuiltinStencil::laplace},
    };
    const auto it = table.find(name);
    if (it == table.end()) {
        std::ostringstream msg;
        msg << "stencil: unknown builtin '" << name
            << "' (valid: dplus, dminus, dzero, airy, kawahara, laplace)";
        throw UsageError(msg.str());
    }
    return builtin(it->second);
}

Stencil compose(const Stencil& s1, const Stencil& s2)
{
    std::map<int, double> acc;
    for (std::size_t i = 0; i < s1.offsets().size(); ++i) {
        for (std::size_t j = 0; j < s2.offsets().size(); ++j) {
            acc[s1.offsets()[i] + s2.offsets()[j]] += s1.coeffs()[i] * s2.coeffs()[j];
        }
    }
    std::vector<int> offsets;
    std::vector<double> coeffs;
    for (const auto& [offset, c] : acc) {
        if (c != 0.0) {
            offsets.push_back(offset);
            coeffs.push_back(c);
        }
    }
    if (offsets.empty()) {
        throw UsageError("stencil: composition annihilates every grid function");
    }
    return Stencil(std::move(offsets), std::move(coeffs), s1.dx_power() + s2.dx_power());
}

GridFunction apply(const Stencil& s, const GridFunction& u)
{
    const auto& grid = u.grid();
    const std::size_t n = grid.n();
    if (n < s.width()) {
        std::ostringstream msg;
        msg << "stencil: grid of " << n << " nodes is narrower than the stencil (" << s.width()
            << ")";
        throw UsageError(msg.str());
    }
    const double scale = 1.0 / std::pow(grid.dx(), s.dx_power());
    const auto in = u.values();
    const auto& offsets = s.offsets();
    const auto& coeffs = s.coeffs();
    const auto sn = static_cast<std::ptrdiff_t>(n);

    GridFunction out(grid);
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        double acc = 0.0;
        for (std::size_t m = 0; m < offsets.size(); ++m) {
            std::ptrdiff_t j = i + offsets[m];
            if (j < 0) {
                j += sn;
            } else if (j >= sn) {
                j -= sn;
            }
            acc += coeffs[m] * in[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = scale * acc;
    }
    return out;
}

std::complex<double> symbol(const Stencil& s, const PeriodicGrid& grid, std::int64_t k)
{
    const auto n = static_cast<std::int64_t>(grid.n());
    if (k < 0 || k >= n) {
        std::ostringstream msg;
        msg << "stencil: mode " << k << " outside [0, " << n << ")";
        throw UsageError(msg.str());
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t m = 0; m < s.offsets().size(); ++m) {
        // reduce k*offset mod n first so the phase stays accurate for large n
        std::int64_t km = (k * s.offsets()[m]) % n;
        const double phase = 2.0 * std::numbers::pi * static_cast<double>(km) / static_cast<double>(n);
        acc += s.coeffs()[m] * std::polar(1.0, phase);
    }
    return acc / std::pow(grid.dx(), s.dx_power());
}

} // namespace kawahara
