#include "kawahara/implicit_solver.hpp"

#include "kawahara/errors.hpp"
#include "kawahara/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace kawahara {

namespace detail {

BandLU::BandLU(std::size_t n, int kl, int ku)
    : n_(n),
      kl_(static_cast<std::size_t>(kl)),
      ku_(static_cast<std::size_t>(ku)),
      width_(2 * static_cast<std::size_t>(kl) + static_cast<std::size_t>(ku) + 1),
      a_(n * width_, 0.0),
      lower_(n * static_cast<std::size_t>(kl), 0.0),
      pivots_(n, 0)
{
}

void BandLU::set(std::size_t i, std::size_t j, double value)
{
    if (j + kl_ < i || j > i + ku_) {
        throw UsageError("band: entry outside the band");
    }
    at(i, j) = value;
}

void BandLU::factor()
{
    double scale = 0.0;
    for (double v : a_) {
        scale = std::max(scale, std::abs(v));
    }
    const double tiny = scale * std::numeric_limits<double>::epsilon();

    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        const std::size_t last_col = std::min(n_ - 1, k + kl_ + ku_);

        std::size_t p = k;
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            if (std::abs(at(r, k)) > std::abs(at(p, k))) {
                p = r;
            }
        }
        if (!(std::abs(at(p, k)) > tiny)) {
            std::ostringstream msg;
            msg << "band LU: numerically singular pivot at column " << k;
            throw SolverError(msg.str(), std::abs(at(p, k)));
        }
        pivots_[k] = p;
        if (p != k) {
            for (std::size_t j = k; j <= last_col; ++j) {
                std::swap(at(k, j), at(p, j));
            }
        }

        const double pivot = at(k, k);
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            const double l = at(r, k) / pivot;
            lower_[k * kl_ + (r - k - 1)] = l;
            at(r, k) = 0.0;
            if (l == 0.0) {
                continue;
            }
            for (std::size_t j = k + 1; j <= last_col; ++j) {
                at(r, j) -= l * at(k, j);
            }
        }
    }
}

void BandLU::solve_in_place(std::span<double> b) const
{
    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t p = pivots_[k];
        if (p != k) {
            std::swap(b[k], b[p]);
        }
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        for (std::size_t r = k + 1; r <= last_row; ++r) {
            b[r] -= lower_[k * kl_ + (r - k - 1)] * b[k];
        }
    }
    for (std::size_t i = n_; i-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, i + kl_ + ku_);
        double s = b[i];
        for (std::size_t j = i + 1; j <= last_col; ++j) {
            s -= at(i, j) * b[j];
        }
        b[i] = s / at(i, i);
    }
}

} // namespace detail

std::array<double, 6> implicit_operator_row(double dx, double dt)
{
    // airy: offsets -1..2, coefficients (-1, 3, -3, 1) / dx^3
    // kawahara: offsets -2..3, coefficients (-1, 5, -10, 10, -5, 1) / dx^5
    constexpr std::array<double, 6> airy{0.0, -1.0, 3.0, -3.0, 1.0, 0.0};
    constexpr std::array<double, 6> kaw{-1.0, 5.0, -10.0, 10.0, -5.0, 1.0};
    const double a3 = dt / (dx * dx * dx);
    const double a5 = dt / (dx * dx * dx * dx * dx);
    std::array<double, 6> row{};
    for (std::size_t k = 0; k < row.size(); ++k) {
        row[k] = a3 * airy[k] - a5 * kaw[k];
    }
    row[2] += 1.0;
    return row;
}

namespace {

// r x r LU with partial pivoting, row-major, in place.
void small_lu(std::vector<double>& a, std::vector<std::size_t>& piv, std::size_t r)
{
    piv.assign(r, 0);
    for (std::size_t k = 0; k < r; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < r; ++i) {
            if (std::abs(a[i * r + k]) > std::abs(a[p * r + k])) {
                p = i;
            }
        }
        if (a[p * r + k] == 0.0) {
            throw SolverError("woodbury: singular capacitance matrix", 0.0);
        }
        piv[k] = p;
        if (p != k) {
            for (std::size_t j = 0; j < r; ++j) {
                std::swap(a[k * r + j], a[p * r + j]);
            }
        }
        for (std::size_t i = k + 1; i < r; ++i) {
            const double l = a[i * r + k] / a[k * r + k];
            a[i * r + k] = l;
            for (std::size_t j = k + 1; j < r; ++j) {
                a[i * r + j] -= l * a[k * r + j];
            }
        }
    }
}

void small_solve(const std::vector<double>& lu, const std::vector<std::size_t>& piv,
                 std::size_t r, std::span<double> b)
{
    // small_lu swaps whole rows (multipliers included), so P is applied up front
    for (std::size_t k = 0; k < r; ++k) {
        if (piv[k] != k) {
            std::swap(b[k], b[piv[k]]);
        }
    }
    for (std::size_t k = 0; k < r; ++k) {
        for (std::size_t i = k + 1; i < r; ++i) {
            b[i] -= lu[i * r + k] * b[k];
        }
    }
    for (std::size_t i = r; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < r; ++j) {
            s -= lu[i * r + j] * b[j];
        }
        b[i] = s / lu[i * r + i];
    }
}

} // namespace

ImplicitFactorization::ImplicitFactorization(const PeriodicGrid& grid, double dt,
                                             double solve_tolerance)
    : grid_(grid), dt_(dt), tolerance_(solve_tolerance)
{
    if (!(dt >= 0.0) || !std::isfinite(dt)) {
        throw UsageError("factor: dt must be finite and nonnegative");
    }
    if (!(solve_tolerance > 0.0)) {
        throw UsageError("factor: solve tolerance must be positive");
    }
    const std::size_t n = grid.n();
    row_ = implicit_operator_row(grid.dx(), dt);
    norm_inf_ = 0.0;
    for (double c : row_) {
        norm_inf_ += std::abs(c);
    }

    band_ = detail::BandLU(n, -implicit_min_offset, implicit_max_offset);
    // wrap entry (i, j) -> column j of the low-rank term
    struct WrapEntry {
        std::size_t row;
        std::size_t col;
        double value;
    };
    std::vector<WrapEntry> wraps;
    const auto sn = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t i = 0; i < sn; ++i) {
        for (int o = implicit_min_offset; o <= implicit_max_offset; ++o) {
            const double v = row_[static_cast<std::size_t>(o - implicit_min_offset)];
            if (v == 0.0) {
                continue;
            }
            const std::ptrdiff_t j = i + o;
            if (j >= 0 && j < sn) {
                band_.set(static_cast<std::size_t>(i), static_cast<std::size_t>(j), v);
            } else {
                const std::ptrdiff_t jw = j < 0 ? j + sn : j - sn;
                wraps.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(jw), v});
            }
        }
    }
    band_.factor();

    for (const auto& w : wraps) {
        if (std::find(wrap_cols_.begin(), wrap_cols_.end(), w.col) == wrap_cols_.end()) {
            wrap_cols_.push_back(w.col);
        }
    }
    std::sort(wrap_cols_.begin(), wrap_cols_.end());
    const std::size_t r = wrap_cols_.size();

    z_.assign(n * r, 0.0);
    for (const auto& w : wraps) {
        const auto k = static_cast<std::size_t>(
            std::find(wrap_cols_.begin(), wrap_cols_.end(), w.col) - wrap_cols_.begin());
        z_[k * n + w.row] = w.value;
    }
    for (std::size_t k = 0; k < r; ++k) {
        band_.solve_in_place(std::span<double>(z_.data() + k * n, n));
    }

    cap_.assign(r * r, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t k = 0; k < r; ++k) {
            cap_[i * r + k] = (i == k ? 1.0 : 0.0) + z_[k * n + wrap_cols_[i]];
        }
    }
    if (r > 0) {
        small_lu(cap_, cap_pivots_, r);
    }
}

GridFunction ImplicitFactorization::apply_operator(const GridFunction& u) const
{
    if (!(u.grid() == grid_)) {
        throw UsageError("implicit operator: grid mismatch");
    }
    const auto n = static_cast<std::ptrdiff_t>(grid_.n());
    GridFunction out(grid_);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int o = implicit_min_offset; o <= implicit_max_offset; ++o) {
            acc += row_[static_cast<std::size_t>(o - implicit_min_offset)] * u(i + o);
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

SolveResult ImplicitFactorization::solve_with_residual(const GridFunction& rhs) const
{
    if (!(rhs.grid() == grid_)) {
        throw UsageError("solve: right-hand side lives on a different grid than the factorization");
    }
    const std::size_t n = grid_.n();
    const std::size_t r = wrap_cols_.size();

    GridFunction u = rhs;
    band_.solve_in_place(u.values());
    if (r > 0) {
        std::array<double, 8> s{};
        for (std::size_t i = 0; i < r; ++i) {
            s[i] = u[wrap_cols_[i]];
        }
        small_solve(cap_, cap_pivots_, r, std::span<double>(s.data(), r));
        for (std::size_t k = 0; k < r; ++k) {
            const double* zk = z_.data() + k * n;
            for (std::size_t i = 0; i < n; ++i) {
                u[i] -= zk[i] * s[k];
            }
        }
    }

    const GridFunction mu = apply_operator(u);
    double res2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = mu[i] - rhs[i];
        res2 += d * d;
    }
    const double res = std::sqrt(grid_.dx() * res2);
    const double rhs_norm = norm_h(rhs);
    const double u_norm = norm_h(u);
    const double denom = norm_inf_ * u_norm + rhs_norm;
    const double backward = denom > 0.0 ? res / denom : 0.0;
    double relative = 0.0;
    if (rhs_norm > 0.0) {
        relative = res / rhs_norm;
    } else if (res > 0.0) {
        relative = std::numeric_limits<double>::infinity();
    }

    if (!u.all_finite() || !(backward <= tolerance_)) {
        std::ostringstream msg;
        msg << "solve: backward error " << backward << " exceeds tolerance " << tolerance_
            << " (n = " << n << ", dt = " << dt_ << ")";
        throw SolverError(msg.str(), backward);
    }
    return SolveResult{std::move(u), backward, relative};
}

GridFunction ImplicitFactorization::solve(const GridFunction& rhs) const
{
    return solve_with_residual(rhs).u;
}

ImplicitFactorization factor(const PeriodicGrid& grid, double dt, double solve_tolerance)
{
    return ImplicitFactorization(grid, dt, solve_tolerance);
}

GridFunction solve(const ImplicitFactorization& f, const GridFunction& rhs)
{
    return f.solve(rhs);
}

GridFunction dense_oracle(const PeriodicGrid& grid, double dt, const GridFunction& rhs)
{
    const std::size_t n = grid.n();
    if (n > dense_oracle_max_nodes) {
        std::ostringstream msg;
        msg << "dense oracle: n = " << n << " exceeds the guard of " << dense_oracle_max_nodes;
        throw UsageError(msg.str());
    }
    if (!(rhs.grid() == grid)) {
        throw UsageError("dense oracle: grid mismatch");
    }

    // Column j of M is M e_j.
    const Stencil airy = builtin(BuiltinStencil::airy);
    const Stencil kaw = builtin(BuiltinStencil::kawahara);
    std::vector<double> m(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        GridFunction e(grid);
        e[j] = 1.0;
        const GridFunction a = apply(airy, e);
        const GridFunction k = apply(kaw, e);
        for (std::size_t i = 0; i < n; ++i) {
            m[i * n + j] = (i == j ? 1.0 : 0.0) + dt * (a[i] - k[i]);
        }
    }
    std::vector<double> b(rhs.values().begin(), rhs.values().end());

    // Gaussian elimination with complete pivoting.
    std::vector<std::size_t> colperm(n);
    for (std::size_t j = 0; j < n; ++j) {
        colperm[j] = j;
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = k;
        std::size_t pc = k;
        double best = -1.0;
        for (std::size_t i = k; i < n; ++i) {
            for (std::size_t j = k; j < n; ++j) {
                const double v = std::abs(m[i * n + j]);
                if (v > best) {
                    best = v;
                    pr = i;
                    pc = j;
                }
            }
        }
        if (best == 0.0) {
            throw SolverError("dense oracle: singular matrix", 0.0);
        }
        if (pr != k) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m[k * n + j], m[pr * n + j]);
            }
            std::swap(b[k], b[pr]);
        }
        if (pc != k) {
            for (std::size_t i = 0; i < n; ++i) {
                std::swap(m[i * n + k], m[i * n + pc]);
            }
            std::swap(colperm[k], colperm[pc]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = m[i * n + k] / m[k * n + k];
            if (l == 0.0) {
                continue;
            }
            for (std::size_t j = k; j < n; ++j) {
                m[i * n + j] -= l * m[k * n + j];
            }
            b[i] -= l * b[k];
        }
    }
    std::vector<double> y(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= m[i * n + j] * y[j];
        }
        y[i] = s / m[i * n + i];
    }
    GridFunction out(grid);
    for (std::size_t j = 0; j < n; ++j) {
        out[colperm[j]] = y[j];
    }
    return out;
}

} // namespace kawahara
