#pragma once

#include "kawahara/grid.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace kawahara {

namespace detail {

/// Banded LU with partial pivoting (the dgbtrf/dgbtrs algorithm, unblocked).
/// Row i keeps columns i-kl .. i+kl+ku so that pivoting fill-in fits.
class BandLU {
public:
    BandLU() = default;
    BandLU(std::size_t n, int kl, int ku);

    void set(std::size_t i, std::size_t j, double value);
    void factor();
    void solve_in_place(std::span<double> b) const;

    std::size_t size() const noexcept { return n_; }

private:
    double& at(std::size_t i, std::size_t j) noexcept
    {
        return a_[i * width_ + (j + kl_ - i)];
    }
    double at(std::size_t i, std::size_t j) const noexcept
    {
        return a_[i * width_ + (j + kl_ - i)];
    }

    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::size_t width_ = 0;
    std::vector<double> a_;
    std::vector<double> lower_;
    std::vector<std::size_t> pivots_;
};

} // namespace detail

/// Offsets spanned by one row of M: -2 .. 3.
inline constexpr int implicit_min_offset = -2;
inline constexpr int implicit_max_offset = 3;

/// Row of M = I + dt (D- D+^2 - D+^3 D-^2), coefficient k is for offset k - 2.
std::array<double, 6> implicit_operator_row(double dx, double dt);

struct SolveResult {
    GridFunction u;
    /// ||M u - rhs||_h / (||M||_inf ||u||_h + ||rhs||_h)
    double backward_error;
    /// ||M u - rhs||_h / ||rhs||_h
    double relative_residual;
};

/// Reusable O(n) factorization of M = I + dt (D- D+^2 - D+^3 D-^2) on a
/// periodic grid.
///
/// M is split as B + U V^T: B is the non-periodic band part (2 sub-, 3
/// super-diagonals) and the periodic wrap entries live in at most five
/// columns, handled with the Sherman-Morrison-Woodbury identity. B has a
/// positive definite symmetric part (its quadratic form is that of the
/// circulant restricted to zero-padded vectors), so the band factor is
/// nonsingular for every dt >= 0.
///
/// Immutable after construction; solves may run concurrently.
class ImplicitFactorization {
public:
    static constexpr double default_tolerance = 1e-10;

    ImplicitFactorization(const PeriodicGrid& grid, double dt,
                          double solve_tolerance = default_tolerance);

    const PeriodicGrid& grid() const noexcept { return grid_; }
    double dt() const noexcept { return dt_; }
    double solve_tolerance() const noexcept { return tolerance_; }
    std::size_t wrap_rank() const noexcept { return wrap_cols_.size(); }
    const std::array<double, 6>& row() const noexcept { return row_; }

    /// Max absolute row sum of M.
    double operator_norm() const noexcept { return norm_inf_; }

    GridFunction apply_operator(const GridFunction& u) const;

    /// Solves M u = rhs. Throws SolverError when the backward error exceeds
    /// solve_tolerance.
    SolveResult solve_with_residual(const GridFunction& rhs) const;
    GridFunction solve(const GridFunction& rhs) const;

private:
    PeriodicGrid grid_;
    double dt_;
    double tolerance_;
    std::array<double, 6> row_{};
    double norm_inf_ = 0.0;
    detail::BandLU band_;
    std::vector<std::size_t> wrap_cols_;
    std::vector<double> z_;        // B^{-1} U, n x r, column-major
    std::vector<double> cap_;      // LU of I + V^T Z, r x r row-major
    std::vector<std::size_t> cap_pivots_;
};

ImplicitFactorization factor(const PeriodicGrid& grid, double dt,
                             double solve_tolerance = ImplicitFactorization::default_tolerance);

GridFunction solve(const ImplicitFactorization& f, const GridFunction& rhs);

/// Test oracle: assembles M densely from the builtin stencils and solves it
/// by Gaussian elimination with complete pivoting. O(n^3); n <= 1024.
GridFunction dense_oracle(const PeriodicGrid& grid, double dt, const GridFunction& rhs);

inline constexpr std::size_t dense_oracle_max_nodes = 1024;

} // namespace kawahara
