#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace kawahara {

/// Uniform periodic grid over [a, b) with n cells; nodes x_i = a + i*dx.
class PeriodicGrid {
public:
    /// Smallest admissible grid: the widest stencil (the fifth difference)
    /// touches six consecutive nodes.
    static constexpr std::size_t min_nodes = 8;

    PeriodicGrid(double a, double b, std::size_t n);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    std::size_t n() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }
    double length() const noexcept { return b_ - a_; }
    double x(std::size_t i) const noexcept { return a_ + static_cast<double>(i) * dx_; }

    /// Index of the node closest to x, after wrapping x into [a, b).
    std::size_t nearest_node(double x) const;

    bool operator==(const PeriodicGrid&) const = default;

private:
    double a_;
    double b_;
    std::size_t n_;
    double dx_;
};

/// Validating factory; n is signed so that negative input is reported, not wrapped.
PeriodicGrid make_grid(double a, double b, std::int64_t n);

/// Real values on the nodes of a periodic grid.
class GridFunction {
public:
    explicit GridFunction(const PeriodicGrid& grid);  // zero-initialised
    GridFunction(const PeriodicGrid& grid, std::vector<double> values);
    GridFunction(const PeriodicGrid& grid, double constant);

    const PeriodicGrid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Periodic read: u(i) == u(i + n) for every integer i.
    double operator()(std::ptrdiff_t i) const noexcept;

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    double max_abs() const noexcept;
    bool all_finite() const noexcept;

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double s) noexcept;

private:
    PeriodicGrid grid_;
    std::vector<double> values_;
};

GridFunction operator+(GridFunction lhs, const GridFunction& rhs);
GridFunction operator-(GridFunction lhs, const GridFunction& rhs);
GridFunction operator*(double s, GridFunction u);

/// Throws UsageError unless both functions live on the same grid.
void require_same_grid(const GridFunction& u, const GridFunction& v, const char* where);

/// values[i] = f(x_i); a non-finite sample raises ConfigError naming the node.
GridFunction sample(const PeriodicGrid& grid, const std::function<double(double)>& f);

/// (u, v)_h = dx * sum_i u_i v_i
double inner_h(const GridFunction& u, const GridFunction& v);

double norm_h(const GridFunction& u);

} // namespace kawahara
