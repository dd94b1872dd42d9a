#include "kawahara/grid.hpp"

#include "kawahara/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kawahara {

PeriodicGrid::PeriodicGrid(double a, double b, std::size_t n) : a_(a), b_(b), n_(n), dx_(0.0)
{
    if (!std::isfinite(a) || !std::isfinite(b) || !(b > a)) {
        std::ostringstream msg;
        msg << "grid: domain [" << a << ", " << b << ") is empty; need b > a";
        throw ConfigError(msg.str());
    }
    if (n < min_nodes) {
        std::ostringstream msg;
        msg << "grid: n = " << n << " is below the minimum of " << min_nodes << " nodes";
        throw ConfigError(msg.str());
    }
    dx_ = (b - a) / static_cast<double>(n);
}

std::size_t PeriodicGrid::nearest_node(double x) const
{
    double s = std::fmod(x - a_, length());
    if (s < 0.0) {
        s += length();
    }
    auto i = static_cast<std::size_t>(std::llround(s / dx_));
    return i % n_;
}

PeriodicGrid make_grid(double a, double b, std::int64_t n)
{
    if (n < static_cast<std::int64_t>(PeriodicGrid::min_nodes)) {
        std::ostringstream msg;
        msg << "grid: n = " << n << " is below the minimum of " << PeriodicGrid::min_nodes
            << " nodes";
        throw ConfigError(msg.str());
    }
    return PeriodicGrid(a, b, static_cast<std::size_t>(n));
}

GridFunction::GridFunction(const PeriodicGrid& grid) : grid_(grid), values_(grid.n(), 0.0) {}

GridFunction::GridFunction(const PeriodicGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.n()) {
        std::ostringstream msg;
        msg << "grid function: " << values_.size() << " values for a grid of " << grid_.n()
            << " nodes";
        throw UsageError(msg.str());
    }
}

GridFunction::GridFunction(const PeriodicGrid& grid, double constant)
    : grid_(grid), values_(grid.n(), constant)
{
}

double GridFunction::operator()(std::ptrdiff_t i) const noexcept
{
    const auto n = static_cast<std::ptrdiff_t>(values_.size());
    std::ptrdiff_t k = i % n;
    if (k < 0) {
        k += n;
    }
    return values_[static_cast<std::size_t>(k)];
}

double GridFunction::max_abs() const noexcept
{
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

bool GridFunction::all_finite() const noexcept
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

GridFunction& GridFunction::operator+=(const GridFunction& other)
{
    require_same_grid(*this, other, "operator+=");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other)
{
    require_same_grid(*this, other, "operator-=");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] -= other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator*=(double s) noexcept
{
    for (double& v : values_) {
        v *= s;
    }
    return *this;
}

GridFunction operator+(GridFunction lhs, const GridFunction& rhs)
{
    lhs += rhs;
    return lhs;
}

GridFunction operator-(GridFunction lhs, const GridFunction& rhs)
{
    lhs -= rhs;
    return lhs;
}

GridFunction operator*(double s, GridFunction u)
{
    u *= s;
    return u;
}

void require_same_grid(const GridFunction& u, const GridFunction& v, const char* where)
{
    if (!(u.grid() == v.grid())) {
        throw UsageError(std::string(where) + ": grid functions live on different grids");
    }
}

GridFunction sample(const PeriodicGrid& grid, const std::function<double(double)>& f)
{
    GridFunction u(grid);
    for (std::size_t i = 0; i < grid.n(); ++i) {
        const double x = grid.x(i);
        const double v = f(x);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "sample: non-finite value " << v << " at node " << i << " (x = " << x << ")";
            throw ConfigError(msg.str());
        }
        u[i] = v;
    }
    return u;
}

double inner_h(const GridFunction& u, const GridFunction& v)
{
    require_same_grid(u, v, "inner_h");
    double sum = 0.0;
    const auto a = u.values();
    const auto b = v.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += a[i] * b[i];
    }
    return u.grid().dx() * sum;
}

double norm_h(const GridFunction& u)
{
    return std::sqrt(inner_h(u, u));
}

} // namespace kawahara
