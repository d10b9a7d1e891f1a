#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gronwall/expr.hpp"

namespace gronwall {

/// Uniform partition of [alpha, beta] into m subintervals.
/// Node 0 is exactly alpha and node m is exactly beta.
class Grid {
public:
    Grid(double alpha, double beta, std::size_t m);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    std::size_t intervals() const noexcept { return m_; }
    std::size_t size() const noexcept { return m_ + 1; }
    double step() const noexcept { return step_; }

    double node(std::size_t j) const noexcept {
        return j == m_ ? beta_ : alpha_ + static_cast<double>(j) * step_;
    }

    Grid refined() const { return Grid(alpha_, beta_, 2 * m_); }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double alpha_;
    double beta_;
    std::size_t m_;
    double step_;
};

/// Samples of a real function at the nodes of a grid.
///
/// Values may contain a non-finite tail (a bound past its blow-up time, an
/// oracle past divergence); `finite_prefix()` is the number of leading
/// finite values and is the only "defined up to" marker the library uses.
class GridFunction {
public:
    GridFunction(Grid grid, std::vector<double> values);

    static GridFunction constant(const Grid& grid, double c);
    static GridFunction generate(const Grid& grid, const std::function<double(double)>& f);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t j) const { return values_[j]; }

    std::size_t finite_prefix() const noexcept { return finite_prefix_; }
    bool all_finite() const noexcept { return finite_prefix_ == values_.size(); }
    std::optional<std::size_t> first_nonfinite() const noexcept;

    /// Linear interpolation at t in [alpha, beta].
    double at(double t) const;

private:
    Grid grid_;
    std::vector<double> values_;
    std::size_t finite_prefix_ = 0;
};

/// values[j] = e(t_j). `e` may only reference `t`.
/// Throws DomainError naming the first node with a non-finite sample.
GridFunction sample(const Expr& e, const Grid& grid);

/// out[0] = 0, out[j] = out[j-1] + dt * (f[j-1] + f[j]) / 2.
GridFunction cumulative_trapezoid(const GridFunction& f);

/// out[j] = max_{i <= j} f[i].
GridFunction running_sup(const GridFunction& f);

enum class PointwiseOp { add, sub, mul, div, pow_scalar, exp, scale };

/// Nodewise algebra. Binary ops use `g`; `pow_scalar` and `scale` use
/// `scalar`; `exp` uses neither. Grids must match (std::invalid_argument).
/// Non-finite results are kept and show up in `finite_prefix()`.
GridFunction pointwise(const GridFunction& f, const GridFunction& g, PointwiseOp op);
GridFunction pointwise(const GridFunction& f, PointwiseOp op, double scalar = 0.0);

inline GridFunction add(const GridFunction& f, const GridFunction& g) { return pointwise(f, g, PointwiseOp::add); }
inline GridFunction sub(const GridFunction& f, const GridFunction& g) { return pointwise(f, g, PointwiseOp::sub); }
inline GridFunction mul(const GridFunction& f, const GridFunction& g) { return pointwise(f, g, PointwiseOp::mul); }
inline GridFunction div(const GridFunction& f, const GridFunction& g) { return pointwise(f, g, PointwiseOp::div); }
inline GridFunction pow(const GridFunction& f, double s) { return pointwise(f, PointwiseOp::pow_scalar, s); }
inline GridFunction exp(const GridFunction& f) { return pointwise(f, PointwiseOp::exp); }
inline GridFunction scale(const GridFunction& f, double c) { return pointwise(f, PointwiseOp::scale, c); }

/// Same function on the grid with 2m intervals (midpoints by linear interpolation).
GridFunction refine(const GridFunction& f);

/// Even-node subsample onto the grid with m/2 intervals. Requires even m.
GridFunction restrict(const GridFunction& f);

}  // namespace gronwall
