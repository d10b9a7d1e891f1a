#include "gronwall/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gronwall/error.hpp"

namespace gronwall {

Grid::Grid(double alpha, double beta, std::size_t m) : alpha_(alpha), beta_(beta), m_(m) {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !(alpha < beta))
        throw std::invalid_argument("grid requires finite alpha < beta");
    if (m < 1) throw std::invalid_argument("grid requires at least one interval");
    step_ = (beta - alpha) / static_cast<double>(m);
    if (!(step_ > 0.0) || !(alpha_ + static_cast<double>(m_ - 1) * step_ < beta_))
        throw std::invalid_argument("grid nodes are not strictly increasing");
}

GridFunction::GridFunction(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw std::invalid_argument("grid function needs " + std::to_string(grid_.size()) + " values, got " +
                                    std::to_string(values_.size()));
    while (finite_prefix_ < values_.size() && std::isfinite(values_[finite_prefix_])) ++finite_prefix_;
}

GridFunction GridFunction::constant(const Grid& grid, double c) {
    return GridFunction(grid, std::vector<double>(grid.size(), c));
}

GridFunction GridFunction::generate(const Grid& grid, const std::function<double(double)>& f) {
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(grid.node(j));
    return GridFunction(grid, std::move(v));
}

std::optional<std::size_t> GridFunction::first_nonfinite() const noexcept {
    if (all_finite()) return std::nullopt;
    return finite_prefix_;
}

double GridFunction::at(double t) const {
    if (!(t >= grid_.alpha() && t <= grid_.beta()))
        throw std::out_of_range("evaluation point outside [alpha, beta]");
    const double x = (t - grid_.alpha()) / grid_.step();
    auto j = static_cast<std::size_t>(std::floor(x));
    if (j >= grid_.intervals()) return values_.back();
    const double w = x - static_cast<double>(j);
    if (w == 0.0) return values_[j];
    return (1.0 - w) * values_[j] + w * values_[j + 1];
}

GridFunction sample(const Expr& e, const Grid& grid) {
    for (const auto& name : free_variables(e))
        if (name != "t") throw EvalError("grid sample expressions may only use 't', found '" + name + "'");
    const auto program = CompiledExpr::compile(e, {{"t", 0}});
    std::vector<double> v(grid.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        const double t = grid.node(j);
        v[j] = program(std::span<const double>(&t, 1));
        if (!std::isfinite(v[j])) throw DomainError("non-finite sample of '" + to_string(e) + "'", j);
    }
    return GridFunction(grid, std::move(v));
}

GridFunction cumulative_trapezoid(const GridFunction& f) {
    const double dt = f.grid().step();
    std::vector<double> out(f.size());
    out[0] = 0.0;
    for (std::size_t j = 1; j < out.size(); ++j) out[j] = out[j - 1] + dt * (f[j - 1] + f[j]) / 2.0;
    return GridFunction(f.grid(), std::move(out));
}

GridFunction running_sup(const GridFunction& f) {
    std::vector<double> out(f.values().begin(), f.values().end());
    for (std::size_t j = 1; j < out.size(); ++j) out[j] = std::max(out[j - 1], out[j]);
    return GridFunction(f.grid(), std::move(out));
}

GridFunction pointwise(const GridFunction& f, const GridFunction& g, PointwiseOp op) {
    if (!(f.grid() == g.grid())) throw std::invalid_argument("pointwise operation on different grids");
    std::vector<double> out(f.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        switch (op) {
            case PointwiseOp::add: out[j] = f[j] + g[j]; break;
            case PointwiseOp::sub: out[j] = f[j] - g[j]; break;
            case PointwiseOp::mul: out[j] = f[j] * g[j]; break;
            case PointwiseOp::div: out[j] = f[j] / g[j]; break;
            default: throw std::invalid_argument("not a binary pointwise operation");
        }
    }
    return GridFunction(f.grid(), std::move(out));
}

GridFunction pointwise(const GridFunction& f, PointwiseOp op, double scalar) {
    std::vector<double> out(f.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        switch (op) {
            case PointwiseOp::pow_scalar: out[j] = std::pow(f[j], scalar); break;
            case PointwiseOp::exp: out[j] = std::exp(f[j]); break;
            case PointwiseOp::scale: out[j] = scalar * f[j]; break;
            default: throw std::invalid_argument("not a unary pointwise operation");
        }
    }
    return GridFunction(f.grid(), std::move(out));
}

GridFunction refine(const GridFunction& f) {
    const Grid fine = f.grid().refined();
    std::vector<double> out(fine.size());
    for (std::size_t j = 0; j + 1 < f.size(); ++j) {
        out[2 * j] = f[j];
        out[2 * j + 1] = (f[j] + f[j + 1]) / 2.0;
    }
    out.back() = f[f.size() - 1];
    return GridFunction(fine, std::move(out));
}

GridFunction restrict(const GridFunction& f) {
    const std::size_t m = f.grid().intervals();
    if (m % 2 != 0) throw std::invalid_argument("restrict requires an even number of intervals");
    const Grid coarse(f.grid().alpha(), f.grid().beta(), m / 2);
    std::vector<double> out(coarse.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = f[2 * j];
    return GridFunction(coarse, std::move(out));
}

}  // namespace gronwall
