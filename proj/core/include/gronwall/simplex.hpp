#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gronwall/grid.hpp"

namespace gronwall {

/// Lower-triangular linear operator on grid samples,
/// (M w)_j = sum_{l <= j} M(j, l) w_l. Rows are stored packed.
class VolterraMatrix {
public:
    explicit VolterraMatrix(std::size_t n) : n_(n), data_(n * (n + 1) / 2, 0.0) {}

    std::size_t size() const noexcept { return n_; }

    double operator()(std::size_t j, std::size_t l) const { return data_[offset(j) + l]; }
    double& operator()(std::size_t j, std::size_t l) { return data_[offset(j) + l]; }

    std::span<const double> row(std::size_t j) const { return {data_.data() + offset(j), j + 1}; }

    /// Rows 0..rows-1 of M w; `w` needs at least `rows` entries.
    std::vector<double> apply(std::span<const double> w, std::size_t rows) const;
    std::vector<double> apply(std::span<const double> w) const { return apply(w, n_); }

    VolterraMatrix& operator+=(const VolterraMatrix& other);
    void add_diagonal(std::span<const double> d);


private:
    static std::size_t offset(std::size_t j) noexcept { return j * (j + 1) / 2; }

    std::size_t n_;
    std::vector<double> data_;
};

/// Integrand of a nested simplex quadrature. `idx[0]` is the outer node j,
/// `idx[1..depth]` the inner nodes with j >= idx[1] >= ... >= idx[depth].
using SimplexIntegrand = std::function<double(std::span<const std::size_t> idx)>;

/// Depth-fold nested composite trapezoid over the index-restricted simplex
/// below every outer node:
///
///   out_j = T_{l1 <= j} T_{l2 <= l1} ... T_{ld <= l(d-1)} f(j, l1..ld) w_{ld}
///
/// where T_{l <= u} is the trapezoid rule on nodes 0..u (zero when u = 0).
/// Depth 0 is f(j) w_j. Summation order is fixed per node.
std::vector<double> simplex_integral(const Grid& grid, std::size_t depth, const SimplexIntegrand& f,
                                     std::span<const double> w);

/// The same quadrature assembled as a matrix: (M w)_j equals the nested sum.
VolterraMatrix simplex_matrix(const Grid& grid, std::size_t depth, const SimplexIntegrand& f);

}  // namespace gronwall
