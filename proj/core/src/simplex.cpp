#include "gronwall/simplex.hpp"

#include <array>
#include <stdexcept>

namespace gronwall {

namespace {

constexpr std::size_t kMaxDepth = 8;

struct NestedSum {
    const SimplexIntegrand& f;
    std::span<const double> w;
    std::size_t depth;
    double dt;
    std::array<std::size_t, kMaxDepth + 1> idx{};

    double run(std::size_t level) {
        if (level == depth) return f(std::span<const std::size_t>(idx.data(), depth + 1)) * w[idx[depth]];
        const std::size_t upper = idx[level];
        if (upper == 0) return 0.0;
        idx[level + 1] = 0;
        double sum = 0.5 * run(level + 1);
        for (std::size_t l = 1; l < upper; ++l) {
            idx[level + 1] = l;
            sum += run(level + 1);
        }
        idx[level + 1] = upper;
        sum += 0.5 * run(level + 1);
        return dt * sum;
    }
};

struct MatrixFill {
    const SimplexIntegrand& f;
    VolterraMatrix& out;
    std::size_t depth;
    double dt;
    std::array<std::size_t, kMaxDepth + 1> idx{};

    void run(std::size_t level, double weight) {
        if (level == depth) {
            out(idx[0], idx[depth]) += weight * f(std::span<const std::size_t>(idx.data(), depth + 1));
            return;
        }
        const std::size_t upper = idx[level];
        if (upper == 0) return;
        for (std::size_t l = 0; l <= upper; ++l) {
            idx[level + 1] = l;
            const double wl = (l == 0 || l == upper) ? 0.5 * dt : dt;
            run(level + 1, weight * wl);
        }
    }
};

}  // namespace

std::vector<double> VolterraMatrix::apply(std::span<const double> w, std::size_t rows) const {
    if (rows > n_ || w.size() < rows) throw std::invalid_argument("VolterraMatrix::apply size mismatch");
    std::vector<double> out(rows, 0.0);
    for (std::size_t j = 0; j < rows; ++j) {
        const double* r = data_.data() + offset(j);
        double s = 0.0;
        for (std::size_t l = 0; l <= j; ++l) s += r[l] * w[l];
        out[j] = s;
    }
    return out;
}

VolterraMatrix& VolterraMatrix::operator+=(const VolterraMatrix& other) {
    if (other.n_ != n_) throw std::invalid_argument("VolterraMatrix size mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

void VolterraMatrix::add_diagonal(std::span<const double> d) {
    if (d.size() != n_) throw std::invalid_argument("VolterraMatrix diagonal size mismatch");
    for (std::size_t j = 0; j < n_; ++j) data_[offset(j) + j] += d[j];
}

std::vector<double> simplex_integral(const Grid& grid, std::size_t depth, const SimplexIntegrand& f,
                                     std::span<const double> w) {
    if (depth > kMaxDepth) throw std::invalid_argument("simplex depth too large");
    if (w.size() != grid.size()) throw std::invalid_argument("simplex_integral weight size mismatch");
    NestedSum sum{f, w, depth, grid.step()};
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        sum.idx[0] = j;
        out[j] = sum.run(0);
    }
    return out;
}

VolterraMatrix simplex_matrix(const Grid& grid, std::size_t depth, const SimplexIntegrand& f) {
    if (depth > kMaxDepth) throw std::invalid_argument("simplex depth too large");
    VolterraMatrix out(grid.size());
    MatrixFill fill{f, out, depth, grid.step()};
    for (std::size_t j = 0; j < grid.size(); ++j) {
        fill.idx[0] = j;
        fill.run(0, 1.0);
    }
    return out;
}

}  // namespace gronwall
