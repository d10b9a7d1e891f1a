#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "gronwall/grid.hpp"
#include "gronwall/kernels.hpp"

namespace gronwall {

/// Which inequality an instance encodes.
///
///   bykov   u <= a + int b u + iint k u + iiint h u                (p = 1)
///   thm22   u <= a(t) + int b u^p + iint k u^p + iiint h u^p       (p > 1)
///   thm23   u <= sigma(t) {a1 + int b u^p + iint k u^p}            (p > 1)
///   thm24   u <= a(t) + b(t) sum_i (i-fold k_i u^p)                (p > 1)
///   thm32   as thm22 with a constant a > 0                         (p >= 0, p != 1)
///   thm33   as thm22 with a positive a(t)                          (p >= 0, p != 1)
///   thm34   u <= b(t) [a + sum_i (i-fold k_i u^p)]                 (p >= 0, p != 1)
///   cor35   u <= a + int k(t,s) u^p + iint h(t,s,r) u^p            (p >= 0, p != 1)
enum class Theorem { bykov, thm22, thm23, thm24, thm32, thm33, thm34, cor35 };

std::string_view theorem_name(Theorem th) noexcept;
std::optional<Theorem> theorem_from_name(std::string_view name) noexcept;

/// True for the theorems whose kernels come as the iterated list k_1..k_n.
bool uses_iterated_kernels(Theorem th) noexcept;
/// True for the theorems whose datum is a function a(t) rather than a constant.
bool uses_datum_function(Theorem th) noexcept;

/// Raw inputs for ProblemInstance::create. `datum` is the constant a (or a1)
/// or the sampled a(t); a constant is widened to a function where a(t) is
/// expected. `b` is ignored by cor35; `sigma` is used by thm23 only.
struct InstanceData {
    Theorem theorem;
    double p;
    Grid grid;
    std::variant<double, GridFunction> datum;
    std::optional<GridFunction> b;
    std::optional<GridFunction> sigma;
    KernelSet kernels;
};

/// A validated problem: exponent range, datum sign and monotonicity, kernel
/// form and grid consistency are checked on construction. Kernel signs are
/// checked lazily by the quadratures that sample them.
class ProblemInstance {
public:
    static ProblemInstance create(InstanceData data);

    Theorem theorem() const noexcept { return theorem_; }
    double p() const noexcept { return p_; }
    double q() const noexcept { return 1.0 - p_; }
    const Grid& grid() const noexcept { return grid_; }

    bool has_constant_datum() const noexcept { return std::holds_alternative<double>(datum_); }
    double datum_constant() const { return std::get<double>(datum_); }
    const GridFunction& datum_function() const { return std::get<GridFunction>(datum_); }
    /// The datum sampled on the grid, whichever way it was given.
    GridFunction datum_on_grid() const;

    /// b(t); the zero function for cor35.
    const GridFunction& b() const noexcept { return b_; }
    const std::optional<GridFunction>& sigma() const noexcept { return sigma_; }
    const KernelSet& kernels() const noexcept { return kernels_; }

private:
    ProblemInstance(Theorem th, double p, Grid grid, std::variant<double, GridFunction> datum, GridFunction b,
                    std::optional<GridFunction> sigma, KernelSet kernels)
        : theorem_(th), p_(p), grid_(grid), datum_(std::move(datum)), b_(std::move(b)), sigma_(std::move(sigma)),
          kernels_(std::move(kernels)) {}

    Theorem theorem_;
    double p_;
    Grid grid_;
    std::variant<double, GridFunction> datum_;
    GridFunction b_;
    std::optional<GridFunction> sigma_;
    KernelSet kernels_;
};

}  // namespace gronwall
