#pragma once

#include <cstddef>
#include <string_view>

#include "gronwall/grid.hpp"
#include "gronwall/instance.hpp"
#include "gronwall/kernels.hpp"

namespace gronwall {

enum class HorizonKind {
    full,          // valid on the whole grid
    p_blow_up,     // (p-1) * integral reached 1
    q_positivity,  // power-form bracket reached 0
};

std::string_view horizon_kind_name(HorizonKind kind) noexcept;

struct Horizon {
    std::size_t node;  // last node where the bound is valid
    double time;       // interpolated crossing, or beta when kind == full
    HorizonKind kind;
};

/// Scans `values` from node 0. For p_blow_up a node is valid while
/// values[j] < 1, for q_positivity while values[j] > 0 (strict in both
/// cases; NaN counts as invalid). The crossing time is interpolated linearly
/// between the last valid node and the next one. If the whole grid is valid
/// the result is {m, beta, full}. Throws HypothesisError if node 0 is invalid.
Horizon detect_horizon(const GridFunction& values, HorizonKind kind);

/// Bound values plus their validity horizon. Values past horizon.node are
/// +inf.
struct BoundResult {
    GridFunction bound;
    Horizon horizon;

    std::size_t horizon_node() const noexcept { return horizon.node; }
    double horizon_time() const noexcept { return horizon.time; }
    HorizonKind horizon_kind() const noexcept { return horizon.kind; }
};

/// v0 exp(C_b(t)) + int_alpha^t f(s) exp(C_b(t) - C_b(s)) ds, C_b the
/// cumulative trapezoid of b. Overflow shows up as non-finite values.
GridFunction lemma21_bound(double v0, const GridFunction& b, const GridFunction& f, const Grid& grid);

/// exp(C_b(t)) [v_alpha^q + q int_alpha^t k(s) exp(-q C_b(s)) ds]^{1/q},
/// q = 1 - p, valid while the bracket stays positive.
BoundResult lemma31_bound(double v_alpha, const GridFunction& b, const GridFunction& k, double p, const Grid& grid);

/// a exp(C(B)(t)) with B from compute_B.
GridFunction bykov_bound(double a, const GridFunction& b, const Kernel& k, const Kernel& h, const Grid& grid);

BoundResult thm22_bound(const ProblemInstance& inst);
BoundResult thm23_bound(const ProblemInstance& inst);
BoundResult thm24_bound(const ProblemInstance& inst);
BoundResult thm32_bound(const ProblemInstance& inst);
BoundResult thm33_bound(const ProblemInstance& inst);
BoundResult thm34_bound(const ProblemInstance& inst);
BoundResult cor35_bound(const ProblemInstance& inst);

/// Dispatches on inst.theorem(); bykov is reported with a full horizon
/// (shortened only by overflow).
BoundResult compute_bound(const ProblemInstance& inst);

}  // namespace gronwall
