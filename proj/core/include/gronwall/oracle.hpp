#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "gronwall/bounds.hpp"
#include "gronwall/instance.hpp"
#include "gronwall/simplex.hpp"

namespace gronwall {

/// The right-hand side of an instance's inequality, discretized on its grid.
///
/// Every form is written as u = a(t) + c(t) (d0 + V(t)) with V(alpha) = 0 and
/// V' = F[u^p], where F is the lower-triangular matrix of the integrand:
/// b u^p + int k u^p + iint h u^p for the additive forms, and
/// R[u^p] + Q[u^p] for the forms whose kernels depend on the outer t.
/// V is advanced with Heun's predictor-corrector:
///
///   P_i = a_i + c_i (d0 + V_{i-1} + dt F_{i-1})
///   V_i = V_{i-1} + dt/2 (F_{i-1} + F~_i)
///
/// where F~_i is F_i with u_i replaced by min(u_i, P_i). The map u -> RHS(u)
/// is monotone, and for convex u^p its fixed point stays below the exact
/// solution.
class VolterraOperator {
public:
    explicit VolterraOperator(const ProblemInstance& inst);

    const Grid& grid() const noexcept { return grid_; }
    double p() const noexcept { return p_; }

    /// RHS(u) on rows 0..rows-1; `u` needs at least `rows` entries.
    std::vector<double> apply(std::span<const double> u, std::size_t rows) const;

    /// F as a matrix: F_i = sum_{l <= i} M(i, l) u_l^p.
    const VolterraMatrix& integrand() const noexcept { return M_; }

private:
    Grid grid_;
    double p_;
    std::vector<double> a_;
    std::vector<double> c_;
    double d0_;
    VolterraMatrix M_;
};

/// RHS(u) for the instance; non-finite entries (u^p overflow) are kept and
/// visible through finite_prefix().
GridFunction rhs_operator(const ProblemInstance& inst, const GridFunction& u);

struct PicardOptions {
    double tol = 1e-10;
    std::size_t max_iter = 10000;
    double divergence_threshold = 1e12;
};

enum class PicardStatus { converged, diverged, max_iter };

std::string_view picard_status_name(PicardStatus s) noexcept;

struct PicardOutcome {
    GridFunction u;  // last iterate; +inf past a divergence point
    PicardStatus status;
    std::optional<std::size_t> diverged_at;  // first node that exceeded the threshold
    std::optional<std::size_t> conv_node;    // last node of the converged prefix
    std::size_t iterations;                  // sweeps compared against their predecessor
    double final_change;                     // max |u_{k+1} - u_k| / (1 + |u_{k+1}|)
    bool monotone;                           // every sweep was nodewise nondecreasing
};

/// u_0 = RHS(0), u_{k+1} = RHS(u_k). Once a node exceeds the divergence
/// threshold (or is non-finite), later sweeps run on the prefix before the
/// first such node only.
PicardOutcome picard_extremal(const ProblemInstance& inst, const PicardOptions& opts = {});

struct AdmissibilityReport {
    bool admissible;
    double max_excess;  // max_j (u_j - RHS(u)_j)
    std::size_t worst_node;
};

/// admissible iff u_j - RHS(u)_j <= 1e-9 (1 + |RHS(u)_j|) at every node.
AdmissibilityReport check_admissible(const ProblemInstance& inst, const GridFunction& u);

enum class DominanceCut { none, horizon, convergence };

std::string_view dominance_cut_name(DominanceCut c) noexcept;

struct DominanceReport {
    bool pass;
    double max_violation;  // max_j max(0, u_j - bound_j)
    double min_margin;     // min_j (bound_j - u_j)
    std::size_t last_node;
    DominanceCut cut;
    std::optional<std::size_t> first_failure;
};

/// Compares u with the bound on nodes 0..min(horizon node, conv_node).
/// PASS iff u_j - bound_j <= 1e-9 (1 + bound_j) there.
DominanceReport verify_dominance(const GridFunction& u, const BoundResult& br, std::size_t conv_node);

/// Reference solutions of u' = b u^p.
struct ClosedForm {
    enum class Kind { riccati, linear_exp, bernoulli };
    Kind kind;
    double x;        // a (riccati, linear_exp) or v0 (bernoulli)
    double y;        // b (riccati, linear_exp) or k (bernoulli)
    double p = 0.0;  // bernoulli only

    static ClosedForm riccati(double a, double b) { return {Kind::riccati, a, b}; }
    static ClosedForm linear_exp(double a, double b) { return {Kind::linear_exp, a, b}; }
    static ClosedForm bernoulli(double v0, double k, double p) { return {Kind::bernoulli, v0, k, p}; }
};

/// riccati: a / (1 - a b (t - alpha)); linear_exp: a e^{b (t - alpha)};
/// bernoulli: [v0^q + q k (t - alpha)]^{1/q}. Nodes at or past a pole are +inf.
GridFunction closed_form(const ClosedForm& form, const Grid& grid);

}  // namespace gronwall
