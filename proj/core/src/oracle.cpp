#include "gronwall/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "gronwall/error.hpp"

namespace gronwall {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSignTolerance = -1e-12;
constexpr double kRelTolerance = 1e-9;

double checked(double v, const std::string& what, std::span<const std::size_t> idx) {
    if (!std::isfinite(v)) throw DomainError("non-finite sample of " + what, idx[0]);
    if (v < kSignTolerance) throw HypothesisError("negative sample of " + what, idx[0]);
    return v;
}

enum class Layout { full, diagonal };

// Matrix of the depth-fold simplex quadrature of k (or dk/dt) against w.
// The diagonal layout pins the first inner variable to t (the R functional).
VolterraMatrix kernel_matrix(const Grid& grid, const Kernel& k, std::size_t depth, Layout layout, bool derivative,
                             const std::string& what) {
    std::vector<double> t(grid.size());
    for (std::size_t j = 0; j < t.size(); ++j) t[j] = grid.node(j);
    return simplex_matrix(grid, depth, [&](std::span<const std::size_t> idx) {
        std::array<double, Kernel::kMaxInnerArity + 1> point{};
        std::size_t n = 0;
        point[n++] = t[idx[0]];
        if (layout == Layout::diagonal) point[n++] = t[idx[0]];
        for (std::size_t i = 1; i <= depth; ++i) point[n++] = t[idx[i]];
        const std::span<const double> args(point.data(), n);
        if (!derivative) return checked(k(args), what, idx);
        double v = 0.0;
        try {
            v = k.dt(args);
        } catch (const Error&) {
            throw DomainError("non-finite t-derivative of " + what, idx[0]);
        }
        return checked(v, "t-derivative of " + what, idx);
    });
}

bool has_derivative_term(const Kernel& k) { return !(k.dt_is_zero() || (k.is_zero() && !k.dt_body())); }

// diag(b) + K [+ H]: the integrand of the additive forms.
VolterraMatrix additive_integrand(const ProblemInstance& inst, bool with_h) {
    const Grid& g = inst.grid();
    VolterraMatrix m(g.size());
    if (!inst.kernels().k().is_zero()) m += kernel_matrix(g, inst.kernels().k(), 1, Layout::full, false, "k");
    if (with_h && !inst.kernels().h().is_zero())
        m += kernel_matrix(g, inst.kernels().h(), 2, Layout::full, false, "h");
    m.add_diagonal(inst.b().values());
    return m;
}

// R + Q as matrices, for kernels k_1..k_n that depend on the outer t.
VolterraMatrix functional_integrand(const Grid& g, const std::vector<Kernel>& ks) {
    VolterraMatrix m(g.size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const std::string what = "k" + std::to_string(i + 1);
        if (!ks[i].is_zero()) m += kernel_matrix(g, ks[i], i, Layout::diagonal, false, what);
        if (has_derivative_term(ks[i])) m += kernel_matrix(g, ks[i], i + 1, Layout::full, true, what);
    }
    return m;
}

VolterraMatrix build_integrand(const ProblemInstance& inst) {
    switch (inst.theorem()) {
        case Theorem::bykov:
        case Theorem::thm22:
        case Theorem::thm32:
        case Theorem::thm33: return additive_integrand(inst, true);
        case Theorem::thm23: return additive_integrand(inst, false);
        case Theorem::thm24:
        case Theorem::thm34: return functional_integrand(inst.grid(), inst.kernels().kernels());
        case Theorem::cor35: return functional_integrand(inst.grid(), inst.kernels().kernels());
    }
    throw std::logic_error("unknown theorem");
}

}  // namespace

VolterraOperator::VolterraOperator(const ProblemInstance& inst)
    : grid_(inst.grid()), p_(inst.p()), d0_(0.0), M_(build_integrand(inst)) {
    const std::size_t n = grid_.size();
    const GridFunction datum = inst.datum_on_grid();
    switch (inst.theorem()) {
        case Theorem::thm23:
            a_.assign(n, 0.0);
            c_.assign(inst.sigma()->values().begin(), inst.sigma()->values().end());
            d0_ = inst.datum_constant();
            break;
        case Theorem::thm24:
            a_.assign(datum.values().begin(), datum.values().end());
            c_.assign(inst.b().values().begin(), inst.b().values().end());
            break;
        case Theorem::thm34:
            a_.assign(n, 0.0);
            c_.assign(inst.b().values().begin(), inst.b().values().end());
            d0_ = inst.datum_constant();
            break;
        default:
            a_.assign(datum.values().begin(), datum.values().end());
            c_.assign(n, 1.0);
            break;
    }
}

std::vector<double> VolterraOperator::apply(std::span<const double> u, std::size_t rows) const {
    if (rows > grid_.size() || u.size() < rows) throw std::invalid_argument("VolterraOperator::apply size mismatch");
    std::vector<double> out(rows);
    if (rows == 0) return out;
    const double dt = grid_.step();
    std::vector<double> g(rows);
    for (std::size_t l = 0; l < rows; ++l) g[l] = std::pow(u[l], p_);

    auto off_diagonal = [&](std::size_t i) {
        const auto row = M_.row(i);
        double s = 0.0;
        for (std::size_t l = 0; l < i; ++l) s += row[l] * g[l];
        return s;
    };

    double v = 0.0;
    double f_prev = off_diagonal(0) + M_(0, 0) * g[0];
    out[0] = a_[0] + c_[0] * d0_;
    for (std::size_t i = 1; i < rows; ++i) {
        const double off = off_diagonal(i);
        const double mii = M_(i, i);
        const double predictor = a_[i] + c_[i] * (d0_ + v + dt * f_prev);
        const double endpoint = std::max(0.0, std::min(u[i], predictor));
        const double f_tilde = mii == 0.0 ? off : off + mii * std::pow(endpoint, p_);
        v += dt / 2.0 * (f_prev + f_tilde);
        out[i] = a_[i] + c_[i] * (d0_ + v);
        f_prev = mii == 0.0 ? off : off + mii * g[i];
    }
    return out;
}

GridFunction rhs_operator(const ProblemInstance& inst, const GridFunction& u) {
    if (!(u.grid() == inst.grid())) throw std::invalid_argument("rhs_operator: grid mismatch");
    const VolterraOperator op(inst);
    return GridFunction(inst.grid(), op.apply(u.values(), u.size()));
}

std::string_view picard_status_name(PicardStatus s) noexcept {
    switch (s) {
        case PicardStatus::converged: return "converged";
        case PicardStatus::diverged: return "diverged";
        case PicardStatus::max_iter: return "max_iter";
    }
    return "?";
}

PicardOutcome picard_extremal(const ProblemInstance& inst, const PicardOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("Picard tolerance must be positive");
    const VolterraOperator op(inst);
    const std::size_t n = inst.grid().size();
    const double threshold = opts.divergence_threshold;

    std::optional<std::size_t> diverged_at;
    std::size_t prefix = n;
    auto clip = [&](std::vector<double>& v) {
        for (std::size_t j = 0; j < prefix; ++j) {
            if (!(v[j] <= threshold)) {
                prefix = j;
                diverged_at = j;
                break;
            }
        }
        v.resize(n, kInf);
        std::fill(v.begin() + static_cast<std::ptrdiff_t>(prefix), v.end(), kInf);
    };

    const std::vector<double> zero(n, 0.0);
    std::vector<double> u = op.apply(zero, n);
    clip(u);

    bool monotone = true;
    std::size_t iterations = 0;
    double final_change = kInf;
    std::size_t settled = 0;  // leading nodes whose last change was under tol
    bool converged = false;
    std::vector<double> change(n, 0.0);

    while (prefix > 0 && iterations < opts.max_iter) {
        std::vector<double> next = op.apply(u, prefix);
        ++iterations;
        for (std::size_t j = 0; j < prefix; ++j) {
            if (next[j] < u[j]) monotone = false;
            change[j] = std::fabs(next[j] - u[j]) / (1.0 + std::fabs(next[j]));
        }
        clip(next);
        final_change = 0.0;
        settled = 0;
        bool leading = true;
        for (std::size_t j = 0; j < prefix; ++j) {
            final_change = std::max(final_change, change[j]);
            if (leading && change[j] < opts.tol) {
                settled = j + 1;
            } else {
                leading = false;
            }
        }
        u = std::move(next);
        if (prefix > 0 && final_change < opts.tol) {
            converged = true;
            break;
        }
    }

    PicardOutcome out{GridFunction(inst.grid(), std::move(u)), PicardStatus::max_iter, diverged_at, std::nullopt,
                      iterations, prefix == 0 ? kInf : final_change, monotone};
    if (diverged_at) {
        out.status = PicardStatus::diverged;
    } else if (converged) {
        out.status = PicardStatus::converged;
    }
    if (prefix > 0 && settled > 0) out.conv_node = settled - 1;
    return out;
}

AdmissibilityReport check_admissible(const ProblemInstance& inst, const GridFunction& u) {
    const GridFunction rhs = rhs_operator(inst, u);
    AdmissibilityReport r{true, -kInf, 0};
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double excess = u[j] - rhs[j];
        if (!(excess <= r.max_excess)) {
            r.max_excess = std::isnan(excess) ? kInf : excess;
            r.worst_node = j;
        }
        if (!(excess <= kRelTolerance * (1.0 + std::fabs(rhs[j])))) r.admissible = false;
    }
    return r;
}

std::string_view dominance_cut_name(DominanceCut c) noexcept {
    switch (c) {
        case DominanceCut::none: return "none";
        case DominanceCut::horizon: return "horizon";
        case DominanceCut::convergence: return "convergence";
    }
    return "?";
}

DominanceReport verify_dominance(const GridFunction& u, const BoundResult& br, std::size_t conv_node) {
    if (!(u.grid() == br.bound.grid())) throw std::invalid_argument("verify_dominance: grid mismatch");
    const std::size_t m = u.grid().intervals();
    const std::size_t last = std::min({br.horizon.node, conv_node, m});
    DominanceCut cut = DominanceCut::none;
    if (last < m) cut = br.horizon.node == last ? DominanceCut::horizon : DominanceCut::convergence;

    DominanceReport r{true, 0.0, kInf, last, cut, std::nullopt};
    for (std::size_t j = 0; j <= last; ++j) {
        const double bound = br.bound[j];
        const double diff = u[j] - bound;
        if (!(diff <= kRelTolerance * (1.0 + bound))) {
            r.pass = false;
            if (!r.first_failure) r.first_failure = j;
        }
        const double v = std::isnan(diff) ? kInf : diff;
        r.max_violation = std::max(r.max_violation, v);
        r.min_margin = std::min(r.min_margin, std::isnan(diff) ? -kInf : bound - u[j]);
    }
    return r;
}

GridFunction closed_form(const ClosedForm& form, const Grid& grid) {
    if (form.kind == ClosedForm::Kind::bernoulli && form.p == 1.0)
        throw std::invalid_argument("bernoulli closed form needs p != 1");
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const double s = grid.node(j) - grid.alpha();
        switch (form.kind) {
            case ClosedForm::Kind::riccati: {
                const double d = 1.0 - form.x * form.y * s;
                out[j] = d > 0.0 ? form.x / d : kInf;
                break;
            }
            case ClosedForm::Kind::linear_exp: out[j] = form.x * std::exp(form.y * s); break;
            case ClosedForm::Kind::bernoulli: {
                const double q = 1.0 - form.p;
                const double br = std::pow(form.x, q) + q * form.y * s;
                out[j] = br > 0.0 ? std::pow(br, 1.0 / q) : kInf;
                break;
            }
        }
    }
    return GridFunction(grid, std::move(out));
}

}  // namespace gronwall
