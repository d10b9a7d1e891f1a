#include "gronwall/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gronwall/error.hpp"
#include "gronwall/simplex.hpp"

namespace gronwall {

namespace {

constexpr double kSignTolerance = -1e-12;

std::map<std::string, std::size_t, std::less<>> slot_map(std::size_t inner_arity) {
    std::map<std::string, std::size_t, std::less<>> slots{{"t", 0}};
    for (std::size_t i = 1; i <= inner_arity; ++i) slots["t" + std::to_string(i)] = i;
    if (inner_arity == 1 || inner_arity == 2) slots["s"] = 1;
    if (inner_arity == 2) slots["r"] = 2;
    return slots;
}

std::string describe(std::span<const std::size_t> idx) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? ", " : "") << idx[i];
    os << ')';
    return os.str();
}

// How the simplex indices map onto kernel arguments.
enum class Layout {
    full,      // (t_j, t_l1, ..., t_ld)
    diagonal,  // (t_j, t_j, t_l1, ..., t_ld): first inner variable pinned to t
};

// Adapts a kernel (or its t-derivative) to a SimplexIntegrand, rejecting
// negative and non-finite samples.
class Sampler {
public:
    Sampler(const Kernel& k, const std::vector<double>& nodes, Layout layout, bool derivative, std::string label)
        : k_(k), nodes_(nodes), layout_(layout), derivative_(derivative), label_(std::move(label)) {}

    double operator()(std::span<const std::size_t> idx) const {
        std::array<double, Kernel::kMaxInnerArity + 1> point{};
        std::size_t n = 0;
        point[n++] = nodes_[idx[0]];
        if (layout_ == Layout::diagonal) point[n++] = nodes_[idx[0]];
        for (std::size_t i = 1; i < idx.size(); ++i) point[n++] = nodes_[idx[i]];
        const std::span<const double> args(point.data(), n);
        double v = 0.0;
        if (derivative_) {
            try {
                v = kernel_dt(k_, args);
            } catch (const Error&) {
                throw DomainError("non-finite t-derivative of " + label_ + " at nodes " + describe(idx), idx[0]);
            }
        } else {
            v = k_(args);
            if (!std::isfinite(v))
                throw DomainError("non-finite sample of " + label_ + " at nodes " + describe(idx), idx[0]);
        }
        if (v < kSignTolerance) {
            throw HypothesisError((derivative_ ? "negative t-derivative of " : "negative sample of ") + label_ +
                                      " at nodes " + describe(idx),
                                  idx[0]);
        }
        return v;
    }

private:
    const Kernel& k_;
    const std::vector<double>& nodes_;
    Layout layout_;
    bool derivative_;
    std::string label_;
};

std::vector<double> grid_nodes(const Grid& grid) {
    std::vector<double> nodes(grid.size());
    for (std::size_t j = 0; j < nodes.size(); ++j) nodes[j] = grid.node(j);
    return nodes;
}

void require_same_grid(const GridFunction& f, const Grid& grid, const char* what) {
    if (!(f.grid() == grid)) throw std::invalid_argument(std::string(what) + " is sampled on a different grid");
}

void require_finite(const GridFunction& f, const char* what) {
    if (auto j = f.first_nonfinite()) throw DomainError(std::string(what) + " is not finite", *j);
}

void require_nonnegative(const GridFunction& f, const char* what) {
    for (std::size_t j = 0; j < f.size(); ++j)
        if (f[j] < kSignTolerance) throw HypothesisError(std::string(what) + " must be nonnegative", j);
}

void accumulate(std::vector<double>& into, const std::vector<double>& term) {
    for (std::size_t j = 0; j < into.size(); ++j) into[j] += term[j];
}

const KernelSet& require_iterated(const KernelSet& ks) {
    if (ks.form() != KernelSet::Form::iterated)
        throw std::invalid_argument("R and Q functionals need the iterated kernel form");
    return ks;
}

}  // namespace

Kernel::Kernel(std::size_t inner_arity, Expr body, std::optional<Expr> dt_body)
    : inner_arity_(inner_arity), body_(std::move(body)), dt_body_(std::move(dt_body)) {
    const auto slots = slot_map(inner_arity_);
    program_ = CompiledExpr::compile(body_, slots);
    if (dt_body_) dt_program_ = CompiledExpr::compile(*dt_body_, slots);
}

NameSet Kernel::variable_names(std::size_t inner_arity) {
    NameSet names;
    for (const auto& [name, slot] : slot_map(inner_arity)) names.insert(name);
    return names;
}

Kernel Kernel::from_expr(std::size_t inner_arity, Expr body, std::optional<Expr> dt_body) {
    if (inner_arity < 1 || inner_arity > kMaxInnerArity)
        throw std::invalid_argument("kernel inner arity must be in 1.." + std::to_string(kMaxInnerArity));
    const NameSet allowed = variable_names(inner_arity);
    auto check = [&](const Expr& e) {
        for (const auto& name : free_variables(e))
            if (!allowed.contains(name)) throw EvalError("kernel variable '" + name + "' not allowed here");
    };
    check(body);
    if (dt_body) check(*dt_body);
    return Kernel(inner_arity, std::move(body), std::move(dt_body));
}

Kernel Kernel::parse(std::size_t inner_arity, std::string_view body, std::optional<std::string_view> dt_body) {
    if (inner_arity < 1 || inner_arity > kMaxInnerArity)
        throw std::invalid_argument("kernel inner arity must be in 1.." + std::to_string(kMaxInnerArity));
    const NameSet allowed = variable_names(inner_arity);
    Expr e = gronwall::parse(body, allowed);
    std::optional<Expr> de;
    if (dt_body) de = gronwall::parse(*dt_body, allowed);
    return Kernel(inner_arity, std::move(e), std::move(de));
}

Kernel Kernel::zero(std::size_t inner_arity) { return from_expr(inner_arity, Expr::number(0.0), Expr::number(0.0)); }

double Kernel::dt(std::span<const double> point) const {
    double v = 0.0;
    if (dt_program_) {
        v = (*dt_program_)(point);
    } else {
        std::array<double, kMaxInnerArity + 1> p{};
        std::copy(point.begin(), point.end(), p.begin());
        const std::span<const double> args(p.data(), point.size());
        const double t = point[0];
        const double h = 1e-5 * std::max(1.0, std::fabs(t));
        p[0] = t + h;
        const double up = program_(args);
        p[0] = t - h;
        const double down = program_(args);
        v = (up - down) / (2.0 * h);
    }
    if (!std::isfinite(v)) throw Error("non-finite kernel t-derivative");
    return v;
}

double kernel_dt(const Kernel& k, std::span<const double> point) { return k.dt(point); }

KernelSet KernelSet::pair(Kernel k, Kernel h) {
    if (k.inner_arity() != 1) throw std::invalid_argument("pair form: k must have one inner variable");
    if (h.inner_arity() != 2) throw std::invalid_argument("pair form: h must have two inner variables");
    std::vector<Kernel> ks;
    ks.push_back(std::move(k));
    ks.push_back(std::move(h));
    return KernelSet(Form::pair, std::move(ks));
}

KernelSet KernelSet::iterated(std::vector<Kernel> kernels) {
    if (kernels.empty()) throw std::invalid_argument("iterated form needs at least k1");
    if (kernels.size() > kMaxTerms)
        throw std::invalid_argument("iterated form supports at most " + std::to_string(kMaxTerms) + " kernels");
    for (std::size_t i = 0; i < kernels.size(); ++i)
        if (kernels[i].inner_arity() != i + 1)
            throw std::invalid_argument("iterated kernel k" + std::to_string(i + 1) + " must have " +
                                        std::to_string(i + 1) + " inner variables");
    return KernelSet(Form::iterated, std::move(kernels));
}

const Kernel& KernelSet::k() const {
    if (form_ != Form::pair) throw std::logic_error("k() needs the pair form");
    return kernels_[0];
}

const Kernel& KernelSet::h() const {
    if (form_ != Form::pair) throw std::logic_error("h() needs the pair form");
    return kernels_[1];
}

GridFunction compute_B(const GridFunction& b, const Kernel& k, const Kernel& h, const Grid& grid) {
    if (k.inner_arity() != 1 || h.inner_arity() != 2)
        throw std::invalid_argument("compute_B expects k(t,s) and h(t,s,r)");
    require_same_grid(b, grid, "b");
    require_finite(b, "b");
    require_nonnegative(b, "b");
    const auto nodes = grid_nodes(grid);
    const std::vector<double> ones(grid.size(), 1.0);
    std::vector<double> out(b.values().begin(), b.values().end());
    if (!k.is_zero()) accumulate(out, simplex_integral(grid, 1, Sampler(k, nodes, Layout::full, false, "k"), ones));
    if (!h.is_zero()) accumulate(out, simplex_integral(grid, 2, Sampler(h, nodes, Layout::full, false, "h"), ones));
    return GridFunction(grid, std::move(out));
}

GridFunction compute_B1(const GridFunction& b, const Kernel& k, const Grid& grid) {
    if (k.inner_arity() != 1) throw std::invalid_argument("compute_B1 expects k(t,s)");
    require_same_grid(b, grid, "b");
    require_finite(b, "b");
    require_nonnegative(b, "b");
    const auto nodes = grid_nodes(grid);
    const std::vector<double> ones(grid.size(), 1.0);
    std::vector<double> out(b.values().begin(), b.values().end());
    if (!k.is_zero()) accumulate(out, simplex_integral(grid, 1, Sampler(k, nodes, Layout::full, false, "k"), ones));
    return GridFunction(grid, std::move(out));
}

GridFunction apply_R(const KernelSet& ks, const GridFunction& w, const Grid& grid) {
    require_iterated(ks);
    require_same_grid(w, grid, "w");
    require_finite(w, "w");
    const auto nodes = grid_nodes(grid);
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const Kernel& k = ks.kernels()[i];
        if (k.is_zero()) continue;
        const std::string label = "k" + std::to_string(i + 1);
        accumulate(out, simplex_integral(grid, i, Sampler(k, nodes, Layout::diagonal, false, label), w.values()));
    }
    return GridFunction(grid, std::move(out));
}

GridFunction apply_Q(const KernelSet& ks, const GridFunction& w, const Grid& grid) {
    require_iterated(ks);
    require_same_grid(w, grid, "w");
    require_finite(w, "w");
    const auto nodes = grid_nodes(grid);
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const Kernel& k = ks.kernels()[i];
        if (k.dt_is_zero() || (k.is_zero() && !k.dt_body())) continue;
        const std::string label = "k" + std::to_string(i + 1);
        accumulate(out, simplex_integral(grid, i + 1, Sampler(k, nodes, Layout::full, true, label), w.values()));
    }
    return GridFunction(grid, std::move(out));
}

}  // namespace gronwall
