#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gronwall/expr.hpp"
#include "gronwall/grid.hpp"

namespace gronwall {

/// A kernel k_i(t, t1, ..., ti) with `inner_arity` = i inner variables and an
/// optional expression for its t-derivative.
///
/// Variables are `t, t1, ..., ti`; with one inner variable `s` is accepted
/// for `t1`, with two `s, r` are accepted for `t1, t2`.
class Kernel {
public:
    static constexpr std::size_t kMaxInnerArity = 4;

    static Kernel parse(std::size_t inner_arity, std::string_view body,
                        std::optional<std::string_view> dt_body = std::nullopt);
    static Kernel from_expr(std::size_t inner_arity, Expr body, std::optional<Expr> dt_body = std::nullopt);
    static Kernel zero(std::size_t inner_arity);

    std::size_t inner_arity() const noexcept { return inner_arity_; }
    const Expr& body() const noexcept { return body_; }
    const std::optional<Expr>& dt_body() const noexcept { return dt_body_; }

    bool is_zero() const noexcept { return body_.is_literal_zero(); }
    /// True when the t-derivative is known to vanish (literal zero dt body).
    bool dt_is_zero() const noexcept { return dt_body_ && dt_body_->is_literal_zero(); }

    /// `point` = (t, t1, ..., ti).
    double operator()(std::span<const double> point) const { return program_(point); }
    double dt(std::span<const double> point) const;

    /// Variable names accepted in kernel expressions of the given arity.
    static NameSet variable_names(std::size_t inner_arity);

private:
    Kernel(std::size_t inner_arity, Expr body, std::optional<Expr> dt_body);

    std::size_t inner_arity_;
    Expr body_;
    std::optional<Expr> dt_body_;
    CompiledExpr program_;
    std::optional<CompiledExpr> dt_program_;
};

/// dk/dt at `point`: the dt expression when present, otherwise a central
/// difference in t with step 1e-5 * max(1, |t|). Throws Error when the
/// result is not finite.
double kernel_dt(const Kernel& k, std::span<const double> point);

/// Either the pair {k(t,s), h(t,s,r)} used by the single/double/triple
/// integral inequalities, or the iterated list k_1..k_n (n <= 4).
class KernelSet {
public:
    enum class Form { pair, iterated };
    static constexpr std::size_t kMaxTerms = 4;

    static KernelSet pair(Kernel k, Kernel h);
    static KernelSet iterated(std::vector<Kernel> kernels);

    Form form() const noexcept { return form_; }
    const std::vector<Kernel>& kernels() const noexcept { return kernels_; }
    std::size_t size() const noexcept { return kernels_.size(); }

    /// Pair form accessors.
    const Kernel& k() const;
    const Kernel& h() const;

private:
    KernelSet(Form form, std::vector<Kernel> kernels) : form_(form), kernels_(std::move(kernels)) {}

    Form form_;
    std::vector<Kernel> kernels_;
};

/// B(t) = b(t) + int_a^t k(t,s) ds + int_a^t int_a^s h(t,s,r) dr ds.
/// `k` has one inner variable, `h` two. Throws HypothesisError on a negative
/// kernel sample and DomainError on a non-finite one.
GridFunction compute_B(const GridFunction& b, const Kernel& k, const Kernel& h, const Grid& grid);

/// B1(t) = b(t) + int_a^t k(t,s) ds.
GridFunction compute_B1(const GridFunction& b, const Kernel& k, const Grid& grid);

/// R[w](t) = k1(t,t) w(t) + sum_{i>=2} (i-1)-fold simplex integral of
/// k_i(t, t, t2, ..., ti) w(ti). Requires the iterated form.
GridFunction apply_R(const KernelSet& ks, const GridFunction& w, const Grid& grid);

/// Q[w](t) = sum_i i-fold simplex integral of dk_i/dt(t, t1, ..., ti) w(ti).
/// Derivatives must be nonnegative (HypothesisError otherwise).
GridFunction apply_Q(const KernelSet& ks, const GridFunction& w, const Grid& grid);

}  // namespace gronwall
