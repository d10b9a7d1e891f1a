#include "gronwall/instance.hpp"

#include <array>
#include <cmath>
#include <string>

#include "gronwall/error.hpp"

namespace gronwall {

namespace {

constexpr double kTolerance = -1e-12;

constexpr std::array<std::pair<Theorem, std::string_view>, 8> kNames{{
    {Theorem::bykov, "bykov"},
    {Theorem::thm22, "thm22"},
    {Theorem::thm23, "thm23"},
    {Theorem::thm24, "thm24"},
    {Theorem::thm32, "thm32"},
    {Theorem::thm33, "thm33"},
    {Theorem::thm34, "thm34"},
    {Theorem::cor35, "cor35"},
}};

std::string label(Theorem th) { return std::string(theorem_name(th)); }

void check_grid(const GridFunction& f, const Grid& grid, const char* what) {
    if (!(f.grid() == grid)) throw std::invalid_argument(std::string(what) + " is sampled on a different grid");
    if (auto j = f.first_nonfinite()) throw DomainError(std::string(what) + " is not finite", *j);
}

void check_nonnegative(const GridFunction& f, const char* what) {
    for (std::size_t j = 0; j < f.size(); ++j)
        if (f[j] < kTolerance) throw HypothesisError(std::string(what) + " must be nonnegative", j);
}

void check_positive(const GridFunction& f, const char* what) {
    for (std::size_t j = 0; j < f.size(); ++j)
        if (!(f[j] > 0.0)) throw HypothesisError(std::string(what) + " must be positive", j);
}

void check_nondecreasing(std::span<const double> v, const char* what) {
    for (std::size_t j = 1; j < v.size(); ++j)
        if (v[j] - v[j - 1] < kTolerance) throw HypothesisError(std::string(what) + " must be nondecreasing", j);
}

void check_exponent(Theorem th, double p) {
    if (!std::isfinite(p)) throw HypothesisError("p must be finite");
    if (th == Theorem::bykov) {
        if (p != 1.0) throw HypothesisError("bykov is the linear case and needs p = 1");
        return;
    }
    if (p == 1.0)
        throw HypothesisError(label(th) + " is undefined at p = 1 (the bound contains 1/(1-p)); use bykov_bound");
    switch (th) {
        case Theorem::thm22:
        case Theorem::thm23:
        case Theorem::thm24:
            if (!(p > 1.0)) throw HypothesisError(label(th) + " requires p > 1");
            break;
        default:
            if (!(p >= 0.0)) throw HypothesisError(label(th) + " requires p >= 0");
            break;
    }
}

}  // namespace

std::string_view theorem_name(Theorem th) noexcept {
    for (const auto& [t, name] : kNames)
        if (t == th) return name;
    return "?";
}

std::optional<Theorem> theorem_from_name(std::string_view name) noexcept {
    for (const auto& [t, n] : kNames)
        if (n == name) return t;
    return std::nullopt;
}

bool uses_iterated_kernels(Theorem th) noexcept { return th == Theorem::thm24 || th == Theorem::thm34; }

bool uses_datum_function(Theorem th) noexcept {
    return th == Theorem::thm22 || th == Theorem::thm24 || th == Theorem::thm33;
}

GridFunction ProblemInstance::datum_on_grid() const {
    if (has_constant_datum()) return GridFunction::constant(grid_, datum_constant());
    return datum_function();
}

ProblemInstance ProblemInstance::create(InstanceData d) {
    const Theorem th = d.theorem;
    check_exponent(th, d.p);

    const bool iterated = uses_iterated_kernels(th);
    if (iterated && d.kernels.form() != KernelSet::Form::iterated)
        throw std::invalid_argument(label(th) + " needs the iterated kernels k1..kn");
    if (!iterated && d.kernels.form() != KernelSet::Form::pair)
        throw std::invalid_argument(label(th) + " needs the kernel pair k, h");
    if (th == Theorem::thm23 && !d.kernels.h().is_zero())
        throw std::invalid_argument("thm23 has no triple-integral term; h must be absent");

    if (uses_datum_function(th) && d.datum.index() == 0)
        d.datum = GridFunction::constant(d.grid, std::get<double>(d.datum));
    if (!uses_datum_function(th) && d.datum.index() == 1)
        throw std::invalid_argument(label(th) + " needs a constant datum");

    GridFunction b = GridFunction::constant(d.grid, 0.0);
    if (th != Theorem::cor35) {
        if (!d.b) throw std::invalid_argument(label(th) + " needs a coefficient b(t)");
        b = std::move(*d.b);
        check_grid(b, d.grid, "b");
    }

    if (th == Theorem::thm23) {
        if (!d.sigma) throw std::invalid_argument("thm23 needs sigma(t)");
        check_grid(*d.sigma, d.grid, "sigma");
        check_nonnegative(*d.sigma, "sigma");
        check_nondecreasing(d.sigma->values(), "sigma");
    } else {
        d.sigma.reset();
    }

    if (d.datum.index() == 0) {
        const double a = std::get<double>(d.datum);
        if (!std::isfinite(a)) throw HypothesisError("a must be finite");
        switch (th) {
            case Theorem::bykov:
            case Theorem::thm23:
                if (a < 0.0) throw HypothesisError("a must be nonnegative");
                break;
            default:
                if (!(a > 0.0)) throw HypothesisError(label(th) + " requires a > 0");
                break;
        }
    } else {
        const GridFunction& a = std::get<GridFunction>(d.datum);
        check_grid(a, d.grid, "a");
        if (th == Theorem::thm33) {
            check_positive(a, "a");
        } else {
            check_nonnegative(a, "a");
        }
        if (th == Theorem::thm22) check_nondecreasing(a.values(), "a");
    }

    if (th == Theorem::thm24) {
        check_positive(b, "b");
        const GridFunction& a = std::get<GridFunction>(d.datum);
        std::vector<double> ratio(a.size());
        for (std::size_t j = 0; j < ratio.size(); ++j) ratio[j] = a[j] / b[j];
        check_nondecreasing(ratio, "a/b");
    } else {
        check_nonnegative(b, "b");
    }

    return ProblemInstance(th, d.p, d.grid, std::move(d.datum), std::move(b), std::move(d.sigma),
                           std::move(d.kernels));
}

}  // namespace gronwall
