#include "gronwall/bounds.hpp"

#include <cmath>
#include <limits>

#include "gronwall/error.hpp"

namespace gronwall {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSignTolerance = -1e-12;

void require_exponent(double p) {
    if (p == 1.0) throw HypothesisError("power-form bounds are undefined at p = 1; use bykov_bound");
}

// Blanks out everything past the horizon and pulls the horizon in front of
// any node whose bound value overflowed.
BoundResult finish(std::vector<double> values, Horizon h, HorizonKind overflow_kind, const Grid& grid) {
    for (std::size_t j = h.node + 1; j < values.size(); ++j) values[j] = kInf;
    for (std::size_t j = 0; j <= h.node; ++j) {
        if (std::isfinite(values[j])) continue;
        if (j == 0) throw DomainError("bound is not finite at the left endpoint", 0);
        h = {j - 1, grid.node(j), overflow_kind};
        for (std::size_t i = j; i < values.size(); ++i) values[i] = kInf;
        break;
    }
    return {GridFunction(grid, std::move(values)), h};
}

// bound_j = mult_j * (1 - S_j)^{1/(1-p)} with S = (p-1) * factor * C(integrand).
BoundResult blow_up_form(const GridFunction& mult, const GridFunction& integrand, double factor, double p) {
    const Grid& grid = mult.grid();
    const GridFunction s = scale(cumulative_trapezoid(integrand), (p - 1.0) * factor);
    const Horizon h = detect_horizon(s, HorizonKind::p_blow_up);
    std::vector<double> out(grid.size());
    const double e = 1.0 / (1.0 - p);
    for (std::size_t j = 0; j <= h.node; ++j) out[j] = mult[j] == 0.0 ? 0.0 : mult[j] * std::pow(1.0 - s[j], e);
    return finish(std::move(out), h, HorizonKind::p_blow_up, grid);
}

// bound_j = mult_j * [A_j^q + q C(integrand)_j]^{1/q}.
BoundResult power_form(const GridFunction& A, const GridFunction& integrand, double q, const GridFunction* mult) {
    const Grid& grid = A.grid();
    const GridFunction c = cumulative_trapezoid(integrand);
    std::vector<double> bracket(grid.size());
    for (std::size_t j = 0; j < bracket.size(); ++j) bracket[j] = std::pow(A[j], q) + q * c[j];
    const GridFunction br(grid, std::move(bracket));
    Horizon h{grid.intervals(), grid.beta(), HorizonKind::full};
    if (q < 0.0) h = detect_horizon(br, HorizonKind::q_positivity);
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j <= h.node; ++j) {
        const double v = std::pow(br[j], 1.0 / q);
        out[j] = mult ? (*mult)[j] * v : v;
    }
    return finish(std::move(out), h, HorizonKind::q_positivity, grid);
}

double checked(double v, const char* what, std::size_t j) {
    if (!std::isfinite(v)) throw DomainError(std::string("non-finite sample of ") + what, j);
    if (v < kSignTolerance) throw HypothesisError(std::string("negative sample of ") + what, j);
    return v;
}

// R(t) = k(t,t) + int h(t,t,r) dr and
// Q(t) = int dk/dt(t,s) ds + iint dh/dt(t,s,r) dr ds, evaluated with plain
// trapezoid loops.
GridFunction cor35_integrand(const Kernel& k, const Kernel& h, const Grid& grid) {
    const std::size_t n = grid.size();
    const double dt = grid.step();
    std::vector<double> t(n);
    for (std::size_t j = 0; j < n; ++j) t[j] = grid.node(j);
    const bool h_term = !h.is_zero();
    const bool kt_term = !(k.dt_is_zero() || (k.is_zero() && !k.dt_body()));
    const bool ht_term = !(h.dt_is_zero() || (h.is_zero() && !h.dt_body()));
    auto w = [](std::size_t l, std::size_t u) { return (l == 0 || l == u) ? 0.5 : 1.0; };

    std::vector<double> out(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double tj = t[j];
        double r = checked(k(std::array{tj, tj}), "k", j);
        double q = 0.0;
        if (j > 0) {
            double hs = 0.0;
            double ks = 0.0;
            double hh = 0.0;
            for (std::size_t l = 0; l <= j; ++l) {
                if (h_term) hs += w(l, j) * checked(h(std::array{tj, tj, t[l]}), "h", j);
                if (kt_term) ks += w(l, j) * checked(k.dt(std::array{tj, t[l]}), "dk/dt", j);
                if (ht_term && l > 0) {
                    double inner = 0.0;
                    for (std::size_t i = 0; i <= l; ++i)
                        inner += w(i, l) * checked(h.dt(std::array{tj, t[l], t[i]}), "dh/dt", j);
                    hh += w(l, j) * dt * inner;
                }
            }
            r += dt * hs;
            q = dt * ks + dt * hh;
        }
        out[j] = r + q;
    }
    return GridFunction(grid, std::move(out));
}

GridFunction r_plus_q(const ProblemInstance& inst) {
    const GridFunction bp = pow(inst.b(), inst.p());
    return add(apply_R(inst.kernels(), bp, inst.grid()), apply_Q(inst.kernels(), bp, inst.grid()));
}

void expect(const ProblemInstance& inst, Theorem th) {
    if (inst.theorem() != th)
        throw std::invalid_argument(std::string(theorem_name(th)) + "_bound called on a " +
                                    std::string(theorem_name(inst.theorem())) + " instance");
}

}  // namespace

GridFunction lemma21_bound(double v0, const GridFunction& b, const GridFunction& f, const Grid& grid) {
    if (!(b.grid() == grid) || !(f.grid() == grid)) throw std::invalid_argument("lemma21_bound: grid mismatch");
    const GridFunction cb = cumulative_trapezoid(b);
    const GridFunction growth = exp(cb);
    const GridFunction forced = cumulative_trapezoid(mul(f, exp(scale(cb, -1.0))));
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = growth[j] * (v0 + forced[j]);
    return GridFunction(grid, std::move(out));
}

BoundResult lemma31_bound(double v_alpha, const GridFunction& b, const GridFunction& k, double p, const Grid& grid) {
    require_exponent(p);
    if (!(p >= 0.0)) throw HypothesisError("lemma31_bound requires p >= 0");
    if (!(v_alpha > 0.0)) throw HypothesisError("lemma31_bound requires v(alpha) > 0");
    if (!(b.grid() == grid) || !(k.grid() == grid)) throw std::invalid_argument("lemma31_bound: grid mismatch");
    const double q = 1.0 - p;
    const GridFunction cb = cumulative_trapezoid(b);
    const GridFunction c = cumulative_trapezoid(mul(k, exp(scale(cb, -q))));
    std::vector<double> bracket(grid.size());
    for (std::size_t j = 0; j < bracket.size(); ++j) bracket[j] = std::pow(v_alpha, q) + q * c[j];
    const GridFunction br(grid, std::move(bracket));
    const Horizon h = detect_horizon(br, HorizonKind::q_positivity);
    std::vector<double> out(grid.size());
    for (std::size_t j = 0; j <= h.node; ++j) out[j] = std::exp(cb[j]) * std::pow(br[j], 1.0 / q);
    return finish(std::move(out), h, HorizonKind::q_positivity, grid);
}

GridFunction bykov_bound(double a, const GridFunction& b, const Kernel& k, const Kernel& h, const Grid& grid) {
    if (!(a >= 0.0) || !std::isfinite(a)) throw HypothesisError("bykov_bound requires a finite a >= 0");
    const GridFunction B = compute_B(b, k, h, grid);
    if (a == 0.0) return GridFunction::constant(grid, 0.0);
    return scale(exp(cumulative_trapezoid(B)), a);
}

BoundResult thm22_bound(const ProblemInstance& inst) {
    expect(inst, Theorem::thm22);
    const double p = inst.p();
    const GridFunction& a = inst.datum_function();
    const GridFunction B = compute_B(inst.b(), inst.kernels().k(), inst.kernels().h(), inst.grid());
    return blow_up_form(a, mul(B, pow(a, p - 1.0)), 1.0, p);
}

BoundResult thm23_bound(const ProblemInstance& inst) {
    expect(inst, Theorem::thm23);
    const double p = inst.p();
    const double a1 = inst.datum_constant();
    const GridFunction& sigma = *inst.sigma();
    const GridFunction B1 = compute_B1(inst.b(), inst.kernels().k(), inst.grid());
    const GridFunction es = exp(sigma);
    const GridFunction mult = scale(mul(sigma, es), a1);
    return blow_up_form(mult, mul(B1, mul(pow(sigma, p - 1.0), es)), std::pow(a1, p - 1.0), p);
}

BoundResult thm24_bound(const ProblemInstance& inst) {
    expect(inst, Theorem::thm24);
    const double p = inst.p();
    const GridFunction& a = inst.datum_function();
    const GridFunction ratio = pow(div(a, inst.b()), p - 1.0);
    return blow_up_form(a, mul(ratio, r_plus_q(inst)), 1.0, p);
}

BoundResult thm32_bound(const ProblemInstance& inst) {
    expect(inst, Theorem::thm32);
    const GridFunction B = compute_B(inst.b(), inst.kernels().k(), inst.kernels().h(), inst.grid());
    return power_form(inst.datum_on_grid(), B, inst.q(), nullptr);
}

BoundResult thm33_bound(const ProblemInstance& inst) {
    expect(inst, Theorem::thm33);
    const GridFunction B = compute_B(inst.b(), inst.kernels().k(), inst.kernels().h(), inst.grid());
    return power_form(running_sup(inst.datum_function()), B, inst.q(), nullptr);
}

BoundResult thm34_bound(const ProblemInstance& inst) {
    expect(inst, Theorem::thm34);
    return power_form(inst.datum_on_grid(), r_plus_q(inst), inst.q(), &inst.b());
}

BoundResult cor35_bound(const ProblemInstance& inst) {
    expect(inst, Theorem::cor35);
    const GridFunction rq = cor35_integrand(inst.kernels().k(), inst.kernels().h(), inst.grid());
    return power_form(inst.datum_on_grid(), rq, inst.q(), nullptr);
}

BoundResult compute_bound(const ProblemInstance& inst) {
    switch (inst.theorem()) {
        case Theorem::bykov: {
            const Grid& g = inst.grid();
            GridFunction f = bykov_bound(inst.datum_constant(), inst.b(), inst.kernels().k(), inst.kernels().h(), g);
            std::vector<double> v(f.values().begin(), f.values().end());
            return finish(std::move(v), {g.intervals(), g.beta(), HorizonKind::full}, HorizonKind::p_blow_up, g);
        }
        case Theorem::thm22: return thm22_bound(inst);
        case Theorem::thm23: return thm23_bound(inst);
        case Theorem::thm24: return thm24_bound(inst);
        case Theorem::thm32: return thm32_bound(inst);
        case Theorem::thm33: return thm33_bound(inst);
        case Theorem::thm34: return thm34_bound(inst);
        case Theorem::cor35: return cor35_bound(inst);
    }
    throw std::logic_error("unknown theorem");
}

}  // namespace gronwall
