#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "builders.hpp"
#include "gronwall/error.hpp"
#include "gronwall/kernels.hpp"
#include "gronwall/simplex.hpp"
#include "reference.hpp"

using namespace gronwall;
using testing_support::fn;

namespace {

double dt_at(const Kernel& k, std::initializer_list<double> pt) {
    const std::vector<double> v(pt);
    return kernel_dt(k, v);
}

Kernel k1(const std::string& e, std::optional<std::string> dt = std::nullopt) { return Kernel::parse(1, e, dt); }
Kernel k2(const std::string& e, std::optional<std::string> dt = std::nullopt) { return Kernel::parse(2, e, dt); }

}  // namespace

TEST(Kernel, VariableNames) {
    EXPECT_NO_THROW((void)Kernel::parse(1, "t*s"));
    EXPECT_NO_THROW((void)Kernel::parse(1, "t*t1"));
    EXPECT_NO_THROW((void)Kernel::parse(2, "t*s*r"));
    EXPECT_NO_THROW((void)Kernel::parse(3, "t1*t2*t3"));
    EXPECT_THROW((void)Kernel::parse(1, "r"), UnknownVariableError);
    EXPECT_THROW((void)Kernel::parse(3, "s"), UnknownVariableError);
}

TEST(Kernel, Derivative) {
    EXPECT_NEAR(dt_at(k1("t^2"), {3.0, 0.0}), 6.0, 1e-7);
    EXPECT_NEAR(dt_at(k1("s^3"), {0.5, 2.0}), 0.0, 1e-9);
    EXPECT_NEAR(dt_at(k1("exp(t)"), {0.0, 0.0}), 1.0, 1e-8);
    EXPECT_EQ(dt_at(k1("t^2", "2*t"), {3.0, 0.0}), 6.0);
    EXPECT_THROW((void)dt_at(k1("sqrt(t)"), {0.0, 0.0}), Error);
}

TEST(ComputeB, Examples) {
    const Grid g(0, 1, 16);
    const auto one = fn("1", g);
    const auto zero = fn("0", g);
    const auto b = compute_B(one, Kernel::zero(1), Kernel::zero(2), g);
    EXPECT_EQ(std::vector<double>(b.values().begin(), b.values().end()), std::vector<double>(17, 1.0));

    const auto bt = compute_B(zero, k1("1"), Kernel::zero(2), g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(bt[j], g.node(j), 1e-15);

    const Grid g2(0, 1, 512);
    EXPECT_NEAR(compute_B(fn("0", g2), Kernel::zero(1), k2("1"), g2)[512], 0.5, 1e-6);
}

TEST(ComputeB, ZeroKernelsReturnBBitwise) {
    const Grid g(0.2, 1.3, 37);
    const auto b = fn("exp(sin(7*t))", g);
    const auto out = compute_B(b, Kernel::zero(1), Kernel::zero(2), g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(out[j], b[j]);
}

TEST(ComputeB, NegativeKernelIsAHypothesisViolation) {
    const Grid g(0, 1, 8);
    EXPECT_THROW((void)compute_B(fn("0", g), k1("s - 0.5"), Kernel::zero(2), g), HypothesisError);
    EXPECT_THROW((void)compute_B(fn("0", g), k1("1/(t-s)"), Kernel::zero(2), g), DomainError);
}

TEST(ComputeB1, Examples) {
    const Grid g(0, 1, 8);
    const auto z = compute_B1(fn("0", g), Kernel::zero(1), g);
    const auto two = compute_B1(fn("2", g), Kernel::zero(1), g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        EXPECT_EQ(z[j], 0.0);
        EXPECT_EQ(two[j], 2.0);
    }
    const Grid g2(0, 1, 1024);
    EXPECT_NEAR(compute_B1(fn("0", g2), k1("exp(-(t-s))"), g2)[1024], 1.0 - std::exp(-1.0), 1e-6);
}

// Against composite Gauss-Legendre, not the library's own quadrature.
TEST(ComputeB, SecondOrderAgainstGaussLegendre) {
    const std::string kb = "exp(-(t-s)) * (1 + s*s)";
    const std::string hb = "1 + t*s*r + cos(s - r)";
    const double T = 1.0;
    const double exact =
        std::exp(T) + ref::integrate([&](double s) { return std::exp(-(T - s)) * (1 + s * s); }, 0.0, T) +
        ref::integrate2([&](double s, double r) { return 1 + T * s * r + std::cos(s - r); }, 0.0, T);
    auto err = [&](std::size_t m) {
        const Grid g(0, T, m);
        return std::fabs(compute_B(fn("exp(t)", g), k1(kb), k2(hb), g)[m] - exact);
    };
    const double e64 = err(64), e128 = err(128), e256 = err(256);
    EXPECT_LT(e256, 1e-4);
    for (double ratio : {e64 / e128, e128 / e256}) {
        EXPECT_GE(ratio, 3.0);
        EXPECT_LE(ratio, 5.0);
    }
}

TEST(ApplyR, Examples) {
    const Grid g(0, 1, 32);
    const auto w = fn("1", g);
    const auto r1 = apply_R(KernelSet::iterated({Kernel::parse(1, "1", "0")}), w, g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(r1[j], 1.0);

    const auto ks2 = KernelSet::iterated({Kernel::parse(1, "1", "0"), Kernel::parse(2, "1", "0")});
    const auto r2 = apply_R(ks2, w, g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(r2[j], 1.0 + g.node(j), 1e-14);

    const auto any = KernelSet::iterated({Kernel::parse(1, "t + t1"), Kernel::parse(2, "exp(t - t2)")});
    const auto r0 = apply_R(any, fn("0", g), g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(r0[j], 0.0);

    EXPECT_THROW((void)apply_R(KernelSet::pair(k1("1"), k2("1")), w, g), std::invalid_argument);
}

TEST(ApplyQ, Examples) {
    const Grid g(0, 1, 32);
    const auto w = fn("1", g);
    const auto q0 = apply_Q(KernelSet::iterated({Kernel::parse(1, "t1", "0"), Kernel::parse(2, "t1*t2", "0")}), w, g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(q0[j], 0.0);

    const auto q1 = apply_Q(KernelSet::iterated({Kernel::parse(1, "t - t1")}), w, g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(q1[j], g.node(j), 1e-8);

    const auto fd = apply_Q(KernelSet::iterated({Kernel::parse(1, "t*t1")}), w, g);
    const auto exact = apply_Q(KernelSet::iterated({Kernel::parse(1, "t*t1", "t1")}), w, g);
    for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(fd[j], exact[j], 1e-8);

    EXPECT_THROW((void)apply_Q(KernelSet::iterated({Kernel::parse(1, "1 - t")}), w, g), HypothesisError);
}

TEST(ApplyQ, MatchesGaussLegendreForSmoothKernels) {
    // k2 = t*t1*t2, dk2/dt = t1*t2: Q[w](t) = int_0^t int_0^t1 t1 t2 w(t2) with w = e^t.
    const double T = 0.8;
    const double exact = ref::integrate2([](double s, double r) { return s * r * std::exp(r); }, 0.0, T);
    const Grid g(0, T, 512);
    const auto q = apply_Q(KernelSet::iterated({Kernel::parse(1, "1", "0"), Kernel::parse(2, "t*t1*t2", "t1*t2")}),
                           fn("exp(t)", g), g);
    EXPECT_NEAR(q[512], exact, 1e-5);
}

namespace {

// Random nonnegative iterated kernels with nonnegative t-derivatives.
KernelSet random_iterated(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<Kernel> ks;
    for (std::size_t i = 1; i <= n; ++i) {
        const std::string c = std::to_string(u(rng));
        const std::string d = std::to_string(u(rng));
        const std::string inner = "t" + std::to_string(i);
        ks.push_back(Kernel::parse(i, c + " * exp(" + d + " * (t - " + inner + "))",
                                   d + " * " + c + " * exp(" + d + " * (t - " + inner + "))"));
    }
    return KernelSet::iterated(std::move(ks));
}

GridFunction random_weight(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::vector<double> v(g.size());
    for (double& x : v) x = u(rng);
    return GridFunction(g, v);
}

}  // namespace

TEST(Functionals, LinearAndMonotone) {
    std::mt19937_64 rng(99);
    const Grid g(0, 1, 64);
    for (int trial = 0; trial < 50; ++trial) {
        const auto ks = random_iterated(rng, 1 + trial % 3);
        const auto w1 = random_weight(g, rng);
        const auto w2 = random_weight(g, rng);
        const double a = 0.7, b = 1.9;
        const auto mix = add(scale(w1, a), scale(w2, b));
        const auto bigger = add(w1, random_weight(g, rng));
        using Op = GridFunction (*)(const KernelSet&, const GridFunction&, const Grid&);
        for (Op op : {static_cast<Op>(&apply_R), static_cast<Op>(&apply_Q)}) {
            const auto lhs = op(ks, mix, g);
            const auto rhs = add(scale(op(ks, w1, g), a), scale(op(ks, w2, g), b));
            const auto lo = op(ks, w1, g);
            const auto hi = op(ks, bigger, g);
            for (std::size_t j = 0; j < g.size(); ++j) {
                EXPECT_NEAR(lhs[j], rhs[j], 1e-12 * std::max(1.0, std::fabs(rhs[j])));
                EXPECT_LE(lo[j], hi[j]);
            }
        }
    }
}

TEST(Simplex, MatrixAgreesWithNestedSum) {
    const Grid g(0, 1, 12);
    std::mt19937_64 rng(5);
    const auto w = random_weight(g, rng);
    for (std::size_t depth = 0; depth <= 3; ++depth) {
        auto f = [&](std::span<const std::size_t> idx) {
            double v = 1.0;
            for (std::size_t i = 0; i <= depth; ++i) v += 0.1 * static_cast<double>(idx[i]) * (i + 1.0);
            return v;
        };
        const auto nested = simplex_integral(g, depth, f, w.values());
        const auto via_matrix = simplex_matrix(g, depth, f).apply(w.values());
        for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(nested[j], via_matrix[j], 1e-13 * (1 + nested[j]));
    }
}

TEST(Simplex, VolumeOfTheSimplex) {
    // Constant integrand: the depth-fold integral of 1 is t^d / d!.
    const Grid g(0, 1, 256);
    const std::vector<double> one(g.size(), 1.0);
    auto f = [](std::span<const std::size_t>) { return 1.0; };
    double fact = 1.0;
    for (std::size_t d = 1; d <= 3; ++d) {
        fact *= static_cast<double>(d);
        EXPECT_NEAR(simplex_integral(g, d, f, one)[256], 1.0 / fact, 1e-5) << d;
    }
}
