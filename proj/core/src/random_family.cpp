#include "gronwall/random_family.hpp"

#include <array>
#include <cstdio>
#include <random>
#include <string>

#include "gronwall/bounds.hpp"

namespace gronwall {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string num(double v) {
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

}  // namespace

bool supports_random_family(Theorem th) noexcept {
    return th == Theorem::thm22 || th == Theorem::thm32 || th == Theorem::thm33 || th == Theorem::cor35;
}

RandomCase draw_case(Theorem th, std::uint64_t seed, std::size_t index) {
    if (!supports_random_family(th))
        throw std::invalid_argument("no random family for " + std::string(theorem_name(th)));
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    RandomCase c{seed, index, 0.0, std::vector<double>(6)};
    for (double& x : c.coefficients) x = unit(rng);
    static constexpr std::array<double, 4> kExponents{0.0, 0.5, 2.0, 3.0};
    if (th == Theorem::thm22) {
        c.p = kExponents[2 + (rng() >> 63)];
    } else {
        c.p = kExponents[rng() >> 62];
    }
    return c;
}

ProblemInstance random_instance(Theorem th, const RandomCase& c, std::size_t m) {
    const Grid grid(0.0, 1.0, m);
    const auto& k = c.coefficients;
    const GridFunction b = GridFunction::generate(grid, [&](double t) { return k[0] + k[1] * t; });

    std::variant<double, GridFunction> datum = k[4];
    if (uses_datum_function(th)) datum = GridFunction::generate(grid, [&](double t) { return k[4] + k[5] * t; });

    KernelSet kernels = [&] {
        if (th == Theorem::cor35) {
            const std::string e = num(k[2]) + "*exp(t-s)";
            return KernelSet::pair(Kernel::parse(1, e, e), Kernel::parse(2, num(k[3]), "0"));
        }
        return KernelSet::pair(Kernel::parse(1, num(k[2]) + "*exp(-(t-s))"), Kernel::parse(2, num(k[3])));
    }();

    return ProblemInstance::create({th, c.p, grid, std::move(datum), b, std::nullopt, std::move(kernels)});
}

std::vector<SuiteRow> run_suite(Theorem th, std::uint64_t seed, std::size_t cases, const SuiteOptions& opts) {
    std::vector<SuiteRow> rows;
    rows.reserve(cases);
    for (std::size_t i = 0; i < cases; ++i) {
        const RandomCase c = draw_case(th, seed, i);
        const ProblemInstance inst = random_instance(th, c, opts.m);
        BoundResult br = compute_bound(inst);
        if (opts.bound_scale != 1.0) br.bound = scale(br.bound, opts.bound_scale);
        const PicardOutcome po = picard_extremal(inst, opts.picard);
        bool pass = false;
        double violation = 0.0;
        if (po.conv_node) {
            const DominanceReport rep = verify_dominance(po.u, br, *po.conv_node);
            pass = rep.pass;
            violation = rep.max_violation;
        }
        rows.push_back({i, seed, c.p, pass, violation, br.horizon.time, po.status});
    }
    return rows;
}

}  // namespace gronwall
