#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gronwall/instance.hpp"
#include "gronwall/oracle.hpp"

namespace gronwall {

/// Seeded random instances on [0, 1]:
///
///   b(t) = c0 + c1 t,  h = c3,  a = c4 (+ c5 t where a(t) is expected),
///   k(t,s) = c2 exp(-(t-s))  for thm22, thm32, thm33,
///   k(t,s) = c2 exp(t-s)     for cor35 (its hypotheses need dk/dt >= 0),
///
/// with c_i uniform in [0, 1) and p drawn from {0, 0.5, 2, 3} ({2, 3} for
/// thm22). Case i of seed s draws from std::mt19937_64 seeded with
/// std::seed_seq{s, i}; doubles are (x >> 11) * 2^-53.
struct RandomCase {
    std::uint64_t seed;
    std::size_t index;
    double p;
    std::vector<double> coefficients;  // c0..c5
};

bool supports_random_family(Theorem th) noexcept;

RandomCase draw_case(Theorem th, std::uint64_t seed, std::size_t index);
ProblemInstance random_instance(Theorem th, const RandomCase& c, std::size_t m = 256);

struct SuiteOptions {
    std::size_t m = 256;
    PicardOptions picard{};
    double bound_scale = 1.0;  // < 1 corrupts every bound (negative control)
};

struct SuiteRow {
    std::size_t index;
    std::uint64_t seed;
    double p;
    bool pass;
    double max_violation;
    double horizon_time;
    PicardStatus status;
};

/// Builds each case, computes its bound and Picard extremal, and checks
/// dominance. Rows come back in case order.
std::vector<SuiteRow> run_suite(Theorem th, std::uint64_t seed, std::size_t cases, const SuiteOptions& opts = {});

}  // namespace gronwall
