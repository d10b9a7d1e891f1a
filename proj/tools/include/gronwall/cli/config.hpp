#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gronwall/error.hpp"
#include "gronwall/expr.hpp"
#include "gronwall/instance.hpp"
#include "gronwall/kernels.hpp"
#include "gronwall/oracle.hpp"

namespace gronwall::cli {

/// Invalid scenario file. `line()` is 1-based when the problem sits on a line.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message, std::optional<std::size_t> line = std::nullopt)
        : Error(line ? "line " + std::to_string(*line) + ": " + message : message), line_(line) {}

    std::optional<std::size_t> line() const noexcept { return line_; }

private:
    std::optional<std::size_t> line_;
};

/// A parsed scenario. Expressions are kept unsampled so the same scenario can
/// be built on several grids.
struct ScenarioConfig {
    std::optional<Theorem> theorem;
    std::optional<double> p;
    std::optional<double> alpha;
    std::optional<double> beta;
    std::optional<std::size_t> m;
    std::optional<std::variant<double, Expr>> datum;
    std::optional<Expr> b;
    std::optional<Expr> sigma;
    std::optional<Kernel> k;
    std::optional<Kernel> h;
    std::vector<Kernel> iterated;
    PicardOptions oracle;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cases;

    /// True when theorem, interval and grid size are all present.
    bool describes_problem() const noexcept { return theorem && alpha && beta && m; }

    /// The validated instance on m intervals (the configured m by default).
    ProblemInstance build(std::optional<std::size_t> m_override = std::nullopt) const;
};

/// Parses the sectioned `key = value` format:
///
///   [problem]  theorem, p, alpha, beta, a | a_expr, b_expr, sigma_expr,
///              k_expr, k_dt_expr, h_expr, h_dt_expr, k1_expr..k4_expr,
///              k1_dt_expr..k4_dt_expr
///   [grid]     m
///   [oracle]   tol, max_iter
///   [run]      seed, cases
///
/// `#` starts a comment. Numeric values may be constant expressions. When the
/// problem is fully described the instance is built once so that hypothesis
/// violations are reported at load time. Throws ConfigError.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace gronwall::cli
