#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "gronwall/cli/config.hpp"

namespace gronwall::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

/// Formats with 17 significant digits ("inf", "nan" for non-finite values).
std::string format_number(double v);

int cmd_bound(const ScenarioConfig& cfg, std::ostream& csv);

/// Summary line goes to `log`.
int cmd_verify(const ScenarioConfig& cfg, std::ostream& csv, std::ostream& log);

int cmd_horizon(const ScenarioConfig& cfg, std::ostream& csv);

/// Grids m, 2m, ..., 2^{levels-1} m. Differences between successive levels
/// are taken on the coarsest grid's nodes up to the common valid prefix.
int cmd_convergence(const ScenarioConfig& cfg, std::size_t levels, std::ostream& csv);

int cmd_suite(const ScenarioConfig& cfg, std::uint64_t seed, std::size_t cases, std::ostream& csv);

/// Entry point without the program name: `bound --config x.cfg`, ...
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gronwall::cli
