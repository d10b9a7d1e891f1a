#include "gronwall/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "gronwall/bounds.hpp"
#include "gronwall/oracle.hpp"
#include "gronwall/random_family.hpp"

namespace gronwall::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string csv_row(std::initializer_list<std::string> cells) {
    std::string row;
    for (const auto& c : cells) {
        if (!row.empty()) row += ',';
        row += c;
    }
    row += '\n';
    return row;
}

std::string f(double v) { return format_number(v); }

struct Level {
    std::size_t m;
    BoundResult bound;
    PicardOutcome extremal;
    std::size_t bound_limit;     // last valid node
    std::size_t extremal_limit;  // last node of the converged, valid prefix
};

double max_difference(const GridFunction& fine, const GridFunction& coarse, std::size_t stride_fine,
                      std::size_t stride_coarse, std::size_t last) {
    double d = 0.0;
    for (std::size_t j = 0; j <= last; ++j) d = std::max(d, std::fabs(fine[j * stride_fine] - coarse[j * stride_coarse]));
    return d;
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", v);
    return buf.data();
}

int cmd_bound(const ScenarioConfig& cfg, std::ostream& csv) {
    const ProblemInstance inst = cfg.build();
    const BoundResult br = compute_bound(inst);
    const Grid& g = inst.grid();
    csv << "t,bound\n";
    for (std::size_t j = 0; j <= br.horizon.node; ++j) csv << csv_row({f(g.node(j)), f(br.bound[j])});
    return kExitOk;
}

int cmd_verify(const ScenarioConfig& cfg, std::ostream& csv, std::ostream& log) {
    const ProblemInstance inst = cfg.build();
    const BoundResult br = compute_bound(inst);
    const PicardOutcome po = picard_extremal(inst, cfg.oracle);
    const Grid& g = inst.grid();
    csv << "t,bound,extremal,margin\n";
    if (!po.conv_node) {
        log << "FAIL oracle produced no converged node (picard=" << picard_status_name(po.status) << ")\n";
        return kExitFail;
    }
    const DominanceReport rep = verify_dominance(po.u, br, *po.conv_node);
    for (std::size_t j = 0; j <= rep.last_node; ++j)
        csv << csv_row({f(g.node(j)), f(br.bound[j]), f(po.u[j]), f(br.bound[j] - po.u[j])});
    log << (rep.pass ? "PASS" : "FAIL") << " max_violation=" << f(rep.max_violation)
        << " min_margin=" << f(rep.min_margin) << " last_t=" << f(g.node(rep.last_node))
        << " cut=" << dominance_cut_name(rep.cut) << " picard=" << picard_status_name(po.status)
        << " iterations=" << po.iterations << '\n';
    return rep.pass ? kExitOk : kExitFail;
}

int cmd_horizon(const ScenarioConfig& cfg, std::ostream& csv) {
    const BoundResult br = compute_bound(cfg.build());
    csv << "horizon_time,horizon_node,kind\n";
    csv << csv_row({f(br.horizon.time), std::to_string(br.horizon.node), std::string(horizon_kind_name(br.horizon.kind))});
    return kExitOk;
}

int cmd_convergence(const ScenarioConfig& cfg, std::size_t levels, std::ostream& csv) {
    if (levels < 2) throw ConfigError("--levels must be at least 2");
    if (!cfg.m) throw ConfigError("missing 'm' in [grid]");
    const std::size_t m0 = *cfg.m;

    std::vector<Level> runs;
    std::size_t bound_last = std::numeric_limits<std::size_t>::max();
    std::size_t extremal_last = bound_last;
    for (std::size_t l = 0; l < levels; ++l) {
        const std::size_t m = m0 << l;
        const ProblemInstance inst = cfg.build(m);
        BoundResult br = compute_bound(inst);
        PicardOutcome po = picard_extremal(inst, cfg.oracle);
        const std::size_t bl = br.horizon.node;
        const std::size_t el = po.conv_node ? std::min(bl, *po.conv_node) : 0;
        bound_last = std::min(bound_last, bl >> l);
        extremal_last = std::min(extremal_last, el >> l);
        runs.push_back({m, std::move(br), std::move(po), bl, el});
    }

    csv << "m,bound_difference,bound_ratio,extremal_difference,extremal_ratio\n";
    double prev_b = kNaN;
    double prev_e = kNaN;
    for (std::size_t l = 1; l < levels; ++l) {
        const std::size_t sf = std::size_t{1} << l;
        const std::size_t sc = sf >> 1;
        const double db = max_difference(runs[l].bound.bound, runs[l - 1].bound.bound, sf, sc, bound_last);
        const double de = max_difference(runs[l].extremal.u, runs[l - 1].extremal.u, sf, sc, extremal_last);
        csv << csv_row({std::to_string(runs[l].m), f(db), f(prev_b / db), f(de), f(prev_e / de)});
        prev_b = db;
        prev_e = de;
    }
    return kExitOk;
}

int cmd_suite(const ScenarioConfig& cfg, std::uint64_t seed, std::size_t cases, std::ostream& csv) {
    if (!cfg.theorem) throw ConfigError("missing 'theorem' in [problem]");
    if (!supports_random_family(*cfg.theorem))
        throw ConfigError("no random family for " + std::string(theorem_name(*cfg.theorem)) +
                          " (use thm22, thm32, thm33 or cor35)");
    SuiteOptions opts;
    opts.m = cfg.m.value_or(opts.m);
    opts.picard = cfg.oracle;
    const auto rows = run_suite(*cfg.theorem, seed, cases, opts);
    csv << "case,seed,p,pass,max_violation,horizon_time\n";
    bool all = true;
    for (const SuiteRow& r : rows) {
        all = all && r.pass;
        csv << csv_row({std::to_string(r.index), std::to_string(r.seed), f(r.p), r.pass ? "PASS" : "FAIL",
                        f(r.max_violation), f(r.horizon_time)});
    }
    return all ? kExitOk : kExitFail;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gronwall-type bounds for Volterra inequalities with power nonlinearity"};
    app.name("gronwall");
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::size_t levels = 3;
    std::optional<std::size_t> cases;
    std::optional<std::uint64_t> seed;

    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "scenario file")->required();
        sub->add_option("--out", out_path, "write the CSV here instead of stdout");
        return sub;
    };
    CLI::App* bound = add("bound", "bound values up to the horizon");
    CLI::App* verify = add("verify", "compare the bound with the Picard extremal solution");
    CLI::App* horizon = add("horizon", "validity horizon of the bound");
    CLI::App* convergence = add("convergence", "differences and ratios under grid refinement");
    convergence->add_option("--levels", levels, "number of grids (m, 2m, ...)")->check(CLI::Range(2, 12));
    CLI::App* suite = add("suite", "seeded random dominance suite");
    suite->add_option("--cases", cases, "number of cases (default: [run] cases, else 100)");
    suite->add_option("--seed", seed, "seed (default: [run] seed, else 42)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }

    std::ostringstream csv;
    int code = kExitOk;
    try {
        const ScenarioConfig cfg = load_config(config_path);
        if (bound->parsed()) {
            code = cmd_bound(cfg, csv);
        } else if (verify->parsed()) {
            code = cmd_verify(cfg, csv, err);
        } else if (horizon->parsed()) {
            code = cmd_horizon(cfg, csv);
        } else if (convergence->parsed()) {
            code = cmd_convergence(cfg, levels, csv);
        } else if (suite->parsed()) {
            code = cmd_suite(cfg, seed.value_or(cfg.seed.value_or(42)), cases.value_or(cfg.cases.value_or(100)), csv);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    if (out_path.empty()) {
        out << csv.str();
    } else {
        std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
        file << csv.str();
        if (!file) {
            err << "error: cannot write " << out_path << '\n';
            return kExitConfig;
        }
    }
    return code;
}

}  // namespace gronwall::cli
