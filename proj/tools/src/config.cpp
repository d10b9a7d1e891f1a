#include "gronwall/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gronwall::cli {

namespace {

struct Entry {
    std::string value;
    std::size_t line;
};

const std::map<std::string, std::set<std::string>, std::less<>>& schema() {
    static const auto s = [] {
        std::map<std::string, std::set<std::string>, std::less<>> m;
        auto& problem = m["problem"];
        problem = {"theorem", "p",      "alpha",  "beta",      "a",      "a_expr",   "b_expr",
                   "sigma_expr", "k_expr", "k_dt_expr", "h_expr", "h_dt_expr"};
        for (int i = 1; i <= static_cast<int>(KernelSet::kMaxTerms); ++i) {
            problem.insert("k" + std::to_string(i) + "_expr");
            problem.insert("k" + std::to_string(i) + "_dt_expr");
        }
        m["grid"] = {"m"};
        m["oracle"] = {"tol", "max_iter"};
        m["run"] = {"seed", "cases"};
        return m;
    }();
    return s;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

class Reader {
public:
    explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    const Entry* find(const std::string& key) const {
        auto it = entries_.find(key);
        return it == entries_.end() ? nullptr : &it->second;
    }

    Expr expr(const std::string& key, const NameSet& vars) const {
        const Entry& e = entries_.at(key);
        try {
            return parse(e.value, vars);
        } catch (const ParseError& err) {
            throw ConfigError(key + ": " + err.what(), e.line);
        }
    }

    double number(const std::string& key) const {
        const Entry& e = entries_.at(key);
        const double v = eval(expr(key, {}), EvalContext{});
        if (!std::isfinite(v)) throw ConfigError(key + " is not a finite number", e.line);
        return v;
    }

    std::uint64_t integer(const std::string& key) const {
        const Entry& e = entries_.at(key);
        std::uint64_t v = 0;
        const char* first = e.value.data();
        const char* last = first + e.value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) throw ConfigError(key + " must be a nonnegative integer", e.line);
        return v;
    }

    std::size_t line(const std::string& key) const { return entries_.at(key).line; }

private:
    std::map<std::string, Entry> entries_;
};

Kernel kernel(const Reader& r, const std::string& body_key, const std::string& dt_key, std::size_t arity) {
    const NameSet vars = Kernel::variable_names(arity);
    std::optional<Expr> dt;
    if (r.find(dt_key)) dt = r.expr(dt_key, vars);
    if (!r.find(body_key)) {
        if (dt) throw ConfigError(dt_key + " given without " + body_key, r.line(dt_key));
        return Kernel::zero(arity);
    }
    return Kernel::from_expr(arity, r.expr(body_key, vars), std::move(dt));
}

void reject(const Reader& r, const std::string& key, const std::string& why) {
    if (r.find(key)) throw ConfigError(key + " " + why, r.line(key));
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    std::map<std::string, Entry> entries;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("malformed section header", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (!schema().contains(section)) throw ConfigError("unknown section [" + section + "]", line_no);
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (section.empty()) throw ConfigError("'" + key + "' appears before any [section]", line_no);
        if (key.empty()) throw ConfigError("missing key before '='", line_no);
        if (!schema().find(section)->second.contains(key))
            throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no);
        if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no);
        if (entries.contains(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
        entries.emplace(key, Entry{value, line_no});
    }

    const Reader r(std::move(entries));
    ScenarioConfig cfg;

    if (const Entry* e = r.find("theorem")) {
        cfg.theorem = theorem_from_name(e->value);
        if (!cfg.theorem) throw ConfigError("unknown theorem '" + e->value + "'", e->line);
    }
    if (r.find("p")) cfg.p = r.number("p");
    if (r.find("alpha")) cfg.alpha = r.number("alpha");
    if (r.find("beta")) cfg.beta = r.number("beta");
    if (r.find("m")) cfg.m = r.integer("m");
    if (r.find("tol")) cfg.oracle.tol = r.number("tol");
    if (r.find("max_iter")) cfg.oracle.max_iter = r.integer("max_iter");
    if (r.find("seed")) cfg.seed = r.integer("seed");
    if (r.find("cases")) cfg.cases = r.integer("cases");

    if (r.find("a") && r.find("a_expr"))
        throw ConfigError("both 'a' and 'a_expr' are given; use exactly one", r.line("a_expr"));
    if (r.find("a")) cfg.datum = r.number("a");
    if (r.find("a_expr")) cfg.datum = r.expr("a_expr", {"t"});
    if (r.find("b_expr")) cfg.b = r.expr("b_expr", {"t"});
    if (r.find("sigma_expr")) cfg.sigma = r.expr("sigma_expr", {"t"});

    const bool iterated = cfg.theorem && uses_iterated_kernels(*cfg.theorem);
    if (iterated) {
        for (const char* key : {"k_expr", "k_dt_expr", "h_expr", "h_dt_expr"})
            reject(r, key, "does not apply to " + std::string(theorem_name(*cfg.theorem)) + "; use k1_expr..k4_expr");
        std::size_t n = 0;
        while (n < KernelSet::kMaxTerms && r.find("k" + std::to_string(n + 1) + "_expr")) ++n;
        for (std::size_t i = n + 1; i <= KernelSet::kMaxTerms; ++i) {
            const std::string name = "k" + std::to_string(i);
            reject(r, name + "_expr", "given without k" + std::to_string(n + 1) + "_expr");
            reject(r, name + "_dt_expr", "given without " + name + "_expr");
        }
        for (std::size_t i = 1; i <= n; ++i) {
            const std::string name = "k" + std::to_string(i);
            cfg.iterated.push_back(kernel(r, name + "_expr", name + "_dt_expr", i));
        }
    } else {
        for (std::size_t i = 1; i <= KernelSet::kMaxTerms; ++i) {
            const std::string name = "k" + std::to_string(i);
            reject(r, name + "_expr", "only applies to thm24 and thm34");
            reject(r, name + "_dt_expr", "only applies to thm24 and thm34");
        }
        if (cfg.theorem && *cfg.theorem != Theorem::cor35) {
            reject(r, "k_dt_expr", "only applies to cor35");
            reject(r, "h_dt_expr", "only applies to cor35");
        }
        if (cfg.theorem == Theorem::thm23) reject(r, "h_expr", "does not apply to thm23");
        cfg.k = kernel(r, "k_expr", "k_dt_expr", 1);
        cfg.h = kernel(r, "h_expr", "h_dt_expr", 2);
    }
    if (cfg.theorem == Theorem::cor35) reject(r, "b_expr", "does not apply to cor35");
    if (cfg.theorem && *cfg.theorem != Theorem::thm23) reject(r, "sigma_expr", "only applies to thm23");

    if (cfg.describes_problem()) {
        try {
            (void)cfg.build();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    }
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

ProblemInstance ScenarioConfig::build(std::optional<std::size_t> m_override) const {
    if (!theorem) throw ConfigError("missing 'theorem' in [problem]");
    if (!alpha || !beta) throw ConfigError("missing 'alpha' or 'beta' in [problem]");
    const std::size_t intervals = m_override ? *m_override : m.value_or(0);
    if (intervals == 0) throw ConfigError("missing or zero 'm' in [grid]");
    if (!datum) throw ConfigError("missing datum: give 'a' or 'a_expr'");
    const Theorem th = *theorem;

    double exponent = 1.0;
    if (th == Theorem::bykov) {
        exponent = p.value_or(1.0);
    } else {
        if (!p) throw ConfigError("missing 'p' in [problem]");
        exponent = *p;
    }

    const Grid grid(*alpha, *beta, intervals);
    std::variant<double, GridFunction> d = 0.0;
    if (const double* c = std::get_if<double>(&*datum)) {
        d = *c;
    } else {
        d = sample(std::get<Expr>(*datum), grid);
    }

    std::optional<GridFunction> bf;
    if (th != Theorem::cor35) {
        if (b) {
            bf = sample(*b, grid);
        } else if (uses_iterated_kernels(th)) {
            throw ConfigError("missing 'b_expr' (" + std::string(theorem_name(th)) + " multiplies by b(t))");
        } else {
            bf = GridFunction::constant(grid, 0.0);
        }
    }
    std::optional<GridFunction> sf;
    if (th == Theorem::thm23) {
        if (!sigma) throw ConfigError("missing 'sigma_expr' (thm23)");
        sf = sample(*sigma, grid);
    }

    KernelSet ks = uses_iterated_kernels(th)
                       ? (iterated.empty() ? throw ConfigError("missing 'k1_expr'") : KernelSet::iterated(iterated))
                       : KernelSet::pair(k ? *k : Kernel::zero(1), h ? *h : Kernel::zero(2));
    return ProblemInstance::create({th, exponent, grid, std::move(d), std::move(bf), std::move(sf), std::move(ks)});
}

}  // namespace gronwall::cli
