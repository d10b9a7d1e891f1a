#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gronwall/cli/commands.hpp"
#include "gronwall/cli/config.hpp"

using namespace gronwall;
using namespace gronwall::cli;

namespace {

const char* kRiccati = R"(# Riccati u' = u^2
[problem]
theorem = thm32
p = 2
a = 1
alpha = 0
beta = 0.9
b_expr = 1

[grid]
m = 1024
)";

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() /
                ("gronwall_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }

    std::string write(const std::string& name, const std::string& text) const {
        const auto p = path_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::size_t error_line(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e.line().value_or(0);
    }
    ADD_FAILURE() << "expected ConfigError";
    return 0;
}

}  // namespace

TEST(Config, MinimalRiccatiBuilds) {
    const auto cfg = parse_config(kRiccati);
    ASSERT_TRUE(cfg.describes_problem());
    const auto inst = cfg.build();
    EXPECT_EQ(inst.theorem(), Theorem::thm32);
    EXPECT_EQ(inst.grid().intervals(), 1024u);
    EXPECT_EQ(inst.datum_constant(), 1.0);
    EXPECT_EQ(cfg.build(64).grid().intervals(), 64u);
}

TEST(Config, BothDatumKeysConflict) {
    try {
        (void)parse_config("[problem]\ntheorem = thm32\np = 2\na = 1\na_expr = 1 + t\nalpha = 0\nbeta = 1\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("'a' and 'a_expr'"), std::string::npos) << e.what();
        EXPECT_EQ(e.line(), std::optional<std::size_t>(5));
    }
}

TEST(Config, ExpressionSyntaxErrorCarriesOffset) {
    try {
        (void)parse_config("[problem]\ntheorem = thm32\nk_expr = exp(-(t-s)\n");
        FAIL();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("k_expr"), std::string::npos) << msg;
        EXPECT_NE(msg.find("offset 10"), std::string::npos) << msg;
        EXPECT_EQ(e.line(), std::optional<std::size_t>(3));
    }
}

TEST(Config, StructuralErrorsAreLinePrecise) {
    EXPECT_EQ(error_line("[problem]\ntheorem = thm32\nfoo = 1\n"), 3u);
    EXPECT_EQ(error_line("[problem]\n[nope]\n"), 2u);
    EXPECT_EQ(error_line("theorem = thm32\n"), 1u);
    EXPECT_EQ(error_line("[problem]\np = 2\np = 3\n"), 3u);
    EXPECT_EQ(error_line("[problem]\np =\n"), 2u);
    EXPECT_EQ(error_line("[problem]\njust words\n"), 2u);
    EXPECT_EQ(error_line("[problem\n"), 1u);
    EXPECT_EQ(error_line("[grid]\nm = 10.5\n"), 2u);
    EXPECT_EQ(error_line("[problem]\ntheorem = thm99\n"), 2u);
    EXPECT_EQ(error_line("[problem]\ntheorem = thm32\nk_dt_expr = 1\n"), 3u);
    EXPECT_EQ(error_line("[problem]\ntheorem = thm32\nk1_expr = 1\n"), 3u);
    EXPECT_EQ(error_line("[problem]\ntheorem = thm24\nk_expr = 1\n"), 3u);
    EXPECT_EQ(error_line("[problem]\ntheorem = thm24\nk1_expr = 1\nk3_expr = 1\n"), 4u);
    EXPECT_EQ(error_line("[problem]\ntheorem = thm23\nh_expr = 1\n"), 3u);
    EXPECT_EQ(error_line("[problem]\ntheorem = cor35\nb_expr = 1\n"), 3u);
    EXPECT_EQ(error_line("[problem]\ntheorem = thm32\nsigma_expr = 1\n"), 3u);
    EXPECT_EQ(error_line("[problem]\nb_expr = s\n"), 2u);
    EXPECT_EQ(error_line("[problem]\nk_expr = r\n"), 2u);
    EXPECT_EQ(error_line("[problem]\np = 1/0\n"), 2u);
}

TEST(Config, ValuesMayBeConstantExpressions) {
    const auto cfg = parse_config("[problem]\nbeta = sqrt(2) + 0.1 # comment\n[oracle]\ntol = 1e-12\nmax_iter = 50\n");
    EXPECT_DOUBLE_EQ(*cfg.beta, std::sqrt(2.0) + 0.1);
    EXPECT_EQ(cfg.oracle.tol, 1e-12);
    EXPECT_EQ(cfg.oracle.max_iter, 50u);
}

TEST(Config, HypothesisViolationIsALoadError) {
    EXPECT_THROW((void)parse_config("[problem]\ntheorem = thm32\np = 2\na = -1\nalpha = 0\nbeta = 1\n[grid]\nm = 8\n"),
                 ConfigError);
    EXPECT_THROW((void)parse_config("[problem]\ntheorem = thm23\np = 2\na = 1\nalpha = 0\nbeta = 1\n[grid]\nm = 8\n"),
                 ConfigError);
    EXPECT_THROW((void)parse_config("[problem]\ntheorem = thm32\np = 2\na = 1\nalpha = 1\nbeta = 0\n[grid]\nm = 8\n"),
                 ConfigError);
}

TEST(Config, IteratedAndCor35Kernels) {
    const auto t24 = parse_config(
        "[problem]\ntheorem = thm24\np = 2\na_expr = 1\nb_expr = 1\nalpha = 0\nbeta = 1\n"
        "k1_expr = 1\nk1_dt_expr = 0\nk2_expr = t - t2\nk2_dt_expr = 1\n[grid]\nm = 16\n");
    EXPECT_EQ(t24.iterated.size(), 2u);
    EXPECT_EQ(t24.build().kernels().size(), 2u);

    const auto c35 = parse_config(
        "[problem]\ntheorem = cor35\np = 0.5\na = 1\nalpha = 0\nbeta = 1\nk_expr = t - s\nk_dt_expr = 1\n"
        "h_expr = 0.1\n[grid]\nm = 16\n");
    EXPECT_TRUE(c35.k->dt_body().has_value());
    EXPECT_NO_THROW((void)c35.build());
}

TEST(Config, LoadFromFile) {
    TempDir dir;
    EXPECT_EQ(load_config(dir.write("r.cfg", kRiccati)).m, std::optional<std::size_t>(1024));
    EXPECT_THROW((void)load_config(dir.file("missing.cfg")), ConfigError);
}

TEST(Cli, BoundCsv) {
    TempDir dir;
    const auto r = run_cli({"bound", "--config", dir.write("r.cfg", kRiccati)});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    EXPECT_EQ(rows.front(), "t,bound");
    EXPECT_EQ(rows.size(), 1026u);
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
    EXPECT_EQ(r.out.back(), '\n');
    EXPECT_EQ(rows[1], "0,1");
    // Nodes are 0.9 j / 1024, so t = 0.5 falls between two rows.
    for (std::size_t i = 2; i < rows.size(); ++i) {
        auto cell = [&](std::size_t r, int c) {
            const auto comma = rows[r].find(',');
            return std::stod(c == 0 ? rows[r].substr(0, comma) : rows[r].substr(comma + 1));
        };
        const double t0 = cell(i - 1, 0), t1 = cell(i, 0);
        if (t0 <= 0.5 && 0.5 < t1) {
            const double w = (0.5 - t0) / (t1 - t0);
            EXPECT_NEAR((1 - w) * cell(i - 1, 1) + w * cell(i, 1), 2.0, 1e-3);
        }
    }
    EXPECT_EQ(rows.back(), "0.90000000000000002,9.9999999999984706");
}

TEST(Cli, VerifyPassesWithSmallMargin) {
    TempDir dir;
    const auto r = run_cli({"verify", "--config", dir.write("r.cfg", kRiccati)});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.err.rfind("PASS", 0), 0u) << r.err;
    EXPECT_NE(r.err.find("cut=none"), std::string::npos);
    const auto rows = lines(r.out);
    EXPECT_EQ(rows.front(), "t,bound,extremal,margin");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double margin = std::stod(rows[i].substr(rows[i].rfind(',') + 1));
        EXPECT_GE(margin, 0.0);
        EXPECT_LE(margin, 1e-3);
    }
}

TEST(Cli, VerifyFailsWhenTheOracleNeverRuns) {
    TempDir dir;
    const auto cfg = dir.write("r.cfg", std::string(kRiccati) + "[oracle]\nmax_iter = 0\n");
    const auto r = run_cli({"verify", "--config", cfg});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("FAIL", 0), 0u) << r.err;
}

TEST(Cli, HorizonRow) {
    TempDir dir;
    std::string text = kRiccati;
    text.replace(text.find("beta = 0.9"), 10, "beta = 1.8");
    text.replace(text.find("m = 1024"), 8, "m = 2048");
    const auto r = run_cli({"horizon", "--config", dir.write("r.cfg", text)});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], "horizon_time,horizon_node,kind");
    EXPECT_NE(rows[1].find(",q_positivity"), std::string::npos);
    EXPECT_NEAR(std::stod(rows[1]), 1.0, 2 * 1.8 / 2048);
}

TEST(Cli, ConvergenceRatios) {
    TempDir dir;
    std::string text = kRiccati;
    text.replace(text.find("m = 1024"), 8, "m = 128");
    const auto r = run_cli({"convergence", "--config", dir.write("r.cfg", text), "--levels", "4"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], "m,bound_difference,bound_ratio,extremal_difference,extremal_ratio");
    EXPECT_EQ(rows[1].substr(0, 4), "256,");
    EXPECT_NE(rows[1].find(",nan,"), std::string::npos);
    const double ratio = std::stod(rows[3].substr(rows[3].rfind(',') + 1));
    EXPECT_GT(ratio, 3.0);
    EXPECT_LT(ratio, 5.0);
}

TEST(Cli, SuiteIsDeterministic) {
    TempDir dir;
    const auto cfg = dir.write("s.cfg", "[problem]\ntheorem = thm33\n[grid]\nm = 48\n[run]\ncases = 4\n");
    const auto a = run_cli({"suite", "--config", cfg, "--seed", "42", "--cases", "12", "--out", dir.file("a.csv")});
    const auto b = run_cli({"suite", "--config", cfg, "--seed", "42", "--cases", "12", "--out", dir.file("b.csv")});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0);
    EXPECT_TRUE(a.out.empty());
    const auto ca = slurp(dir.file("a.csv"));
    EXPECT_EQ(ca, slurp(dir.file("b.csv")));
    const auto rows = lines(ca);
    EXPECT_EQ(rows.size(), 13u);
    EXPECT_EQ(rows[0], "case,seed,p,pass,max_violation,horizon_time");
    EXPECT_EQ(rows[1].substr(0, 5), "0,42,");

    const auto dflt = run_cli({"suite", "--config", cfg});
    EXPECT_EQ(lines(dflt.out).size(), 5u);
    const auto other = run_cli({"suite", "--config", cfg, "--seed", "43", "--cases", "12"});
    EXPECT_NE(other.out, ca);
}

TEST(Cli, ExitCodes) {
    TempDir dir;
    const auto good = dir.write("r.cfg", kRiccati);
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"bound"}).code, 2);
    EXPECT_EQ(run_cli({"launch", "--config", good}).code, 2);
    EXPECT_EQ(run_cli({"bound", "--config", dir.file("missing.cfg")}).code, 2);
    EXPECT_EQ(run_cli({"convergence", "--config", good, "--levels", "1"}).code, 2);
    EXPECT_EQ(run_cli({"suite", "--config", good, "--cases", "x"}).code, 2);
    EXPECT_EQ(run_cli({"bound", "--help"}).code, 0);

    const auto both = dir.write("both.cfg", "[problem]\ntheorem = thm32\np = 2\na = 1\na_expr = 1\n");
    const auto syntax = dir.write("syn.cfg", "[problem]\ntheorem = thm32\nk_expr = exp(-(t-s)\n");
    const auto unknown = dir.write("unk.cfg", "[problem]\ntheorem = thm32\ncolour = blue\n");
    for (const auto& path : {both, syntax, unknown}) {
        const auto r = run_cli({"bound", "--config", path});
        EXPECT_EQ(r.code, 2) << path;
        EXPECT_NE(r.err.find("line "), std::string::npos) << r.err;
    }
    const auto t24 = dir.write("t24.cfg", "[problem]\ntheorem = thm24\n[grid]\nm = 8\n");
    EXPECT_EQ(run_cli({"suite", "--config", t24}).code, 2);
}

TEST(Cli, NumberFormat) {
    EXPECT_EQ(format_number(0.1), "0.10000000000000001");
    EXPECT_EQ(format_number(2.0), "2");
    EXPECT_EQ(format_number(1e-20), "9.9999999999999995e-21");
    EXPECT_EQ(format_number(HUGE_VAL), "inf");
    EXPECT_EQ(format_number(std::nan("")), "nan");
}
