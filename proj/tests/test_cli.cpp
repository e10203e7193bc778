#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <sys/wait.h>

#include <klf/verify.hpp>

using namespace klf;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args)
{
    const std::string cmd = std::string(KLF_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

ojson run_json(const std::string& args, int expect_code = 0)
{
    const auto r = run(args);
    EXPECT_EQ(r.code, expect_code) << args;
    return ojson::parse(r.out);
}

/** @brief Parses the text dump into exponent -> coefficient. */
std::map<double, std::complex<double>> parse_dump(const std::string& text)
{
    std::map<double, std::complex<double>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string frac;
        double re = 0, im = 0;
        ls >> frac >> re >> im;
        const auto slash = frac.find('/');
        out[std::stod(frac.substr(0, slash)) / std::stod(frac.substr(slash + 1))] = {re, im};
    }
    return out;
}

} // namespace

TEST(CliCusps, LevelTwoTable)
{
    const auto j = run_json("cusps --n 2 --no-timestamp");
    EXPECT_EQ(j["schema_version"], "1.0");
    EXPECT_EQ(j["command"], "cusps");
    const auto& c = j["results"]["cusps"];
    ASSERT_EQ(c.size(), 6u);
    std::vector<std::string> reps;
    for (const auto& e : c) {
        reps.push_back(e["representative"].get<std::string>());
        EXPECT_EQ(e["width"], 4);
    }
    EXPECT_EQ(reps, (std::vector<std::string>{"0", "2", "1", "3", "1/2", "inf"}));
    EXPECT_TRUE(j.contains("provenance"));
    EXPECT_FALSE(j["provenance"].contains("timestamp"));
}

TEST(CliCusps, LevelOneAndInvalid)
{
    EXPECT_EQ(run_json("cusps --n 1")["results"]["cusps"].size(), 3u);
    EXPECT_TRUE(run_json("cusps --n 1")["provenance"].contains("timestamp"));
    EXPECT_EQ(run("cusps --n 0").code, 1);
    EXPECT_EQ(run("cusps").code, 1);
}

TEST(CliClassify, Examples)
{
    for (int n : {2, 3}) {
        const auto j = run_json("classify --n " + std::to_string(n) + " --p 1 --q " + std::to_string(2 * n));
        EXPECT_EQ(j["results"]["class"]["representative"], "inf");
    }
    EXPECT_EQ(run_json("classify --n 2 --p 0 --q 1")["results"]["class"]["representative"], "0");
    const auto w = run_json("classify --n 2 --p -3 --q 1");
    EXPECT_EQ(w["results"]["class"]["representative"], "1");
    EXPECT_TRUE(w["results"]["witness"]["in_gamma_n"].get<bool>());
    EXPECT_TRUE(w["results"]["witness"]["maps_representative"].get<bool>());
    EXPECT_EQ(run("classify --n 2 --p 2 --q 4").code, 1);
    EXPECT_EQ(run("classify --n 2 --p x --q 4").code, 1);
}

TEST(CliScatter, LevelOneMatchesGamma2)
{
    const auto j = run_json("scatter --n 1");
    const auto g2 = gamma2_constants();
    const auto& m = j["results"]["normalized"];
    ASSERT_EQ(m.size(), 3u);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) EXPECT_NEAR(m[a][b].get<double>(), g2[a][b].normalized, 1e-12);
}

TEST(CliScatter, LevelTwoJsonAndCsv)
{
    const auto j = run_json("scatter --n 2");
    ASSERT_EQ(j["results"]["natural"].size(), 6u);
    for (const auto& row : j["results"]["natural"]) EXPECT_EQ(row.size(), 6u);
    const auto r = run("scatter --n 2 --format csv");
    ASSERT_EQ(r.code, 0);
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t pos; (pos = r.out.find("\r\n", start)) != std::string::npos; start = pos + 2) lines.push_back(r.out.substr(start, pos - start));
    EXPECT_EQ(start, r.out.size());
    ASSERT_EQ(lines.size(), 13u);
    EXPECT_EQ(lines[0], "convention,cusp,0,2,1,3,1/2,inf");
    EXPECT_EQ(lines[1].rfind("normalized,0,", 0), 0u);
    EXPECT_EQ(lines[7].rfind("natural,0,", 0), 0u);
    EXPECT_EQ(run("scatter --n 2 --format xml").code, 1);
}

TEST(CliEisenstein, CrossPath)
{
    const auto j = run_json("eisenstein --n 2 --cusp 0 --chart inf --z 0.3+1.5i --s 2 --cmax 300");
    EXPECT_LT(j["results"]["difference"].get<double>(), 1e-4);
    EXPECT_GT(j["results"]["direct"]["tail_estimate"].get<double>(), 0);
    EXPECT_EQ(j["provenance"]["truncation"]["c_max"], 300);
}

TEST(CliEisenstein, LimitAndRejection)
{
    EXPECT_EQ(run("eisenstein --z 2i --s 1").code, 1);
    EXPECT_EQ(run("eisenstein --z 2i --s 0.5+1i").code, 1);
    const auto j = run_json("eisenstein --group gamma2 --cusp 0 --z 2i --limit --cmax 300 --mmax 8");
    TruncationSpec t;
    t.c_max = 300;
    t.m_max = 8;
    EXPECT_NEAR(j["results"]["limit"].get<double>(), fourier_limit_eval(GroupId::gamma2(), 0, 2, cplx(0, 2), t), 1e-12);
    EXPECT_EQ(run("eisenstein --z abc").code, 1);
    EXPECT_EQ(run("eisenstein --z 2i --s 2 --cmax 10 --tol 1e-12").code, 2);
}

TEST(CliVerify, FastSuite)
{
    const auto j = run_json("verify --suite fast --n 1,2 --no-timestamp");
    EXPECT_TRUE(j["results"]["all_passed"].get<bool>());
    for (const auto& r : j["results"]["reports"]) {
        const auto back = report_from_json(r);
        EXPECT_EQ(to_json(back), r);
        EXPECT_EQ(back.runtime_ms, 0);
    }
}

TEST(CliVerify, SelectionAndFailure)
{
    const auto j = run_json("verify --check scattering_level_one");
    ASSERT_EQ(j["results"]["reports"].size(), 1u);
    EXPECT_EQ(j["results"]["reports"][0]["check_id"], "scattering_level_one");
    const auto f = run_json("verify --check coset_product --tol 1e-300", 2);
    EXPECT_FALSE(f["results"]["all_passed"].get<bool>());
    EXPECT_EQ(run("verify --suite medium").code, 1);
    EXPECT_EQ(run("verify --n 1,x").code, 1);
}

TEST(CliQexp, Theta2AndFermatRoot)
{
    const auto th = parse_dump(run_json("qexp --label theta2 --order 4")["results"]["dump"].get<std::string>());
    EXPECT_EQ(th.at(0.0), std::complex<double>(1, 0));
    const auto x = parse_dump(run("qexp --label x:2 --order 6 --format text").out);
    const auto lam = parse_dump(run("qexp --label lambda --order 6 --format text").out);
    std::map<double, std::complex<double>> sq;
    for (const auto& [a, ca] : x)
        for (const auto& [b, cb] : x)
            if (a + b <= 6 + 1e-9) sq[a + b] += ca * cb;
    // both series start below q^0, so the top half-step of x^2 is incomplete
    for (const auto& [e, c] : lam) {
        if (e > 5.5) continue;
        const auto it = sq.find(e);
        const std::complex<double> v = it == sq.end() ? 0.0 : it->second;
        EXPECT_NEAR(std::abs(v - c), 0, 1e-9) << e;
    }
    EXPECT_EQ(run("qexp --label x:2 --order 0").code, 1);
    EXPECT_EQ(run("qexp --label nonsense").code, 1);
}

TEST(CliOutput, ByteIdentical)
{
    const auto a = run("scatter --n 3 --no-timestamp");
    const auto b = run("scatter --n 3 --no-timestamp");
    EXPECT_EQ(a.out, b.out);
    const auto c = run("eisenstein --n 2 --z 1+2i --cmax 100 --no-timestamp --workers 1");
    const auto d = run("eisenstein --n 2 --z 1+2i --cmax 100 --no-timestamp --workers 4");
    EXPECT_EQ(c.out.substr(0, c.out.find("\"provenance\"")), d.out.substr(0, d.out.find("\"provenance\"")));
}

TEST(CliConfig, FileDefaultsAndOverrides)
{
    const std::string path = testing::TempDir() + "klf_cli_config.json";
    {
        std::ofstream f(path);
        f << R"({"n": 3, "cmax": 50, "z": "1+2i", "precision": {"euler_maclaurin_terms": 80}})";
    }
    const auto j = run_json("eisenstein --config " + path + " --cmax 60 --no-timestamp");
    EXPECT_EQ(j["inputs"]["group"], "GammaN(3)");
    EXPECT_EQ(j["inputs"]["z"], ojson::array({1.0, 2.0}));
    EXPECT_EQ(j["provenance"]["truncation"]["c_max"], 60);
    EXPECT_EQ(j["provenance"]["precision"]["euler_maclaurin_terms"], 80);
    {
        std::ofstream f(path);
        f << R"({"unknown": 1})";
    }
    EXPECT_EQ(run("cusps --n 2 --config " + path).code, 1);
    EXPECT_EQ(run("cusps --n 2 --config /nonexistent.json").code, 1);
}
