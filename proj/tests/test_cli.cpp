#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "latsum/io.hpp"

using namespace latsum;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

std::string cli() {
    const char* p = std::getenv("LATSUM_CLI");
    return p ? p : "latsum_cli";
}

std::string fixture(const std::string& name) { return std::string(LATSUM_DATA_DIR) + "/fixtures/" + name; }

Run run(const std::string& args, bool merge_stderr = false) {
    std::string cmd = cli() + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

}  // namespace

TEST(Cli, EvalExact) {
    auto r = run("eval --arrangement " + fixture("a1_alpha1.json") + " --k 2,2,2 --y 0 --mode exact");
    ASSERT_EQ(r.code, 0) << r.out;
    auto rec = record_from_json(json::parse(r.out));
    EXPECT_EQ(rec.S, "pi^2/2 - 39/8");
    EXPECT_EQ(rec.mode, "exact");
    EXPECT_EQ(rec.order, 6);
    EXPECT_GE(rec.timing_ms, 0);
    EXPECT_EQ(parse_scalar(rec.S), ExactScalar::pi_pow(2) / ExactScalar(2) - ExactScalar(Q(39, 8)));
    EXPECT_EQ(parse_scalar(rec.C) * parse_scalar("-(2*pi*i)^6/8"), parse_scalar(rec.S));
}

TEST(Cli, EvalNumericMatchesExactEmbedding) {
    auto ex = json::parse(run("eval --arrangement " + fixture("a1_alpha1.json") + " --k 2,2,2 --y 0").out);
    auto r = run("eval --arrangement " + fixture("a1_alpha1.json") + " --k 2,2,2 --y 0 --mode numeric --precision 128");
    ASSERT_EQ(r.code, 0);
    auto nu = json::parse(r.out);
    std::string a = ex.at("S_numeric"), b = nu.at("S");
    ASSERT_GE(a.size(), 32u);
    EXPECT_EQ(a.substr(0, 32), b.substr(0, 32));
    EXPECT_EQ(b.substr(0, 9), "0.0598022");
}

TEST(Cli, EvalInfeasibleConstraintIsZero) {
    auto r = run("eval --arrangement " + fixture("three_lines.json") + " --k 0,1,2 --y 1/7,1/11");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out).at("S"), "0");
}

TEST(Cli, EvalCsvAndOutFile) {
    auto p = std::filesystem::temp_directory_path() / "latsum_cli_eval.csv";
    auto r = run("eval --arrangement " + fixture("a1_alpha2.json") + " --k 2,2,2 --format csv --out " + p.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(p);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "S,C,mode,order,N_cyclotomic,timing_ms");
    EXPECT_EQ(row.substr(0, 20), "\"pi^2/32 - 39/512\",\"");
    std::filesystem::remove(p);
}

TEST(Cli, ExactOutputIsByteStable) {
    std::string base = "eval --omit-timing --arrangement " + fixture("three_lines.json") + " --k 2,1,1 --y 1/7,1/11";
    auto a = run(base);
    auto b = run(base);
    auto c = run(base + " --threads 3");
    auto d = run(base + " --route series");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    EXPECT_EQ(json::parse(a.out).at("S"), json::parse(d.out).at("S"));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("eval --arrangement /nonexistent.json --k 1").code, 1);
    EXPECT_EQ(run("eval --arrangement " + fixture("a1_alpha1.json") + " --k 2,2").code, 1);
    EXPECT_EQ(run("eval --arrangement " + fixture("a1_alpha1.json") + " --k 2,2,2 --y x").code, 1);
    EXPECT_EQ(run("eval --arrangement " + fixture("a1_alpha1.json")).code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("verify polytope --arrangement " + fixture("three_lines.json") + " --y 0,0").code, 2);
    EXPECT_EQ(run("verify hierarchy --arrangement " + fixture("a1_alpha1.json") + " --remove nope").code, 1);
    EXPECT_EQ(run("verify hierarchy --arrangement " + fixture("a1_alpha1.json") + " --remove f-1,f0,f1").code, 1);
}

TEST(Cli, ExcludedPointExitCode) {
    // weight one on an indispensable functional, y on its excluded hyperplane
    auto tmp = std::filesystem::temp_directory_path() / "latsum_cli_line.json";
    std::ofstream(tmp) << R"({"rank": 1, "functionals": [{"direction": [1], "constant": 0}]})";
    EXPECT_EQ(run("eval --arrangement " + tmp.string() + " --k 1 --y 0").code, 2);
    EXPECT_EQ(run("eval --arrangement " + tmp.string() + " --k 1 --y 1/3").code, 0);
    std::filesystem::remove(tmp);
}

TEST(Cli, ReproduceExamples) {
    auto r = run("reproduce-examples --only line-S222");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("3/3 passed"), std::string::npos) << r.out;

    auto dir = std::filesystem::temp_directory_path() / "latsum_cli_manifest";
    std::filesystem::create_directories(dir);
    json m = {{"entries",
               {{{"id", "wrong"},
                 {"arrangement", fixture("a1_alpha1.json")},
                 {"k", {2, 2, 2}},
                 {"y", {"0"}},
                 {"expected", "pi^2/2 - 39/7"}}}}};
    std::ofstream(dir / "manifest.json") << m.dump();
    auto w = run("reproduce-examples --manifest " + (dir / "manifest.json").string());
    EXPECT_EQ(w.code, 4);
    EXPECT_NE(w.out.find("FAIL"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Cli, VerifyOracle) {
    auto r = run("verify oracle --arrangement " + fixture("a1_alpha1.json") + " --k 2,2,2 --y 0 --N 250,500,1000,2000");
    ASSERT_EQ(r.code, 0) << r.out;
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "N,re_Z,im_Z,error,diff_next");
    std::vector<double> err;
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
        ASSERT_EQ(cols.size(), 5u);
        err.push_back(std::stod(cols[3]));
    }
    ASSERT_EQ(err.size(), 4u);
    for (std::size_t i = 1; i < err.size(); ++i) EXPECT_LT(err[i], err[i - 1]);
    EXPECT_LT(err.back(), 1e-3);
}

TEST(Cli, VerifyOracleFailsWithImpossibleTolerance) {
    auto r = run("verify oracle --arrangement " + fixture("a1_alpha1.json") + " --k 2,2,2 --N 10,20 --tol 1e-30");
    EXPECT_EQ(r.code, 4);
}

TEST(Cli, VerifyPolytope) {
    auto r = run("verify polytope --arrangement " + fixture("three_lines.json") + " --y 1/7,1/11", true);
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("max discrepancy: 0 (exact)"), std::string::npos) << r.out;
}

TEST(Cli, VerifyHierarchy) {
    auto r = run("verify hierarchy --arrangement " + fixture("a1_alpha1.json") + " --remove f0", true);
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("max discrepancy: 0 (exact)"), std::string::npos) << r.out;
    auto n = run("verify hierarchy --mode numeric --arrangement " + fixture("three_lines.json") +
                 " --remove f3 --y 1/7,1/11 --order 4");
    EXPECT_EQ(n.code, 0) << n.out;
}
