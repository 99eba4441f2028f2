#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using namespace sepdist;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int code;
    std::string out;
};

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() / ("sepdist_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    CmdResult run(const std::string& args) {
        std::string out = (dir / "stdout.txt").string();
        std::string cmd = std::string(SEPDIST_CLI) + " " + args + " > " + out + " 2> " + (dir / "stderr.txt").string();
        int status = std::system(cmd.c_str());
        std::ifstream f(out);
        std::stringstream ss;
        ss << f.rdbuf();
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
    }
    std::string data(const std::string& name) { return std::string(SEPDIST_DATA_DIR) + "/" + name; }
    std::string path(const std::string& name) { return (dir / name).string(); }
    std::string slurp(const std::string& p) {
        std::ifstream f(p);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
    void write(const std::string& p, const json& j) { std::ofstream(p) << j.dump(2); }

    fs::path dir;
};

}  // namespace

TEST_F(CliTest, AnalyzeDarboux) {
    auto r = run("analyze " + data("darboux.json"));
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    EXPECT_EQ(j["kappa"], 0);
    EXPECT_TRUE(j["certificates"]["first_integrals"].get<bool>());
}

TEST_F(CliTest, AnalyzeClosed) {
    auto r = run("analyze " + data("closed.json"));
    ASSERT_EQ(r.code, 0);
    auto rep = report_from_json(json::parse(r.out));
    ASSERT_EQ(rep.kappa, 1u);
    SparsePoly x = SparsePoly::variable(3, 0), y = SparsePoly::variable(3, 1), z = SparsePoly::variable(3, 2);
    EXPECT_EQ(rep.H[0], (z - x * y) * rep.T[0][0]);
}

TEST_F(CliTest, AnalyzePairToFile) {
    auto r = run("analyze " + data("pair.json") + " --out " + path("pair_report.json"));
    ASSERT_EQ(r.code, 0);
    auto rep = report_from_json(read_json_file(path("pair_report.json")));
    EXPECT_EQ(rep.kappa, 1u);
    EXPECT_EQ(rep.T[0][0], -rep.T[0][1]);
}

TEST_F(CliTest, ParseErrors) {
    EXPECT_EQ(run("analyze " + path("missing.json")).code, 2);
    write(path("bad.json"), json{{"M", 2}, {"N", 1}, {"omega", {{{{"re", "1/0"}, {"K", {0, 0}}, {"dx", 1}}}}}});
    EXPECT_EQ(run("analyze " + path("bad.json")).code, 2);
    write(path("bad_dx.json"), json{{"M", 2}, {"N", 1}, {"omega", {{{{"re", "1"}, {"K", {0, 0}}, {"dx", 3}}}}}});
    EXPECT_EQ(run("analyze " + path("bad_dx.json")).code, 2);
    write(path("neg.json"), json{{"M", 2}, {"N", 1}, {"omega", {{{{"re", "1"}, {"K", {-1, 0}}, {"dx", 1}}}}}});
    EXPECT_EQ(run("analyze " + path("neg.json")).code, 2);
    std::ofstream(path("garbage.json")) << "{ not json";
    EXPECT_EQ(run("analyze " + path("garbage.json")).code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(CliTest, SynthesizeIsDeterministicAndVerifies) {
    std::string a = path("a.json"), b = path("b.json");
    ASSERT_EQ(run("synthesize " + data("contact3.json") + " --seed 3 --out " + a).code, 0);
    ASSERT_EQ(run("synthesize " + data("contact3.json") + " --seed 3 --out " + b).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    auto j = read_json_file(a);
    for (auto& [k, v] : j["certificates"].items()) EXPECT_TRUE(v.get<bool>()) << k;
    auto v = run("verify " + a);
    EXPECT_EQ(v.code, 0) << v.out;
    EXPECT_EQ(v.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, SynthesizeWarnsWhenKappaPositive) {
    auto r = run("synthesize " + data("pair.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_FALSE(json::parse(r.out)["warnings"].empty());
}

TEST_F(CliTest, VerifyCatchesCorruption) {
    std::string a = path("res.json");
    ASSERT_EQ(run("synthesize " + data("contact3.json") + " --out " + a).code, 0);
    auto j = read_json_file(a);

    auto bad_nu = j;
    bad_nu["nu"][0].back()["re"] = "12345/7";
    write(path("bad_nu.json"), bad_nu);
    auto r = run("verify " + path("bad_nu.json"));
    EXPECT_EQ(r.code, 5);
    EXPECT_NE(r.out.find("FAIL nu_solves"), std::string::npos) << r.out;

    auto bad_s = j;
    bad_s["S_factors"][0] = json::array({json{{"re", "1"}, {"im", "0"}, {"K", {1, 0}}}, json{{"re", "1"}, {"im", "0"}, {"K", {0, 0}}}});
    write(path("bad_s.json"), bad_s);
    r = run("verify " + path("bad_s.json"));
    EXPECT_EQ(r.code, 5);
    EXPECT_NE(r.out.find("FAIL s_invariant"), std::string::npos) << r.out;
}

TEST_F(CliTest, VerifyDistribution) {
    for (auto name : {"darboux.json", "closed.json", "pair.json", "contact3.json"}) {
        auto r = run("verify " + data(name));
        EXPECT_EQ(r.code, 0) << name << "\n" << r.out;
    }
}

TEST_F(CliTest, SimulateBudgets) {
    std::string res = path("res.json");
    ASSERT_EQ(run("synthesize " + data("contact3.json") + " --out " + res).code, 0);
    ASSERT_EQ(run("simulate " + data("contact3.json") + " " + res + " --budget 1 --out " + path("one.json")).code, 0);
    auto one = read_json_file(path("one.json"));
    EXPECT_EQ(one["cells_hit"], 1);
    EXPECT_LT(one["fraction"].get<double>(), 0.05);
    ASSERT_EQ(run("simulate " + data("contact3.json") + " " + res + " --budget 500 --out " + path("many.json")).code, 0);
    auto many = read_json_file(path("many.json"));
    EXPECT_GT(many["fraction"].get<double>(), one["fraction"].get<double>());
    std::string csv = slurp(path("many.csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 501);
}

TEST_F(CliTest, SimulateRejectsMismatchedResult) {
    std::string res = path("res.json");
    ASSERT_EQ(run("synthesize " + data("contact3.json") + " --out " + res).code, 0);
    EXPECT_EQ(run("simulate " + data("darboux.json") + " " + res).code, 2);
}

TEST_F(CliTest, SimulateClosedFormSingleCell) {
    std::string res = path("res.json");
    ASSERT_EQ(run("synthesize " + data("closed.json") + " --out " + res).code, 0);
    auto r = run("simulate " + data("closed.json") + " " + res + " --budget 100 --out " + path("sim.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(read_json_file(path("sim.json"))["cells_hit"], 1);
}
