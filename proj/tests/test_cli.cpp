#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace latinlab;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("latinlab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    static std::string slurp(const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }

    int run(std::vector<std::string> args, std::string* out_text = nullptr, std::string* err_text = nullptr) {
        args.insert(args.begin(), "latinlab");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        const int code = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
        if (out_text) *out_text = out.str();
        if (err_text) *err_text = err.str();
        return code;
    }

    fs::path dir_;
};

} // namespace

TEST(Config, RoundTripsThroughText) {
    ExperimentConfig c;
    c.command = "census";
    c.n = 9;
    c.seed = 12345678901234ULL;
    c.samples = 77;
    c.burn_in = 5;
    c.workers = 3;
    c.out = "a b/c.csv";
    c.format = "json";
    c.d = 2;
    c.epsilon = {0.05, 1.0 / 3.0};
    c.exact = true;
    c.inject_fault = true;
    EXPECT_EQ(parse_config(to_config_text(c)), c);
    EXPECT_EQ(parse_config(to_config_text(ExperimentConfig{})), ExperimentConfig{});
}

TEST(Config, ParsesCommentsAndRejectsBadValues) {
    const auto c = parse_config("# comment\n n = 5 # trailing\n\nseed=3\nthin = 8\n");
    EXPECT_EQ(c.n, 5);
    EXPECT_EQ(c.seed, 3u);
    EXPECT_EQ(c.thin, std::optional<std::uint64_t>(8));
    EXPECT_FALSE(c.burn_in.has_value());
    EXPECT_THROW(parse_config("n = -1\n"), UsageError);
    EXPECT_THROW(parse_config("n = x\n"), UsageError);
    EXPECT_THROW(parse_config("bogus = 1\n"), UsageError);
    EXPECT_THROW(parse_config("n 5\n"), UsageError);
    EXPECT_THROW(parse_config("exact = maybe\n"), UsageError);
    try {
        parse_config("n = 4\nseed = -2\n", "cfg.txt");
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("cfg.txt:2"), std::string::npos);
    }
}

TEST(Config, BudgetPrecedence) {
    ExperimentConfig c;
    ::setenv("LATINLAB_BUDGET", "1234", 1);
    EXPECT_EQ(effective_budget(c, 9), 1234u);
    c.budget = 55;
    EXPECT_EQ(effective_budget(c, 9), 55u);
    ::unsetenv("LATINLAB_BUDGET");
    c.budget.reset();
    EXPECT_EQ(effective_budget(c, 9), 9u);
}

TEST(Table, CsvAndJsonMirrorEachOther) {
    Table t({"a", "b", "c"});
    t.add({1, 0.5, "x,y"});
    t.add({nullptr, true, std::nan("")});
    EXPECT_EQ(t.render("csv"), "a,b,c\n1,0.5,\"x,y\"\n,true,nan\n");
    const auto j = nlohmann::json::parse(t.render("json"));
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["c"], "x,y");
    EXPECT_TRUE(j[1]["a"].is_null());
    EXPECT_EQ(j[1]["c"], "nan");
    EXPECT_THROW(t.add({1}), Error);
}

TEST(Manifest, ValidatesAndFlagsProblems) {
    RunManifest m;
    m.command = "cover";
    m.config.command = "cover";
    m.output_path = "x.csv";
    const auto j = nlohmann::json::parse(m.to_json().dump());
    EXPECT_TRUE(validate_manifest(j).empty());
    auto broken = j;
    broken.erase("rng");
    broken["exit_code"] = 9;
    EXPECT_EQ(validate_manifest(broken).size(), 2u);
    EXPECT_FALSE(validate_manifest(nlohmann::json::array()).empty());
}

TEST_F(CliTest, CensusOfFileAndOfTwoByTwo) {
    std::ofstream(path("c4.txt")) << "4\n1 2 3 4\n2 3 4 1\n3 4 1 2\n4 1 2 3\n";
    std::ofstream(path("two.txt")) << "2\n1 2\n2 1\n";
    std::string out;
    ASSERT_EQ(run({"census", "--input", path("c4.txt")}, &out), 0);
    EXPECT_EQ(out.substr(0, out.find('\n')), "n,k,N,N_over_n2,max_per_row,per_row,pair_histogram");
    EXPECT_EQ(out.substr(out.find('\n') + 1, 6), "4,4,4,");
    ASSERT_EQ(run({"census", "--input", path("two.txt"), "--format", "json"}, &out), 0);
    EXPECT_EQ(nlohmann::json::parse(out)[0]["N"], 1);
}

TEST_F(CliTest, CensusParseErrorNamesFileAndLine) {
    // The header is line 1, so the third row is line 4.
    std::ofstream(path("bad.txt")) << "3\n1 2 3\n2 3 1\n2 1 3\n";
    std::string err;
    EXPECT_EQ(run({"census", "--input", path("bad.txt")}, nullptr, &err), 3);
    EXPECT_NE(err.find("bad.txt:4"), std::string::npos) << err;
    EXPECT_EQ(run({"census", "--input", path("missing.txt")}), 3);
}

TEST_F(CliTest, ExactBatchMeanAgreesWithOracle) {
    const std::string out = path("census.json");
    ASSERT_EQ(run({"census", "--n", "5", "--samples", "4000", "--exact", "--seed", "8", "--out", out, "--format", "json"}), 0);
    const auto rows = nlohmann::json::parse(slurp(out));
    double mean = 0, se = 0, exact = 0;
    for (const auto& r : rows) {
        if (r["statistic"] == "mean_N") mean = r["value"];
        if (r["statistic"] == "se_N") se = r["value"];
        if (r["statistic"] == "exact_mean_N") exact = r["value"];
    }
    EXPECT_NEAR(exact, 25.0 / 7.0, 1e-12);
    EXPECT_NEAR(mean, exact, 3 * se);
    EXPECT_TRUE(validate_manifest(nlohmann::json::parse(slurp(manifest_path_for(out)))).empty());
}

TEST_F(CliTest, EveryCommandWritesOutputAndValidManifest) {
    const std::vector<std::vector<std::string>> runs{
        {"census", "--n", "6", "--samples", "20"},
        {"sample", "--n", "5", "--samples", "5"},
        {"verify-facts", "--n", "4", "--n-max", "6", "--trials", "10"},
        {"class-ratios", "--n", "4"},
        {"enumerate", "--n", "4"},
        {"discrepancy", "--n", "10", "--boxes", "50"},
        {"bounds", "--n", "4", "--all-d"},
        {"cover", "--n", "30", "--k", "6", "--M", "500"},
        {"twist-count", "--n", "6", "--k", "2"},
    };
    for (const auto& r : runs) {
        auto args = r;
        const std::string out = path(r[0] + ".csv");
        args.insert(args.end(), {"--out", out});
        std::string err;
        ASSERT_EQ(run(args, nullptr, &err), 0) << r[0] << ": " << err;
        const auto manifest = nlohmann::json::parse(slurp(manifest_path_for(out)));
        EXPECT_TRUE(validate_manifest(manifest).empty()) << r[0];
        EXPECT_EQ(manifest["output"]["bytes"].get<std::size_t>(), slurp(out).size());
        EXPECT_FALSE(fs::exists(out + ".tmp"));
    }
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
    for (const auto& fmt : {"csv", "json"}) {
        const std::vector<std::string> base{"sample", "--n", "7", "--samples", "8", "--seed", "4", "--workers", "2", "--format", fmt};
        auto a = base, b = base;
        a.insert(a.end(), {"--out", path("a")});
        b.insert(b.end(), {"--out", path("b")});
        ASSERT_EQ(run(a), 0);
        ASSERT_EQ(run(b), 0);
        EXPECT_EQ(slurp(path("a")), slurp(path("b")));
    }
}

TEST_F(CliTest, ConfigFileIsOverriddenByFlags) {
    std::ofstream(path("run.cfg")) << "n = 4\nsamples = 3\nseed = 5\nformat = json\n";
    std::string from_file, overridden;
    ASSERT_EQ(run({"sample", "--config", path("run.cfg")}, &from_file), 0);
    EXPECT_EQ(nlohmann::json::parse(from_file).size(), 3u);
    ASSERT_EQ(run({"sample", "--config", path("run.cfg"), "--samples", "2", "--format", "csv"}, &overridden), 0);
    EXPECT_EQ(std::count(overridden.begin(), overridden.end(), '\n'), 3);
    EXPECT_EQ(run({"sample", "--config", path("nope.cfg")}), 3);
}

TEST_F(CliTest, FaultInjectionIsCaught) {
    const std::string out = path("vf.csv");
    std::string err;
    EXPECT_EQ(run({"verify-facts", "--n", "5", "--trials", "5", "--inject-fault", "--out", out}, nullptr, &err), 1);
    const std::string repro = slurp(out + ".reproducer.txt");
    EXPECT_NE(repro.find("check: input-valid"), std::string::npos);
    EXPECT_NE(repro.find("square:\n5\n"), std::string::npos);
    const auto manifest = nlohmann::json::parse(slurp(manifest_path_for(out)));
    EXPECT_EQ(manifest["exit_code"], 1);
    EXPECT_TRUE(validate_manifest(manifest).empty());
    EXPECT_EQ(run({"verify-facts", "--n", "5", "--trials", "5", "--out", out}), 0);
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run({"nonsense"}), 3);
    EXPECT_EQ(run({}), 3);
    EXPECT_EQ(run({"census", "--n", "-3"}), 3);
    EXPECT_EQ(run({"census", "--n", "5"}), 3);
    EXPECT_EQ(run({"sample", "--n", "4", "--samples", "1", "--format", "xml"}), 3);
    EXPECT_EQ(run({"enumerate", "--n", "6"}), 2);
    EXPECT_EQ(run({"class-ratios", "--n", "6"}), 2);
    EXPECT_EQ(run({"enumerate", "--n", "5", "--budget", "100"}), 2);
    EXPECT_EQ(run({"discrepancy", "--n", "5", "--strategy", "odd"}), 3);
    std::string out;
    EXPECT_EQ(run({"--help"}, &out), 0);
    EXPECT_NE(out.find("--samples"), std::string::npos);
}

TEST_F(CliTest, EnumerateResumesFromCheckpoint) {
    const std::string ck = path("ck.json");
    std::string first, second;
    ASSERT_EQ(run({"enumerate", "--n", "5", "--reduced", "--checkpoint", ck, "--max-units", "3", "--out", path("e1.csv")}), 0);
    const auto m1 = nlohmann::json::parse(slurp(manifest_path_for(path("e1.csv"))));
    EXPECT_FALSE(m1["summary"]["complete"].get<bool>());
    ASSERT_EQ(run({"enumerate", "--n", "5", "--reduced", "--checkpoint", ck, "--out", path("e2.csv")}), 0);
    const auto m2 = nlohmann::json::parse(slurp(manifest_path_for(path("e2.csv"))));
    EXPECT_TRUE(m2["summary"]["complete"].get<bool>());
    EXPECT_EQ(m2["summary"]["total"], 161280);
}

TEST_F(CliTest, BoundsAndCoverReports) {
    std::string out;
    ASSERT_EQ(run({"bounds", "--n", "4", "--format", "json"}, &out), 0);
    const auto rows = nlohmann::json::parse(out);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& r : rows) {
        EXPECT_EQ(r["sandwich_failures"], 0);
        EXPECT_TRUE(r["count_bound_holds"].get<bool>());
    }
    const std::string cov = path("cover.csv");
    ASSERT_EQ(run({"cover", "--n", "100", "--k", "20", "--M", "10000", "--out", cov}), 0);
    const auto m = nlohmann::json::parse(slurp(manifest_path_for(cov)));
    EXPECT_TRUE(m["summary"]["within_band"].get<bool>());
}
