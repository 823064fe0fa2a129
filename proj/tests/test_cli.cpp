#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rankfd/cli.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / "rankfd_cli_tests";
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path p = temp_dir() / name;
    std::ofstream f(p, std::ios::binary);
    f << content;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int code = rankfd::cli::run(args, out, err);
    if (out_text) *out_text = out.str();
    if (err_text) *err_text = err.str();
    return code;
}

}  // namespace

TEST_CASE("test command on an all-constant dataset", "[cli]") {
    const fs::path data = write_file("constant.csv",
                                     "group,subject,t1,t2\n"
                                     "g1,s1,3,3\ng1,s2,3,3\ng1,s3,3,3\n"
                                     "g2,s1,3,3\ng2,s2,3,3\ng2,s3,3,3\n");
    std::string out;
    const int code = run_cli({"test", "--data", data.string(), "--hypothesis", "interaction",
                              "--B", "25", "--seed", "4", "--out", "json"},
                             &out);
    REQUIRE(code == 0);
    const auto j = nlohmann::json::parse(out);
    for (const auto& s : j["results"][0]["statistics"]) {
        CHECK(s["value"] == 0.0);
        CHECK(s["p_bootstrap"] == 1.0);
    }
}

TEST_CASE("identical seeds give byte-identical JSON reports", "[cli]") {
    const fs::path data = write_file("twobythree.csv",
                                     "group,subject,t1,t2,t3\n"
                                     "g1,s1,4,NA,6\ng1,s2,2,3,9\ng1,s3,7,1,5\ng1,s4,3,8,2\n"
                                     "g2,s1,1,8,2\ng2,s2,3,6,4\ng2,s3,5,NA,7\ng2,s4,9,2,6\n");
    const fs::path out1 = temp_dir() / "report1.json";
    const fs::path out2 = temp_dir() / "report2.json";
    const std::vector<std::string> base{"test",         "--data",   data.string(),
                                        "--hypothesis", "interaction", "--B",
                                        "99",           "--seed",   "31",
                                        "--out",        "json"};
    auto with_outfile = [&](const fs::path& p) {
        auto args = base;
        args.push_back("--out-file");
        args.push_back(p.string());
        return args;
    };
    REQUIRE(run_cli(with_outfile(out1)) == 0);
    REQUIRE(run_cli(with_outfile(out2)) == 0);
    const std::string text1 = slurp(out1);
    CHECK(text1 == slurp(out2));

    // Interaction on a 2 x 3 layout: WTS has rank(C) = 2 degrees of freedom.
    const auto j = nlohmann::json::parse(text1);
    CHECK(j["results"][0]["statistics"][0]["statistic"] == "wts");
    CHECK(j["results"][0]["statistics"][0]["dof"] == 2.0);
}

TEST_CASE("custom contrasts load from CSV", "[cli]") {
    const fs::path data = write_file("custom_data.csv",
                                     "group,subject,t1,t2\n"
                                     "g1,s1,1,5\ng1,s2,7,3\ng1,s3,4,8\n"
                                     "g2,s1,2,9\ng2,s2,6,1\ng2,s3,8,5\n");
    const fs::path contrast = write_file("contrast.csv", "1,-1,-1,1\n");
    std::string out;
    const int code =
        run_cli({"test", "--data", data.string(), "--hypothesis",
                 "custom:" + contrast.string(), "--B", "19", "--seed", "2", "--out", "json"},
                &out);
    REQUIRE(code == 0);
    const auto j = nlohmann::json::parse(out);
    CHECK(j["results"][0]["hypothesis"] == "custom");
}

TEST_CASE("simulate writes a per-replication log and a one-row summary", "[cli]") {
    const fs::path cfg = write_file("minimal.json", R"({
      "seed": 12, "nsim": 2, "B": 9,
      "design": {"a": 2, "d": 2, "n": [5, 5]},
      "statistics": ["mats"],
      "hypotheses": ["interaction"],
      "marginals": ["normal"],
      "covariances": ["cs"],
      "missingness": [{"mechanism": "none"}]
    })");
    const fs::path out_dir = temp_dir() / "sim_minimal";
    std::string out;
    REQUIRE(run_cli({"simulate", "--config", cfg.string(), "--out-dir", out_dir.string()},
                    &out) == 0);

    const std::string reps = slurp(out_dir / "replications.csv");
    int rep_lines = 0;
    for (char c : reps) rep_lines += c == '\n';
    CHECK(rep_lines == 3);  // header + one row per replication

    const std::string summary = slurp(out_dir / "summary.csv");
    int summary_lines = 0;
    for (char c : summary) summary_lines += c == '\n';
    CHECK(summary_lines == 2);  // header + single mats/bootstrap row

    CHECK(!slurp(out_dir / "results.json").empty());
}

TEST_CASE("config errors name the offending field and exit 3", "[cli]") {
    const fs::path cfg = write_file("bad_marginal.json", R"({
      "design": {"a": 2, "d": 2, "n": [5, 5]},
      "hypotheses": ["interaction"],
      "marginals": ["weibull"],
      "covariances": ["cs"],
      "missingness": [{"mechanism": "none"}]
    })");
    std::string err;
    const int code = run_cli(
        {"simulate", "--config", cfg.string(), "--out-dir", (temp_dir() / "x").string()},
        nullptr, &err);
    CHECK(code == 3);
    CHECK(err.find("/marginals/0") != std::string::npos);
    CHECK(err.find("weibull") != std::string::npos);
}

TEST_CASE("exit codes distinguish usage and data errors", "[cli]") {
    std::string err;
    CHECK(run_cli({"test", "--no-such-flag"}, nullptr, &err) == 2);
    CHECK(run_cli({"test"}, nullptr, &err) == 2);  // --data/--hypothesis required
    CHECK(run_cli({}, nullptr, &err) == 2);

    CHECK(run_cli({"test", "--data", (temp_dir() / "absent.csv").string(), "--hypothesis",
                   "interaction"},
                  nullptr, &err) == 3);

    const fs::path tiny = write_file("tiny.csv", "group,subject,t1\ng1,s1,1\ng1,s2,2\n");
    CHECK(run_cli({"test", "--data", tiny.string(), "--hypothesis", "time"}, nullptr, &err) ==
          3);  // d = 1: InvalidDesign is a data-level failure
}

TEST_CASE("thread counts do not alter the JSON report", "[cli]") {
    const fs::path data = write_file("threads.csv",
                                     "group,subject,t1,t2\n"
                                     "g1,s1,5,2\ng1,s2,8,6\ng1,s3,1,9\ng1,s4,4,7\n"
                                     "g2,s1,3,1\ng2,s2,9,4\ng2,s3,6,8\ng2,s4,2,5\n");
    const fs::path one = temp_dir() / "threads1.json";
    const fs::path eight = temp_dir() / "threads8.json";
    REQUIRE(run_cli({"test", "--data", data.string(), "--hypothesis", "group", "--B", "199",
                     "--seed", "9", "--out", "json", "--threads", "1", "--out-file",
                     one.string()}) == 0);
    REQUIRE(run_cli({"test", "--data", data.string(), "--hypothesis", "group", "--B", "199",
                     "--seed", "9", "--out", "json", "--threads", "8", "--out-file",
                     eight.string()}) == 0);
    CHECK(slurp(one) == slurp(eight));
}
