#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rankfd/io.hpp"
#include "rankfd/simulation.hpp"

namespace rankfd::cli {

// Exit codes: 0 success (regardless of test outcomes), 2 usage error,
// 3 data/config error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

namespace detail {

struct TestOptions {
    std::string data_path;
    std::string format = "wide";
    std::string group_column = "group";
    std::string subject_column = "subject";
    std::vector<std::string> occasion_columns;
    std::string occasion_column = "occasion";
    std::string value_column = "value";
    std::string missing_token = "NA";
    std::vector<std::string> hypotheses;
    std::vector<std::string> statistics = {"wts", "ats", "mats"};
    int replicates = 999;
    std::uint64_t seed = 1;
    double alpha = 0.05;
    std::string out_format = "table";
    std::string out_file;
    int threads = 0;
};

struct SimulateOptions {
    std::string config_path;
    std::string out_dir;
    int threads = -1;  // -1: take the value from the config file
};

inline StatKind stat_from_flag(const std::string& s) {
    if (s == "wts") return StatKind::WTS;
    if (s == "ats") return StatKind::ATS;
    if (s == "mats") return StatKind::MATS;
    throw ConfigError("unknown statistic \"" + s + "\" (expected wts|ats|mats)");
}

inline int run_test(const TestOptions& opt, std::ostream& out) {
    TableSchema schema;
    schema.format = opt.format == "long" ? TableFormat::Long : TableFormat::Wide;
    schema.group_column = opt.group_column;
    schema.subject_column = opt.subject_column;
    schema.occasion_columns = opt.occasion_columns;
    schema.occasion_column = opt.occasion_column;
    schema.value_column = opt.value_column;
    schema.missing_token = opt.missing_token;

    const ValidatedDataset v = validate(read_dataset_file(opt.data_path, schema));
    const int a = v.data.num_groups();
    const int d = v.data.num_occasions();

    BootstrapConfig boot;
    boot.replicates = opt.replicates;
    boot.seed = opt.seed;
    boot.statistics.clear();
    for (const std::string& s : opt.statistics) boot.statistics.push_back(stat_from_flag(s));

    const int threads = resolve_threads(opt.threads);
    std::vector<TestReport> reports;
    for (const std::string& hyp : opt.hypotheses) {
        ContrastSpec contrast;
        if (hyp == "group") {
            contrast = hypothesis_matrix(a, d, Hypothesis::Group);
        } else if (hyp == "time") {
            contrast = hypothesis_matrix(a, d, Hypothesis::Time);
        } else if (hyp == "interaction") {
            contrast = hypothesis_matrix(a, d, Hypothesis::Interaction);
        } else if (hyp.rfind("custom:", 0) == 0) {
            const std::string path = hyp.substr(7);
            std::ifstream in(path);
            if (!in) throw ParseError("cannot open contrast file \"" + path + "\"");
            contrast = custom_contrast(read_contrast_csv(in), a, d);
        } else {
            throw ConfigError("unknown hypothesis \"" + hyp +
                              "\" (expected group|time|interaction|custom:<path>)");
        }
        reports.push_back(bootstrap_pvalue(v, contrast, boot, threads));
    }

    std::string rendered;
    if (opt.out_format == "json") {
        rendered = report_to_json(reports, a, d, v.counts.group_sizes, v.counts.observations,
                                  opt.alpha)
                       .dump(2);
        rendered += "\n";
    } else {
        rendered = render_table(reports);
    }
    if (!opt.out_file.empty()) {
        std::ofstream f(opt.out_file, std::ios::binary);
        if (!f) throw ParseError("cannot write \"" + opt.out_file + "\"");
        f << rendered;
    } else {
        out << rendered;
    }
    return kExitOk;
}

inline int run_simulate(const SimulateOptions& opt, std::ostream& out) {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot open config \"" + opt.config_path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    SimulationConfig cfg = parse_config_text(buf.str());
    if (opt.threads >= 0) cfg.threads = opt.threads;
    cfg.threads = resolve_threads(cfg.threads);

    const SimulationResult result = simulate(cfg);

    namespace fs = std::filesystem;
    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    {
        std::ofstream f(dir / "summary.csv", std::ios::binary);
        if (!f) throw ConfigError("cannot write summary.csv in \"" + opt.out_dir + "\"");
        write_summary_csv(result, f);
    }
    {
        std::ofstream f(dir / "replications.csv", std::ios::binary);
        write_replication_csv(result, f);
    }
    {
        std::ofstream f(dir / "results.json", std::ios::binary);
        f << result_to_json(result).dump(2) << "\n";
    }
    out << "wrote " << (dir / "summary.csv").string() << ", "
        << (dir / "replications.csv").string() << ", " << (dir / "results.json").string()
        << "\n";
    return kExitOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"Rank-based tests for incompletely observed factorial repeated measures"};
    app.require_subcommand(1);

    detail::TestOptions topt;
    CLI::App* test = app.add_subcommand(
        "test", "Run WTS/ATS/MATS tests with wild-bootstrap p-values on a CSV dataset");
    test->add_option("--data", topt.data_path, "Dataset CSV path")->required();
    test->add_option("--format", topt.format, "Table layout")
        ->check(CLI::IsMember({"wide", "long"}))
        ->capture_default_str();
    test->add_option("--group-col", topt.group_column, "Group column name")
        ->capture_default_str();
    test->add_option("--subject-col", topt.subject_column, "Subject column name")
        ->capture_default_str();
    test->add_option("--occasion-cols", topt.occasion_columns,
                     "Wide format: occasion column names (default: all other columns)")
        ->delimiter(',');
    test->add_option("--occasion-col", topt.occasion_column, "Long format: occasion column")
        ->capture_default_str();
    test->add_option("--value-col", topt.value_column, "Long format: value column")
        ->capture_default_str();
    test->add_option("--missing-token", topt.missing_token, "Missing-value token")
        ->capture_default_str();
    test->add_option("--hypothesis", topt.hypotheses,
                     "Hypothesis: group, time, interaction, or custom:<contrast.csv>; repeatable")
        ->required();
    test->add_option("--stats", topt.statistics, "Statistics subset (wts,ats,mats)")
        ->delimiter(',')
        ->check(CLI::IsMember({"wts", "ats", "mats"}));
    test->add_option("--B", topt.replicates, "Bootstrap replicates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    test->add_option("--seed", topt.seed, "Master seed")->capture_default_str();
    test->add_option("--alpha", topt.alpha, "Nominal level (echoed in reports)")
        ->capture_default_str();
    test->add_option("--out", topt.out_format, "Output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    test->add_option("--out-file", topt.out_file, "Write output to a file instead of stdout");
    test->add_option("--threads", topt.threads, "Worker threads (0 = auto)")
        ->capture_default_str();

    detail::SimulateOptions sopt;
    CLI::App* sim = app.add_subcommand("simulate", "Run a Monte Carlo study from a JSON config");
    sim->add_option("--config", sopt.config_path, "Simulation config JSON")->required();
    sim->add_option("--out-dir", sopt.out_dir, "Output directory")->required();
    sim->add_option("--threads", sopt.threads, "Override the config's thread count (0 = auto)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (test->parsed()) return detail::run_test(topt, out);
        return detail::run_simulate(sopt, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
}

/// Argv-style convenience overload for tests.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    static const char* name = "rankfd";
    argv.push_back(name);
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace rankfd::cli
