#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rankfd/bootstrap.hpp"
#include "rankfd/datagen.hpp"

namespace rankfd {

/// A marginal law for the generator grid: one of the continuous copula
/// marginals, or the discrete ordinal model with association parameter c.
struct MarginalSpec {
    bool ordinal = false;
    Marginal family = Marginal::Normal;
    double ordinal_c = 1.0;

    std::string name() const {
        if (!ordinal) return marginal_name(family);
        std::ostringstream os;
        os << "ordinal(c=" << ordinal_c << ")";
        return os.str();
    }
};

/// Location alternative mu_1 = zeta * pattern added to one group before
/// missingness injection; zeta = 0 recovers the null configuration.
struct AlternativeSpec {
    int group = 0;  // 0-based
    Vector pattern;
    std::vector<double> zeta;
};

struct SimulationConfig {
    std::uint64_t seed = 1;
    int nsim = 2000;       // desk-scale default; full-scale studies (10000) work unchanged
    int replicates = 499;  // B; 999 at full scale
    double alpha = 0.05;
    int threads = 1;
    int a = 2;
    int d = 4;
    std::vector<int> group_sizes;
    std::vector<StatKind> statistics = {StatKind::WTS, StatKind::ATS, StatKind::MATS};
    std::vector<Hypothesis> hypotheses;
    std::vector<MarginalSpec> marginals;
    std::vector<CovSetting> covariances;
    std::vector<MissingnessSpec> missingness;
    std::optional<AlternativeSpec> alternative;
};

/// One grid cell of the study. The key() string both labels output rows and
/// seeds the cell, so every cell's stream is independent of the rest of the
/// grid.
struct CellDescriptor {
    MarginalSpec marginal;
    std::optional<CovSetting> covariance;  // absent for the ordinal model
    MissingnessSpec missing;
    Hypothesis hypothesis = Hypothesis::Interaction;
    double zeta = 0.0;
    int a = 0;
    int d = 0;
    std::vector<int> group_sizes;

    std::string key() const {
        std::ostringstream os;
        os.precision(17);
        os << "marginal=" << marginal.name()
           << ";cov=" << (covariance ? cov_setting_name(*covariance) : "none")
           << ";mech=" << mechanism_name(missing.mechanism);
        if (missing.mechanism == Mechanism::MCAR) os << ";rate=" << missing.rate;
        if (!missing.pairs.empty()) {
            os << ";pairs=";
            for (const MarPair& p : missing.pairs) {
                os << "(" << p.determining + 1 << "," << p.target + 1 << ")";
            }
        }
        os << ";hyp=" << hypothesis_name(hypothesis) << ";zeta=" << zeta << ";a=" << a
           << ";d=" << d << ";n=";
        for (std::size_t i = 0; i < group_sizes.size(); ++i) {
            if (i) os << ",";
            os << group_sizes[i];
        }
        return os.str();
    }
};

/// Per-replication record: asymptotic and bootstrap p-values by statistic,
/// or ok = false when the generated dataset failed validation (e.g. a cell
/// lost too many observations).
struct ReplicationOutcome {
    bool ok = false;
    std::array<std::optional<double>, kStatKinds> p_asymptotic;
    std::array<std::optional<double>, kStatKinds> p_bootstrap;
    std::array<int, kStatKinds> degenerate{};
};

struct VariantSummary {
    StatKind kind = StatKind::WTS;
    bool bootstrap = false;
    long long valid = 0;       // replications contributing a p-value
    long long rejections = 0;  // p <= alpha
    double rate = 0.0;
    double mc_se = 0.0;
};

struct CellResult {
    CellDescriptor desc;
    long long requested = 0;
    long long valid = 0;
    long long failed = 0;  // dataset generation/validation failures
    std::array<long long, kStatKinds> degenerate_replicates{};
    std::vector<ReplicationOutcome> replications;
    std::vector<VariantSummary> summaries;
};

struct SimulationResult {
    SimulationConfig config;
    std::vector<CellResult> cells;
};

namespace detail {

inline std::string fmt_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline void validate_sim_config(const SimulationConfig& cfg) {
    if (cfg.nsim < 1) throw ConfigError("nsim must be >= 1");
    if (cfg.replicates < 1) throw ConfigError("B must be >= 1");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    if (cfg.a < 1 || cfg.d < 1) throw ConfigError("design needs a >= 1 and d >= 1");
    if (static_cast<int>(cfg.group_sizes.size()) != cfg.a) {
        throw ConfigError("design needs one group size per group");
    }
    for (int ni : cfg.group_sizes) {
        if (ni < 2) throw ConfigError("group sizes must be >= 2");
    }
    if (cfg.statistics.empty()) throw ConfigError("statistics list is empty");
    if (cfg.hypotheses.empty()) throw ConfigError("hypotheses list is empty");
    if (cfg.marginals.empty()) throw ConfigError("marginals list is empty");
    if (cfg.missingness.empty()) throw ConfigError("missingness list is empty");
    bool has_continuous = false;
    for (const MarginalSpec& m : cfg.marginals) has_continuous |= !m.ordinal;
    if (has_continuous && cfg.covariances.empty()) {
        throw ConfigError("continuous marginals need at least one covariance setting");
    }
    if (cfg.alternative) {
        if (cfg.alternative->group < 0 || cfg.alternative->group >= cfg.a) {
            throw ConfigError("alternative group index out of range");
        }
        if (cfg.alternative->pattern.size() != cfg.d) {
            throw ConfigError("alternative pattern length must equal d");
        }
        if (cfg.alternative->zeta.empty()) throw ConfigError("alternative zeta grid is empty");
    }
    for (const MissingnessSpec& m : cfg.missingness) {
        if (m.mechanism == Mechanism::MCAR && (m.rate < 0.0 || m.rate >= 1.0)) {
            throw ConfigError("mcar rate must lie in [0, 1)");
        }
        if ((m.mechanism == Mechanism::MAR1 || m.mechanism == Mechanism::MAR2)) {
            validate_mar_pairs(m.pairs.empty() ? default_mar_pairs(cfg.d) : m.pairs, cfg.d);
        }
    }
}

inline IncompleteDataset generate_cell_dataset(const SimulationConfig& cfg,
                                               const CellDescriptor& cell, Rng& rng) {
    IncompleteDataset data;
    if (cell.marginal.ordinal) {
        data = ordinal_sample(cell.marginal.ordinal_c, cfg.a, cfg.d, cfg.group_sizes, rng);
    } else {
        GeneratorSpec gen;
        gen.a = cfg.a;
        gen.d = cfg.d;
        gen.group_sizes = cfg.group_sizes;
        gen.marginal = cell.marginal.family;
        gen.covariance = *cell.covariance;
        data = copula_sample(gen, rng);
    }
    if (cfg.alternative && cell.zeta != 0.0) {
        data = shift_alternative(std::move(data), cfg.alternative->group,
                                 cell.zeta * cfg.alternative->pattern);
    }
    return apply_missingness(std::move(data), cell.missing, rng);
}

inline CellResult run_cell(const SimulationConfig& cfg, const CellDescriptor& cell,
                           const ContrastSpec& contrast) {
    const std::uint64_t cell_seed = derive_seed(cfg.seed, hash_label(cell.key()));

    CellResult result;
    result.desc = cell;
    result.requested = cfg.nsim;
    result.replications.assign(static_cast<std::size_t>(cfg.nsim), ReplicationOutcome{});

    parallel_for(cfg.nsim, cfg.threads, [&](std::int64_t rep) {
        const std::uint64_t rep_seed = derive_seed(cell_seed, static_cast<std::uint64_t>(rep));
        Rng rng(rep_seed);
        ReplicationOutcome& out = result.replications[static_cast<std::size_t>(rep)];
        try {
            ValidatedDataset v = validate(generate_cell_dataset(cfg, cell, rng));
            BootstrapConfig boot;
            boot.replicates = cfg.replicates;
            boot.seed = derive_seed(rep_seed, 0x626f6f74ULL);  // independent of the data stream
            boot.statistics = cfg.statistics;
            const TestReport report = bootstrap_pvalue(v, contrast, boot, /*threads=*/1);
            out.ok = true;
            for (std::size_t s = 0; s < cfg.statistics.size(); ++s) {
                const int idx = static_cast<int>(cfg.statistics[s]);
                const StatReport& sr = report.statistics[s];
                out.p_asymptotic[idx] = sr.observed.p_asymptotic;
                out.p_bootstrap[idx] = sr.p_bootstrap;
                out.degenerate[idx] = sr.degenerate_replicates;
            }
        } catch (const Error&) {
            out.ok = false;  // recorded, not aborting
        }
    });

    for (const ReplicationOutcome& out : result.replications) {
        if (out.ok) {
            ++result.valid;
            for (int idx = 0; idx < kStatKinds; ++idx) {
                result.degenerate_replicates[static_cast<std::size_t>(idx)] += out.degenerate[static_cast<std::size_t>(idx)];
            }
        } else {
            ++result.failed;
        }
    }

    for (StatKind kind : cfg.statistics) {
        const auto idx = static_cast<std::size_t>(kind);
        for (bool bootstrap_variant : {false, true}) {
            if (!bootstrap_variant && kind == StatKind::MATS) continue;  // no asymptotic law
            VariantSummary s;
            s.kind = kind;
            s.bootstrap = bootstrap_variant;
            for (const ReplicationOutcome& out : result.replications) {
                if (!out.ok) continue;
                const std::optional<double>& p =
                    bootstrap_variant ? out.p_bootstrap[idx] : out.p_asymptotic[idx];
                if (!p) continue;
                ++s.valid;
                if (*p <= cfg.alpha) ++s.rejections;
            }
            if (s.valid > 0) {
                s.rate = static_cast<double>(s.rejections) / static_cast<double>(s.valid);
                s.mc_se = std::sqrt(s.rate * (1.0 - s.rate) / static_cast<double>(s.valid));
            }
            result.summaries.push_back(s);
        }
    }
    return result;
}

inline SimulationResult run_grid(const SimulationConfig& cfg) {
    validate_sim_config(cfg);

    // Build every contrast up front so an unsupported hypothesis fails at
    // planning time, before any simulation work.
    std::vector<ContrastSpec> contrasts;
    contrasts.reserve(cfg.hypotheses.size());
    for (Hypothesis h : cfg.hypotheses) {
        contrasts.push_back(hypothesis_matrix(cfg.a, cfg.d, h));
    }

    const std::vector<double> zetas =
        cfg.alternative ? cfg.alternative->zeta : std::vector<double>{0.0};

    SimulationResult result;
    result.config = cfg;
    for (const MarginalSpec& marginal : cfg.marginals) {
        const std::vector<std::optional<CovSetting>> covs =
            marginal.ordinal ? std::vector<std::optional<CovSetting>>{std::nullopt}
                             : [&] {
                                   std::vector<std::optional<CovSetting>> cs;
                                   for (CovSetting c : cfg.covariances) cs.emplace_back(c);
                                   return cs;
                               }();
        for (const std::optional<CovSetting>& cov : covs) {
            for (const MissingnessSpec& missing : cfg.missingness) {
                for (std::size_t h = 0; h < cfg.hypotheses.size(); ++h) {
                    for (double zeta : zetas) {
                        CellDescriptor cell;
                        cell.marginal = marginal;
                        cell.covariance = cov;
                        cell.missing = missing;
                        cell.hypothesis = cfg.hypotheses[h];
                        cell.zeta = zeta;
                        cell.a = cfg.a;
                        cell.d = cfg.d;
                        cell.group_sizes = cfg.group_sizes;
                        result.cells.push_back(run_cell(cfg, cell, contrasts[h]));
                    }
                }
            }
        }
    }
    return result;
}

}  // namespace detail

/// Type-I error study: every cell is a null configuration, so no alternative
/// may be present in the config.
inline SimulationResult simulate_type1(const SimulationConfig& cfg) {
    if (cfg.alternative) {
        throw ConfigError("type-I study must not carry an alternative; use simulate_power");
    }
    return detail::run_grid(cfg);
}

/// Power study over the alternative's zeta grid. The zeta = 0 rows double as
/// a type-I check with identical seeds.
inline SimulationResult simulate_power(const SimulationConfig& cfg) {
    if (!cfg.alternative) throw ConfigError("power study requires an alternative");
    return detail::run_grid(cfg);
}

/// Runs whichever study the config describes.
inline SimulationResult simulate(const SimulationConfig& cfg) {
    return cfg.alternative ? simulate_power(cfg) : simulate_type1(cfg);
}

// --------------------------------------------------------------------------
// Config ingestion (JSON) and result emission (CSV long format + JSON).
// --------------------------------------------------------------------------

namespace detail {

inline ConfigError config_error(const std::string& path, const std::string& msg) {
    return ConfigError("config error at " + path + ": " + msg);
}

inline StatKind parse_stat_kind(const std::string& s, const std::string& path) {
    if (s == "wts") return StatKind::WTS;
    if (s == "ats") return StatKind::ATS;
    if (s == "mats") return StatKind::MATS;
    throw config_error(path, "unknown statistic \"" + s + "\" (expected wts|ats|mats)");
}

inline Hypothesis parse_hypothesis(const std::string& s, const std::string& path) {
    if (s == "group") return Hypothesis::Group;
    if (s == "time") return Hypothesis::Time;
    if (s == "interaction") return Hypothesis::Interaction;
    throw config_error(path, "unknown hypothesis \"" + s + "\" (expected group|time|interaction)");
}

inline CovSetting parse_cov_setting(const std::string& s, const std::string& path) {
    if (s == "ar") return CovSetting::Autoregressive;
    if (s == "cs") return CovSetting::CompoundSymmetry;
    if (s == "toeplitz" || s == "tp") return CovSetting::Toeplitz;
    throw config_error(path, "unknown covariance setting \"" + s + "\" (expected ar|cs|toeplitz)");
}

inline MarginalSpec parse_marginal(const nlohmann::json& j, const std::string& path) {
    MarginalSpec m;
    std::string name;
    if (j.is_string()) {
        name = j.get<std::string>();
    } else if (j.is_object()) {
        if (!j.contains("name")) throw config_error(path, "marginal object needs a \"name\"");
        name = j.at("name").get<std::string>();
        if (j.contains("c")) m.ordinal_c = j.at("c").get<double>();
    } else {
        throw config_error(path, "marginal must be a string or an object");
    }
    if (name == "ordinal") {
        m.ordinal = true;
        if (m.ordinal_c < 0.0) throw config_error(path + "/c", "ordinal c must be >= 0");
    } else if (name == "normal") {
        m.family = Marginal::Normal;
    } else if (name == "doubleexp") {
        m.family = Marginal::DoubleExponential;
    } else if (name == "lognormal") {
        m.family = Marginal::LogNormal;
    } else if (name == "chisq15") {
        m.family = Marginal::ChiSq15;
    } else {
        throw config_error(path, "unknown marginal \"" + name +
                                     "\" (expected normal|doubleexp|lognormal|chisq15|ordinal)");
    }
    return m;
}

inline MissingnessSpec parse_missingness(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("mechanism")) {
        throw config_error(path, "missingness entry needs a \"mechanism\"");
    }
    MissingnessSpec m;
    const std::string mech = j.at("mechanism").get<std::string>();
    if (mech == "none") {
        m.mechanism = Mechanism::None;
    } else if (mech == "mcar") {
        m.mechanism = Mechanism::MCAR;
        if (!j.contains("rate")) throw config_error(path, "mcar needs a \"rate\"");
        m.rate = j.at("rate").get<double>();
        if (m.rate < 0.0 || m.rate >= 1.0) {
            throw config_error(path + "/rate", "mcar rate must lie in [0, 1)");
        }
    } else if (mech == "mar1" || mech == "mar2") {
        m.mechanism = mech == "mar1" ? Mechanism::MAR1 : Mechanism::MAR2;
        if (j.contains("pairs")) {
            const nlohmann::json& pairs = j.at("pairs");
            if (!pairs.is_array()) throw config_error(path + "/pairs", "pairs must be an array");
            for (std::size_t p = 0; p < pairs.size(); ++p) {
                const nlohmann::json& pair = pairs[p];
                if (!pair.is_array() || pair.size() != 2) {
                    throw config_error(path + "/pairs/" + std::to_string(p),
                                       "each pair is [determining, target] (1-based occasions)");
                }
                m.pairs.push_back(
                    MarPair{pair[0].get<int>() - 1, pair[1].get<int>() - 1});
            }
        }
    } else {
        throw config_error(path + "/mechanism",
                           "unknown mechanism \"" + mech + "\" (expected none|mcar|mar1|mar2)");
    }
    return m;
}

}  // namespace detail

/// Parses a simulation config document. Errors carry JSON-pointer-style
/// paths to the offending field.
inline SimulationConfig parse_config(const nlohmann::json& j) {
    using detail::config_error;
    if (!j.is_object()) throw config_error("/", "config must be a JSON object");

    SimulationConfig cfg;
    cfg.marginals.clear();
    cfg.covariances.clear();
    cfg.missingness.clear();
    try {
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("nsim")) cfg.nsim = j.at("nsim").get<int>();
        if (j.contains("B")) cfg.replicates = j.at("B").get<int>();
        if (j.contains("alpha")) cfg.alpha = j.at("alpha").get<double>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error("/", e.what());
    }

    if (!j.contains("design") || !j.at("design").is_object()) {
        throw config_error("/design", "required object with a, d, n");
    }
    const nlohmann::json& design = j.at("design");
    try {
        cfg.a = design.at("a").get<int>();
        cfg.d = design.at("d").get<int>();
        cfg.group_sizes = design.at("n").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error("/design", e.what());
    }

    if (j.contains("statistics")) {
        cfg.statistics.clear();
        const nlohmann::json& stats = j.at("statistics");
        if (!stats.is_array()) throw config_error("/statistics", "must be an array");
        for (std::size_t s = 0; s < stats.size(); ++s) {
            cfg.statistics.push_back(detail::parse_stat_kind(
                stats[s].get<std::string>(), "/statistics/" + std::to_string(s)));
        }
    }

    if (!j.contains("hypotheses")) throw config_error("/hypotheses", "required array");
    {
        const nlohmann::json& hyps = j.at("hypotheses");
        if (!hyps.is_array()) throw config_error("/hypotheses", "must be an array");
        for (std::size_t h = 0; h < hyps.size(); ++h) {
            cfg.hypotheses.push_back(detail::parse_hypothesis(
                hyps[h].get<std::string>(), "/hypotheses/" + std::to_string(h)));
        }
    }

    if (!j.contains("marginals")) throw config_error("/marginals", "required array");
    {
        const nlohmann::json& marginals = j.at("marginals");
        if (!marginals.is_array()) throw config_error("/marginals", "must be an array");
        for (std::size_t m = 0; m < marginals.size(); ++m) {
            cfg.marginals.push_back(
                detail::parse_marginal(marginals[m], "/marginals/" + std::to_string(m)));
        }
    }

    if (j.contains("covariances")) {
        const nlohmann::json& covs = j.at("covariances");
        if (!covs.is_array()) throw config_error("/covariances", "must be an array");
        for (std::size_t c = 0; c < covs.size(); ++c) {
            cfg.covariances.push_back(detail::parse_cov_setting(
                covs[c].get<std::string>(), "/covariances/" + std::to_string(c)));
        }
    }

    if (!j.contains("missingness")) throw config_error("/missingness", "required array");
    {
        const nlohmann::json& missing = j.at("missingness");
        if (!missing.is_array()) throw config_error("/missingness", "must be an array");
        for (std::size_t m = 0; m < missing.size(); ++m) {
            cfg.missingness.push_back(
                detail::parse_missingness(missing[m], "/missingness/" + std::to_string(m)));
        }
    }

    if (j.contains("alternative")) {
        const nlohmann::json& alt = j.at("alternative");
        if (!alt.is_object()) throw config_error("/alternative", "must be an object");
        AlternativeSpec spec;
        try {
            if (alt.contains("group")) spec.group = alt.at("group").get<int>() - 1;  // 1-based
            const std::vector<double> pattern = alt.at("pattern").get<std::vector<double>>();
            spec.pattern = Eigen::Map<const Vector>(pattern.data(),
                                                    static_cast<Eigen::Index>(pattern.size()));
            spec.zeta = alt.at("zeta").get<std::vector<double>>();
        } catch (const nlohmann::json::exception& e) {
            throw config_error("/alternative", e.what());
        }
        cfg.alternative = std::move(spec);
    }

    detail::validate_sim_config(cfg);
    return cfg;
}

inline SimulationConfig parse_config_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config is not valid JSON");
    return parse_config(j);
}

/// Long-format summary: one row per cell x statistic x variant.
inline void write_summary_csv(const SimulationResult& result, std::ostream& os) {
    os << "marginal,covariance,mechanism,missing_rate,hypothesis,zeta,a,d,group_sizes,"
          "statistic,variant,nsim,valid,rejections,rate,mc_se,degenerate_replicates,"
          "failed_replications\n";
    for (const CellResult& cell : result.cells) {
        std::string sizes;
        for (std::size_t i = 0; i < cell.desc.group_sizes.size(); ++i) {
            if (i) sizes += ";";
            sizes += std::to_string(cell.desc.group_sizes[i]);
        }
        for (const VariantSummary& s : cell.summaries) {
            os << cell.desc.marginal.name() << ","
               << (cell.desc.covariance ? cov_setting_name(*cell.desc.covariance) : "none") << ","
               << mechanism_name(cell.desc.missing.mechanism) << ","
               << detail::fmt_g17(cell.desc.missing.rate) << ","
               << hypothesis_name(cell.desc.hypothesis) << ","
               << detail::fmt_g17(cell.desc.zeta) << "," << cell.desc.a << "," << cell.desc.d
               << "," << sizes << "," << stat_name(s.kind) << ","
               << (s.bootstrap ? "bootstrap" : "asymptotic") << "," << cell.requested << ","
               << s.valid << "," << s.rejections << "," << detail::fmt_g17(s.rate) << ","
               << detail::fmt_g17(s.mc_se) << ","
               << cell.degenerate_replicates[static_cast<std::size_t>(s.kind)] << ","
               << cell.failed << "\n";
        }
    }
}

/// Per-replication log: one row per cell x replication.
inline void write_replication_csv(const SimulationResult& result, std::ostream& os) {
    os << "cell,rep,ok,p_wts_asymptotic,p_ats_asymptotic,p_wts_bootstrap,p_ats_bootstrap,"
          "p_mats_bootstrap\n";
    auto field = [](const std::optional<double>& p) {
        return p ? detail::fmt_g17(*p) : std::string();
    };
    for (const CellResult& cell : result.cells) {
        const std::string key = "\"" + cell.desc.key() + "\"";
        for (std::size_t r = 0; r < cell.replications.size(); ++r) {
            const ReplicationOutcome& out = cell.replications[r];
            os << key << "," << r << "," << (out.ok ? 1 : 0) << ","
               << field(out.p_asymptotic[0]) << "," << field(out.p_asymptotic[1]) << ","
               << field(out.p_bootstrap[0]) << "," << field(out.p_bootstrap[1]) << ","
               << field(out.p_bootstrap[2]) << "\n";
        }
    }
}

inline nlohmann::ordered_json result_to_json(const SimulationResult& result) {
    nlohmann::ordered_json root;
    root["schema_version"] = 1;
    root["seed"] = result.config.seed;
    root["nsim"] = result.config.nsim;
    root["B"] = result.config.replicates;
    root["alpha"] = result.config.alpha;
    root["cells"] = nlohmann::ordered_json::array();
    for (const CellResult& cell : result.cells) {
        nlohmann::ordered_json c;
        c["key"] = cell.desc.key();
        c["marginal"] = cell.desc.marginal.name();
        c["covariance"] =
            cell.desc.covariance ? cov_setting_name(*cell.desc.covariance) : "none";
        c["mechanism"] = mechanism_name(cell.desc.missing.mechanism);
        c["missing_rate"] = cell.desc.missing.rate;
        c["hypothesis"] = hypothesis_name(cell.desc.hypothesis);
        c["zeta"] = cell.desc.zeta;
        c["nsim"] = cell.requested;
        c["valid"] = cell.valid;
        c["failed"] = cell.failed;
        c["summaries"] = nlohmann::ordered_json::array();
        for (const VariantSummary& s : cell.summaries) {
            nlohmann::ordered_json e;
            e["statistic"] = stat_name(s.kind);
            e["variant"] = s.bootstrap ? "bootstrap" : "asymptotic";
            e["valid"] = s.valid;
            e["rejections"] = s.rejections;
            e["rate"] = s.rate;
            e["mc_se"] = s.mc_se;
            e["degenerate_replicates"] =
                cell.degenerate_replicates[static_cast<std::size_t>(s.kind)];
            c["summaries"].push_back(std::move(e));
        }
        root["cells"].push_back(std::move(c));
    }
    return root;
}

/// Convenience accessor: the rejection rate of one statistic/variant in one
/// cell, keyed by predicate on the descriptor.
inline const VariantSummary* find_summary(const CellResult& cell, StatKind kind,
                                          bool bootstrap) {
    for (const VariantSummary& s : cell.summaries) {
        if (s.kind == kind && s.bootstrap == bootstrap) return &s;
    }
    return nullptr;
}

}  // namespace rankfd
