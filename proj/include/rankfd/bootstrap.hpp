#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rankfd/contrasts.hpp"
#include "rankfd/covariance.hpp"
#include "rankfd/parallel.hpp"
#include "rankfd/rng.hpp"
#include "rankfd/statistics.hpp"

namespace rankfd {

struct BootstrapConfig {
    int replicates = 999;  // B
    std::uint64_t seed = 0;
    std::vector<StatKind> statistics = {StatKind::WTS, StatKind::ATS, StatKind::MATS};
};

struct StatReport {
    StatValue observed;
    double p_bootstrap = 1.0;
    int degenerate_replicates = 0;  // replicates whose statistic was recorded as 0
    bool observed_degenerate = false;
};

struct TestReport {
    std::string hypothesis;
    int replicates = 0;
    std::uint64_t seed = 0;
    std::vector<StatReport> statistics;
    std::vector<std::string> warnings;
};

/// One Rademacher sign per subject, shared across all d occasions of that
/// subject. Order: groups, then subjects within each group.
inline std::vector<Vector> draw_weights(const std::vector<int>& group_sizes, Rng& rng) {
    std::vector<Vector> w;
    w.reserve(group_sizes.size());
    for (int ni : group_sizes) {
        Vector wi(ni);
        for (int k = 0; k < ni; ++k) wi(k) = rng.rademacher();
        w.push_back(std::move(wi));
    }
    return w;
}

/// Sign-flipped centered rank vectors Z*_ik = W_ik * Z_ik.
inline std::vector<Matrix> flip_signs(const std::vector<Matrix>& z,
                                      const std::vector<Vector>& w) {
    std::vector<Matrix> out;
    out.reserve(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        out.push_back(z[i].array().colwise() * w[i].array());
    }
    return out;
}

/// Bootstrapped relative effects
/// p*_ij = (1/lambda_ij) sum_k lambda_ijk W_ik Z_ijk / N.
inline Vector bootstrap_effects(const std::vector<Matrix>& z, const ValidatedDataset& v,
                                const std::vector<Vector>& w) {
    const int a = v.data.num_groups();
    const int d = v.data.num_occasions();
    const double big_n = static_cast<double>(v.counts.observations);
    Vector p(a * d);
    for (int i = 0; i < a; ++i) {
        const Matrix& zi = z[static_cast<std::size_t>(i)];
        const Vector& wi = w[static_cast<std::size_t>(i)];
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int k = 0; k < zi.rows(); ++k) s += wi(k) * zi(k, j);  // z is 0 where unobserved
            p(i * d + j) = s / (static_cast<double>(v.counts.lambda(i, j)) * big_n);
        }
    }
    return p;
}

/// Covariance estimate recomputed from Z* with the same masked formulas as
/// the observed estimator; Z* columns are centered at their masked means.
inline CovarianceEstimate bootstrap_covariance(const std::vector<Matrix>& z_star,
                                               const ValidatedDataset& v) {
    const int a = v.data.num_groups();
    int degenerate = 0;
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i) {
        blocks.push_back(score_covariance(z_star[static_cast<std::size_t>(i)],
                                          v.data.groups[static_cast<std::size_t>(i)].mask,
                                          v.counts.pairwise[static_cast<std::size_t>(i)],
                                          v.counts.observations, &degenerate));
    }
    return assemble(std::move(blocks), v.counts, degenerate);
}

/// Values of the requested statistics for one replicate. A replicate whose
/// ATS trace or MATS diagonal degenerates is recorded as 0 and flagged;
/// p-values then err on the conservative side while B stays fixed.
struct ReplicateStats {
    std::array<double, kStatKinds> value{};
    std::array<bool, kStatKinds> degenerate{};
};

inline ReplicateStats bootstrap_statistics(const Vector& p_star,
                                           const CovarianceEstimate& cov_star,
                                           const ContrastSpec& contrast, long long n,
                                           const std::vector<StatKind>& kinds) {
    ReplicateStats out;
    for (StatKind kind : kinds) {
        const int idx = static_cast<int>(kind);
        switch (kind) {
            case StatKind::WTS:
                out.value[idx] = wts_value(p_star, cov_star.vn, contrast.c, n);
                break;
            case StatKind::ATS:
                try {
                    out.value[idx] = ats_value(p_star, cov_star.vn, contrast.t, n);
                } catch (const DegenerateTrace&) {
                    out.value[idx] = 0.0;
                    out.degenerate[idx] = true;
                }
                break;
            case StatKind::MATS:
                try {
                    out.value[idx] = mats_value(p_star, cov_star.dn, contrast.c, n);
                } catch (const ZeroDiagonal&) {
                    out.value[idx] = 0.0;
                    out.degenerate[idx] = true;
                }
                break;
        }
    }
    return out;
}

/// p = #{b : T*_b >= T} / B. The comparison is >=, matching the resampling
/// algorithm; with T = 0 every replicate counts and p = 1.
inline double pvalue_from_replicates(std::span<const double> replicate_values,
                                     double observed) {
    long long count = 0;
    for (double t : replicate_values) {
        if (t >= observed) ++count;
    }
    return static_cast<double>(count) / static_cast<double>(replicate_values.size());
}

/// Full wild bootstrap test. Replicate b draws its weights from a stream
/// derived from (seed, b), so results are identical for any thread count and
/// any execution order.
inline TestReport bootstrap_pvalue(const ValidatedDataset& v, const ContrastSpec& contrast,
                                   const BootstrapConfig& cfg, int threads = 1) {
    if (cfg.replicates < 1) throw ConfigError("bootstrap replicate count must be >= 1");
    if (cfg.statistics.empty()) throw ConfigError("no statistics requested");

    const auto [table, p_hat] = relative_effects(v);
    const std::vector<Matrix> z = centered_ranks(table, v);
    const CovarianceEstimate cov = estimate_covariance(table, v);
    const long long n = v.counts.subjects;

    TestReport report;
    report.hypothesis = contrast.label;
    report.replicates = cfg.replicates;
    report.seed = cfg.seed;
    if (cov.degenerate_cells > 0) {
        report.warnings.push_back("covariance: " + std::to_string(cov.degenerate_cells) +
                                  " off-diagonal entries zeroed (degenerate denominator)");
    }

    // Observed statistics; a degenerate one is reported as 0 so the
    // bootstrap comparison still applies (and yields p = 1).
    for (StatKind kind : cfg.statistics) {
        StatReport sr;
        try {
            switch (kind) {
                case StatKind::WTS: sr.observed = wts(p_hat, cov.vn, contrast.c, n); break;
                case StatKind::ATS: sr.observed = ats(p_hat, cov.vn, contrast.t, n); break;
                case StatKind::MATS: sr.observed = mats(p_hat, cov.dn, contrast.c, n); break;
            }
        } catch (const DegenerateTrace&) {
            sr.observed = StatValue{kind, 0.0, std::nullopt, std::nullopt};
            sr.observed_degenerate = true;
        } catch (const ZeroDiagonal&) {
            sr.observed = StatValue{kind, 0.0, std::nullopt, std::nullopt};
            sr.observed_degenerate = true;
        }
        report.statistics.push_back(std::move(sr));
    }

    std::vector<ReplicateStats> replicates(static_cast<std::size_t>(cfg.replicates));
    parallel_for(cfg.replicates, threads, [&](std::int64_t b) {
        Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(b)));
        const std::vector<Vector> w = draw_weights(v.counts.group_sizes, rng);
        const std::vector<Matrix> z_star = flip_signs(z, w);
        const Vector p_star = bootstrap_effects(z, v, w);
        const CovarianceEstimate cov_star = bootstrap_covariance(z_star, v);
        replicates[static_cast<std::size_t>(b)] =
            bootstrap_statistics(p_star, cov_star, contrast, n, cfg.statistics);
    });

    for (std::size_t s = 0; s < cfg.statistics.size(); ++s) {
        const int idx = static_cast<int>(cfg.statistics[s]);
        StatReport& sr = report.statistics[s];
        std::vector<double> values(replicates.size());
        for (std::size_t b = 0; b < replicates.size(); ++b) {
            values[b] = replicates[b].value[idx];
            if (replicates[b].degenerate[idx]) ++sr.degenerate_replicates;
        }
        sr.p_bootstrap = pvalue_from_replicates(values, sr.observed.value);
        if (sr.observed_degenerate) {
            report.warnings.push_back(std::string(stat_name(cfg.statistics[s])) +
                                      ": observed statistic degenerate; value recorded as 0");
        }
        if (sr.degenerate_replicates > 0) {
            report.warnings.push_back(std::string(stat_name(cfg.statistics[s])) + ": " +
                                      std::to_string(sr.degenerate_replicates) + " of " +
                                      std::to_string(cfg.replicates) +
                                      " bootstrap replicates degenerate, counted as 0");
        }
    }
    return report;
}

}  // namespace rankfd
