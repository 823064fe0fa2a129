#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>

#include "rankfd/dataset.hpp"
#include "rankfd/rng.hpp"

namespace rankfd {

enum class Marginal { Normal, DoubleExponential, LogNormal, ChiSq15 };
enum class CovSetting { Autoregressive, CompoundSymmetry, Toeplitz };

inline const char* marginal_name(Marginal m) {
    switch (m) {
        case Marginal::Normal: return "normal";
        case Marginal::DoubleExponential: return "doubleexp";
        case Marginal::LogNormal: return "lognormal";
        case Marginal::ChiSq15: return "chisq15";
    }
    return "?";
}

inline const char* cov_setting_name(CovSetting s) {
    switch (s) {
        case CovSetting::Autoregressive: return "ar";
        case CovSetting::CompoundSymmetry: return "cs";
        case CovSetting::Toeplitz: return "toeplitz";
    }
    return "?";
}

/// The three repeated-measures dependence settings:
///   ar:       (0.6^|l-j|)
///   cs:       I_d
///   toeplitz: (d - |l-j|)
inline Matrix covariance_setting(CovSetting kind, int d) {
    if (d < 1) throw InvalidDesign("covariance setting needs d >= 1");
    Matrix s(d, d);
    for (int l = 0; l < d; ++l) {
        for (int j = 0; j < d; ++j) {
            const int gap = std::abs(l - j);
            switch (kind) {
                case CovSetting::Autoregressive: s(l, j) = std::pow(0.6, gap); break;
                case CovSetting::CompoundSymmetry: s(l, j) = (gap == 0) ? 1.0 : 0.0; break;
                case CovSetting::Toeplitz: s(l, j) = static_cast<double>(d - gap); break;
            }
        }
    }
    return s;
}

struct GeneratorSpec {
    int a = 1;
    int d = 1;
    std::vector<int> group_sizes;
    Marginal marginal = Marginal::Normal;
    CovSetting covariance = CovSetting::CompoundSymmetry;
    std::vector<Vector> shift;  // optional per-group location shift
};

inline double marginal_quantile(Marginal m, double u) {
    switch (m) {
        case Marginal::Normal: return normal_quantile(u);
        case Marginal::DoubleExponential: return laplace_quantile(u);
        case Marginal::LogNormal: return lognormal_quantile(u);
        case Marginal::ChiSq15: return chisq_quantile(u, 15.0);
    }
    return 0.0;
}

/// Gaussian-copula sampler: a correlation matrix is obtained by
/// standardizing the covariance setting (the copula only carries the
/// dependence pattern; scale comes from the marginal law), multivariate
/// normals are pushed through the normal CDF to uniforms and then through
/// the inverse CDF of the requested marginal. Fully observed output.
inline IncompleteDataset copula_sample(const GeneratorSpec& spec, Rng& rng) {
    if (spec.a < 1 || spec.d < 1 || static_cast<int>(spec.group_sizes.size()) != spec.a) {
        throw DimensionMismatch("copula_sample: inconsistent design dimensions");
    }
    const Matrix sigma = covariance_setting(spec.covariance, spec.d);
    Matrix corr(spec.d, spec.d);
    for (int l = 0; l < spec.d; ++l) {
        for (int j = 0; j < spec.d; ++j) {
            corr(l, j) = sigma(l, j) / std::sqrt(sigma(l, l) * sigma(j, j));
        }
    }
    Eigen::LLT<Matrix> llt(corr);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("copula correlation matrix is not positive definite");
    }
    const Matrix chol = llt.matrixL();

    IncompleteDataset data = make_complete(spec.a, spec.d, spec.group_sizes);
    Vector eps(spec.d);
    for (int i = 0; i < spec.a; ++i) {
        GroupData& g = data.groups[static_cast<std::size_t>(i)];
        const Vector* mu = nullptr;
        if (!spec.shift.empty()) {
            if (static_cast<int>(spec.shift.size()) != spec.a ||
                spec.shift[static_cast<std::size_t>(i)].size() != spec.d) {
                throw DimensionMismatch("copula_sample: shift vectors must be one per group, length d");
            }
            mu = &spec.shift[static_cast<std::size_t>(i)];
        }
        for (int k = 0; k < g.values.rows(); ++k) {
            for (int j = 0; j < spec.d; ++j) eps(j) = rng.normal();
            const Vector zvec = chol * eps;
            for (int j = 0; j < spec.d; ++j) {
                double x = marginal_quantile(spec.marginal, normal_cdf(zvec(j)));
                if (mu) x += (*mu)(j);
                g.values(k, j) = x;
            }
        }
    }
    return data;
}

/// Discrete ordinal generator: X = int(4 (c Z_ik + Y_ijk) / (c + 1)) + 1
/// with Z_ik, Y_ijk iid Uniform(0,1); Z is shared within a subject, Y fresh
/// per occasion, so c controls the within-subject association. Values lie in
/// {1, 2, 3, 4}.
inline IncompleteDataset ordinal_sample(double c, int a, int d,
                                        const std::vector<int>& group_sizes, Rng& rng) {
    if (c < 0.0) throw InvalidDesign("ordinal association parameter c must be >= 0");
    IncompleteDataset data = make_complete(a, d, group_sizes);
    for (int i = 0; i < a; ++i) {
        GroupData& g = data.groups[static_cast<std::size_t>(i)];
        for (int k = 0; k < g.values.rows(); ++k) {
            const double z = rng.u01();
            for (int j = 0; j < d; ++j) {
                const double y = rng.u01();
                g.values(k, j) = std::floor(4.0 * (c * z + y) / (c + 1.0)) + 1.0;
            }
        }
    }
    return data;
}

/// MCAR: every entry is independently made missing with probability rate.
/// Only the mask changes; stored values stay bit-identical.
inline IncompleteDataset inject_mcar(IncompleteDataset data, double rate, Rng& rng) {
    if (rate < 0.0 || rate >= 1.0) throw InvalidDesign("mcar rate must lie in [0, 1)");
    for (GroupData& g : data.groups) {
        for (int k = 0; k < g.mask.rows(); ++k) {
            for (int j = 0; j < g.mask.cols(); ++j) {
                if (rng.u01() < rate) g.mask(k, j) = 0;
            }
        }
    }
    return data;
}

/// A missing-at-random pair: the determining occasion stays fully observed
/// and steers the missingness of the target occasion. 0-based indices.
struct MarPair {
    int determining;
    int target;
};

/// The pairings used for d = 4 and d = 8 layouts.
inline std::vector<MarPair> default_mar_pairs(int d) {
    if (d == 4) return {{0, 1}, {2, 3}};
    if (d == 8) return {{0, 1}, {0, 2}, {5, 6}, {5, 7}};
    throw InvalidDesign("no default MAR pairs for d = " + std::to_string(d) +
                        "; specify pairs explicitly");
}

inline void validate_mar_pairs(const std::vector<MarPair>& pairs, int d) {
    if (pairs.empty()) throw InvalidDesign("MAR mechanism needs at least one pair");
    std::vector<bool> is_target(static_cast<std::size_t>(d), false);
    for (const MarPair& p : pairs) {
        if (p.determining < 0 || p.determining >= d || p.target < 0 || p.target >= d) {
            throw InvalidDesign("MAR pair occasion out of range");
        }
        if (p.determining == p.target) {
            throw InvalidDesign("MAR pair must reference two distinct occasions");
        }
        if (is_target[static_cast<std::size_t>(p.target)]) {
            throw InvalidDesign("occasion " + std::to_string(p.target + 1) +
                                " targeted by more than one MAR pair");
        }
        is_target[static_cast<std::size_t>(p.target)] = true;
    }
    for (const MarPair& p : pairs) {
        if (is_target[static_cast<std::size_t>(p.determining)]) {
            throw InvalidDesign("occasion " + std::to_string(p.determining + 1) +
                                " is both determining and targeted");
        }
    }
}

namespace detail {

inline std::vector<double> observed_column(const IncompleteDataset& data, int j) {
    std::vector<double> xs;
    for (const GroupData& g : data.groups) {
        for (int k = 0; k < g.values.rows(); ++k) {
            if (g.mask(k, j)) xs.push_back(g.values(k, j));
        }
    }
    return xs;
}

}  // namespace detail

/// MAR via a two-sigma rule on the determining occasion: subjects with
/// |X_obs| <= 2 sd get their target missing with probability 30%, the outer
/// bands with probability 15%. sd is the sample standard deviation of the
/// determining occasion over all groups. Boundary values count as middle.
inline IncompleteDataset inject_mar1(IncompleteDataset data, const std::vector<MarPair>& pairs,
                                     Rng& rng) {
    validate_mar_pairs(pairs, data.num_occasions());
    for (const MarPair& pair : pairs) {
        const std::vector<double> xs = detail::observed_column(data, pair.determining);
        if (xs.size() < 2) continue;
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
        const double bound = 2.0 * sd;

        for (GroupData& g : data.groups) {
            for (int k = 0; k < g.values.rows(); ++k) {
                if (!g.mask(k, pair.determining)) continue;
                const double x = g.values(k, pair.determining);
                const bool outer = x < -bound || x > bound;
                const double rate = outer ? 0.15 : 0.30;
                if (rng.u01() < rate) g.mask(k, pair.target) = 0;
            }
        }
    }
    return data;
}

/// MAR via a median split on the determining occasion: at or below the
/// median the target goes missing with probability 10%, above it with 30%.
inline IncompleteDataset inject_mar2(IncompleteDataset data, const std::vector<MarPair>& pairs,
                                     Rng& rng) {
    validate_mar_pairs(pairs, data.num_occasions());
    for (const MarPair& pair : pairs) {
        std::vector<double> xs = detail::observed_column(data, pair.determining);
        if (xs.empty()) continue;
        std::sort(xs.begin(), xs.end());
        const std::size_t m = xs.size();
        const double median = (m % 2 == 1) ? xs[m / 2] : 0.5 * (xs[m / 2 - 1] + xs[m / 2]);

        for (GroupData& g : data.groups) {
            for (int k = 0; k < g.values.rows(); ++k) {
                if (!g.mask(k, pair.determining)) continue;
                const double rate = g.values(k, pair.determining) <= median ? 0.10 : 0.30;
                if (rng.u01() < rate) g.mask(k, pair.target) = 0;
            }
        }
    }
    return data;
}

/// Adds mu coordinatewise to the observed values of one group. In harness
/// pipelines shifts are applied before missingness injection.
inline IncompleteDataset shift_alternative(IncompleteDataset data, int group, const Vector& mu) {
    if (group < 0 || group >= data.num_groups()) {
        throw DimensionMismatch("shift_alternative: group index out of range");
    }
    if (mu.size() != data.num_occasions()) {
        throw DimensionMismatch("shift_alternative: shift vector length must equal d");
    }
    GroupData& g = data.groups[static_cast<std::size_t>(group)];
    for (int k = 0; k < g.values.rows(); ++k) {
        for (int j = 0; j < g.values.cols(); ++j) {
            if (g.mask(k, j)) g.values(k, j) += mu(j);
        }
    }
    return data;
}

enum class Mechanism { None, MCAR, MAR1, MAR2 };

inline const char* mechanism_name(Mechanism m) {
    switch (m) {
        case Mechanism::None: return "none";
        case Mechanism::MCAR: return "mcar";
        case Mechanism::MAR1: return "mar1";
        case Mechanism::MAR2: return "mar2";
    }
    return "?";
}

struct MissingnessSpec {
    Mechanism mechanism = Mechanism::None;
    double rate = 0.0;            // MCAR only
    std::vector<MarPair> pairs;   // MAR; empty selects the d = 4 / d = 8 defaults
};

inline IncompleteDataset apply_missingness(IncompleteDataset data, const MissingnessSpec& spec,
                                           Rng& rng) {
    if (spec.mechanism == Mechanism::None) return data;
    if (spec.mechanism == Mechanism::MCAR) return inject_mcar(std::move(data), spec.rate, rng);
    const std::vector<MarPair> pairs =
        spec.pairs.empty() ? default_mar_pairs(data.num_occasions()) : spec.pairs;
    return spec.mechanism == Mechanism::MAR1 ? inject_mar1(std::move(data), pairs, rng)
                                             : inject_mar2(std::move(data), pairs, rng);
}

}  // namespace rankfd
