#pragma once

#include <utility>
#include <vector>

#include "rankfd/ranking.hpp"

namespace rankfd {

/// Covariance estimate of sqrt(n) * p_hat. per_group holds the d x d
/// matrices V_i; vn is their block-diagonal assembly with blocks scaled by
/// n / n_i; dn is the diagonal of vn. degenerate_cells counts off-diagonal
/// entries that were forced to zero because their denominator
/// (lambda_j - 1)(lambda_j' - 1) + Delta_jj' - 1 was not positive.
struct CovarianceEstimate {
    std::vector<Matrix> per_group;
    Matrix vn;
    Vector dn;
    int degenerate_cells = 0;
};

/// Per-group covariance from an arbitrary per-subject score matrix: ranks
/// for the plain estimator, sign-flipped centered ranks for the bootstrap.
/// Each column is centered at its masked mean, so for raw ranks the
/// deviations are exactly R_ijk - Rbar_ij.
///
/// Diagonal:      v(j,j)  = n_i * sum_k m [s - sbar]^2
///                          / (N^2 * lambda_j (lambda_j - 1))
/// Off-diagonal:  v(j,j') = n_i * sum_k m m' (s - sbar)(s' - sbar')
///                          / (N^2 * ((lambda_j-1)(lambda_j'-1) + Delta - 1))
/// where the sums run over subjects observed at the occasion(s) involved.
inline Matrix score_covariance(const Matrix& scores, const Mask& mask,
                               const Eigen::MatrixXi& pairwise, long long big_n,
                               int* degenerate = nullptr) {
    const int ni = static_cast<int>(scores.rows());
    const int d = static_cast<int>(scores.cols());
    const double nn = static_cast<double>(big_n) * static_cast<double>(big_n);

    Vector mean(d);
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < ni; ++k) {
            if (mask(k, j)) s += scores(k, j);
        }
        mean(j) = s / static_cast<double>(pairwise(j, j));
    }

    Matrix v = Matrix::Zero(d, d);
    for (int j = 0; j < d; ++j) {
        const double lam = static_cast<double>(pairwise(j, j));
        double ss = 0.0;
        for (int k = 0; k < ni; ++k) {
            if (!mask(k, j)) continue;
            const double dev = scores(k, j) - mean(j);
            ss += dev * dev;
        }
        v(j, j) = static_cast<double>(ni) * ss / (nn * lam * (lam - 1.0));

        for (int jp = j + 1; jp < d; ++jp) {
            const double lamp = static_cast<double>(pairwise(jp, jp));
            const double denom = (lam - 1.0) * (lamp - 1.0) +
                                 static_cast<double>(pairwise(j, jp)) - 1.0;
            if (!(denom > 0.0)) {
                if (degenerate) ++*degenerate;
                continue;  // entry stays 0
            }
            double cross = 0.0;
            for (int k = 0; k < ni; ++k) {
                if (mask(k, j) && mask(k, jp)) {
                    cross += (scores(k, j) - mean(j)) * (scores(k, jp) - mean(jp));
                }
            }
            const double val = static_cast<double>(ni) * cross / (nn * denom);
            v(j, jp) = val;
            v(jp, j) = val;
        }
    }
    return v;
}

/// Diagonal entry v_i(j, j) of the rank covariance estimator.
inline double vhat_diag(const RankTable& table, const ValidatedDataset& v, int i, int j) {
    const Mask& mask = v.data.groups[static_cast<std::size_t>(i)].mask;
    const Matrix& r = table.ranks[static_cast<std::size_t>(i)];
    const double lam = static_cast<double>(v.counts.lambda(i, j));
    const double nn = static_cast<double>(v.counts.observations) *
                      static_cast<double>(v.counts.observations);
    double ss = 0.0;
    for (int k = 0; k < r.rows(); ++k) {
        if (!mask(k, j)) continue;
        const double dev = r(k, j) - table.cell_mean(i, j);
        ss += dev * dev;
    }
    return static_cast<double>(r.rows()) * ss / (nn * lam * (lam - 1.0));
}

/// Off-diagonal entry v_i(j, j'). Returns 0 when the denominator is not
/// positive; the full estimator tallies such entries as warnings.
inline double vhat_offdiag(const RankTable& table, const ValidatedDataset& v, int i, int j,
                           int jp) {
    const Mask& mask = v.data.groups[static_cast<std::size_t>(i)].mask;
    const Matrix& r = table.ranks[static_cast<std::size_t>(i)];
    const double lam = static_cast<double>(v.counts.lambda(i, j));
    const double lamp = static_cast<double>(v.counts.lambda(i, jp));
    const double nn = static_cast<double>(v.counts.observations) *
                      static_cast<double>(v.counts.observations);
    const double denom =
        (lam - 1.0) * (lamp - 1.0) +
        static_cast<double>(v.counts.pairwise[static_cast<std::size_t>(i)](j, jp)) - 1.0;
    if (!(denom > 0.0)) return 0.0;
    double cross = 0.0;
    for (int k = 0; k < r.rows(); ++k) {
        if (mask(k, j) && mask(k, jp)) {
            cross += (r(k, j) - table.cell_mean(i, j)) * (r(k, jp) - table.cell_mean(i, jp));
        }
    }
    return static_cast<double>(r.rows()) * cross / (nn * denom);
}

/// Block-diagonal assembly vn = diag((n/n_1) V_1, ..., (n/n_a) V_a) and its
/// diagonal dn. Off-group blocks are exactly zero.
inline CovarianceEstimate assemble(std::vector<Matrix> per_group, const CellCounts& c,
                                   int degenerate_cells = 0) {
    const int a = static_cast<int>(per_group.size());
    if (a == 0 || static_cast<int>(c.group_sizes.size()) != a) {
        throw DimensionMismatch("assemble: one covariance block per group required");
    }
    const int d = static_cast<int>(per_group.front().rows());
    CovarianceEstimate est;
    est.vn = Matrix::Zero(a * d, a * d);
    for (int i = 0; i < a; ++i) {
        const Matrix& block = per_group[static_cast<std::size_t>(i)];
        if (block.rows() != d || block.cols() != d) {
            throw DimensionMismatch("assemble: covariance blocks must all be d x d");
        }
        const double scale = static_cast<double>(c.subjects) /
                             static_cast<double>(c.group_sizes[static_cast<std::size_t>(i)]);
        est.vn.block(i * d, i * d, d, d) = scale * block;
    }
    est.per_group = std::move(per_group);
    est.degenerate_cells = degenerate_cells;
    est.dn = est.vn.diagonal();
    return est;
}

/// Full covariance estimate from the rank table.
inline CovarianceEstimate estimate_covariance(const RankTable& table,
                                              const ValidatedDataset& v) {
    const int a = v.data.num_groups();
    int degenerate = 0;
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i) {
        blocks.push_back(score_covariance(table.ranks[static_cast<std::size_t>(i)],
                                          v.data.groups[static_cast<std::size_t>(i)].mask,
                                          v.counts.pairwise[static_cast<std::size_t>(i)],
                                          v.counts.observations, &degenerate));
    }
    return assemble(std::move(blocks), v.counts, degenerate);
}

}  // namespace rankfd
