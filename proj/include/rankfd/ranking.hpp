#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "rankfd/dataset.hpp"

namespace rankfd {

/// Mid-ranks (1-based) of xs among themselves. A tie run shares the average
/// of the integer ranks it spans, which is exactly the counting-function
/// definition 1/2 + sum_y c(x - y) with c(u) = 0, 1/2, 1 for u < 0, = 0, > 0.
/// Ties are detected by exact comparison of the stored doubles; no epsilon.
inline std::vector<double> midranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&xs](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i + 1;
        while (j < n && xs[order[j]] == xs[order[i]]) ++j;
        const double shared = 0.5 * static_cast<double>(i + j + 1);  // mean of i+1..j
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = shared;
        i = j;
    }
    return ranks;
}

/// Mid-ranks of every observed value among all N observed values, pooled
/// across groups and occasions, plus the per-cell mean ranks.
struct RankTable {
    std::vector<Matrix> ranks;  // per group, n_i x d; 0 where unobserved
    Matrix cell_mean;           // a x d mean rank per cell
};

inline RankTable rank_table(const ValidatedDataset& v) {
    const int a = v.data.num_groups();
    const int d = v.data.num_occasions();

    struct Slot {
        int i, k, j;
    };
    std::vector<double> pooled;
    std::vector<Slot> slots;
    pooled.reserve(static_cast<std::size_t>(v.counts.observations));
    slots.reserve(pooled.capacity());
    for (int i = 0; i < a; ++i) {
        const GroupData& g = v.data.groups[static_cast<std::size_t>(i)];
        for (int k = 0; k < g.values.rows(); ++k) {
            for (int j = 0; j < d; ++j) {
                if (g.mask(k, j)) {
                    pooled.push_back(g.values(k, j));
                    slots.push_back({i, k, j});
                }
            }
        }
    }

    const std::vector<double> r = midranks(pooled);

    RankTable table;
    table.ranks.reserve(static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i) {
        table.ranks.emplace_back(Matrix::Zero(v.data.group_size(i), d));
    }
    for (std::size_t s = 0; s < slots.size(); ++s) {
        table.ranks[static_cast<std::size_t>(slots[s].i)](slots[s].k, slots[s].j) = r[s];
    }

    table.cell_mean = Matrix::Zero(a, d);
    for (int i = 0; i < a; ++i) {
        for (int j = 0; j < d; ++j) {
            table.cell_mean(i, j) =
                table.ranks[static_cast<std::size_t>(i)].col(j).sum() /
                static_cast<double>(v.counts.lambda(i, j));
        }
    }
    return table;
}

/// Relative marginal effect estimates, group-major ordering:
/// p_hat[(i-1)d + j] = (mean cell rank - 1/2) / N.
inline Vector relative_effects_from(const RankTable& table, long long big_n) {
    const Eigen::Index a = table.cell_mean.rows();
    const Eigen::Index d = table.cell_mean.cols();
    Vector p(a * d);
    for (Eigen::Index i = 0; i < a; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            p(i * d + j) = (table.cell_mean(i, j) - 0.5) / static_cast<double>(big_n);
        }
    }
    return p;
}

inline std::pair<RankTable, Vector> relative_effects(const ValidatedDataset& v) {
    RankTable table = rank_table(v);
    Vector p = relative_effects_from(table, v.counts.observations);
    return {std::move(table), std::move(p)};
}

/// Centered rank vectors Z_ijk = R_ijk - cell mean, zero where unobserved.
inline std::vector<Matrix> centered_ranks(const RankTable& table, const ValidatedDataset& v) {
    const int a = v.data.num_groups();
    const int d = v.data.num_occasions();
    std::vector<Matrix> z;
    z.reserve(static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i) {
        const GroupData& g = v.data.groups[static_cast<std::size_t>(i)];
        Matrix zi = Matrix::Zero(g.values.rows(), d);
        for (int k = 0; k < g.values.rows(); ++k) {
            for (int j = 0; j < d; ++j) {
                if (g.mask(k, j)) {
                    zi(k, j) = table.ranks[static_cast<std::size_t>(i)](k, j) - table.cell_mean(i, j);
                }
            }
        }
        z.push_back(std::move(zi));
    }
    return z;
}

}  // namespace rankfd
