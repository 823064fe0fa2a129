#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rankfd/numerics.hpp"

namespace rankfd {

using Mask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// One treatment group: n_i subjects (rows) by d occasions (columns).
/// Missingness lives in the mask only; `values` entries under a zero mask
/// are meaningless placeholders and must never enter any computation.
struct GroupData {
    Matrix values;
    Mask mask;
};

struct IncompleteDataset {
    std::vector<GroupData> groups;

    int num_groups() const { return static_cast<int>(groups.size()); }
    int num_occasions() const {
        return groups.empty() ? 0 : static_cast<int>(groups.front().values.cols());
    }
    int group_size(int i) const { return static_cast<int>(groups[static_cast<std::size_t>(i)].values.rows()); }
    bool observed(int i, int k, int j) const { return groups[static_cast<std::size_t>(i)].mask(k, j) != 0; }
    double value(int i, int k, int j) const { return groups[static_cast<std::size_t>(i)].values(k, j); }
};

/// Fully observed dataset with all values zero; handy starting point for
/// generators and tests.
inline IncompleteDataset make_complete(int a, int d, const std::vector<int>& group_sizes) {
    if (a < 1 || d < 1 || static_cast<int>(group_sizes.size()) != a) {
        throw DimensionMismatch("make_complete: need a >= 1, d >= 1 and one size per group");
    }
    IncompleteDataset data;
    data.groups.reserve(group_sizes.size());
    for (int ni : group_sizes) {
        if (ni < 1) throw DimensionMismatch("make_complete: group sizes must be >= 1");
        GroupData g;
        g.values = Matrix::Zero(ni, d);
        g.mask = Mask::Ones(ni, d);
        data.groups.push_back(std::move(g));
    }
    return data;
}

/// Observed-count bookkeeping. lambda(i, j) is the number of observations in
/// cell (i, j); pairwise[i](j, j') counts subjects of group i observed at
/// both occasions j and j' (its diagonal equals the cell counts).
struct CellCounts {
    Eigen::MatrixXi lambda;
    std::vector<Eigen::MatrixXi> pairwise;
    std::vector<int> group_sizes;  // n_i
    long long subjects = 0;        // n = sum of group sizes
    long long observations = 0;    // N = sum of all cell counts
};

inline CellCounts counts(const IncompleteDataset& data) {
    const int a = data.num_groups();
    const int d = data.num_occasions();
    CellCounts c;
    c.lambda = Eigen::MatrixXi::Zero(a, d);
    c.pairwise.reserve(static_cast<std::size_t>(a));
    c.group_sizes.reserve(static_cast<std::size_t>(a));
    for (int i = 0; i < a; ++i) {
        const Mask& mask = data.groups[static_cast<std::size_t>(i)].mask;
        const int ni = static_cast<int>(mask.rows());
        c.group_sizes.push_back(ni);
        c.subjects += ni;
        Eigen::MatrixXi delta = Eigen::MatrixXi::Zero(d, d);
        for (int k = 0; k < ni; ++k) {
            for (int j = 0; j < d; ++j) {
                if (!mask(k, j)) continue;
                c.lambda(i, j) += 1;
                for (int jp = j; jp < d; ++jp) {
                    if (mask(k, jp)) {
                        delta(j, jp) += 1;
                        if (jp != j) delta(jp, j) += 1;
                    }
                }
            }
        }
        c.pairwise.push_back(std::move(delta));
    }
    c.observations = c.lambda.cast<long long>().sum();
    return c;
}

struct ValidatedDataset {
    IncompleteDataset data;
    CellCounts counts;
};

/// Structural checks plus the minimum cell occupancy (two observations per
/// group-by-occasion cell) required by the variance denominators
/// lambda * (lambda - 1).
inline ValidatedDataset validate(IncompleteDataset data) {
    if (data.groups.empty()) throw DimensionMismatch("dataset has no groups");
    const int d = data.num_occasions();
    if (d < 1) throw DimensionMismatch("dataset has no occasions");

    for (int i = 0; i < data.num_groups(); ++i) {
        const GroupData& g = data.groups[static_cast<std::size_t>(i)];
        if (g.values.rows() < 1) {
            throw DimensionMismatch("group " + std::to_string(i + 1) + " has no subjects");
        }
        if (g.values.cols() != d) {
            throw DimensionMismatch("group " + std::to_string(i + 1) +
                                    " has a different occasion count than group 1");
        }
        if (g.mask.rows() != g.values.rows() || g.mask.cols() != g.values.cols()) {
            throw DimensionMismatch("group " + std::to_string(i + 1) +
                                    ": mask and value dimensions disagree");
        }
        for (int k = 0; k < g.values.rows(); ++k) {
            for (int j = 0; j < d; ++j) {
                if (g.mask(k, j) > 1) {
                    throw DimensionMismatch("mask entries must be 0 or 1");
                }
                if (g.mask(k, j) && !std::isfinite(g.values(k, j))) {
                    throw DimensionMismatch("observed values must be finite (group " +
                                            std::to_string(i + 1) + ", subject " +
                                            std::to_string(k + 1) + ", occasion " +
                                            std::to_string(j + 1) + ")");
                }
            }
        }
    }

    CellCounts c = counts(data);
    for (int i = 0; i < c.lambda.rows(); ++i) {
        for (int j = 0; j < c.lambda.cols(); ++j) {
            if (c.lambda(i, j) < 2) {
                throw EmptyCell("cell (group " + std::to_string(i + 1) + ", occasion " +
                                std::to_string(j + 1) + ") has " +
                                std::to_string(c.lambda(i, j)) +
                                " observations; at least 2 are required");
            }
        }
    }
    return ValidatedDataset{std::move(data), std::move(c)};
}

}  // namespace rankfd
