#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "rankfd/numerics.hpp"

namespace rankfd {

enum class Hypothesis { Group, Time, Interaction, Custom };

inline const char* hypothesis_name(Hypothesis h) {
    switch (h) {
        case Hypothesis::Group: return "group";
        case Hypothesis::Time: return "time";
        case Hypothesis::Interaction: return "interaction";
        case Hypothesis::Custom: return "custom";
    }
    return "?";
}

/// Contrast matrix C (rows sum to zero) together with the projector
/// T = C^T [C C^T]^+ C onto its row space. T depends only on the row space,
/// not on the particular C.
struct ContrastSpec {
    Matrix c;
    Matrix t;
    Hypothesis kind = Hypothesis::Custom;
    std::string label;
};

/// P_m = I_m - J_m / m.
inline Matrix centering_matrix(int m) {
    return Matrix::Identity(m, m) - Matrix::Constant(m, m, 1.0 / static_cast<double>(m));
}

inline Matrix projection(const Matrix& c) {
    Matrix t = c.transpose() * pinv(c * c.transpose()) * c;
    t = 0.5 * (t + t.transpose().eval());  // enforce exact symmetry
    return t;
}

/// Canonical factorial hypotheses for an a-group, d-occasion layout, in the
/// group-major effect ordering:
///   group:        P_a (x) (1/d) 1_d^T
///   time:         (1/a) 1_a^T (x) P_d
///   interaction:  P_a (x) P_d
inline ContrastSpec hypothesis_matrix(int a, int d, Hypothesis kind) {
    if (a < 1 || d < 1) throw InvalidDesign("need at least one group and one occasion");
    ContrastSpec spec;
    spec.kind = kind;
    spec.label = hypothesis_name(kind);
    switch (kind) {
        case Hypothesis::Group:
            if (a < 2) throw InvalidDesign("group hypothesis requires at least 2 groups");
            spec.c = kron(centering_matrix(a), Matrix::Constant(1, d, 1.0 / d));
            break;
        case Hypothesis::Time:
            if (d < 2) throw InvalidDesign("time hypothesis requires at least 2 occasions");
            spec.c = kron(Matrix::Constant(1, a, 1.0 / a), centering_matrix(d));
            break;
        case Hypothesis::Interaction:
            if (a < 2 || d < 2) {
                throw InvalidDesign("interaction hypothesis requires >= 2 groups and >= 2 occasions");
            }
            spec.c = kron(centering_matrix(a), centering_matrix(d));
            break;
        case Hypothesis::Custom:
            throw InvalidDesign("custom hypotheses take an explicit contrast matrix");
    }
    spec.t = projection(spec.c);
    return spec;
}

/// User-supplied contrast matrix; rows must sum to zero within tol.
inline ContrastSpec custom_contrast(Matrix c, int a, int d, double tol = 1e-10) {
    if (c.rows() < 1) throw InvalidDesign("contrast matrix has no rows");
    if (c.cols() != static_cast<Eigen::Index>(a) * d) {
        throw DimensionMismatch("contrast matrix must have a*d = " + std::to_string(a * d) +
                                " columns, got " + std::to_string(c.cols()));
    }
    for (Eigen::Index r = 0; r < c.rows(); ++r) {
        if (std::abs(c.row(r).sum()) > tol) {
            throw InvalidDesign("contrast row " + std::to_string(r + 1) +
                                " does not sum to zero");
        }
    }
    ContrastSpec spec;
    spec.kind = Hypothesis::Custom;
    spec.label = "custom";
    spec.t = projection(c);
    spec.c = std::move(c);
    return spec;
}

}  // namespace rankfd
