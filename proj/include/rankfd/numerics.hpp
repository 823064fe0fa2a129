#pragma once

#include <algorithm>
#include <limits>

#include <Eigen/Dense>

#include "rankfd/error.hpp"

namespace rankfd {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Moore-Penrose pseudoinverse via SVD. Singular values at or below
/// rtol * sigma_max are truncated to zero; rtol < 0 selects the standard
/// max(rows, cols) * machine-epsilon cutoff.
inline Matrix pinv(const Matrix& m, double rtol = -1.0) {
    if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.cols(), m.rows());
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    if (!(smax > 0.0)) return Matrix::Zero(m.cols(), m.rows());
    if (rtol < 0.0) {
        rtol = static_cast<double>(std::max(m.rows(), m.cols())) *
               std::numeric_limits<double>::epsilon();
    }
    const double cutoff = rtol * smax;
    Vector inv = Vector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// Numerical rank under the same cutoff rule as pinv().
inline int matrix_rank(const Matrix& m, double rtol = -1.0) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Vector& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    if (!(smax > 0.0)) return 0;
    if (rtol < 0.0) {
        rtol = static_cast<double>(std::max(m.rows(), m.cols())) *
               std::numeric_limits<double>::epsilon();
    }
    const double cutoff = rtol * smax;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++r;
    }
    return r;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// v^T m v.
inline double quadform(const Vector& v, const Matrix& m) {
    if (m.rows() != m.cols() || v.size() != m.rows()) {
        throw DimensionMismatch("quadform: vector length must match square matrix size");
    }
    return v.dot(m * v);
}

inline double trace(const Matrix& m) {
    if (m.rows() != m.cols()) throw DimensionMismatch("trace: matrix must be square");
    return m.trace();
}

}  // namespace rankfd
