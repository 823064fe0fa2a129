#pragma once

#include <optional>

#include "rankfd/distributions.hpp"
#include "rankfd/error.hpp"
#include "rankfd/numerics.hpp"

namespace rankfd {

enum class StatKind { WTS = 0, ATS = 1, MATS = 2 };
inline constexpr int kStatKinds = 3;

inline const char* stat_name(StatKind k) {
    switch (k) {
        case StatKind::WTS: return "wts";
        case StatKind::ATS: return "ats";
        case StatKind::MATS: return "mats";
    }
    return "?";
}

struct StatValue {
    StatKind kind = StatKind::WTS;
    double value = 0.0;
    std::optional<double> dof;           // WTS: rank(C); ATS: f-hat; MATS: none
    std::optional<double> p_asymptotic;  // MATS: none (its limit law has unknown weights)
};

namespace detail {
// The studentizer is only positive semidefinite in exact arithmetic; tiny
// negative values from roundoff are clamped so statistics stay in [0, inf).
inline double clamp_nonneg(double x) { return x > 0.0 ? x : 0.0; }
}  // namespace detail

/// Wald-type value n (Cp)^T [C V C^T]^+ (Cp). Shared by the observed and
/// bootstrapped statistics.
inline double wts_value(const Vector& p_hat, const Matrix& vn, const Matrix& c, long long n) {
    if (c.cols() != p_hat.size() || vn.rows() != p_hat.size() || vn.cols() != p_hat.size()) {
        throw DimensionMismatch("wts: contrast/covariance dimensions do not match p_hat");
    }
    const Vector cp = c * p_hat;
    const Matrix m = c * vn * c.transpose();
    return detail::clamp_nonneg(static_cast<double>(n) * cp.dot(pinv(m) * cp));
}

/// ANOVA-type value n p^T T p / tr(T V). Throws DegenerateTrace when the
/// trace is not positive. When fhat_out is supplied it receives the Box-type
/// estimated degrees of freedom tr(TV)^2 / tr(TVTV).
inline double ats_value(const Vector& p_hat, const Matrix& vn, const Matrix& t, long long n,
                        double* fhat_out = nullptr) {
    if (t.cols() != p_hat.size() || vn.rows() != p_hat.size() || vn.cols() != p_hat.size()) {
        throw DimensionMismatch("ats: projection/covariance dimensions do not match p_hat");
    }
    const Matrix tv = t * vn;
    const double tr1 = tv.trace();
    if (!(tr1 > 0.0)) {
        throw DegenerateTrace("ats: tr(T V) is not positive; no variability under the projection");
    }
    if (fhat_out) {
        const double tr2 = (tv * tv).trace();
        if (!(tr2 > 0.0)) {
            throw DegenerateTrace("ats: tr(T V T V) is not positive");
        }
        *fhat_out = tr1 * tr1 / tr2;
    }
    return detail::clamp_nonneg(static_cast<double>(n) * quadform(p_hat, t) / tr1);
}

/// Modified ANOVA-type value n (Cp)^T [C D C^T]^+ (Cp) with D diagonal.
/// Throws ZeroDiagonal when a diagonal entry vanishes (constant cell).
inline double mats_value(const Vector& p_hat, const Vector& dn, const Matrix& c, long long n) {
    if (c.cols() != p_hat.size() || dn.size() != p_hat.size()) {
        throw DimensionMismatch("mats: contrast/diagonal dimensions do not match p_hat");
    }
    for (Eigen::Index i = 0; i < dn.size(); ++i) {
        if (dn(i) == 0.0) {
            throw ZeroDiagonal("mats: diagonal covariance entry " + std::to_string(i + 1) +
                               " is zero");
        }
    }
    const Vector cp = c * p_hat;
    const Matrix m = c * dn.asDiagonal() * c.transpose();
    return detail::clamp_nonneg(static_cast<double>(n) * cp.dot(pinv(m) * cp));
}

/// Wald-type statistic with its chi-square(f) upper-tail p-value,
/// f = rank(C).
inline StatValue wts(const Vector& p_hat, const Matrix& vn, const Matrix& c, long long n) {
    StatValue s;
    s.kind = StatKind::WTS;
    s.value = wts_value(p_hat, vn, c, n);
    const int f = matrix_rank(c);
    s.dof = static_cast<double>(f);
    s.p_asymptotic = f > 0 ? chisq_sf(s.value, static_cast<double>(f)) : 1.0;
    return s;
}

/// ANOVA-type statistic. Its distribution is approximated by F(fhat, inf),
/// i.e. chi-square(fhat)/fhat, so the p-value is the chi-square(fhat) upper
/// tail evaluated at fhat * T_A.
inline StatValue ats(const Vector& p_hat, const Matrix& vn, const Matrix& t, long long n) {
    StatValue s;
    s.kind = StatKind::ATS;
    double fhat = 0.0;
    s.value = ats_value(p_hat, vn, t, n, &fhat);
    s.dof = fhat;
    s.p_asymptotic = chisq_sf(fhat * s.value, fhat);
    return s;
}

/// Modified ANOVA-type statistic; no asymptotic p-value (bootstrap only).
inline StatValue mats(const Vector& p_hat, const Vector& dn, const Matrix& c, long long n) {
    StatValue s;
    s.kind = StatKind::MATS;
    s.value = mats_value(p_hat, dn, c, n);
    return s;
}

}  // namespace rankfd
