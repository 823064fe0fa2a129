#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "rankfd/datagen.hpp"

using rankfd::CovSetting;
using rankfd::GeneratorSpec;
using rankfd::IncompleteDataset;
using rankfd::Marginal;
using rankfd::MarPair;
using rankfd::Matrix;
using rankfd::Vector;

namespace {

double column_corr(const Matrix& m, int j1, int j2) {
    const Eigen::Index n = m.rows();
    const double m1 = m.col(j1).mean(), m2 = m.col(j2).mean();
    double s11 = 0, s22 = 0, s12 = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        const double d1 = m(k, j1) - m1, d2 = m(k, j2) - m2;
        s11 += d1 * d1;
        s22 += d2 * d2;
        s12 += d1 * d2;
    }
    return s12 / std::sqrt(s11 * s22);
}

}  // namespace

TEST_CASE("covariance settings produce the stated matrices", "[datagen]") {
    const Matrix ar = rankfd::covariance_setting(CovSetting::Autoregressive, 3);
    Matrix ar_expected(3, 3);
    ar_expected << 1.0, 0.6, 0.36, 0.6, 1.0, 0.6, 0.36, 0.6, 1.0;
    CHECK((ar - ar_expected).cwiseAbs().maxCoeff() < 1e-15);

    CHECK((rankfd::covariance_setting(CovSetting::CompoundSymmetry, 5) -
           Matrix::Identity(5, 5))
              .norm() == 0.0);

    const Matrix tp = rankfd::covariance_setting(CovSetting::Toeplitz, 2);
    Matrix tp_expected(2, 2);
    tp_expected << 2.0, 1.0, 1.0, 2.0;
    CHECK((tp - tp_expected).norm() == 0.0);
}

TEST_CASE("copula sampler hits the target dependence", "[datagen]") {
    GeneratorSpec spec;
    spec.a = 1;
    spec.d = 2;
    spec.group_sizes = {10000};
    spec.marginal = Marginal::Normal;

    spec.covariance = CovSetting::CompoundSymmetry;
    rankfd::Rng rng(314);
    const auto cs = rankfd::copula_sample(spec, rng);
    CHECK(std::abs(column_corr(cs.groups[0].values, 0, 1)) < 0.05);

    spec.covariance = CovSetting::Autoregressive;
    rankfd::Rng rng2(217);
    const auto ar = rankfd::copula_sample(spec, rng2);
    CHECK(std::abs(column_corr(ar.groups[0].values, 0, 1) - 0.6) < 0.03);

    // Toeplitz standardizes to off-diagonal (d - 1)/d = 0.5 for d = 2.
    spec.covariance = CovSetting::Toeplitz;
    rankfd::Rng rng3(911);
    const auto tp = rankfd::copula_sample(spec, rng3);
    CHECK(std::abs(column_corr(tp.groups[0].values, 0, 1) - 0.5) < 0.03);
}

TEST_CASE("copula marginals have roughly the right moments", "[datagen]") {
    GeneratorSpec spec;
    spec.a = 1;
    spec.d = 1;
    spec.group_sizes = {20000};
    spec.covariance = CovSetting::CompoundSymmetry;

    spec.marginal = Marginal::ChiSq15;
    rankfd::Rng rng(1);
    const auto chi = rankfd::copula_sample(spec, rng);
    CHECK(chi.groups[0].values.mean() == Catch::Approx(15.0).margin(0.25));

    spec.marginal = Marginal::DoubleExponential;
    rankfd::Rng rng2(2);
    const auto de = rankfd::copula_sample(spec, rng2);
    CHECK(de.groups[0].values.mean() == Catch::Approx(0.0).margin(0.05));

    spec.marginal = Marginal::LogNormal;
    rankfd::Rng rng3(3);
    const auto ln = rankfd::copula_sample(spec, rng3);
    CHECK(ln.groups[0].values.minCoeff() > 0.0);
}

TEST_CASE("per-group shifts enter the copula sampler additively", "[datagen]") {
    GeneratorSpec spec;
    spec.a = 2;
    spec.d = 2;
    spec.group_sizes = {50, 50};
    spec.marginal = Marginal::Normal;
    spec.covariance = CovSetting::Autoregressive;

    rankfd::Rng rng(24601);
    const auto base = rankfd::copula_sample(spec, rng);

    spec.shift = {Vector::Zero(2), Vector::Zero(2)};
    spec.shift[1](1) = 2.5;
    rankfd::Rng rng2(24601);
    const auto shifted = rankfd::copula_sample(spec, rng2);
    CHECK(shifted.groups[0].values == base.groups[0].values);
    CHECK(shifted.groups[1].values.col(0) == base.groups[1].values.col(0));
    CHECK(shifted.groups[1].values.col(1) ==
          (base.groups[1].values.col(1).array() + 2.5).matrix());
}

TEST_CASE("ordinal generator: range, uniformity at c = 0, association at c = 1", "[datagen]") {
    rankfd::Rng rng(6040);
    const auto free = rankfd::ordinal_sample(0.0, 1, 1, {10000}, rng);
    std::array<int, 4> freq{};
    for (int k = 0; k < 10000; ++k) {
        const double x = free.groups[0].values(k, 0);
        REQUIRE(x >= 1.0);
        REQUIRE(x <= 4.0);
        REQUIRE(x == std::floor(x));
        ++freq[static_cast<std::size_t>(x) - 1];
    }
    for (int c = 0; c < 4; ++c) CHECK(std::abs(freq[static_cast<std::size_t>(c)] / 10000.0 - 0.25) < 0.02);

    rankfd::Rng rng2(6041);
    const auto assoc = rankfd::ordinal_sample(1.0, 1, 2, {10000}, rng2);
    CHECK(column_corr(assoc.groups[0].values, 0, 1) > 0.2);

    CHECK_THROWS_AS(rankfd::ordinal_sample(-0.5, 1, 2, {10}, rng2), rankfd::InvalidDesign);
}

TEST_CASE("MCAR injection touches only the mask at the requested rate", "[datagen]") {
    GeneratorSpec spec;
    spec.a = 1;
    spec.d = 4;
    spec.group_sizes = {2500};
    spec.marginal = Marginal::Normal;
    spec.covariance = CovSetting::CompoundSymmetry;
    rankfd::Rng rng(88);
    const auto base = rankfd::copula_sample(spec, rng);

    rankfd::Rng noise(89);
    const auto same = rankfd::inject_mcar(base, 0.0, noise);
    CHECK(same.groups[0].mask == base.groups[0].mask);
    CHECK(same.groups[0].values == base.groups[0].values);

    rankfd::Rng noise2(90);
    const auto injected = rankfd::inject_mcar(base, 0.3, noise2);
    CHECK(injected.groups[0].values == base.groups[0].values);  // bit-identical payloads
    const double missing =
        1.0 - injected.groups[0].mask.cast<double>().sum() / (2500.0 * 4.0);
    CHECK(std::abs(missing - 0.3) < 0.02);

    CHECK_THROWS_AS(rankfd::inject_mcar(base, 1.0, noise2), rankfd::InvalidDesign);

    // The mask draw is independent of the stored values: transforming the
    // data and replaying the stream gives the same mask.
    auto transformed = base;
    for (auto& g : transformed.groups) {
        g.values = g.values.unaryExpr([](double x) { return std::exp(x); });
    }
    rankfd::Rng replay_a(4242), replay_b(4242);
    const auto mask_a = rankfd::inject_mcar(base, 0.25, replay_a);
    const auto mask_b = rankfd::inject_mcar(transformed, 0.25, replay_b);
    CHECK(mask_a.groups[0].mask == mask_b.groups[0].mask);
}

TEST_CASE("MAR pair defaults and validation", "[datagen]") {
    const auto p4 = rankfd::default_mar_pairs(4);
    REQUIRE(p4.size() == 2);
    CHECK(p4[0].determining == 0);
    CHECK(p4[0].target == 1);
    CHECK(p4[1].determining == 2);
    CHECK(p4[1].target == 3);

    const auto p8 = rankfd::default_mar_pairs(8);
    REQUIRE(p8.size() == 4);
    CHECK(p8[0].determining == 0);
    CHECK(p8[0].target == 1);
    CHECK(p8[1].determining == 0);
    CHECK(p8[1].target == 2);
    CHECK(p8[2].determining == 5);
    CHECK(p8[2].target == 6);
    CHECK(p8[3].determining == 5);
    CHECK(p8[3].target == 7);

    CHECK_THROWS_AS(rankfd::default_mar_pairs(5), rankfd::InvalidDesign);
    // An occasion may not be determining in one pair and targeted in another.
    CHECK_THROWS_AS(rankfd::validate_mar_pairs({{0, 1}, {1, 2}}, 4), rankfd::InvalidDesign);
    CHECK_THROWS_AS(rankfd::validate_mar_pairs({{0, 1}, {2, 1}}, 4), rankfd::InvalidDesign);
    CHECK_THROWS_AS(rankfd::validate_mar_pairs({{0, 0}}, 4), rankfd::InvalidDesign);
}

TEST_CASE("MAR1 follows the two-sigma band rates and spares determining occasions",
          "[datagen]") {
    // Constant determining feature: every subject falls in the middle band.
    IncompleteDataset flat = rankfd::make_complete(1, 2, {10000});
    flat.groups[0].values.col(0).setZero();
    flat.groups[0].values.col(1).setRandom();
    rankfd::Rng rng(4096);
    const auto injected = rankfd::inject_mar1(flat, {{0, 1}}, rng);
    CHECK(injected.groups[0].mask.col(0).cast<int>().sum() == 10000);  // untouched
    const double miss = 1.0 - injected.groups[0].mask.col(1).cast<double>().sum() / 10000.0;
    CHECK(std::abs(miss - 0.30) < 0.03);

    // Normal determining feature: overall rate blends 30% and 15%.
    GeneratorSpec spec;
    spec.a = 1;
    spec.d = 4;
    spec.group_sizes = {10000};
    spec.marginal = Marginal::Normal;
    spec.covariance = CovSetting::CompoundSymmetry;
    rankfd::Rng gen(4097);
    const auto data = rankfd::copula_sample(spec, gen);
    rankfd::Rng noise(4098);
    const auto mar = rankfd::inject_mar1(data, rankfd::default_mar_pairs(4), noise);
    CHECK(mar.groups[0].mask.col(0).cast<int>().sum() == 10000);
    CHECK(mar.groups[0].mask.col(2).cast<int>().sum() == 10000);
    for (int target : {1, 3}) {
        const double rate =
            1.0 - mar.groups[0].mask.col(target).cast<double>().sum() / 10000.0;
        CHECK(std::abs(rate - (0.30 * 0.9545 + 0.15 * 0.0455)) < 0.03);
    }
    CHECK(mar.groups[0].values == data.groups[0].values);
}

TEST_CASE("MAR2 splits at the median with 10%/30% rates", "[datagen]") {
    GeneratorSpec spec;
    spec.a = 1;
    spec.d = 2;
    spec.group_sizes = {10000};
    spec.marginal = Marginal::Normal;
    spec.covariance = CovSetting::CompoundSymmetry;
    rankfd::Rng gen(555);
    const auto data = rankfd::copula_sample(spec, gen);
    rankfd::Rng noise(556);
    const auto mar = rankfd::inject_mar2(data, {{0, 1}}, noise);

    const auto& values = data.groups[0].values;
    std::vector<double> col0(values.rows());
    for (Eigen::Index k = 0; k < values.rows(); ++k) col0[static_cast<std::size_t>(k)] = values(k, 0);
    std::sort(col0.begin(), col0.end());
    const double median = 0.5 * (col0[4999] + col0[5000]);

    int below = 0, below_missing = 0, above = 0, above_missing = 0;
    for (Eigen::Index k = 0; k < values.rows(); ++k) {
        if (values(k, 0) <= median) {
            ++below;
            below_missing += mar.groups[0].mask(k, 1) ? 0 : 1;
        } else {
            ++above;
            above_missing += mar.groups[0].mask(k, 1) ? 0 : 1;
        }
    }
    CHECK(std::abs(static_cast<double>(below_missing) / below - 0.10) < 0.02);
    CHECK(std::abs(static_cast<double>(above_missing) / above - 0.30) < 0.03);
    const double overall = static_cast<double>(below_missing + above_missing) / 10000.0;
    CHECK(std::abs(overall - 0.20) < 0.03);
}

TEST_CASE("shift alternative adds exactly to the chosen occasions", "[datagen]") {
    IncompleteDataset data = rankfd::make_complete(1, 4, {5});
    data.groups[0].values.setRandom();
    const Matrix before = data.groups[0].values;

    Vector zero = Vector::Zero(4);
    const auto unchanged = rankfd::shift_alternative(data, 0, zero);
    CHECK(unchanged.groups[0].values == before);

    Vector mu(4);
    mu << 0, 0, 2, 2;
    const auto shifted = rankfd::shift_alternative(data, 0, mu);
    CHECK(shifted.groups[0].values.col(0) == before.col(0));
    CHECK(shifted.groups[0].values.col(2) == (before.col(2).array() + 2.0).matrix());
    CHECK(shifted.groups[0].values.col(3) == (before.col(3).array() + 2.0).matrix());

    CHECK_THROWS_AS(rankfd::shift_alternative(data, 2, mu), rankfd::DimensionMismatch);
    CHECK_THROWS_AS(rankfd::shift_alternative(data, 0, Vector::Zero(3)),
                    rankfd::DimensionMismatch);
}
