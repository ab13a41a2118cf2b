#include <gtest/gtest.h>

#include <random>

#include <simplexlat/epsweep.hpp>

#include "oracles.hpp"

using namespace simplexlat;

TEST(Subharmonic, M1EntriesAndSpectrum) {
    const auto sys = subharmonic_m1({1.0, 1.0});
    EXPECT_EQ(sys.m1()(0, 0), Complex(0.0, -1.0));
    EXPECT_EQ(sys.m1()(0, 1), Complex(-1.0));
    EXPECT_EQ(sys.labels()[1], "a†");
    const auto w = eigvals(subharmonic_m1({0.6, 1.0}).m1());
    EXPECT_NEAR(w[0].real(), 0.8, 1e-14);
    EXPECT_NEAR(w[1].real(), -0.8, 1e-14);
    EXPECT_THROW(subharmonic_m1({1.0, -1.0}), DimensionError);
}

TEST(Subharmonic, ThirdOrderAtEpIsNilpotent) {
    const CMatrix m3 = build_mm(subharmonic_m1({1.0, 1.0}), 3);
    const CMatrix m3_4 = oracle::matmul(oracle::matmul(m3, m3), oracle::matmul(m3, m3));
    EXPECT_EQ(oracle::frob(m3_4), 0.0);
    EXPECT_EQ(spectral_radius_bound(m3, 8), 0.0);
    // the cube does not vanish: Jordan blocks of size 4
    const CMatrix m3_3 = oracle::matmul(oracle::matmul(m3, m3), m3);
    EXPECT_GT(oracle::frob(m3_3), 0.0);
}

TEST(SpectralRadiusBound, UpperBoundsTrueRadius) {
    std::mt19937_64 rng(2);
    const CMatrix a = oracle::random_matrix(6, rng);
    EXPECT_GE(spectral_radius_bound(a, 20) * (1 + 1e-12), spectral_radius(eigvals(a)));
}

TEST(LogGrid, EndpointsAndSpacing) {
    const auto g = log_grid(1e-6, 1e-2, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_EQ(g.front(), 1e-6);
    EXPECT_EQ(g.back(), 1e-2);
    EXPECT_NEAR(g[2], 1e-4, 1e-18);
    EXPECT_THROW(log_grid(0.0, 1.0, 5), DimensionError);
    EXPECT_THROW(log_grid(1.0, 0.5, 5), DimensionError);
}

TEST(PowerLawFit, RecoversExponent) {
    const auto x = log_grid(1e-5, 1e-1, 30);
    std::vector<double> y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 0.37));
    const auto f = fit_power_law(x, y);
    EXPECT_NEAR(f.exponent, 0.37, 1e-12);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(PowerLawFit, RejectsShortOrNarrowWindowsAndFlatTracks) {
    const auto x = log_grid(1e-3, 1e-2, 20);
    std::vector<double> y(x.begin(), x.end());
    EXPECT_THROW(fit_power_law(x, y), FitError);  // one decade
    const auto wide = log_grid(1e-6, 1e-2, 5);
    EXPECT_THROW(fit_power_law(wide, std::vector<double>(wide.begin(), wide.end())), FitError);  // few points
    const auto ok = log_grid(1e-6, 1e-2, 20);
    EXPECT_THROW(fit_power_law(ok, std::vector<double>(20, 2.0)), FitError);
}

TEST(PerturbSweep, ShapeAndContinuity) {
    const CMatrix m3 = build_mm(subharmonic_m1({1.0, 1.0}), 3);
    const auto grid = log_grid(1e-6, 1e-2, 50);
    const auto r = perturb_sweep(m3, ddep_perturbation(), grid);
    ASSERT_EQ(r.matched_tracks.size(), 8u);
    ASSERT_EQ(r.matched_tracks[0].size(), 50u);
    ASSERT_EQ(r.tracks.size(), 50u);
    for (std::size_t e = 0; e < 50; ++e) {
        CVector col;
        for (const auto& t : r.matched_tracks) col.push_back(t[e]);
        EXPECT_LT(multiset_distance(col, r.tracks[e]), 1e-15);
    }
}

TEST(PerturbSweep, DdepSplittingExponents) {
    const CMatrix m3 = build_mm(subharmonic_m1({1.0, 1.0}), 3);
    const auto r = perturb_sweep(m3, ddep_perturbation(), log_grid(1e-6, 1e-2, 50));
    int quarter = 0, half = 0;
    for (std::size_t t = 0; t < 8; ++t) {
        const double p = fit_splitting_exponent(r, t).exponent;
        quarter += std::abs(p - 0.25) <= 0.05;
        half += std::abs(p - 0.5) <= 0.05;
    }
    EXPECT_EQ(quarter, 4);
    EXPECT_EQ(half, 4);
}

TEST(PerturbSweep, SimpleEpGivesSquareRoot) {
    // 2x2 Jordan block perturbed in the corner: eigenvalues +-sqrt(eps)
    const CMatrix j{{0.0, 1.0}, {0.0, 0.0}};
    const CMatrix p{{0.0, 0.0}, {1.0, 0.0}};
    const auto r = perturb_sweep(j, p, log_grid(1e-8, 1e-2, 30));
    for (std::size_t t = 0; t < 2; ++t) EXPECT_NEAR(fit_splitting_exponent(r, t).exponent, 0.5, 1e-6);
}

TEST(PerturbSweep, ValidatesInput) {
    const CMatrix a(2, 2);
    const std::vector<double> bad{1e-3, 1e-4};
    EXPECT_THROW(perturb_sweep(a, a, bad), DimensionError);
    EXPECT_THROW(perturb_sweep(a, CMatrix(3, 3), log_grid(1e-3, 1e-1, 3)), DimensionError);
}
