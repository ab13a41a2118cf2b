#include <gtest/gtest.h>

#include <random>

#include <simplexlat/dfrft.hpp>
#include <simplexlat/lattice.hpp>
#include <simplexlat/reduction.hpp>

#include "oracles.hpp"

using namespace simplexlat;

namespace {

Signal random_signal(std::size_t len, std::mt19937_64& rng) {
    Signal s;
    for (std::size_t k = 0; k < len; ++k) s.samples.push_back(oracle::random_complex(rng));
    return s;
}

double max_diff(const CVector& a, const CVector& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

}  // namespace

TEST(Sylvester, IsReducedDimer) {
    const Complex alpha(0.8, -0.3);
    const ModeSystem dimer(CMatrix{{0.0, alpha}, {alpha, 0.0}});
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto red = reduce(dimer, n, ReductionMode::average);
        EXPECT_LT(oracle::max_entry_diff(red.meff, sylvester_matrix(n, alpha)), 1e-12) << n;
    }
}

TEST(Sylvester, SimilarityGivesJx) {
    for (std::size_t n : {1u, 2u, 5u, 16u, 64u}) {
        const double alpha = 0.9;
        const CMatrix m = sylvester_matrix(n, alpha);
        const CMatrix s = similarity_s(m);
        for (std::size_t j = 0; j <= n; ++j) {
            // S(j, j) = 1 / sqrt(C(n, j))
            double c = 1.0;
            for (std::size_t k = 1; k <= j; ++k) c = c * static_cast<double>(n - j + k) / static_cast<double>(k);
            EXPECT_NEAR(s(j, j).real(), 1.0 / std::sqrt(c), 1e-12 / std::sqrt(c));
        }
        const CMatrix sinv = LUDecomposition(s).inverse();
        const CMatrix got = oracle::matmul(oracle::matmul(sinv, m), s);
        const CMatrix jx = jx_matrix({n, alpha});
        EXPECT_LT(oracle::max_entry_diff(got, jx), 1e-10 * oracle::frob(jx)) << n;
    }
}

TEST(Sylvester, RejectsNonTridiagonalAndBrokenChains) {
    EXPECT_THROW(similarity_s(CMatrix{{0.0, 1.0, 1.0}, {1.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}), DimensionError);
    EXPECT_THROW(similarity_s(CMatrix{{0.0, 0.0}, {1.0, 0.0}}), DimensionError);
    EXPECT_THROW(sylvester_matrix(0, 1.0), DimensionError);
}

TEST(Jx, EquallySpacedSpectrum) {
    for (std::size_t n : {1u, 4u, 9u, 32u}) {
        const Complex alpha(0.6, 0.0);
        const CVector w = eigvals(jx_matrix({n, alpha}));
        for (std::size_t k = 0; k <= n; ++k) {
            const double want = 2.0 * alpha.real() * (static_cast<double>(n) / 2.0 - static_cast<double>(k));
            EXPECT_NEAR(w[k].real(), want, 1e-9);
            EXPECT_NEAR(w[k].imag(), 0.0, 1e-9);
        }
    }
}

TEST(Frft, IdentityAtZero) {
    std::mt19937_64 rng(1);
    const auto sig = random_signal(9, rng);
    const auto r = frft(sig, 0.0, {8, 1.0});
    EXPECT_LT(max_diff(r.signal.samples, sig.samples), 1e-10);
    EXPECT_FALSE(r.non_unitary);
}

TEST(Frft, AdditiveAndNormPreserving) {
    std::mt19937_64 rng(2);
    const JxSpec spec{11, 0.5};
    const FractionalFourier f(spec);
    const auto sig = random_signal(12, rng);
    const auto ab = f.apply(f.apply(sig, 0.3), 0.45);
    const auto direct = f.apply(sig, 0.75);
    EXPECT_LT(max_diff(ab.samples, direct.samples), 1e-10);
    EXPECT_NEAR(norm2(direct.samples), norm2(sig.samples), 1e-10);
}

TEST(Frft, PeriodFourWithParitySign) {
    std::mt19937_64 rng(3);
    for (std::size_t n : {4u, 5u}) {
        const auto sig = random_signal(n + 1, rng);
        const auto r = frft(sig, 4.0, {n, 1.0});
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        CVector want = sig.samples;
        for (auto& z : want) z *= sign;
        EXPECT_LT(max_diff(r.signal.samples, want), 1e-9) << n;
    }
}

TEST(Frft, ComplexAlphaFlagsNonUnitary) {
    std::mt19937_64 rng(4);
    const auto sig = random_signal(5, rng);
    const auto r = frft(sig, 0.0, {4, Complex(1.0, 0.5)});
    EXPECT_TRUE(r.non_unitary);
    EXPECT_LT(max_diff(r.signal.samples, sig.samples), 1e-9);
}

TEST(Frft, LengthMismatch) {
    const FractionalFourier f({3, 1.0});
    EXPECT_THROW(f.apply(Signal{CVector(3)}, 0.5), DimensionError);
}
