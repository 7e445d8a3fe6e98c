#include <gtest/gtest.h>

#include <cmath>

#include "netstab/error.hpp"
#include "netstab/spectral.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace netstab;

namespace {

double row_sum(const Matrix& m, std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.size(); ++j) {
        s += m(i, j);
    }
    return s;
}

Matrix scaled(const Matrix& m, double c) {
    Matrix out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            out(i, j) = c * m(i, j);
        }
    }
    return out;
}

} // namespace

TEST(Spectral, NonnegMatrixRejectsNegativeAndNonFinite) {
    EXPECT_THROW(NonnegMatrix({{1.0, -0.5}, {0.0, 1.0}}), DomainError);
    EXPECT_THROW(NonnegMatrix({{std::nan("")}}), DomainError);
    EXPECT_THROW(NonnegMatrix({{std::numeric_limits<double>::infinity()}}), DomainError);
}

TEST(Spectral, ComponentsOfSmallGraphs) {
    const auto zero = strongly_connected_components(NonnegMatrix({{0.0, 0.0}, {0.0, 0.0}}));
    ASSERT_EQ(zero.size(), 2u);
    EXPECT_TRUE(zero[0].trivial);
    EXPECT_TRUE(zero[1].trivial);

    Matrix ring(6);
    for (std::size_t j = 0; j < 6; ++j) {
        ring((j + 1) % 6, j) = 0.3;
        ring((j + 5) % 6, j) = 0.3;
    }
    const auto one = strongly_connected_components(NonnegMatrix(ring));
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one[0].members.size(), 6u);
    EXPECT_FALSE(one[0].trivial);

    // 0 -> 1 -> 2 with a loop on 2: sinks first.
    const auto chain = strongly_connected_components(NonnegMatrix({{0, 1, 0}, {0, 0, 1}, {0, 0, 1}}));
    ASSERT_EQ(chain.size(), 3u);
    EXPECT_EQ(chain[0].members, std::vector<std::size_t>{2});
    EXPECT_FALSE(chain[0].trivial);
    EXPECT_TRUE(chain[2].trivial);
}

TEST(Spectral, RadiusExamples) {
    EXPECT_NEAR(spectral_radius(NonnegMatrix({{1, 0}, {0, 1}})), 1.0, 1e-12);
    Matrix ring(6);
    for (std::size_t j = 0; j < 6; ++j) {
        ring((j + 1) % 6, j) = 0.3;
        ring((j + 5) % 6, j) = 0.3;
    }
    EXPECT_NEAR(spectral_radius(NonnegMatrix(ring)), 0.6, 1e-12);
    EXPECT_EQ(spectral_radius(NonnegMatrix({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}})), 0.0);
    EXPECT_NEAR(spectral_radius(NonnegMatrix({{0, 1}, {1, 0}})), 1.0, 1e-12);
    EXPECT_NEAR(spectral_radius(NonnegMatrix({{0, 4}, {1, 0}})), 2.0, 1e-12);
}

TEST(Spectral, GeneralRadiusOfSignedMatrix) {
    EXPECT_NEAR(spectral_radius_general(Matrix{{0, -1}, {1, 0}}), 1.0, 1e-12);
    EXPECT_NEAR(spectral_radius_general(Matrix{{-3, 0}, {0, 2}}), 3.0, 1e-12);
}

TEST(Spectral, IterationCapThrows) {
    SpectralOptions opts;
    opts.max_iterations = 1;
    EXPECT_THROW(spectral_radius(NonnegMatrix({{1, 2, 0}, {0.5, 0, 1}, {1, 0.1, 0}}), opts), ConvergenceError);
}

TEST(Spectral, Irreducibility) {
    Matrix ring(4);
    for (std::size_t j = 0; j < 4; ++j) {
        ring((j + 1) % 4, j) = 1.0;
    }
    EXPECT_TRUE(is_irreducible(NonnegMatrix(ring)));
    EXPECT_FALSE(is_irreducible(NonnegMatrix({{0, 1, 1}, {0, 0, 1}, {0, 0, 0}})));
    EXPECT_TRUE(is_irreducible(NonnegMatrix({{0.5, 0.2}, {0.2, 0.5}})));
}

TEST(Spectral, PerronPairs) {
    const PerronPair swap = perron_eigenvector(NonnegMatrix({{0, 1}, {1, 0}}));
    EXPECT_NEAR(swap.rho, 1.0, 1e-12);
    EXPECT_NEAR(swap.vector[0], 1.0, 1e-12);
    EXPECT_NEAR(swap.vector[1], 1.0, 1e-12);

    const PerronPair pair = perron_eigenvector(NonnegMatrix({{0.5, 0.2}, {0.2, 0.5}}));
    EXPECT_NEAR(pair.rho, 0.7, 1e-12);
    EXPECT_NEAR(pair.vector[0], 1.0, 1e-12);
    EXPECT_NEAR(pair.vector[1], 1.0, 1e-12);

    const PerronPair single = perron_eigenvector(NonnegMatrix({{2.0}}));
    EXPECT_NEAR(single.rho, 2.0, 1e-12);
    EXPECT_EQ(single.vector, std::vector<double>{1.0});

    EXPECT_THROW(perron_eigenvector(NonnegMatrix({{0, 1}, {0, 0}})), DomainError);
}

TEST(Spectral, PerronVectorIsEigenvector) {
    testgen::Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = static_cast<std::size_t>(testgen::uniform_int(rng, 1, 6));
        const NonnegMatrix m(testgen::random_irreducible(rng, n));
        const PerronPair p = perron_eigenvector(m);
        for (std::size_t i = 0; i < n; ++i) {
            double mv = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                mv += m(i, j) * p.vector[j];
            }
            EXPECT_GT(p.vector[i], 0.0);
            EXPECT_NEAR(mv, p.rho * p.vector[i], 1e-9 * (1.0 + p.rho));
        }
    }
}

TEST(Spectral, ThetaExtensionExamples) {
    const NonnegMatrix m({{2.0}});
    const NonnegMatrix low = theta_extension(m, 0, 0, 2.0, 0.0, 1.0);
    EXPECT_EQ(low.matrix(), (Matrix{{0, 2}, {1, 0}}));
    const double r1 = spectral_radius(low);
    EXPECT_NEAR(r1, std::sqrt(2.0), 1e-12);
    EXPECT_LE(1.0, r1);
    EXPECT_LE(r1, 2.0);

    const NonnegMatrix high = theta_extension(m, 0, 0, 2.0, 0.0, 4.0);
    EXPECT_EQ(high.matrix(), (Matrix{{0, 2}, {4, 0}}));
    EXPECT_NEAR(spectral_radius(high), std::sqrt(8.0), 1e-12);

    const NonnegMatrix m3({{0.5, 1.0}, {0.3, 0.2}});
    const NonnegMatrix same = theta_extension(m3, 0, 1, 0.0, 1.0, 0.7);
    EXPECT_NEAR(spectral_radius(same), spectral_radius(m3), 1e-12);
}

TEST(Spectral, ThetaExtensionRejectsBadSplits) {
    const NonnegMatrix m({{0.5, 1.0}, {0.3, 0.2}});
    EXPECT_THROW(theta_extension(m, 0, 1, 0.6, 0.6, 1.0), DomainError);
    EXPECT_THROW(theta_extension(m, 2, 0, 0.0, 0.0, 1.0), DomainError);
    EXPECT_THROW(theta_extension(m, 0, 1, -1.0, 2.0, 1.0), DomainError);
}

TEST(SpectralProperty, RowSumBracket) {
    testgen::Rng rng(1);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = static_cast<std::size_t>(testgen::uniform_int(rng, 1, 7));
        const Matrix m = testgen::random_nonneg(rng, n);
        const double rho = spectral_radius(NonnegMatrix(m));
        double lo = row_sum(m, 0);
        double hi = lo;
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, row_sum(m, i));
            hi = std::max(hi, row_sum(m, i));
        }
        EXPECT_LE(lo, rho + 1e-10);
        EXPECT_LE(rho, hi + 1e-10);
    }
}

TEST(SpectralProperty, Homogeneity) {
    testgen::Rng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(testgen::uniform_int(rng, 1, 6));
        const Matrix m = testgen::random_nonneg(rng, n);
        const double c = testgen::coin(rng, 0.1) ? 0.0 : testgen::uniform(rng, 0.0, 5.0);
        const double rho = spectral_radius(NonnegMatrix(m));
        EXPECT_NEAR(spectral_radius(NonnegMatrix(scaled(m, c))), c * rho, 1e-10 * std::max(1.0, c * rho));
    }
}

TEST(SpectralProperty, StrictMonotonicityOnIrreducible) {
    testgen::Rng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(testgen::uniform_int(rng, 1, 6));
        const Matrix a = testgen::random_irreducible(rng, n);
        Matrix b = testgen::random_nonneg(rng, n, 0.2, 0.5);
        const std::size_t i = static_cast<std::size_t>(testgen::uniform_int(rng, 0, static_cast<int>(n) - 1));
        const std::size_t j = static_cast<std::size_t>(testgen::uniform_int(rng, 0, static_cast<int>(n) - 1));
        b(i, j) += testgen::uniform(rng, 0.05, 0.5);
        Matrix sum(n);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                sum(r, c) = a(r, c) + b(r, c);
            }
        }
        EXPECT_GT(spectral_radius(NonnegMatrix(sum)), spectral_radius(NonnegMatrix(a)));
    }
}

TEST(SpectralProperty, AgreesWithCharacteristicPolynomialRoots) {
    testgen::Rng rng(4);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = static_cast<std::size_t>(testgen::uniform_int(rng, 1, 4));
        const Matrix m = testgen::random_irreducible(rng, n, 0.5);
        const double rho = spectral_radius(NonnegMatrix(m));
        EXPECT_NEAR(rho, oracle::spectral_radius_by_roots(m), 1e-8);
        EXPECT_NEAR(spectral_radius_general(m), rho, 1e-9);
    }
}

namespace {

struct Split {
    std::size_t l;
    std::size_t m;
    double alpha;
    double L;
};

Split random_split(testgen::Rng& rng, const Matrix& m) {
    const int n = static_cast<int>(m.size());
    const auto l = static_cast<std::size_t>(testgen::uniform_int(rng, 0, n - 1));
    const auto c = static_cast<std::size_t>(testgen::uniform_int(rng, 0, n - 1));
    const double t = testgen::uniform(rng, 0.0, 1.0);
    return {l, c, t * m(l, c), (1.0 - t) * m(l, c)};
}

} // namespace

TEST(SpectralProperty, ThetaBiconditional) {
    testgen::Rng rng(5);
    int tested = 0;
    while (tested < 200) {
        const std::size_t n = static_cast<std::size_t>(testgen::uniform_int(rng, 1, 6));
        const Matrix m = testgen::random_nonneg(rng, n);
        const double rho = spectral_radius(NonnegMatrix(m));
        const double theta = testgen::uniform(rng, 0.01, 2.0 * rho + 1.0);
        if (std::fabs(rho - theta) <= 1e-6) {
            continue;
        }
        const Split s = random_split(rng, m);
        const double rt = spectral_radius(theta_extension(NonnegMatrix(m), s.l, s.m, s.alpha, s.L, theta));
        EXPECT_EQ(rt < theta, rho < theta) << "rho " << rho << " theta " << theta << " rho_theta " << rt;
        ++tested;
    }
}

TEST(SpectralProperty, ThetaExtensionBounds) {
    testgen::Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = static_cast<std::size_t>(testgen::uniform_int(rng, 1, 6));
        const Matrix m = testgen::random_irreducible(rng, n);
        const double rho = spectral_radius(NonnegMatrix(m));
        // Split an edge that exists, with a positive new-vertex weight.
        std::size_t l = 0;
        std::size_t c = 0;
        do {
            l = static_cast<std::size_t>(testgen::uniform_int(rng, 0, static_cast<int>(n) - 1));
            c = static_cast<std::size_t>(testgen::uniform_int(rng, 0, static_cast<int>(n) - 1));
        } while (m(l, c) == 0.0);
        const double t = testgen::uniform(rng, 0.1, 1.0);
        const double theta = testgen::uniform(rng, 0.01, 2.0 * rho);
        const double rt = spectral_radius(theta_extension(NonnegMatrix(m), l, c, t * m(l, c), (1 - t) * m(l, c), theta));
        const double tol = 1e-10 * (1.0 + rho);
        if (theta <= rho) {
            EXPECT_LE(theta, rt + tol);
            EXPECT_LE(rt, rho + tol);
        } else {
            EXPECT_LT(rho, rt + tol);
            EXPECT_LT(rt, theta + tol);
        }
    }
}

TEST(Spectral, AbsOfSignedMatrix) {
    const NonnegMatrix a = abs(Matrix{{-1, 2}, {0, -0.5}});
    EXPECT_EQ(a.matrix(), (Matrix{{1, 2}, {0, 0.5}}));
}
