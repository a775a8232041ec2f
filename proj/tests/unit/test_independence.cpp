#include <cmath>

#include <gtest/gtest.h>

#include "unisr/independence.hpp"
#include "unisr/sampling.hpp"

namespace unisr {
namespace {

// Cofactor expansion along the first row, independent of Eigen's LU.
double det3(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double det4(const Eigen::Matrix4d& m) {
    double total = 0.0;
    for (int c = 0; c < 4; ++c) {
        Mat3 minor;
        for (int r = 1; r < 4; ++r)
            for (int k = 0, col = 0; k < 4; ++k)
                if (k != c) minor(r - 1, col++) = m(r, k);
        total += (c % 2 == 0 ? 1.0 : -1.0) * m(0, c) * det3(minor);
    }
    return total;
}

TEST(Jacobian, Layout) {
    const UnimodularParams p(1.0, 0.0);
    const JacobianJ j = jacobian_at_identity({1, 1, 1}, p);
    EXPECT_EQ(j(1, 1), -1.0);
    EXPECT_EQ(j(1, 2), 1.0);
    EXPECT_EQ(j.row(0), (Eigen::Matrix<double, 1, 6>() << 0, 1, 1, 0, 0, 0).finished());
    EXPECT_EQ(Mat3(j.block<3, 3>(2, 0)), Mat3(-Mat3::Identity()));
}

TEST(Jacobian, H0OnlyEntries) {
    const JacobianJ j = jacobian_at_identity({1, 0, 0}, {0.7, -1.9});
    Mat3 expected = Mat3::Zero();
    expected(1, 2) = 1.0;
    expected(2, 1) = -1.0;
    EXPECT_EQ(Mat3(j.block<3, 3>(2, 3)), expected);
}

TEST(Jacobian, ZeroState) {
    const JacobianJ j = jacobian_at_identity({0, 0, 0}, {1.3, 0.2});
    EXPECT_EQ(numerical_rank(j.topRows<2>()), 0);
    EXPECT_EQ(numerical_rank(j), 3);
}

TEST(Jacobian, RankNeverExceedsFour) {
    Sampler smp(41);
    for (int n = 0; n < 500; ++n) {
        const UnimodularParams p(smp.uniform(0, 3), smp.uniform(-3, 3));
        const Eigen::VectorXd sv = singular_values(jacobian_at_identity(smp.vertical(2.0), p));
        ASSERT_EQ(sv.size(), 5);
        EXPECT_LT(sv[4], 1e-9 * sv[0]);
    }
}

TEST(Jacobian, RankFourAwayFromGuardBand) {
    Sampler smp(42);
    int checked = 0;
    for (int n = 0; n < 500; ++n) {
        const UnimodularParams p(smp.uniform(0, 3), smp.uniform(-3, 3));
        const VerticalState h = smp.vertical(10.0 / std::sqrt(3.0));
        if (std::abs(h.h0 * h.h1) <= 0.01) continue;
        ++checked;
        EXPECT_EQ(numerical_rank(jacobian_at_identity(h, p)), 4);
    }
    EXPECT_GT(checked, 400);
}

TEST(NumericalRank, Basics) {
    EXPECT_EQ(numerical_rank(Mat3::Identity()), 3);
    const Vec3 u(1, 2, 3), v(-1, 0.5, 4);
    EXPECT_EQ(numerical_rank(u * v.transpose()), 1);
    EXPECT_EQ(numerical_rank(Mat3::Zero()), 0);
    EXPECT_EQ(numerical_rank(Eigen::MatrixXd(0, 0)), 0);
}

TEST(NumericalRank, StableUnderSmallPerturbations) {
    Sampler smp(43);
    const Vec3 u(1, 2, 3), v(-1, 0.5, 4);
    const Mat3 a = u * v.transpose();
    const double sigma = singular_values(a)[0];
    for (int n = 0; n < 50; ++n) {
        Mat3 e;
        for (int i = 0; i < 9; ++i) e(i / 3, i % 3) = smp.uniform(-1, 1);
        e *= 1e-10 * sigma / 10.0 / e.norm();
        EXPECT_EQ(numerical_rank(a + e), 1);
    }
}

TEST(MinorDet, IsTheDeterminantOfTheSubmatrix) {
    Sampler smp(44);
    for (int n = 0; n < 100; ++n) {
        const UnimodularParams p(smp.uniform(0, 3), smp.uniform(-3, 3));
        const VerticalState h = smp.vertical(2.0);
        const JacobianJ j = jacobian_at_identity(h, p);
        for (int x = 0; x < 3; ++x) {
            Eigen::Matrix4d sub;
            const int rows[] = {0, 2, 3, 4};
            const int cols[] = {0, 1, 2, 3 + x};
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) sub(r, c) = j(rows[r], cols[c]);
            EXPECT_NEAR(jacobian_minor(h, p, x), det4(sub), 1e-12);
        }
        EXPECT_EQ(minor_det_HgGG(h, p), jacobian_minor(h, p, 1));
    }
}

TEST(MinorDet, ClosedForms) {
    Sampler smp(45);
    for (int n = 0; n < 100; ++n) {
        const UnimodularParams p(smp.uniform(0, 3), smp.uniform(-3, 3));
        const VerticalState h = smp.vertical(2.0);
        EXPECT_NEAR(jacobian_minor(h, p, 0), -2.0 * p.chi() * h.h1 * h.h2, 1e-12);
        EXPECT_NEAR(jacobian_minor(h, p, 1), -h.h0 * h.h2, 1e-12);
        EXPECT_NEAR(jacobian_minor(h, p, 2), h.h0 * h.h1, 1e-12);
    }
    EXPECT_THROW(jacobian_minor({1, 1, 1}, {1, 0}, 3), std::invalid_argument);
}

// The x1 minor is -h0 h2; it equals -h0 h1 only where h1 == h2.
TEST(MinorDet, X1MinorIsNotMinusH0H1) {
    const UnimodularParams p(1.0, 0.0);
    EXPECT_NEAR(minor_det_HgGG({1, 1, 5}, p), -5.0, 1e-12);
    EXPECT_NEAR(minor_det_HgGG({2, 3, 3}, p), -6.0, 1e-12);
    EXPECT_EQ(minor_det_HgGG({0, 3, 1}, p), 0.0);
}

TEST(InvolutionDeterminant, Examples) {
    EXPECT_NEAR(involution_determinant({1, 1, 0}, {0, 0}, {0, 1, 0}), 0.0, 1e-15);
    EXPECT_NEAR(involution_determinant({1, 1, 1}, {0, 0}, {0, 1, 0}), 1.0, 1e-15);
    Sampler smp(46);
    for (int n = 0; n < 100; ++n)
        EXPECT_EQ(involution_determinant(smp.vertical(2.0), {0, smp.uniform(-3, 3)}, {1, 0, 0}),
                  0.0);
}

TEST(InvolutionDeterminant, AgreesWithExpansionAndCofactors) {
    Sampler smp(47);
    for (int n = 0; n < 200; ++n) {
        const UnimodularParams p(smp.uniform(0, 3), smp.uniform(-3, 3));
        const VerticalState h = smp.vertical(2.0);
        const Vec3 a = smp.vec3(-1, 1);
        const double det = involution_determinant(h, p, a);
        EXPECT_NEAR(det, involution_determinant_expansion(h, p, a), 1e-12);
        Mat3 m;
        m << 0, h.h1, h.h2, h.h0, -p.chi() * h.h1, p.chi() * h.h2, a[0], a[1], a[2];
        EXPECT_NEAR(det, det3(m), 1e-12);
    }
}

TEST(PoissonMatrix, Examples) {
    const PoissonMatrixP a = poisson_matrix_P(Vec3(1, 0, 0), {1.7, -0.4});
    PoissonMatrixP ea = PoissonMatrixP::Zero();
    ea(3, 2) = 1.0;
    ea(2, 3) = -1.0;
    EXPECT_EQ(a, ea);

    EXPECT_EQ(poisson_matrix_P(Vec3::Zero(), {1, 1}), PoissonMatrixP::Zero());

    const PoissonMatrixP b = poisson_matrix_P(Vec3(0, 1, 0), {1, 0});
    PoissonMatrixP eb = PoissonMatrixP::Zero();
    eb(3, 1) = 1.0;
    eb(1, 3) = -1.0;
    EXPECT_EQ(b, eb);
}

TEST(PoissonMatrix, StructureAndRank) {
    Sampler smp(48);
    const UnimodularParams classes[] = {{0, 0}, {0.5, 2}, {2, 0.5}, {1, 1}, {1, -1}};
    for (const auto& p : classes) {
        for (int n = 0; n < 50; ++n) {
            const Vec3 g = smp.vec3(-2, 2);
            const PoissonMatrixP m = poisson_matrix_P(g, p);
            EXPECT_EQ(m, -m.transpose());
            EXPECT_EQ(m.row(0).cwiseAbs().maxCoeff(), 0.0);
            EXPECT_LE(poisson_structure_residual(g, p), 0.0);
            EXPECT_EQ(numerical_rank(m), 2);
        }
    }
}

TEST(Admissibility, Rules) {
    EXPECT_TRUE(is_admissible_alpha({1, 0}, {1, 0, 0}));
    EXPECT_FALSE(is_admissible_alpha({0, 1}, {1, 0, 0}));
    EXPECT_TRUE(is_admissible_alpha({0, 1}, {0, 1, 1}));
    EXPECT_TRUE(is_admissible_alpha({0, 1}, {0, 0, -2}));
    EXPECT_FALSE(is_admissible_alpha({1, 0}, {0, 0, 0}));
}

TEST(Liouville, Examples) {
    const auto a = liouville_triple_check({1, 0}, {1, 0, 0}, 100, 1);
    EXPECT_TRUE(a.admissible);
    EXPECT_TRUE(a.passed);

    const auto b = liouville_triple_check({0, 1}, {1, 0, 0}, 100, 1);
    EXPECT_FALSE(b.admissible);
    EXPECT_TRUE(b.involution_ok);
    EXPECT_FALSE(b.independence_found);
    EXPECT_FALSE(b.passed);
    EXPECT_EQ(b.best_abs_det, 0.0);
    EXPECT_EQ(b.samples_tried, 100);

    const auto c = liouville_triple_check({0, 1}, {0, 1, 1}, 100, 1);
    EXPECT_TRUE(c.passed);
    EXPECT_LT(c.max_bracket_HE, 1e-10);
}

TEST(Liouville, RejectsBadArguments) {
    EXPECT_THROW(liouville_triple_check({1, 0}, {0, 0, 0}, 10), std::invalid_argument);
    EXPECT_THROW(liouville_triple_check({1, 0}, {1, 0, 0}, 0), std::invalid_argument);
}

TEST(Superintegrability, AllClasses) {
    const UnimodularParams classes[] = {{0, 0}, {0.5, 2}, {2, 0.5}, {1, 1}, {1, -1}};
    for (const auto& p : classes) {
        const auto r = superintegrability_check(p, 100, 3);
        EXPECT_TRUE(r.passed) << to_string(classify(p));
        EXPECT_EQ(r.min_rank_J, 4);
        EXPECT_EQ(r.max_rank_P, 2);
        EXPECT_GT(r.states_checked, 80);
    }
}

}  // namespace
}  // namespace unisr
