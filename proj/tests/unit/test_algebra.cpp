#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "unisr/algebra.hpp"
#include "unisr/sampling.hpp"
#include "unisr/vertical.hpp"

namespace unisr {
namespace {

// Independent oracle: the bracket table written out entry by entry.
StructureConstants::Tensor table(double chi, double kappa) {
    StructureConstants::Tensor c{};
    c[2][1][0] = 1.0;
    c[1][2][0] = -1.0;
    c[1][0][2] = chi + kappa;
    c[0][1][2] = -(chi + kappa);
    c[2][0][1] = chi - kappa;
    c[0][2][1] = -(chi - kappa);
    return c;
}

// trace(ad_x ad_y) straight from the tensor:
// K_ab = sum_{j,k} c[a][j][k] c[b][k][j].
Mat3 killing_oracle(double chi, double kappa) {
    const auto c = table(chi, kappa);
    Mat3 k = Mat3::Zero();
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int j = 0; j < 3; ++j)
                for (int l = 0; l < 3; ++l) k(a, b) += c[a][j][l] * c[b][l][j];
    return k;
}

TEST(UnimodularParams, RejectsNegativeChi) {
    EXPECT_THROW(UnimodularParams(-1.0, 0.0), std::invalid_argument);
    EXPECT_THROW(UnimodularParams(-1e-300, 0.0), std::invalid_argument);
    EXPECT_NO_THROW(UnimodularParams(0.0, -5.0));
}

TEST(UnimodularParams, RejectsNonFinite) {
    EXPECT_THROW(UnimodularParams(std::nan(""), 0.0), std::invalid_argument);
    EXPECT_THROW(UnimodularParams(1.0, INFINITY), std::invalid_argument);
}

TEST(StructureConstants, HeisenbergHasSingleBracket) {
    const auto c = structure_constants(UnimodularParams(0.0, 0.0));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double expected = 0.0;
                if (i == 2 && j == 1 && k == 0) expected = 1.0;
                if (i == 1 && j == 2 && k == 0) expected = -1.0;
                EXPECT_EQ(c(i, j, k), expected) << i << j << k;
            }
}

TEST(StructureConstants, Substitutions) {
    const auto se2 = structure_constants(UnimodularParams(1.0, 1.0));
    EXPECT_EQ(se2(2, 1, 0), 1.0);
    EXPECT_EQ(se2(1, 0, 2), 2.0);
    EXPECT_EQ(se2(2, 0, 1), 0.0);
    const auto sh2 = structure_constants(UnimodularParams(1.0, -1.0));
    EXPECT_EQ(sh2(2, 1, 0), 1.0);
    EXPECT_EQ(sh2(1, 0, 2), 0.0);
    EXPECT_EQ(sh2(2, 0, 1), 2.0);
}

TEST(StructureConstants, MatchesTableOnGrid) {
    for (double chi = 0.0; chi <= 3.0; chi += 0.25)
        for (double kappa = -3.0; kappa <= 3.0; kappa += 0.25) {
            const auto c = structure_constants(UnimodularParams(chi, kappa));
            EXPECT_EQ(c.tensor(), table(chi, kappa));
            EXPECT_LE(c.antisymmetry_residual(), 0.0);
            EXPECT_LE(c.jacobi_residual(), 1e-14);
        }
}

TEST(StructureConstants, ResidualsDetectBrokenTensors) {
    auto t = table(1.0, 0.5);
    t[0][1][2] = 0.0;
    EXPECT_GT(StructureConstants(t).antisymmetry_residual(), 0.1);

    // Antisymmetric but not a Lie algebra: [f0,f1] = f0, [f1,f2] = f1,
    // [f2,f0] = f1 fails Jacobi.
    StructureConstants::Tensor bad{};
    bad[0][1][0] = 1.0;
    bad[1][0][0] = -1.0;
    bad[1][2][1] = 1.0;
    bad[2][1][1] = -1.0;
    bad[2][0][1] = 1.0;
    bad[0][2][1] = -1.0;
    EXPECT_GT(StructureConstants(bad).jacobi_residual(), 0.1);
}

TEST(AdMatrix, F1InHeisenberg) {
    const Mat3 a = ad_matrix(UnimodularParams(0.0, 0.0), Vec3::Unit(1));
    Mat3 expected = Mat3::Zero();
    expected(0, 2) = -1.0;  // f2 -> -f0
    EXPECT_EQ(a, expected);
}

TEST(AdMatrix, ZeroVector) {
    EXPECT_EQ(ad_matrix(UnimodularParams(2.0, 1.0), Vec3::Zero()), Mat3::Zero());
}

TEST(AdMatrix, F0InSl2) {
    const Mat3 a = ad_matrix(UnimodularParams(1.0, 0.0), Vec3::Unit(0));
    Mat3 expected = Mat3::Zero();
    expected(2, 1) = -1.0;  // f1 -> -(chi + kappa) f2
    expected(1, 2) = -1.0;  // f2 -> -(chi - kappa) f1
    EXPECT_EQ(a, expected);
}

TEST(AdMatrix, ColumnsAreBracketsAndTraceless) {
    Sampler s(3);
    for (int n = 0; n < 50; ++n) {
        const UnimodularParams p(s.uniform(0.0, 3.0), s.uniform(-3.0, 3.0));
        const Vec3 v = s.vec3(-2.0, 2.0);
        const auto c = table(p.chi(), p.kappa());
        const Mat3 a = ad_matrix(p, v);
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                double expected = 0.0;
                for (int i = 0; i < 3; ++i) expected += v[i] * c[i][j][k];
                EXPECT_NEAR(a(k, j), expected, 1e-15);
            }
        EXPECT_NEAR(a.trace(), 0.0, 1e-15);
    }
}

TEST(KillingForm, MatchesTensorOracle) {
    Sampler s(4);
    for (int n = 0; n < 50; ++n) {
        const double chi = s.uniform(0.0, 3.0);
        const double kappa = s.uniform(-3.0, 3.0);
        const Mat3 k = killing_form(UnimodularParams(chi, kappa));
        EXPECT_LE((k - killing_oracle(chi, kappa)).cwiseAbs().maxCoeff(), 1e-13);
        EXPECT_EQ(k, k.transpose());
    }
}

TEST(KillingForm, Examples) {
    EXPECT_EQ(killing_form(UnimodularParams(0.0, 0.0)), Mat3::Zero());

    const Mat3 so3 = killing_form(UnimodularParams(0.0, 1.0));
    EXPECT_TRUE(so3.isDiagonal());
    const KillingSignature sig = killing_signature(UnimodularParams(0.0, 1.0));
    EXPECT_EQ(sig.negative, 3);

    const Mat3 se2 = killing_form(UnimodularParams(1.0, 1.0));
    EXPECT_TRUE(se2.isDiagonal());
    EXPECT_EQ(se2.determinant(), 0.0);
}

TEST(KillingForm, DegenerateExactlyOnChiEqualsAbsKappa) {
    for (double chi = 0.0; chi <= 3.0; chi += 0.25)
        for (double kappa = -3.0; kappa <= 3.0; kappa += 0.25) {
            const double det = killing_form(UnimodularParams(chi, kappa)).determinant();
            if (chi == std::abs(kappa)) {
                EXPECT_LT(std::abs(det), 1e-12) << chi << "," << kappa;
            } else if (std::abs(chi - kappa) > 0.1 && std::abs(chi + kappa) > 0.1) {
                EXPECT_GT(std::abs(det), 1e-6) << chi << "," << kappa;
            }
        }
}

TEST(Classify, RepresentativePoints) {
    EXPECT_EQ(classify(UnimodularParams(0.0, 0.0)), AlgebraClass::h3);
    EXPECT_EQ(classify(UnimodularParams(0.5, 2.0)), AlgebraClass::so3);
    EXPECT_EQ(classify(UnimodularParams(2.0, 0.5)), AlgebraClass::sl2);
    EXPECT_EQ(classify(UnimodularParams(1.0, 1.0)), AlgebraClass::se2);
    EXPECT_EQ(classify(UnimodularParams(1.0, -1.0)), AlgebraClass::sh2);
}

TEST(Classify, ChiZeroSplitsBySignOfKappa) {
    EXPECT_EQ(classify(UnimodularParams(0.0, 1.0)), AlgebraClass::so3);
    EXPECT_EQ(classify(UnimodularParams(0.0, -1.0)), AlgebraClass::sl2);
}

TEST(Classify, CaseListOnGrid) {
    for (double chi = 0.0; chi <= 3.0; chi += 0.25)
        for (double kappa = -3.0; kappa <= 3.0; kappa += 0.25) {
            const AlgebraClass cls = classify(UnimodularParams(chi, kappa));
            AlgebraClass expected = AlgebraClass::sl2;
            if (chi == 0.0 && kappa == 0.0) expected = AlgebraClass::h3;
            else if (chi == kappa) expected = AlgebraClass::se2;
            else if (chi == -kappa) expected = AlgebraClass::sh2;
            else if (kappa > chi) expected = AlgebraClass::so3;
            EXPECT_EQ(cls, expected) << chi << "," << kappa;
        }
}

TEST(Classify, NamesAndGroups) {
    EXPECT_EQ(to_string(AlgebraClass::h3), "h3");
    EXPECT_EQ(to_string(AlgebraClass::se2), "se2");
    EXPECT_EQ(group_description(AlgebraClass::h3), "Heisenberg");
}

TEST(LiePoissonBracket, IntegralBrackets) {
    const Vec3 h(3.0, 1.0, 2.0);
    const VerticalState hs = VerticalState::from_vec(h);
    for (const double kappa : {-1.0, 0.0, 2.5}) {
        const UnimodularParams p(2.0, kappa);
        EXPECT_DOUBLE_EQ(lie_poisson_bracket(grad_hamiltonian(hs), Vec3::Unit(1), h, p), 6.0);
        EXPECT_DOUBLE_EQ(lie_poisson_bracket(grad_hamiltonian(hs), Vec3::Unit(0), h, p), 8.0);
        EXPECT_DOUBLE_EQ(lie_poisson_bracket(grad_hamiltonian(hs), Vec3::Unit(2), h, p), -3.0);
    }
}

TEST(LiePoissonBracket, AntisymmetricAndBilinear) {
    Sampler s(5);
    for (int n = 0; n < 100; ++n) {
        const UnimodularParams p(s.uniform(0.0, 3.0), s.uniform(-3.0, 3.0));
        const Vec3 a = s.vec3(-2, 2), b = s.vec3(-2, 2), c = s.vec3(-2, 2), h = s.vec3(-2, 2);
        EXPECT_NEAR(lie_poisson_bracket(a, a, h, p), 0.0, 1e-14);
        EXPECT_NEAR(lie_poisson_bracket(a, b, h, p), -lie_poisson_bracket(b, a, h, p), 1e-13);
        EXPECT_NEAR(lie_poisson_bracket(a + 2.0 * c, b, h, p),
                    lie_poisson_bracket(a, b, h, p) + 2.0 * lie_poisson_bracket(c, b, h, p),
                    1e-12);
    }
}

TEST(LiePoissonBracket, CasimirCommutesWithCoordinates) {
    Sampler s(6);
    for (int n = 0; n < 100; ++n) {
        const UnimodularParams p(s.uniform(0.0, 3.0), s.uniform(-3.0, 3.0));
        const VerticalState h = s.vertical(2.0);
        const auto cl = [&p](const Vec3& v) { return casimir_left(VerticalState::from_vec(v), p); };
        const Vec3 fd = gradient_fd(cl, h.vec(), 1e-3);
        for (int i = 0; i < 3; ++i)
            EXPECT_LT(std::abs(lie_poisson_bracket(fd, Vec3::Unit(i), h.vec(), p)), 1e-10);
    }
}

TEST(GradientFd, AnalyticGradients) {
    const auto H = [](const Vec3& v) { return hamiltonian(VerticalState::from_vec(v)); };
    const Vec3 gh = gradient_fd(H, Vec3(0.0, 3.0, 4.0));
    EXPECT_NEAR(gh[0], 0.0, 1e-8);
    EXPECT_NEAR(gh[1], 3.0, 1e-8);
    EXPECT_NEAR(gh[2], 4.0, 1e-8);

    const UnimodularParams p1(1.0, 0.0);
    const auto E = [&p1](const Vec3& v) { return energy(VerticalState::from_vec(v), p1); };
    EXPECT_LT((gradient_fd(E, Vec3(1.0, 1.0, 0.0)) - Vec3(4.0, -4.0, 0.0)).norm(), 1e-8);

    const UnimodularParams p2(1.0, 2.0);
    const auto C = [&p2](const Vec3& v) { return casimir_left(VerticalState::from_vec(v), p2); };
    EXPECT_LT((gradient_fd(C, Vec3(1.0, 1.0, 1.0)) - Vec3(4.0, 4.0, 12.0)).norm(), 1e-8);
}

TEST(GradientFd, SecondOrderInStep) {
    const auto f = [](const Vec3& v) { return std::sin(v[0]) * std::exp(v[1]) + v[2] * v[2] * v[2]; };
    const Vec3 x(0.3, -0.2, 0.7);
    const Vec3 exact(std::cos(0.3) * std::exp(-0.2), std::sin(0.3) * std::exp(-0.2), 3 * 0.49);
    const double e1 = (gradient_fd(f, x, 1e-2) - exact).norm();
    const double e2 = (gradient_fd(f, x, 5e-3) - exact).norm();
    EXPECT_NEAR(e1 / e2, 4.0, 0.1);
}

}  // namespace
}  // namespace unisr
