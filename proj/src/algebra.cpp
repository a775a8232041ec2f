#include "unisr/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace unisr {

UnimodularParams::UnimodularParams(double chi, double kappa) : chi_(chi), kappa_(kappa) {
    if (!std::isfinite(chi) || !std::isfinite(kappa)) {
        throw std::invalid_argument("chi and kappa must be finite");
    }
    if (chi < 0.0) {
        throw std::invalid_argument("chi must be >= 0");
    }
}

double StructureConstants::antisymmetry_residual() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                worst = std::max(worst, std::abs(c_[i][j][k] + c_[j][i][k]));
    return worst;
}

double StructureConstants::jacobi_residual() const {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 3; ++l) {
                    double sum = 0.0;
                    for (int m = 0; m < 3; ++m) {
                        sum += c_[i][j][m] * c_[m][k][l] + c_[j][k][m] * c_[m][i][l] +
                               c_[k][i][m] * c_[m][j][l];
                    }
                    worst = std::max(worst, std::abs(sum));
                }
    return worst;
}

std::string_view to_string(AlgebraClass cls) {
    switch (cls) {
        case AlgebraClass::h3: return "h3";
        case AlgebraClass::so3: return "so3";
        case AlgebraClass::sl2: return "sl2";
        case AlgebraClass::se2: return "se2";
        case AlgebraClass::sh2: return "sh2";
    }
    return "unknown";
}

std::string_view group_description(AlgebraClass cls) {
    switch (cls) {
        case AlgebraClass::h3: return "Heisenberg";
        case AlgebraClass::so3: return "SO(3)";
        case AlgebraClass::sl2: return "SL(2)";
        case AlgebraClass::se2: return "SE(2), Euclidean motions of the plane";
        case AlgebraClass::sh2: return "SH(2), hyperbolic motions of the plane";
    }
    return "unknown";
}

StructureConstants structure_constants(const UnimodularParams& params) {
    StructureConstants::Tensor c{};
    const double plus = params.chi() + params.kappa();
    const double minus = params.chi() - params.kappa();

    c[2][1][0] = 1.0;
    c[1][2][0] = -1.0;
    c[1][0][2] = plus;
    c[0][1][2] = -plus;
    c[2][0][1] = minus;
    c[0][2][1] = -minus;
    return StructureConstants(c);
}

Mat3 ad_matrix(const UnimodularParams& params, const Vec3& v) {
    const auto c = structure_constants(params);
    Mat3 ad = Mat3::Zero();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) ad(k, j) += v[i] * c(i, j, k);
    return ad;
}

Mat3 killing_form(const UnimodularParams& params) {
    std::array<Mat3, 3> ads;
    for (int i = 0; i < 3; ++i) ads[i] = ad_matrix(params, Vec3::Unit(i));

    Mat3 k;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) k(i, j) = (ads[i] * ads[j]).trace();
    return k;
}

KillingSignature killing_signature(const UnimodularParams& params) {
    const Eigen::SelfAdjointEigenSolver<Mat3> solver(killing_form(params),
                                                     Eigen::EigenvaluesOnly);
    const Vec3 eig = solver.eigenvalues();
    const double tol = 1e-10 * (1.0 + eig.cwiseAbs().maxCoeff());

    KillingSignature sig;
    for (double e : eig) {
        if (std::abs(e) <= tol)
            ++sig.zero;
        else if (e < 0.0)
            ++sig.negative;
        else
            ++sig.positive;
    }
    return sig;
}

AlgebraClass classify(const UnimodularParams& params) {
    const auto sig = killing_signature(params);
    if (sig.zero == 3) return AlgebraClass::h3;
    // Degenerate but nonzero: the remaining direction is elliptic (se2) or
    // hyperbolic (sh2).
    if (sig.zero > 0) return sig.negative > 0 ? AlgebraClass::se2 : AlgebraClass::sh2;
    if (sig.negative == 3) return AlgebraClass::so3;
    return AlgebraClass::sl2;
}

double lie_poisson_bracket(const Vec3& grad_f, const Vec3& grad_g, const Vec3& h,
                           const UnimodularParams& params) {
    const auto c = structure_constants(params);
    double sum = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double ch = 0.0;
            for (int k = 0; k < 3; ++k) ch += c(i, j, k) * h[k];
            sum += ch * grad_f[i] * grad_g[j];
        }
    return sum;
}

Vec3 gradient_fd(const std::function<double(const Vec3&)>& f, const Vec3& h, double rel_step) {
    Vec3 grad;
    for (int i = 0; i < 3; ++i) {
        const double step = rel_step * (1.0 + std::abs(h[i]));
        Vec3 hp = h;
        Vec3 hm = h;
        hp[i] += step;
        hm[i] -= step;
        grad[i] = (f(hp) - f(hm)) / (hp[i] - hm[i]);
    }
    return grad;
}

}  // namespace unisr
