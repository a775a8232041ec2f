#pragma once

#include <array>
#include <functional>
#include <string_view>

#include <Eigen/Dense>

namespace unisr {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// The invariant pair (chi, kappa) selecting one left-invariant contact
/// sub-Riemannian structure on a 3D unimodular Lie group. The frame
/// (f0, f1, f2) satisfies
///
///   [f2, f1] = f0,  [f1, f0] = (chi + kappa) f2,  [f2, f0] = (chi - kappa) f1.
///
/// Throws std::invalid_argument on negative chi or non-finite input.
class UnimodularParams {
public:
    UnimodularParams(double chi, double kappa);

    double chi() const { return chi_; }
    double kappa() const { return kappa_; }

    bool operator==(const UnimodularParams&) const = default;

private:
    double chi_;
    double kappa_;
};

/// c(i, j, k) is the coefficient of f_k in [f_i, f_j].
class StructureConstants {
public:
    using Tensor = std::array<std::array<std::array<double, 3>, 3>, 3>;

    explicit StructureConstants(const Tensor& c) : c_(c) {}

    double operator()(int i, int j, int k) const { return c_[i][j][k]; }
    const Tensor& tensor() const { return c_; }

    /// max |c_ij^k + c_ji^k|
    double antisymmetry_residual() const;
    /// max over (i, j, k, l) of the cyclic Jacobi sum.
    double jacobi_residual() const;

private:
    Tensor c_;
};

enum class AlgebraClass { h3, so3, sl2, se2, sh2 };

std::string_view to_string(AlgebraClass cls);
/// Human-readable name of the connected group, e.g. "Heisenberg".
std::string_view group_description(AlgebraClass cls);

struct KillingSignature {
    int negative = 0;
    int zero = 0;
    int positive = 0;
};

StructureConstants structure_constants(const UnimodularParams& params);

/// Matrix of ad_v in the basis (f0, f1, f2): column j holds [v, f_j].
Mat3 ad_matrix(const UnimodularParams& params, const Vec3& v);

/// K(x, y) = trace(ad_x ad_y), assembled from ad_matrix.
Mat3 killing_form(const UnimodularParams& params);

/// Eigenvalue signs of the Killing form. An eigenvalue counts as zero when
/// |eig| <= 1e-10 * (1 + max |eig|).
KillingSignature killing_signature(const UnimodularParams& params);

AlgebraClass classify(const UnimodularParams& params);

/// Lie-Poisson bracket on the dual of the algebra,
///   {F, G}(h) = sum_ijk c_ij^k h_k dF/dh_i dG/dh_j,
/// so that {H, h1} = h2 h0 for H = (h1^2 + h2^2) / 2.
double lie_poisson_bracket(const Vec3& grad_f, const Vec3& grad_g, const Vec3& h,
                           const UnimodularParams& params);

/// Central finite-difference gradient with per-component step
/// rel_step * (1 + |h_i|).
Vec3 gradient_fd(const std::function<double(const Vec3&)>& f, const Vec3& h,
                 double rel_step = 1e-6);

}  // namespace unisr
