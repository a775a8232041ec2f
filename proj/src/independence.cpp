#include "unisr/independence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unisr/sampling.hpp"
#include "unisr/transport.hpp"

namespace unisr {

JacobianJ jacobian_at_identity(const VerticalState& h, const UnimodularParams& params) {
    const double chi = params.chi();
    JacobianJ j = JacobianJ::Zero();
    j.row(0) << 0.0, h.h1, h.h2, 0.0, 0.0, 0.0;
    j.row(1) << h.h0, -chi * h.h1, chi * h.h2, 0.0, 0.0, 0.0;
    j.block<3, 3>(2, 0) = -Mat3::Identity();
    j.block<3, 3>(2, 3) = frame_coefficient_derivatives(params, h);
    return j;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
    return Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
}

int numerical_rank(const Eigen::MatrixXd& a, double tol_factor) {
    if (a.size() == 0) return 0;
    const Eigen::VectorXd sv = singular_values(a);
    const double sigma_max = sv.maxCoeff();
    if (sigma_max == 0.0) return 0;
    const double cut =
        tol_factor * sigma_max * static_cast<double>(std::max(a.rows(), a.cols()));
    return static_cast<int>((sv.array() > cut).count());
}

double jacobian_minor(const VerticalState& h, const UnimodularParams& params, int x_column) {
    if (x_column < 0 || x_column > 2) throw std::invalid_argument("x_column must be 0, 1 or 2");
    const JacobianJ j = jacobian_at_identity(h, params);
    constexpr int rows[] = {0, 2, 3, 4};
    const int cols[] = {0, 1, 2, 3 + x_column};
    Eigen::Matrix4d sub;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) sub(r, c) = j(rows[r], cols[c]);
    return sub.determinant();
}

double minor_det_HgGG(const VerticalState& h, const UnimodularParams& params) {
    return jacobian_minor(h, params, 1);
}

double involution_determinant(const VerticalState& h, const UnimodularParams& params,
                              const Vec3& alpha) {
    const JacobianJ j = jacobian_at_identity(h, params);
    Mat3 m;
    m.row(0) = j.block<1, 3>(0, 0);
    m.row(1) = j.block<1, 3>(1, 0);
    m.row(2) = alpha.transpose();
    return m.determinant();
}

double involution_determinant_expansion(const VerticalState& h, const UnimodularParams& params,
                                        const Vec3& alpha) {
    return 2.0 * params.chi() * alpha[0] * h.h1 * h.h2 + alpha[1] * h.h0 * h.h2 -
           alpha[2] * h.h0 * h.h1;
}

PoissonMatrixP poisson_matrix_P(const Vec3& g, const UnimodularParams& params) {
    const double plus = params.chi() + params.kappa();
    const double minus = params.chi() - params.kappa();
    // Index: 0 = H, 1 = g0, 2 = g1, 3 = g2.
    PoissonMatrixP p = PoissonMatrixP::Zero();
    p(3, 2) = g[0];
    p(2, 3) = -g[0];
    p(2, 1) = plus * g[2];
    p(1, 2) = -plus * g[2];
    p(3, 1) = minus * g[1];
    p(1, 3) = -minus * g[1];
    return p;
}

double poisson_structure_residual(const Vec3& g, const UnimodularParams& params) {
    const PoissonMatrixP p = poisson_matrix_P(g, params);
    const auto c = structure_constants(params);
    double worst = (p + p.transpose()).cwiseAbs().maxCoeff();
    worst = std::max({worst, p.row(0).cwiseAbs().maxCoeff(), p.col(0).cwiseAbs().maxCoeff()});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double expected = 0.0;
            for (int k = 0; k < 3; ++k) expected += c(i, j, k) * g[k];
            worst = std::max(worst, std::abs(p(1 + i, 1 + j) - expected));
        }
    return worst;
}

bool is_admissible_alpha(const UnimodularParams& params, const Vec3& alpha) {
    if (params.chi() != 0.0) return alpha.squaredNorm() != 0.0;
    return alpha[1] * alpha[1] + alpha[2] * alpha[2] != 0.0;
}

namespace {

constexpr double kBracketTol = 1e-10;
constexpr double kDriftTol = 1e-8;
constexpr double kIndependenceTol = 1e-6;
constexpr int kMaxFlows = 8;

double max_projected_drift(const TransportRun& run, const Vec3& alpha) {
    const auto& r0 = run.records.front();
    const double g_start = alpha.dot(Vec3(r0.g0, r0.g1, r0.g2));
    double worst = 0.0;
    for (const auto& r : run.records) {
        const double g = alpha.dot(Vec3(r.g0, r.g1, r.g2));
        worst = std::max(worst, std::abs(g - g_start) / (1.0 + std::abs(g_start)));
    }
    return worst;
}

}  // namespace

LiouvilleReport liouville_triple_check(const UnimodularParams& params, const Vec3& alpha,
                                       int n_samples, std::uint64_t seed,
                                       const WitnessConfig& witness) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    if (alpha.squaredNorm() == 0.0) throw std::invalid_argument("alpha must be nonzero");

    LiouvilleReport report;
    report.admissible = is_admissible_alpha(params, alpha);

    Sampler brackets(seed, 0);
    for (int i = 0; i < n_samples; ++i) {
        const VerticalState h = brackets.vertical(witness.state_half_width);
        const double b = lie_poisson_bracket(grad_hamiltonian(h), grad_energy(h, params), h.vec(),
                                             params);
        report.max_bracket_HE = std::max(report.max_bracket_HE, std::abs(b));
    }

    Sampler flows(seed, 1);
    report.flows = std::min(n_samples, kMaxFlows);
    for (int i = 0; i < report.flows; ++i) {
        const VerticalState h = flows.vertical(witness.state_half_width);
        for (const auto gen : {FlowGenerator::hamiltonian, FlowGenerator::energy}) {
            const auto w = integrate_transport_windowed(params, h, witness.t_max,
                                                        witness.integrator, gen,
                                                        witness.condition_cap);
            double& slot = gen == FlowGenerator::hamiltonian ? report.max_g_drift_H_flow
                                                             : report.max_g_drift_E_flow;
            slot = std::max(slot, max_projected_drift(w.run, alpha));
        }
    }
    report.involution_ok = report.max_bracket_HE < kBracketTol &&
                           report.max_g_drift_H_flow < kDriftTol &&
                           report.max_g_drift_E_flow < kDriftTol;

    Sampler search(seed, 2);
    for (int i = 0; i < n_samples && !report.independence_found; ++i) {
        const VerticalState h = search.vertical(witness.state_half_width);
        ++report.samples_tried;
        const double det = std::abs(involution_determinant(h, params, alpha));
        report.best_abs_det = std::max(report.best_abs_det, det);
        report.independence_found = det > kIndependenceTol;
    }

    report.passed = report.involution_ok && report.independence_found;
    return report;
}

SuperintegrabilityReport superintegrability_check(const UnimodularParams& params, int n_samples,
                                                  std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    constexpr double kHalfWidth = 2.0;
    constexpr double kGuard = 0.01;

    SuperintegrabilityReport report;
    report.min_rank_J = 6;
    report.min_rank_P = 4;

    Sampler states(seed, 0);
    for (int i = 0; i < n_samples; ++i) {
        const VerticalState h = states.vertical(kHalfWidth);
        if (std::abs(h.h0 * h.h1) <= kGuard) continue;
        const JacobianJ j = jacobian_at_identity(h, params);
        Eigen::Matrix<double, 4, 6> sub;
        sub << j.row(0), j.row(2), j.row(3), j.row(4);
        const int rank = numerical_rank(sub);
        report.min_rank_J = std::min(report.min_rank_J, rank);
        report.max_rank_J = std::max(report.max_rank_J, rank);
        ++report.states_checked;
    }
    report.rank_J_ok =
        report.states_checked > 0 && report.min_rank_J == 4 && report.max_rank_J == 4;

    Sampler values(seed, 1);
    for (int i = 0; i < n_samples; ++i) {
        const Vec3 g = values.vec3(-kHalfWidth, kHalfWidth);
        const int rank = numerical_rank(poisson_matrix_P(g, params));
        report.min_rank_P = std::min(report.min_rank_P, rank);
        report.max_rank_P = std::max(report.max_rank_P, rank);
        report.closure_residual =
            std::max(report.closure_residual, poisson_structure_residual(g, params));
    }
    report.rank_P_ok = report.min_rank_P == 2 && report.max_rank_P == 2;
    report.closure_ok = report.closure_residual <= 1e-14;

    report.passed = report.rank_J_ok && report.rank_P_ok && report.closure_ok;
    return report;
}

}  // namespace unisr
