#include "unisr/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <type_traits>

#include "unisr/sampling.hpp"
#include "unisr/transport.hpp"
#include "unisr/vertical.hpp"

namespace unisr::verification {

namespace {

constexpr std::size_t kRecordedSamples = 3;

enum Stream : std::uint64_t {
    kBrackets = 1,
    kCasimir,
    kFieldConsistency,
    kLinearity,
    kVerticalFlow,
    kPendulum,
    kTransport,
    kLemma,
    kRankCap,
    kRank4,
    kMinor,
    kInvolution,
    kLiouville,
    kSuper,
};

double rel(double value, double reference) {
    return std::abs(value - reference) / (1.0 + std::abs(reference));
}

void record_sample(CheckResult& check, const VerticalState& h) {
    if (check.samples.size() < kRecordedSamples) check.samples.push_back({h.h0, h.h1, h.h2});
}

CheckResult make_check(std::string name, double threshold) {
    CheckResult c;
    c.name = std::move(name);
    c.threshold = threshold;
    return c;
}

void finish_below(CheckResult& c) { c.passed = std::isfinite(c.worst) && c.worst < c.threshold; }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

CheckResult check_structure(const UnimodularParams& params) {
    auto c = make_check("algebra.structure_constants", 1e-14);
    const auto sc = structure_constants(params);
    c.worst = std::max(sc.antisymmetry_residual(), sc.jacobi_residual());
    c.passed = c.worst <= c.threshold;
    c.detail = "max of antisymmetry and Jacobi residuals";
    return c;
}

CheckResult check_hamiltonian_brackets(const UnimodularParams& params, std::uint64_t seed,
                                       const SuiteOptions& opt) {
    auto c = make_check("algebra.hamiltonian_brackets", 1e-12);
    Sampler s(seed, kBrackets);
    for (int n = 0; n < opt.n_samples; ++n) {
        const VerticalState h = s.vertical(opt.state_half_width);
        record_sample(c, h);
        const Vec3 gh = grad_hamiltonian(h);
        const Vec3 hv = h.vec();
        c.worst = std::max({c.worst,
                            rel(lie_poisson_bracket(gh, Vec3::Unit(1), hv, params), h.h2 * h.h0),
                            rel(lie_poisson_bracket(gh, Vec3::Unit(2), hv, params), -h.h1 * h.h0),
                            rel(lie_poisson_bracket(gh, Vec3::Unit(0), hv, params),
                                2.0 * params.chi() * h.h1 * h.h2)});
    }
    finish_below(c);
    c.detail = "{H,h1} = h2 h0, {H,h2} = -h1 h0, {H,h0} = 2 chi h1 h2";
    return c;
}

CheckResult check_casimir_brackets(const UnimodularParams& params, std::uint64_t seed,
                                   const SuiteOptions& opt) {
    // Central differences are exact for quadratics, so a wide step only
    // trades away rounding.
    constexpr double kFdStep = 1e-3;
    auto c = make_check("algebra.casimir_brackets", 1e-10);
    Sampler s(seed, kCasimir);
    const auto cl = [&params](const Vec3& v) {
        return casimir_left(VerticalState::from_vec(v), params);
    };
    for (int n = 0; n < opt.n_samples; ++n) {
        const VerticalState h = s.vertical(opt.state_half_width);
        record_sample(c, h);
        const Vec3 fd = gradient_fd(cl, h.vec(), kFdStep);
        const Vec3 exact = grad_casimir_left(h, params);
        for (int i = 0; i < 3; ++i) {
            c.worst = std::max({c.worst,
                                std::abs(lie_poisson_bracket(fd, Vec3::Unit(i), h.vec(), params)),
                                std::abs(lie_poisson_bracket(exact, Vec3::Unit(i), h.vec(),
                                                             params))});
        }
    }
    finish_below(c);
    c.detail = "|{C_l, h_i}| with finite-difference and analytic gradients";
    return c;
}

CheckResult check_field_consistency(const UnimodularParams& params, std::uint64_t seed,
                                    const SuiteOptions& opt) {
    auto c = make_check("vertical.bracket_field_consistency", 1e-12);
    Sampler s(seed, kFieldConsistency);
    for (int n = 0; n < opt.n_samples; ++n) {
        const VerticalState h = s.vertical(opt.state_half_width);
        record_sample(c, h);
        const Vec3 f = vertical_field(h, params);
        for (int i = 0; i < 3; ++i) {
            const double b =
                lie_poisson_bracket(grad_hamiltonian(h), Vec3::Unit(i), h.vec(), params);
            c.worst = std::max(c.worst, rel(f[i], b));
        }
    }
    finish_below(c);
    c.detail = "dh_i/dt against {H, h_i}";
    return c;
}

CheckResult check_casimir_linearity(const UnimodularParams& params, std::uint64_t seed,
                                    const SuiteOptions& opt) {
    auto c = make_check("vertical.casimir_linearity", 1e-13);
    Sampler s(seed, kLinearity);
    for (int n = 0; n < opt.n_samples; ++n) {
        const VerticalState h = s.vertical(opt.state_half_width);
        record_sample(c, h);
        c.worst = std::max(c.worst, rel(4.0 * params.kappa() * hamiltonian(h) + energy(h, params),
                                         casimir_left(h, params)));
    }
    finish_below(c);
    c.detail = "C_l = 4 kappa H + E";
    return c;
}

odeflow::Field vertical_flow(const UnimodularParams& params) {
    return [params](const odeflow::State& y) -> odeflow::State {
        return vertical_field(VerticalState::from_vec(y.head<3>()), params);
    };
}

odeflow::Field pendulum_flow(const UnimodularParams& params) {
    return [params](const odeflow::State& y) -> odeflow::State {
        return pendulum_field(PendulumState{y[0], y[1], y[2]}, params);
    };
}

CheckResult check_vertical_flow(const UnimodularParams& params, std::uint64_t seed,
                                const SuiteOptions& opt) {
    auto c = make_check("vertical.flow_invariance", 1e-8);
    Sampler s(seed, kVerticalFlow);
    const auto field = vertical_flow(params);
    for (int n = 0; n < opt.n_samples; ++n) {
        const VerticalState h = s.vertical(opt.state_half_width);
        record_sample(c, h);
        const auto traj = odeflow::integrate(field, h.vec(), opt.t_final, opt.vertical);
        const double h_start = hamiltonian(h);
        const double e_start = energy(h, params);
        for (const auto& y : traj.states) {
            const auto v = VerticalState::from_vec(y);
            c.worst = std::max({c.worst, rel(hamiltonian(v), h_start),
                                rel(energy(v, params), e_start)});
        }
    }
    finish_below(c);
    c.detail = "relative drift of H and E along the vertical flow";
    return c;
}

std::vector<CheckResult> check_pendulum(const UnimodularParams& params, std::uint64_t seed,
                                        const SuiteOptions& opt) {
    auto conj = make_check("vertical.chart_conjugacy", 1e-7);
    auto radius = make_check("vertical.radius_drift", 1e-10);
    auto pen_e = make_check("vertical.pendulum_energy_drift", 1e-8);

    Sampler s(seed, kPendulum);
    const auto vfield = vertical_flow(params);
    const auto pfield = pendulum_flow(params);
    int accepted = 0;
    while (accepted < opt.n_samples) {
        const VerticalState h = s.vertical(opt.state_half_width);
        const auto chart = to_pendulum(h);
        if (chart.state.r <= 0.1) continue;
        ++accepted;
        record_sample(conj, h);

        const auto vt = odeflow::integrate(vfield, h.vec(), opt.t_final, opt.witness.integrator);
        const odeflow::State p0{{chart.state.r, chart.state.gamma, chart.state.c}};
        const auto pt = odeflow::integrate(pfield, p0, opt.t_final, opt.witness.integrator);
        const double e_start = pendulum_energy(chart.state, params);
        for (std::size_t i = 0; i < pt.size(); ++i) {
            const PendulumState p{pt.states[i][0], pt.states[i][1], pt.states[i][2]};
            const Vec3 mapped = from_pendulum(p).vec();
            conj.worst = std::max(conj.worst, (mapped - vt.states[i]).cwiseAbs().maxCoeff());
            radius.worst = std::max(radius.worst, std::abs(p.r - chart.state.r) / chart.state.r);
            pen_e.worst = std::max(pen_e.worst, rel(pendulum_energy(p, params), e_start));
        }
    }
    radius.samples = pen_e.samples = conj.samples;
    conj.detail = "max |from_pendulum(pendulum flow) - vertical flow|, r(0) > 0.1";
    radius.detail = "relative drift of r along the pendulum flow";
    pen_e.detail = "relative drift of c^2/2 - 2 chi r^2 cos(gamma)";
    for (auto* c : {&conj, &radius, &pen_e}) finish_below(*c);
    return {conj, radius, pen_e};
}

CheckResult check_rk4_order(const UnimodularParams& params) {
    auto c = make_check("odeflow.rk4_order", 0.3);
    const VerticalState h{0.7, 0.6, -0.4};
    record_sample(c, h);
    const double order = odeflow::convergence_order(vertical_flow(params), h.vec(), 2.0, 16);
    c.worst = std::abs(order - 4.0);
    finish_below(c);
    c.detail = "empirical order " + fmt(order) + " on the vertical system (target 4 +/- 0.3)";
    return c;
}

std::vector<CheckResult> check_transport(const UnimodularParams& params, std::uint64_t seed,
                                         const SuiteOptions& opt) {
    auto gH = make_check("transport.g_conservation_H_flow", 1e-8);
    auto gE = make_check("transport.g_conservation_E_flow", 1e-8);
    auto gC = make_check("transport.g_conservation_Cl_flow", 1e-8);
    auto det = make_check("transport.det_m", 1e-9);
    auto cas = make_check("transport.casimir_identity", 1e-9);

    Sampler s(seed, kTransport);
    double shortest_window = opt.witness.t_max;
    for (int n = 0; n < opt.n_samples; ++n) {
        const VerticalState h = s.vertical(opt.state_half_width);
        for (const auto gen :
             {FlowGenerator::hamiltonian, FlowGenerator::energy, FlowGenerator::casimir}) {
            const auto w = integrate_transport_windowed(params, h, opt.witness.t_max,
                                                        opt.witness.integrator, gen,
                                                        opt.witness.condition_cap);
            shortest_window = std::min(shortest_window, w.window_end);
            CheckResult& g = gen == FlowGenerator::hamiltonian ? gH
                             : gen == FlowGenerator::energy    ? gE
                                                               : gC;
            record_sample(g, h);
            const auto& r0 = w.run.records.front();
            for (std::size_t i = 0; i < w.run.records.size(); ++i) {
                const auto& r = w.run.records[i];
                g.worst = std::max({g.worst, rel(r.g0, r0.g0), rel(r.g1, r0.g1), rel(r.g2, r0.g2)});
                if (gen == FlowGenerator::hamiltonian) {
                    g.worst = std::max({g.worst, rel(r.H, r0.H), rel(r.E, r0.E)});
                    cas.worst = std::max(cas.worst, r.casimir_residual / (1.0 + std::abs(r0.Cl)));
                }
                det.worst = std::max(det.worst, std::abs(w.run.states[i].m.determinant() - 1.0));
            }
        }
    }
    cas.samples = det.samples = gH.samples;
    const std::string window = "; transport window ||m||_inf <= " +
                               fmt(opt.witness.condition_cap) + ", t <= " +
                               fmt(opt.witness.t_max) + ", shortest " + fmt(shortest_window);
    gH.detail = "relative drift of H, E, g0, g1, g2 along the H-flow" + window;
    gE.detail = "relative drift of g0, g1, g2 along the E-flow" + window;
    gC.detail = "relative drift of g0, g1, g2 along the C_l-flow" + window;
    det.detail = "|det m - 1| along all flows" + window;
    cas.detail = "|C_l - C_r| / (1 + |C_l(0)|) along the H-flow" + window;
    for (auto* c : {&gH, &gE, &gC, &det, &cas}) finish_below(*c);
    return {gH, gE, gC, det, cas};
}

std::vector<CheckResult> check_lemma(const UnimodularParams& params, std::uint64_t seed,
                                     const SuiteOptions& opt) {
    auto fd = make_check("transport.lemma_fd", 1e-7);
    auto order = make_check("transport.lemma_fd_order", 0.1);
    constexpr double kStep = 1e-4;
    constexpr double kOrderStep = 1e-2;
    constexpr double kExactFloor = 1e-11;

    Sampler s(seed, kLemma);
    int order_samples = 0;
    for (int n = 0; n < opt.n_samples; ++n) {
        const VerticalState h = s.vertical(1.0);
        record_sample(fd, h);
        fd.worst = std::max(fd.worst, verify_lemma_fd(params, h, kStep).maxCoeff());

        const double coarse = verify_lemma_fd(params, h, kOrderStep).maxCoeff();
        if (coarse < kExactFloor) continue;  // exact up to rounding (nilpotent directions)
        const double fine = verify_lemma_fd(params, h, 0.5 * kOrderStep).maxCoeff();
        order.worst = std::max(order.worst, std::abs(std::log2(coarse / fine) - 2.0));
        ++order_samples;
    }
    order.samples = fd.samples;
    fd.detail = "max |central difference of a_i^k(exp(t f_j)) - sum_k c_ji^k h_k| at t = 1e-4";
    order.detail = "|log2(res(1e-2) / res(5e-3)) - 2| over " + std::to_string(order_samples) +
                   " samples with non-negligible truncation error";
    finish_below(fd);
    finish_below(order);
    return {fd, order};
}

std::vector<CheckResult> check_jacobian(const UnimodularParams& params, std::uint64_t seed,
                                        const SuiteOptions& opt) {
    auto cap = make_check("independence.rank_cap", 1e-9);
    auto rank4 = make_check("independence.rank4_generic", 1.0);
    auto minor = make_check("independence.minor_det", 1e-12);
    auto inv = make_check("independence.involution_expansion", 1e-12);

    Sampler sc(seed, kRankCap);
    for (int n = 0; n < 5 * opt.n_samples; ++n) {
        const VerticalState h = sc.vertical(opt.state_half_width);
        record_sample(cap, h);
        const Eigen::VectorXd sv = singular_values(jacobian_at_identity(h, params));
        cap.worst = std::max(cap.worst, sv[4] / sv[0]);
    }

    Sampler sr(seed, kRank4);
    int mismatches = 0;
    int checked = 0;
    for (int n = 0; n < 5 * opt.n_samples; ++n) {
        const VerticalState h = sr.vertical(opt.state_half_width);
        if (std::abs(h.h0 * h.h1) <= 0.01) continue;
        record_sample(rank4, h);
        ++checked;
        if (numerical_rank(jacobian_at_identity(h, params)) != 4) ++mismatches;
    }
    rank4.worst = mismatches;
    rank4.detail = "states with rank J != 4 among " + std::to_string(checked) +
                   " with |h0 h1| > 0.01";

    Sampler sm(seed, kMinor);
    for (int n = 0; n < opt.n_samples; ++n) {
        const VerticalState h = sm.vertical(opt.state_half_width);
        record_sample(minor, h);
        minor.worst = std::max({minor.worst,
                                std::abs(jacobian_minor(h, params, 0) +
                                         2.0 * params.chi() * h.h1 * h.h2),
                                std::abs(jacobian_minor(h, params, 1) + h.h0 * h.h2),
                                std::abs(jacobian_minor(h, params, 2) - h.h0 * h.h1)});
    }

    Sampler si(seed, kInvolution);
    for (int n = 0; n < opt.n_samples; ++n) {
        const VerticalState h = si.vertical(opt.state_half_width);
        const Vec3 alpha = si.vec3(-1.0, 1.0);
        record_sample(inv, h);
        inv.worst = std::max(inv.worst, std::abs(involution_determinant(h, params, alpha) -
                                                 involution_determinant_expansion(h, params, alpha)));
    }

    cap.detail = "sigma_5 / sigma_1 of J (rank capped at 4 by the Casimir identity)";
    minor.detail =
        "4x4 minors of J over (h0,h1,h2,x_j) against -2 chi h1 h2, -h0 h2, h0 h1 for j = 0, 1, 2";
    inv.detail = "generic 3x3 determinant against 2 chi a0 h1 h2 + a1 h0 h2 - a2 h0 h1";
    for (auto* c : {&cap, &rank4, &minor, &inv}) finish_below(*c);
    return {cap, rank4, minor, inv};
}

CheckResult check_liouville(const UnimodularParams& params, std::uint64_t seed,
                            const SuiteOptions& opt) {
    auto c = make_check("independence.liouville_triples", 1.0);
    std::vector<Vec3> alphas = {Vec3(0.0, 1.0, 1.0), Vec3(0.0, 1.0, 0.0), Vec3(1.0, 0.0, 0.0)};
    Sampler s(seed, kLiouville);
    alphas.push_back(s.vec3(-1.0, 1.0));

    std::ostringstream detail;
    int wrong = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        const Vec3& a = alphas[i];
        const auto r = liouville_triple_check(params, a, opt.n_samples, seed + 17 * i,
                                              opt.witness);
        // Inadmissible alpha must be reported as dependent; admissible ones
        // must pass outright.
        const bool ok = r.admissible ? r.passed : (r.involution_ok && !r.independence_found);
        if (!ok) ++wrong;
        detail << "alpha=(" << fmt(a[0]) << "," << fmt(a[1]) << "," << fmt(a[2]) << ") "
               << (r.admissible ? "admissible" : "inadmissible") << " "
               << (r.passed ? "pass" : "fail") << " |det|max=" << fmt(r.best_abs_det)
               << " {H,E}max=" << fmt(r.max_bracket_HE) << " gdrift(H,E)=("
               << fmt(r.max_g_drift_H_flow) << "," << fmt(r.max_g_drift_E_flow) << "); ";
    }
    c.worst = wrong;
    c.detail = detail.str();
    finish_below(c);
    return c;
}

CheckResult check_superintegrability(const UnimodularParams& params, std::uint64_t seed,
                                     const SuiteOptions& opt) {
    auto c = make_check("independence.superintegrability", 1.0);
    const auto r = superintegrability_check(params, opt.n_samples, seed + kSuper);
    c.worst = r.passed ? 0.0 : 1.0;
    c.detail = "rank J(H,g0,g1,g2) in [" + std::to_string(r.min_rank_J) + "," +
               std::to_string(r.max_rank_J) + "] over " + std::to_string(r.states_checked) +
               " states; rank P in [" + std::to_string(r.min_rank_P) + "," +
               std::to_string(r.max_rank_P) + "]; closure residual " + fmt(r.closure_residual);
    finish_below(c);
    return c;
}

template <typename Fn>
void run_guarded(std::vector<CheckResult>& out, const std::string& name, Fn&& fn) {
    try {
        auto produced = fn();
        if constexpr (std::is_same_v<decltype(produced), CheckResult>) {
            out.push_back(std::move(produced));
        } else {
            for (auto& c : produced) out.push_back(std::move(c));
        }
    } catch (const std::exception& e) {
        CheckResult c;
        c.name = name;
        c.passed = false;
        c.worst = std::numeric_limits<double>::infinity();
        c.detail = std::string("error: ") + e.what();
        out.push_back(std::move(c));
    }
}

}  // namespace

bool SuiteReport::passed() const {
    return !checks.empty() &&
           std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

SuiteReport run_suite(const UnimodularParams& params, std::uint64_t seed,
                      const SuiteOptions& options) {
    if (options.n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");

    SuiteReport report;
    report.chi = params.chi();
    report.kappa = params.kappa();
    report.algebra = classify(params);
    report.signature = killing_signature(params);
    report.seed = seed;
    report.n_samples = options.n_samples;

    auto& out = report.checks;
    run_guarded(out, "algebra.structure_constants", [&] { return check_structure(params); });
    run_guarded(out, "algebra.hamiltonian_brackets",
                [&] { return check_hamiltonian_brackets(params, seed, options); });
    run_guarded(out, "algebra.casimir_brackets",
                [&] { return check_casimir_brackets(params, seed, options); });
    run_guarded(out, "vertical.bracket_field_consistency",
                [&] { return check_field_consistency(params, seed, options); });
    run_guarded(out, "vertical.casimir_linearity",
                [&] { return check_casimir_linearity(params, seed, options); });
    run_guarded(out, "vertical.flow_invariance",
                [&] { return check_vertical_flow(params, seed, options); });
    run_guarded(out, "vertical.pendulum", [&] { return check_pendulum(params, seed, options); });
    run_guarded(out, "odeflow.rk4_order", [&] { return check_rk4_order(params); });
    run_guarded(out, "transport", [&] { return check_transport(params, seed, options); });
    run_guarded(out, "transport.lemma", [&] { return check_lemma(params, seed, options); });
    run_guarded(out, "independence.jacobian",
                [&] { return check_jacobian(params, seed, options); });
    run_guarded(out, "independence.liouville_triples",
                [&] { return check_liouville(params, seed, options); });
    run_guarded(out, "independence.superintegrability",
                [&] { return check_superintegrability(params, seed, options); });
    return report;
}

ScanCell scan_cell(const UnimodularParams& params, std::uint64_t seed, int n_trajectories,
                   const WitnessConfig& witness) {
    ScanCell cell;
    cell.chi = params.chi();
    cell.kappa = params.kappa();
    cell.algebra = classify(params);

    try {
        Sampler s(seed, kTransport);
        for (int n = 0; n < n_trajectories; ++n) {
            const VerticalState h = s.vertical(witness.state_half_width);
            const auto w = integrate_transport_windowed(params, h, witness.t_max,
                                                        witness.integrator,
                                                        FlowGenerator::hamiltonian,
                                                        witness.condition_cap);
            const auto& r0 = w.run.records.front();
            for (const auto& r : w.run.records) {
                cell.max_drift = std::max({cell.max_drift, rel(r.H, r0.H), rel(r.E, r0.E),
                                           rel(r.g0, r0.g0), rel(r.g1, r0.g1), rel(r.g2, r0.g2)});
                cell.casimir_residual = std::max(cell.casimir_residual,
                                                 r.casimir_residual / (1.0 + std::abs(r0.Cl)));
            }
        }
    } catch (const std::exception& e) {
        cell.error = e.what();
    }

    Sampler gen(seed, kRank4);
    VerticalState h = gen.vertical(2.0);
    while (std::abs(h.h0 * h.h1) <= 0.01) h = gen.vertical(2.0);
    cell.rank_J_generic = numerical_rank(jacobian_at_identity(h, params));
    cell.rank_P_generic = numerical_rank(poisson_matrix_P(gen.vec3(-2.0, 2.0), params));
    return cell;
}

}  // namespace unisr::verification
