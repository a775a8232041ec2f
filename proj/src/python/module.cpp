#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "unisr/independence.hpp"
#include "unisr/transport.hpp"
#include "unisr/verification.hpp"

namespace py = pybind11;
using namespace unisr;

namespace {

FlowGenerator parse_generator(const std::string& name) {
    if (name == "H") return FlowGenerator::hamiltonian;
    if (name == "E") return FlowGenerator::energy;
    if (name == "Cl") return FlowGenerator::casimir;
    throw std::invalid_argument("generator must be H, E or Cl");
}

py::dict simulate(const Vec3& h, double chi, double kappa, double t_final,
                  const std::string& generator, double rtol, double atol, double sample_every) {
    odeflow::IntegratorConfig config;
    config.rel_tol = rtol;
    config.abs_tol = atol;
    config.sample_every = sample_every;
    const auto run = integrate_transport({chi, kappa}, VerticalState::from_vec(h), t_final,
                                         config, parse_generator(generator));
    const auto n = static_cast<Eigen::Index>(run.records.size());
    Eigen::VectorXd t(n), H(n), E(n), Cl(n), residual(n);
    Eigen::MatrixXd hs(n, 3), gs(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = run.records[i];
        t[i] = r.t;
        H[i] = r.H;
        E[i] = r.E;
        Cl[i] = r.Cl;
        residual[i] = r.casimir_residual;
        hs.row(i) = run.states[i].h.vec();
        gs.row(i) << r.g0, r.g1, r.g2;
    }
    py::dict out;
    out["t"] = t;
    out["h"] = hs;
    out["g"] = gs;
    out["H"] = H;
    out["E"] = E;
    out["Cl"] = Cl;
    out["casimir_residual"] = residual;
    return out;
}

py::dict verify(double chi, double kappa, std::uint64_t seed, int n_samples) {
    verification::SuiteOptions options;
    options.n_samples = n_samples;
    const auto report = verification::run_suite({chi, kappa}, seed, options);
    py::list checks;
    for (const auto& c : report.checks) {
        py::dict d;
        d["name"] = c.name;
        d["passed"] = c.passed;
        d["worst"] = c.worst;
        d["threshold"] = c.threshold;
        d["detail"] = c.detail;
        checks.append(d);
    }
    py::dict out;
    out["class"] = std::string(to_string(report.algebra));
    out["passed"] = report.passed();
    out["checks"] = checks;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Geodesic flows of left-invariant sub-Riemannian structures on 3D unimodular groups";

    py::register_exception<odeflow::IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);

    m.def("classify", [](double chi, double kappa) {
        return std::string(to_string(classify({chi, kappa})));
    });
    m.def("killing_form", [](double chi, double kappa) { return killing_form({chi, kappa}); });
    m.def("ad_matrix",
          [](double chi, double kappa, const Vec3& v) { return ad_matrix({chi, kappa}, v); });
    m.def("integrals", [](const Vec3& h, double chi, double kappa) {
        const auto s = VerticalState::from_vec(h);
        const UnimodularParams p(chi, kappa);
        py::dict d;
        d["H"] = hamiltonian(s);
        d["E"] = energy(s, p);
        d["Cl"] = casimir_left(s, p);
        return d;
    });
    m.def("vertical_field", [](const Vec3& h, double chi, double kappa) {
        return vertical_field(VerticalState::from_vec(h), {chi, kappa});
    });
    m.def("to_pendulum", [](const Vec3& h) {
        const auto c = to_pendulum(VerticalState::from_vec(h));
        return py::make_tuple(c.state.r, c.state.gamma, c.state.c);
    });
    m.def("simulate", &simulate, py::arg("h"), py::arg("chi"), py::arg("kappa"),
          py::arg("t_final") = 10.0, py::arg("generator") = "H", py::arg("rtol") = 1e-10,
          py::arg("atol") = 1e-12, py::arg("sample_every") = 0.1);
    m.def("jacobian", [](const Vec3& h, double chi, double kappa) {
        return Eigen::MatrixXd(jacobian_at_identity(VerticalState::from_vec(h), {chi, kappa}));
    });
    m.def("numerical_rank",
          [](const Eigen::MatrixXd& a, double tol_factor) { return numerical_rank(a, tol_factor); },
          py::arg("a"), py::arg("tol_factor") = 1e-10);
    m.def("verify", &verify, py::arg("chi"), py::arg("kappa"), py::arg("seed") = 0,
          py::arg("n_samples") = 100);
}
