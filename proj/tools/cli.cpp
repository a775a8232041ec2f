#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <utility>

#include <CLI11.hpp>
#include <json.hpp>

#include "svg.hpp"
#include "unisr/algebra.hpp"
#include "unisr/odeflow.hpp"
#include "unisr/transport.hpp"
#include "unisr/verification.hpp"
#include "unisr/vertical.hpp"

namespace unisr::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kSchemaVersion = 1;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Globals {
    double chi = 0.0;
    double kappa = 0.0;
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format;
};

struct SimulateOptions {
    std::optional<double> h0, h1, h2;
    std::optional<double> r, gamma, c;
    double t_final = 10.0;
    std::string method = "adaptive_54";
    std::string generator = "H";
    std::string summary_path;
    odeflow::IntegratorConfig integrator;
};

struct VerifyOptions {
    int n_samples = 100;
    odeflow::IntegratorConfig vertical = verification::SuiteOptions{}.vertical;
};

struct ScanOptions {
    std::pair<double, double> chi_range{0.0, 2.0};
    std::pair<double, double> kappa_range{-2.0, 2.0};
    int grid_n = 5;
    int trajectories = 4;
};

struct PortraitOptions {
    double r = 1.0;
    int gamma_points = 8;
    int c_points = 9;
    double c_max = 3.0;
    double t_final = 10.0;
    double sample_every = 0.05;
    std::vector<std::pair<double, double>> extra_seeds;
    std::string svg_path;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + '"';
}

/// Destination for the primary output of a command.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path.empty()) return;
        file_.open(path, std::ios::binary | std::ios::trunc);
        if (!file_) throw std::runtime_error("cannot open output file '" + path + "'");
        os_ = &file_;
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

std::string resolved_format(const Globals& g, const std::string& fallback) {
    return g.format.empty() ? fallback : g.format;
}

double rel_drift(double value, double start) {
    return std::abs(value - start) / (1.0 + std::abs(start));
}

Json signature_json(const KillingSignature& s) {
    return Json{{"negative", s.negative}, {"zero", s.zero}, {"positive", s.positive}};
}

// classify ---------------------------------------------------------------

int cmd_classify(const Globals& g, std::ostream& fallback) {
    const UnimodularParams params(g.chi, g.kappa);
    const AlgebraClass cls = classify(params);
    const KillingSignature sig = killing_signature(params);
    const double plus = params.chi() + params.kappa();
    const double minus = params.chi() - params.kappa();

    Output out(g.out_path, fallback);
    if (resolved_format(g, "text") == "json") {
        const Mat3 k = killing_form(params);
        Json kf = Json::array();
        for (int i = 0; i < 3; ++i) kf.push_back({k(i, 0), k(i, 1), k(i, 2)});
        const Json doc{
            {"schema_version", kSchemaVersion},
            {"command", "classify"},
            {"chi", params.chi()},
            {"kappa", params.kappa()},
            {"class", std::string(to_string(cls))},
            {"group", std::string(group_description(cls))},
            {"brackets", {{"[f2,f1]", {{"f0", 1.0}}},
                          {"[f1,f0]", {{"f2", plus}}},
                          {"[f2,f0]", {{"f1", minus}}}}},
            {"killing_form", kf},
            {"killing_signature", signature_json(sig)},
        };
        out.stream() << doc.dump(2) << '\n';
    } else {
        out.stream() << to_string(cls) << " (" << group_description(cls) << ")  [f2,f1] = f0, [f1,f0] = "
                     << fmt17(plus) << " f2, [f2,f0] = " << fmt17(minus)
                     << " f1  Killing signature (-,0,+) = (" << sig.negative << ',' << sig.zero
                     << ',' << sig.positive << ")\n";
    }
    return kOk;
}

// simulate ---------------------------------------------------------------

FlowGenerator parse_generator(const std::string& name) {
    if (name == "H") return FlowGenerator::hamiltonian;
    if (name == "E") return FlowGenerator::energy;
    if (name == "Cl") return FlowGenerator::casimir;
    throw std::invalid_argument("unknown generator '" + name + "' (expected H, E or Cl)");
}

std::string_view to_string(odeflow::IntegrationError::Kind kind) {
    switch (kind) {
        case odeflow::IntegrationError::Kind::max_steps_exceeded: return "max_steps_exceeded";
        case odeflow::IntegrationError::Kind::non_finite: return "non_finite";
        case odeflow::IntegrationError::Kind::step_underflow: return "step_underflow";
    }
    return "unknown";
}

VerticalState initial_state(const SimulateOptions& o) {
    const bool vertical = o.h0 || o.h1 || o.h2;
    const bool chart = o.r || o.gamma || o.c;
    if (vertical && chart)
        throw std::invalid_argument("give the initial state as --h0/--h1/--h2 or --r/--gamma/--c, not both");
    if (chart) return from_pendulum({o.r.value_or(0.0), o.gamma.value_or(0.0), o.c.value_or(0.0)});
    return {o.h0.value_or(0.0), o.h1.value_or(0.0), o.h2.value_or(0.0)};
}

int cmd_simulate(const Globals& g, SimulateOptions o, std::ostream& fallback) {
    const UnimodularParams params(g.chi, g.kappa);
    const VerticalState h = initial_state(o);
    const FlowGenerator gen = parse_generator(o.generator);
    if (!(o.t_final > 0.0) || !std::isfinite(o.t_final))
        throw std::invalid_argument("t_final must be > 0");
    o.integrator.method = odeflow::parse_method(o.method);
    o.integrator.validate();
    const std::string format = resolved_format(g, "csv");

    odeflow::Trajectory traj;
    std::optional<odeflow::IntegrationError> failure;
    try {
        traj = odeflow::integrate(transport_flow(params, gen), pack(TransportState{h}), o.t_final,
                                  o.integrator);
    } catch (const odeflow::IntegrationError& e) {
        failure = e;
        traj = e.partial();
    }

    std::vector<IntegralRecord> records;
    std::vector<TransportState> states;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        states.push_back(unpack(traj.states[i]));
        records.push_back(record_integrals(traj.times[i], states.back(), params));
    }

    Json drift{{"H", 0.0}, {"E", 0.0}, {"Cl", 0.0}, {"g0", 0.0}, {"g1", 0.0}, {"g2", 0.0}};
    double casimir = 0.0;
    double condition = 0.0;
    if (!records.empty()) {
        const auto& r0 = records.front();
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            const std::pair<const char*, std::pair<double, double>> pairs[] = {
                {"H", {r.H, r0.H}},    {"E", {r.E, r0.E}},    {"Cl", {r.Cl, r0.Cl}},
                {"g0", {r.g0, r0.g0}}, {"g1", {r.g1, r0.g1}}, {"g2", {r.g2, r0.g2}}};
            for (const auto& [key, v] : pairs)
                drift[key] = std::max(drift[key].get<double>(), rel_drift(v.first, v.second));
            casimir = std::max(casimir, r.casimir_residual);
            condition = std::max(condition, transport_condition(states[i]));
        }
    }

    Json summary{
        {"schema_version", kSchemaVersion},
        {"command", "simulate"},
        {"status", failure ? "integration_failure" : "ok"},
        {"chi", params.chi()},
        {"kappa", params.kappa()},
        {"class", std::string(to_string(classify(params)))},
        {"generator", std::string(to_string(gen))},
        {"initial_state", {{"h0", h.h0}, {"h1", h.h1}, {"h2", h.h2}}},
        {"t_final", o.t_final},
        {"integrator",
         {{"method", std::string(odeflow::to_string(o.integrator.method))},
          {"step", o.integrator.step},
          {"rel_tol", o.integrator.rel_tol},
          {"abs_tol", o.integrator.abs_tol},
          {"max_steps", o.integrator.max_steps},
          {"sample_every", o.integrator.sample_every}}},
        {"samples", records.size()},
        {"final_time", records.empty() ? 0.0 : records.back().t},
        {"max_relative_drift", drift},
        {"max_casimir_residual", casimir},
        {"max_transport_condition", condition},
    };
    if (failure) {
        summary["failure"] = {{"kind", std::string(to_string(failure->kind()))},
                              {"time", failure->time()},
                              {"message", failure->what()}};
    }

    Output out(g.out_path, fallback);
    if (format == "json") {
        Json rows = Json::array();
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            const auto& hv = states[i].h;
            rows.push_back({{"t", r.t},   {"h0", hv.h0}, {"h1", hv.h1}, {"h2", hv.h2},
                            {"H", r.H},   {"E", r.E},    {"Cl", r.Cl},  {"g0", r.g0},
                            {"g1", r.g1}, {"g2", r.g2},  {"Cr", r.Cr},
                            {"casimir_residual", r.casimir_residual}});
        }
        summary["records"] = std::move(rows);
        out.stream() << summary.dump(2) << '\n';
    } else {
        auto& os = out.stream();
        os << "t,h0,h1,h2,H,E,Cl,g0,g1,g2,Cr,casimir_residual\n";
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            const auto& s = states[i].h;
            for (const double v : {r.t, s.h0, s.h1, s.h2, r.H, r.E, r.Cl, r.g0, r.g1, r.g2, r.Cr})
                os << fmt17(v) << ',';
            os << fmt17(r.casimir_residual) << '\n';
        }
        std::string summary_path = o.summary_path;
        if (summary_path.empty() && !g.out_path.empty()) summary_path = g.out_path + ".summary.json";
        if (!summary_path.empty()) {
            std::ofstream sf(summary_path, std::ios::binary | std::ios::trunc);
            if (!sf) throw std::runtime_error("cannot open summary file '" + summary_path + "'");
            sf << summary.dump(2) << '\n';
        }
    }
    return failure ? kRuntimeFailure : kOk;
}

// verify -----------------------------------------------------------------

int cmd_verify(const Globals& g, const VerifyOptions& o, std::ostream& fallback) {
    const UnimodularParams params(g.chi, g.kappa);
    if (o.n_samples < 1) throw std::invalid_argument("samples must be >= 1");
    o.vertical.validate();
    verification::SuiteOptions options;
    options.n_samples = o.n_samples;
    options.vertical = o.vertical;
    const auto report = verification::run_suite(params, g.seed, options);

    Output out(g.out_path, fallback);
    if (resolved_format(g, "json") == "csv") {
        auto& os = out.stream();
        os << "check,passed,worst,threshold,detail\n";
        for (const auto& c : report.checks) {
            os << csv_field(c.name) << ',' << (c.passed ? "true" : "false") << ','
               << fmt17(c.worst) << ',' << fmt17(c.threshold) << ',' << csv_field(c.detail)
               << '\n';
        }
    } else {
        Json checks = Json::array();
        for (const auto& c : report.checks) {
            Json samples = Json::array();
            for (const auto& s : c.samples) samples.push_back({s[0], s[1], s[2]});
            checks.push_back({{"name", c.name},
                              {"passed", c.passed},
                              {"worst", c.worst},
                              {"threshold", c.threshold},
                              {"detail", c.detail},
                              {"samples", samples}});
        }
        const Json doc{
            {"schema_version", kSchemaVersion},
            {"command", "verify"},
            {"chi", report.chi},
            {"kappa", report.kappa},
            {"class", std::string(to_string(report.algebra))},
            {"killing_signature", signature_json(report.signature)},
            {"seed", report.seed},
            {"n_samples", report.n_samples},
            {"sampler", "mt19937_64 seeded by seed_seq{seed_lo, seed_hi, stream_lo, stream_hi}"},
            {"passed", report.passed()},
            {"checks", checks},
        };
        out.stream() << doc.dump(2) << '\n';
    }
    return report.passed() ? kOk : kVerificationFailed;
}

// scan -------------------------------------------------------------------

std::vector<double> grid(std::pair<double, double> range, int n) {
    if (n == 1) return {range.first};
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = i + 1 == n ? range.second
                          : range.first + (range.second - range.first) * i / (n - 1);
    return v;
}

int cmd_scan(const Globals& g, const ScanOptions& o, std::ostream& fallback) {
    if (o.grid_n < 1) throw std::invalid_argument("grid must be >= 1");
    if (o.trajectories < 1) throw std::invalid_argument("trajectories must be >= 1");
    if (std::min(o.chi_range.first, o.chi_range.second) < 0.0)
        throw std::invalid_argument("chi must be >= 0");

    std::vector<verification::ScanCell> cells;
    for (double chi : grid(o.chi_range, o.grid_n))
        for (double kappa : grid(o.kappa_range, o.grid_n))
            cells.push_back(verification::scan_cell(UnimodularParams(chi, kappa), g.seed,
                                                    o.trajectories));

    Output out(g.out_path, fallback);
    if (resolved_format(g, "csv") == "json") {
        Json rows = Json::array();
        for (const auto& c : cells) {
            Json row{{"chi", c.chi},
                     {"kappa", c.kappa},
                     {"class", std::string(to_string(c.algebra))},
                     {"max_drift", c.max_drift},
                     {"casimir_residual", c.casimir_residual},
                     {"rankJ_generic", c.rank_J_generic},
                     {"rankP_generic", c.rank_P_generic}};
            if (!c.error.empty()) row["error"] = c.error;
            rows.push_back(std::move(row));
        }
        const Json doc{{"schema_version", kSchemaVersion},
                       {"command", "scan"},
                       {"seed", g.seed},
                       {"grid_n", o.grid_n},
                       {"trajectories", o.trajectories},
                       {"cells", rows}};
        out.stream() << doc.dump(2) << '\n';
    } else {
        auto& os = out.stream();
        os << "chi,kappa,class,max_drift,casimir_residual,rankJ_generic,rankP_generic\n";
        for (const auto& c : cells) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            os << fmt17(c.chi) << ',' << fmt17(c.kappa) << ',' << to_string(c.algebra) << ','
               << fmt17(c.error.empty() ? c.max_drift : nan) << ','
               << fmt17(c.error.empty() ? c.casimir_residual : nan) << ',' << c.rank_J_generic
               << ',' << c.rank_P_generic << '\n';
        }
    }
    return kOk;
}

// portrait ---------------------------------------------------------------

double wrap_angle(double gamma) {
    double w = std::fmod(gamma, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

struct PortraitTrajectory {
    double gamma0 = 0.0;
    double c0 = 0.0;
    PendulumRegime regime = PendulumRegime::degenerate;
    double energy0 = 0.0;
    double max_energy_drift = 0.0;
    odeflow::Trajectory traj;
};

std::string_view regime_color(PendulumRegime r) {
    switch (r) {
        case PendulumRegime::oscillation: return "#1f77b4";
        case PendulumRegime::rotation: return "#d62728";
        case PendulumRegime::separatrix: return "#2ca02c";
        case PendulumRegime::degenerate: return "#7f7f7f";
    }
    return "black";
}

void write_portrait_svg(const std::string& path, const std::vector<PortraitTrajectory>& trajs,
                        const UnimodularParams& params, double r) {
    SvgPlot plot;
    plot.x_min = 0.0;
    plot.x_max = kTwoPi;
    plot.x_label = "gamma (mod 2 pi)";
    plot.y_label = "c";
    plot.title = "pendulum phase portrait, chi = " + fmt17(params.chi()) + ", r = " + fmt17(r);
    double c_abs = 0.0;
    for (const auto& t : trajs)
        for (const auto& s : t.traj.states) c_abs = std::max(c_abs, std::abs(s[2]));
    c_abs = c_abs > 0.0 ? 1.05 * c_abs : 1.0;
    plot.y_min = -c_abs;
    plot.y_max = c_abs;

    for (const auto& t : trajs) {
        SvgSeries series;
        series.color = std::string(regime_color(t.regime));
        series.label = std::string(to_string(t.regime));
        std::vector<SvgPoint> piece;
        double prev = 0.0;
        for (const auto& s : t.traj.states) {
            const double x = wrap_angle(s[1]);
            if (!piece.empty() && std::abs(x - prev) > std::numbers::pi) {
                series.pieces.push_back(std::move(piece));
                piece.clear();
            }
            piece.push_back({x, s[2]});
            prev = x;
        }
        series.pieces.push_back(std::move(piece));
        plot.series.push_back(std::move(series));
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open SVG file '" + path + "'");
    write_svg(f, plot);
}

int cmd_portrait(const Globals& g, const PortraitOptions& o, std::ostream& fallback) {
    const UnimodularParams params(g.chi, g.kappa);
    if (!(o.r > 0.0)) throw std::invalid_argument("r must be > 0");
    if (!(o.t_final > 0.0)) throw std::invalid_argument("t_final must be > 0");
    if (o.gamma_points < 0 || o.c_points < 0)
        throw std::invalid_argument("grid point counts must be >= 0");

    std::vector<std::pair<double, double>> seeds;
    for (int i = 0; i < o.gamma_points; ++i) {
        const double gamma0 = -std::numbers::pi + kTwoPi * i / o.gamma_points;
        for (double c0 : grid({-o.c_max, o.c_max}, std::max(o.c_points, 1))) {
            if (o.c_points == 0) break;
            seeds.emplace_back(gamma0, c0);
        }
    }
    seeds.insert(seeds.end(), o.extra_seeds.begin(), o.extra_seeds.end());

    odeflow::IntegratorConfig config;
    config.sample_every = o.sample_every;
    config.validate();
    const odeflow::Field field = [params](const odeflow::State& y) -> odeflow::State {
        return pendulum_field(PendulumState{y[0], y[1], y[2]}, params);
    };

    std::vector<PortraitTrajectory> trajs;
    for (const auto& [gamma0, c0] : seeds) {
        PortraitTrajectory t;
        t.gamma0 = gamma0;
        t.c0 = c0;
        const PendulumState p0{o.r, gamma0, c0};
        t.regime = pendulum_regime(p0, params);
        t.energy0 = pendulum_energy(p0, params);
        t.traj = odeflow::integrate(field, odeflow::State(Vec3(o.r, gamma0, c0)), o.t_final,
                                    config);
        for (const auto& s : t.traj.states)
            t.max_energy_drift = std::max(
                t.max_energy_drift,
                rel_drift(pendulum_energy(PendulumState{s[0], s[1], s[2]}, params), t.energy0));
        trajs.push_back(std::move(t));
    }

    Output out(g.out_path, fallback);
    if (resolved_format(g, "csv") == "json") {
        Json rows = Json::array();
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            const auto& t = trajs[i];
            Json points = Json::array();
            for (std::size_t k = 0; k < t.traj.size(); ++k)
                points.push_back({t.traj.times[k], t.traj.states[k][1],
                                  wrap_angle(t.traj.states[k][1]), t.traj.states[k][2]});
            rows.push_back({{"trajectory", i},
                            {"regime", std::string(to_string(t.regime))},
                            {"gamma0", t.gamma0},
                            {"c0", t.c0},
                            {"energy", t.energy0},
                            {"max_energy_drift", t.max_energy_drift},
                            {"points_columns", {"t", "gamma_unwrapped", "gamma", "c"}},
                            {"points", points}});
        }
        const Json doc{{"schema_version", kSchemaVersion},
                       {"command", "portrait"},
                       {"chi", params.chi()},
                       {"kappa", params.kappa()},
                       {"r", o.r},
                       {"separatrix_energy", 2.0 * params.chi() * o.r * o.r},
                       {"t_final", o.t_final},
                       {"trajectories", rows}};
        out.stream() << doc.dump(2) << '\n';
    } else {
        auto& os = out.stream();
        os << "trajectory,regime,t,gamma_unwrapped,gamma,c,energy\n";
        for (std::size_t i = 0; i < trajs.size(); ++i) {
            const auto& t = trajs[i];
            for (std::size_t k = 0; k < t.traj.size(); ++k) {
                const auto& s = t.traj.states[k];
                os << i << ',' << to_string(t.regime) << ',' << fmt17(t.traj.times[k]) << ','
                   << fmt17(s[1]) << ',' << fmt17(wrap_angle(s[1])) << ',' << fmt17(s[2]) << ','
                   << fmt17(pendulum_energy(PendulumState{s[0], s[1], s[2]}, params)) << '\n';
            }
        }
    }
    if (!o.svg_path.empty()) write_portrait_svg(o.svg_path, trajs, params, o.r);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geodesic flows of left-invariant sub-Riemannian structures on 3D unimodular "
                 "Lie groups",
                 "unisr"};
    app.set_config("--config", "",
                   "Read options from a 'key = value' file; command-line flags take precedence");
    app.require_subcommand(1, 1);
    app.fallthrough();

    Globals g;
    app.add_option("--chi", g.chi, "Invariant chi >= 0")->capture_default_str();
    app.add_option("--kappa", g.kappa, "Invariant kappa")->capture_default_str();
    app.add_option("--seed", g.seed, "Seed for sampled states")->capture_default_str();
    app.add_option("--out", g.out_path, "Output file (default: standard output)");
    app.add_option("--format", g.format, "Output format (default: per command)")
        ->check(CLI::IsMember({"csv", "json"}));

    auto* classify_cmd =
        app.add_subcommand("classify", "Print the algebra class, brackets and Killing signature "
                                       "(a text line, or JSON with --format json)");

    SimulateOptions sim;
    auto* simulate_cmd = app.add_subcommand(
        "simulate", "Integrate a geodesic flow with adjoint transport and record the integrals");
    simulate_cmd->add_option("--h0", sim.h0, "Initial h0");
    simulate_cmd->add_option("--h1", sim.h1, "Initial h1");
    simulate_cmd->add_option("--h2", sim.h2, "Initial h2");
    simulate_cmd->add_option("--r", sim.r, "Initial r (pendulum chart)");
    simulate_cmd->add_option("--gamma", sim.gamma, "Initial gamma (pendulum chart)");
    simulate_cmd->add_option("--c", sim.c, "Initial c (pendulum chart)");
    simulate_cmd->add_option("--t-final", sim.t_final, "Final time")->capture_default_str();
    simulate_cmd->add_option("--generator", sim.generator, "Flow generator: H, E or Cl")
        ->capture_default_str();
    simulate_cmd->add_option("--method", sim.method, "adaptive_54 or rk4_fixed")
        ->capture_default_str();
    simulate_cmd->add_option("--step", sim.integrator.step, "Fixed RK4 step")
        ->capture_default_str();
    simulate_cmd->add_option("--rtol", sim.integrator.rel_tol, "Adaptive relative tolerance")
        ->capture_default_str();
    simulate_cmd->add_option("--atol", sim.integrator.abs_tol, "Adaptive absolute tolerance")
        ->capture_default_str();
    simulate_cmd->add_option("--max-steps", sim.integrator.max_steps, "Step budget")
        ->capture_default_str();
    simulate_cmd->add_option("--sample-every", sim.integrator.sample_every, "Output interval")
        ->capture_default_str();
    simulate_cmd->add_option("--summary", sim.summary_path,
                             "Summary JSON path (default: <out>.summary.json with --out)");

    VerifyOptions ver;
    auto* verify_cmd =
        app.add_subcommand("verify", "Run every invariant check; exit 1 if any check fails");
    verify_cmd->add_option("--samples", ver.n_samples, "Random samples per check")
        ->capture_default_str();
    verify_cmd->add_option("--rtol", ver.vertical.rel_tol, "Vertical flow relative tolerance")
        ->capture_default_str();
    verify_cmd->add_option("--atol", ver.vertical.abs_tol, "Vertical flow absolute tolerance")
        ->capture_default_str();

    ScanOptions scan;
    auto* scan_cmd = app.add_subcommand("scan", "Sweep a (chi, kappa) grid");
    scan_cmd->add_option("--chi-range", scan.chi_range, "chi range LO HI")->capture_default_str();
    scan_cmd->add_option("--kappa-range", scan.kappa_range, "kappa range LO HI")
        ->capture_default_str();
    scan_cmd->add_option("--grid", scan.grid_n, "Points per axis, endpoints included")
        ->capture_default_str();
    scan_cmd->add_option("--trajectories", scan.trajectories, "Transported flows per cell")
        ->capture_default_str();

    PortraitOptions por;
    auto* portrait_cmd = app.add_subcommand("portrait", "Pendulum phase portrait on a seed grid");
    portrait_cmd->add_option("--r", por.r, "Radius r > 0")->capture_default_str();
    portrait_cmd->add_option("--gamma-points", por.gamma_points,
                             "gamma0 grid size; gamma0 = -pi + 2 pi k / n")
        ->capture_default_str();
    portrait_cmd->add_option("--c-points", por.c_points,
                             "c0 grid size over [-c-max, c-max], endpoints included")
        ->capture_default_str();
    portrait_cmd->add_option("--c-max", por.c_max, "c0 grid half-width")->capture_default_str();
    portrait_cmd->add_option("--t-final", por.t_final, "Final time")->capture_default_str();
    portrait_cmd->add_option("--sample-every", por.sample_every, "Output interval")
        ->capture_default_str();
    portrait_cmd->add_option("--seed-point", por.extra_seeds, "Extra seed GAMMA C (repeatable)");
    portrait_cmd->add_option("--svg", por.svg_path, "Also write an SVG plot here");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*classify_cmd) return cmd_classify(g, out);
        if (*simulate_cmd) return cmd_simulate(g, sim, out);
        if (*verify_cmd) return cmd_verify(g, ver, out);
        if (*scan_cmd) return cmd_scan(g, scan, out);
        if (*portrait_cmd) return cmd_portrait(g, por, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeFailure;
    }
    return kUsage;
}

}  // namespace unisr::cli
