#include "fracctl/cli_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "fracctl/errors.hpp"
#include "fracctl/penalized_optimizer.hpp"
#include "fracctl/rhum_synthesis.hpp"

namespace fracctl {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw ValidationError(path.empty() ? "config" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ValidationError(path.empty() ? key : path + "." + key, "missing field");
    return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ValidationError(field, "expected a number");
    return j.get<double>();
}

int integer(const json& j, const std::string& field) {
    if (!j.is_number_integer()) throw ValidationError(field, "expected an integer");
    return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& field) {
    if (!j.is_array()) throw ValidationError(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(number(j[k], field + "[" + std::to_string(k) + "]"));
    return out;
}

std::string text(const json& j, const std::string& field) {
    if (!j.is_string()) throw ValidationError(field, "expected a string");
    return j.get<std::string>();
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    return f;
}

void write_json(const fs::path& path, const ordered_json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
}

template <class T>
void put(ordered_json& j, const char* key, const std::optional<T>& v) {
    if (v) j[key] = *v;
}

// Runs body, turning typed errors into a report with the matching exit code,
// and always writes report.json.
template <class Body>
RunReport guarded(const std::string& command, const fs::path& out_dir, Body&& body) {
    RunReport rep;
    rep.command = command;
    auto fail = [&](int code, const char* type, const std::string& msg) {
        rep.status = "error";
        rep.exit_code = code;
        rep.error_type = type;
        rep.error_message = msg;
    };
    try {
        body(rep);
    } catch (const NonStrategicError& e) {
        rep.dead_modes = e.dead_modes();
        fail(exit_code::non_strategic, "non_strategic", e.what());
    } catch (const InfeasibleError& e) {
        rep.dead_modes = e.dead_modes();
        fail(exit_code::non_strategic, "infeasible", e.what());
    } catch (const SingularGramianError& e) {
        rep.dead_modes = e.dead_modes();
        fail(exit_code::singular_gramian, "singular_gramian", e.what());
    } catch (const ConvergenceError& e) {
        fail(exit_code::quadrature, "quadrature_failure", e.what());
    } catch (const ValidationError& e) {
        fail(exit_code::invalid, "validation", e.what());
    } catch (const ParseError& e) {
        fail(exit_code::invalid, "parse", e.what());
    } catch (const std::exception& e) {
        fail(exit_code::invalid, "internal", e.what());
    }
    const fs::path report = out_dir / "report.json";
    rep.artifacts.push_back(report.string());
    write_json(report, rep.to_json());
    return rep;
}

}  // namespace

void validate(const ProblemConfig& c) {
    if (!std::isfinite(c.alpha) || c.alpha <= 0.0 || c.alpha >= 1.0) {
        throw ValidationError("alpha", "alpha must lie strictly in (0,1)");
    }
    if (!std::isfinite(c.T) || c.T <= 0.0) throw ValidationError("T", "T must be positive");
    if (c.n_modes < 1) throw ValidationError("n_modes", "n_modes must be at least 1");
    if (c.n_steps < 2) throw ValidationError("n_steps", "n_steps must be at least 2");
    if (static_cast<int>(c.y0.size()) != c.n_modes) throw ValidationError("y0", "length must equal n_modes");
    for (double v : c.y0) {
        if (!std::isfinite(v)) throw ValidationError("y0", "coefficients must be finite");
    }
    const ActuatorSpec& a = c.actuator;
    if (a.kind == Actuator::Kind::Zone) {
        if (!(std::isfinite(a.a) && std::isfinite(a.b) && a.a >= 0.0 && a.b <= 1.0 && a.a < a.b)) {
            throw ValidationError("actuator", "zone must satisfy 0 <= a < b <= 1");
        }
        if (a.profile && static_cast<int>(a.profile->size()) != c.n_modes) {
            throw ValidationError("actuator.profile", "length must equal n_modes");
        }
    } else {
        if (a.profile) throw ValidationError("actuator.profile", "only zone actuators take a profile");
        if (!(std::isfinite(a.b) && a.b > 0.0 && a.b < 1.0)) {
            throw ValidationError("actuator.b", "pointwise location must lie strictly in (0,1)");
        }
    }
    make_target(c.target, c.n_modes);  // index and rank checks
    const Tolerances& t = c.tolerances;
    for (auto [name, v] : {std::pair{"tolerances.gramian_rank", t.gramian_rank},
                           std::pair{"tolerances.verify_distance", t.verify_distance},
                           std::pair{"tolerances.quadrature", t.quadrature}}) {
        if (!std::isfinite(v) || v <= 0.0) throw ValidationError(name, "must be positive");
    }
}

ProblemConfig config_from_json(const json& j) {
    ProblemConfig c;
    c.alpha = number(require(j, "alpha", ""), "alpha");
    c.T = number(require(j, "T", ""), "T");
    c.n_modes = integer(require(j, "n_modes", ""), "n_modes");
    c.n_steps = integer(require(j, "n_steps", ""), "n_steps");
    c.y0 = numbers(require(j, "y0", ""), "y0");

    const json& a = require(j, "actuator", "");
    const std::string kind = text(require(a, "kind", "actuator"), "actuator.kind");
    if (kind == "zone") {
        c.actuator.kind = Actuator::Kind::Zone;
        c.actuator.a = number(require(a, "a", "actuator"), "actuator.a");
        c.actuator.b = number(require(a, "b", "actuator"), "actuator.b");
        if (a.contains("profile")) c.actuator.profile = numbers(a["profile"], "actuator.profile");
    } else if (kind == "pointwise") {
        c.actuator.kind = Actuator::Kind::Pointwise;
        c.actuator.b = number(require(a, "b", "actuator"), "actuator.b");
        if (a.contains("profile")) throw ValidationError("actuator.profile", "only zone actuators take a profile");
    } else {
        throw ValidationError("actuator.kind", "expected \"zone\" or \"pointwise\"");
    }

    const json& t = require(j, "target", "");
    const std::string tkind = text(require(t, "kind", "target"), "target.kind");
    if (tkind == "modes" || tkind == "polar_modes") {
        c.target.kind = tkind == "modes" ? TargetSpec::Kind::Modes : TargetSpec::Kind::PolarModes;
        const json& idx = require(t, "indices", "target");
        if (!idx.is_array()) throw ValidationError("target.indices", "expected an array of integers");
        for (std::size_t k = 0; k < idx.size(); ++k) {
            c.target.indices.push_back(integer(idx[k], "target.indices[" + std::to_string(k) + "]"));
        }
    } else if (tkind == "basis") {
        c.target.kind = TargetSpec::Kind::Basis;
        const json& vs = require(t, "vectors", "target");
        if (!vs.is_array()) throw ValidationError("target.vectors", "expected an array of vectors");
        for (std::size_t k = 0; k < vs.size(); ++k) {
            c.target.vectors.push_back(numbers(vs[k], "target.vectors[" + std::to_string(k) + "]"));
        }
    } else {
        throw ValidationError("target.kind", "expected \"modes\", \"polar_modes\" or \"basis\"");
    }

    if (j.contains("tolerances")) {
        const json& tol = j["tolerances"];
        if (!tol.is_object()) throw ValidationError("tolerances", "expected an object");
        auto opt = [&](const char* key, double& dst) {
            if (tol.contains(key)) dst = number(tol[key], join("tolerances", key));
        };
        opt("gramian_rank", c.tolerances.gramian_rank);
        opt("verify_distance", c.tolerances.verify_distance);
        opt("quadrature", c.tolerances.quadrature);
    }
    return c;
}

ordered_json config_to_json(const ProblemConfig& c) {
    ordered_json j;
    j["alpha"] = c.alpha;
    j["T"] = c.T;
    j["n_modes"] = c.n_modes;
    j["n_steps"] = c.n_steps;
    j["y0"] = c.y0;
    ordered_json a;
    if (c.actuator.kind == Actuator::Kind::Zone) {
        a["kind"] = "zone";
        a["a"] = c.actuator.a;
        a["b"] = c.actuator.b;
        if (c.actuator.profile) a["profile"] = *c.actuator.profile;
    } else {
        a["kind"] = "pointwise";
        a["b"] = c.actuator.b;
    }
    j["actuator"] = a;
    ordered_json t;
    switch (c.target.kind) {
        case TargetSpec::Kind::Modes:
            t["kind"] = "modes";
            t["indices"] = c.target.indices;
            break;
        case TargetSpec::Kind::PolarModes:
            t["kind"] = "polar_modes";
            t["indices"] = c.target.indices;
            break;
        case TargetSpec::Kind::Basis:
            t["kind"] = "basis";
            t["vectors"] = c.target.vectors;
            break;
    }
    j["target"] = t;
    j["tolerances"] = {{"gramian_rank", c.tolerances.gramian_rank},
                       {"verify_distance", c.tolerances.verify_distance},
                       {"quadrature", c.tolerances.quadrature}};
    return j;
}

ProblemConfig load_config(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ParseError("config " + path.string() + " is not valid JSON: " + e.what());
    }
    ProblemConfig c = config_from_json(j);
    validate(c);
    return c;
}

void emit_config(const ProblemConfig& config, const fs::path& path) { write_json(path, config_to_json(config)); }

ordered_json RunReport::to_json() const {
    ordered_json j;
    j["command"] = command;
    j["status"] = status;
    j["exit_code"] = exit_code;
    if (!error_type.empty()) j["error"] = {{"type", error_type}, {"message", error_message}};
    j["strategic"] = strategic;
    j["dead_modes"] = dead_modes;
    put(j, "eec", eec);
    put(j, "gramian_condition", gramian_condition);
    put(j, "gramian_residual", gramian_residual);
    put(j, "control_energy", control_energy);
    put(j, "distance_to_G", distance_to_G);
    put(j, "relative_distance", relative_distance);
    put(j, "sign_flipped", sign_flipped);
    put(j, "quadratic_form_gap", quadratic_form_gap);
    put(j, "seed", seed);
    j["warnings"] = warnings;
    j["artifacts"] = artifacts;
    return j;
}

void write_control_csv(const fs::path& path, const ControlSignal& u) {
    auto f = open_out(path);
    f << "t,u\n";
    for (int k = 0; k < u.grid.size(); ++k) f << format17(u.grid.node(k)) << ',' << format17(u.values[k]) << '\n';
}

ControlSignal read_control_csv(const fs::path& path, const TimeGrid& grid) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open control " + path.string());
    std::string line;
    if (!std::getline(f, line) || line != "t,u") throw ParseError(path.string() + ": expected header \"t,u\"");
    std::vector<double> u;
    int row = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double t = 0.0, v = 0.0;
        char comma = 0;
        if (!(ss >> t >> comma >> v) || comma != ',') {
            throw ParseError(path.string() + ": malformed row " + std::to_string(row + 1));
        }
        if (row >= grid.size() || std::abs(t - grid.node(row)) > 1e-9 * grid.horizon()) {
            throw ValidationError("control", "row " + std::to_string(row + 1) + " is off the config grid");
        }
        u.push_back(v);
        ++row;
    }
    if (row != grid.size()) throw ValidationError("control", "expected " + std::to_string(grid.size()) + " rows");
    return {grid, Eigen::Map<Eigen::VectorXd>(u.data(), static_cast<Eigen::Index>(u.size()))};
}

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
    auto f = open_out(path);
    f << 't';
    for (Eigen::Index i = 0; i < traj.coeffs.cols(); ++i) f << ",coeff_" << (i + 1);
    f << '\n';
    for (int k = 0; k < traj.grid.size(); ++k) {
        f << format17(traj.grid.node(k));
        for (Eigen::Index i = 0; i < traj.coeffs.cols(); ++i) f << ',' << format17(traj.coeffs(k, i));
        f << '\n';
    }
}

std::vector<double> parse_eps_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ValidationError("eps", "not a number: \"" + item + "\"");
        }
        if (used != item.size()) throw ValidationError("eps", "not a number: \"" + item + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("eps", "epsilon list must not be empty");
    return out;
}

RunReport run_synthesis(const ProblemConfig& config, const fs::path& out_dir) {
    return guarded("synthesize", out_dir, [&](RunReport& rep) {
        validate(config);
        const DiscreteProblem problem(config);
        const StrategicReport strat =
            is_strategic(problem.actuator(), problem.target(), config.tolerances.gramian_rank);
        rep.strategic = strat.strategic;
        rep.dead_modes = strat.dead_modes;
        rep.eec = eec_criterion(reachability(problem));
        const RhumResult res = solve_rhum(problem);
        rep.gramian_condition = res.condition;
        rep.gramian_residual = res.residual;
        rep.sign_flipped = res.sign_flipped;
        rep.warnings = res.warnings;
        rep.control_energy = energy(res.u_star);
        const Trajectory traj = problem.simulate(res.u_star);
        const double dist = (problem.target().projector() * traj.final_state()).norm();
        const double y0n = problem.y0().norm();
        rep.distance_to_G = dist;
        rep.relative_distance = y0n > 0.0 ? dist / y0n : dist;

        const fs::path control = out_dir / "control.csv";
        const fs::path trajectory = out_dir / "trajectory.csv";
        write_control_csv(control, res.u_star);
        write_trajectory_csv(trajectory, traj);
        rep.artifacts = {control.string(), trajectory.string()};
        if (*rep.relative_distance > config.tolerances.verify_distance) {
            rep.status = "error";
            rep.exit_code = exit_code::verify_failed;
            rep.error_type = "verify_failed";
            rep.error_message = "final state misses G by " + format17(*rep.relative_distance);
        }
    });
}

RunReport run_verify(const ProblemConfig& config, const std::optional<fs::path>& control_csv,
                     const fs::path& out_dir) {
    return guarded("verify", out_dir, [&](RunReport& rep) {
        validate(config);
        const DiscreteProblem problem(config);
        const ControlSignal u =
            control_csv ? read_control_csv(*control_csv, problem.grid()) : ControlSignal::zero(problem.grid());
        rep.strategic = is_strategic(problem.actuator(), problem.target(), config.tolerances.gramian_rank).strategic;
        rep.control_energy = energy(u);
        const Trajectory traj = problem.simulate(u);
        const double dist = (problem.target().projector() * traj.final_state()).norm();
        const double y0n = problem.y0().norm();
        rep.distance_to_G = dist;
        rep.relative_distance = y0n > 0.0 ? dist / y0n : dist;
        const fs::path trajectory = out_dir / "trajectory.csv";
        write_trajectory_csv(trajectory, traj);
        rep.artifacts = {trajectory.string()};
        if (*rep.relative_distance > config.tolerances.verify_distance) {
            rep.status = "error";
            rep.exit_code = exit_code::verify_failed;
            rep.error_type = "verify_failed";
            rep.error_message = "final state misses G by " + format17(*rep.relative_distance);
        }
    });
}

RunReport run_epsilon_sweep(const ProblemConfig& config, const std::vector<double>& eps_list,
                            const fs::path& out_dir) {
    return guarded("sweep", out_dir, [&](RunReport& rep) {
        validate(config);
        const DiscreteProblem problem(config);
        const StrategicReport strat =
            is_strategic(problem.actuator(), problem.target(), config.tolerances.gramian_rank);
        rep.strategic = strat.strategic;
        rep.dead_modes = strat.dead_modes;
        const SweepResult sweep = epsilon_sweep(problem, eps_list);
        rep.control_energy = sweep.J_rhum;
        if (!sweep.monotone) rep.warnings.emplace_back("J_eps is not monotone in eps");
        const fs::path csv = out_dir / "sweep.csv";
        auto f = open_out(csv);
        f << "epsilon,J_eps,rel_control_err\n";
        for (const SweepRow& r : sweep.rows) {
            f << format17(r.epsilon) << ',' << format17(r.J_eps) << ',' << format17(r.rel_control_err) << '\n';
        }
        rep.artifacts = {csv.string()};
    });
}

RunReport run_analyze(const ProblemConfig& config, long long seed, const fs::path& out_dir) {
    return guarded("analyze", out_dir, [&](RunReport& rep) {
        validate(config);
        rep.seed = seed;
        const DiscreteProblem problem(config);
        const StrategicReport strat =
            is_strategic(problem.actuator(), problem.target(), config.tolerances.gramian_rank);
        rep.strategic = strat.strategic;
        rep.dead_modes = strat.dead_modes;
        rep.eec = eec_criterion(reachability(problem));
        const Gramian g = assemble_gramian(problem);
        rep.gramian_condition = g.condition();

        // Quadratic form against the trapezoid integral of the sampled
        // observation for one random polar direction.
        const Eigen::Index m = problem.target().polar_basis().cols();
        if (m > 0) {
            std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
            std::normal_distribution<double> normal;
            Eigen::VectorXd phi(m);
            for (Eigen::Index k = 0; k < m; ++k) phi[k] = normal(rng);
            const Eigen::VectorXd sphi = problem.H().transpose() * (problem.target().polar_basis() * phi);
            const Eigen::VectorXd obs = problem.weights().cwiseInverse().cwiseProduct(sphi);
            const double integral = obs.cwiseProduct(obs).dot(problem.weights());
            const double form = phi.dot(g.matrix * phi);
            rep.quadratic_form_gap = form > 0.0 ? std::abs(form - integral) / form : std::abs(form - integral);
        }
    });
}

}  // namespace fracctl
