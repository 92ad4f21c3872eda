#pragma once

// Config ingestion, experiment drivers and artifact emission.
//
// Exit codes: 0 success, 1 invalid input or unexpected failure, 2 actuator
// not strategic (or terminal constraint unreachable), 3 singular Gramian,
// 4 quadrature / series failure, 5 transfer verification failed.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracctl/problem.hpp"

namespace fracctl {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int invalid = 1;
inline constexpr int non_strategic = 2;
inline constexpr int singular_gramian = 3;
inline constexpr int quadrature = 4;
inline constexpr int verify_failed = 5;
}  // namespace exit_code

/// Throws ValidationError naming the first offending field.
void validate(const ProblemConfig& config);

ProblemConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json config_to_json(const ProblemConfig& config);

/// Parse + validate. Throws ParseError or ValidationError.
ProblemConfig load_config(const std::filesystem::path& path);
void emit_config(const ProblemConfig& config, const std::filesystem::path& path);

struct RunReport {
    std::string command;
    std::string status = "ok";
    int exit_code = exit_code::ok;
    std::string error_type;
    std::string error_message;

    bool strategic = false;
    std::vector<int> dead_modes;
    std::optional<bool> eec;
    std::optional<double> gramian_condition;
    std::optional<double> gramian_residual;
    std::optional<double> control_energy;
    std::optional<double> distance_to_G;
    std::optional<double> relative_distance;
    std::optional<bool> sign_flipped;
    std::optional<double> quadratic_form_gap;  // analyze: |phi^T Lambda phi - int g^2| / phi^T Lambda phi
    std::optional<long long> seed;
    std::vector<std::string> warnings;
    std::vector<std::string> artifacts;

    nlohmann::ordered_json to_json() const;
};

/// Synthesize u*, verify it, and write control.csv, trajectory.csv and
/// report.json into out_dir.
RunReport run_synthesis(const ProblemConfig& config, const std::filesystem::path& out_dir);

/// Replay a control (CSV with columns t,u on the config grid; u = 0 when no
/// file is given) and report the distance of y(T) to G.
RunReport run_verify(const ProblemConfig& config, const std::optional<std::filesystem::path>& control_csv,
                     const std::filesystem::path& out_dir);

/// Penalized sweep; writes sweep.csv (epsilon,J_eps,rel_control_err) and report.json.
RunReport run_epsilon_sweep(const ProblemConfig& config, const std::vector<double>& eps_list,
                            const std::filesystem::path& out_dir);

/// Strategic / EEC diagnosis plus a seeded spot check of the Gramian
/// quadratic form.
RunReport run_analyze(const ProblemConfig& config, long long seed, const std::filesystem::path& out_dir);

void write_control_csv(const std::filesystem::path& path, const ControlSignal& u);
ControlSignal read_control_csv(const std::filesystem::path& path, const TimeGrid& grid);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

/// Parses "1e-1,1e-3"; throws ValidationError on junk.
std::vector<double> parse_eps_list(const std::string& text);

}  // namespace fracctl
