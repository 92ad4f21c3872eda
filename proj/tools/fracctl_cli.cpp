// Command-line driver: synthesize / verify / sweep / analyze.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fracctl/cli_io.hpp"
#include "fracctl/errors.hpp"

namespace {

int finish(const fracctl::RunReport& rep) {
    std::printf("%s\n", rep.to_json().dump(2).c_str());
    if (rep.exit_code != fracctl::exit_code::ok) {
        std::fprintf(stderr, "%s: %s\n", rep.error_type.c_str(), rep.error_message.c_str());
    }
    return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Control synthesis for the subdiffusive heat equation on (0,1)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string eps_text = "1e-1,1e-3,1e-5";
    std::string control_path;
    long long seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON problem configuration")->required();
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
    };
    CLI::App* synth = app.add_subcommand("synthesize", "RHUM control, verified by simulation");
    add_common(synth);
    CLI::App* verify = app.add_subcommand("verify", "replay a control and report the distance to G");
    add_common(verify);
    verify->add_option("--control", control_path, "CSV with columns t,u (default: u = 0)");
    CLI::App* sweep = app.add_subcommand("sweep", "penalized epsilon sweep against the RHUM control");
    add_common(sweep);
    sweep->add_option("--eps", eps_text, "comma-separated, strictly decreasing")->capture_default_str();
    CLI::App* analyze = app.add_subcommand("analyze", "strategic and reachability report only");
    add_common(analyze);
    analyze->add_option("--seed", seed, "seed of the random quadratic-form spot check")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    fracctl::ProblemConfig config;
    try {
        config = fracctl::load_config(config_path);
    } catch (const fracctl::Error& e) {
        fracctl::RunReport rep;
        rep.command = app.get_subcommands().front()->get_name();
        rep.status = "error";
        rep.exit_code = fracctl::exit_code::invalid;
        rep.error_type = dynamic_cast<const fracctl::ParseError*>(&e) ? "parse" : "validation";
        rep.error_message = e.what();
        return finish(rep);
    }

    const std::filesystem::path out(out_dir);
    if (*synth) return finish(fracctl::run_synthesis(config, out));
    if (*verify) {
        std::optional<std::filesystem::path> control;
        if (!control_path.empty()) control = control_path;
        return finish(fracctl::run_verify(config, control, out));
    }
    if (*sweep) {
        std::vector<double> eps;
        try {
            eps = fracctl::parse_eps_list(eps_text);
        } catch (const fracctl::Error& e) {
            fracctl::RunReport rep;
            rep.command = "sweep";
            rep.status = "error";
            rep.exit_code = fracctl::exit_code::invalid;
            rep.error_type = "validation";
            rep.error_message = e.what();
            return finish(rep);
        }
        return finish(fracctl::run_epsilon_sweep(config, eps, out));
    }
    return finish(fracctl::run_analyze(config, seed, out));
}
