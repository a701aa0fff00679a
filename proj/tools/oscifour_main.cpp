//============================================================================
// oscifour_main.cpp
//
// Command-line driver:
//
//   oscifour solve|eval|errors|averaged --config <path>
//            [--out <path>] [--threads N] [key=value ...]
//
// Trailing key=value arguments override the config file; --out and
// --threads override both.  Every failure is reported as one line
// `error: <class>: <message>` on stderr with the matching exit code:
//
//   0  success          2  configuration error     3  solver divergence
//   4  oracle failure   5  I/O error               1  anything else
//============================================================================
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "oscifour/commands.hpp"
#include "oscifour/config.hpp"
#include "oscifour/errors.hpp"

namespace {

struct SubArgs {
    std::string config_path;
    std::string out_path;
    int threads = 0; // 0 = not given
    std::vector<std::string> overrides;
};

void add_common_options(CLI::App* sub, SubArgs& args) {
    sub->add_option("--config", args.config_path,
                    "path of a flat key = value run configuration")
        ->required();
    sub->add_option("--out", args.out_path,
                    "output path (overrides the config's `out`)");
    sub->add_option("--threads", args.threads,
                    "worker cap for the solver's node loop")
        ->check(CLI::PositiveNumber);
    sub->add_option("overrides", args.overrides,
                    "key=value settings applied after the file");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Taylor-Fourier solver for highly oscillatory ODEs"};
    app.require_subcommand(1);

    SubArgs args;
    CLI::App* solve = app.add_subcommand(
        "solve", "compute Taylor-Fourier coefficients and save them");
    CLI::App* eval = app.add_subcommand(
        "eval", "tabulate a saved approximant as CSV");
    CLI::App* errors = app.add_subcommand(
        "errors", "error curves against an adaptive reference, as CSV");
    CLI::App* averaged = app.add_subcommand(
        "averaged", "averaging-composition diagnostics, as CSV");
    for (CLI::App* sub : {solve, eval, errors, averaged})
        add_common_options(sub, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    }

    try {
        oscifour::RunConfig cfg =
            oscifour::parse_config(args.config_path, args.overrides);
        if (!args.out_path.empty()) cfg.out = args.out_path;
        if (args.threads > 0) cfg.threads = args.threads;

        if (solve->parsed())
            oscifour::cmd_solve(cfg, std::cout);
        else if (eval->parsed())
            oscifour::cmd_eval(cfg, std::cout);
        else if (errors->parsed())
            oscifour::cmd_errors(cfg, std::cout);
        else
            oscifour::cmd_averaged(cfg, std::cout);
        return 0;
    } catch (const oscifour::ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const oscifour::DivergenceError& e) {
        std::cerr << "error: divergence: " << e.what() << "\n";
        return 3;
    } catch (const oscifour::OracleError& e) {
        std::cerr << "error: oracle: " << e.what() << "\n";
        return 4;
    } catch (const oscifour::IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 1;
    }
}
