// Command-line front end for the polarsym library.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "polarsym/cli.hpp"

namespace {

std::optional<std::string> optional_path(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace polarsym;

    CLI::App app{"Exact 1D Dirichlet-Poisson solver, rearrangement transforms and inequality checks"};
    app.require_subcommand(1);

    std::string measure;
    std::string output;
    std::size_t samples = 101;
    auto* solve_cmd = app.add_subcommand("solve", "Sample u on a uniform grid, write CSV x,u");
    solve_cmd->add_option("--measure", measure, "Measure JSON file")->required();
    solve_cmd->add_option("--samples", samples, "Grid points including +-pi");
    solve_cmd->add_option("--output", output, "Output CSV (default stdout)");

    cli::TransformArgs transform_args;
    double b = 0.0;
    auto* transform_cmd = app.add_subcommand("transform", "Symmetrize or polarize a measure");
    transform_cmd->add_option("kind", transform_args.kind, "symmetrize | polarize")
        ->required()
        ->check(CLI::IsMember({"symmetrize", "polarize"}));
    transform_cmd->add_option("--measure", measure, "Measure JSON file")->required();
    auto* transform_b = transform_cmd->add_option("--b", b, "Pivot for polarize");
    transform_cmd->add_option("--output", output, "Output JSON (default stdout)");

    cli::VerifyArgs verify_args;
    auto* verify_cmd = app.add_subcommand("verify", "Run inequality checkers, write report CSV");
    verify_cmd->add_option("--theorem", verify_args.theorem, "Checker name or all");
    verify_cmd->add_option("--trials", verify_args.trials, "Number of random trials");
    verify_cmd->add_option("--seed", verify_args.seed, "Base seed");
    verify_cmd->add_option("--measure", measure, "Check one measure instead of random ones");
    auto* verify_b = verify_cmd->add_option("--b", b, "Pivot for polar-convex on a fixed measure");
    verify_cmd->add_option("--output", output, "Report CSV (default stdout)");

    cli::ConvergeArgs converge_args;
    auto* converge_cmd = app.add_subcommand("converge", "Iterate polarizations toward the s.d.r.");
    converge_cmd->add_option("--measure", measure, "Measure JSON file")->required();
    converge_cmd->add_option("--eps", converge_args.eps, "Relative L1 tolerance");
    converge_cmd->add_option("--max-iter", converge_args.max_iter, "Iteration cap");
    converge_cmd->add_option("--seed", converge_args.seed, "Seed for random pivots");
    converge_cmd->add_option("--output", output, "Trace CSV (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : cli::kFailure;
    }

    try {
        if (*solve_cmd) return cli::cmd_solve(measure, samples, optional_path(output), std::cout);
        if (*transform_cmd) {
            if (*transform_b) transform_args.b = b;
            return cli::cmd_transform(measure, transform_args, optional_path(output), std::cout);
        }
        if (*verify_cmd) {
            if (!measure.empty()) verify_args.measure_file = measure;
            if (*verify_b) verify_args.b = b;
            return cli::cmd_verify(verify_args, optional_path(output), std::cout);
        }
        if (*converge_cmd) return cli::cmd_converge(measure, converge_args, optional_path(output), std::cout);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kFailure;
    }
    return cli::kFailure;
}
