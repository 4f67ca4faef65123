#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "green.hpp"
#include "io.hpp"
#include "measure.hpp"
#include "rearrange.hpp"
#include "transforms.hpp"
#include "verify.hpp"

namespace polarsym::cli {

enum ExitCode : int { kSuccess = 0, kFailure = 1, kNotConverged = 2 };

inline void emit(const std::optional<std::string>& path, std::ostream& out, const std::string& content) {
    if (path) write_text_file(*path, content);
    else out << content;
}

inline int cmd_solve(const std::string& measure_file, std::size_t samples, const std::optional<std::string>& output,
                     std::ostream& out) {
    if (samples < 2) throw Error(Errc::invalid_argument, "samples must be at least 2");
    Solution s = solve(load_measure(measure_file));
    std::ostringstream csv;
    write_solution_csv(csv, s, samples);
    emit(output, out, csv.str());
    return kSuccess;
}

struct TransformArgs {
    std::string kind;  // "symmetrize" or "polarize"
    std::optional<double> b;
};

inline int cmd_transform(const std::string& measure_file, const TransformArgs& args,
                         const std::optional<std::string>& output, std::ostream& out) {
    Measure m = load_measure(measure_file);
    std::optional<Measure> result;
    if (args.kind == "symmetrize") {
        result = symmetrize_measure(m);
    } else if (args.kind == "polarize") {
        if (!args.b) throw Error(Errc::invalid_argument, "polarize needs --b");
        result = polarize_measure(m, *args.b);
    } else {
        throw Error(Errc::invalid_argument, "unknown transform \"" + args.kind + "\"");
    }
    emit(output, out, format_measure(*result));
    return kSuccess;
}

struct VerifyArgs {
    std::string theorem = "all";
    std::size_t trials = 100;
    std::uint64_t seed = 0;
    std::optional<std::string> measure_file;
    std::optional<double> b;
};

// Checkers applied to one given measure instead of random inputs.
inline std::vector<TrialReport> verify_fixed_measure(const Measure& m, const std::string& theorem,
                                                     std::optional<double> b) {
    std::vector<TrialReport> out;
    const double shift = 0.5 * solution_max(solve(m)).value;
    if (theorem == "max") {
        out.push_back(check_max(m));
    } else if (theorem == "lp") {
        out = check_lp(m, kLpExponents);
    } else if (theorem == "star") {
        out.push_back(check_star_ordering(m, uniform_t_grid(33)));
    } else if (theorem == "sdr-convex") {
        for (const auto& phi : phi_family(shift)) out.push_back(check_sdr_convex(m, phi));
    } else if (theorem == "polar-convex") {
        if (!b) throw Error(Errc::invalid_argument, "polar-convex on a fixed measure needs --b");
        for (const auto& phi : phi_family(shift)) out.push_back(check_polar_convex(m, *b, phi));
    } else {
        throw Error(Errc::invalid_argument, "theorem \"" + theorem + "\" does not take --measure");
    }
    return out;
}

inline int cmd_verify(const VerifyArgs& args, const std::optional<std::string>& report, std::ostream& out) {
    auto enabled = resolve_theorems(args.theorem);
    SuiteResult result;
    if (args.measure_file) {
        for (auto& r : verify_fixed_measure(load_measure(*args.measure_file), args.theorem, args.b)) {
            r.seed = args.seed;
            ++result.counts[r.verdict];
            if (!r.consistent()) ++result.inconsistent;
            result.reports.push_back(std::move(r));
        }
    } else {
        result = run_suite(args.seed, args.trials, enabled);
    }
    std::ostringstream csv;
    write_report_csv(csv, result.reports);
    if (report) {
        write_text_file(*report, csv.str());
        for (Verdict v : {Verdict::holds, Verdict::equality, Verdict::indeterminate, Verdict::violated}) {
            auto it = result.counts.find(v);
            out << verdict_name(v) << ' ' << (it == result.counts.end() ? 0 : it->second) << '\n';
        }
        out << "inconsistent " << result.inconsistent << '\n';
    } else {
        out << csv.str();
    }
    return result.exit_status();
}

struct ConvergeArgs {
    double eps = 1e-6;
    std::size_t max_iter = 10000;
    std::uint64_t seed = 0;
};

inline int cmd_converge(const std::string& measure_file, const ConvergeArgs& args,
                        const std::optional<std::string>& trace, std::ostream& out) {
    Measure m = load_measure(measure_file);
    if (m.density().is_zero()) throw Error(Errc::no_density_part, "measure has no density part");
    PolarizationRun run = iterate_polarizations(m.density(), args.eps, args.max_iter, args.seed);
    std::ostringstream csv;
    write_trace_csv(csv, run.trace);
    emit(trace, out, csv.str());
    return run.converged() ? kSuccess : kNotConverged;
}

}  // namespace polarsym::cli
