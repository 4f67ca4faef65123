#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "green.hpp"
#include "measure.hpp"
#include "random.hpp"
#include "rearrange.hpp"
#include "transforms.hpp"

namespace polarsym {

/// Margins within atol * max(1, |lhs|, |rhs|) of zero count as zero.
inline constexpr double kAtol = 1e-9;

/// Relative tolerance of the sampled star functions.
inline constexpr double kStarTol = 1e-4;

enum class Verdict { holds, equality, violated, indeterminate };

inline const char* verdict_name(Verdict v) noexcept {
    switch (v) {
        case Verdict::holds: return "holds";
        case Verdict::equality: return "equality";
        case Verdict::violated: return "violated";
        case Verdict::indeterminate: return "indeterminate";
    }
    return "?";
}

struct TrialReport {
    std::size_t trial = 0;
    std::string checker;
    std::uint64_t seed = 0;
    std::string description;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    Verdict verdict = Verdict::holds;
    bool equality_expected = false;
    /// The theorem asserts a strict inequality whenever equality is not expected.
    bool strict = false;

    /// Verdict agrees with the exact measure-level equality predicate.
    bool consistent() const noexcept {
        if (verdict == Verdict::violated) return false;
        if (equality_expected) return verdict == Verdict::equality;
        if (strict) return verdict == Verdict::holds;
        return true;
    }
};

inline Verdict classify(double margin, double tol, bool equality_expected) {
    if (margin < -tol) return Verdict::violated;
    if (margin <= tol) return equality_expected ? Verdict::equality : Verdict::indeterminate;
    return Verdict::holds;
}

inline TrialReport make_report(std::string checker, std::string description, double lhs, double rhs,
                               bool equality_expected, bool strict, double rel_tol = kAtol) {
    TrialReport r;
    r.checker = std::move(checker);
    r.description = std::move(description);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = rhs - lhs;
    r.equality_expected = equality_expected;
    r.strict = strict;
    r.verdict = classify(r.margin, rel_tol * std::max({1.0, std::abs(lhs), std::abs(rhs)}), equality_expected);
    return r;
}

// Two-sided check of an identity: any gap beyond tolerance is a violation.
inline TrialReport make_identity_report(std::string checker, std::string description, double lhs, double rhs,
                                        double abs_tol) {
    TrialReport r = make_report(std::move(checker), std::move(description), lhs, rhs, true, false);
    r.verdict = std::abs(r.margin) <= abs_tol ? Verdict::equality : Verdict::violated;
    return r;
}

/// phi(x1) + phi(x2) <= phi(y1) + phi(y2) under x1 >= x2, y1 >= y2,
/// x1 <= y1 and x1 + x2 <= y1 + y2, all arguments non-negative.
inline TrialReport karamata_check(double x1, double x2, double y1, double y2, const ConvexIncreasing& phi) {
    std::vector<std::string> failed;
    if (!(x1 >= 0.0 && x2 >= 0.0 && y1 >= 0.0 && y2 >= 0.0)) failed.emplace_back("arguments in [0, M]");
    if (!(x1 >= x2 && y1 >= y2)) failed.emplace_back("(a) x1 >= x2 and y1 >= y2");
    if (!(x1 <= y1)) failed.emplace_back("(b) x1 <= y1");
    if (!(x1 + x2 <= y1 + y2)) failed.emplace_back("(c) x1 + x2 <= y1 + y2");
    if (!failed.empty()) {
        std::string msg;
        for (const auto& f : failed) msg += (msg.empty() ? "" : "; ") + f;
        throw Error(Errc::precondition_violated, msg);
    }
    double lhs = phi(x1) + phi(x2);
    double rhs = phi(y1) + phi(y2);
    bool same = x1 == y1 && x2 == y2;
    return make_report("karamata", phi.name, lhs, rhs, same, false);
}

/// Both reflection inequalities of the Green kernel for x, y on the far
/// side I of the pivot; reports the smaller of the two margins.
inline TrialReport green_reflection_check(double x, double y, double b) {
    detail::require_pivot(b);
    auto in_far_side = [b](double t) { return b > 0.0 ? (t >= b && t <= kPi) : (t >= -kPi && t <= b); };
    if (!in_far_side(x) || !in_far_side(y)) throw Error(Errc::domain, "x and y must lie in I");
    double xr = 2.0 * b - x, yr = 2.0 * b - y;
    // Reflections may leave [-pi, pi]; the kernel vanishes there.
    auto g = [](double s, double t) {
        if (std::abs(s) > kPi || std::abs(t) > kPi) return 0.0;
        return green_eval(s, t);
    };
    double lhs_a = g(x, y) + g(xr, y), rhs_a = g(x, yr) + g(xr, yr);
    double lhs_b = g(x, y) + g(x, yr), rhs_b = g(xr, y) + g(xr, yr);
    bool use_a = rhs_a - lhs_a <= rhs_b - lhs_b;
    bool equal = x == b || y == b;
    return make_report("green-reflection", use_a ? "reflection in y" : "reflection in x", use_a ? lhs_a : lhs_b,
                       use_a ? rhs_a : rhs_b, equal, true);
}

inline TrialReport check_polar_convex(const Measure& m, double b, const ConvexIncreasing& phi) {
    Measure polarized = polarize_measure(m, b);
    double lhs = convex_mean(solve(m), phi);
    double rhs = convex_mean(solve(polarized), phi);
    return make_report("polar-convex", phi.name + " b=" + format_double(b), lhs, rhs, measures_equal(m, polarized),
                       phi.strictly_increasing);
}

inline TrialReport check_sdr_convex(const Measure& m, const ConvexIncreasing& phi) {
    double lhs = convex_mean(solve(m), phi);
    double rhs = convex_mean(solve(symmetrize_measure(m)), phi);
    return make_report("sdr-convex", phi.name, lhs, rhs, is_symmetrized(m), phi.strictly_convex);
}

/// max u_mu against u_{mu#}(0), which must also be the maximum of u_{mu#}.
inline TrialReport check_max(const Measure& m) {
    Solution sym = solve(symmetrize_measure(m));
    double rhs = sym(0.0);
    double sym_max = solution_max(sym).value;
    if (std::abs(rhs - sym_max) > 1e-10 * std::max(1.0, rhs)) {
        throw std::logic_error("symmetrized solution does not peak at the origin");
    }
    Solution s = solve(m);
    double lhs = solution_max(s).value;
    return make_report("max", "osc=" + format_double(oscillation(s)), lhs, rhs, is_symmetrized(m), true);
}

inline std::vector<double> uniform_t_grid(std::size_t points) {
    std::vector<double> grid;
    for (std::size_t i = 0; i < points; ++i) grid.push_back(kTwoPi * static_cast<double>(i) / (points - 1));
    return grid;
}

/// Sampled star functions of u_mu and u_{mu#} compared on a grid. The margin
/// is the most negative gap when one exceeds the sampling tolerance, else
/// the largest gap, so "holds" means the ordering is strict somewhere.
inline TrialReport check_star_ordering(const Measure& m, std::span<const double> t_grid,
                                       std::size_t samples = SampledStar::kDefaultSamples) {
    SampledStar lhs_star(solve(m), samples);
    SampledStar rhs_star(solve(symmetrize_measure(m)), samples);
    const double scale = std::max(1.0, rhs_star(kTwoPi));
    const double tol = kStarTol * scale;
    double worst = std::numeric_limits<double>::infinity(), best = -worst;
    double worst_t = 0.0, best_t = 0.0;
    for (double t : t_grid) {
        double gap = rhs_star(t) - lhs_star(t);
        if (gap < worst) worst = gap, worst_t = t;
        if (gap > best) best = gap, best_t = t;
    }
    double t = worst < -tol ? worst_t : best_t;
    TrialReport r = make_report("star", "t=" + format_double(t), lhs_star(t), rhs_star(t), is_symmetrized(m), false);
    r.verdict = classify(r.margin, tol, r.equality_expected);
    return r;
}

inline std::vector<TrialReport> check_lp(const Measure& m, std::span<const double> p_list) {
    Solution s = solve(m);
    Solution sym = solve(symmetrize_measure(m));
    bool symmetric = is_symmetrized(m);
    std::vector<TrialReport> out;
    for (double p : p_list) {
        out.push_back(make_report("lp", "p=" + format_double(p), lp_norm(s, p), lp_norm(sym, p), symmetric, true));
    }
    return out;
}

/// Atomic approximant of the Cantor measure: the 2^depth level intervals of
/// the middle-thirds construction on [0, 1], mapped onto [-3, 3], each
/// carrying mass 2^-depth at its midpoint.
inline Measure cantor_approximant(unsigned depth) {
    if (depth > 12) throw Error(Errc::depth_too_large, "depth " + std::to_string(depth) + " exceeds 12");
    const std::size_t count = std::size_t{1} << depth;
    const double length = std::pow(3.0, -static_cast<double>(depth));
    const double mass = 1.0 / static_cast<double>(count);
    std::vector<Atom> atoms;
    atoms.reserve(count);
    for (std::size_t code = 0; code < count; ++code) {
        double left = 0.0, scale = 1.0;
        for (unsigned level = 0; level < depth; ++level) {
            scale /= 3.0;
            if ((code >> (depth - 1 - level)) & 1U) left += 2.0 * scale;
        }
        atoms.push_back({-3.0 + 6.0 * (left + 0.5 * length), mass});
    }
    return Measure(AtomSet::from_atoms(std::move(atoms)));
}

inline constexpr std::array<double, 5> kLpExponents{1.0, 1.5, 2.0, 4.0, std::numeric_limits<double>::infinity()};

/// Star ordering and L^p comparison for the depth-k Cantor approximant, plus
/// the closed form of the p = 1 gap: (1/2) * integral of y^2 d sigma_k.
inline std::vector<TrialReport> check_singular_approx(unsigned depth) {
    Measure sigma = cantor_approximant(depth);
    std::vector<TrialReport> out;
    auto grid = uniform_t_grid(33);
    out.push_back(check_star_ordering(sigma, grid));
    for (auto& r : check_lp(sigma, kLpExponents)) out.push_back(std::move(r));
    for (auto& r : out) {
        r.checker = "singular-approx";
        r.description = "depth=" + std::to_string(depth) + " " + r.description;
    }
    double second_moment = 0.0;
    for (const Atom& a : sigma.atoms().atoms()) second_moment += a.mass * a.x * a.x;
    double l1_gap = lp_norm(solve(symmetrize_measure(sigma)), 1.0) - lp_norm(solve(sigma), 1.0);
    out.push_back(make_identity_report("singular-approx", "depth=" + std::to_string(depth) + " p1-gap-closed-form",
                                       l1_gap, 0.5 * second_moment, 1e-9));
    return out;
}

/// Integral inequality for polarizations, with equality exactly when the
/// disagreement set A_H is null.
inline TrialReport hardy_littlewood_polar(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g,
                                          double b) {
    double lhs = inner_product(f, g);
    double rhs = inner_product(polarize_density(f, b), polarize_density(g, b));
    bool null_set = polarization_disagreement(f, g, b) <= kGeomTol;
    return make_report("hardy-littlewood-polar", "b=" + format_double(b), lhs, rhs, null_set, true);
}

inline TrialReport hardy_littlewood_sdr(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g) {
    double lhs = inner_product(f, g);
    double rhs = inner_product(sdr(f), sdr(g));
    bool null_set = sdr_disagreement(f, g) <= kGeomTol;
    return make_report("hardy-littlewood-sdr", "", lhs, rhs, null_set, true);
}

// ---------------------------------------------------------------------------
// Random inputs

inline PiecewiseConstantDensity random_density(Rng& rng, std::size_t cells, double max_value = 4.0) {
    if (cells == 0) return {};
    std::vector<double> interior;
    while (true) {
        interior.clear();
        for (std::size_t i = 0; i + 1 < cells; ++i) interior.push_back(rng.uniform(-kPi, kPi));
        std::sort(interior.begin(), interior.end());
        bool spaced = true;
        double prev = -kPi;
        for (double x : interior) {
            if (x - prev < 1e-3) spaced = false;
            prev = x;
        }
        if (kPi - prev < 1e-3) spaced = false;
        if (spaced) break;
    }
    std::vector<double> bp{-kPi};
    bp.insert(bp.end(), interior.begin(), interior.end());
    bp.push_back(kPi);
    std::vector<double> vals;
    for (std::size_t i = 0; i < cells; ++i) vals.push_back(rng.bernoulli(0.1) ? 0.0 : rng.uniform(0.0, max_value));
    return PiecewiseConstantDensity::from_cells(std::move(bp), std::move(vals));
}

inline AtomSet random_atoms(Rng& rng, std::size_t count) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < count; ++i) {
        atoms.push_back({rng.uniform(-kPi + 1e-2, kPi - 1e-2), 2.0 * (1.0 - rng.unit())});
    }
    return AtomSet::from_atoms(std::move(atoms));
}

/// Up to 32 density cells with values in [0, 4] and up to 8 atoms with
/// masses in (0, 2]; never the zero measure.
inline Measure random_measure(Rng& rng) {
    std::size_t cells = rng.index(33);
    std::size_t atoms = rng.index(9);
    if (rng.bernoulli(0.15)) cells = 0;
    else if (rng.bernoulli(0.15)) atoms = 0;
    PiecewiseConstantDensity f = random_density(rng, cells);
    AtomSet a = random_atoms(rng, atoms);
    if (f.is_zero() && a.empty()) a = random_atoms(rng, 1);
    return Measure(std::move(f), std::move(a));
}

inline double random_pivot(Rng& rng) {
    double b = 0.0;
    while (std::abs(b) < 1e-3) b = rng.uniform(-kPi + 1e-3, kPi - 1e-3);
    return b;
}

inline std::vector<ConvexIncreasing> phi_family(double shift) {
    return {relu_pow(1.0), relu_pow(2.0), relu_pow(4.0), shifted_plus(shift), exp_scaled(0.5)};
}

// ---------------------------------------------------------------------------
// Suite driver

inline const std::vector<std::string>& theorem_names() {
    static const std::vector<std::string> names{"polar-convex", "sdr-convex", "max",
                                                "lp",           "star",       "karamata",
                                                "green-reflection", "hardy-littlewood", "singular-approx"};
    return names;
}

inline std::set<std::string> resolve_theorems(std::string_view name) {
    const auto& names = theorem_names();
    if (name == "all") return {names.begin(), names.end()};
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        throw Error(Errc::unknown_theorem, std::string(name));
    }
    return {std::string(name)};
}

struct SuiteResult {
    std::vector<TrialReport> reports;
    std::map<Verdict, std::size_t> counts;
    std::size_t inconsistent = 0;

    bool any_violated() const {
        auto it = counts.find(Verdict::violated);
        return it != counts.end() && it->second > 0;
    }
    int exit_status() const { return any_violated() ? 1 : 0; }
};

namespace detail {

inline Measure maybe_symmetrized(Rng& rng, Measure m, double p = 0.2) {
    return rng.bernoulli(p) ? symmetrize_measure(m) : m;
}

inline void run_trial(std::size_t trial, std::uint64_t sub_seed, const std::set<std::string>& enabled,
                      std::vector<TrialReport>& out) {
    auto stream = [&](std::uint64_t tag) { return Rng(mix_seed(sub_seed) ^ (tag * 0x9E3779B97F4A7C15ULL)); };
    auto emit = [&](TrialReport r) {
        r.trial = trial;
        r.seed = sub_seed;
        out.push_back(std::move(r));
    };
    auto on = [&](const char* name) { return enabled.count(name) > 0; };

    if (on("polar-convex")) {
        Rng rng = stream(1);
        Measure m = random_measure(rng);
        double b = random_pivot(rng);
        double u = rng.unit();
        if (rng.bernoulli(0.2)) m = polarize_measure(m, b);
        else m = maybe_symmetrized(rng, m, 0.1);
        double shift = u * solution_max(solve(m)).value;
        for (const auto& phi : phi_family(shift)) emit(check_polar_convex(m, b, phi));
    }
    if (on("sdr-convex")) {
        Rng rng = stream(2);
        Measure m = maybe_symmetrized(rng, random_measure(rng));
        double shift = rng.unit() * solution_max(solve(m)).value;
        for (const auto& phi : phi_family(shift)) emit(check_sdr_convex(m, phi));
    }
    if (on("max")) {
        Rng rng = stream(3);
        emit(check_max(maybe_symmetrized(rng, random_measure(rng))));
    }
    if (on("lp")) {
        Rng rng = stream(4);
        for (auto& r : check_lp(maybe_symmetrized(rng, random_measure(rng)), kLpExponents)) emit(std::move(r));
    }
    if (on("star")) {
        Rng rng = stream(5);
        emit(check_star_ordering(maybe_symmetrized(rng, random_measure(rng)), uniform_t_grid(33)));
    }
    if (on("karamata")) {
        Rng rng = stream(6);
        constexpr double bound = 10.0;
        double x1 = rng.uniform(0.0, bound), x2 = rng.uniform(0.0, bound);
        if (x1 < x2) std::swap(x1, x2);
        double y1 = x1, y2 = x2;
        if (!rng.bernoulli(0.1)) {
            y1 = rng.uniform(x1, bound);
            y2 = rng.uniform(std::max(0.0, x1 + x2 - y1), y1);
        }
        auto family = phi_family(rng.uniform(0.0, bound));
        emit(karamata_check(x1, x2, y1, y2, family[rng.index(family.size())]));
    }
    if (on("green-reflection")) {
        Rng rng = stream(7);
        double b = random_pivot(rng);
        double lo = b > 0.0 ? b : -kPi, hi = b > 0.0 ? kPi : b;
        double x = rng.uniform(lo, hi);
        double y = rng.bernoulli(0.1) ? b : rng.uniform(lo, hi);
        emit(green_reflection_check(x, y, b));
    }
    if (on("hardy-littlewood")) {
        Rng rng = stream(8);
        PiecewiseConstantDensity f = random_density(rng, 1 + rng.index(32));
        PiecewiseConstantDensity g = random_density(rng, 1 + rng.index(32));
        double mode = rng.unit();
        if (mode < 0.15) {
            g = f;
        } else if (mode < 0.3) {
            // increasing function of f: same ordering everywhere
            std::vector<double> vals;
            for (double v : f.values()) vals.push_back(v * v + 1.0);
            auto bp = f.breakpoints();
            g = PiecewiseConstantDensity::from_cells({bp.begin(), bp.end()}, std::move(vals));
        }
        double b = random_pivot(rng);
        emit(hardy_littlewood_polar(f, g, b));
        emit(hardy_littlewood_sdr(f, g));
    }
    if (on("singular-approx")) {
        for (auto& r : check_singular_approx(static_cast<unsigned>(trial % 9))) emit(std::move(r));
    }
}

}  // namespace detail

/// Runs every enabled checker on `trials` independent trials. Trial i uses
/// the sub-seed seed ^ i; the result depends only on (seed, trials, enabled).
inline SuiteResult run_suite(std::uint64_t seed, std::size_t trials,
                             const std::set<std::string>& enabled = resolve_theorems("all")) {
    if (trials < 1) throw Error(Errc::invalid_argument, "trials must be at least 1");
    SuiteResult result;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        detail::run_trial(trial, seed ^ static_cast<std::uint64_t>(trial), enabled, result.reports);
    }
    for (const auto& r : result.reports) {
        ++result.counts[r.verdict];
        if (!r.consistent()) ++result.inconsistent;
    }
    return result;
}

inline void write_report_csv(std::ostream& os, std::span<const TrialReport> reports) {
    os << "trial,checker,seed,lhs,rhs,margin,verdict,equality_expected\n";
    for (const auto& r : reports) {
        os << r.trial << ',' << r.checker << ',' << r.seed << ',' << format_double(r.lhs) << ','
           << format_double(r.rhs) << ',' << format_double(r.margin) << ',' << verdict_name(r.verdict) << ','
           << (r.equality_expected ? "true" : "false") << '\n';
    }
}

}  // namespace polarsym
