#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iterator>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarsym {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Two abscissae closer than this are treated as the same point when
/// transforms build common refinements (reflections, layouts, products).
inline constexpr double kGeomTol = 1e-12;

/// Relative tolerance for comparing masses and density values that went
/// through different summation orders.
inline constexpr double kValueRelTol = 1e-12;

enum class Errc {
    negative_density,
    nonpositive_mass,
    atom_out_of_range,
    breakpoints_not_increasing,
    validation,
    domain,
    invalid_pivot,
    invalid_exponent,
    quadrature,
    precondition_violated,
    depth_too_large,
    parse,
    io,
    unknown_theorem,
    no_density_part,
    invalid_argument,
};

inline const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::negative_density: return "NegativeDensity";
        case Errc::nonpositive_mass: return "NonpositiveMass";
        case Errc::atom_out_of_range: return "AtomOutOfRange";
        case Errc::breakpoints_not_increasing: return "BreakpointsNotIncreasing";
        case Errc::validation: return "ValidationError";
        case Errc::domain: return "DomainError";
        case Errc::invalid_pivot: return "InvalidPivot";
        case Errc::invalid_exponent: return "InvalidExponent";
        case Errc::quadrature: return "QuadratureError";
        case Errc::precondition_violated: return "PreconditionViolated";
        case Errc::depth_too_large: return "DepthTooLarge";
        case Errc::parse: return "ParseError";
        case Errc::io: return "IoError";
        case Errc::unknown_theorem: return "UnknownTheorem";
        case Errc::no_density_part: return "NoDensityPart";
        case Errc::invalid_argument: return "InvalidArgument";
    }
    return "Error";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline void require_in_domain(double x, const char* what) {
    if (!(x >= -kPi && x <= kPi)) {
        throw Error(Errc::domain, std::string(what) + " = " + std::to_string(x) + " outside [-pi, pi]");
    }
}

inline bool values_close(double a, double b, double rel = kValueRelTol) {
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Sorted union of `primary` and `secondary`. Every primary point survives;
/// a secondary point is dropped when it lies within `tol` of a primary point
/// or of a secondary point already taken.
inline std::vector<double> merge_points(std::vector<double> primary, std::vector<double> secondary,
                                        double tol = kGeomTol) {
    std::sort(primary.begin(), primary.end());
    primary.erase(std::unique(primary.begin(), primary.end()), primary.end());
    std::sort(secondary.begin(), secondary.end());

    std::vector<double> kept;
    kept.reserve(secondary.size());
    for (double s : secondary) {
        auto it = std::lower_bound(primary.begin(), primary.end(), s);
        bool near_primary = (it != primary.end() && *it - s <= tol) ||
                            (it != primary.begin() && s - *std::prev(it) <= tol);
        if (near_primary) continue;
        if (!kept.empty() && s - kept.back() <= tol) continue;
        kept.push_back(s);
    }
    std::vector<double> out;
    out.reserve(primary.size() + kept.size());
    std::merge(primary.begin(), primary.end(), kept.begin(), kept.end(), std::back_inserter(out));
    return out;
}

/// Shortest round-trip decimal form; independent of the C locale.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

}  // namespace polarsym
