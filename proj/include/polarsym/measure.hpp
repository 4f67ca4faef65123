#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace polarsym {

/// Non-negative step function on [-pi, pi]. Always held in canonical form:
/// breakpoints strictly increasing from -pi to pi, adjacent cells carry
/// different values.
class PiecewiseConstantDensity {
public:
    /// The zero density (one cell, value 0).
    PiecewiseConstantDensity() : breakpoints_{-kPi, kPi}, values_{0.0} {}

    /// Validates and canonicalizes. Endpoints within 1e-12 of +-pi are snapped.
    static PiecewiseConstantDensity from_cells(std::vector<double> breakpoints, std::vector<double> values) {
        if (breakpoints.empty() && values.empty()) return {};
        if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size()) {
            throw Error(Errc::validation, "density needs one value per cell (" + std::to_string(values.size()) +
                                              " values, " + std::to_string(breakpoints.size()) + " breakpoints)");
        }
        for (double x : breakpoints) {
            if (!std::isfinite(x)) throw Error(Errc::validation, "non-finite breakpoint");
        }
        if (std::abs(breakpoints.front() + kPi) <= 1e-12) breakpoints.front() = -kPi;
        if (std::abs(breakpoints.back() - kPi) <= 1e-12) breakpoints.back() = kPi;
        if (breakpoints.front() != -kPi || breakpoints.back() != kPi) {
            throw Error(Errc::validation, "density breakpoints must start at -pi and end at pi");
        }
        for (std::size_t i = 1; i < breakpoints.size(); ++i) {
            if (!(breakpoints[i] > breakpoints[i - 1])) {
                throw Error(Errc::breakpoints_not_increasing,
                            "breakpoint " + std::to_string(i) + " does not exceed its predecessor");
            }
        }
        for (double v : values) {
            if (!std::isfinite(v)) throw Error(Errc::validation, "non-finite density value");
            if (v < 0.0) throw Error(Errc::negative_density, "density value " + std::to_string(v));
        }

        PiecewiseConstantDensity out;
        out.breakpoints_.assign(1, breakpoints.front());
        out.values_.clear();
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!out.values_.empty() && out.values_.back() == values[i]) {
                out.breakpoints_.back() = breakpoints[i + 1];
            } else {
                out.values_.push_back(values[i]);
                out.breakpoints_.push_back(breakpoints[i + 1]);
            }
        }
        return out;
    }

    static PiecewiseConstantDensity constant(double c) { return from_cells({-kPi, kPi}, {c}); }

    /// value on [a, b), zero elsewhere.
    static PiecewiseConstantDensity indicator(double a, double b, double value = 1.0) {
        std::vector<double> bp{-kPi};
        std::vector<double> vals;
        if (a > -kPi) {
            bp.push_back(a);
            vals.push_back(0.0);
        }
        bp.push_back(b);
        vals.push_back(value);
        if (b < kPi) {
            bp.push_back(kPi);
            vals.push_back(0.0);
        }
        return from_cells(std::move(bp), std::move(vals));
    }

    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t cell_count() const noexcept { return values_.size(); }
    double width(std::size_t cell) const { return breakpoints_[cell + 1] - breakpoints_[cell]; }

    bool is_zero() const noexcept { return values_.size() == 1 && values_[0] == 0.0; }

    /// Value of the cell containing x (right-continuous); zero outside [-pi, pi].
    double operator()(double x) const {
        if (x < -kPi || x > kPi) return 0.0;
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
        std::size_t cell = it == breakpoints_.begin() ? 0 : static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
        return values_[std::min(cell, values_.size() - 1)];
    }

    /// Exact integral: sum of value * width.
    double integral() const {
        double total = 0.0;
        for (std::size_t i = 0; i < values_.size(); ++i) total += values_[i] * width(i);
        return total;
    }

    /// Density x -> f(-x). Negation is exact, so mirroring twice is the identity.
    PiecewiseConstantDensity mirrored() const {
        PiecewiseConstantDensity out;
        out.breakpoints_.assign(breakpoints_.rbegin(), breakpoints_.rend());
        for (double& x : out.breakpoints_) x = -x;
        out.values_.assign(values_.rbegin(), values_.rend());
        return out;
    }

    PiecewiseConstantDensity scaled(double alpha) const {
        if (alpha == 0.0) return {};
        std::vector<double> vals(values_);
        for (double& v : vals) v *= alpha;
        return from_cells(breakpoints_, std::move(vals));
    }

    bool operator==(const PiecewiseConstantDensity&) const = default;

private:
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

struct Atom {
    double x = 0.0;
    double mass = 0.0;
    bool operator==(const Atom&) const = default;
};

/// Finitely many point masses strictly inside (-pi, pi), sorted, distinct positions.
class AtomSet {
public:
    AtomSet() = default;

    /// Sorts, merges equal positions by summing masses, drops zero masses.
    static AtomSet from_atoms(std::vector<Atom> atoms) {
        for (const Atom& a : atoms) {
            if (!std::isfinite(a.x) || !std::isfinite(a.mass)) throw Error(Errc::validation, "non-finite atom");
            if (!(a.x > -kPi && a.x < kPi)) {
                throw Error(Errc::atom_out_of_range, "atom position " + std::to_string(a.x) + " not in (-pi, pi)");
            }
            if (a.mass < 0.0) throw Error(Errc::nonpositive_mass, "atom mass " + std::to_string(a.mass));
        }
        std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& l, const Atom& r) { return l.x < r.x; });
        AtomSet out;
        for (const Atom& a : atoms) {
            if (a.mass == 0.0) continue;
            if (!out.atoms_.empty() && out.atoms_.back().x == a.x) {
                out.atoms_.back().mass += a.mass;
            } else {
                out.atoms_.push_back(a);
            }
        }
        return out;
    }

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool empty() const noexcept { return atoms_.empty(); }

    double total_mass() const {
        double total = 0.0;
        for (const Atom& a : atoms_) total += a.mass;
        return total;
    }

    AtomSet mirrored() const {
        AtomSet out;
        out.atoms_.assign(atoms_.rbegin(), atoms_.rend());
        for (Atom& a : out.atoms_) a.x = -a.x;
        return out;
    }

    AtomSet scaled(double alpha) const {
        std::vector<Atom> out(atoms_);
        for (Atom& a : out) a.mass *= alpha;
        return from_atoms(std::move(out));
    }

    bool operator==(const AtomSet&) const = default;

private:
    std::vector<Atom> atoms_;
};

/// Raw fields of a measure before validation, as read from a file.
struct RawMeasure {
    std::vector<double> breakpoints;
    std::vector<double> values;
    std::vector<Atom> atoms;
};

/// Finite positive Borel measure on (-pi, pi): step density plus atoms.
/// Never the zero measure.
class Measure {
public:
    Measure(PiecewiseConstantDensity density, AtomSet atoms) : density_(std::move(density)), atoms_(std::move(atoms)) {
        if (!(total_variation() > 0.0)) throw Error(Errc::validation, "zero measure");
    }

    explicit Measure(PiecewiseConstantDensity density) : Measure(std::move(density), AtomSet{}) {}
    explicit Measure(AtomSet atoms) : Measure(PiecewiseConstantDensity{}, std::move(atoms)) {}

    static Measure dirac(double x, double mass) { return Measure(AtomSet::from_atoms({{x, mass}})); }

    const PiecewiseConstantDensity& density() const noexcept { return density_; }
    const AtomSet& atoms() const noexcept { return atoms_; }

    double total_variation() const { return density_.integral() + atoms_.total_mass(); }

    Measure mirrored() const { return Measure(density_.mirrored(), atoms_.mirrored()); }
    Measure scaled(double alpha) const { return Measure(density_.scaled(alpha), atoms_.scaled(alpha)); }

private:
    PiecewiseConstantDensity density_;
    AtomSet atoms_;
};

inline double total_variation(const Measure& m) { return m.total_variation(); }

inline Measure canonicalize(const RawMeasure& raw) {
    return Measure(PiecewiseConstantDensity::from_cells(raw.breakpoints, raw.values), AtomSet::from_atoms(raw.atoms));
}

/// Measures are canonical by construction; this re-runs the canonical
/// form on the stored fields.
inline Measure canonicalize(const Measure& m) {
    auto bp = m.density().breakpoints();
    auto vals = m.density().values();
    return Measure(PiecewiseConstantDensity::from_cells({bp.begin(), bp.end()}, {vals.begin(), vals.end()}),
                   AtomSet::from_atoms({m.atoms().atoms().begin(), m.atoms().atoms().end()}));
}

inline bool densities_equal(const PiecewiseConstantDensity& a, const PiecewiseConstantDensity& b) {
    if (a.cell_count() != b.cell_count()) return false;
    auto ba = a.breakpoints(), bb = b.breakpoints();
    for (std::size_t i = 0; i < ba.size(); ++i) {
        if (std::abs(ba[i] - bb[i]) > kGeomTol) return false;
    }
    auto va = a.values(), vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i) {
        if (!values_close(va[i], vb[i])) return false;
    }
    return true;
}

inline bool atoms_equal(const AtomSet& a, const AtomSet& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Atom& l = a.atoms()[i];
        const Atom& r = b.atoms()[i];
        if (std::abs(l.x - r.x) > kGeomTol || !values_close(l.mass, r.mass)) return false;
    }
    return true;
}

/// Field-by-field comparison of canonical forms. Positions agree to
/// kGeomTol, values and masses to kValueRelTol.
inline bool measures_equal(const Measure& a, const Measure& b) {
    return densities_equal(a.density(), b.density()) && atoms_equal(a.atoms(), b.atoms());
}

/// Pointwise sum of two densities on their common refinement.
inline PiecewiseConstantDensity operator+(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g) {
    auto fb = f.breakpoints(), gb = g.breakpoints();
    std::vector<double> pts = merge_points({fb.begin(), fb.end()}, {gb.begin(), gb.end()});
    std::vector<double> vals;
    vals.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double mid = 0.5 * (pts[i] + pts[i + 1]);
        vals.push_back(f(mid) + g(mid));
    }
    return PiecewiseConstantDensity::from_cells(std::move(pts), std::move(vals));
}

inline Measure operator+(const Measure& a, const Measure& b) {
    std::vector<Atom> atoms(a.atoms().atoms().begin(), a.atoms().atoms().end());
    atoms.insert(atoms.end(), b.atoms().atoms().begin(), b.atoms().atoms().end());
    return Measure(a.density() + b.density(), AtomSet::from_atoms(std::move(atoms)));
}

}  // namespace polarsym
