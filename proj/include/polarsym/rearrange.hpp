#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

#include "core.hpp"
#include "green.hpp"
#include "measure.hpp"
#include "random.hpp"

namespace polarsym {

/// Non-increasing step function on [0, 2 pi].
struct DecreasingProfile {
    std::vector<double> breakpoints;  // 0 = s_0 < s_1 < ... < s_K = 2 pi
    std::vector<double> values;       // strictly decreasing

    double operator()(double s) const {
        if (s < 0.0 || s > kTwoPi) return 0.0;
        auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), s);
        std::size_t cell = it == breakpoints.begin() ? 0 : static_cast<std::size_t>(it - breakpoints.begin()) - 1;
        return values[std::min(cell, values.size() - 1)];
    }
};

/// Piecewise-linear, concave, non-decreasing map on [0, 2 pi] with value 0 at 0.
struct StarFunction {
    std::vector<double> nodes;
    std::vector<double> values;

    double operator()(double t) const {
        if (t <= nodes.front()) return values.front();
        if (t >= nodes.back()) return values.back();
        auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
        std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
        double w = (t - nodes[i]) / (nodes[i + 1] - nodes[i]);
        return values[i] + w * (values[i + 1] - values[i]);
    }
};

/// f*: cells sorted by value (descending), equal values pooled, laid out from 0.
inline DecreasingProfile decreasing_rearrangement(const PiecewiseConstantDensity& f) {
    std::vector<std::pair<double, double>> cells;  // (value, width)
    for (std::size_t i = 0; i < f.cell_count(); ++i) cells.emplace_back(f.values()[i], f.width(i));
    std::stable_sort(cells.begin(), cells.end(), [](const auto& l, const auto& r) { return l.first > r.first; });

    DecreasingProfile out;
    out.breakpoints.push_back(0.0);
    double cumulative = 0.0;
    for (const auto& [value, width] : cells) {
        cumulative += width;
        if (!out.values.empty() && out.values.back() == value) {
            out.breakpoints.back() = cumulative;
        } else {
            out.values.push_back(value);
            out.breakpoints.push_back(cumulative);
        }
    }
    out.breakpoints.back() = kTwoPi;
    return out;
}

/// f#(t) = f*(2|t|).
inline PiecewiseConstantDensity sdr(const PiecewiseConstantDensity& f) {
    DecreasingProfile profile = decreasing_rearrangement(f);
    const std::size_t k = profile.values.size();
    std::vector<double> bp;
    std::vector<double> vals;
    bp.reserve(2 * k);
    vals.reserve(2 * k - 1);
    for (std::size_t i = k; i > 0; --i) bp.push_back(-0.5 * profile.breakpoints[i]);
    for (std::size_t i = k; i-- > 1;) vals.push_back(profile.values[i]);
    vals.push_back(profile.values[0]);
    for (std::size_t i = 1; i <= k; ++i) bp.push_back(0.5 * profile.breakpoints[i]);
    for (std::size_t i = 1; i < k; ++i) vals.push_back(profile.values[i]);
    return PiecewiseConstantDensity::from_cells(std::move(bp), std::move(vals));
}

namespace detail {

// Polarization toward zero for a pivot b in (0, pi): identity on
// [-pi, 2b - pi), max over the mirror pair on [2b - pi, b], min on [b, pi].
inline PiecewiseConstantDensity polarize_positive(const PiecewiseConstantDensity& f, double b) {
    const double lo = 2.0 * b - kPi;
    auto fb = f.breakpoints();
    std::vector<double> reflected{b, lo};
    for (double x : fb) {
        if (x >= lo) reflected.push_back(2.0 * b - x);
    }
    std::vector<double> pts = merge_points({fb.begin(), fb.end()}, std::move(reflected));
    pts.erase(std::remove_if(pts.begin(), pts.end(), [](double x) { return x < -kPi || x > kPi; }), pts.end());

    std::vector<double> vals;
    vals.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double m = 0.5 * (pts[i] + pts[i + 1]);
        double here = f(m);
        if (m < lo) {
            vals.push_back(here);
            continue;
        }
        double there = f(2.0 * b - m);
        vals.push_back(m < b ? std::max(here, there) : std::min(here, there));
    }
    return PiecewiseConstantDensity::from_cells(std::move(pts), std::move(vals));
}

inline void require_pivot(double b) {
    if (!(b != 0.0 && std::abs(b) < kPi)) {
        throw Error(Errc::invalid_pivot, "pivot must lie in (-pi, 0) or (0, pi)");
    }
}

}  // namespace detail

/// Polarization of f toward zero with respect to the pivot b. Negative
/// pivots reduce to positive ones through the exact mirror x -> -x.
inline PiecewiseConstantDensity polarize_density(const PiecewiseConstantDensity& f, double b) {
    detail::require_pivot(b);
    if (b > 0.0) return detail::polarize_positive(f, b);
    return detail::polarize_positive(f.mirrored(), -b).mirrored();
}

/// f_star(t) = integral of f* over [0, t].
inline StarFunction star_density(const PiecewiseConstantDensity& f) {
    DecreasingProfile profile = decreasing_rearrangement(f);
    StarFunction out;
    out.nodes = profile.breakpoints;
    out.values.assign(1, 0.0);
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        out.values.push_back(out.values.back() +
                             profile.values[i] * (profile.breakpoints[i + 1] - profile.breakpoints[i]));
    }
    return out;
}

/// Cells of the common refinement of two densities as (width, f, g).
inline std::vector<std::tuple<double, double, double>> common_cells(const PiecewiseConstantDensity& f,
                                                                      const PiecewiseConstantDensity& g) {
    auto fb = f.breakpoints(), gb = g.breakpoints();
    std::vector<double> pts = merge_points({fb.begin(), fb.end()}, {gb.begin(), gb.end()});
    std::vector<std::tuple<double, double, double>> cells;
    cells.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double m = 0.5 * (pts[i] + pts[i + 1]);
        cells.emplace_back(pts[i + 1] - pts[i], f(m), g(m));
    }
    return cells;
}

inline double l1_distance(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g) {
    double total = 0.0;
    for (const auto& [w, fv, gv] : common_cells(f, g)) total += w * std::abs(fv - gv);
    return total;
}

/// Integral of f g over [-pi, pi].
inline double inner_product(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g) {
    double total = 0.0;
    for (const auto& [w, fv, gv] : common_cells(f, g)) total += w * fv * gv;
    return total;
}

/// Lebesgue measure of A_H = B_H u C_H: points y of the half-line containing 0
/// where f and g are ordered oppositely against their reflections 2b - y.
/// Functions vanish outside [-pi, pi].
inline double polarization_disagreement(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g,
                                        double b) {
    detail::require_pivot(b);
    if (b < 0.0) return polarization_disagreement(f.mirrored(), g.mirrored(), -b);
    const double lo = 2.0 * b - kPi;
    auto fb = f.breakpoints(), gb = g.breakpoints();
    std::vector<double> primary(fb.begin(), fb.end());
    primary.insert(primary.end(), gb.begin(), gb.end());
    std::vector<double> reflected{b, lo};
    for (double x : primary) {
        if (x >= lo) reflected.push_back(2.0 * b - x);
    }
    std::vector<double> pts = merge_points(std::move(primary), std::move(reflected));
    double measure = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double m = 0.5 * (pts[i] + pts[i + 1]);
        if (m >= b || m < -kPi || pts[i + 1] > kPi) continue;
        double r = 2.0 * b - m;
        double f_here = f(m), f_there = f(r), g_here = g(m), g_there = g(r);
        bool opposed = (f_here < f_there && g_here > g_there) || (f_here > f_there && g_here < g_there);
        if (opposed) measure += pts[i + 1] - pts[i];
    }
    return measure;
}

/// Two-dimensional Lebesgue measure of {(x, y) : f(x) < f(y), g(x) > g(y)}.
inline double sdr_disagreement(const PiecewiseConstantDensity& f, const PiecewiseConstantDensity& g) {
    auto cells = common_cells(f, g);
    double measure = 0.0;
    for (const auto& [wi, fi, gi] : cells) {
        for (const auto& [wj, fj, gj] : cells) {
            if (fi < fj && gi > gj) measure += wi * wj;
        }
    }
    return measure;
}

/// u_star(t) from uniformly sampled u: cell-midpoint samples sorted in
/// decreasing order and integrated cumulatively.
class SampledStar {
public:
    static constexpr std::size_t kDefaultSamples = 4096;

    explicit SampledStar(const Solution& s, std::size_t samples = kDefaultSamples)
        : step_(kTwoPi / static_cast<double>(samples)) {
        if (samples == 0) throw Error(Errc::invalid_argument, "need at least one sample");
        sorted_.reserve(samples);
        for (std::size_t i = 0; i < samples; ++i) sorted_.push_back(s(-kPi + (static_cast<double>(i) + 0.5) * step_));
        std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
        cumulative_.assign(1, 0.0);
        for (double v : sorted_) cumulative_.push_back(cumulative_.back() + v * step_);
    }

    double operator()(double t) const {
        if (!(t >= 0.0 && t <= kTwoPi)) throw Error(Errc::domain, "t must lie in [0, 2 pi]");
        double cells = t / step_;
        auto whole = static_cast<std::size_t>(cells);
        if (whole >= sorted_.size()) return cumulative_.back();
        return cumulative_[whole] + (cells - static_cast<double>(whole)) * step_ * sorted_[whole];
    }

private:
    double step_;
    std::vector<double> sorted_;
    std::vector<double> cumulative_;
};

inline double star_solution(const Solution& s, double t, std::size_t samples = SampledStar::kDefaultSamples) {
    if (!(t >= 0.0 && t <= kTwoPi)) throw Error(Errc::domain, "t must lie in [0, 2 pi]");
    return SampledStar(s, samples)(t);
}

struct PolarizationStep {
    std::size_t iter = 0;
    double b = 0.0;
    double l1_distance = 0.0;
};

enum class ConvergenceStatus { converged, max_iter_reached, cell_limit, stalled };

struct PolarizationRun {
    std::vector<PolarizationStep> trace;
    PiecewiseConstantDensity final_density;
    PiecewiseConstantDensity target;
    double initial_distance = 0.0;
    ConvergenceStatus status = ConvergenceStatus::converged;

    bool converged() const noexcept { return status == ConvergenceStatus::converged; }

    bool trace_non_increasing() const noexcept {
        double prev = initial_distance;
        for (const auto& step : trace) {
            if (step.l1_distance > prev) return false;
            prev = step.l1_distance;
        }
        return true;
    }
};

struct IterateOptions {
    std::size_t random_pivots = 8;
    std::size_t max_cells = 100000;
    std::size_t max_stalled_rounds = 32;
};

namespace detail {

// Common refinement of a density and its target, with both values per cell.
struct PairedCells {
    std::vector<double> pts;
    std::vector<double> f;
    std::vector<double> h;

    PairedCells(const PiecewiseConstantDensity& fd, const PiecewiseConstantDensity& hd) {
        auto fb = fd.breakpoints(), hb = hd.breakpoints();
        pts = merge_points({fb.begin(), fb.end()}, {hb.begin(), hb.end()});
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double m = 0.5 * (pts[i] + pts[i + 1]);
            f.push_back(fd(m));
            h.push_back(hd(m));
        }
    }
};

// Decrease of the L1 distance to h caused by polarizing f at the pivot
// b in (0, pi). Only mirror pairs (b - d, b + d), 0 <= d <= pi - b, change;
// both sides are walked outward from b in one pass.
inline double polarization_gain(const PairedCells& cells, double b) {
    const auto& pts = cells.pts;
    const double limit = kPi - b;
    auto it = std::upper_bound(pts.begin(), pts.end(), b);
    std::size_t far = static_cast<std::size_t>(it - pts.begin()) - 1;  // pts[far] <= b < pts[far + 1]
    std::size_t near = pts[far] == b ? far - 1 : far;                  // pts[near] < b <= pts[near + 1]
    double gain = 0.0;
    double d = 0.0;
    while (d < limit) {
        double to_near = b - pts[near];
        double to_far = pts[far + 1] - b;
        double next = std::min({to_near, to_far, limit});
        double fn = cells.f[near], hn = cells.h[near];
        double ff = cells.f[far], hf = cells.h[far];
        double before = std::abs(fn - hn) + std::abs(ff - hf);
        double after = std::abs(std::max(fn, ff) - hn) + std::abs(std::min(fn, ff) - hf);
        gain += (next - d) * (before - after);
        d = next;
        if (d >= limit) break;
        if (d == to_far) ++far;
        if (d == to_near) --near;
    }
    return gain;
}

}  // namespace detail

/// Greedy iterated polarization toward f#. Each round scores every candidate
/// pivot (midpoints of pairs of current breakpoints, midpoints of a current
/// and a target breakpoint, and seeded random pivots) by the decrease of the
/// L1 distance it would cause and applies the best one. Ties go to smaller
/// |b|, then smaller b, so evaluation order does not matter.
inline PolarizationRun iterate_polarizations(const PiecewiseConstantDensity& f, double eps, std::size_t max_iter,
                                             std::uint64_t seed, const IterateOptions& opts = {}) {
    if (!(eps > 0.0)) throw Error(Errc::invalid_argument, "eps must be positive");
    PolarizationRun run{{}, f, sdr(f), 0.0, ConvergenceStatus::converged};
    const double scale = std::max(f.integral(), 1.0);
    const double threshold = eps * scale;
    const double min_gain = 1e-14 * scale;
    double dist = l1_distance(f, run.target);
    run.initial_distance = dist;
    Rng rng(seed);
    auto tb = run.target.breakpoints();
    const PiecewiseConstantDensity target_mirror = run.target.mirrored();

    std::size_t iter = 0;
    std::size_t stalled = 0;
    std::vector<double> candidates;
    while (dist > threshold) {
        if (iter >= max_iter) {
            run.status = ConvergenceStatus::max_iter_reached;
            break;
        }
        if (run.final_density.cell_count() > opts.max_cells) {
            run.status = ConvergenceStatus::cell_limit;
            break;
        }
        ++iter;
        auto cb = run.final_density.breakpoints();
        candidates.clear();
        for (std::size_t i = 0; i < cb.size(); ++i) {
            for (std::size_t j = i + 1; j < cb.size(); ++j) candidates.push_back(0.5 * (cb[i] + cb[j]));
            for (double t : tb) candidates.push_back(0.5 * (cb[i] + t));
        }
        for (std::size_t i = 0; i < opts.random_pivots; ++i) candidates.push_back(rng.uniform(-kPi, kPi));
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        const detail::PairedCells cells(run.final_density, run.target);
        const detail::PairedCells mirrored(run.final_density.mirrored(), target_mirror);
        double best_gain = min_gain;
        double best_b = 0.0;
        bool found = false;
        for (double b : candidates) {
            if (std::abs(b) <= kGeomTol || std::abs(b) >= kPi - kGeomTol) continue;
            double gain = b > 0.0 ? detail::polarization_gain(cells, b) : detail::polarization_gain(mirrored, -b);
            bool better = gain > best_gain ||
                          (found && gain == best_gain &&
                           (std::abs(b) < std::abs(best_b) || (std::abs(b) == std::abs(best_b) && b < best_b)));
            if (better) {
                best_gain = gain;
                best_b = b;
                found = true;
            }
        }
        if (!found) {
            if (++stalled >= opts.max_stalled_rounds) {
                run.status = ConvergenceStatus::stalled;
                break;
            }
            continue;
        }
        stalled = 0;
        run.final_density = polarize_density(run.final_density, best_b);
        dist = l1_distance(run.final_density, run.target);
        run.trace.push_back({iter, best_b, dist});
    }
    return run;
}

}  // namespace polarsym
