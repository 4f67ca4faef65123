#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "measure.hpp"
#include "quadrature.hpp"

namespace polarsym {

/// Dirichlet Green's kernel on [-pi, pi]^2: -xy/(2 pi) - |x - y|/2 + pi/2.
inline double green_eval(double x, double y) {
    require_in_domain(x, "x");
    require_in_domain(y, "y");
    double g = -x * y / kTwoPi - 0.5 * std::abs(x - y) + 0.5 * kPi;
    return std::max(g, 0.0);
}

/// Closed form of the integral of G(x, y) dy over [a, b].
inline double cell_integral(double x, double a, double b) {
    require_in_domain(x, "x");
    if (!(a >= -kPi && b <= kPi && a <= b)) {
        throw Error(Errc::domain, "cell_integral needs -pi <= a <= b <= pi");
    }
    if (std::abs(x) == kPi || a == b) return 0.0;
    double abs_part;
    if (x <= a) {
        abs_part = 0.5 * ((b - x) * (b - x) - (a - x) * (a - x));
    } else if (x >= b) {
        abs_part = 0.5 * ((x - a) * (x - a) - (x - b) * (x - b));
    } else {
        abs_part = 0.5 * ((x - a) * (x - a) + (b - x) * (b - x));
    }
    double value = -x * (b * b - a * a) / (2.0 * kTwoPi) - 0.5 * abs_part + 0.5 * kPi * (b - a);
    return std::max(value, 0.0);
}

/// Exact u_mu as quadratic pieces u(x) = c0 + c1 x + c2 x^2.
class Solution {
public:
    using Coeffs = std::array<double, 3>;

    Solution(Measure source, std::vector<double> breakpoints, std::vector<Coeffs> coeffs)
        : source_(std::move(source)), breakpoints_(std::move(breakpoints)), coeffs_(std::move(coeffs)) {}

    const Measure& source() const noexcept { return source_; }
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    std::span<const Coeffs> coeffs() const noexcept { return coeffs_; }
    std::size_t piece_count() const noexcept { return coeffs_.size(); }

    static double eval_piece(const Coeffs& c, double x) { return c[0] + x * (c[1] + x * c[2]); }

    double operator()(double x) const {
        require_in_domain(x, "x");
        if (std::abs(x) == kPi) return 0.0;
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
        std::size_t piece = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
        piece = std::min(piece, coeffs_.size() - 1);
        return eval_piece(coeffs_[piece], x);
    }

private:
    Measure source_;
    std::vector<double> breakpoints_;
    std::vector<Coeffs> coeffs_;
};

/// u_mu(x) = integral of G(x, y) d mu(y), accumulated per density cell and
/// per atom in closed form.
inline Solution solve(const Measure& m) {
    const auto& f = m.density();
    auto fb = f.breakpoints();
    auto fv = f.values();
    auto atoms = m.atoms().atoms();

    std::vector<double> pts(fb.begin(), fb.end());
    for (const Atom& a : atoms) pts.push_back(a.x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // Running sums over density cells / atoms strictly left of the current
    // piece; right-hand sums are accumulated in a reverse pass.
    const std::size_t n_pieces = pts.size() - 1;
    std::vector<Solution::Coeffs> coeffs(n_pieces, Solution::Coeffs{0.0, 0.0, 0.0});

    // Density: left cells behave like y < x, right cells like y > x.
    {
        std::vector<std::size_t> cell_of(n_pieces);
        std::size_t cell = 0;
        for (std::size_t k = 0; k < n_pieces; ++k) {
            while (fb[cell + 1] <= pts[k]) ++cell;
            cell_of[k] = cell;
        }
        auto cell_terms = [&](std::size_t j) {
            double a = fb[j], b = fb[j + 1];
            return std::pair{fv[j] * (b * b - a * a), fv[j] * (b - a)};
        };
        double left_d = 0.0, left_w = 0.0;
        std::size_t next_left = 0;
        for (std::size_t k = 0; k < n_pieces; ++k) {
            while (next_left < cell_of[k]) {
                auto [d, w] = cell_terms(next_left++);
                left_d += d;
                left_w += w;
            }
            coeffs[k][1] += -left_d / (2.0 * kTwoPi) - 0.5 * left_w;
            coeffs[k][0] += 0.25 * left_d + 0.5 * kPi * left_w;
        }
        double right_d = 0.0, right_w = 0.0;
        std::size_t next_right = f.cell_count();
        for (std::size_t k = n_pieces; k-- > 0;) {
            while (next_right > cell_of[k] + 1) {
                auto [d, w] = cell_terms(--next_right);
                right_d += d;
                right_w += w;
            }
            std::size_t c = cell_of[k];
            double a = fb[c], b = fb[c + 1], v = fv[c];
            coeffs[k][2] += -0.5 * v;
            coeffs[k][1] += -right_d / (2.0 * kTwoPi) + 0.5 * right_w - v * (b * b - a * a) / (2.0 * kTwoPi) +
                            0.5 * v * (a + b);
            coeffs[k][0] += -0.25 * right_d + 0.5 * kPi * right_w + v * (-0.25 * (a * a + b * b) + 0.5 * kPi * (b - a));
        }
    }

    // Atoms: a G(x, x_i) is linear on each side of x_i.
    {
        double left_slope = 0.0, left_icpt = 0.0;
        std::size_t i = 0;
        for (std::size_t k = 0; k < n_pieces; ++k) {
            while (i < atoms.size() && atoms[i].x <= pts[k]) {
                left_slope += atoms[i].mass * (-0.5 - atoms[i].x / kTwoPi);
                left_icpt += atoms[i].mass * 0.5 * (kPi + atoms[i].x);
                ++i;
            }
            coeffs[k][1] += left_slope;
            coeffs[k][0] += left_icpt;
        }
        double right_slope = 0.0, right_icpt = 0.0;
        std::size_t j = atoms.size();
        for (std::size_t k = n_pieces; k-- > 0;) {
            while (j > 0 && atoms[j - 1].x >= pts[k + 1]) {
                --j;
                right_slope += atoms[j].mass * (0.5 - atoms[j].x / kTwoPi);
                right_icpt += atoms[j].mass * 0.5 * (kPi - atoms[j].x);
            }
            coeffs[k][1] += right_slope;
            coeffs[k][0] += right_icpt;
        }
    }

    return Solution(m, std::move(pts), std::move(coeffs));
}

inline double eval(const Solution& s, double x) { return s(x); }

struct SolutionMax {
    double x = 0.0;
    double value = 0.0;
};

/// Exact maximum: vertex or endpoint of each quadratic piece.
inline SolutionMax solution_max(const Solution& s) {
    SolutionMax best{0.0, -std::numeric_limits<double>::infinity()};
    auto bp = s.breakpoints();
    auto cs = s.coeffs();
    auto consider = [&](double x, double value) {
        if (value > best.value) best = {x, value};
    };
    for (std::size_t k = 0; k < cs.size(); ++k) {
        double lo = bp[k], hi = bp[k + 1];
        consider(lo, std::abs(lo) == kPi ? 0.0 : Solution::eval_piece(cs[k], lo));
        if (cs[k][2] < 0.0) {
            double vertex = -cs[k][1] / (2.0 * cs[k][2]);
            if (vertex > lo && vertex < hi) consider(vertex, Solution::eval_piece(cs[k], vertex));
        }
        consider(hi, std::abs(hi) == kPi ? 0.0 : Solution::eval_piece(cs[k], hi));
    }
    return best;
}

/// max u - min u; the minimum over [-pi, pi] is the boundary value 0.
inline double oscillation(const Solution& s) {
    double lowest = 0.0;
    for (double x : s.breakpoints()) lowest = std::min(lowest, s(x));
    return solution_max(s).value - lowest;
}

/// Convex increasing scalar map with the points where it is not smooth.
struct ConvexIncreasing {
    std::string name;
    std::function<double(double)> fn;
    std::vector<double> kinks;
    bool strictly_increasing = false;  // on [0, inf)
    bool strictly_convex = false;

    double operator()(double s) const { return fn(s); }
};

inline std::string format_param(double p) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
}

/// (max(s, 0))^p, p >= 1.
inline ConvexIncreasing relu_pow(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(Errc::invalid_exponent, "relu_pow needs p >= 1");
    std::function<double(double)> fn;
    if (p == 1.0) {
        fn = [](double s) { return s > 0.0 ? s : 0.0; };
    } else if (p == 2.0) {
        fn = [](double s) { return s > 0.0 ? s * s : 0.0; };
    } else {
        fn = [p](double s) { return s > 0.0 ? std::pow(s, p) : 0.0; };
    }
    return {"relu_pow(" + format_param(p) + ")", std::move(fn), {0.0}, true, p > 1.0};
}

/// max(s - t, 0).
inline ConvexIncreasing shifted_plus(double t) {
    return {"shifted_plus(" + format_param(t) + ")", [t](double s) { return s > t ? s - t : 0.0; }, {t}, false,
            false};
}

/// exp(k s), k > 0.
inline ConvexIncreasing exp_scaled(double k) {
    if (!(k > 0.0) || !std::isfinite(k)) throw Error(Errc::invalid_argument, "exp_scaled needs k > 0");
    return {"exp_scaled(" + format_param(k) + ")", [k](double s) { return std::exp(k * s); }, {}, true, true};
}

inline ConvexIncreasing phi_zero() { return {"zero", [](double) { return 0.0; }, {}, false, false}; }

namespace detail {

// Roots of c0 + c1 x + c2 x^2 = level strictly inside (lo, hi).
inline void roots_inside(const Solution::Coeffs& c, double level, double lo, double hi, std::vector<double>& out) {
    double a = c[2], b = c[1], cc = c[0] - level;
    auto push = [&](double r) {
        if (r > lo + kGeomTol && r < hi - kGeomTol) out.push_back(r);
    };
    if (a == 0.0) {
        if (b != 0.0) push(-cc / b);
        return;
    }
    double disc = b * b - 4.0 * a * cc;
    if (disc < 0.0) return;
    double sq = std::sqrt(disc);
    double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
    if (q != 0.0) {
        push(q / a);
        push(cc / q);
    } else {
        push(0.0);
    }
}

// Geometric grading toward an endpoint where the integrand may lose smoothness.
inline constexpr int kGradingLevels = 14;
inline constexpr double kGradingRatio = 0.2;

template <class F>
double integrate_graded(F&& fn, double lo, double hi, bool grade_lo, bool grade_hi) {
    if (grade_lo && grade_hi) {
        double mid = 0.5 * (lo + hi);
        return integrate_graded(fn, lo, mid, true, false) + integrate_graded(fn, mid, hi, false, true);
    }
    if (!grade_lo && !grade_hi) return quadrature::integrate<16>(fn, lo, hi);
    double len = hi - lo;
    double sum = 0.0;
    double outer = 1.0;
    for (int j = 0; j < kGradingLevels; ++j) {
        double inner = outer * kGradingRatio;
        double a = grade_lo ? lo + len * inner : hi - len * outer;
        double b = grade_lo ? lo + len * outer : hi - len * inner;
        sum += quadrature::integrate<16>(fn, a, b);
        outer = inner;
    }
    double a = grade_lo ? lo : hi - len * outer;
    double b = grade_lo ? lo + len * outer : hi;
    return sum + quadrature::integrate<16>(fn, a, b);
}

}  // namespace detail

/// Integral of phi(u(x)) over [-pi, pi]. Each quadratic piece is cut into
/// sub-intervals of width at most pi/16 and at the level crossings u = kink;
/// every sub-interval gets the 16-point Gauss-Legendre rule, graded toward
/// endpoints sitting on a kink.
inline double convex_mean(const Solution& s, const ConvexIncreasing& phi) {
    if (s.piece_count() == 0) throw Error(Errc::quadrature, "solution has no pieces");
    constexpr double max_width = kPi / 16.0;
    auto bp = s.breakpoints();
    auto cs = s.coeffs();
    double total = 0.0;
    std::vector<double> cuts;
    for (std::size_t k = 0; k < cs.size(); ++k) {
        const auto& c = cs[k];
        double lo = bp[k], hi = bp[k + 1];
        cuts.assign({lo, hi});
        auto n_uniform = static_cast<std::size_t>(std::ceil((hi - lo) / max_width));
        for (std::size_t i = 1; i < n_uniform; ++i) cuts.push_back(lo + (hi - lo) * static_cast<double>(i) / n_uniform);
        std::vector<double> kink_roots;
        for (double level : phi.kinks) detail::roots_inside(c, level, lo, hi, kink_roots);
        cuts.insert(cuts.end(), kink_roots.begin(), kink_roots.end());
        std::sort(cuts.begin(), cuts.end());

        auto on_kink = [&](double x) {
            if (std::find(kink_roots.begin(), kink_roots.end(), x) != kink_roots.end()) return true;
            if (std::abs(x) == kPi) {
                for (double level : phi.kinks) {
                    if (level == 0.0) return true;
                }
            }
            return false;
        };
        auto integrand = [&](double x) { return phi(Solution::eval_piece(c, x)); };
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            double a = cuts[i], b = cuts[i + 1];
            if (!(b > a)) continue;
            total += detail::integrate_graded(integrand, a, b, on_kink(a), on_kink(b));
        }
    }
    return total;
}

/// ||u||_p for p in [1, inf]; p = inf is the exact maximum.
inline double lp_norm(const Solution& s, double p) {
    if (std::isnan(p) || p < 1.0) throw Error(Errc::invalid_exponent, "p must lie in [1, inf]");
    if (std::isinf(p)) return solution_max(s).value;
    double integral = convex_mean(s, relu_pow(p));
    return p == 1.0 ? integral : std::pow(integral, 1.0 / p);
}

/// Integral of (pi^2 - y^2)/2 d mu(y), which equals ||u_mu||_1 by Fubini.
inline double l1_identity(const Measure& m) {
    const auto& f = m.density();
    auto fb = f.breakpoints();
    auto fv = f.values();
    const double pi2 = kPi * kPi;
    double total = 0.0;
    for (std::size_t j = 0; j < fv.size(); ++j) {
        double a = fb[j], b = fb[j + 1];
        total += fv[j] * 0.5 * (pi2 * (b - a) - (b * b * b - a * a * a) / 3.0);
    }
    for (const Atom& a : m.atoms().atoms()) total += a.mass * 0.5 * (pi2 - a.x * a.x);
    return total;
}

}  // namespace polarsym
