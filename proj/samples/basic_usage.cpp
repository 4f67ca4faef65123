// Solve for a mixed measure, symmetrize it and compare a few functionals.

#include <cstdio>
#include <limits>

#include "polarsym/polarsym.hpp"

int main() {
    using namespace polarsym;

    auto density = PiecewiseConstantDensity::from_cells({-kPi, -2.0, 0.5, 1.25, kPi}, {0.5, 2.0, 0.0, 1.5});
    auto atoms = AtomSet::from_atoms({{-1.0, 0.5}, {2.0, 1.5}});
    Measure mu(density, atoms);
    Measure sym = symmetrize_measure(mu);

    Solution u = solve(mu);
    Solution u_sym = solve(sym);

    std::printf("total variation   %.12f\n", total_variation(mu));
    std::printf("max u             %.12f at x = %.6f\n", solution_max(u).value, solution_max(u).x);
    std::printf("u#(0)             %.12f\n", u_sym(0.0));
    for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
        std::printf("p = %-4g  |u|_p = %.10f  |u#|_p = %.10f\n", p, lp_norm(u, p), lp_norm(u_sym, p));
    }

    Measure polarized = polarize_measure(mu, 1.0);
    auto phi = relu_pow(2.0);
    std::printf("int u^2: mu %.10f  mu_H %.10f  mu# %.10f\n", convex_mean(u, phi), convex_mean(solve(polarized), phi),
                convex_mean(u_sym, phi));

    auto run = iterate_polarizations(density, 1e-9, 10000, 7);
    std::printf("polarizations to reach f#: %zu (converged: %s)\n", run.trace.size(), run.converged() ? "yes" : "no");
    return run.converged() ? 0 : 1;
}
