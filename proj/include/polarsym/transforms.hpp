#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "core.hpp"
#include "measure.hpp"
#include "rearrange.hpp"

namespace polarsym {

/// mu# = f# d lambda + M delta_0, M the total atomic mass.
inline Measure symmetrize_measure(const Measure& m) {
    double mass = m.atoms().total_mass();
    AtomSet atoms = mass > 0.0 ? AtomSet::from_atoms({{0.0, mass}}) : AtomSet{};
    return Measure(sdr(m.density()), std::move(atoms));
}

namespace detail {

// Atomic polarization for b in (0, pi). Atoms right of b ("far") are paired
// with the atom at their reflection 2b - x, if any; the near position takes
// the larger mass, the far position the smaller. An unpaired far atom moves
// to its reflection. Near atoms whose reflection leaves (-pi, pi) are kept.
inline AtomSet polarize_atoms_positive(const AtomSet& atoms, double b) {
    std::vector<Atom> near, far, out;
    for (const Atom& a : atoms.atoms()) {
        if (a.x > b + kGeomTol) {
            far.push_back(a);
        } else if (a.x < b - kGeomTol) {
            near.push_back(a);
        } else {
            out.push_back(a);  // reflection fixes b
        }
    }
    std::vector<bool> near_used(near.size(), false);
    for (const Atom& a : far) {
        double reflected = 2.0 * b - a.x;
        auto it = std::lower_bound(near.begin(), near.end(), reflected,
                                   [](const Atom& l, double x) { return l.x < x; });
        std::size_t match = near.size();
        double best = kGeomTol;
        for (auto cand : {it, it == near.begin() ? it : std::prev(it)}) {
            if (cand == near.end()) continue;
            auto idx = static_cast<std::size_t>(cand - near.begin());
            double gap = std::abs(cand->x - reflected);
            if (!near_used[idx] && gap <= best) {
                best = gap;
                match = idx;
            }
        }
        if (match == near.size()) {
            out.push_back({reflected, a.mass});
            continue;
        }
        near_used[match] = true;
        Atom& partner = near[match];
        out.push_back({a.x, std::min(a.mass, partner.mass)});
        partner.mass = std::max(a.mass, partner.mass);
    }
    out.insert(out.end(), near.begin(), near.end());
    return AtomSet::from_atoms(std::move(out));
}

}  // namespace detail

/// Polarization of the atomic part alone.
inline AtomSet polarize_atoms(const AtomSet& atoms, double b) {
    detail::require_pivot(b);
    if (b > 0.0) return detail::polarize_atoms_positive(atoms, b);
    return detail::polarize_atoms_positive(atoms.mirrored(), -b).mirrored();
}

/// mu_H = nu_H + delta_H.
inline Measure polarize_measure(const Measure& m, double b) {
    detail::require_pivot(b);
    return Measure(polarize_density(m.density(), b), polarize_atoms(m.atoms(), b));
}

inline bool is_symmetrized(const Measure& m) { return measures_equal(m, symmetrize_measure(m)); }

}  // namespace polarsym
