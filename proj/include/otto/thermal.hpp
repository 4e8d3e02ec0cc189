// thermal.hpp
// Gibbs steady states of the two-bath three-level unit, the inverse map from
// populations to bath temperatures, and the over-thermalizing bath stroke.

#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "otto/error.hpp"
#include "otto/qutrit.hpp"

namespace otto {

/// Energy gaps above the ground level (E_1 = 0).
struct LevelStructure {
    double delta_e_c = 1.0;  ///< level 1 -> 2, coupled to the cold bath
    double delta_e_h = 2.0;  ///< level 1 -> 3, coupled to the hot bath

    void validate() const {
        if (!(delta_e_c > 0.0) || !(delta_e_h > 0.0) || !std::isfinite(delta_e_c) || !std::isfinite(delta_e_h)) {
            fail(ErrorKind::InvalidArgument, "energy gaps must be positive and finite");
        }
        if (!(delta_e_c < delta_e_h)) {
            fail(ErrorKind::InvalidArgument, "engine convention requires delta_e_c < delta_e_h");
        }
    }

    /// Energy of a state, tr(H0 rho).
    double energy(const ProbVector3& p) const { return delta_e_c * p.p2 + delta_e_h * p.p3; }
    double energy(const DensityMatrix3& rho) const { return energy(rho.populations()); }
};

struct BathPair {
    double t_c = 0.5;
    double t_h = 5.0;

    void validate() const {
        if (!(t_c > 0.0) || !(t_h > 0.0) || !std::isfinite(t_c) || !std::isfinite(t_h)) {
            fail(ErrorKind::InvalidArgument, "bath temperatures must be positive and finite");
        }
    }
};

/// Heat drawn from each bath during one thermal stroke. Positive heat flows
/// from the bath into the system.
struct HeatLedger {
    double q_c = 0.0;
    double q_h = 0.0;
    double ds_baths = 0.0;
};

inline ProbVector3 gibbs_steady_state(const LevelStructure& levels, const BathPair& baths) {
    levels.validate();
    baths.validate();
    const double w2 = std::exp(-levels.delta_e_c / baths.t_c);
    const double w3 = std::exp(-levels.delta_e_h / baths.t_h);
    const double z = 1.0 + w2 + w3;
    return {1.0 / z, w2 / z, w3 / z};
}

/// Bath temperatures whose joint fixed point has populations `p`.
inline BathPair temperatures_from_populations(const LevelStructure& levels, const ProbVector3& p) {
    levels.validate();
    if (!p.is_valid()) fail(ErrorKind::InvalidState, "populations are not a probability vector");
    if (!(p.p2 < p.p1) || !(p.p3 < p.p1)) {
        fail(ErrorKind::NegativeTemperatureRequired,
             "excited population reaches the ground population (p1=" + std::to_string(p.p1) +
                 ", p2=" + std::to_string(p.p2) + ", p3=" + std::to_string(p.p3) + ")");
    }
    if (!(p.p2 > 0.0) || !(p.p3 > 0.0)) {
        fail(ErrorKind::InvalidState, "zero excited population needs a zero temperature");
    }
    return {levels.delta_e_c / std::log(p.p1 / p.p2), levels.delta_e_h / std::log(p.p1 / p.p3)};
}

/// Bath entropy change for given heats under weak coupling, -Q_h/T_h - Q_c/T_c.
inline double bath_entropy(double q_c, double q_h, const BathPair& baths) {
    return -q_h / baths.t_h - q_c / baths.t_c;
}

/// Over-thermalization: the state is projected onto the Gibbs fixed point.
/// Each bath exchanges its gap times the population change of its own
/// excited level; coherence is erased with no heat attached.
inline std::pair<DensityMatrix3, HeatLedger> thermal_stroke(const DensityMatrix3& rho, const LevelStructure& levels,
                                                            const BathPair& baths) {
    const ProbVector3 eq = gibbs_steady_state(levels, baths);
    const ProbVector3 before = rho.populations();
    HeatLedger heat;
    heat.q_c = levels.delta_e_c * (eq.p2 - before.p2);
    heat.q_h = levels.delta_e_h * (eq.p3 - before.p3);
    heat.ds_baths = bath_entropy(heat.q_c, heat.q_h, baths);
    return {DensityMatrix3::diagonal(eq), heat};
}

/// Otto efficiency 1 - dE_c/dE_h.
inline double efficiency(const LevelStructure& levels) {
    levels.validate();
    return 1.0 - levels.delta_e_c / levels.delta_e_h;
}

inline double carnot_efficiency(const BathPair& baths) {
    baths.validate();
    return 1.0 - baths.t_c / baths.t_h;
}

}  // namespace otto
