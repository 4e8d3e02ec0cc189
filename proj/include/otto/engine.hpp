// engine.hpp
// One two-stroke three-level engine unit in periodic steady state, with
// optional coherence extraction (CE) into an acceptor particle and coherence
// injection (CI) from a donor particle, plus the per-cycle entropy ledger.

#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "otto/error.hpp"
#include "otto/qutrit.hpp"
#include "otto/thermal.hpp"

namespace otto {

inline constexpr double kPopulationMatchTol = 1e-9;
inline constexpr double kZeroWorkTol = 1e-14;

struct EngineUnit {
    LevelStructure levels;
    BathPair baths;
    double delta_theta = std::numbers::pi / 8;

    void validate() const {
        levels.validate();
        baths.validate();
        // A zero angle is accepted as the trivial do-nothing cycle.
        if (!(delta_theta >= 0.0) || delta_theta > std::numbers::pi + 1e-12) {
            fail(ErrorKind::InvalidArgument, "delta_theta must lie in [0, pi]");
        }
    }
};

/// Per-cycle bookkeeping. Work is energy extracted from the system; heats are
/// bath -> system; entropies in nats.
struct CycleLedger {
    double w = 0.0;
    double q_c = 0.0;
    double q_h = 0.0;
    double ds_baths = 0.0;
    double ds_acpt = 0.0;
    double ds_dnr = 0.0;
    double ds_tot = 0.0;
    double c_extracted = 0.0;
    double c_injected = 0.0;
};

/// Work stroke: the rotated state and the energy extracted by the drive.
struct WorkStroke {
    DensityMatrix3 rho_w;
    double w = 0.0;
};

inline WorkStroke work_stroke(const DensityMatrix3& rho, const LevelStructure& levels, double delta_theta) {
    const Matrix3c delta = work_unitary_increment(rho, delta_theta);
    const double energy_gain = levels.delta_e_c * delta(1, 1).real() + levels.delta_e_h * delta(2, 2).real();
    return {DensityMatrix3(rho.matrix() + delta), -energy_gain};
}

/// Result of a full swap between the engine particle and a partner particle.
struct SwapResult {
    DensityMatrix3 engine;
    DensityMatrix3 partner;
    double ds_partner = 0.0;  ///< entropy change of the external partner
};

namespace detail {

inline bool populations_match(const ProbVector3& a, const ProbVector3& b, double tol) {
    const auto pa = a.as_array();
    const auto pb = b.as_array();
    for (std::size_t j = 0; j < 3; ++j) {
        const double scale = std::max(std::abs(pa[j]), std::abs(pb[j]));
        if (std::abs(pa[j] - pb[j]) > tol * scale + 1e-15) return false;
    }
    return true;
}

inline void require_matching_populations(const DensityMatrix3& a, const DensityMatrix3& b, double tol,
                                         const char* what) {
    if (!populations_match(a.populations(), b.populations(), tol)) {
        const ProbVector3 pa = a.populations();
        const ProbVector3 pb = b.populations();
        fail(ErrorKind::PopulationMismatch,
             std::string(what) + ": (" + std::to_string(pa.p1) + ", " + std::to_string(pa.p2) + ", " +
                 std::to_string(pa.p3) + ") vs (" + std::to_string(pb.p1) + ", " + std::to_string(pb.p2) + ", " +
                 std::to_string(pb.p3) + ")");
    }
}

}  // namespace detail

/// CE: swap the engine with a diagonal acceptor of identical populations.
/// The acceptor's entropy drops by C(engine).
inline SwapResult coherence_extract(const DensityMatrix3& engine, const DensityMatrix3& acceptor,
                                    double tol = kPopulationMatchTol) {
    if (!acceptor.is_diagonal()) fail(ErrorKind::InvalidAcceptor, "acceptor carries coherence");
    detail::require_matching_populations(engine, acceptor, tol, "acceptor populations differ from engine");
    return {acceptor, engine, -coherence_measure(engine)};
}

/// CI: swap a diagonal engine with a coherent donor of identical populations.
/// The donor's entropy rises by C(donor).
inline SwapResult coherence_inject(const DensityMatrix3& engine, const DensityMatrix3& donor,
                                   double tol = kPopulationMatchTol) {
    if (!engine.is_diagonal()) fail(ErrorKind::InvalidAcceptor, "engine must be diagonal before injection");
    detail::require_matching_populations(engine, donor, tol, "donor populations differ from engine");
    return {donor, engine, coherence_measure(donor)};
}

namespace mode {
struct Bare {};
struct WithCe {};
struct WithCeCi {
    DensityMatrix3 donor;
};
}  // namespace mode

using CycleMode = std::variant<mode::Bare, mode::WithCe, mode::WithCeCi>;

/// Ledger plus the states visited, for callers that need p_w or rho_w.
struct CycleTrace {
    CycleLedger ledger;
    ProbVector3 p_eq;
    DensityMatrix3 rho_start;  ///< state entering the work stroke
    DensityMatrix3 rho_w;      ///< state right after the work stroke
};

/// Executes [CI] -> rotation -> [CE into dephase(rho_w)] -> thermal stroke,
/// starting from the thermal fixed point.
inline CycleTrace run_cycle_traced(const EngineUnit& unit, const CycleMode& cycle_mode) {
    unit.validate();
    const ProbVector3 p_eq = gibbs_steady_state(unit.levels, unit.baths);
    DensityMatrix3 engine = DensityMatrix3::diagonal(p_eq);
    CycleLedger ledger;

    const bool extract = !std::holds_alternative<mode::Bare>(cycle_mode);
    if (const auto* ci = std::get_if<mode::WithCeCi>(&cycle_mode)) {
        SwapResult swap = coherence_inject(engine, ci->donor);
        engine = swap.engine;
        ledger.ds_dnr = swap.ds_partner;
        ledger.c_injected = swap.ds_partner;
    }

    const DensityMatrix3 rho_start = engine;
    const auto [rho_w, w] = work_stroke(engine, unit.levels, unit.delta_theta);
    ledger.w = w;
    engine = rho_w;

    if (extract) {
        SwapResult swap = coherence_extract(rho_w, dephase(rho_w));
        engine = swap.engine;
        ledger.ds_acpt = swap.ds_partner;
        ledger.c_extracted = -swap.ds_partner;
    }

    const auto [thermal, heat] = thermal_stroke(engine, unit.levels, unit.baths);
    ledger.q_c = heat.q_c;
    ledger.q_h = heat.q_h;
    ledger.ds_baths = heat.ds_baths;
    ledger.ds_tot = ledger.ds_baths + ledger.ds_acpt + ledger.ds_dnr;
    return {ledger, p_eq, rho_start, rho_w};
}

inline CycleLedger run_cycle(const EngineUnit& unit, const CycleMode& cycle_mode = mode::Bare{}) {
    return run_cycle_traced(unit, cycle_mode).ledger;
}

/// Donor with the populations `p` and a fraction of the maximal y coherence
/// allowed by positivity (fraction 1 gives a pure {2,3} block).
inline DensityMatrix3 matched_donor(const ProbVector3& p, double coherence_fraction) {
    if (coherence_fraction < 0.0 || coherence_fraction > 1.0) {
        fail(ErrorKind::InvalidArgument, "coherence fraction must lie in [0, 1]");
    }
    const double s = p.p2 + p.p3;
    const double z = p.p3 - p.p2;
    const double y_max = std::sqrt(std::max(s * s - z * z, 0.0));
    return from_bloch(p.p1, {coherence_fraction * y_max, z}, s);
}

/// Single-temperature engine driven by injected coherence alone.
inline CycleLedger run_cycle_no_inversion(const EngineUnit& unit, const DensityMatrix3& donor) {
    unit.validate();
    const double t = std::max(unit.baths.t_c, unit.baths.t_h);
    if (std::abs(unit.baths.t_c - unit.baths.t_h) > 1e-12 * t) {
        fail(ErrorKind::InvalidArgument, "no-inversion engine requires t_c == t_h");
    }
    return run_cycle(unit, mode::WithCeCi{donor});
}

/// Entropy pollution: total entropy produced per unit of extracted work.
inline double entropy_pollution(const CycleLedger& ledger) {
    if (std::abs(ledger.w) <= kZeroWorkTol) fail(ErrorKind::ZeroWork, "entropy pollution undefined for zero work");
    return ledger.ds_tot / ledger.w;
}

/// EP of an engine without CE or CI: (1/T_c)(eta_c - eta)/eta.
inline double ep_closed_form_no_ce(const LevelStructure& levels, const BathPair& baths) {
    baths.validate();
    if (!(levels.delta_e_c > 0.0) || !(levels.delta_e_h > levels.delta_e_c)) {
        fail(ErrorKind::NotAnEngine, "Otto efficiency is not positive");
    }
    const double eta = efficiency(levels);
    const double eta_c = carnot_efficiency(baths);
    if (eta > eta_c + 1e-15) {
        fail(ErrorKind::NotAnEngine, "efficiency exceeds Carnot: the baths produce no population inversion");
    }
    return (eta_c - eta) / (eta * baths.t_c);
}

struct SplitPoint {
    int n = 1;
    double delta_theta = 0.0;  ///< rotation per split cycle
    double w_cycle = 0.0;      ///< work per split cycle
    double ds_cycle = 0.0;     ///< total entropy per split cycle (with CE)
    double ep_ce = 0.0;        ///< N * ds_cycle / W_0
    double ep_bare = 0.0;      ///< same split without CE
};

/// Rotation angle whose inversion change is 1/n of that produced by `delta_theta`.
inline double split_angle(double delta_theta, int n) {
    return 2.0 * std::asin(std::sin(0.5 * delta_theta) / std::sqrt(static_cast<double>(n)));
}

/// Splits the unit's per-cycle population change into N smaller cycles at
/// fixed total work W_0, for every N in [1, n_splits].
inline std::vector<SplitPoint> split_cycle_experiment(const EngineUnit& unit, int n_splits) {
    if (n_splits < 1) fail(ErrorKind::InvalidArgument, "n_splits must be at least 1");
    unit.validate();
    const double w0 = run_cycle(unit, mode::WithCe{}).w;
    if (std::abs(w0) <= kZeroWorkTol) fail(ErrorKind::ZeroWork, "reference cycle produces no work");

    std::vector<SplitPoint> out;
    out.reserve(static_cast<std::size_t>(n_splits));
    for (int n = 1; n <= n_splits; ++n) {
        EngineUnit split = unit;
        split.delta_theta = split_angle(unit.delta_theta, n);
        const CycleLedger with_ce = run_cycle(split, mode::WithCe{});
        const CycleLedger bare = run_cycle(split, mode::Bare{});
        out.push_back({n, split.delta_theta, with_ce.w, with_ce.ds_tot, n * with_ce.ds_tot / w0,
                       n * bare.ds_tot / w0});
    }
    return out;
}

}  // namespace otto
