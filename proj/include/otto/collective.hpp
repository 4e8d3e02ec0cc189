// collective.hpp
// N engine units chained by coherence swaps: unit i's post-rotation state is
// handed to unit i+1 (CE for i, CI for i+1), so a single traveling state
// accumulates the collective rotation Omega = N * delta_theta while every
// unit draws heat from its own pair of baths.
//
// The bath temperatures of unit i+1 are fixed by the matching condition
// p_eq^(i+1) = p_w^(i), which keeps every swap free of heat and work.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "otto/engine.hpp"
#include "otto/error.hpp"
#include "otto/qutrit.hpp"
#include "otto/thermal.hpp"

namespace otto {

inline constexpr double kOmegaPiTol = 1e-12;

struct UnitSchedule {
    double theta_start = 0.0;
    ProbVector3 p_eq;
    BathPair baths;
};

struct CollectiveSchedule {
    int n_units = 1;
    double delta_theta = 0.0;
    double omega = 0.0;
    LevelStructure levels;
    BathPair base_baths;
    std::vector<UnitSchedule> per_unit;
    double invariant_p1 = 1.0;
    double invariant_s = 0.0;  ///< p_2 + p_3, shared by all units
    double dp0 = 0.0;          ///< inversion p_3 - p_2 of unit 1

    /// Populations on the schedule's Bloch circle at polar angle theta.
    ProbVector3 populations_at(double theta) const {
        const double c = std::cos(theta);
        return {invariant_p1, 0.5 * (invariant_s - dp0 * c), 0.5 * (invariant_s + dp0 * c)};
    }

    /// Populations after unit i's rotation (1-based), p_w^(i) = p_eq^(i+1).
    ProbVector3 p_w(int unit) const { return populations_at(unit * delta_theta); }

    bool is_omega_pi() const { return std::abs(omega - std::numbers::pi) <= kOmegaPiTol; }

    const UnitSchedule& unit(int i) const { return per_unit.at(static_cast<std::size_t>(i - 1)); }
};

inline CollectiveSchedule build_schedule(const LevelStructure& levels, const BathPair& base_baths, int n_units,
                                         double delta_theta) {
    levels.validate();
    base_baths.validate();
    if (n_units < 1) fail(ErrorKind::InvalidArgument, "collective needs at least one unit");
    if (!(delta_theta > 0.0)) fail(ErrorKind::InvalidArgument, "delta_theta must be positive");
    if (n_units * delta_theta > std::numbers::pi + kOmegaPiTol) {
        fail(ErrorKind::InvalidArgument, "N * delta_theta exceeds pi; group units with saturated_work instead");
    }

    CollectiveSchedule sched;
    sched.n_units = n_units;
    sched.delta_theta = delta_theta;
    sched.omega = n_units * delta_theta;
    sched.levels = levels;
    sched.base_baths = base_baths;

    const ProbVector3 p0 = gibbs_steady_state(levels, base_baths);
    sched.invariant_p1 = p0.p1;
    sched.invariant_s = p0.p2 + p0.p3;
    sched.dp0 = p0.p3 - p0.p2;

    sched.per_unit.reserve(static_cast<std::size_t>(n_units));
    sched.per_unit.push_back({0.0, p0, base_baths});
    for (int i = 2; i <= n_units; ++i) {
        const double theta = (i - 1) * delta_theta;
        const ProbVector3 p = sched.populations_at(theta);
        sched.per_unit.push_back({theta, p, temperatures_from_populations(levels, p)});
    }
    return sched;
}

/// Omega = pi schedule, delta_theta = pi / N exactly.
inline CollectiveSchedule build_omega_pi_schedule(const LevelStructure& levels, const BathPair& base_baths,
                                                  int n_units) {
    if (n_units < 1) fail(ErrorKind::InvalidArgument, "collective needs at least one unit");
    CollectiveSchedule sched = build_schedule(levels, base_baths, n_units, std::numbers::pi / n_units);
    sched.omega = std::numbers::pi;
    return sched;
}

/// States seen by one unit during the collective cycle.
struct UnitTrace {
    DensityMatrix3 rho_dnr;  ///< state entering the rotation (after CI)
    DensityMatrix3 rho_w;    ///< state after the rotation
    ProbVector3 p_eq;
};

struct CollectiveRunResult {
    std::vector<CycleLedger> per_unit_ledgers;
    std::vector<UnitTrace> traces;
    double total_w = 0.0;
    double total_q_h = 0.0;
    double total_q_c = 0.0;
    double total_ds = 0.0;
    double ep = std::numeric_limits<double>::quiet_NaN();  ///< NaN when total work vanishes
};

/// Simulates one steady-state collective cycle with explicit CI/CE swaps.
/// Unit 1 starts from its diagonal Gibbs state; unit N's residual coherence is
/// erased by its own baths.
inline CollectiveRunResult run_collective_cycle(const CollectiveSchedule& sched) {
    const int n = sched.n_units;
    if (n < 1 || static_cast<int>(sched.per_unit.size()) != n) {
        fail(ErrorKind::InvalidArgument, "schedule is inconsistent with its unit count");
    }

    CollectiveRunResult out;
    out.per_unit_ledgers.reserve(static_cast<std::size_t>(n));
    out.traces.reserve(static_cast<std::size_t>(n));

    DensityMatrix3 traveling = DensityMatrix3::diagonal(sched.unit(1).p_eq);
    for (int i = 1; i <= n; ++i) {
        const UnitSchedule& u = sched.unit(i);
        CycleLedger ledger;

        DensityMatrix3 engine = DensityMatrix3::diagonal(u.p_eq);
        if (i > 1) {
            const SwapResult ci = coherence_inject(engine, traveling);
            engine = ci.engine;
            ledger.c_injected = ci.ds_partner;
        }

        const DensityMatrix3 rho_dnr = engine;
        const auto [rho_w, w] = work_stroke(engine, sched.levels, sched.delta_theta);
        ledger.w = w;

        if (i < n) {
            const SwapResult ce = coherence_extract(rho_w, DensityMatrix3::diagonal(sched.unit(i + 1).p_eq));
            engine = ce.engine;
            traveling = ce.partner;
            ledger.c_extracted = -ce.ds_partner;
        } else {
            engine = rho_w;
        }

        const auto [thermal, heat] = thermal_stroke(engine, sched.levels, u.baths);
        ledger.q_c = heat.q_c;
        ledger.q_h = heat.q_h;
        ledger.ds_baths = heat.ds_baths;
        ledger.ds_tot = ledger.ds_baths;

        out.total_w += ledger.w;
        out.total_q_c += ledger.q_c;
        out.total_q_h += ledger.q_h;
        out.total_ds += ledger.ds_baths;
        out.per_unit_ledgers.push_back(ledger);
        out.traces.push_back({rho_dnr, rho_w, u.p_eq});
    }
    if (std::abs(out.total_w) > kZeroWorkTol) out.ep = out.total_ds / out.total_w;
    return out;
}

/// W_coll = (E_h - E_c) dp0 sin^2(Omega/2).
inline double collective_work_closed_form(const LevelStructure& levels, double dp0, double omega) {
    const double s = std::sin(0.5 * omega);
    return (levels.delta_e_h - levels.delta_e_c) * dp0 * s * s;
}

/// N independent copies of unit 1, each rotating by delta_theta.
inline double swo_work(const LevelStructure& levels, double dp0, int n_units, double delta_theta) {
    return n_units * collective_work_closed_form(levels, dp0, delta_theta);
}

/// N units grouped into floor(N/M) complete pi-sets plus one incomplete set.
inline double saturated_work(const LevelStructure& levels, double dp0, int n_units, int m_units, double delta_theta) {
    if (m_units < 1) fail(ErrorKind::InvalidArgument, "M must be at least 1");
    if (n_units < 0) fail(ErrorKind::InvalidArgument, "N must be non-negative");
    const int full_sets = n_units / m_units;
    const int remainder = n_units % m_units;
    const double s = std::sin(0.5 * remainder * delta_theta);
    return (levels.delta_e_h - levels.delta_e_c) * dp0 * (full_sets + s * s);
}

/// M = round(pi / delta_theta).
inline int units_per_pi(double delta_theta) {
    if (!(delta_theta > 0.0)) fail(ErrorKind::InvalidArgument, "delta_theta must be positive");
    return static_cast<int>(std::lround(std::numbers::pi / delta_theta));
}

/// D(p_w,i || p_eq,i) for every unit, computed from the schedule alone.
inline std::vector<double> relative_entropy_terms(const CollectiveSchedule& sched) {
    std::vector<double> d;
    d.reserve(sched.per_unit.size());
    for (int i = 1; i <= sched.n_units; ++i) d.push_back(relative_entropy(sched.p_w(i), sched.unit(i).p_eq));
    return d;
}

/// ds_baths,i + ds_baths,N+1-i for an Omega = pi run. When 2i = N+1 the unit
/// pairs with itself and the result is 2 ds_baths,i.
inline double pairwise_residual(const CollectiveRunResult& result, const CollectiveSchedule& sched, int i) {
    if (!sched.is_omega_pi()) fail(ErrorKind::WrongOmega, "pairwise cancellation needs Omega = pi");
    const int n = sched.n_units;
    if (i < 1 || i > n || static_cast<int>(result.per_unit_ledgers.size()) != n) {
        fail(ErrorKind::IndexOutOfRange, "unit index " + std::to_string(i) + " outside [1, " + std::to_string(n) + "]");
    }
    const auto& ledgers = result.per_unit_ledgers;
    return ledgers[static_cast<std::size_t>(i - 1)].ds_baths + ledgers[static_cast<std::size_t>(n - i)].ds_baths;
}

/// Sum_i D(p_eq^(i+1) || p_eq^(i)), with p_eq^(N+1) the south-pole mirror of
/// unit 1. Equals the total bath entropy of an Omega = pi cycle.
inline double omega_pi_total_entropy(const CollectiveSchedule& sched) {
    if (!sched.is_omega_pi()) {
        fail(ErrorKind::WrongOmega, "Omega = " + std::to_string(sched.omega) + " is not pi");
    }
    double total = 0.0;
    for (int i = 1; i <= sched.n_units; ++i) {
        const ProbVector3 next = i < sched.n_units ? sched.unit(i + 1).p_eq : sched.p_w(sched.n_units);
        total += relative_entropy(next, sched.unit(i).p_eq);
    }
    return total;
}

/// EP of the Omega = pi machine, total entropy over (E_h - E_c) dp0.
inline double omega_pi_entropy_pollution(const CollectiveSchedule& sched) {
    const double w = collective_work_closed_form(sched.levels, sched.dp0, std::numbers::pi);
    if (std::abs(w) <= kZeroWorkTol) fail(ErrorKind::ZeroWork, "base baths produce no inversion");
    return omega_pi_total_entropy(sched) / w;
}

}  // namespace otto
