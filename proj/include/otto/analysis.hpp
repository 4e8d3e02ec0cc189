// analysis.hpp
// Standalone baselines (SWO, SEPO), boost and entropy-pollution sweeps, the
// W/EP figure of merit and log-log scaling fits.
//
// SWO: N copies of unit 1 (largest standalone work), each rotating by the
// collective's delta_theta. SEPO: N copies of unit ceil(N/2), the standalone
// unit with the lowest entropy pollution. Both baselines only use bath
// temperatures that already exist in the collective.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "otto/collective.hpp"
#include "otto/engine.hpp"
#include "otto/error.hpp"
#include "otto/sweep_table.hpp"

namespace otto {

enum class Baseline { Swo, Sepo };

inline std::string to_string(Baseline b) { return b == Baseline::Swo ? "swo" : "sepo"; }

/// Least-squares slope of ln y against ln x.
inline double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) fail(ErrorKind::InvalidArgument, "x and y lengths differ");
    if (xs.size() < 3) fail(ErrorKind::InvalidArgument, "need at least three points for a slope");
    double mx = 0.0, my = 0.0;
    std::vector<double> lx, ly;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (!(xs[k] > 0.0) || !(ys[k] > 0.0)) {
            fail(ErrorKind::InvalidArgument, "log-log fit needs strictly positive values");
        }
        lx.push_back(std::log(xs[k]));
        ly.push_back(std::log(ys[k]));
        mx += lx.back();
        my += ly.back();
    }
    const double n = static_cast<double>(xs.size());
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    if (sxx == 0.0) fail(ErrorKind::InvalidArgument, "all x values are equal");
    return sxy / sxx;
}

/// Least-squares slope of y against x.
inline double linear_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) fail(ErrorKind::InvalidArgument, "need matching x/y with >= 2 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        mx += xs[k];
        my += ys[k];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        sxy += (xs[k] - mx) * (ys[k] - my);
        sxx += (xs[k] - mx) * (xs[k] - mx);
    }
    if (sxx == 0.0) fail(ErrorKind::InvalidArgument, "all x values are equal");
    return sxy / sxx;
}

/// W/EP; a non-positive EP is the reversible limit and maps to +inf.
inline double w_over_ep(double w, double ep) {
    if (!(ep > 0.0)) return std::numeric_limits<double>::infinity();
    return w / ep;
}

inline double w_over_ep(const CollectiveRunResult& result) { return w_over_ep(result.total_w, result.ep); }

inline double w_over_ep(const CycleLedger& ledger) { return w_over_ep(ledger.w, entropy_pollution(ledger)); }

struct StandaloneReference {
    int unit_index = 1;
    double ep = 0.0;
    double w_unit = 0.0;  ///< work of one standalone copy per cycle
};

inline EngineUnit standalone_unit(const CollectiveSchedule& sched, int index) {
    const UnitSchedule& u = sched.unit(index);
    return {sched.levels, u.baths, sched.delta_theta};
}

/// Unit 1 run standalone without CE/CI.
inline StandaloneReference swo_reference(const CollectiveSchedule& sched) {
    const CycleLedger ledger = run_cycle(standalone_unit(sched, 1), mode::Bare{});
    return {1, entropy_pollution(ledger), ledger.w};
}

/// Unit ceil(N/2) of an Omega = pi schedule run standalone without CE/CI.
inline StandaloneReference sepo_reference(const CollectiveSchedule& sched) {
    if (!sched.is_omega_pi()) fail(ErrorKind::WrongOmega, "SEPO reference is defined for Omega = pi");
    if (sched.n_units < 2) fail(ErrorKind::InvalidArgument, "SEPO reference needs N >= 2");
    const int index = (sched.n_units + 1) / 2;
    const CycleLedger ledger = run_cycle(standalone_unit(sched, index), mode::Bare{});
    return {index, entropy_pollution(ledger), ledger.w};
}

inline StandaloneReference baseline_reference(const CollectiveSchedule& sched, Baseline baseline) {
    return baseline == Baseline::Swo ? swo_reference(sched) : sepo_reference(sched);
}

/// Rows (n, ep_coll, ep_baseline, ratio) for Omega = pi collectives.
inline SweepTable ep_ratio_curve(const LevelStructure& levels, const BathPair& base_baths,
                                 const std::vector<int>& n_list, Baseline baseline) {
    SweepTable table({"n", "ep_coll", "ep_baseline", "ratio"});
    for (const int n : n_list) {
        const CollectiveSchedule sched = build_omega_pi_schedule(levels, base_baths, n);
        const CollectiveRunResult run = run_collective_cycle(sched);
        if (std::isnan(run.ep)) fail(ErrorKind::ZeroWork, "collective produces no work");
        const StandaloneReference ref = baseline_reference(sched, baseline);
        table.add_row({static_cast<double>(n), run.ep, ref.ep, run.ep / ref.ep});
    }
    return table;
}

/// Rows (n, w_coll, w_swo, n_w1swo, ratio) at fixed delta_theta. Collectives
/// larger than M = round(pi/delta_theta) are split into pi-sets.
inline SweepTable boost_curve(const LevelStructure& levels, const BathPair& base_baths, double delta_theta,
                              const std::vector<int>& n_list) {
    const int m = units_per_pi(delta_theta);
    const ProbVector3 p0 = gibbs_steady_state(levels, base_baths);
    const double dp0 = p0.p3 - p0.p2;
    const double w1 = run_cycle({levels, base_baths, delta_theta}, mode::Bare{}).w;

    SweepTable table({"n", "w_coll", "w_swo", "n_w1swo", "ratio"});
    table.metadata().push_back({"m", std::to_string(m)});
    for (const int n : n_list) {
        double w_coll = 0.0;
        if (n * delta_theta <= std::numbers::pi + kOmegaPiTol) {
            w_coll = run_collective_cycle(build_schedule(levels, base_baths, n, delta_theta)).total_w;
        } else {
            w_coll = saturated_work(levels, dp0, n, m, delta_theta);
        }
        const double w_swo = swo_work(levels, dp0, n, delta_theta);
        table.add_row({static_cast<double>(n), w_coll, w_swo, n * w1, w_coll / w_swo});
    }
    return table;
}

/// One Omega = pi collective compared against both baselines.
struct MeritPoint {
    int n = 0;
    double w_coll = 0.0;
    double ep_coll = 0.0;
    double w_swo = 0.0;  ///< total work of N SWO copies
    double ep_swo = 0.0;
    double w_sepo = 0.0;  ///< total work of N SEPO copies
    double ep_sepo = 0.0;

    double merit_ratio_swo() const { return w_over_ep(w_coll, ep_coll) / w_over_ep(w_swo, ep_swo); }
    double merit_ratio_sepo() const { return w_over_ep(w_coll, ep_coll) / w_over_ep(w_sepo, ep_sepo); }
};

inline MeritPoint merit_point(const LevelStructure& levels, const BathPair& base_baths, int n) {
    const CollectiveSchedule sched = build_omega_pi_schedule(levels, base_baths, n);
    const CollectiveRunResult run = run_collective_cycle(sched);
    const StandaloneReference swo = swo_reference(sched);
    const StandaloneReference sepo = n == 1 ? swo : sepo_reference(sched);
    return {n, run.total_w, run.ep, n * swo.w_unit, swo.ep, n * sepo.w_unit, sepo.ep};
}

/// Rows of the W/EP comparison for every N in n_list.
inline SweepTable merit_curve(const LevelStructure& levels, const BathPair& base_baths, const std::vector<int>& n_list) {
    SweepTable table({"n", "w_coll", "ep_coll", "w_swo", "ep_swo", "w_sepo", "ep_sepo", "merit_ratio_swo",
                      "merit_ratio_sepo"});
    for (const int n : n_list) {
        const MeritPoint p = merit_point(levels, base_baths, n);
        table.add_row({static_cast<double>(n), p.w_coll, p.ep_coll, p.w_swo, p.ep_swo, p.w_sepo, p.ep_sepo,
                       p.merit_ratio_swo(), p.merit_ratio_sepo()});
    }
    return table;
}

/// Powers of two in [lo, hi].
inline std::vector<int> dyadic_range(int lo, int hi) {
    std::vector<int> out;
    for (int n = 1; n <= hi; n *= 2) {
        if (n >= lo) out.push_back(n);
    }
    return out;
}

}  // namespace otto
