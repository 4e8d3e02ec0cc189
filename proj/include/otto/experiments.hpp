// experiments.hpp
// Drives the library for each configured experiment and packs the results
// into a SweepTable whose header echoes the resolved configuration.

#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "otto/analysis.hpp"
#include "otto/collective.hpp"
#include "otto/config.hpp"
#include "otto/engine.hpp"
#include "otto/sweep_table.hpp"

namespace otto {

namespace detail {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline std::vector<Cell> ledger_cells(const CycleLedger& l) {
    return {l.w, l.q_c, l.q_h, l.ds_baths, l.ds_acpt, l.ds_dnr, l.ds_tot, l.c_extracted, l.c_injected};
}

inline SweepTable single_table(const ExperimentConfig& cfg) {
    const EngineUnit unit{cfg.levels, cfg.baths, cfg.delta_theta};
    SweepTable t({"mode", "w", "q_c", "q_h", "ds_baths", "ds_acpt", "ds_dnr", "ds_tot", "c_extracted", "c_injected",
                  "ep"});
    for (const bool ce : {false, true}) {
        const CycleLedger l = ce ? run_cycle(unit, mode::WithCe{}) : run_cycle(unit, mode::Bare{});
        std::vector<Cell> row{std::string(ce ? "with_ce" : "bare")};
        for (auto& c : ledger_cells(l)) row.push_back(c);
        row.push_back(entropy_pollution(l));
        t.add_row(std::move(row));
    }
    t.metadata().push_back({"efficiency", format_number(efficiency(cfg.levels))});
    t.metadata().push_back({"carnot_efficiency", format_number(carnot_efficiency(cfg.baths))});
    return t;
}

inline SweepTable collective_table(const ExperimentConfig& cfg) {
    const CollectiveSchedule sched = build_schedule(cfg.levels, cfg.baths, cfg.n, cfg.delta_theta);
    const CollectiveRunResult run = run_collective_cycle(sched);
    SweepTable t({"unit", "theta_start", "t_c", "t_h", "p1", "p2", "p3", "w", "q_c", "q_h", "ds_baths", "c_injected",
                  "c_extracted"});
    for (int i = 1; i <= sched.n_units; ++i) {
        const UnitSchedule& u = sched.unit(i);
        const CycleLedger& l = run.per_unit_ledgers[static_cast<std::size_t>(i - 1)];
        t.add_row({static_cast<double>(i), u.theta_start, u.baths.t_c, u.baths.t_h, u.p_eq.p1, u.p_eq.p2, u.p_eq.p3,
                   l.w, l.q_c, l.q_h, l.ds_baths, l.c_injected, l.c_extracted});
    }
    t.add_row({std::string("total"), kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, run.total_w, run.total_q_c, run.total_q_h,
               run.total_ds, kNaN, kNaN});
    t.metadata().push_back({"dp0", format_number(sched.dp0)});
    t.metadata().push_back(
        {"closed_form_w", format_number(collective_work_closed_form(sched.levels, sched.dp0, sched.omega))});
    t.metadata().push_back({"ep", format_number(run.ep)});
    return t;
}

inline SweepTable omega_pi_table(const ExperimentConfig& cfg) {
    const CollectiveSchedule sched = build_omega_pi_schedule(cfg.levels, cfg.baths, cfg.n);
    const CollectiveRunResult run = run_collective_cycle(sched);
    const std::vector<double> d = relative_entropy_terms(sched);
    SweepTable t({"unit", "theta_start", "t_c", "t_h", "w", "ds_baths", "d_term", "c_injected", "c_extracted",
                  "pair_residual"});
    for (int i = 1; i <= sched.n_units; ++i) {
        const UnitSchedule& u = sched.unit(i);
        const CycleLedger& l = run.per_unit_ledgers[static_cast<std::size_t>(i - 1)];
        t.add_row({static_cast<double>(i), u.theta_start, u.baths.t_c, u.baths.t_h, l.w, l.ds_baths,
                   d[static_cast<std::size_t>(i - 1)], l.c_injected, l.c_extracted, pairwise_residual(run, sched, i)});
    }
    t.metadata().push_back({"total_w", format_number(run.total_w)});
    t.metadata().push_back({"total_ds", format_number(run.total_ds)});
    t.metadata().push_back({"relative_entropy_sum", format_number(omega_pi_total_entropy(sched))});
    t.metadata().push_back({"ep", format_number(run.ep)});
    return t;
}

inline SweepTable ep_scaling_table(const ExperimentConfig& cfg) {
    SweepTable t({"n", "w_coll", "ds_tot", "relative_entropy_sum", "ep_coll", "ep_swo", "ep_sepo", "merit_ratio_swo",
                  "merit_ratio_sepo"});
    std::vector<double> ns, eps;
    for (const int n : cfg.n_list.values()) {
        const MeritPoint p = merit_point(cfg.levels, cfg.baths, n);
        const CollectiveSchedule sched = build_omega_pi_schedule(cfg.levels, cfg.baths, n);
        t.add_row({static_cast<double>(n), p.w_coll, p.ep_coll * p.w_coll, omega_pi_total_entropy(sched), p.ep_coll,
                   p.ep_swo, p.ep_sepo, p.merit_ratio_swo(), p.merit_ratio_sepo()});
        ns.push_back(n);
        eps.push_back(p.ep_coll);
    }
    if (ns.size() >= 3) t.metadata().push_back({"loglog_slope_ep_coll", format_number(loglog_slope(ns, eps))});
    return t;
}

inline SweepTable split_cycle_table(const ExperimentConfig& cfg) {
    const auto points = split_cycle_experiment({cfg.levels, cfg.baths, cfg.delta_theta}, cfg.n);
    SweepTable t({"n", "delta_theta_n", "w_cycle", "ds_cycle", "ep_ce", "ep_bare"});
    for (const auto& p : points) {
        t.add_row({static_cast<double>(p.n), p.delta_theta, p.w_cycle, p.ds_cycle, p.ep_ce, p.ep_bare});
    }
    t.metadata().push_back({"ep_closed_form_no_ce", format_number(ep_closed_form_no_ce(cfg.levels, cfg.baths))});
    return t;
}

inline SweepTable no_inversion_table(const ExperimentConfig& cfg) {
    const EngineUnit unit{cfg.levels, cfg.baths, cfg.delta_theta};
    const ProbVector3 p_eq = gibbs_steady_state(cfg.levels, cfg.baths);
    SweepTable t({"coherence_fraction", "w", "q_c", "q_h", "ds_baths", "ds_acpt", "ds_dnr", "ds_tot", "c_extracted",
                  "c_injected", "efficiency"});
    for (const double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const CycleLedger l = run_cycle_no_inversion(unit, matched_donor(p_eq, f));
        std::vector<Cell> row{f};
        for (auto& c : ledger_cells(l)) row.push_back(c);
        row.push_back(std::abs(l.q_h) > kZeroWorkTol ? l.w / l.q_h : kNaN);
        t.add_row(std::move(row));
    }
    t.metadata().push_back({"inversion", format_number(p_eq.p3 - p_eq.p2)});
    return t;
}

}  // namespace detail

inline SweepTable run_experiment(const ExperimentConfig& cfg) {
    SweepTable table;
    switch (cfg.experiment) {
    case Experiment::Single: table = detail::single_table(cfg); break;
    case Experiment::Collective: table = detail::collective_table(cfg); break;
    case Experiment::BoostCurve:
        table = boost_curve(cfg.levels, cfg.baths, cfg.delta_theta, cfg.n_list.values());
        break;
    case Experiment::EpScaling: table = detail::ep_scaling_table(cfg); break;
    case Experiment::EpRatio: table = ep_ratio_curve(cfg.levels, cfg.baths, cfg.n_list.values(), cfg.baseline); break;
    case Experiment::OmegaPi: table = detail::omega_pi_table(cfg); break;
    case Experiment::SplitCycle: table = detail::split_cycle_table(cfg); break;
    case Experiment::NoInversion: table = detail::no_inversion_table(cfg); break;
    }
    auto header = cfg.echo();
    for (auto& kv : table.metadata()) header.push_back({"derived." + kv.first, kv.second});
    table.metadata() = std::move(header);
    return table;
}

// ---------------------------------------------------------------------------
// selftest: randomized invariant checks runnable from the CLI.

struct SelftestOutcome {
    int passed = 0;
    int failed = 0;
    bool ok() const { return failed == 0; }
};

namespace detail {

/// Random engine-regime parameters (delta_e_c/delta_e_h >= t_c/t_h).
inline EngineUnit random_engine(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double dec = 0.2 + 1.8 * u(rng);
    const double deh = dec * (1.2 + 3.0 * u(rng));
    const double tc = 0.1 + 2.0 * u(rng);
    const double th = tc * (deh / dec) * (1.05 + 3.0 * u(rng));
    const double theta = 0.01 + (std::numbers::pi - 0.01) * u(rng);
    return {{dec, deh}, {tc, th}, theta};
}

}  // namespace detail

/// Runs the invariant suite, one line per property. When `emit_dir` is set,
/// also writes the figure CSVs (boost, omega-pi, ep-ratio, ep-scaling) there.
inline SelftestOutcome run_selftest(std::ostream& os, const std::filesystem::path* emit_dir = nullptr,
                                    int draws = 200) {
    SelftestOutcome outcome;
    std::mt19937_64 rng(20161016);

    const auto check = [&](const std::string& name, const std::function<bool()>& body) {
        bool ok = false;
        std::string why;
        try {
            ok = body();
        } catch (const std::exception& e) {
            why = std::string(" (") + e.what() + ")";
        }
        os << (ok ? "[PASS] " : "[FAIL] ") << name << why << '\n';
        ok ? ++outcome.passed : ++outcome.failed;
    };

    check("unitary preserves spectrum, p1, p2+p3 and Bloch radius", [&] {
        for (int k = 0; k < draws; ++k) {
            const EngineUnit e = detail::random_engine(rng);
            const ProbVector3 p = gibbs_steady_state(e.levels, e.baths);
            const DensityMatrix3 rho = matched_donor(p, std::uniform_real_distribution<double>(0, 1)(rng));
            const DensityMatrix3 out = apply_work_unitary(rho, e.delta_theta);
            if ((rho.eigenvalues() - out.eigenvalues()).cwiseAbs().maxCoeff() > 1e-12) return false;
            const ProbVector3 a = rho.populations(), b = out.populations();
            if (std::abs(a.p1 - b.p1) > 1e-12 || std::abs(a.p2 + a.p3 - b.p2 - b.p3) > 1e-12) return false;
            if (std::abs(to_bloch(rho).radius() - to_bloch(out).radius()) > 1e-12) return false;
        }
        return true;
    });

    check("C(rho) = S(dephase rho) - S(rho)", [&] {
        for (int k = 0; k < draws; ++k) {
            const EngineUnit e = detail::random_engine(rng);
            const DensityMatrix3 rho = apply_work_unitary(
                DensityMatrix3::diagonal(gibbs_steady_state(e.levels, e.baths)), e.delta_theta);
            const double lhs = coherence_measure(rho);
            const double rhs = von_neumann_entropy(dephase(rho)) - von_neumann_entropy(rho);
            if (std::abs(lhs - rhs) > 1e-10) return false;
        }
        return true;
    });

    check("total entropy equals D(p_w||p_eq) with CE and CE+CI; second law", [&] {
        for (int k = 0; k < draws; ++k) {
            const EngineUnit e = detail::random_engine(rng);
            const ProbVector3 p_eq = gibbs_steady_state(e.levels, e.baths);
            const double f = std::uniform_real_distribution<double>(0, 1)(rng);
            for (const CycleMode& m : {CycleMode{mode::WithCe{}}, CycleMode{mode::WithCeCi{matched_donor(p_eq, f)}}}) {
                const CycleTrace tr = run_cycle_traced(e, m);
                const double d = relative_entropy(tr.rho_w.populations(), p_eq);
                if (std::abs(tr.ledger.ds_tot - d) > 1e-10 || tr.ledger.ds_tot < -1e-10) return false;
            }
            if (run_cycle(e, mode::Bare{}).ds_tot < -1e-10) return false;
        }
        return true;
    });

    check("energy balance w = q_h + q_c and efficiency 1 - dE_c/dE_h", [&] {
        for (int k = 0; k < draws; ++k) {
            const EngineUnit e = detail::random_engine(rng);
            const CycleLedger l = run_cycle(e, mode::WithCe{});
            if (std::abs(l.w - l.q_h - l.q_c) > 1e-12) return false;
            if (l.q_h > 1e-9 && std::abs(l.w / l.q_h - efficiency(e.levels)) > 1e-10) return false;
        }
        return true;
    });

    check("collective work telescopes to (E_h-E_c) dp0 sin^2(Omega/2)", [&] {
        std::uniform_int_distribution<int> nd(1, 64);
        for (int k = 0; k < draws / 4; ++k) {
            const EngineUnit e = detail::random_engine(rng);
            const int n = nd(rng);
            const double omega = std::uniform_real_distribution<double>(0.01, std::numbers::pi)(rng);
            const CollectiveSchedule s = build_schedule(e.levels, e.baths, n, omega / n);
            const CollectiveRunResult r = run_collective_cycle(s);
            const double closed = collective_work_closed_form(e.levels, s.dp0, s.omega);
            if (std::abs(r.total_w - closed) > 1e-10 * std::abs(closed)) return false;
            if (r.total_ds < -1e-10) return false;
        }
        return true;
    });

    check("Omega=pi bath entropy equals the relative-entropy chain", [&] {
        for (int k = 0; k < draws / 10; ++k) {
            const EngineUnit e = detail::random_engine(rng);
            const int n = std::uniform_int_distribution<int>(1, 64)(rng);
            const CollectiveSchedule s = build_omega_pi_schedule(e.levels, e.baths, n);
            if (std::abs(run_collective_cycle(s).total_ds - omega_pi_total_entropy(s)) > 1e-10) return false;
        }
        return true;
    });

    if (emit_dir != nullptr) {
        check("figure CSVs written", [&] {
            std::filesystem::create_directories(*emit_dir);
            const auto write = [&](const std::string& name, const std::string& text) {
                ExperimentConfig cfg = parse_config(text);
                std::ofstream f(*emit_dir / name, std::ios::binary);
                run_experiment(cfg).write_csv(f);
                return static_cast<bool>(f);
            };
            return write("boost_curve.csv", "experiment=boost-curve\ndelta_theta=pi/20\nn_list=1:100:1\n") &&
                   write("omega_pi_n20.csv", "experiment=omega-pi\nn=20\n") &&
                   write("ep_ratio_sepo.csv", "experiment=ep-ratio\nt_c=1\nt_h=5\nbaseline=sepo\nn_list=2:64:1\n") &&
                   write("ep_ratio_sepo_cold.csv",
                         "experiment=ep-ratio\nt_c=0.2\nt_h=5\nbaseline=sepo\nn_list=2:64:1\n") &&
                   write("ep_scaling.csv", "experiment=ep-scaling\nn_list=2:64:1\n");
        });
    }
    return outcome;
}

}  // namespace otto
