#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "otto/collective.hpp"

using namespace otto;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;
const LevelStructure kLevels{1, 2};
const BathPair kBaths{0.5, 5};
constexpr double kDp0 = 0.29628288086112529849;

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no otto::Error thrown");
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("schedule shares p1 and p2+p3 and chains p_eq to the previous p_w") {
    const CollectiveSchedule s = build_schedule(kLevels, kBaths, 12, kPi / 15);
    CHECK_THAT(s.dp0, WithinAbs(kDp0, 1e-15));
    CHECK_THAT(s.omega, WithinAbs(12 * kPi / 15, 1e-15));
    CHECK(s.unit(1).baths.t_c == 0.5);
    CHECK(s.unit(1).baths.t_h == 5.0);
    for (int i = 1; i <= 12; ++i) {
        const ProbVector3 p = s.unit(i).p_eq;
        CHECK_THAT(p.p1, WithinAbs(s.invariant_p1, 1e-15));
        CHECK_THAT(p.p2 + p.p3, WithinAbs(s.invariant_s, 1e-15));
        CHECK_THAT(s.unit(i).theta_start, WithinAbs((i - 1) * kPi / 15, 1e-15));
        // The back-solved baths really do have p_eq as their fixed point.
        const ProbVector3 g = gibbs_steady_state(kLevels, s.unit(i).baths);
        CHECK_THAT(g.p2, WithinAbs(p.p2, 1e-14));
        CHECK_THAT(g.p3, WithinAbs(p.p3, 1e-14));
        if (i > 1) {
            CHECK_THAT(p.p2, WithinAbs(s.p_w(i - 1).p2, 1e-15));
            CHECK_THAT(p.p3, WithinAbs(s.p_w(i - 1).p3, 1e-15));
        }
    }
    CHECK_THROWS(s.unit(13));
}

TEST_CASE("the state after the last rotation at Omega=pi is the mirror of unit 1") {
    const CollectiveSchedule s = build_omega_pi_schedule(kLevels, kBaths, 20);
    CHECK(s.delta_theta == kPi / 20);
    CHECK(s.is_omega_pi());
    const ProbVector3 mirror = s.p_w(20);
    CHECK_THAT(mirror.p2, WithinAbs(s.unit(1).p_eq.p3, 1e-15));
    CHECK_THAT(mirror.p3, WithinAbs(s.unit(1).p_eq.p2, 1e-15));
    const BathPair t = temperatures_from_populations(kLevels, mirror);
    CHECK_THAT(t.t_c, WithinRel(2.5, 1e-12));
    CHECK_THAT(t.t_h, WithinRel(1.0, 1e-12));
    CHECK(std::abs(s.unit(20).baths.t_c - 2.5) > 0.01);
}

TEST_CASE("schedule guards") {
    CHECK(kind_of([] { build_schedule(kLevels, kBaths, 0, 0.1); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { build_schedule(kLevels, kBaths, 3, 0.0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { build_schedule(kLevels, kBaths, 3, 1.1); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { build_omega_pi_schedule(kLevels, kBaths, 0); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { build_schedule({2, 1}, kBaths, 3, 0.1); }) == ErrorKind::InvalidArgument);
    CHECK_NOTHROW(build_schedule(kLevels, kBaths, 3, kPi / 3));
}

TEST_CASE("one-unit collective is the bare standalone cycle") {
    const CollectiveSchedule s = build_schedule(kLevels, kBaths, 1, kPi / 8);
    const CollectiveRunResult r = run_collective_cycle(s);
    const CycleLedger bare = run_cycle({kLevels, kBaths, kPi / 8}, mode::Bare{});
    CHECK_THAT(r.total_w, WithinRel(bare.w, 1e-14));
    CHECK_THAT(r.total_ds, WithinRel(bare.ds_tot, 1e-13));
    CHECK_THAT(r.ep, WithinRel(1.6, 1e-12));
}

TEST_CASE("closed-form work values") {
    CHECK_THAT(swo_work(kLevels, kDp0, 10, kPi / 10), WithinRel(0.072505581757257208127, 1e-14));
    CHECK_THAT(collective_work_closed_form(kLevels, kDp0, kPi) / swo_work(kLevels, kDp0, 10, kPi / 10),
               WithinRel(4.0863458189061400973, 1e-14));
    CHECK_THAT(saturated_work(kLevels, kDp0, 45, 20, kPi / 20), WithinRel(0.63595538504961941832, 1e-14));
    CHECK(collective_work_closed_form(kLevels, kDp0, 0.0) == 0.0);
    CHECK(saturated_work(kLevels, kDp0, 0, 20, kPi / 20) == 0.0);
    CHECK(saturated_work(kLevels, kDp0, 60, 20, kPi / 20) == 3 * kDp0);
    CHECK(units_per_pi(kPi / 20) == 20);
    CHECK(units_per_pi(kPi / 7) == 7);
    CHECK(kind_of([] { saturated_work(kLevels, kDp0, 5, 0, 0.1); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { saturated_work(kLevels, kDp0, -1, 3, 0.1); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { units_per_pi(0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("simulated collective work per unit and in total") {
    const CollectiveSchedule s = build_schedule(kLevels, kBaths, 10, kPi / 10);
    const CollectiveRunResult r = run_collective_cycle(s);
    REQUIRE(r.per_unit_ledgers.size() == 10);
    double sum = 0.0;
    for (int i = 1; i <= 10; ++i) {
        const CycleLedger& l = r.per_unit_ledgers[static_cast<std::size_t>(i - 1)];
        const double expect = 0.5 * kDp0 * (std::cos((i - 1) * kPi / 10) - std::cos(i * kPi / 10));
        CHECK_THAT(l.w, WithinRel(expect, 1e-12));
        CHECK_THAT(l.w, WithinAbs(l.q_c + l.q_h, 1e-15));
        CHECK(l.ds_acpt == 0.0);
        CHECK(l.ds_dnr == 0.0);
        CHECK(l.ds_tot == l.ds_baths);
        sum += l.w;
    }
    CHECK_THAT(r.total_w, WithinRel(kDp0, 1e-13));
    CHECK_THAT(r.total_w, WithinAbs(sum, 1e-15));
    CHECK(r.per_unit_ledgers.front().c_injected == 0.0);
    CHECK(r.per_unit_ledgers.back().c_extracted == 0.0);
    for (int i = 1; i < 10; ++i) {
        CHECK(r.per_unit_ledgers[static_cast<std::size_t>(i)].c_injected ==
              r.per_unit_ledgers[static_cast<std::size_t>(i - 1)].c_extracted);
    }
}

TEST_CASE("telescoping holds to high relative precision for random schedules") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> nd(1, 64);
    for (int k = 0; k < 100; ++k) {
        const double dec = 0.2 + 1.8 * u(rng);
        const double deh = dec * (1.2 + 3 * u(rng));
        const double tc = 0.1 + 2 * u(rng);
        const double th = tc * (deh / dec) * (1.05 + 3 * u(rng));
        const int n = nd(rng);
        const double omega = kPi * (k % 10 == 0 ? 1e-3 : u(rng));
        const CollectiveSchedule s = build_schedule({dec, deh}, {tc, th}, n, omega / n);
        const CollectiveRunResult r = run_collective_cycle(s);
        CHECK_THAT(r.total_w, WithinRel(collective_work_closed_form(s.levels, s.dp0, s.omega), 1e-10));
        CHECK(r.total_ds >= -1e-12);
    }
}

TEST_CASE("per-unit bath entropy is D plus the entropy step of the schedule") {
    for (const int n : {5, 20}) {
        const CollectiveSchedule s = build_schedule(kLevels, kBaths, n, 0.8 * kPi / n);
        const CollectiveRunResult r = run_collective_cycle(s);
        const std::vector<double> d = relative_entropy_terms(s);
        for (int i = 1; i <= n; ++i) {
            const double expect = d[static_cast<std::size_t>(i - 1)] + shannon_entropy(s.p_w(i)) -
                                  shannon_entropy(s.unit(i).p_eq);
            CHECK_THAT(r.per_unit_ledgers[static_cast<std::size_t>(i - 1)].ds_baths, WithinAbs(expect, 1e-13));
        }
    }
}

TEST_CASE("Omega=pi symbiosis") {
    const int n = 20;
    const CollectiveSchedule s = build_omega_pi_schedule(kLevels, kBaths, n);
    const CollectiveRunResult r = run_collective_cycle(s);
    const std::vector<double> d = relative_entropy_terms(s);

    CHECK_THAT(r.total_w, WithinRel(kDp0, 1e-13));
    CHECK_THAT(r.total_ds, WithinAbs(omega_pi_total_entropy(s), 1e-13));
    CHECK_THAT(omega_pi_entropy_pollution(s), WithinRel(r.ep, 1e-11));

    double dsum = 0.0;
    for (double x : d) dsum += x;
    CHECK_THAT(dsum, WithinAbs(omega_pi_total_entropy(s), 1e-15));

    for (int i = 1; i <= n; ++i) {
        const double ds = r.per_unit_ledgers[static_cast<std::size_t>(i - 1)].ds_baths;
        if (i <= n / 2) CHECK(ds > 0.0);        // upper hemisphere
        if (i > n / 2 + 1) CHECK(ds < 0.0);     // lower hemisphere
        CHECK_THAT(pairwise_residual(r, s, i),
                   WithinAbs(d[static_cast<std::size_t>(i - 1)] + d[static_cast<std::size_t>(n - i)], 1e-13));
        CHECK(pairwise_residual(r, s, i) == pairwise_residual(r, s, n + 1 - i));
    }
    CHECK(kind_of([&] { pairwise_residual(r, s, 0); }) == ErrorKind::IndexOutOfRange);
    CHECK(kind_of([&] { pairwise_residual(r, s, n + 1); }) == ErrorKind::IndexOutOfRange);
}

TEST_CASE("odd N pairs the middle unit with itself") {
    const CollectiveSchedule s = build_omega_pi_schedule(kLevels, kBaths, 7);
    const CollectiveRunResult r = run_collective_cycle(s);
    CHECK(pairwise_residual(r, s, 4) == 2 * r.per_unit_ledgers[3].ds_baths);
}

TEST_CASE("Omega != pi is rejected where the pi structure is needed") {
    const CollectiveSchedule s = build_schedule(kLevels, kBaths, 10, kPi / 20);
    const CollectiveRunResult r = run_collective_cycle(s);
    CHECK_FALSE(s.is_omega_pi());
    CHECK(kind_of([&] { omega_pi_total_entropy(s); }) == ErrorKind::WrongOmega);
    CHECK(kind_of([&] { pairwise_residual(r, s, 1); }) == ErrorKind::WrongOmega);
    CHECK(kind_of([&] { omega_pi_entropy_pollution(s); }) == ErrorKind::WrongOmega);
}

TEST_CASE("schedule that is inconsistent with its unit count is rejected") {
    CollectiveSchedule s = build_schedule(kLevels, kBaths, 4, 0.1);
    s.per_unit.pop_back();
    CHECK(kind_of([&] { run_collective_cycle(s); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("small-N and boundary values") {
    const CollectiveSchedule s7 = build_omega_pi_schedule(kLevels, kBaths, 7);
    CHECK_THAT(s7.unit(4).theta_start, WithinAbs(kPi / 2 - kPi / 14, 1e-15));

    const EngineUnit one{kLevels, kBaths, kPi / 9};
    CHECK_THAT(swo_work(kLevels, kDp0, 1, kPi / 9), WithinRel(run_cycle(one).w, 1e-13));
    CHECK_THAT(saturated_work(kLevels, kDp0, 20, 20, kPi / 20), WithinRel(kDp0, 1e-15));

    const CollectiveSchedule s1 = build_omega_pi_schedule(kLevels, kBaths, 1);
    const ProbVector3 p = s1.unit(1).p_eq;
    CHECK_THAT(omega_pi_total_entropy(s1), WithinRel(relative_entropy(ProbVector3{p.p1, p.p3, p.p2}, p), 1e-13));
    CHECK_THAT(run_collective_cycle(s1).total_ds, WithinRel(omega_pi_total_entropy(s1), 1e-12));
}

TEST_CASE("pairwise residual pairs the first and last unit") {
    const CollectiveSchedule s = build_omega_pi_schedule(kLevels, kBaths, 6);
    const CollectiveRunResult r = run_collective_cycle(s);
    const std::vector<double> d = relative_entropy_terms(s);
    CHECK_THAT(pairwise_residual(r, s, 1), WithinAbs(d[0] + d[5], 1e-13));
}

TEST_CASE("donor coherence of unit i mirrors post-rotation coherence of unit N+1-i") {
    for (const int n : {5, 8, 21}) {
        const CollectiveSchedule s = build_omega_pi_schedule(kLevels, kBaths, n);
        const CollectiveRunResult r = run_collective_cycle(s);
        for (int i = 1; i <= n; ++i) {
            const double dnr = coherence_measure(r.traces[static_cast<std::size_t>(i - 1)].rho_dnr);
            const double w = coherence_measure(r.traces[static_cast<std::size_t>(n - i)].rho_w);
            CHECK_THAT(dnr, WithinAbs(w, 1e-10));
        }
    }
}

TEST_CASE("below pi the total entropy is the D sum plus the last unit's coherence") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 60; ++k) {
        const int n = 1 + static_cast<int>(30 * u(rng));
        const double omega = 0.05 + 0.9 * kPi * u(rng);
        const CollectiveSchedule s = build_schedule(kLevels, kBaths, n, omega / n);
        const CollectiveRunResult r = run_collective_cycle(s);
        double sum = 0.0;
        for (const double d : relative_entropy_terms(s)) sum += d;
        CHECK_THAT(r.total_ds, WithinAbs(sum + coherence_measure(r.traces.back().rho_w), 1e-11));
        // Collective efficiency is the Otto efficiency.
        CHECK_THAT(r.total_w / r.total_q_h, WithinRel(efficiency(kLevels), 1e-10));
        // Boost bound.
        CHECK(r.total_w / swo_work(kLevels, s.dp0, n, omega / n) >= 4.0 * n / (kPi * kPi) - 1e-9);
    }
}

TEST_CASE("Omega = pi EP halves when N doubles") {
    for (const int n : {32, 64, 128, 256}) {
        const double a = run_collective_cycle(build_omega_pi_schedule(kLevels, kBaths, n)).ep;
        const double b = run_collective_cycle(build_omega_pi_schedule(kLevels, kBaths, 2 * n)).ep;
        CHECK_THAT(a / b, WithinRel(2.0, 0.05));
    }
}
