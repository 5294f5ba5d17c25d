#include <cmath>
#include <random>
#include <tuple>

#include "doctest.h"
#include "foxlink/csi_assisted.hpp"
#include "foxlink/power_alloc.hpp"

using namespace foxlink;

namespace {

// Moderate turbulence, strong pointing errors, heavy shadowing, three interferers.
RelaySystem fig7_system() {
    RelaySystem s;
    s.fso.alpha = 5.4;
    s.fso.beta = 4;
    s.fso.xi = 1.1;
    s.fso.r = 1;
    s.fso.gOverride = 0.0;
    s.fso.Omega = 1.0;
    s.rf = {2.5, 1.09, 2, 1.0};
    s.interf = {2.5, 3.5, 3, std::pow(10.0, 0.2)};
    s.scheme.kind = RelayKind::CsiAssisted;
    return s;
}

const double kThreshold = std::pow(10.0, 0.5);

power::PowerAllocProblem random_problem(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    power::PowerAllocProblem p;
    p.G = std::pow(10.0, -2.0 + 2.0 * u(rng));
    p.A_F = std::pow(10.0, -3.0 + 6.0 * u(rng));
    p.A_R = std::pow(10.0, -3.0 + 6.0 * u(rng));
    p.a = 0.5 + 4.5 * u(rng);
    p.Ptot = 1.0 + 99.0 * u(rng);
    return p;
}

}  // namespace

TEST_CASE("allocation coefficients") {
    const auto s = fig7_system();
    const channels::PathLossParams pl;
    const auto p = power::build_problem(s, kThreshold, pl);
    // tests/oracles/power_alloc_oracle.py
    CHECK(p.a == doctest::Approx(1.09));
    CHECK(p.A_F == doctest::Approx(1.62969937082280021).epsilon(1e-10));
    CHECK(p.A_R == doctest::Approx(352720888065.279047).epsilon(1e-10));
    CHECK(p.relayGain == doctest::Approx(8.18878002725137452e-11).epsilon(1e-12));

    power::PowerBudget noLoss;
    noLoss.delta = 0.0;
    const auto q = power::build_problem(s, kThreshold, pl, noLoss);
    CHECK(q.A_F * std::exp(p.a * 0.5 * 1.0) == doctest::Approx(p.A_F).epsilon(1e-12));

    auto louder = s;
    louder.interf.meanPower *= 2.0;
    CHECK(power::build_problem(louder, kThreshold, pl).A_R == doctest::Approx(p.A_R * std::pow(2.0, p.a)).epsilon(1e-12));

    auto farther = pl;
    farther.distance = 80.0;
    CHECK(power::build_problem(s, kThreshold, farther).A_R > p.A_R);

    auto tied = s;
    tied.fso.xi = std::sqrt(5.4);
    CHECK_THROWS_AS(power::build_problem(tied, kThreshold, pl), DegeneracyError);
}

TEST_CASE("closed-form split") {
    power::PowerAllocProblem p;
    p.Ptot = 10.0;
    auto [f, r] = power::optimal_split(p);
    CHECK(f == doctest::Approx(5.0));
    CHECK(r == doctest::Approx(5.0));

    p.A_F = 100.0;
    p.a = 50.0;
    std::tie(f, r) = power::optimal_split(p);
    CHECK(f / r == doctest::Approx(std::pow(100.0, 1.0 / 51.0)));
    CHECK(f + r == 10.0);

    p.a = 1.0;
    p.Scap = 2.0;
    std::tie(f, r) = power::optimal_split(p);
    CHECK(f == 2.0);
    CHECK(r == 8.0);

    p.Scap = 1e9;
    p.A_R = 1e-300;
    std::tie(f, r) = power::optimal_split(p);
    CHECK(r >= 0.0);
    CHECK(f + r == 10.0);
}

TEST_CASE("objective properties") {
    power::PowerAllocProblem p;
    p.A_F = 3.0;
    p.A_R = 0.2;
    p.a = 1.3;
    p.Ptot = 7.0;
    CHECK(power::objective(p, 4.0, 6.0) == doctest::Approx(std::pow(2.0, -1.3) * power::objective(p, 2.0, 3.0)));

    const auto [f, r] = power::optimal_split(p);
    const double h = 1e-4 * f;
    const double d = (power::objective(p, f + h, p.Ptot - f - h) - power::objective(p, f - h, p.Ptot - f + h)) / (2 * h);
    CHECK(std::abs(d) * f / power::objective(p, f, r) < 1e-6);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 10; ++i) {
        const auto q = random_problem(rng);
        const auto [qf, qr] = power::optimal_split(q);
        const double best = power::objective(q, qf, qr);
        const int n = 2000;
        auto at = [&](int j) { return power::objective(q, q.Ptot * j / n, q.Ptot - q.Ptot * j / n); };
        for (int j = 1; j < n; ++j) {
            const double pf = q.Ptot * j / n;
            const double step = std::max(j > 1 ? std::abs(at(j) - at(j - 1)) : 0.0,
                                         j + 1 < n ? std::abs(at(j + 1) - at(j)) : 0.0);
            CHECK(power::objective(q, pf, q.Ptot - pf) >= best - step);
        }
    }
}

TEST_CASE("allocation responds to the relay hop") {
    const auto s = fig7_system();
    channels::PathLossParams pl;
    power::PowerBudget b;
    b.Ptot = 1e12;
    double prev = 0.0;
    for (double gI : {1.0, 2.0, 4.0}) {
        auto t = s;
        t.interf.meanPower = gI;
        const double pr = power::optimal_split(power::build_problem(t, kThreshold, pl, b)).second;
        CHECK(pr >= prev);
        prev = pr;
    }
    prev = 0.0;
    for (double d : {30.0, 50.0, 80.0}) {
        pl.distance = d;
        const double pr = power::optimal_split(power::build_problem(s, kThreshold, pl, b)).second;
        CHECK(pr >= prev);
        prev = pr;
    }
}

TEST_CASE("surrogate against the asymptotic outage") {
    const auto s = fig7_system();
    power::PowerBudget b;
    b.Ptot = 1e15;
    const auto p = power::build_problem(s, kThreshold, {}, b);
    const auto [f, r] = power::optimal_split(p);
    const auto at = power::apply_split(s, p, f, r);
    CHECK(channels::malaga_derive(at.fso).mu_r == doctest::Approx(f * std::exp(-0.5)));
    const double asym = csi::outage_asymptotic_csi(at, kThreshold).first.value;
    CHECK(power::objective(p, f, r) == doctest::Approx(asym).epsilon(0.1));
    const double eq = csi::outage_bound(power::apply_split(s, p, b.Ptot / 2, b.Ptot / 2), kThreshold, false).value;
    CHECK(csi::outage_bound(at, kThreshold, false).value <= eq);
}
