#include <cmath>

#include "doctest.h"
#include "foxlink/fixed_gain.hpp"
#include "foxlink/quadrature.hpp"

using namespace foxlink;

namespace {

RelaySystem moderate_imdd() {
    RelaySystem s;
    s.fso.alpha = 5.4;
    s.fso.beta = 4;
    s.fso.xi = 1.1;
    s.fso.r = 2;
    s.fso.mu1 = 100.0;
    s.rf = {2.5, 1.09, 2, 100.0};
    s.interf = {2.5, 3.5, 1, 1.0};
    s.scheme.C = 1.7;
    return s;
}

// Gamma-Gamma with pointing errors, heterodyne, xi = 7.1: kappa dominates.
RelaySystem gamma_gamma_het() {
    RelaySystem s;
    s.fso.alpha = 2.4;
    s.fso.beta = 2;
    s.fso.xi = 7.1;
    s.fso.r = 1;
    s.fso.gOverride = 0.0;
    s.fso.Omega = 1.0;
    s.fso.mu1 = 300.0;
    s.rf = {2.5, 1.09, 2, 100.0};
    s.interf = {2.5, 3.5, 2, 1.0};
    s.scheme.C = 1.7;
    return s;
}

}  // namespace

TEST_CASE("fixed-gain outage against conditioning on the SIR") {
    auto s = moderate_imdd();
    const double x = 3.16;
    auto f = [&](double v) {
        const double y = std::exp(v);
        return channels::cdf_fso(s.fso, x * (1 + s.scheme.C / y)) * channels::pdf_sir(s.rf, s.interf, y) * y;
    };
    const auto q = quad::integrate(f, -30, 30, {1e-9, 1e-14, 200000, 64});
    const auto r = fixed_gain::outage(s, x);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(q.value).epsilon(1e-7));
    CHECK(r.value == doctest::Approx(0.216941517).epsilon(1e-7));
}

TEST_CASE("fixed-gain outage limits and monotonicity") {
    auto s = moderate_imdd();
    CHECK(fixed_gain::outage(s, 1e-12).value < 1e-6);
    double prev = 1.0;
    for (double mu : {10.0, 100.0, 1000.0}) {
        s.fso.mu1 = mu;
        const double v = fixed_gain::outage(s, 3.16).value;
        CHECK(v < prev);
        prev = v;
    }
    s.interf.multiplicity = 2;
    CHECK(fixed_gain::outage(s, 3.16).value > prev);
}

TEST_CASE("fixed-gain pdf is the derivative of the outage") {
    const auto s = gamma_gamma_het();
    const double h = 2e-4;
    const double num = (fixed_gain::outage(s, 2 + h).value - fixed_gain::outage(s, 2 - h).value) / (2 * h);
    const auto p = fixed_gain::e2e_pdf(s, 2.0);
    CHECK(p.converged);
    CHECK(p.value == doctest::Approx(num).epsilon(1e-4));
}

TEST_CASE("fixed-gain asymptotics") {
    auto s = gamma_gamma_het();
    const double x = 3.16;
    s.fso.mu1 = 1e6 * x;
    const double ratio = fixed_gain::outage_asymptotic(s, x).value / fixed_gain::outage(s, x).value;
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.05));

    const auto rep = fixed_gain::diversity_coding_gain(s, x);
    CHECK(rep.diversityGain == doctest::Approx(1.09));
    CHECK(rep.dominantBranch == Branch::kappa);
    CHECK_FALSE(rep.degenerate);

    auto p = gamma_gamma_het();
    p.fso.r = 2;
    p.fso.xi = 1.1;
    CHECK(fixed_gain::diversity_coding_gain(p, x).diversityGain == doctest::Approx(0.605));
    CHECK(fixed_gain::diversity_coding_gain(p, x).dominantBranch == Branch::xi2_over_r);

    auto tied = gamma_gamma_het();
    tied.fso.xi = std::sqrt(2.4);
    tied.rf.kappa = 5.0;
    CHECK_THROWS_AS(fixed_gain::outage_asymptotic(tied, x), DegeneracyError);
    CHECK(fixed_gain::diversity_coding_gain(tied, x).degenerate);
}

TEST_CASE("fixed-gain BER") {
    auto s = gamma_gamma_het();
    const auto b = fixed_gain::avg_ber(s, ModulationScheme::bpsk());
    CHECK(b.converged);
    // quadrature of the outage against the BPSK weight (tests/oracles/fixed_gain_routes.cpp)
    CHECK(b.value == doctest::Approx(1.00780787e-4).epsilon(1e-4));

    s.rf.m = 0.5;
    const double severe = fixed_gain::avg_ber(s, ModulationScheme::bpsk()).value;
    CHECK(severe > b.value);

    s = gamma_gamma_het();
    s.fso.mu1 = 1e6;
    const double exact = fixed_gain::avg_ber(s, ModulationScheme::bpsk()).value;
    CHECK(fixed_gain::avg_ber_asymptotic(s, ModulationScheme::bpsk()).value == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("fixed-gain capacity") {
    auto s = gamma_gamma_het();
    const auto c = fixed_gain::capacity(s);
    CHECK(c.converged);
    CHECK(c.value == doctest::Approx(3.713888935).epsilon(1e-6));
    s.fso.mu1 = 1e-9;
    CHECK(std::abs(fixed_gain::capacity(s).value) < 1e-6);

    auto b = moderate_imdd();
    const auto lb = fixed_gain::capacity(b);
    REQUIRE_FALSE(lb.diagnostics.notes.empty());
    CHECK(lb.diagnostics.notes.back().find("lower bound") != std::string::npos);
}

TEST_CASE("fixed-gain capacity without shadowing") {
    for (auto s : {gamma_gamma_het(), moderate_imdd()}) {
        s.rf.kappa = 1e4;
        s.interf.kappa = 1e4;
        const auto nak = fixed_gain::capacity_nakagami(s);
        CHECK(nak.converged);
        CHECK(fixed_gain::capacity(s).value == doctest::Approx(nak.value).epsilon(1e-3));
    }
}
