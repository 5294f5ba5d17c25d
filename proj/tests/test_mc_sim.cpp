#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "doctest.h"
#include "foxlink/csi_assisted.hpp"
#include "foxlink/fixed_gain.hpp"
#include "foxlink/mc_sim.hpp"

using namespace foxlink;

namespace {

std::vector<double> draw(const std::function<double(mc::Rng&)>& f, std::size_t n, std::uint64_t seed) {
    mc::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = f(rng);
    return v;
}

// Analytic CDF tabulated at sample quantiles and interpolated in log x.
std::function<double(double)> tabulated(const std::vector<double>& samples, const std::function<double(double)>& cdf) {
    auto s = samples;
    std::sort(s.begin(), s.end());
    std::vector<double> xs, fs;
    const std::size_t pts = 600;
    for (std::size_t i = 0; i <= pts; ++i) {
        const double x = s[std::min(s.size() - 1, i * (s.size() - 1) / pts)];
        if (!xs.empty() && x <= xs.back()) continue;
        xs.push_back(x);
        fs.push_back(cdf(x));
    }
    return [xs, fs](double x) {
        if (x <= xs.front()) return fs.front();
        if (x >= xs.back()) return fs.back();
        const auto it = std::upper_bound(xs.begin(), xs.end(), x);
        const std::size_t j = it - xs.begin();
        const double t = std::log(x / xs[j - 1]) / std::log(xs[j] / xs[j - 1]);
        return fs[j - 1] + t * (fs[j] - fs[j - 1]);
    };
}

channels::MalagaParams moderate() {
    channels::MalagaParams p;
    p.alpha = 5.4;
    p.beta = 4;
    p.xi = 1.1;
    p.mu1 = 10.0;
    return p;
}

RelaySystem fixed_system() {
    RelaySystem s;
    s.fso.alpha = 2.4;
    s.fso.beta = 2;
    s.fso.xi = 7.1;
    s.fso.mu1 = 30.0;
    s.rf = {2.5, 1.09, 2, 100.0};
    s.interf = {2.5, 3.5, 2, 1.0};
    return s;
}

}  // namespace

TEST_CASE("Malaga sampler against the analytic CDF") {
    auto strong = moderate();
    strong.alpha = 2.4;
    strong.beta = 2;
    strong.r = 2;
    auto gg = moderate();
    gg.gOverride = 0.0;
    gg.Omega = 1.0;
    gg.rho = 1.0;
    for (const auto& p : {moderate(), strong, gg}) {
        const auto s = draw([&](mc::Rng& r) { return mc::sample_fso_snr(p, r); }, 100000, 11);
        const auto F = tabulated(s, [&](double x) { return channels::cdf_fso(p, x); });
        CHECK(mc::ks_statistic(s, F) < mc::ks_critical_1pct(s.size()));
    }
}

TEST_CASE("Malaga sampler limits") {
    auto p = moderate();
    mc::SimConfig cfg;
    cfg.samples = 400000;
    const auto m = mc::estimate_mean([&](mc::Rng& r) { return mc::FsoSampler(p)(r); }, cfg);
    CHECK(std::abs(m.mean - p.mu1) < 3 * m.stdError);

    // Gamma-Gamma reduction: normalized irradiance is a product of two unit-mean Gammas.
    p.gOverride = 0.0;
    p.Omega = 1.0;
    p.xi = 100.0;
    const auto s = draw([&](mc::Rng& r) { return mc::sample_fso_snr(p, r); }, 20000, 5);
    const double h = p.xi * p.xi / (p.xi * p.xi + 1.0);
    const auto F = tabulated(s, [&](double x) {
        // P(X G <= y) by conditioning on G.
        const double y = x / p.mu1 / h;
        double acc = 0.0;
        const int n = 4000;
        for (int i = 0; i < n; ++i) {
            const double u = (i + 0.5) / n;
            const double g = boost::math::gamma_p_inv(double(p.beta), u) / p.beta;
            acc += boost::math::gamma_p(p.alpha, p.alpha * y / g);
        }
        return acc / n;
    });
    CHECK(mc::ks_statistic(s, F) < mc::ks_critical_1pct(s.size()));
}

TEST_CASE("generalized-K sampler") {
    mc::SimConfig cfg;
    cfg.samples = 400000;
    const channels::GenKParams p{2.5, 1.09, 2, 3.0};
    const auto m = mc::estimate_mean([&](mc::Rng& r) { return mc::GenKSampler(p)(r); }, cfg);
    CHECK(std::abs(m.mean - 2 * 3.0) < 3 * m.stdError);

    const auto s = draw([&](mc::Rng& r) { return mc::sample_genk(p, r); }, 100000, 3);
    const auto F = tabulated(s, [&](double x) { return channels::cdf_genk(p, x); });
    CHECK(mc::ks_statistic(s, F) < mc::ks_critical_1pct(s.size()));

    const channels::GenKParams flat{2.5, 1e4, 2, 1.0};
    const auto t = draw([&](mc::Rng& r) { return mc::sample_genk(flat, r); }, 10000, 4);
    const double d = mc::ks_statistic(t, [](double x) { return boost::math::gamma_p(5.0, 2.5 * x); });
    CHECK(d < mc::ks_critical_1pct(t.size()));
}

TEST_CASE("batch means") {
    mc::SimConfig cfg;
    cfg.samples = 10000;
    int covered = 0;
    for (int rep = 0; rep < 100; ++rep) {
        cfg.seed = 1000 + rep;
        const auto e = mc::estimate_mean(
            [](mc::Rng& r) { return std::gamma_distribution<double>(2.0, 1.5)(r); }, cfg);
        if (std::abs(e.mean - 3.0) <= 3 * e.stdError) ++covered;
    }
    CHECK(covered >= 95);

    const auto s = fixed_system();
    cfg.samples = 200000;
    cfg.seed = 42;
    cfg.threads = 1;
    const auto a = mc::simulate_outage(s, 3.16, cfg);
    cfg.threads = 4;
    const auto b = mc::simulate_outage(s, 3.16, cfg);
    CHECK(a.mean == b.mean);
    CHECK(a.stdError == b.stdError);
    CHECK(mc::simulate_outage(s, 1e-300, cfg).mean == 0.0);
    cfg.batches = 5;
    CHECK_THROWS_AS(mc::simulate_outage(s, 1.0, cfg), channels::ParameterError);
}

TEST_CASE("Monte-Carlo against fixed-gain metrics") {
    const auto s = fixed_system();
    mc::SimConfig cfg;
    cfg.seed = 9;
    for (double x : {1.0, 3.16, 10.0}) {
        const auto e = mc::simulate_outage(s, x, cfg);
        CHECK(std::abs(e.mean - fixed_gain::outage(s, x).value) <= 3 * e.stdError);
    }
    const auto ber = mc::simulate_ber(s, ModulationScheme::bpsk(), cfg);
    CHECK(std::abs(ber.mean - fixed_gain::avg_ber(s, ModulationScheme::bpsk()).value) <= 3 * ber.stdError);
    const auto cap = mc::simulate_capacity(s, cfg);
    CHECK(std::abs(cap.mean - fixed_gain::capacity(s).value) <= 3 * cap.stdError);
}

TEST_CASE("Monte-Carlo against CSI-assisted metrics") {
    auto s = fixed_system();
    s.scheme.kind = RelayKind::CsiAssisted;
    mc::SimConfig cfg;
    cfg.seed = 10;
    for (double x : {0.3, 3.16, 30.0}) {
        const auto e = mc::simulate_outage(s, x, cfg);
        CHECK(csi::outage_bound(s, x, false).value <= e.mean + 3 * e.stdError);
    }
    const auto cap = mc::simulate_capacity(s, cfg);
    const double c = csi::capacity_csi(s).value;
    CHECK(std::abs(cap.mean - c) <= 3 * cap.stdError);
    auto imdd = s;
    imdd.fso.r = 2;
    const auto capB = mc::simulate_capacity(imdd, cfg);
    CHECK(std::abs(capB.mean - csi::capacity_csi(imdd).value) <= 3 * capB.stdError);
}
