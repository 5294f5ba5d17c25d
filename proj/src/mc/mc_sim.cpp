#include "foxlink/mc_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

namespace foxlink::mc {

namespace {

int worker_count(const SimConfig& cfg) {
    int n = cfg.threads;
    if (n <= 0) {
        if (const char* env = std::getenv("FOXLINK_THREADS")) n = std::atoi(env);
    }
    if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return std::min(n, cfg.batches);
}

Rng batch_rng(std::uint64_t seed, int batch) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(batch)};
    return Rng(seq);
}

// Sum of f over n draws for one batch.
using BatchSum = std::function<double(Rng&, std::int64_t)>;

Estimate batch_means(const SimConfig& cfg, const BatchSum& batchSum) {
    cfg.validate();
    const int B = cfg.batches;
    std::vector<std::int64_t> sizes(B, cfg.samples / B);
    for (std::int64_t i = 0; i < cfg.samples % B; ++i) ++sizes[i];
    std::vector<double> sums(B, 0.0);

    std::atomic<int> next{0};
    auto work = [&] {
        for (int b = next++; b < B; b = next++) {
            Rng rng = batch_rng(cfg.seed, b);
            sums[b] = batchSum(rng, sizes[b]);
        }
    };
    const int T = worker_count(cfg);
    std::vector<std::thread> pool;
    for (int t = 1; t < T; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    double total = 0.0;
    for (double s : sums) total += s;
    Estimate e;
    e.samples = cfg.samples;
    e.mean = total / static_cast<double>(cfg.samples);
    double ss = 0.0;
    for (int b = 0; b < B; ++b) {
        const double d = sums[b] / static_cast<double>(sizes[b]) - e.mean;
        ss += d * d;
    }
    e.stdError = std::sqrt(ss / (static_cast<double>(B) * (B - 1)));
    return e;
}

// Electrical SNR convention of the detection law; the IM/DD value is the
// heterodyne SNR rescaled by the second moment of the irradiance.
double detection_snr(const channels::MalagaParams& p, double g, double W) {
    if (p.r == 1) return p.mu1;
    const double a = p.alpha, x2 = p.xi * p.xi;
    return p.mu1 * a * x2 * (x2 + 2.0) * (g + W) / ((x2 + 1.0) * (x2 + 1.0)) /
           ((a + 1.0) * (2.0 * g * (g + 2.0 * W) + W * W * (1.0 + 1.0 / p.beta)));
}

}  // namespace

void SimConfig::validate() const {
    if (samples < 10000) throw channels::ParameterError("simulation needs at least 1e4 samples");
    if (batches < 10) throw channels::ParameterError("simulation needs at least 10 batches");
    if (samples < batches) throw channels::ParameterError("fewer samples than batches");
}

FsoSampler::FsoSampler(const channels::MalagaParams& p, MalagaSampling opts, double snrScale)
    : large_(p.alpha, 1.0 / p.alpha), small_(double(p.beta), 1.0 / p.beta), r_(p.r) {
    p.validate();
    const double g = p.g();
    losAmp_ = std::sqrt(p.Omega);
    coupledAmp_ = opts.omegaIsTotal ? 0.0 : std::sqrt(2.0 * p.b0 * p.rho);
    cosA_ = std::cos(opts.phiA);
    sinA_ = std::sin(opts.phiA);
    cosB_ = std::cos(opts.phiB);
    sinB_ = std::sin(opts.phiB);
    const double re = losAmp_ * cosA_ + coupledAmp_ * cosB_, im = losAmp_ * sinA_ + coupledAmp_ * sinB_;
    const double coherent = re * re + im * im;
    scatterSd_ = std::sqrt(g / 2.0);
    invXi2_ = 1.0 / (p.xi * p.xi);
    const double h = p.xi * p.xi / (p.xi * p.xi + 1.0);
    norm_ = 1.0 / (h * (g + coherent));
    muR_ = detection_snr(p, g, coherent) * snrScale;
}

double FsoSampler::operator()(Rng& rng) {
    const double X = large_(rng);
    const double sg = std::sqrt(small_(rng));
    const double re = sg * (losAmp_ * cosA_ + coupledAmp_ * cosB_) + scatterSd_ * normal_(rng);
    const double im = sg * (losAmp_ * sinA_ + coupledAmp_ * sinB_) + scatterSd_ * normal_(rng);
    const double hp = std::pow(unif_(rng), invXi2_);
    const double I = X * (re * re + im * im) * hp * norm_;
    return muR_ * (r_ == 1 ? I : I * I);
}

GenKSampler::GenKSampler(const channels::GenKParams& p)
    : fading_(p.multiplicity * p.m, 1.0 / p.m), shadow_(p.kappa, p.meanPower / p.kappa) {
    p.validate();
}

double sample_fso_snr(const channels::MalagaParams& p, Rng& rng) { return FsoSampler(p)(rng); }
double sample_genk(const channels::GenKParams& p, Rng& rng) { return GenKSampler(p)(rng); }

double e2e_sinr(const RelaySystem& sys, double g1, double g2) {
    if (sys.scheme.kind == RelayKind::FixedGain) return g1 * g2 / (g2 + sys.scheme.C);
    return g1 * g2 / (g1 + g2 + 1.0);
}

Estimate simulate(const RelaySystem& sys, const SimConfig& cfg, const std::function<double(double)>& f,
                  double fsoSnrScale) {
    sys.validate();
    return batch_means(cfg, [&](Rng& rng, std::int64_t n) {
        FsoSampler fso(sys.fso, {}, fsoSnrScale);
        GenKSampler rd(sys.rf), id(sys.interf);
        double acc = 0.0;
        for (std::int64_t i = 0; i < n; ++i) {
            const double g1 = fso(rng);
            const double g2 = rd(rng) / id(rng);
            acc += f(e2e_sinr(sys, g1, g2));
        }
        return acc;
    });
}

Estimate simulate_outage(const RelaySystem& sys, double gammaTh, const SimConfig& cfg) {
    return simulate(sys, cfg, [gammaTh](double g) { return g <= gammaTh ? 1.0 : 0.0; });
}

Estimate simulate_ber(const RelaySystem& sys, const ModulationScheme& mod, const SimConfig& cfg) {
    mod.validate();
    return simulate(sys, cfg, [&mod](double g) {
        double e = 0.0;
        for (double q : mod.q) e += boost::math::gamma_q(mod.p, q * g);
        return 0.5 * mod.phi * e;
    });
}

Estimate simulate_capacity(const RelaySystem& sys, const SimConfig& cfg) {
    const double scale = sys.fso.r == 2 ? std::numbers::e / (2.0 * std::numbers::pi) : 1.0;
    return simulate(sys, cfg, [](double g) { return 0.5 * std::log2(1.0 + g); }, scale);
}

Estimate estimate_mean(const std::function<double(Rng&)>& draw, const SimConfig& cfg) {
    return batch_means(cfg, [&](Rng& rng, std::int64_t n) {
        double acc = 0.0;
        for (std::int64_t i = 0; i < n; ++i) acc += draw(rng);
        return acc;
    });
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double F = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - F, F - i / n});
    }
    return d;
}

double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace foxlink::mc
