#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "foxlink/relay.hpp"

// Monte-Carlo oracle. Only parameter types are shared with the analytic code.
namespace foxlink::mc {

using Rng = std::mt19937_64;

struct SimConfig {
    std::int64_t samples = 1000000;
    std::uint64_t seed = 1;
    int batches = 20;
    int threads = 0;  // 0: FOXLINK_THREADS or hardware concurrency

    void validate() const;
};

struct Estimate {
    double mean = 0.0;
    double stdError = 0.0;
    std::int64_t samples = 0;
};

// Phases of the LOS and coupled-scatter terms. With omegaIsTotal the Omega
// field is the full coherent power and only one coherent term is drawn.
struct MalagaSampling {
    double phiA = 0.0;
    double phiB = 0.0;
    bool omegaIsTotal = true;
};

class FsoSampler {
public:
    explicit FsoSampler(const channels::MalagaParams& p, MalagaSampling opts = {}, double snrScale = 1.0);
    double operator()(Rng& rng);

private:
    std::gamma_distribution<double> large_, small_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    double losAmp_, coupledAmp_, cosA_, sinA_, cosB_, sinB_, scatterSd_, invXi2_, norm_, muR_;
    int r_;
};

class GenKSampler {
public:
    explicit GenKSampler(const channels::GenKParams& p);
    double operator()(Rng& rng) { return fading_(rng) * shadow_(rng); }

private:
    std::gamma_distribution<double> fading_, shadow_;
};

double sample_fso_snr(const channels::MalagaParams& p, Rng& rng);
double sample_genk(const channels::GenKParams& p, Rng& rng);

// End-to-end SINR: gamma1 gamma2 / (gamma2 + C) or gamma1 gamma2 / (gamma1 + gamma2 + 1).
double e2e_sinr(const RelaySystem& sys, double g1, double g2);

// Batch-means estimate of E[f(gamma)] for the end-to-end SINR. Batch b uses
// its own generator seeded from (seed, b).
Estimate simulate(const RelaySystem& sys, const SimConfig& cfg, const std::function<double(double)>& f,
                  double fsoSnrScale = 1.0);

Estimate simulate_outage(const RelaySystem& sys, double gammaTh, const SimConfig& cfg);
Estimate simulate_ber(const RelaySystem& sys, const ModulationScheme& mod, const SimConfig& cfg);
// E[log2(1 + gamma)] / 2. For r = 2 the FSO SNR is scaled by e/(2 pi), the
// same convention as the analytic IM/DD capacity.
Estimate simulate_capacity(const RelaySystem& sys, const SimConfig& cfg);

// Batch-means estimate of E[draw(rng)]. draw is called from several threads at
// once and must keep its state local.
Estimate estimate_mean(const std::function<double(Rng&)>& draw, const SimConfig& cfg);

// sup |F_n - F| for unsorted samples.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Asymptotic 1% critical value of the one-sample KS statistic.
double ks_critical_1pct(std::size_t n);

}  // namespace foxlink::mc
