#pragma once

#include <cmath>
#include <vector>

#include "foxlink/relay.hpp"

namespace foxlink::detail {

using specfun::FoxHSpec;
using specfun::GammaPair;

// Fox H parameters grouped by role: m lower pairs, n upper pairs, then the rest.
struct KernelParts {
    std::vector<GammaPair> lowerM, upperN, upperRest, lowerRest;

    FoxHSpec build() const {
        std::vector<GammaPair> up = upperN, lo = lowerM;
        up.insert(up.end(), upperRest.begin(), upperRest.end());
        lo.insert(lo.end(), lowerRest.begin(), lowerRest.end());
        return FoxHSpec(static_cast<int>(lowerM.size()), static_cast<int>(upperN.size()), up, lo);
    }
};

// Active mixture components k with log(A b_k / Gamma(k)).
struct FsoBranch {
    int k;
    double logWeight;
};

inline std::vector<FsoBranch> fso_branches(const channels::MalagaDerived& d) {
    std::vector<FsoBranch> out;
    for (std::size_t i = 0; i < d.logWeights.size(); ++i)
        if (std::isfinite(d.logWeights[i])) out.push_back({static_cast<int>(i) + 1, d.logWeights[i]});
    return out;
}

// log(xi^2 / Gamma(alpha)); the CDF carries an extra factor r.
inline double log_fso_norm(const channels::MalagaParams& p) { return std::log(p.xi * p.xi) - std::lgamma(p.alpha); }

// F1 = r * exp(log_fso_norm) sum_k w_k H[B^r x / mu_r] with this kernel.
inline KernelParts fso_cdf_kernel(const channels::MalagaParams& p, int k) {
    const double r = p.r, x2 = p.xi * p.xi;
    return {{{x2, r}, {p.alpha, r}, {double(k), r}}, {{1.0, r}}, {{x2 + 1.0, r}}, {{0.0, r}}};
}

inline KernelParts fso_ccdf_kernel(const channels::MalagaParams& p, int k) {
    const double r = p.r, x2 = p.xi * p.xi;
    return {{{x2, r}, {p.alpha, r}, {double(k), r}, {0.0, r}}, {}, {{x2 + 1.0, r}, {1.0, r}}, {}};
}

// Mellin moment E[gamma1^s] without the (mu_r / B^r)^s factor.
inline double log_fso_moment(const channels::MalagaParams& p, const std::vector<FsoBranch>& br, double s) {
    const double r = p.r, x2 = p.xi * p.xi;
    double acc = 0.0;
    double maxLog = -INFINITY;
    std::vector<double> logs;
    for (const auto& b : br) {
        const double l = b.logWeight + std::lgamma(x2 + r * s) + std::lgamma(p.alpha + r * s) +
                         std::lgamma(b.k + r * s) - std::lgamma(x2 + 1.0 + r * s);
        logs.push_back(l);
        maxLog = std::max(maxLog, l);
    }
    for (double l : logs) acc += std::exp(l - maxLog);
    return log_fso_norm(p) + maxLog + std::log(acc);
}

inline double log_sir_norm(const RelaySystem& s) {
    return -(std::lgamma(s.rf.multiplicity * s.rf.m) + std::lgamma(s.rf.kappa) +
             std::lgamma(s.interf.multiplicity * s.interf.m) + std::lgamma(s.interf.kappa));
}

inline double Nm(const RelaySystem& s) { return s.rf.multiplicity * s.rf.m; }
inline double LmI(const RelaySystem& s) { return s.interf.multiplicity * s.interf.m; }

// CDF2 = exp(log_sir_norm) G[z x] with this kernel.
inline KernelParts sir_cdf_kernel(const RelaySystem& s) {
    return {{{s.rf.kappa, 1.0}, {Nm(s), 1.0}}, {{1.0, 1.0}, {1.0 - s.interf.kappa, 1.0}, {1.0 - LmI(s), 1.0}}, {},
            {{0.0, 1.0}}};
}

inline KernelParts sir_ccdf_kernel(const RelaySystem& s) {
    return {{{0.0, 1.0}, {s.rf.kappa, 1.0}, {Nm(s), 1.0}}, {{1.0 - s.interf.kappa, 1.0}, {1.0 - LmI(s), 1.0}},
            {{1.0, 1.0}}, {}};
}

// log E[gamma2^u] without the z^-u factor.
inline double log_sir_moment(const RelaySystem& s, double u) {
    return log_sir_norm(s) + std::lgamma(Nm(s) + u) + std::lgamma(s.rf.kappa + u) + std::lgamma(LmI(s) - u) +
           std::lgamma(s.interf.kappa - u);
}

}  // namespace foxlink::detail
