#pragma once

#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "foxlink/relay.hpp"

namespace foxlink::csi {

// Two evaluation routes of the same quantity disagree.
class ConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Leading small-argument terms of the min-bound for one FSO mixture index k.
// Order: Nm, kappa, xi^2/r, alpha/r, k/r. zeta[0] and zeta[1] are stored with
// a leading minus sign; they enter the outage as -zeta/psi.
struct CsiAsymptoticTerms {
    int k = 1;
    std::array<double, 5> psi{};
    std::array<double, 5> zeta{};
    double fsoWeight = 0.0;  // xi^2 A b_k / (Gamma(alpha) Gamma(k))
    double sirWeight = 0.0;  // 1 / (Gamma(Nm) Gamma(kappa) Gamma(L m_I) Gamma(kappa_I))
};

// P(min(gamma1, gamma2) <= gammaTh). The product-of-CCDFs route is checked
// against direct composition when crossCheck is set.
MetricResult outage_bound(const RelaySystem& sys, double gammaTh, bool crossCheck = true);
// 1 minus the product of the hop CCDFs, evaluated as one two-variable H function.
MetricResult outage_bound_product(const RelaySystem& sys, double gammaTh);

// High-SNR form of outage_bound. FSO terms scale with gammaTh / mu_r, RF terms
// with gammaTh / sirMean. Coinciding Gamma poles raise DegeneracyError.
std::pair<MetricResult, std::vector<CsiAsymptoticTerms>> outage_asymptotic_csi(const RelaySystem& sys,
                                                                                double gammaTh);

// Average BER from the min-bound CDF.
MetricResult avg_ber_csi(const RelaySystem& sys, const ModulationScheme& mod);
// phi n / 2 minus a two-variable H sum. Loses relative accuracy once the BER
// falls towards the bivariate tolerance.
MetricResult avg_ber_csi_complement(const RelaySystem& sys, const ModulationScheme& mod);

// Ergodic capacity of gamma1 gamma2 / (gamma1 + gamma2 + 1) with the
// 1/(2 ln 2) prefactor, as one two-variable H sum. For r = 2 the FSO SNR is
// scaled by e/(2 pi) and the value is a lower bound.
MetricResult capacity_csi(const RelaySystem& sys);
// Same capacity with the RF and interference links reduced to Nakagami-m
// (kappa, kappa_I -> infinity).
MetricResult capacity_csi_nakagami(const RelaySystem& sys);
// Same capacity by quadrature of s e^-s M1(s) M2(s) / (2 ln 2).
MetricResult capacity_via_cmgf(const RelaySystem& sys);

// Laplace transforms of the CCDFs, int_0^inf e^{-s x} (1 - F(x)) dx.
double cmgf_fso(const channels::MalagaParams& p, double s);
double cmgf_sir(const RelaySystem& sys, double s);

}  // namespace foxlink::csi
