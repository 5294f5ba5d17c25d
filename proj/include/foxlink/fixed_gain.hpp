#pragma once

#include "foxlink/relay.hpp"

namespace foxlink::fixed_gain {

// P(gamma <= gammaTh) for gamma = gamma1 gamma2 / (gamma2 + C).
MetricResult outage(const RelaySystem& sys, double gammaTh);
MetricResult e2e_pdf(const RelaySystem& sys, double x);

// High-SNR expansion in 1/mu_r; branches with equal exponents raise DegeneracyError.
MetricResult outage_asymptotic(const RelaySystem& sys, double gammaTh);
// Outage ~ (codingGain * mu_r)^-diversityGain. Ties are flagged, not thrown.
AsymptoticReport diversity_coding_gain(const RelaySystem& sys, double gammaTh);

MetricResult avg_ber(const RelaySystem& sys, const ModulationScheme& mod);
MetricResult avg_ber_asymptotic(const RelaySystem& sys, const ModulationScheme& mod);

// Ergodic capacity with the 1/(2 ln 2) prefactor. For IM/DD (r = 2) this is the
// lower bound obtained with the SNR scaled by e/(2 pi); a note says so.
MetricResult capacity(const RelaySystem& sys);
// Same capacity with the R-D and interference links reduced to Nakagami-m.
MetricResult capacity_nakagami(const RelaySystem& sys);

// Terms of outage(x) ~ sum coefficient * (x / mu_r)^exponent.
std::vector<BranchTerm> outage_terms(const RelaySystem& sys, bool* degenerate = nullptr);

}  // namespace foxlink::fixed_gain
