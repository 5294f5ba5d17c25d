#pragma once

#include <vector>

#include "foxlink/relay.hpp"

namespace foxlink::detail {

// F1(y) ~ sum coefficient * (B^r y / mu_r)^exponent, branches merged across k
// except the k/r family.
std::vector<BranchTerm> fso_cdf_terms(const channels::MalagaParams& p, double maxExponent);

// CDF2(y) ~ sum coefficient * (z y)^exponent.
std::vector<BranchTerm> sir_cdf_terms(const RelaySystem& sys, double maxExponent);

// Smallest exponent of each side.
double fso_min_exponent(const channels::MalagaParams& p);
double sir_min_exponent(const RelaySystem& sys);

// Branches whose exponent equals the minimum (within tolerance).
std::vector<BranchTerm> leading_branches(const RelaySystem& sys, bool includeSir);

// Terms are metric ~ coefficient * snr^-exponent.
AsymptoticReport make_report(const std::vector<BranchTerm>& terms, bool degenerate);

}  // namespace foxlink::detail
