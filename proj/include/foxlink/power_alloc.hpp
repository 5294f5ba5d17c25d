#pragma once

#include <limits>
#include <utility>

#include "foxlink/relay.hpp"

namespace foxlink::power {

struct PowerBudget {
    double Ptot = 1.0;
    double Scap = std::numeric_limits<double>::infinity();  // optical emission limit
    double delta = 0.5;                                      // optical attenuation, 1/m
    double dF = 1.0;                                         // FSO hop length, m
};

// Outage ~ G (A_F P_F^-a + A_R P_R^-a).
struct PowerAllocProblem {
    double G = 1.0;
    double A_F = 1.0;
    double A_R = 1.0;
    double a = 1.0;
    double Ptot = 1.0;
    double Scap = std::numeric_limits<double>::infinity();
    double delta = 0.0;
    double dF = 1.0;
    double relayGain = 1.0;  // received power per watt at the destination
    double interfPower = 1.0;

    void validate() const;
};

// Each hop keeps the coefficient of its own leading asymptotic term; both are
// carried at the common exponent a. The relay scheme of sys is not consulted.
PowerAllocProblem build_problem(const RelaySystem& sys, double gammaTh, const channels::PathLossParams& pathLoss,
                                const PowerBudget& budget = {});

// (P_F, P_R). P_F is clamped to Scap and the remainder goes to the relay.
std::pair<double, double> optimal_split(const PowerAllocProblem& prob);

double objective(const PowerAllocProblem& prob, double PF, double PR);

// sys with mu_r = P_F e^{-delta d_F} and gammaBar = P_R gain / interference.
RelaySystem apply_split(const RelaySystem& sys, const PowerAllocProblem& prob, double PF, double PR);

}  // namespace foxlink::power
