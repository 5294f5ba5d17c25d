#include "foxlink/power_alloc.hpp"

#include <algorithm>
#include <cmath>

#include "foxlink/csi_assisted.hpp"

namespace foxlink::power {

namespace {

constexpr double kTieTol = 1e-9;

// mu1 giving the requested mu_r; mu_r is linear in mu1.
double mu1_for(const channels::MalagaParams& p, double muR) {
    auto q = p;
    q.mu1 = 1.0;
    return muR / channels::malaga_derive(q).mu_r;
}

}  // namespace

void PowerAllocProblem::validate() const {
    auto pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!pos(G) || !pos(A_F) || !pos(A_R) || !pos(a) || !pos(Ptot) || !(Scap > 0.0) || !(delta >= 0.0) || !pos(dF) ||
        !pos(relayGain) || !pos(interfPower))
        throw channels::ParameterError("power allocation problem: every coefficient must be positive");
}

PowerAllocProblem build_problem(const RelaySystem& sys, double gammaTh, const channels::PathLossParams& pathLoss,
                                const PowerBudget& budget) {
    if (!(gammaTh > 0.0)) throw channels::ParameterError("outage threshold must be positive");
    pathLoss.validate();
    auto csiSys = sys;
    csiSys.scheme.kind = RelayKind::CsiAssisted;
    const auto [ignored, terms] = csi::outage_asymptotic_csi(csiSys, gammaTh);

    double psiF = INFINITY;
    for (const auto& t : terms)
        for (int j = 2; j < 5; ++j) psiF = std::min(psiF, t.psi[j]);
    const double psiR = std::min(terms.front().psi[0], terms.front().psi[1]);

    double cF = 0.0, cR = 0.0;
    for (const auto& t : terms)
        for (int j = 2; j < 5; ++j)
            if (std::abs(t.psi[j] - psiF) < kTieTol)
                cF += t.fsoWeight * t.zeta[j] / t.psi[j];
    for (int j = 0; j < 2; ++j)
        if (std::abs(terms.front().psi[j] - psiR) < kTieTol)
            cR -= terms.front().sirWeight * terms.front().zeta[j] / terms.front().psi[j];

    PowerAllocProblem p;
    p.a = std::min(psiF, psiR);
    p.G = std::pow(gammaTh, p.a);
    p.delta = budget.delta;
    p.dF = budget.dF;
    p.Ptot = budget.Ptot;
    p.Scap = budget.Scap;
    p.relayGain = channels::avg_power(pathLoss, 1.0);
    p.interfPower = sys.interf.meanPower;
    p.A_F = std::exp(p.a * p.delta * p.dF) * cF;
    p.A_R = std::pow(p.interfPower / p.relayGain, p.a) * cR;
    p.validate();
    return p;
}

std::pair<double, double> optimal_split(const PowerAllocProblem& prob) {
    prob.validate();
    const double b = 1.0 / (prob.a + 1.0);
    // Ratio form keeps b -> 0 and wildly different coefficients finite.
    const double share = 1.0 / (1.0 + std::exp(b * (std::log(prob.A_R) - std::log(prob.A_F))));
    double PF = share * prob.Ptot;
    if (PF > prob.Scap) PF = prob.Scap;
    return {PF, prob.Ptot - PF};
}

double objective(const PowerAllocProblem& prob, double PF, double PR) {
    if (!(PF > 0.0) || !(PR > 0.0)) throw channels::ParameterError("objective: powers must be positive");
    return prob.G * (prob.A_F * std::pow(PF, -prob.a) + prob.A_R * std::pow(PR, -prob.a));
}

RelaySystem apply_split(const RelaySystem& sys, const PowerAllocProblem& prob, double PF, double PR) {
    if (!(PF > 0.0) || !(PR > 0.0)) throw channels::ParameterError("apply_split: powers must be positive");
    auto out = sys;
    out.fso.mu1 = mu1_for(sys.fso, PF * std::exp(-prob.delta * prob.dF));
    out.rf.meanPower = PR * prob.relayGain;
    out.interf.meanPower = prob.interfPower;
    return out;
}

}  // namespace foxlink::power
