#include <cmath>
#include <numbers>

#include "foxlink/relay.hpp"

namespace foxlink {

using channels::ParameterError;

void RelaySystem::validate() const {
    fso.validate();
    rf.validate();
    interf.validate();
    if (scheme.kind == RelayKind::FixedGain && !(scheme.C > 0.0))
        throw ParameterError("fixed-gain constant C must be positive");
}

void ModulationScheme::validate() const {
    if (!(phi > 0.0)) throw ParameterError("modulation phi must be positive");
    if (!(p > 0.0)) throw ParameterError("modulation p must be positive");
    if (q.empty()) throw ParameterError("modulation needs at least one q_j");
    for (double v : q)
        if (!(v > 0.0)) throw ParameterError("modulation q_j must be positive");
}

ModulationScheme ModulationScheme::bpsk() { return {"bpsk", 1.0, 0.5, {1.0}}; }

// Gray-coded QPSK bit error probability, gamma the SNR per symbol.
ModulationScheme ModulationScheme::qpsk() { return {"qpsk", 1.0, 0.5, {0.5}}; }

// Nearest-neighbour symbol error divided by log2 M, gamma the SNR per symbol.
ModulationScheme ModulationScheme::psk16() {
    const double s = std::sin(std::numbers::pi / 16.0);
    return {"16psk", 0.5, 0.5, {s * s}};
}

ModulationScheme ModulationScheme::by_name(const std::string& name) {
    if (name == "bpsk") return bpsk();
    if (name == "qpsk" || name == "4psk") return qpsk();
    if (name == "16psk") return psk16();
    throw ParameterError("unknown modulation '" + name + "'");
}

const char* branch_name(Branch b) {
    switch (b) {
        case Branch::Nm: return "Nm";
        case Branch::kappa: return "kappa";
        case Branch::xi2_over_r: return "xi2_over_r";
        case Branch::alpha_over_r: return "alpha_over_r";
        case Branch::k_over_r: return "k_over_r";
    }
    return "?";
}

MetricResult start_sum() {
    MetricResult r;
    r.converged = true;
    return r;
}

void accumulate(MetricResult& total, const MetricResult& part, double weight) {
    total.value += weight * part.value;
    total.errorEstimate += std::abs(weight) * part.errorEstimate;
    total.converged = total.converged && part.converged;
    total.diagnostics.evaluations += part.diagnostics.evaluations;
    for (const auto& n : part.diagnostics.notes) {
        bool seen = false;
        for (const auto& m : total.diagnostics.notes) seen = seen || m == n;
        if (!seen) total.diagnostics.notes.push_back(n);
    }
    if (std::isnan(total.diagnostics.abscissaS)) {
        total.diagnostics.abscissaS = part.diagnostics.abscissaS;
        total.diagnostics.abscissaT = part.diagnostics.abscissaT;
    }
    total.diagnostics.truncationS = std::max(total.diagnostics.truncationS, part.diagnostics.truncationS);
    total.diagnostics.truncationT = std::max(total.diagnostics.truncationT, part.diagnostics.truncationT);
}

}  // namespace foxlink
