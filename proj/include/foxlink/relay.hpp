#pragma once

#include <string>
#include <vector>

#include "foxlink/channels.hpp"
#include "foxlink/specfun.hpp"

namespace foxlink {

using specfun::MetricResult;

enum class RelayKind { FixedGain, CsiAssisted };

struct RelayScheme {
    RelayKind kind = RelayKind::FixedGain;
    double C = 1.7;  // fixed-gain constant, ignored for CSI-assisted relays
};

struct RelaySystem {
    channels::MalagaParams fso;
    channels::GenKParams rf;      // N, m, kappa, mean power of R-D
    channels::GenKParams interf;  // L, m_I, kappa_I, mean power of each I-D link
    RelayScheme scheme;

    double sirMean() const { return rf.meanPower / interf.meanPower; }
    void validate() const;
};

// Conditional error probability (phi/2) sum_j Q(p, q_j x), Q the regularized
// upper incomplete Gamma function.
struct ModulationScheme {
    std::string name;
    double phi = 1.0;
    double p = 0.5;
    std::vector<double> q{1.0};

    int n() const { return static_cast<int>(q.size()); }
    void validate() const;

    static ModulationScheme bpsk();
    static ModulationScheme qpsk();
    static ModulationScheme psk16();
    // Throws channels::ParameterError for unknown names.
    static ModulationScheme by_name(const std::string& name);
};

class DegeneracyError : public specfun::SpecfunError {
public:
    using specfun::SpecfunError::SpecfunError;
};

enum class Branch { Nm, kappa, xi2_over_r, alpha_over_r, k_over_r };
const char* branch_name(Branch b);

struct BranchTerm {
    Branch branch;
    int k = 0;            // FSO mixture index for k_over_r, else 0
    double exponent;      // power of 1/mu_r (or 1/gammaBar)
    double coefficient;   // metric ~ coefficient * snr^-exponent
};

struct AsymptoticReport {
    double diversityGain = 0.0;
    double codingGain = 0.0;
    Branch dominantBranch = Branch::kappa;
    bool degenerate = false;  // two branches share the minimal exponent
    std::vector<BranchTerm> termBreakdown;
};

// Empty converged result to accumulate several evaluations into.
MetricResult start_sum();
void accumulate(MetricResult& total, const MetricResult& part, double weight = 1.0);

}  // namespace foxlink
