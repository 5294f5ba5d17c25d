#include "foxlink/csi_assisted.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "foxlink/quadrature.hpp"
#include "kernels.hpp"

namespace foxlink::csi {

using namespace foxlink::detail;
using specfun::BivariateFoxHSpec;

namespace {

void require_csi(const RelaySystem& sys) {
    sys.validate();
    if (sys.scheme.kind != RelayKind::CsiAssisted)
        throw channels::ParameterError("CSI-assisted metric requested for a fixed-gain relay");
}

double ir_scale(const RelaySystem& sys) { return sys.fso.r == 2 ? std::numbers::e / (2.0 * std::numbers::pi) : 1.0; }

// B^r / mu_r, optionally for an SNR multiplied by snrScale.
double fso_arg(const channels::MalagaParams& p, double snrScale = 1.0) { return channels::fso_scale(p) / snrScale; }

KernelParts with_upper(KernelParts k, double a) {
    k.upperN.push_back({a, 1.0});
    return k;
}

// Laplace transform of the FSO CCDF: (r K1 / s) sum_k w_k H[X / s].
KernelParts fso_laplace_kernel(const channels::MalagaParams& p, int k) {
    return with_upper(fso_ccdf_kernel(p, k), 0.0);
}

KernelParts sir_laplace_kernel(const RelaySystem& sys) { return with_upper(sir_ccdf_kernel(sys), 0.0); }

KernelParts nakagami_laplace_kernel(const RelaySystem& sys) {
    return {{{0.0, 1.0}, {Nm(sys), 1.0}}, {{1.0 - LmI(sys), 1.0}, {0.0, 1.0}}, {{1.0, 1.0}}, {}};
}

double log_fso_cdf_norm(const RelaySystem& sys) { return log_fso_norm(sys.fso) + std::log(sys.fso.r); }

MetricResult bivariate(const KernelParts& ks, const KernelParts& kt, specfun::JointGamma joint, double x, double y,
                       double logScale) {
    BivariateFoxHSpec b;
    b.kernelS = ks.build();
    b.kernelT = kt.build();
    b.jointNumerator = {joint};
    return specfun::fox_h_bivariate(b, x, y, specfun::ContourSpec::bivariateDefaults(), logScale);
}

// Gamma(x) that refuses to sit on a pole.
double gamma_regular(double x, const char* what) {
    if (x <= 0.0 && std::abs(x - std::round(x)) < 1e-9)
        throw DegeneracyError(std::string("CSI asymptotics: coinciding poles in ") + what);
    return std::tgamma(x);
}

double inverse_gap(double d, const char* what) {
    if (std::abs(d) < 1e-9) throw DegeneracyError(std::string("CSI asymptotics: coinciding poles in ") + what);
    return 1.0 / d;
}

double laplace_sum(const channels::MalagaParams& p, double X, double s) {
    MetricResult total = start_sum();
    for (const auto& b : fso_branches(channels::malaga_derive(p)))
        accumulate(total, specfun::fox_h(fso_laplace_kernel(p, b.k).build(), X / s, {},
                                         b.logWeight + log_fso_norm(p) + std::log(p.r)));
    return total.value / s;
}

double laplace_sir(const RelaySystem& sys, double s) {
    const double z = channels::sir_scale(sys.rf, sys.interf);
    return specfun::fox_h(sir_laplace_kernel(sys).build(), z / s, {}, log_sir_norm(sys)).value / s;
}

}  // namespace

MetricResult outage_bound_product(const RelaySystem& sys, double gammaTh) {
    require_csi(sys);
    if (!(gammaTh > 0.0)) throw channels::ParameterError("outage threshold must be positive");
    const double X = fso_arg(sys.fso) * gammaTh;
    const double Z = channels::sir_scale(sys.rf, sys.interf) * gammaTh;
    MetricResult prod = start_sum();
    for (const auto& b : fso_branches(channels::malaga_derive(sys.fso))) {
        BivariateFoxHSpec spec;
        spec.kernelS = fso_ccdf_kernel(sys.fso, b.k).build();
        spec.kernelT = sir_ccdf_kernel(sys).build();
        accumulate(prod, specfun::fox_h_bivariate(spec, X, Z, specfun::ContourSpec::bivariateDefaults(),
                                                  b.logWeight + log_fso_cdf_norm(sys) + log_sir_norm(sys)));
    }
    prod.value = 1.0 - prod.value;
    return prod;
}

MetricResult outage_bound(const RelaySystem& sys, double gammaTh, bool crossCheck) {
    require_csi(sys);
    if (!(gammaTh > 0.0)) throw channels::ParameterError("outage threshold must be positive");
    const double f1 = channels::cdf_fso(sys.fso, gammaTh);
    const double f2 = channels::cdf_sir(sys.rf, sys.interf, gammaTh);
    MetricResult out = start_sum();
    out.value = f1 + f2 - f1 * f2;
    if (!crossCheck) return out;

    const auto prod = outage_bound_product(sys, gammaTh);
    const double direct = (1.0 - f1) * (1.0 - f2);
    if (std::abs((1.0 - prod.value) - direct) > 1e-5 * direct + 1e-8) {
        std::ostringstream os;
        os << "outage bound: product route " << 1.0 - prod.value << " vs composition " << direct;
        throw ConsistencyError(os.str());
    }
    out.converged = prod.converged;
    out.errorEstimate = prod.errorEstimate;
    out.diagnostics = prod.diagnostics;
    return out;
}

std::pair<MetricResult, std::vector<CsiAsymptoticTerms>> outage_asymptotic_csi(const RelaySystem& sys,
                                                                                double gammaTh) {
    require_csi(sys);
    if (!(gammaTh > 0.0)) throw channels::ParameterError("outage threshold must be positive");
    const auto d = channels::malaga_derive(sys.fso);
    const auto& p = sys.fso;
    const double r = p.r, x2 = p.xi * p.xi, a = p.alpha;
    const double nm = Nm(sys), kap = sys.rf.kappa, lmi = LmI(sys), kapI = sys.interf.kappa;
    const double ratio = kap * sys.rf.m / (kapI * sys.interf.m);

    const double zeta1 = -std::pow(ratio, nm) * gamma_regular(kap - nm, "Nm/kappa") * std::tgamma(kapI + nm) *
                         std::tgamma(lmi + nm);
    const double zeta2 = -std::pow(ratio, kap) * gamma_regular(nm - kap, "Nm/kappa") * std::tgamma(kapI + kap) *
                         std::tgamma(lmi + kap);
    const double sirW = std::exp(log_sir_norm(sys));

    std::vector<CsiAsymptoticTerms> terms;
    for (const auto& b : fso_branches(d)) {
        CsiAsymptoticTerms t;
        t.k = b.k;
        t.psi = {nm, kap, x2 / r, a / r, b.k / r};
        t.zeta = {zeta1,
                  zeta2,
                  gamma_regular(a - x2, "xi^2/alpha") * gamma_regular(b.k - x2, "xi^2/k") * std::pow(d.B, x2) / r,
                  inverse_gap(x2 - a, "xi^2/alpha") * gamma_regular(b.k - a, "alpha/k") * std::pow(d.B, a) / r,
                  inverse_gap(x2 - b.k, "xi^2/k") * gamma_regular(a - b.k, "alpha/k") * std::pow(d.B, b.k) / r};
        t.fsoWeight = std::exp(b.logWeight + log_fso_norm(p));
        t.sirWeight = sirW;
        terms.push_back(t);
    }

    const double gbar = sys.sirMean();
    MetricResult res = start_sum();
    for (int j = 0; j < 2; ++j)
        res.value -= sirW * terms.front().zeta[j] / terms.front().psi[j] *
                     std::pow(gammaTh / gbar, terms.front().psi[j]);
    for (const auto& t : terms)
        for (int j = 2; j < 5; ++j) res.value += t.fsoWeight * t.zeta[j] / t.psi[j] * std::pow(gammaTh / d.mu_r, t.psi[j]);

    const double psiF = std::min({x2 / r, a / r, terms.front().psi[4]});
    const double psiR = std::min(nm, kap);
    std::ostringstream os;
    os << "asymptotic expansion, diversity order " << std::min(psiF, psiR);
    if (std::abs(psiF - psiR) < 1e-9) os << " (FSO and RF exponents tie)";
    res.diagnostics.notes.push_back(os.str());
    return {res, terms};
}

MetricResult avg_ber_csi(const RelaySystem& sys, const ModulationScheme& mod) {
    require_csi(sys);
    mod.validate();
    const double X = fso_arg(sys.fso), z = channels::sir_scale(sys.rf, sys.interf);
    const double pre = std::log(mod.phi / 2.0) - std::lgamma(mod.p);
    const auto br = fso_branches(channels::malaga_derive(sys.fso));
    MetricResult total = start_sum();
    for (double q : mod.q) {
        accumulate(total, specfun::fox_h(with_upper(sir_cdf_kernel(sys), 1.0 - mod.p).build(), z / q, {},
                                         pre + log_sir_norm(sys)));
        for (const auto& b : br) {
            const double lw = pre + b.logWeight + log_fso_cdf_norm(sys);
            accumulate(total,
                       specfun::fox_h(with_upper(fso_cdf_kernel(sys.fso, b.k), 1.0 - mod.p).build(), X / q, {}, lw));
            accumulate(total,
                       bivariate(fso_cdf_kernel(sys.fso, b.k), sir_cdf_kernel(sys), {mod.p, -1.0, -1.0}, X / q, z / q,
                                 lw + log_sir_norm(sys)),
                       -1.0);
        }
    }
    total.value = std::clamp(total.value, 0.0, mod.phi * mod.n() / 2.0);
    return total;
}

MetricResult avg_ber_csi_complement(const RelaySystem& sys, const ModulationScheme& mod) {
    require_csi(sys);
    mod.validate();
    const double X = fso_arg(sys.fso), z = channels::sir_scale(sys.rf, sys.interf);
    const double pre = std::log(mod.phi / 2.0) - std::lgamma(mod.p);
    MetricResult total = start_sum();
    for (double q : mod.q)
        for (const auto& b : fso_branches(channels::malaga_derive(sys.fso)))
            accumulate(total,
                       bivariate(fso_ccdf_kernel(sys.fso, b.k), sir_ccdf_kernel(sys), {mod.p, -1.0, -1.0}, X / q,
                                 z / q, pre + b.logWeight + log_fso_cdf_norm(sys) + log_sir_norm(sys)),
                       -1.0);
    total.value += mod.phi * mod.n() / 2.0;
    return total;
}

namespace {

MetricResult capacity_bivariate(const RelaySystem& sys, const KernelParts& kt, double y, double logNormT) {
    const double X = fso_arg(sys.fso, ir_scale(sys));
    const double pre = -std::log(2.0 * std::numbers::ln2);
    MetricResult total = start_sum();
    for (const auto& b : fso_branches(channels::malaga_derive(sys.fso)))
        accumulate(total, bivariate(fso_laplace_kernel(sys.fso, b.k), kt, {0.0, 1.0, 1.0}, X, y,
                                    pre + b.logWeight + log_fso_cdf_norm(sys) + logNormT));
    if (sys.fso.r == 2) total.diagnostics.notes.push_back("lower bound (IM/DD, SNR scaled by e/(2 pi))");
    return total;
}

}  // namespace

MetricResult capacity_csi(const RelaySystem& sys) {
    require_csi(sys);
    return capacity_bivariate(sys, sir_laplace_kernel(sys), channels::sir_scale(sys.rf, sys.interf),
                              log_sir_norm(sys));
}

MetricResult capacity_csi_nakagami(const RelaySystem& sys) {
    require_csi(sys);
    const double y = sys.rf.m / (sys.interf.m * sys.sirMean());
    return capacity_bivariate(sys, nakagami_laplace_kernel(sys), y, -std::lgamma(Nm(sys)) - std::lgamma(LmI(sys)));
}

double cmgf_fso(const channels::MalagaParams& p, double s) {
    p.validate();
    if (!(s > 0.0)) throw channels::ParameterError("cmgf_fso: s must be positive");
    return laplace_sum(p, fso_arg(p), s);
}

double cmgf_sir(const RelaySystem& sys, double s) {
    if (!(s > 0.0)) throw channels::ParameterError("cmgf_sir: s must be positive");
    return laplace_sir(sys, s);
}

MetricResult capacity_via_cmgf(const RelaySystem& sys) {
    require_csi(sys);
    const double X = fso_arg(sys.fso, ir_scale(sys));
    auto g = [&](double v) {
        const double s = std::exp(v);
        if (s > 800.0) return 0.0;
        return s * s * std::exp(-s) * laplace_sum(sys.fso, X, s) * laplace_sir(sys, s);
    };
    // Bracket the support on a coarse log grid, then integrate adaptively.
    std::vector<double> grid, vals;
    for (double v = -60.0; v <= 7.0; v += 0.5) {
        grid.push_back(v);
        vals.push_back(g(v));
    }
    const double peak = *std::max_element(vals.begin(), vals.end());
    if (!(peak > 0.0)) throw channels::ConvergenceError("capacity_via_cmgf: integrand vanishes");
    std::size_t lo = 0, hi = grid.size() - 1;
    while (lo + 1 < grid.size() && vals[lo + 1] < 1e-16 * peak) ++lo;
    while (hi > 0 && vals[hi - 1] < 1e-16 * peak) --hi;
    const auto q = quad::integrate(g, grid[lo], grid[hi], {1e-9, 1e-14 * peak, 20000, 16});
    MetricResult res;
    res.value = q.value / (2.0 * std::numbers::ln2);
    res.errorEstimate = q.error / (2.0 * std::numbers::ln2);
    res.converged = q.converged;
    if (!res.converged) throw channels::ConvergenceError("capacity_via_cmgf: quadrature did not converge");
    if (sys.fso.r == 2) res.diagnostics.notes.push_back("lower bound (IM/DD, SNR scaled by e/(2 pi))");
    return res;
}

}  // namespace foxlink::csi
