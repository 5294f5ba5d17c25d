#include "foxlink/fixed_gain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "asymptotics.hpp"
#include "foxlink/quadrature.hpp"
#include "kernels.hpp"

namespace foxlink::fixed_gain {

using namespace foxlink::detail;
using specfun::BivariateFoxHSpec;

namespace {

constexpr double kTieTol = 1e-9;

void require_fixed_gain(const RelaySystem& sys) {
    sys.validate();
    if (sys.scheme.kind != RelayKind::FixedGain)
        throw channels::ParameterError("fixed-gain metric requested for a CSI-assisted relay");
}

struct Setup {
    channels::MalagaDerived d;
    std::vector<FsoBranch> branches;
    double Br;  // B^r / mu_r
    double z;
    double Y;  // 1 / (C z)
};

Setup setup(const RelaySystem& sys, double snrScale = 1.0) {
    Setup s;
    s.d = channels::malaga_derive(sys.fso);
    s.branches = fso_branches(s.d);
    s.Br = std::pow(s.d.B, sys.fso.r) / (s.d.mu_r * snrScale);
    s.z = channels::sir_scale(sys.rf, sys.interf);
    s.Y = 1.0 / (sys.scheme.C * s.z);
    return s;
}

// E[gamma2^-t] kernel combined with the Mellin pair of (1+u)^-s - 1.
KernelParts coupling_kernel(const RelaySystem& sys) {
    return {{{0.0, 1.0}, {LmI(sys), 1.0}, {sys.interf.kappa, 1.0}},
            {{0.0, 1.0}, {1.0 - Nm(sys), 1.0}, {1.0 - sys.rf.kappa, 1.0}},
            {{1.0, 1.0}},
            {}};
}

// Gamma(xi^2+rs)Gamma(alpha+rs)Gamma(k+rs) / (Gamma(xi^2+1+rs)Gamma(tail+s)).
KernelParts fso_gap_kernel(const channels::MalagaParams& p, int k, double tail) {
    const double r = p.r, x2 = p.xi * p.xi;
    return {{{x2, r}, {p.alpha, r}, {double(k), r}}, {}, {{x2 + 1.0, r}, {tail, 1.0}}, {}};
}

// Shadowing-free coupling, kappa and kappa_I taken to infinity.
KernelParts nakagami_coupling_kernel(const RelaySystem& sys) {
    return {{{0.0, 1.0}, {LmI(sys), 1.0}}, {{0.0, 1.0}, {1.0 - Nm(sys), 1.0}}, {{1.0, 1.0}}, {}};
}

BivariateFoxHSpec gap_spec(const RelaySystem& sys, const KernelParts& s, bool nakagami = false) {
    BivariateFoxHSpec b;
    b.kernelS = s.build();
    b.kernelT = (nakagami ? nakagami_coupling_kernel(sys) : coupling_kernel(sys)).build();
    b.jointNumerator = {{0.0, 1.0, 1.0}};
    return b;
}

MetricResult clamp_result(MetricResult r, double hi) {
    if (r.value < 0.0 && r.value > -1e-9) r.value = 0.0;
    if (r.value > hi && r.value < hi + 1e-9) r.value = hi;
    return r;
}

// E[(1 + C/gamma2)^p] by quadrature over log gamma2.
double expect_gain_power(const RelaySystem& sys, double p) {
    const double C = sys.scheme.C;
    auto logf = [&](double v) {
        const double y = std::exp(v);
        const double f = channels::pdf_sir(sys.rf, sys.interf, y);
        if (!(f > 0.0)) return -std::numeric_limits<double>::infinity();
        return p * std::log1p(C / y) + std::log(f) + v;
    };
    const double v0 = -std::log(channels::sir_scale(sys.rf, sys.interf));
    double peak = logf(v0);
    double lo = v0, hi = v0;
    for (int dir : {-1, 1}) {
        double v = v0;
        for (int i = 0; i < 400; ++i) {
            v += dir * 0.5;
            const double l = logf(v);
            peak = std::max(peak, l);
            if (l < peak - 40.0) break;
        }
        (dir < 0 ? lo : hi) = v;
    }
    auto f = [&](double v) {
        const double l = logf(v) - peak;
        return l > -745.0 ? std::exp(l) : 0.0;
    };
    const auto q = quad::integrate(f, lo, hi, {1e-10, 1e-300, 100000, 32});
    return q.value * std::exp(peak);
}

}  // namespace

MetricResult outage(const RelaySystem& sys, double gammaTh) {
    require_fixed_gain(sys);
    if (!(gammaTh > 0.0)) throw channels::ParameterError("outage threshold must be positive");
    const auto s = setup(sys);
    const double X = s.Br * gammaTh;
    MetricResult total = start_sum();
    for (const auto& b : s.branches) {
        const double lw = b.logWeight + log_fso_norm(sys.fso);
        accumulate(total, specfun::fox_h(fso_cdf_kernel(sys.fso, b.k).build(), X, {}, lw + std::log(sys.fso.r)));
        accumulate(total, specfun::fox_h_bivariate(gap_spec(sys, fso_gap_kernel(sys.fso, b.k, 1.0)), X, s.Y,
                                                   specfun::ContourSpec::bivariateDefaults(),
                                                   lw + log_sir_norm(sys)));
    }
    return clamp_result(total, 1.0);
}

MetricResult e2e_pdf(const RelaySystem& sys, double x) {
    require_fixed_gain(sys);
    if (!(x > 0.0)) throw channels::ParameterError("pdf abscissa must be positive");
    const auto s = setup(sys);
    const double X = s.Br * x;
    const double r = sys.fso.r, x2 = sys.fso.xi * sys.fso.xi;
    MetricResult total = start_sum();
    for (const auto& b : s.branches) {
        const double lw = b.logWeight + log_fso_norm(sys.fso) - std::log(x);
        const FoxHSpec f1(3, 0, {{x2 + 1.0, r}}, {{x2, r}, {sys.fso.alpha, r}, {double(b.k), r}});
        accumulate(total, specfun::fox_h(f1, X, {}, lw));
        accumulate(total,
                   specfun::fox_h_bivariate(gap_spec(sys, fso_gap_kernel(sys.fso, b.k, 0.0)), X, s.Y,
                                            specfun::ContourSpec::bivariateDefaults(), lw + log_sir_norm(sys)),
                   -1.0);
    }
    if (total.value < 0.0 && total.value > -1e-12) total.value = 0.0;
    return total;
}

std::vector<BranchTerm> outage_terms(const RelaySystem& sys, bool* degenerate) {
    require_fixed_gain(sys);
    const auto s = setup(sys);
    const double psi1 = fso_min_exponent(sys.fso), psi2 = sir_min_exponent(sys);
    const double emax = std::min(psi1, psi2) + 1.0;
    const double Brx = std::pow(s.d.B, sys.fso.r);
    bool tie = false;
    std::vector<BranchTerm> out;

    std::vector<BranchTerm> fso, sir;
    try {
        fso = fso_cdf_terms(sys.fso, emax);
        sir = sir_cdf_terms(sys, emax);
    } catch (const specfun::CoincidingPoleError&) {
        if (!degenerate) throw DegeneracyError("asymptotic outage: two branches share an exponent");
        *degenerate = true;
        return out;
    }
    for (const auto& t : fso) {
        if (std::abs(t.exponent - psi2) < kTieTol) tie = true;
        if (!(t.exponent < psi2 - kTieTol)) continue;
        out.push_back({t.branch, t.k, t.exponent, t.coefficient * std::pow(Brx, t.exponent) *
                                                      expect_gain_power(sys, t.exponent)});
    }
    for (const auto& t : sir) {
        if (std::abs(t.exponent - psi1) < kTieTol) tie = true;
        if (!(t.exponent < psi1 - kTieTol)) continue;
        const double m1 = std::exp(log_fso_moment(sys.fso, s.branches, -t.exponent));
        out.push_back(
            {t.branch, 0, t.exponent, t.coefficient * std::pow(s.z * sys.scheme.C * Brx, t.exponent) * m1});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.exponent < b.exponent; });
    if (tie) {
        if (!degenerate) throw DegeneracyError("asymptotic outage: FSO and RF branches share an exponent");
        *degenerate = true;
    }
    return out;
}

MetricResult outage_asymptotic(const RelaySystem& sys, double gammaTh) {
    if (!(gammaTh > 0.0)) throw channels::ParameterError("outage threshold must be positive");
    const auto terms = outage_terms(sys);
    const double mu = channels::malaga_derive(sys.fso).mu_r;
    MetricResult r = start_sum();
    for (const auto& t : terms) r.value += t.coefficient * std::pow(gammaTh / mu, t.exponent);
    std::ostringstream os;
    os << "asymptotic expansion, mu_r/gamma_th = " << mu / gammaTh;
    if (mu / gammaTh < 1e3) os << " (likely outside the high-SNR regime)";
    r.diagnostics.notes.push_back(os.str());
    return r;
}

AsymptoticReport diversity_coding_gain(const RelaySystem& sys, double gammaTh) {
    if (!(gammaTh > 0.0)) throw channels::ParameterError("outage threshold must be positive");
    const auto lead = leading_branches(sys, true);
    bool degenerate = lead.size() > 1;
    std::vector<BranchTerm> terms;
    if (!degenerate) terms = outage_terms(sys, &degenerate);
    for (auto& t : terms) t.coefficient *= std::pow(gammaTh, t.exponent);
    auto rep = make_report(terms, degenerate);
    if (terms.empty()) {
        rep.termBreakdown = lead;
        rep.diversityGain = lead.front().exponent;
        rep.dominantBranch = lead.front().branch;
        rep.codingGain = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

MetricResult avg_ber(const RelaySystem& sys, const ModulationScheme& mod) {
    require_fixed_gain(sys);
    mod.validate();
    const auto s = setup(sys);
    MetricResult total = start_sum();
    const double pre = std::log(mod.phi / 2.0) - std::lgamma(mod.p);
    for (double q : mod.q) {
        const double X = s.Br / q;
        for (const auto& b : s.branches) {
            const double lw = pre + b.logWeight + log_fso_norm(sys.fso);
            auto f1 = fso_cdf_kernel(sys.fso, b.k);
            f1.upperN.push_back({1.0 - mod.p, 1.0});
            accumulate(total, specfun::fox_h(f1.build(), X, {}, lw + std::log(sys.fso.r)));
            auto gap = fso_gap_kernel(sys.fso, b.k, 1.0);
            gap.upperN.push_back({1.0 - mod.p, 1.0});
            accumulate(total, specfun::fox_h_bivariate(gap_spec(sys, gap), X, s.Y,
                                                       specfun::ContourSpec::bivariateDefaults(),
                                                       lw + log_sir_norm(sys)));
        }
    }
    return clamp_result(total, 1.0);
}

MetricResult avg_ber_asymptotic(const RelaySystem& sys, const ModulationScheme& mod) {
    mod.validate();
    const auto terms = outage_terms(sys);
    const double mu = channels::malaga_derive(sys.fso).mu_r;
    MetricResult r = start_sum();
    for (double q : mod.q)
        for (const auto& t : terms)
            r.value += mod.phi / (2.0 * std::tgamma(mod.p)) * t.coefficient *
                       std::exp(std::lgamma(mod.p + t.exponent) - t.exponent * std::log(q * mu));
    r.diagnostics.notes.push_back("asymptotic expansion");
    return r;
}

namespace {

MetricResult capacity_route(const RelaySystem& sys, bool nakagami) {
    require_fixed_gain(sys);
    const bool bound = sys.fso.r == 2;
    const auto s = setup(sys, bound ? std::numbers::e / (2.0 * std::numbers::pi) : 1.0);
    const double Y = nakagami ? sys.interf.m * sys.sirMean() / (sys.rf.m * sys.scheme.C) : s.Y;
    const double sirNorm = nakagami ? -std::lgamma(Nm(sys)) - std::lgamma(LmI(sys)) : log_sir_norm(sys);
    MetricResult total = start_sum();
    const double pre = -std::log(2.0 * std::numbers::ln2);
    for (const auto& b : s.branches) {
        const double lw = pre + b.logWeight + log_fso_norm(sys.fso);
        auto c1 = fso_ccdf_kernel(sys.fso, b.k);
        c1.lowerM.push_back({0.0, 1.0});
        c1.upperN.push_back({0.0, 1.0});
        accumulate(total, specfun::fox_h(c1.build(), s.Br, {}, lw + std::log(sys.fso.r)));
        auto gap = fso_gap_kernel(sys.fso, b.k, 1.0);
        gap.lowerM.push_back({0.0, 1.0});
        gap.upperN.push_back({0.0, 1.0});
        accumulate(total,
                   specfun::fox_h_bivariate(gap_spec(sys, gap, nakagami), s.Br, Y,
                                            specfun::ContourSpec::bivariateDefaults(), lw + sirNorm),
                   -1.0);
    }
    if (bound) total.diagnostics.notes.push_back("lower bound (IM/DD, SNR scaled by e/(2 pi))");
    return total;
}

}  // namespace

MetricResult capacity(const RelaySystem& sys) { return capacity_route(sys, false); }

MetricResult capacity_nakagami(const RelaySystem& sys) { return capacity_route(sys, true); }

}  // namespace foxlink::fixed_gain
