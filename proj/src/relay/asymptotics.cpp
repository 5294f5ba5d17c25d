#include "asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "kernels.hpp"

namespace foxlink::detail {

namespace {

constexpr double kTieTol = 1e-9;

bool on_family(double e, double base, double step) {
    const double n = (e - base) / step;
    return n > -kTieTol && std::abs(n - std::round(n)) < 1e-7;
}

void merge(std::vector<BranchTerm>& out, const BranchTerm& t) {
    for (auto& o : out) {
        if (o.branch == t.branch && o.k == t.k && std::abs(o.exponent - t.exponent) < kTieTol) {
            o.coefficient += t.coefficient;
            return;
        }
    }
    out.push_back(t);
}

void sort_terms(std::vector<BranchTerm>& v) {
    std::sort(v.begin(), v.end(), [](const BranchTerm& a, const BranchTerm& b) { return a.exponent < b.exponent; });
}

}  // namespace

std::vector<BranchTerm> fso_cdf_terms(const channels::MalagaParams& p, double maxExponent) {
    const auto d = channels::malaga_derive(p);
    const double r = p.r, x2 = p.xi * p.xi;
    std::vector<BranchTerm> out;
    for (const auto& b : fso_branches(d)) {
        const auto terms = specfun::residue_terms(fso_cdf_kernel(p, b.k).build(), maxExponent);
        const double scale = std::exp(b.logWeight + std::log(r) + log_fso_norm(p));
        for (const auto& t : terms) {
            BranchTerm bt{Branch::k_over_r, b.k, t.exponent, scale * t.coefficient};
            if (on_family(t.exponent, x2 / r, 1.0 / r)) {
                bt.branch = Branch::xi2_over_r;
                bt.k = 0;
            } else if (on_family(t.exponent, p.alpha / r, 1.0 / r)) {
                bt.branch = Branch::alpha_over_r;
                bt.k = 0;
            }
            merge(out, bt);
        }
    }
    sort_terms(out);
    return out;
}

std::vector<BranchTerm> sir_cdf_terms(const RelaySystem& sys, double maxExponent) {
    const auto terms = specfun::residue_terms(sir_cdf_kernel(sys).build(), maxExponent);
    const double scale = std::exp(log_sir_norm(sys));
    std::vector<BranchTerm> out;
    for (const auto& t : terms) {
        const Branch b = on_family(t.exponent, sys.rf.kappa, 1.0) ? Branch::kappa : Branch::Nm;
        merge(out, {b, 0, t.exponent, scale * t.coefficient});
    }
    sort_terms(out);
    return out;
}

double fso_min_exponent(const channels::MalagaParams& p) {
    const auto br = fso_branches(channels::malaga_derive(p));
    double e = std::min(p.xi * p.xi, p.alpha);
    for (const auto& b : br) e = std::min(e, double(b.k));
    return e / p.r;
}

double sir_min_exponent(const RelaySystem& sys) { return std::min(Nm(sys), sys.rf.kappa); }

std::vector<BranchTerm> leading_branches(const RelaySystem& sys, bool includeSir) {
    const auto& p = sys.fso;
    std::vector<BranchTerm> all{{Branch::xi2_over_r, 0, p.xi * p.xi / p.r, 0.0},
                                {Branch::alpha_over_r, 0, p.alpha / p.r, 0.0}};
    for (const auto& b : fso_branches(channels::malaga_derive(p)))
        all.push_back({Branch::k_over_r, b.k, double(b.k) / p.r, 0.0});
    if (includeSir) {
        all.push_back({Branch::Nm, 0, Nm(sys), 0.0});
        all.push_back({Branch::kappa, 0, sys.rf.kappa, 0.0});
    }
    double e = INFINITY;
    for (const auto& t : all) e = std::min(e, t.exponent);
    std::vector<BranchTerm> lead;
    for (const auto& t : all)
        if (std::abs(t.exponent - e) < kTieTol) lead.push_back(t);
    return lead;
}

AsymptoticReport make_report(const std::vector<BranchTerm>& terms, bool degenerate) {
    AsymptoticReport rep;
    rep.termBreakdown = terms;
    rep.degenerate = degenerate;
    if (terms.empty()) return rep;
    double e = INFINITY;
    for (const auto& t : terms) e = std::min(e, t.exponent);
    double coef = 0.0;
    int count = 0;
    for (const auto& t : terms) {
        if (std::abs(t.exponent - e) < kTieTol) {
            coef += t.coefficient;
            if (count++ == 0) rep.dominantBranch = t.branch;
        }
    }
    rep.diversityGain = e;
    rep.codingGain = coef > 0.0 ? std::pow(coef, -1.0 / e) : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

}  // namespace foxlink::detail
