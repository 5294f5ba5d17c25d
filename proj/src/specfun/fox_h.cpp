#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <sstream>

#include "foxlink/quadrature.hpp"
#include "foxlink/specfun.hpp"
#include "kernel.hpp"

namespace foxlink::specfun {

using detail::Kernel1D;
using detail::make_kernel;

FoxHSpec::FoxHSpec(int m_, int n_, std::vector<GammaPair> upper_, std::vector<GammaPair> lower_)
    : m(m_), n(n_), upper(std::move(upper_)), lower(std::move(lower_)) {
    validate();
}

void FoxHSpec::validate() const {
    if (m < 0 || n < 0 || m > q() || n > p()) throw ContourError("FoxHSpec: orders violate 0<=m<=q, 0<=n<=p");
    for (const auto& g : upper)
        if (!(g.scale > 0.0)) throw ContourError("FoxHSpec: non-positive scale in upper parameters");
    for (const auto& g : lower)
        if (!(g.scale > 0.0)) throw ContourError("FoxHSpec: non-positive scale in lower parameters");
    if (!(leftBound() < rightBound())) {
        std::ostringstream os;
        os << "FoxHSpec: left poles (rightmost " << leftBound() << ") and right poles (leftmost " << rightBound()
           << ") overlap";
        throw ContourError(os.str());
    }
}

double FoxHSpec::leftBound() const { return make_kernel(*this).left(); }
double FoxHSpec::rightBound() const { return make_kernel(*this).right(); }

FoxHSpec MeijerGSpec::toFox() const {
    std::vector<GammaPair> up, lo;
    for (double v : a) up.push_back({v, 1.0});
    for (double v : b) lo.push_back({v, 1.0});
    return FoxHSpec(m, n, std::move(up), std::move(lo));
}

cplx log_kernel(const FoxHSpec& spec, cplx s) { return make_kernel(spec).log_value(s); }

namespace {

constexpr double kPi = std::numbers::pi;

// Admissible abscissa window; the envelope minimisation keeps clear of the poles.
std::pair<double, double> abscissa_window(double left, double right) {
    if (std::isfinite(left) && std::isfinite(right)) {
        const double gap = right - left;
        return {left + 1e-3 * gap, right - 1e-3 * gap};
    }
    if (std::isfinite(left)) return {left + 1e-3, left + 60.0};
    if (std::isfinite(right)) return {right - 60.0, right - 1e-3};
    return {-60.0, 60.0};
}

// Envelope of log|integrand| near the real axis; reciprocal Gammas can vanish
// on the axis itself, so a second probe slightly off it is included.
double envelope(const Kernel1D& k, double c, double logx) {
    const double e0 = k.log_value({c, 0.0}).real();
    const double e1 = k.log_value({c, 0.75}).real();
    double e = std::max(std::isnan(e0) ? -INFINITY : e0, std::isnan(e1) ? -INFINITY : e1);
    return e - c * logx;
}

// Saddle-point style choice: minimise the integrand envelope inside the window,
// which keeps cancellation along the contour small.
double choose_abscissa(const Kernel1D& k, double logx) {
    auto [lo, hi] = abscissa_window(k.left(), k.right());
    constexpr int kGrid = 40;
    int best = 0;
    double bestVal = INFINITY;
    for (int i = 0; i <= kGrid; ++i) {
        const double c = lo + (hi - lo) * i / kGrid;
        const double v = envelope(k, c, logx);
        if (v < bestVal) {
            bestVal = v;
            best = i;
        }
    }
    double a = lo + (hi - lo) * std::max(0, best - 1) / kGrid;
    double b = lo + (hi - lo) * std::min(kGrid, best + 1) / kGrid;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double f1 = envelope(k, x1, logx), f2 = envelope(k, x2, logx);
    for (int it = 0; it < 40 && (b - a) > 1e-6 * (1.0 + std::abs(a)); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = envelope(k, x1, logx);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = envelope(k, x2, logx);
        }
    }
    return 0.5 * (a + b);
}

struct Truncation {
    double limit;
    double peak;
    bool ok;
};

// Walk up the imaginary axis until the log-magnitude has dropped `drop`
// nepers below the running peak for several consecutive probes.
template <class LogMag>
Truncation find_truncation(LogMag&& logmag, double drop, double cap = 1e5) {
    double peak = logmag(0.0);
    double tau = 0.0;
    int below = 0;
    while (tau < cap) {
        tau += std::max(0.25, 0.05 * tau);
        const double v = logmag(tau);
        if (std::isfinite(v)) peak = std::max(peak, v);
        if (!(v > peak - drop)) {
            if (++below >= 4 && tau >= 2.0) return {tau, peak, true};
        } else {
            below = 0;
        }
    }
    return {cap, peak, false};
}

}  // namespace

MetricResult fox_h(const FoxHSpec& spec, double x, const ContourSpec& contour, double logScale) {
    spec.validate();
    if (!(x > 0.0)) throw SpecfunError("fox_h: argument must be positive");
    const Kernel1D k = make_kernel(spec);
    const double logx = std::log(x);

    MetricResult out;
    double c = contour.realPartS;
    if (std::isnan(c)) {
        c = choose_abscissa(k, logx);
    } else if (!(c > k.left() && c < k.right())) {
        throw ContourError("fox_h: requested abscissa does not separate the poles");
    }
    out.diagnostics.abscissaS = c;

    auto logmag = [&](double tau) { return k.log_value({c, tau}).real() - c * logx; };
    Truncation trunc{contour.truncation, logmag(0.0), true};
    if (contour.truncation <= 0.0) {
        trunc = find_truncation(logmag, contour.dropNepers);
    } else {
        for (int i = 1; i <= 64; ++i) trunc.peak = std::max(trunc.peak, logmag(contour.truncation * i / 64.0));
    }
    out.diagnostics.truncationS = trunc.limit;
    if (!trunc.ok) out.diagnostics.notes.push_back("integrand did not decay before the truncation cap");

    const double peak = trunc.peak;
    auto integrand = [&](double tau) {
        const cplx s(c, tau);
        const cplx lv = k.log_value(s) - s * logx - peak;
        if (!(lv.real() > -745.0)) return 0.0;
        return std::exp(lv).real();
    };

    const double scaleLog = logScale + peak;
    quad::Options opt;
    opt.relTol = contour.relTol;
    const double absScaled = contour.absTol * std::exp(-scaleLog);
    opt.absTol = std::max(std::isfinite(absScaled) ? absScaled : 1e300, 1e-15 * trunc.limit);
    opt.maxEvals = contour.maxEvals;
    const double oscillation = trunc.limit * (std::abs(logx) + std::log1p(trunc.limit)) / kPi;
    opt.initialSegments = static_cast<int>(std::clamp(oscillation, 16.0, 400.0));
    const auto q = quad::integrate(integrand, 0.0, trunc.limit, opt);

    const double factor = std::exp(scaleLog) / kPi;
    out.value = q.value * factor;
    out.errorEstimate = q.error * factor;
    out.converged = q.converged && trunc.ok && std::isfinite(out.value);
    out.diagnostics.evaluations = q.evaluations;
    return out;
}

MetricResult meijer_g(const MeijerGSpec& spec, double x, const ContourSpec& contour, double logScale) {
    return fox_h(spec.toFox(), x, contour, logScale);
}

namespace {

struct Pole {
    double exponent;  // -s*
    int family;
    int order;
};

struct PoleCmp {
    bool operator()(const Pole& a, const Pole& b) const { return a.exponent > b.exponent; }
};

bool at_pole(double arg) {
    const double r = std::round(arg);
    return r <= 0.0 && std::abs(arg - r) <= 1e-12 * std::max(1.0, std::abs(arg));
}

// Residue of kernel(s) at s* = -(shift_f + order)/scale_f, returned as
// log|coef| and sign (sign 0 when a reciprocal Gamma cancels the pole).
SignedLog residue_coefficient(const Kernel1D& k, int family, int order) {
    const auto& f = k.num[family];
    const double s = -(f.shift + order) / f.scale;
    double logAbs = -std::lgamma(order + 1.0) - std::log(f.scale);
    int sign = (order % 2 == 0) ? 1 : -1;
    for (std::size_t i = 0; i < k.num.size(); ++i) {
        if (static_cast<int>(i) == family) continue;
        const double arg = k.num[i].shift + k.num[i].scale * s;
        if (at_pole(arg)) throw CoincidingPoleError("residue: coinciding poles from two Gamma factors");
        const auto g = log_gamma_real(arg);
        logAbs += g.logAbs;
        sign *= g.sign;
    }
    for (const auto& t : k.den) {
        const double arg = t.shift + t.scale * s;
        if (at_pole(arg)) return {-INFINITY, 0};
        const auto g = log_gamma_real(arg);
        logAbs -= g.logAbs;
        sign *= g.sign;
    }
    return {logAbs, sign};
}

std::vector<int> left_families(const Kernel1D& k) {
    std::vector<int> fam;
    for (std::size_t i = 0; i < k.num.size(); ++i)
        if (k.num[i].scale > 0) fam.push_back(static_cast<int>(i));
    return fam;
}

void check_distinct(const std::vector<Pole>& poles) {
    for (std::size_t i = 1; i < poles.size(); ++i) {
        const double a = poles[i - 1].exponent, b = poles[i].exponent;
        if (std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)))
            throw CoincidingPoleError("residue: two Gamma factors share a pole");
    }
}

}  // namespace

std::vector<PowerTerm> residue_terms(const FoxHSpec& spec, double maxExponent) {
    spec.validate();
    const Kernel1D k = make_kernel(spec);
    std::vector<Pole> poles;
    for (int f : left_families(k)) {
        const auto& t = k.num[f];
        for (int order = 0;; ++order) {
            const double e = (t.shift + order) / t.scale;
            if (e > maxExponent + 1e-12) break;
            poles.push_back({e, f, order});
        }
    }
    std::sort(poles.begin(), poles.end(), [](const Pole& a, const Pole& b) { return a.exponent < b.exponent; });
    check_distinct(poles);
    std::vector<PowerTerm> out;
    for (const auto& p : poles) {
        const auto c = residue_coefficient(k, p.family, p.order);
        if (c.sign == 0) continue;
        out.push_back({p.exponent, c.sign * std::exp(c.logAbs)});
    }
    return out;
}

PowerTerm leading_term(const FoxHSpec& spec) {
    spec.validate();
    const Kernel1D k = make_kernel(spec);
    const auto fams = left_families(k);
    if (fams.empty()) throw SpecfunError("leading_term: kernel has no left poles");
    std::vector<Pole> first;
    for (int f : fams) first.push_back({k.num[f].shift / k.num[f].scale, f, 0});
    std::sort(first.begin(), first.end(), [](const Pole& a, const Pole& b) { return a.exponent < b.exponent; });
    if (first.size() > 1 &&
        std::abs(first[0].exponent - first[1].exponent) <= 1e-10 * std::max(1.0, std::abs(first[0].exponent)))
        throw CoincidingPoleError("leading_term: two poles share the minimal exponent");
    const auto c = residue_coefficient(k, first[0].family, 0);
    return {first[0].exponent, c.sign == 0 ? 0.0 : c.sign * std::exp(c.logAbs)};
}

MetricResult residue_series(const FoxHSpec& spec, double x, int maxTerms, double relTol, double logScale) {
    spec.validate();
    if (!(x > 0.0)) throw SpecfunError("residue_series: argument must be positive");
    const Kernel1D k = make_kernel(spec);
    const auto fams = left_families(k);
    MetricResult out;
    if (fams.empty()) {
        out.converged = true;
        out.diagnostics.notes.push_back("no left poles");
        return out;
    }
    double mu = 0.0;
    for (const auto& g : spec.lower) mu += g.scale;
    for (const auto& g : spec.upper) mu -= g.scale;

    std::priority_queue<Pole, std::vector<Pole>, PoleCmp> heap;
    for (int f : fams) heap.push({k.num[f].shift / k.num[f].scale, f, 0});

    const double logx = std::log(x);
    double sum = 0.0, maxAbs = 0.0;
    int small = 0, count = 0;
    double tail = 0.0;
    double prevExponent = -INFINITY;
    bool stopped = false;
    std::vector<double> recent;
    while (count < maxTerms && !heap.empty()) {
        const Pole p = heap.top();
        heap.pop();
        if (std::abs(p.exponent - prevExponent) <= 1e-10 * std::max(1.0, std::abs(p.exponent)))
            throw CoincidingPoleError("residue_series: two Gamma factors share a pole");
        prevExponent = p.exponent;
        heap.push({(k.num[p.family].shift + p.order + 1) / k.num[p.family].scale, p.family, p.order + 1});
        const auto c = residue_coefficient(k, p.family, p.order);
        ++count;
        double term = 0.0;
        if (c.sign != 0) {
            const double lt = c.logAbs + p.exponent * logx + logScale;
            term = lt > 709.0 ? c.sign * INFINITY : c.sign * std::exp(lt);
        }
        sum += term;
        maxAbs = std::max(maxAbs, std::abs(term));
        recent.push_back(std::abs(term));
        if (recent.size() > 4) recent.erase(recent.begin());
        if (std::abs(term) <= relTol * std::abs(sum) || term == 0.0) {
            if (++small >= 4 && count >= 8) {
                stopped = true;
                break;
            }
        } else {
            small = 0;
        }
        if (!std::isfinite(sum)) break;
    }
    for (double r : recent) tail += r;
    const double roundoff = 4e-16 * maxAbs * std::sqrt(static_cast<double>(count));
    out.value = sum;
    out.errorEstimate = tail + roundoff;
    out.diagnostics.evaluations = static_cast<std::size_t>(count);
    if (mu < 0.0) out.diagnostics.notes.push_back("series is only asymptotic (mu < 0)");
    if (!stopped) out.diagnostics.notes.push_back("series did not settle within maxTerms");
    if (roundoff > 1e-8 * std::abs(sum)) out.diagnostics.notes.push_back("cancellation between terms");
    out.converged = stopped && std::isfinite(sum) && mu >= 0.0 && roundoff <= 1e-8 * std::abs(sum);
    return out;
}

}  // namespace foxlink::specfun
