#include <algorithm>
#include <cmath>
#include <sstream>

#include "foxlink/channels.hpp"

namespace foxlink::channels {

using specfun::FoxHSpec;

double MalagaParams::g() const { return std::isnan(gOverride) ? 2.0 * b0 * (1.0 - rho) : gOverride; }

void MalagaParams::validate() const {
    if (!(alpha > 0.0)) throw ParameterError("alpha must be positive");
    if (beta < 1) throw ParameterError("beta must be an integer >= 1");
    if (!(b0 >= 0.0)) throw ParameterError("b0 must be non-negative");
    if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0,1]");
    if (!(Omega >= 0.0)) throw ParameterError("Omega must be non-negative");
    if (!(g() >= 0.0)) throw ParameterError("g must be non-negative");
    if (g() == 0.0 && Omega == 0.0) throw ParameterError("g and Omega cannot both vanish");
    if (!(xi > 0.0)) throw ParameterError("xi must be positive");
    if (r != 1 && r != 2) throw ParameterError("detection r must be 1 or 2");
    if (!(mu1 > 0.0)) throw ParameterError("mu1 must be positive");
}

int round_beta(double beta, std::vector<std::string>* warnings) {
    if (!(beta >= 0.5)) throw ParameterError("beta must be at least 1");
    const int b = static_cast<int>(std::lround(beta));
    if (warnings && std::abs(b - beta) > 1e-12) {
        std::ostringstream os;
        os << "beta=" << beta << " is not an integer; rounded to " << b;
        warnings->push_back(os.str());
    }
    return b;
}

MalagaDerived malaga_derive(const MalagaParams& p) {
    p.validate();
    MalagaDerived d;
    const double a = p.alpha, g = p.g(), W = p.Omega;
    const int be = p.beta;
    const double gbW = g * be + W;
    d.h = p.xi * p.xi / (p.xi * p.xi + 1.0);
    d.B = a * be * d.h * (g + W) / gbW;

    // A b_k carries g^(beta-k) and Omega^(k-1); the remaining factors are finite.
    const double lnA0 = 0.5 * a * std::log(a) + (be + 0.5 * a) * (std::log(double(be)) - std::log(gbW));
    const double lnAcore = 0.5 * a * std::log(a) + (be + 0.5 * a) * std::log(g * be / gbW) - (1.0 + 0.5 * a) * std::log(g);
    d.A = std::exp(lnAcore);
    for (int k = 1; k <= be; ++k) {
        const double lnC = std::lgamma(be) - std::lgamma(k) - std::lgamma(be - k + 1.0);
        const double rest = lnC + (1.0 - 0.5 * k) * std::log(gbW) + 0.5 * (a + k) * (std::log(gbW) - std::log(a * be)) +
                            0.5 * k * (std::log(a) - std::log(double(be)));
        const double lnbk = rest + (k - 1) * (std::log(W) - std::log(g));
        d.bk.push_back(std::exp(lnbk));
        double lw = lnA0 + rest - std::lgamma(double(k));
        if (be - k > 0) lw += (be - k) * std::log(g);
        if (k - 1 > 0) lw += (k - 1) * std::log(W);
        d.logWeights.push_back(std::isnan(lw) ? -INFINITY : lw);
    }

    if (p.r == 1) {
        d.mu_r = p.mu1;
    } else {
        const double x2 = p.xi * p.xi;
        d.mu_r = p.mu1 * a * x2 * (x2 + 2.0) * (g + W) / ((x2 + 1.0) * (x2 + 1.0)) /
                 ((a + 1.0) * (2.0 * g * (g + 2.0 * W) + W * W * (1.0 + 1.0 / be)));
    }
    return d;
}

double fso_scale(const MalagaParams& p) {
    const auto d = malaga_derive(p);
    return std::pow(d.B, p.r) / d.mu_r;
}

double clamp_probability(double v, const char* what) {
    if (v >= 0.0 && v <= 1.0) return v;
    if (v > -1e-9 && v < 1.0 + 1e-9) return std::clamp(v, 0.0, 1.0);
    std::ostringstream os;
    os << what << ": value " << v << " outside [0,1]";
    throw ConvergenceError(os.str());
}

namespace {

void require(const specfun::MetricResult& r, const char* what) {
    if (!r.converged && !(r.errorEstimate <= 1e-9 + 1e-5 * std::abs(r.value))) {
        std::ostringstream os;
        os << what << ": Mellin-Barnes integral did not converge (value " << r.value << ", error " << r.errorEstimate
           << ")";
        throw ConvergenceError(os.str());
    }
}

// Sum over active k of exp(logWeight_k + logPrefactor) * H_k(X).
template <class MakeSpec>
double weighted_sum(const MalagaParams& p, double X, double logPrefactor, MakeSpec&& make, const char* what) {
    const auto d = malaga_derive(p);
    double total = 0.0;
    for (int k = 1; k <= p.beta; ++k) {
        const double lw = d.logWeights[k - 1];
        if (!std::isfinite(lw)) continue;
        const auto r = specfun::fox_h(make(k), X, {}, lw + logPrefactor);
        require(r, what);
        total += r.value;
    }
    return total;
}

}  // namespace

double cdf_fso(const MalagaParams& p, double x) {
    if (!(x >= 0.0)) throw ParameterError("cdf_fso: x must be non-negative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double r = p.r, x2 = p.xi * p.xi;
    const double X = fso_scale(p) * x;
    const double v = weighted_sum(
        p, X, std::log(x2 * r) - std::lgamma(p.alpha),
        [&](int k) {
            return FoxHSpec(3, 1, {{1.0, r}, {x2 + 1.0, r}}, {{x2, r}, {p.alpha, r}, {double(k), r}, {0.0, r}});
        },
        "cdf_fso");
    return clamp_probability(v, "cdf_fso");
}

double ccdf_fso(const MalagaParams& p, double x) {
    if (!(x >= 0.0)) throw ParameterError("ccdf_fso: x must be non-negative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double r = p.r, x2 = p.xi * p.xi;
    const double X = fso_scale(p) * x;
    const double v = weighted_sum(
        p, X, std::log(x2 * r) - std::lgamma(p.alpha),
        [&](int k) {
            return FoxHSpec(4, 0, {{x2 + 1.0, r}, {1.0, r}}, {{x2, r}, {p.alpha, r}, {double(k), r}, {0.0, r}});
        },
        "ccdf_fso");
    return clamp_probability(v, "ccdf_fso");
}

double pdf_fso(const MalagaParams& p, double x) {
    if (!(x > 0.0)) throw ParameterError("pdf_fso: x must be positive");
    const double r = p.r, x2 = p.xi * p.xi;
    const double X = fso_scale(p) * x;
    const double v = weighted_sum(
        p, X, std::log(x2) - std::lgamma(p.alpha) - std::log(x),
        [&](int k) { return FoxHSpec(3, 0, {{x2 + 1.0, r}}, {{x2, r}, {p.alpha, r}, {double(k), r}}); }, "pdf_fso");
    return std::max(v, 0.0);
}

}  // namespace foxlink::channels
