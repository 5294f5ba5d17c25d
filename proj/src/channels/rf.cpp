#include <cmath>
#include <numbers>
#include <sstream>

#include "foxlink/channels.hpp"

namespace foxlink::channels {

using specfun::MeijerGSpec;

void GenKParams::validate() const {
    if (!(m > 0.0)) throw ParameterError("Nakagami m must be positive");
    if (!(kappa > 0.0)) throw ParameterError("shadowing kappa must be positive");
    if (multiplicity < 1) throw ParameterError("multiplicity must be a positive integer");
    if (!(meanPower > 0.0)) throw ParameterError("mean power must be positive");
}

void PathLossParams::validate() const {
    if (!(d0 > 0.0)) throw ParameterError("d0 must be positive");
    if (!(wavelength > 0.0)) throw ParameterError("wavelength must be positive");
    if (!(eta > 0.0)) throw ParameterError("path-loss exponent must be positive");
    if (!(distance >= d0)) throw ParameterError("distance must be at least d0");
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

double log_sir_norm(const GenKParams& d, const GenKParams& i) {
    return -(std::lgamma(d.multiplicity * d.m) + std::lgamma(d.kappa) + std::lgamma(i.multiplicity * i.m) +
             std::lgamma(i.kappa));
}

}  // namespace

double sir_scale(const GenKParams& desired, const GenKParams& interf) {
    desired.validate();
    interf.validate();
    const double gbar = desired.meanPower / interf.meanPower;
    return desired.kappa * desired.m / (interf.kappa * interf.m * gbar);
}

double cdf_sir(const GenKParams& d, const GenKParams& i, double x) {
    if (!(x >= 0.0)) throw ParameterError("cdf_sir: x must be non-negative");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double z = sir_scale(d, i);
    const double Nm = d.multiplicity * d.m, Lm = i.multiplicity * i.m;
    const MeijerGSpec g{2, 3, {1.0, 1.0 - i.kappa, 1.0 - Lm}, {d.kappa, Nm, 0.0}};
    const auto r = specfun::meijer_g(g, z * x, {}, log_sir_norm(d, i));
    require(r, "cdf_sir");
    return clamp_probability(r.value, "cdf_sir");
}

double ccdf_sir(const GenKParams& d, const GenKParams& i, double x) {
    if (!(x >= 0.0)) throw ParameterError("ccdf_sir: x must be non-negative");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double z = sir_scale(d, i);
    const double Nm = d.multiplicity * d.m, Lm = i.multiplicity * i.m;
    const MeijerGSpec g{3, 2, {1.0 - i.kappa, 1.0 - Lm, 1.0}, {0.0, d.kappa, Nm}};
    const auto r = specfun::meijer_g(g, z * x, {}, log_sir_norm(d, i));
    require(r, "ccdf_sir");
    return clamp_probability(r.value, "ccdf_sir");
}

double pdf_sir(const GenKParams& d, const GenKParams& i, double x) {
    if (!(x > 0.0)) throw ParameterError("pdf_sir: x must be positive");
    const double z = sir_scale(d, i);
    const double Nm = d.multiplicity * d.m, Lm = i.multiplicity * i.m;
    const MeijerGSpec g{2, 2, {1.0 - i.kappa, 1.0 - Lm}, {d.kappa, Nm}};
    const auto r = specfun::meijer_g(g, z * x, {}, log_sir_norm(d, i) - std::log(x));
    require(r, "pdf_sir");
    return std::max(r.value, 0.0);
}

double pdf_genk(const GenKParams& p, double x) {
    p.validate();
    if (!(x > 0.0)) throw ParameterError("pdf_genk: x must be positive");
    const double c = p.kappa * p.m / p.meanPower;
    const double dm = p.multiplicity * p.m;
    // c G^{2,0}_{0,2}[c x | dm-1, kappa-1] = 2 c (cx)^{(dm+kappa)/2-1} K_{dm-kappa}(2 sqrt(cx))
    const double logPre = std::log(c) - std::lgamma(dm) - std::lgamma(p.kappa);
    const double cx = c * x;
    const double nu = std::abs(dm - p.kappa);
    const double arg = 2.0 * std::sqrt(cx);
    if (arg < 600.0 && nu < 100.0) {
        const double k = std::cyl_bessel_k(nu, arg);
        if (std::isfinite(k) && k > 0.0)
            return std::exp(logPre + std::log(2.0) + (0.5 * (dm + p.kappa) - 1.0) * std::log(cx) + std::log(k));
    }
    const MeijerGSpec g{2, 0, {}, {dm - 1.0, p.kappa - 1.0}};
    const auto r = specfun::meijer_g(g, cx, {}, logPre);
    require(r, "pdf_genk");
    return std::max(r.value, 0.0);
}

double cdf_genk(const GenKParams& p, double x) {
    p.validate();
    if (!(x >= 0.0)) throw ParameterError("cdf_genk: x must be non-negative");
    if (x == 0.0) return 0.0;
    const double c = p.kappa * p.m / p.meanPower;
    const double dm = p.multiplicity * p.m;
    const MeijerGSpec g{2, 1, {1.0}, {dm, p.kappa, 0.0}};
    const auto r = specfun::meijer_g(g, c * x, {}, -std::lgamma(dm) - std::lgamma(p.kappa));
    require(r, "cdf_genk");
    return clamp_probability(r.value, "cdf_genk");
}

double path_loss_db(const PathLossParams& p) {
    p.validate();
    return 20.0 * std::log10(4.0 * std::numbers::pi * p.d0 / p.wavelength) + 10.0 * p.eta * std::log10(p.distance / p.d0);
}

double avg_power(const PathLossParams& p, double txPower) {
    p.validate();
    if (!(txPower > 0.0)) throw ParameterError("transmit power must be positive");
    const double f = p.wavelength / (4.0 * std::numbers::pi * p.d0);
    return txPower * f * f * std::pow(p.d0 / p.distance, p.eta);
}

double kappa_from_sigma_db(double sigmaDb) {
    if (!(sigmaDb > 0.0)) throw ParameterError("shadowing spread must be positive");
    const double s = sigmaDb * std::log(10.0) / 10.0;
    return 1.0 / std::expm1(s * s);
}

}  // namespace foxlink::channels
