#include <array>
#include <cmath>
#include <numbers>

#include "foxlink/specfun.hpp"

namespace foxlink::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
const double kHalfLog2Pi = 0.5 * std::log(2.0 * kPi);

bool is_nonpositive_integer(cplx z) { return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real()); }

// Stirling series for Re z >= 12.
cplx stirling(cplx z) {
    static constexpr std::array<double, 8> kCoef = {1.0 / 12.0,        -1.0 / 360.0,          1.0 / 1260.0,
                                                    -1.0 / 1680.0,     1.0 / 1188.0,          -691.0 / 360360.0,
                                                    1.0 / 156.0,       -3617.0 / 122400.0};
    const cplx inv = 1.0 / z;
    const cplx inv2 = inv * inv;
    cplx series = 0.0;
    cplx power = inv;
    for (double c : kCoef) {
        series += c * power;
        power *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + kHalfLog2Pi + series;
}

// log sin(pi z) without overflow for large |Im z|.
cplx log_sin_pi(cplx z) {
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    const cplx i(0.0, 1.0);
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 i pi z})
    return std::log(0.5 * i) - i * kPi * z + std::log(1.0 - std::exp(2.0 * i * kPi * z));
}

}  // namespace

cplx log_gamma(cplx z) {
    if (is_nonpositive_integer(z)) throw SpecfunError("log_gamma: pole at non-positive integer");
    if (z.real() >= 12.0) return stirling(z);
    const int shift = static_cast<int>(std::ceil(12.0 - z.real()));
    cplx correction = 0.0;
    for (int k = 0; k < shift; ++k) correction += std::log(z + static_cast<double>(k));
    return stirling(z + static_cast<double>(shift)) - correction;
}

cplx log_gamma_fast(cplx z) {
    static constexpr std::array<double, 9> kLanczos = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        if (is_nonpositive_integer(z)) return {std::numeric_limits<double>::infinity(), 0.0};
        return std::log(kPi) - log_sin_pi(z) - log_gamma_fast(1.0 - z);
    }
    if (z.real() > 30.0 || std::abs(z.imag()) > 60.0) return stirling(z);
    const cplx w = z - 1.0;
    cplx sum = kLanczos[0];
    for (int k = 1; k < 9; ++k) sum += kLanczos[k] / (w + static_cast<double>(k));
    const cplx t = w + 7.5;
    return kHalfLog2Pi + (w + 0.5) * std::log(t) - t + std::log(sum);
}

SignedLog log_gamma_real(double x) {
    if (x <= 0.0 && x == std::floor(x)) return {std::numeric_limits<double>::infinity(), 0};
    int sign = 1;
    const double value = ::lgamma_r(x, &sign);
    return {value, sign};
}

}  // namespace foxlink::specfun
