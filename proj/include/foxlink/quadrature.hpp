#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <vector>

namespace foxlink::quad {

struct Options {
    double relTol = 1e-10;
    double absTol = 1e-14;
    std::size_t maxEvals = 200000;
    int initialSegments = 8;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    std::array<double, 7> lo{}, hi{};
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        lo[j] = f(center - dx);
        hi[j] = f(center + dx);
        kronrod += kKronrodWeights[j] * (lo[j] + hi[j]);
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (lo[j] + hi[j]);
    }
    const double mean = 0.5 * kronrod;
    double asc = std::abs(fc - mean) * kKronrodWeights[7];
    for (int j = 0; j < 7; ++j) asc += kKronrodWeights[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));
    double err = std::abs((kronrod - gauss) * half);
    const double ascScaled = asc * std::abs(half);
    if (ascScaled != 0.0 && err != 0.0) err = ascScaled * std::min(1.0, std::pow(200.0 * err / ascScaled, 1.5));
    return {a, b, kronrod * half, err};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (G7/K15) on a finite interval. The segment
// with the largest error estimate is bisected until the summed error meets
// max(absTol, relTol*|I|) or the evaluation budget runs out.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    Result out;
    if (!(b > a)) return {0.0, 0.0, 0, true};
    std::size_t evals = 0;
    auto counted = [&](double x) {
        ++evals;
        return f(x);
    };
    std::priority_queue<detail::Segment> heap;
    const int n0 = std::max(1, opt.initialSegments);
    double total = 0.0, error = 0.0;
    for (int i = 0; i < n0; ++i) {
        const double lo = a + (b - a) * i / n0;
        const double hi = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
        auto seg = detail::gk15(counted, lo, hi);
        total += seg.value;
        error += seg.error;
        heap.push(seg);
    }
    auto target = [&] { return std::max(opt.absTol, opt.relTol * std::abs(total)); };
    while (error > target() && evals + 60 <= opt.maxEvals) {
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push(worst);
            break;
        }
        auto left = detail::gk15(counted, worst.a, mid);
        auto right = detail::gk15(counted, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed accumulated rounding from the incremental updates.
    total = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.error = error;
    out.evaluations = evals;
    out.converged = std::isfinite(total) && error <= std::max(opt.absTol, opt.relTol * std::abs(total));
    return out;
}

// Integral over [a, inf) through the substitution x = a + u/(1-u).
template <class F>
Result integrate_to_infinity(F&& f, double a, const Options& opt = {}) {
    auto g = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double w = 1.0 - u;
        const double v = f(a + u / w);
        return std::isfinite(v) ? v / (w * w) : 0.0;
    };
    return integrate(g, 0.0, 1.0, opt);
}

}  // namespace foxlink::quad
