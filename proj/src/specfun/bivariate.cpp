#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "foxlink/quadrature.hpp"
#include "foxlink/specfun.hpp"
#include "kernel.hpp"

namespace foxlink::specfun {

using detail::Kernel1D;
using detail::make_kernel;

namespace {

// a + u*cs + v*ct >= 0, with (u, v) of unit length.
struct HalfPlane {
    double a, u, v;
    double eval(double cs, double ct) const { return a + u * cs + v * ct; }
};

constexpr double kBox = 60.0;

void add_plane(std::vector<HalfPlane>& out, double a, double u, double v) {
    const double n = std::hypot(u, v);
    if (n == 0.0) return;
    out.push_back({a / n, u / n, v / n});
}

std::vector<HalfPlane> constraints(const Kernel1D& ks, const Kernel1D& kt, const std::vector<JointGamma>& joint) {
    std::vector<HalfPlane> out;
    for (const auto& t : ks.num) add_plane(out, t.shift, t.scale, 0.0);
    for (const auto& t : kt.num) add_plane(out, t.shift, 0.0, t.scale);
    for (const auto& j : joint) add_plane(out, j.shift, j.scaleS, j.scaleT);
    return out;
}

struct Center {
    double cs, ct, radius;
};

// Chebyshev centre of the feasible polygon clipped to a box: the 3-variable LP
// max z s.t. a_i + n_i.c >= z is solved by enumerating vertices.
Center chebyshev_center(std::vector<HalfPlane> planes) {
    add_plane(planes, kBox, -1.0, 0.0);
    add_plane(planes, kBox, 1.0, 0.0);
    add_plane(planes, kBox, 0.0, -1.0);
    add_plane(planes, kBox, 0.0, 1.0);
    Center best{0.0, 0.0, -INFINITY};
    const std::size_t n = planes.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                // u x + v y - z = -a
                const std::array<const HalfPlane*, 3> p{&planes[i], &planes[j], &planes[k]};
                double m[3][4];
                for (int r = 0; r < 3; ++r) {
                    m[r][0] = p[r]->u;
                    m[r][1] = p[r]->v;
                    m[r][2] = -1.0;
                    m[r][3] = -p[r]->a;
                }
                bool singular = false;
                for (int col = 0; col < 3 && !singular; ++col) {
                    int piv = col;
                    for (int r = col + 1; r < 3; ++r)
                        if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
                    if (std::abs(m[piv][col]) < 1e-12) {
                        singular = true;
                        break;
                    }
                    std::swap(m[piv], m[col]);
                    for (int r = 0; r < 3; ++r) {
                        if (r == col) continue;
                        const double f = m[r][col] / m[col][col];
                        for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
                    }
                }
                if (singular) continue;
                const double x = m[0][3] / m[0][0], y = m[1][3] / m[1][1], z = m[2][3] / m[2][2];
                if (z <= best.radius) continue;
                bool ok = true;
                for (const auto& h : planes)
                    if (h.eval(x, y) < z - 1e-9) {
                        ok = false;
                        break;
                    }
                if (ok) best = {x, y, z};
            }
    return best;
}

struct Kernel2D {
    Kernel1D ks, kt;
    std::vector<JointGamma> jn, jd;

    cplx log_joint(cplx s, cplx t) const {
        cplx acc = 0.0;
        for (const auto& j : jn) acc += log_gamma_fast(j.shift + j.scaleS * s + j.scaleT * t);
        for (const auto& j : jd) acc -= log_gamma_fast(j.shift + j.scaleS * s + j.scaleT * t);
        return acc;
    }
};

}  // namespace

void BivariateFoxHSpec::validate() const {
    const Kernel1D ks = make_kernel(kernelS), kt = make_kernel(kernelT);
    for (const auto& j : jointNumerator)
        if (j.scaleS == 0.0 && j.scaleT == 0.0) throw ContourError("bivariate: joint Gamma with zero scales");
    const auto c = chebyshev_center(constraints(ks, kt, jointNumerator));
    if (!(c.radius > 1e-9)) throw ContourError("bivariate: no pair of contours separates the poles");
}

MetricResult fox_h_bivariate(const BivariateFoxHSpec& spec, double x, double y, const ContourSpec& contour,
                             double logScale) {
    if (!(x > 0.0) || !(y > 0.0)) throw SpecfunError("fox_h_bivariate: arguments must be positive");
    spec.validate();
    const Kernel2D k{make_kernel(spec.kernelS), make_kernel(spec.kernelT), spec.jointNumerator,
                     spec.jointDenominator};
    const double lx = std::log(x), ly = std::log(y);
    const auto planes = constraints(k.ks, k.kt, k.jn);

    MetricResult out;
    double cs = contour.realPartS, ct = contour.realPartT;
    const bool autoS = std::isnan(cs), autoT = std::isnan(ct);
    if (!autoS && !autoT) {
        for (const auto& h : planes)
            if (!(h.eval(cs, ct) > 0.0)) throw ContourError("fox_h_bivariate: requested contours do not separate the poles");
    } else {
        const auto center = chebyshev_center(planes);
        const double margin = 1e-3 * center.radius;
        auto envelope = [&](double a, double b) {
            double e = -INFINITY;
            static constexpr std::array<std::array<double, 2>, 4> probes{{{0, 0}, {0.75, 0}, {0, 0.75}, {0.75, -0.75}}};
            for (const auto& p : probes) {
                const cplx s(a, p[0]), t(b, p[1]);
                const double v =
                    (k.ks.log_value(s) + k.kt.log_value(t) + k.log_joint(s, t)).real();
                if (!std::isnan(v)) e = std::max(e, v);
            }
            return e - a * lx - b * ly;
        };
        auto feasible = [&](double a, double b) {
            if (std::abs(a) > kBox || std::abs(b) > kBox) return false;
            for (const auto& h : planes)
                if (h.eval(a, b) < margin) return false;
            return true;
        };
        double bs = autoS ? center.cs : cs, bt = autoT ? center.ct : ct;
        if (!feasible(bs, bt)) throw ContourError("fox_h_bivariate: requested abscissa leaves no admissible contour");
        double best = envelope(bs, bt);
        double step = std::max(0.5 * center.radius, 0.05);
        static constexpr std::array<std::array<double, 2>, 8> dirs{
            {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}};
        for (int it = 0; it < 400 && step > 1e-3 * center.radius; ++it) {
            bool moved = false;
            for (const auto& d : dirs) {
                const double a = bs + (autoS ? d[0] * step : 0.0), b = bt + (autoT ? d[1] * step : 0.0);
                if ((a == bs && b == bt) || !feasible(a, b)) continue;
                const double v = envelope(a, b);
                if (v < best) {
                    best = v;
                    bs = a;
                    bt = b;
                    moved = true;
                    break;
                }
            }
            if (!moved) step *= 0.5;
        }
        cs = bs;
        ct = bt;
    }
    out.diagnostics.abscissaS = cs;
    out.diagnostics.abscissaT = ct;

    struct Slice {
        cplx t;
        cplx base;  // log K_T(t) - t ln y
    };
    auto make_slice = [&](double tau) {
        const cplx t(ct, tau);
        return Slice{t, k.kt.log_value(t) - t * ly};
    };
    auto logf = [&](const Slice& sl, double sigma) {
        const cplx s(cs, sigma);
        return k.ks.log_value(s) - s * lx + sl.base + k.log_joint(s, sl.t);
    };
    auto logmag = [&](const Slice& sl, double sigma) {
        const double v = logf(sl, sigma).real();
        return std::isnan(v) ? -INFINITY : v;
    };

    std::vector<double> slopes;  // sigma = -tau * slope maximises |Gamma(joint)|
    for (const auto& j : k.jn)
        if (j.scaleS != 0.0) slopes.push_back(j.scaleT / j.scaleS);

    double peak = logmag(make_slice(0.0), 0.0);
    const double drop = contour.dropNepers;
    constexpr double kCap = 1e4;

    struct Range {
        double lo, hi, localPeak;
        bool ok;
    };
    auto inner_range = [&](const Slice& sl, double tau) {
        std::vector<double> cand{0.0};
        for (double sl_ : slopes) cand.push_back(-tau * sl_);
        const double c0 = *std::min_element(cand.begin(), cand.end());
        const double c1 = *std::max_element(cand.begin(), cand.end());
        Range r{c0, c1, -INFINITY, true};
        for (int i = 0; i <= 8; ++i) r.localPeak = std::max(r.localPeak, logmag(sl, c0 + (c1 - c0) * i / 8.0));
        peak = std::max(peak, r.localPeak);
        for (int dir : {1, -1}) {
            double sigma = dir > 0 ? c1 : c0;
            const double start = sigma;
            int below = 0;
            bool done = false;
            while (std::abs(sigma - start) < kCap) {
                sigma += dir * std::max(0.25, 0.05 * std::abs(sigma - start));
                const double v = logmag(sl, sigma);
                r.localPeak = std::max(r.localPeak, v);
                peak = std::max(peak, v);
                if (!(v > peak - drop)) {
                    if (++below >= 4) {
                        done = true;
                        break;
                    }
                } else {
                    below = 0;
                }
            }
            if (!done) r.ok = false;
            (dir > 0 ? r.hi : r.lo) = sigma;
        }
        return r;
    };

    // Outer truncation: advance tau until whole slices sit below the peak.
    double tmax = 0.0;
    bool truncOk = false;
    {
        double tau = 0.0;
        int below = 0;
        inner_range(make_slice(0.0), 0.0);
        while (tau < kCap) {
            tau += std::max(0.25, 0.05 * tau);
            const auto r = inner_range(make_slice(tau), tau);
            if (!(r.localPeak > peak - drop)) {
                if (++below >= 4 && tau >= 2.0) {
                    truncOk = true;
                    break;
                }
            } else {
                below = 0;
            }
        }
        tmax = tau;
    }
    out.diagnostics.truncationT = tmax;
    if (!truncOk) out.diagnostics.notes.push_back("integrand did not decay in Im t before the truncation cap");

    const double scaleLog = logScale + peak;
    const double absScaled = contour.absTol * std::exp(-scaleLog);
    const double absTol = std::isfinite(absScaled) ? absScaled : 1e300;

    std::size_t evals = 0;
    bool innerOk = true;
    double widest = 0.0;
    auto outer = [&](double tau) {
        const Slice sl = make_slice(tau);
        const Range r = inner_range(sl, tau);
        if (!r.ok) innerOk = false;
        widest = std::max(widest, r.hi - r.lo);
        auto f = [&](double sigma) {
            const cplx lv = logf(sl, sigma) - peak;
            if (!(lv.real() > -745.0)) return 0.0;
            return std::exp(lv).real();
        };
        quad::Options opt;
        opt.relTol = 0.1 * contour.relTol;
        opt.absTol = std::max(0.1 * absTol / std::max(tmax, 1.0), 1e-15 * (r.hi - r.lo));
        opt.maxEvals = 40000;
        const double osc = (r.hi - r.lo) * (std::abs(lx) + std::log1p(r.hi - r.lo)) / (2.0 * std::numbers::pi);
        opt.initialSegments = static_cast<int>(std::clamp(osc, 8.0, 200.0));
        const auto q = quad::integrate(f, r.lo, r.hi, opt);
        evals += q.evaluations;
        if (!q.converged) innerOk = false;
        return q.value;
    };
    quad::Options opt;
    opt.relTol = contour.relTol;
    opt.absTol = std::max(absTol, 1e-14 * tmax);
    opt.maxEvals = 6000;
    const double osc = tmax * (std::abs(ly) + std::log1p(tmax)) / (2.0 * std::numbers::pi);
    opt.initialSegments = static_cast<int>(std::clamp(osc, 8.0, 200.0));
    const auto q = quad::integrate(outer, 0.0, tmax, opt);

    const double factor = std::exp(scaleLog) / (2.0 * std::numbers::pi * std::numbers::pi);
    out.value = q.value * factor;
    out.errorEstimate = q.error * factor;
    out.diagnostics.truncationS = widest;
    out.diagnostics.evaluations = evals;
    if (!innerOk) out.diagnostics.notes.push_back("an inner integral did not meet its tolerance");
    if (evals > contour.maxEvals) out.diagnostics.notes.push_back("evaluation budget exceeded");
    out.converged = q.converged && truncOk && innerOk && evals <= contour.maxEvals && std::isfinite(out.value);
    return out;
}

}  // namespace foxlink::specfun
