#pragma once

#include <cmath>
#include <vector>

#include "foxlink/specfun.hpp"

namespace foxlink::specfun::detail {

// G(shift + scale * s)
struct Term {
    double shift;
    double scale;
};

struct Kernel1D {
    std::vector<Term> num;
    std::vector<Term> den;

    cplx log_value(cplx s) const {
        cplx acc = 0.0;
        for (const auto& t : num) acc += log_gamma_fast(t.shift + t.scale * s);
        for (const auto& t : den) acc -= log_gamma_fast(t.shift + t.scale * s);
        return acc;
    }

    // Open interval of abscissas keeping every numerator argument in Re > 0.
    double left() const {
        double v = -INFINITY;
        for (const auto& t : num)
            if (t.scale > 0) v = std::max(v, -t.shift / t.scale);
        return v;
    }
    double right() const {
        double v = INFINITY;
        for (const auto& t : num)
            if (t.scale < 0) v = std::min(v, t.shift / -t.scale);
        return v;
    }
};

inline Kernel1D make_kernel(const FoxHSpec& spec) {
    Kernel1D k;
    for (int j = 0; j < spec.q(); ++j) {
        const auto& b = spec.lower[j];
        if (j < spec.m)
            k.num.push_back({b.shift, b.scale});
        else
            k.den.push_back({1.0 - b.shift, -b.scale});
    }
    for (int j = 0; j < spec.p(); ++j) {
        const auto& a = spec.upper[j];
        if (j < spec.n)
            k.num.push_back({1.0 - a.shift, -a.scale});
        else
            k.den.push_back({a.shift, a.scale});
    }
    return k;
}

}  // namespace foxlink::specfun::detail
