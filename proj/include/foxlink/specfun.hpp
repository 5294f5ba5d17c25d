#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace foxlink::specfun {

using cplx = std::complex<double>;

class SpecfunError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when the parameters of a kernel admit no separating vertical contour.
class ContourError : public SpecfunError {
public:
    using SpecfunError::SpecfunError;
};

// Two Gamma factors contribute poles at the same point; the residue machinery
// only handles simple poles.
class CoincidingPoleError : public SpecfunError {
public:
    using SpecfunError::SpecfunError;
};

// Principal-branch log Gamma. Throws SpecfunError at non-positive integers.
cplx log_gamma(cplx z);

// Fast log Gamma used inside quadrature kernels. exp() of the result is
// Gamma(z); the imaginary part is only defined modulo 2*pi for Re z < 1/2.
cplx log_gamma_fast(cplx z);

// log|Gamma(x)| and the sign of Gamma(x) for real x. At poles returns
// +inf with sign 0.
struct SignedLog {
    double logAbs;
    int sign;
};
SignedLog log_gamma_real(double x);

struct GammaPair {
    double shift;
    double scale;
};

// H^{m,n}_{p,q}[x | upper ; lower] with the Mellin-Barnes kernel
//   prod_{j<m} G(b_j + B_j s) prod_{j<n} G(1 - a_j - A_j s)
//   / (prod_{j>=m} G(1 - b_j - B_j s) prod_{j>=n} G(a_j + A_j s))
// integrated against x^{-s}.
struct FoxHSpec {
    int m = 0;
    int n = 0;
    std::vector<GammaPair> upper;  // (a_j, A_j), length p
    std::vector<GammaPair> lower;  // (b_j, B_j), length q

    FoxHSpec() = default;
    FoxHSpec(int m_, int n_, std::vector<GammaPair> upper_, std::vector<GammaPair> lower_);

    int p() const { return static_cast<int>(upper.size()); }
    int q() const { return static_cast<int>(lower.size()); }

    // Throws ContourError when orders are inconsistent, a scale is not
    // positive, or the left and right pole sets cannot be separated.
    void validate() const;

    // Open interval (left, right) of admissible contour abscissas. Either end
    // may be infinite.
    double leftBound() const;
    double rightBound() const;
};

// Meijer G is the unit-scale special case.
struct MeijerGSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a;
    std::vector<double> b;

    FoxHSpec toFox() const;
};

// Gamma factor G(shift + scaleS*s + scaleT*t) that couples both variables.
struct JointGamma {
    double shift;
    double scaleS;
    double scaleT;
};

// Two-variable Mellin-Barnes integral
//   (2 pi i)^{-2} \int\int K_S(s) K_T(t) J(s,t) x^{-s} y^{-t} ds dt
// where K_S, K_T are univariate Fox H kernels and J is a ratio of joint
// Gamma factors.
struct BivariateFoxHSpec {
    std::vector<JointGamma> jointNumerator;
    std::vector<JointGamma> jointDenominator;
    FoxHSpec kernelS;
    FoxHSpec kernelT;

    // Throws ContourError when no rectangle of vertical contours keeps every
    // numerator Gamma argument in the right half plane.
    void validate() const;
};

struct ContourSpec {
    // NaN selects the abscissa automatically.
    double realPartS = std::numeric_limits<double>::quiet_NaN();
    double realPartT = std::numeric_limits<double>::quiet_NaN();
    // Explicit max |Im s|; 0 truncates where the integrand has fallen
    // `dropNepers` below its peak.
    double truncation = 0.0;
    double dropNepers = 30.0;
    double relTol = 1e-8;
    double absTol = 1e-12;
    std::size_t maxEvals = 400000;

    static ContourSpec univariateDefaults() { return {}; }
    static ContourSpec bivariateDefaults() {
        ContourSpec c;
        c.relTol = 1e-6;
        c.maxEvals = 2000000;
        return c;
    }
};

struct Diagnostics {
    double abscissaS = std::numeric_limits<double>::quiet_NaN();
    double abscissaT = std::numeric_limits<double>::quiet_NaN();
    double truncationS = 0.0;
    double truncationT = 0.0;
    std::size_t evaluations = 0;
    std::vector<std::string> notes;
};

struct MetricResult {
    double value = 0.0;
    double errorEstimate = 0.0;
    bool converged = false;
    Diagnostics diagnostics;
};

// All evaluations return exp(logScale) * H so that callers can fold large
// Gamma-function prefactors in before exponentiating.
MetricResult fox_h(const FoxHSpec& spec, double x, const ContourSpec& contour = ContourSpec::univariateDefaults(),
                   double logScale = 0.0);
MetricResult meijer_g(const MeijerGSpec& spec, double x, const ContourSpec& contour = ContourSpec::univariateDefaults(),
                      double logScale = 0.0);
MetricResult fox_h_bivariate(const BivariateFoxHSpec& spec, double x, double y,
                             const ContourSpec& contour = ContourSpec::bivariateDefaults(), double logScale = 0.0);

// Sum of residues at the left poles, in order of increasing exponent.
MetricResult residue_series(const FoxHSpec& spec, double x, int maxTerms = 200, double relTol = 1e-12,
                            double logScale = 0.0);

// H(x) ~ coefficient * x^exponent as x -> 0.
struct PowerTerm {
    double exponent;
    double coefficient;
};
PowerTerm leading_term(const FoxHSpec& spec);

// Every left-pole residue term with exponent <= maxExponent, sorted by
// exponent. Throws CoincidingPoleError on higher-order poles in that range.
std::vector<PowerTerm> residue_terms(const FoxHSpec& spec, double maxExponent);

// Log of the Mellin kernel at s (no x^{-s} factor). Exposed for callers that
// build their own integrands from a spec.
cplx log_kernel(const FoxHSpec& spec, cplx s);

}  // namespace foxlink::specfun
