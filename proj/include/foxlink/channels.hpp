#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "foxlink/specfun.hpp"

namespace foxlink::channels {

class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malaga-M turbulence with pointing errors on the optical hop.
struct MalagaParams {
    double alpha = 2.4;
    int beta = 2;
    double b0 = 0.25;
    double rho = 0.75;
    double Omega = 0.5;
    double xi = 1.1;
    int r = 1;           // 1: heterodyne, 2: IM/DD
    double mu1 = 100.0;  // heterodyne electrical SNR
    // Set to override g = 2 b0 (1 - rho), e.g. g = 0 for Gamma-Gamma.
    double gOverride = std::numeric_limits<double>::quiet_NaN();

    double g() const;
    void validate() const;
};

struct MalagaDerived {
    double A = 0.0;           // may under/overflow near g = 0; use logWeights
    std::vector<double> bk;   // k = 1..beta
    std::vector<double> logWeights;  // log(A b_k / Gamma(k)), -inf for vanishing terms
    double B = 0.0;
    double h = 0.0;
    double mu_r = 0.0;
};

MalagaDerived malaga_derive(const MalagaParams& p);

// Round a non-integer beta to the nearest integer >= 1. Returns the rounded
// value and appends a warning when rounding changed it.
int round_beta(double beta, std::vector<std::string>* warnings = nullptr);

struct GenKParams {
    double m = 1.0;
    double kappa = 1.0;
    int multiplicity = 1;
    double meanPower = 1.0;
    void validate() const;
};

struct PathLossParams {
    double d0 = 5.0;
    double wavelength = 10.71e-3;
    double eta = 2.55;
    double distance = 50.0;
    void validate() const;
};

// Normalised FSO argument B^r / mu_r, so that X = fso_scale(p) * x.
double fso_scale(const MalagaParams& p);

double cdf_fso(const MalagaParams& p, double x);
double ccdf_fso(const MalagaParams& p, double x);
double pdf_fso(const MalagaParams& p, double x);

// z in the SIR kernels: kappa m / (kappa_I m_I gammaBar), gammaBar = ratio of mean powers.
double sir_scale(const GenKParams& desired, const GenKParams& interf);

double cdf_sir(const GenKParams& desired, const GenKParams& interf, double x);
double ccdf_sir(const GenKParams& desired, const GenKParams& interf, double x);
double pdf_sir(const GenKParams& desired, const GenKParams& interf, double x);

double pdf_genk(const GenKParams& p, double x);
double cdf_genk(const GenKParams& p, double x);

double path_loss_db(const PathLossParams& p);
double avg_power(const PathLossParams& p, double txPower);

double kappa_from_sigma_db(double sigmaDb);

// Raised when a distribution value cannot be computed to the requested accuracy.
class ConvergenceError : public specfun::SpecfunError {
public:
    using specfun::SpecfunError::SpecfunError;
};

// Clamp to [0,1]: excursions up to 1e-9 are noise, larger ones throw.
double clamp_probability(double v, const char* what);

}  // namespace foxlink::channels
