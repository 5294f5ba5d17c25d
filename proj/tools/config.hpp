#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "foxlink/power_alloc.hpp"
#include "foxlink/relay.hpp"
#include "json.hpp"

namespace foxlink::app {

using nlohmann::json;

// Bad configuration: unknown key, wrong type, invalid value. Maps to exit 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Every key a configuration may carry, with its default.
json default_config();

std::vector<std::string> preset_names();
// Defaults overlaid with the preset. Throws ConfigError for unknown names.
json preset(const std::string& name);

// Overlay `patch` on `base`, rejecting keys the defaults do not know.
void merge_config(json& base, const json& patch);

struct SweepSpec {
    std::string variable;  // mu_r, gamma_bar, gamma_th, P_tot
    double start = 0.0;
    double stop = 1.0;
    int points = 2;
    bool logDb = true;

    std::vector<double> values() const;  // linear units
    std::string column() const;          // header of the sweep column
    double display(double v) const;      // value written to the CSV
};

SweepSpec sweep_of(const json& cfg);

// One curve of a figure: the base configuration with the series overrides.
struct Series {
    std::string label;
    json cfg;
};
std::vector<Series> series_of(const json& cfg);

// System for a resolved configuration. Non-integer beta is rounded and the
// note appended to warnings.
RelaySystem system_of(const json& cfg, std::vector<std::string>* warnings = nullptr);
ModulationScheme modulation_of(const json& cfg);
double threshold_of(const json& cfg);
channels::PathLossParams path_loss_of(const json& cfg);
power::PowerBudget budget_of(const json& cfg, double Ptot);

// Apply a sweep value to a system or threshold.
void apply_sweep(const std::string& variable, double v, RelaySystem& sys, double& gammaTh);

// mu1 that yields the requested normalized FSO SNR mu_r.
double mu1_for_mu_r(const channels::MalagaParams& p, double muR);

}  // namespace foxlink::app
