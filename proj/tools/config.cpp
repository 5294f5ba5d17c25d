#include "config.hpp"

#include <cmath>

namespace foxlink::app {

namespace {

double from_db(double db) { return std::pow(10.0, db / 10.0); }

json series_grid(const std::string& k1, const std::vector<json>& v1, const std::string& k2, const std::vector<json>& v2,
                 const std::vector<std::string>& labels) {
    json out = json::array();
    std::size_t i = 0;
    for (const auto& a : v1)
        for (const auto& b : v2) out.push_back({{"label", labels.at(i++)}, {k1, a}, {k2, b}});
    return out;
}

// Caption values common to the fixed-gain outage figures.
json heavy_shadowing_base() {
    return {{"scheme", "fixed"}, {"kappa", 1.09}, {"N", 2},     {"m", 2.5},
            {"m_I", 2.5},       {"kappa_I", 3.5}, {"rho", 1.0}, {"Omega", 1.0}};
}

template <class T>
T get(const json& cfg, const char* key) {
    try {
        return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

json default_config() {
    return {
        {"name", "custom"},
        {"metric", "outage"},
        {"scheme", "fixed"},
        {"C", 1.7},
        {"alpha", 2.4},
        {"beta", 2.0},
        {"b0", 0.25},
        {"rho", 0.75},
        {"Omega", 0.5},
        {"g", nullptr},
        {"xi", 1.1},
        {"r", 1},
        {"mu_r_db", 20.0},
        {"m", 2.5},
        {"kappa", 1.09},
        {"N", 2},
        {"m_I", 2.5},
        {"kappa_I", 3.5},
        {"L", 2},
        {"interference_db", 0.0},
        {"sir_db", 20.0},
        {"gamma_th_db", 5.0},
        {"modulation", "bpsk"},
        {"asymptotic", false},
        {"sweep_variable", "mu_r"},
        {"sweep_start", 0.0},
        {"sweep_stop", 60.0},
        {"sweep_points", 13},
        {"sweep_spacing", "log-dB"},
        {"series", json::array({{{"label", "base"}}})},
        {"samples", 0},
        {"seed", 1},
        {"batches", 20},
        {"delta", 0.5},
        {"d_F", 1.0},
        {"S_cap_db", nullptr},
        {"wavelength", 10.71e-3},
        {"eta", 2.55},
        {"d0", 5.0},
        {"distance", 50.0},
        {"assumed", json::array()},
    };
}

std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7"}; }

json preset(const std::string& name) {
    json p;
    if (name == "fig2") {
        p = heavy_shadowing_base();
        p.update({{"metric", "outage"},
                  {"r", 2},
                  {"alpha", 5.4},
                  {"beta", 3.8},
                  {"xi", 7.1},
                  {"sir_db", 20.0},
                  {"asymptotic", true},
                  {"series", {{{"label", "L=1"}, {"L", 1}}, {{"label", "L=2"}, {"L", 2}}}},
                  {"assumed", {"xi", "rho", "Omega", "gamma_th_db"}}});
    } else if (name == "fig3") {
        p = heavy_shadowing_base();
        p.update({{"metric", "outage"},
                  {"r", 2},
                  {"L", 2},
                  {"asymptotic", true},
                  {"series", json::array({{{"label", "strong, xi=1.1"}, {"alpha", 2.4}, {"beta", 1.7}, {"xi", 1.1}},
                                          {{"label", "strong, xi=7.1"}, {"alpha", 2.4}, {"beta", 1.7}, {"xi", 7.1}},
                                          {{"label", "moderate, xi=1.1"}, {"alpha", 5.4}, {"beta", 3.8}, {"xi", 1.1}},
                                          {{"label", "moderate, xi=7.1"}, {"alpha", 5.4}, {"beta", 3.8}, {"xi", 7.1}}})},
                  {"assumed", {"r", "xi", "rho", "Omega", "sir_db", "gamma_th_db"}}});
    } else if (name == "fig4") {
        p = heavy_shadowing_base();
        p.update({{"metric", "ber"},
                  {"r", 1},
                  {"alpha", 2.4},
                  {"beta", 1.7},
                  {"L", 2},
                  {"asymptotic", true},
                  {"series", series_grid("m", {0.5, 2.5}, "modulation", {"bpsk", "16psk"},
                                         {"m=0.5 bpsk", "m=0.5 16psk", "m=2.5 bpsk", "m=2.5 16psk"})},
                  {"assumed", {"xi", "rho", "Omega", "sir_db"}}});
    } else if (name == "fig5") {
        p = heavy_shadowing_base();
        p.update({{"metric", "ber"},
                  {"r", 1},
                  {"alpha", 2.4},
                  {"beta", 1.7},
                  {"xi", 7.1},
                  {"L", 2},
                  {"m", 1.5},
                  {"m_I", 1.5},
                  {"asymptotic", true},
                  {"series", series_grid("kappa", {1.09, 3.5, 75.5}, "N", {1, 2},
                                         {"kappa=1.09 N=1", "kappa=1.09 N=2", "kappa=3.5 N=1", "kappa=3.5 N=2",
                                          "kappa=75.5 N=1", "kappa=75.5 N=2"})},
                  {"assumed", {"rho", "Omega", "sir_db", "kappa moderate"}}});
    } else if (name == "fig6") {
        p = heavy_shadowing_base();
        p.update({{"metric", "capacity"},
                  {"scheme", "csi"},
                  {"r", 1},
                  {"alpha", 5.4},
                  {"beta", 3.8},
                  {"kappa_I", 1.09},
                  {"mu_r_db", 20.0},
                  {"sweep_variable", "gamma_bar"},
                  {"sweep_start", 0.0},
                  {"sweep_stop", 40.0},
                  {"sweep_points", 9},
                  {"series", series_grid("kappa", {1.09, 3.5, 75.5}, "L", {1, 2},
                                         {"kappa=1.09 L=1", "kappa=1.09 L=2", "kappa=3.5 L=1", "kappa=3.5 L=2",
                                          "kappa=75.5 L=1", "kappa=75.5 L=2"})},
                  {"assumed", {"alpha", "beta", "xi", "rho", "Omega", "mu_r_db", "kappa moderate"}}});
    } else if (name == "fig7") {
        p = heavy_shadowing_base();
        p.update({{"metric", "power-alloc"},
                  {"scheme", "csi"},
                  {"r", 1},
                  {"alpha", 5.4},
                  {"beta", 3.8},
                  {"xi", 1.1},
                  {"L", 3},
                  {"gamma_th_db", 5.0},
                  {"interference_db", 2.0},
                  {"sweep_variable", "P_tot"},
                  {"sweep_start", 100.0},
                  {"sweep_stop", 150.0},
                  {"sweep_points", 11},
                  {"series", {{{"label", "28 GHz"}, {"wavelength", 10.71e-3}, {"eta", 2.55}},
                              {{"label", "38 GHz"}, {"wavelength", 7.78e-3}, {"eta", 2.2}}}},
                  {"assumed", {"xi", "rho", "Omega", "kappa_I", "d_F", "distance"}}});
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    p["name"] = name;
    json cfg = default_config();
    merge_config(cfg, p);
    return cfg;
}

void merge_config(json& base, const json& patch) {
    if (!patch.is_object()) throw ConfigError("configuration must be a JSON object");
    for (const auto& [k, v] : patch.items()) {
        if (!base.contains(k)) throw ConfigError("unknown config key '" + k + "'");
        base[k] = v;
    }
}

std::vector<double> SweepSpec::values() const {
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
        const double t = start + (stop - start) * i / (points - 1);
        out.push_back(logDb ? from_db(t) : t);
    }
    return out;
}

std::string SweepSpec::column() const { return logDb ? variable + "_db" : variable; }

double SweepSpec::display(double v) const { return logDb ? 10.0 * std::log10(v) : v; }

SweepSpec sweep_of(const json& cfg) {
    SweepSpec s;
    s.variable = get<std::string>(cfg, "sweep_variable");
    s.start = get<double>(cfg, "sweep_start");
    s.stop = get<double>(cfg, "sweep_stop");
    s.points = get<int>(cfg, "sweep_points");
    const auto spacing = get<std::string>(cfg, "sweep_spacing");
    if (spacing != "log-dB" && spacing != "linear") throw ConfigError("sweep_spacing must be 'log-dB' or 'linear'");
    s.logDb = spacing == "log-dB";
    if (s.variable != "mu_r" && s.variable != "gamma_bar" && s.variable != "gamma_th" && s.variable != "P_tot")
        throw ConfigError("unknown sweep variable '" + s.variable + "'");
    if (s.points < 2) throw ConfigError("sweep_points must be at least 2");
    if (!(s.start < s.stop)) throw ConfigError("sweep_start must be below sweep_stop");
    if (!s.logDb && !(s.start > 0.0)) throw ConfigError("linear sweeps must start above zero");
    return s;
}

std::vector<Series> series_of(const json& cfg) {
    const auto& list = cfg.at("series");
    if (!list.is_array() || list.empty()) throw ConfigError("'series' must be a non-empty array");
    std::vector<Series> out;
    for (const auto& item : list) {
        if (!item.is_object()) throw ConfigError("each series entry must be an object");
        Series s;
        s.cfg = cfg;
        s.cfg.erase("series");
        json patch = item;
        s.label = patch.value("label", "series" + std::to_string(out.size() + 1));
        patch.erase("label");
        for (const auto& [k, v] : patch.items())
            if (k == "series" || !s.cfg.contains(k)) throw ConfigError("unknown series key '" + k + "'");
        s.cfg.update(patch);
        out.push_back(std::move(s));
    }
    return out;
}

double mu1_for_mu_r(const channels::MalagaParams& p, double muR) {
    auto q = p;
    q.mu1 = 1.0;
    return muR / channels::malaga_derive(q).mu_r;
}

RelaySystem system_of(const json& cfg, std::vector<std::string>* warnings) {
    RelaySystem s;
    try {
        auto& f = s.fso;
        f.alpha = get<double>(cfg, "alpha");
        f.beta = channels::round_beta(get<double>(cfg, "beta"), warnings);
        f.b0 = get<double>(cfg, "b0");
        f.rho = get<double>(cfg, "rho");
        f.Omega = get<double>(cfg, "Omega");
        if (!cfg.at("g").is_null()) f.gOverride = get<double>(cfg, "g");
        f.xi = get<double>(cfg, "xi");
        f.r = get<int>(cfg, "r");
        f.mu1 = mu1_for_mu_r(f, from_db(get<double>(cfg, "mu_r_db")));
        const double interf = from_db(get<double>(cfg, "interference_db"));
        s.rf = {get<double>(cfg, "m"), get<double>(cfg, "kappa"), get<int>(cfg, "N"),
                from_db(get<double>(cfg, "sir_db")) * interf};
        s.interf = {get<double>(cfg, "m_I"), get<double>(cfg, "kappa_I"), get<int>(cfg, "L"), interf};
        const auto scheme = get<std::string>(cfg, "scheme");
        if (scheme == "fixed")
            s.scheme.kind = RelayKind::FixedGain;
        else if (scheme == "csi")
            s.scheme.kind = RelayKind::CsiAssisted;
        else
            throw ConfigError("scheme must be 'fixed' or 'csi'");
        s.scheme.C = get<double>(cfg, "C");
        s.validate();
    } catch (const channels::ParameterError& e) {
        throw ConfigError(e.what());
    }
    return s;
}

ModulationScheme modulation_of(const json& cfg) {
    try {
        return ModulationScheme::by_name(get<std::string>(cfg, "modulation"));
    } catch (const channels::ParameterError& e) {
        throw ConfigError(e.what());
    }
}

double threshold_of(const json& cfg) { return from_db(get<double>(cfg, "gamma_th_db")); }

channels::PathLossParams path_loss_of(const json& cfg) {
    channels::PathLossParams p;
    p.d0 = get<double>(cfg, "d0");
    p.wavelength = get<double>(cfg, "wavelength");
    p.eta = get<double>(cfg, "eta");
    p.distance = get<double>(cfg, "distance");
    try {
        p.validate();
    } catch (const channels::ParameterError& e) {
        throw ConfigError(e.what());
    }
    return p;
}

power::PowerBudget budget_of(const json& cfg, double Ptot) {
    power::PowerBudget b;
    b.Ptot = Ptot;
    if (!cfg.at("S_cap_db").is_null()) b.Scap = from_db(get<double>(cfg, "S_cap_db"));
    b.delta = get<double>(cfg, "delta");
    b.dF = get<double>(cfg, "d_F");
    return b;
}

void apply_sweep(const std::string& variable, double v, RelaySystem& sys, double& gammaTh) {
    if (variable == "mu_r")
        sys.fso.mu1 = mu1_for_mu_r(sys.fso, v);
    else if (variable == "gamma_bar")
        sys.rf.meanPower = v * sys.interf.meanPower;
    else if (variable == "gamma_th")
        gammaTh = v;
}

}  // namespace foxlink::app
