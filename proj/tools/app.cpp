#include "app.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <locale>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "config.hpp"
#include "foxlink/csi_assisted.hpp"
#include "foxlink/fixed_gain.hpp"
#include "foxlink/mc_sim.hpp"

namespace foxlink::app {

namespace {

struct Options {
    std::string command;
    std::string preset;
    std::string configFile;
    std::string outFile;
    std::string scheme;
    int detection = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> samples;
    bool asymptotic = false;
    bool verbose = false;
};

struct Cell {
    std::optional<double> analytic, asymptotic, mcMean, mcStdErr;
    bool converged = true;
    std::string note;
};

std::string fmt(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(10);
    os << v;
    return os.str();
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::string quote(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << quote(cells[i]);
    os << "\n";
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    const int T = std::min<int>(pool_size(), static_cast<int>(n));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) body(i);
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < T; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
}

json resolve_config(const Options& o) {
    json cfg = o.preset.empty() ? default_config() : preset(o.preset);
    if (!o.configFile.empty()) {
        std::ifstream in(o.configFile);
        if (!in) throw ConfigError("cannot open config file '" + o.configFile + "'");
        json patch;
        try {
            patch = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config file: ") + e.what());
        }
        merge_config(cfg, patch);
    }
    if (!o.scheme.empty()) cfg["scheme"] = o.scheme;
    if (o.detection) cfg["r"] = o.detection;
    if (o.seed) cfg["seed"] = *o.seed;
    if (o.samples) {
        if (!(*o.samples >= 0.0)) throw ConfigError("--samples must be non-negative");
        cfg["samples"] = static_cast<std::int64_t>(std::llround(*o.samples));
    }
    if (o.asymptotic) cfg["asymptotic"] = true;
    return cfg;
}

mc::SimConfig sim_config(const json& cfg, std::int64_t fallbackSamples = 0) {
    mc::SimConfig s;
    s.samples = cfg.at("samples").get<std::int64_t>();
    if (s.samples == 0) s.samples = fallbackSamples;
    s.seed = cfg.at("seed").get<std::uint64_t>();
    s.batches = cfg.at("batches").get<int>();
    // Sweep points already run in parallel.
    s.threads = 1;
    if (s.samples > 0) {
        try {
            s.validate();
        } catch (const channels::ParameterError& e) {
            throw ConfigError(e.what());
        }
    }
    return s;
}

void take(Cell& c, const MetricResult& r) {
    c.analytic = r.value;
    if (!r.converged) c.converged = false;
}

std::optional<double> asymptotic_of(const std::string& metric, const RelaySystem& sys, double gTh,
                                    const ModulationScheme& mod, std::string& note) {
    const bool fixed = sys.scheme.kind == RelayKind::FixedGain;
    try {
        if (metric == "outage")
            return fixed ? fixed_gain::outage_asymptotic(sys, gTh).value
                         : csi::outage_asymptotic_csi(sys, gTh).first.value;
        if (metric == "ber" && fixed) return fixed_gain::avg_ber_asymptotic(sys, mod).value;
    } catch (const DegeneracyError& e) {
        note = e.what();
    }
    return std::nullopt;
}

Cell evaluate(const std::string& metric, const RelaySystem& sys, double gTh, const ModulationScheme& mod,
              bool wantAnalytic, bool wantAsymptotic, const mc::SimConfig& sim) {
    Cell c;
    const bool fixed = sys.scheme.kind == RelayKind::FixedGain;
    try {
        if (wantAnalytic) {
            if (metric == "outage")
                take(c, fixed ? fixed_gain::outage(sys, gTh) : csi::outage_bound(sys, gTh));
            else if (metric == "ber")
                take(c, fixed ? fixed_gain::avg_ber(sys, mod) : csi::avg_ber_csi(sys, mod));
            else
                take(c, fixed ? fixed_gain::capacity(sys) : csi::capacity_csi(sys));
        }
    } catch (const specfun::SpecfunError& e) {
        c.converged = false;
        c.note = e.what();
    } catch (const csi::ConsistencyError& e) {
        c.converged = false;
        c.note = e.what();
    }
    if (wantAsymptotic) c.asymptotic = asymptotic_of(metric, sys, gTh, mod, c.note);
    if (sim.samples > 0) {
        mc::Estimate e;
        if (metric == "outage")
            e = mc::simulate_outage(sys, gTh, sim);
        else if (metric == "ber")
            e = mc::simulate_ber(sys, mod, sim);
        else
            e = mc::simulate_capacity(sys, sim);
        c.mcMean = e.mean;
        c.mcStdErr = e.stdError;
    }
    return c;
}

void write_header(std::ostream& os, const std::string& command, const json& cfg,
                  std::vector<std::string> warnings) {
    std::vector<std::string> seen;
    for (auto& w : warnings)
        if (std::find(seen.begin(), seen.end(), w) == seen.end()) seen.push_back(w);
    warnings = seen;
    os << "# foxlink " << command << "\n";
    os << "# config: " << cfg.dump() << "\n";
    for (const auto& k : cfg.value("assumed", json::array())) {
        const auto key = k.get<std::string>();
        os << "# assumed: true " << key;
        if (cfg.contains(key)) os << "=" << cfg.at(key).dump();
        os << "\n";
    }
    for (const auto& w : warnings) os << "# warning: " << w << "\n";
}

struct Job {
    std::size_t series;
    double x;
};

// outage, ber, capacity and simulate share one sweep table.
int run_metric(const Options& o, const json& cfg, std::ostream& os, std::ostream& err) {
    std::string metric = o.command == "simulate" ? cfg.at("metric").get<std::string>() : o.command;
    if (metric != "outage" && metric != "ber" && metric != "capacity")
        throw ConfigError("metric '" + metric + "' cannot be swept by this command");
    const bool analytic = o.command != "simulate";
    const auto sweep = sweep_of(cfg);
    if (sweep.variable == "P_tot") throw ConfigError("P_tot sweeps belong to the power-alloc command");
    const auto series = series_of(cfg);
    std::vector<std::string> warnings;
    std::vector<RelaySystem> systems;
    std::vector<ModulationScheme> mods;
    std::vector<double> thresholds;
    std::vector<mc::SimConfig> sims;
    for (const auto& s : series) {
        systems.push_back(system_of(s.cfg, &warnings));
        mods.push_back(modulation_of(s.cfg));
        thresholds.push_back(threshold_of(s.cfg));
        sims.push_back(sim_config(s.cfg, analytic ? 0 : 100000));
    }
    const auto xs = sweep.values();
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < series.size(); ++s)
        for (double x : xs) jobs.push_back({s, x});

    std::vector<Cell> cells(jobs.size());
    std::mutex logMutex;
    parallel_for(jobs.size(), [&](std::size_t i) {
        const auto& j = jobs[i];
        RelaySystem sys = systems[j.series];
        double gTh = thresholds[j.series];
        apply_sweep(sweep.variable, j.x, sys, gTh);
        cells[i] = evaluate(metric, sys, gTh, mods[j.series], analytic, series[j.series].cfg.at("asymptotic").get<bool>(),
                            sims[j.series]);
        if (o.verbose) {
            std::lock_guard lock(logMutex);
            err << series[j.series].label << " " << sweep.column() << "=" << fmt(sweep.display(j.x)) << " done\n";
        }
    });

    for (const auto& c : cells)
        if (!c.note.empty()) warnings.push_back(c.note);
    write_header(os, o.command, cfg, warnings);
    write_row(os, {"series", sweep.column(), "analytic", "asymptotic", "mc_mean", "mc_stderr", "converged"});
    bool allConverged = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& c = cells[i];
        allConverged = allConverged && c.converged;
        write_row(os, {series[jobs[i].series].label, fmt(sweep.display(jobs[i].x)), fmt(c.analytic), fmt(c.asymptotic),
                       fmt(c.mcMean), fmt(c.mcStdErr), c.converged ? "true" : "false"});
    }
    return allConverged ? Ok : NotConverged;
}

int run_power_alloc(const Options& o, const json& cfg, std::ostream& os, std::ostream&) {
    const auto sweep = sweep_of(cfg);
    if (sweep.variable != "P_tot") throw ConfigError("power-alloc needs sweep_variable 'P_tot'");
    const auto series = series_of(cfg);
    std::vector<std::string> warnings;
    struct Setup {
        RelaySystem sys;
        double gTh;
        channels::PathLossParams pl;
    };
    std::vector<Setup> setups;
    for (const auto& s : series) setups.push_back({system_of(s.cfg, &warnings), threshold_of(s.cfg), path_loss_of(s.cfg)});

    struct Row {
        double PF = 0, PR = 0, equal = 0, optimal = 0, obj = 0;
        bool converged = true;
    };
    const auto xs = sweep.values();
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < series.size(); ++s)
        for (double x : xs) jobs.push_back({s, x});
    std::vector<Row> rows(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t i) {
        const auto& st = setups[jobs[i].series];
        auto prob = power::build_problem(st.sys, st.gTh, st.pl, budget_of(series[jobs[i].series].cfg, jobs[i].x));
        auto [PF, PR] = power::optimal_split(prob);
        auto outage = [&](double pf, double pr) {
            const auto sys = power::apply_split(st.sys, prob, pf, pr);
            return sys.scheme.kind == RelayKind::FixedGain ? fixed_gain::outage(sys, st.gTh)
                                                            : csi::outage_bound(sys, st.gTh, false);
        };
        Row r;
        r.PF = PF;
        r.PR = PR;
        r.obj = power::objective(prob, PF, PR);
        try {
            const auto eq = outage(prob.Ptot / 2, prob.Ptot / 2);
            const auto op = outage(PF, PR);
            r.equal = eq.value;
            r.optimal = op.value;
            r.converged = eq.converged && op.converged;
        } catch (const specfun::SpecfunError&) {
            r.converged = false;
        }
        rows[i] = r;
    });

    write_header(os, o.command, cfg, warnings);
    write_row(os, {"series", "P_tot_db", "P_F", "P_R", "outage_equal", "outage_optimal", "objective", "converged"});
    bool allConverged = true;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const auto& r = rows[i];
        allConverged = allConverged && r.converged;
        write_row(os, {series[jobs[i].series].label, fmt(sweep.display(jobs[i].x)), fmt(r.PF), fmt(r.PR),
                       r.converged ? fmt(r.equal) : "", r.converged ? fmt(r.optimal) : "", fmt(r.obj),
                       r.converged ? "true" : "false"});
    }
    return allConverged ? Ok : NotConverged;
}

// Analytic against Monte-Carlo at fixed reference points.
struct Check {
    std::string name, series, point;
    std::string metric;
    json cfg;
    double x;
    bool bound = false;  // analytic is a lower bound on the simulated value
};

std::vector<Check> validation_checks(const json& overrides) {
    auto with = [&](json cfg, const json& patch) {
        cfg.update(patch);
        cfg.update(overrides);
        return cfg;
    };
    std::vector<Check> checks;
    const json fig2 = preset("fig2");
    for (int L : {1, 2})
        for (double db : {10.0, 20.0, 30.0})
            checks.push_back({"fixed_outage", "L=" + std::to_string(L), "mu_r_db=" + fmt(db), "outage",
                              with(fig2, {{"L", L}}), db});
    const json fig4 = preset("fig4");
    for (const char* mod : {"bpsk", "16psk"})
        checks.push_back({"fixed_ber", mod, "mu_r_db=20", "ber", with(fig4, {{"modulation", mod}}), 20.0});
    checks.push_back({"fixed_capacity", "r=1", "mu_r_db=20", "capacity", with(fig4, json::object()), 20.0});
    const json fig6 = preset("fig6");
    checks.push_back({"csi_capacity", "r=1", "gamma_bar_db=10", "capacity", with(fig6, json::object()), 10.0});
    checks.push_back({"csi_capacity", "r=2", "gamma_bar_db=10", "capacity", with(fig6, {{"r", 2}}), 10.0});
    auto csiOutage = with(fig6, {{"sweep_variable", "gamma_bar"}});
    for (double db : {5.0, 15.0})
        checks.push_back({"csi_outage_bound", "L=2", "gamma_bar_db=" + fmt(db), "outage", csiOutage, db, true});
    return checks;
}

int run_validate(const Options& o, const json& cfg, std::ostream& os, std::ostream& err) {
    json overrides = {{"seed", cfg.at("seed")}, {"samples", cfg.at("samples")}, {"batches", cfg.at("batches")}};
    if (!o.scheme.empty() || o.detection) err << "validate ignores --scheme and --detection\n";
    auto checks = validation_checks(overrides);
    struct Outcome {
        Cell c;
        double z = 0;
        bool pass = false;
    };
    std::vector<Outcome> res(checks.size());
    std::vector<std::string> warnings;
    parallel_for(checks.size(), [&](std::size_t i) {
        const auto& ch = checks[i];
        RelaySystem sys = system_of(ch.cfg);
        double gTh = threshold_of(ch.cfg);
        const auto sweep = sweep_of(ch.cfg);
        apply_sweep(sweep.variable, std::pow(10.0, ch.x / 10.0), sys, gTh);
        auto& r = res[i];
        r.c = evaluate(ch.metric, sys, gTh, modulation_of(ch.cfg), true, false, sim_config(ch.cfg, 1000000));
        const double d = *r.c.analytic - *r.c.mcMean, se = *r.c.mcStdErr;
        r.z = se > 0 ? d / se : (d == 0 ? 0 : std::copysign(INFINITY, d));
        r.pass = r.c.converged && (ch.bound ? r.z <= 3.0 : std::abs(r.z) <= 3.0);
    });

    write_header(os, o.command, overrides, warnings);
    write_row(os, {"check", "series", "point", "analytic", "mc_mean", "mc_stderr", "z", "converged", "status"});
    bool allPass = true, allConverged = true;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        const auto& r = res[i];
        allPass = allPass && r.pass;
        allConverged = allConverged && r.c.converged;
        write_row(os, {checks[i].name, checks[i].series, checks[i].point, fmt(r.c.analytic), fmt(r.c.mcMean),
                       fmt(r.c.mcStdErr), fmt(r.z), r.c.converged ? "true" : "false", r.pass ? "PASS" : "FAIL"});
    }
    if (!allConverged) return NotConverged;
    return allPass ? Ok : CheckFailed;
}

}  // namespace

int pool_size() {
    if (const char* env = std::getenv("FOXLINK_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App cli{"Dual-hop FSO/mmWave relay performance sweeps", "foxlink"};
    cli.fallthrough();
    cli.require_subcommand(1);
    Options o;
    for (const char* name : {"outage", "ber", "capacity", "power-alloc", "simulate", "validate", "dump-preset"})
        cli.add_subcommand(name);
    cli.add_option("--preset", o.preset, "fig2 .. fig7");
    cli.add_option("--config", o.configFile, "JSON file overlaid on the preset");
    cli.add_option("--out", o.outFile, "output file (default stdout)");
    cli.add_option("--scheme", o.scheme)->check(CLI::IsMember({"fixed", "csi"}));
    cli.add_option("--detection", o.detection, "1 heterodyne, 2 IM/DD")->check(CLI::IsMember({1, 2}));
    cli.add_option("--seed", o.seed);
    cli.add_option("--samples", o.samples, "Monte-Carlo samples, 0 disables");
    cli.add_flag("--asymptotic", o.asymptotic);
    cli.add_flag("--verbose", o.verbose);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        cli.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e, out, err);
        return code == 0 ? Ok : BadConfig;
    }
    o.command = cli.get_subcommands().front()->get_name();

    std::ofstream file;
    std::ostringstream buffer;
    try {
        const json cfg = resolve_config(o);
        int code = Ok;
        if (o.command == "dump-preset") {
            buffer << cfg.dump(2) << "\n";
        } else if (o.command == "power-alloc") {
            code = run_power_alloc(o, cfg, buffer, err);
        } else if (o.command == "validate") {
            code = run_validate(o, cfg, buffer, err);
        } else {
            code = run_metric(o, cfg, buffer, err);
        }
        if (o.outFile.empty()) {
            out << buffer.str();
        } else {
            file.open(o.outFile, std::ios::binary);
            if (!file) throw ConfigError("cannot write '" + o.outFile + "'");
            file << buffer.str();
        }
        if (code == NotConverged) err << "foxlink: some evaluations did not converge\n";
        if (code == CheckFailed) err << "foxlink: validation failures\n";
        return code;
    } catch (const ConfigError& e) {
        err << "foxlink: " << e.what() << "\n";
        return BadConfig;
    } catch (const channels::ParameterError& e) {
        err << "foxlink: " << e.what() << "\n";
        return BadConfig;
    } catch (const json::exception& e) {
        err << "foxlink: config: " << e.what() << "\n";
        return BadConfig;
    }
}

}  // namespace foxlink::app
