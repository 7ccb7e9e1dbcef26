// Command line front end.  One subcommand per experiment kind; the single
// positional argument is a key=value configuration file, and flags override
// individual fields.  Environment variables are never consulted.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ergolab/runner.hpp"

namespace {

struct SharedFlags {
    std::string seed, threads, out, N, orbits, grid_count, grid_lo, grid_hi;
    std::string delta_gamma, samples, energy_re, energy_im;
};

const char* kind_blurb(ergolab::ExperimentKind k) {
    using K = ergolab::ExperimentKind;
    switch (k) {
    case K::LyapunovScan: return "Lyapunov exponent over an energy window";
    case K::MFunction: return "half-plane fixed point at one complex energy";
    case K::Measure: return "measure of the small-exponent energy set";
    case K::CouplingSweep: return "measure integrated over a coupling range";
    case K::Approximation: return "step approximation and mollified stages";
    case K::ScWeight: return "conformal triangle boundary weight table";
    case K::HarmonicCheck: return "mean value property on a disk";
    }
    return "";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasiperiodic cocycle laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> sets;
    bool emit_only = false;
    SharedFlags fl;
    ergolab::ExperimentKind chosen = ergolab::ExperimentKind::LyapunovScan;

    using K = ergolab::ExperimentKind;
    for (K k : {K::LyapunovScan, K::MFunction, K::Measure, K::CouplingSweep,
                K::Approximation, K::ScWeight, K::HarmonicCheck}) {
        CLI::App* sub = app.add_subcommand(ergolab::kind_name(k), kind_blurb(k));
        sub->add_option("config", config_path, "configuration file (key = value lines)");
        sub->add_option("--set", sets, "override any config key (key=value), repeatable");
        sub->add_flag("--emit-config", emit_only,
                      "print the effective configuration and exit");
        sub->add_option("--seed", fl.seed, "base random seed");
        sub->add_option("--threads", fl.threads, "worker threads (0 = all cores)");
        sub->add_option("--out", fl.out, "output directory");
        sub->add_option("--N", fl.N, "cocycle steps per orbit");
        sub->add_option("--orbits", fl.orbits, "independent orbits per energy");
        sub->add_option("--grid-count", fl.grid_count, "energy grid cells");
        sub->add_option("--grid-lo", fl.grid_lo, "energy grid lower edge");
        sub->add_option("--grid-hi", fl.grid_hi, "energy grid upper edge");
        sub->add_option("--delta-gamma", fl.delta_gamma,
                        "smallness threshold (0 = automatic)");
        sub->add_option("--samples", fl.samples, "phase samples per energy");
        sub->add_option("--energy-re", fl.energy_re, "energy, real part");
        sub->add_option("--energy-im", fl.energy_im, "energy, imaginary part");
        sub->callback([&chosen, k] { chosen = k; });
    }

    CLI11_PARSE(app, argc, argv);

    std::string text;
    if (!config_path.empty()) {
        std::ifstream is(config_path, std::ios::binary);
        if (!is) {
            std::cerr << "cannot read config file: " << config_path << "\n";
            return 2;
        }
        std::ostringstream ss;
        ss << is.rdbuf();
        text = ss.str();
    }

    std::vector<std::pair<std::string, std::string>> overrides;
    overrides.emplace_back("experiment", ergolab::kind_name(chosen));
    for (const std::string& s : sets) {
        std::size_t eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "bad --set argument (want key=value): " << s << "\n";
            return 2;
        }
        overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    auto flag = [&](const std::string& v, const char* key) {
        if (!v.empty()) overrides.emplace_back(key, v);
    };
    flag(fl.seed, "seed");
    flag(fl.threads, "threads");
    flag(fl.out, "out_dir");
    flag(fl.N, "lyap.N");
    flag(fl.orbits, "lyap.orbits");
    flag(fl.grid_count, "grid.count");
    flag(fl.grid_lo, "grid.lo");
    flag(fl.grid_hi, "grid.hi");
    flag(fl.delta_gamma, "delta_gamma");
    flag(fl.samples, "mfun.samples");
    flag(fl.energy_re, "energy.re");
    flag(fl.energy_im, "energy.im");

    ergolab::RunConfig cfg;
    try {
        cfg = ergolab::parse_config(text, overrides);
    } catch (const ergolab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    if (emit_only) {
        std::cout << ergolab::emit_config(cfg);
        return 0;
    }

    ergolab::RunOutput ro = ergolab::run(cfg, std::cout, std::cerr);
    return ro.status;
}
