#pragma once

#include <chrono>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "ergolab/config.hpp"
#include "ergolab/format.hpp"
#include "ergolab/halfplane.hpp"
#include "ergolab/measure.hpp"
#include "ergolab/schwarz.hpp"

namespace ergolab {

struct RunOutput {
    int status = 0;
    std::vector<std::string> files;
};

namespace detail {

inline void write_text_file(const std::filesystem::path& p,
                            const std::string& content) {
    std::ofstream os(p, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open for writing: " + p.string());
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + p.string());
}

// Table builder.  Every table carries the full effective configuration as a
// leading comment, then a header row; cells are preformatted strings.
class Csv {
public:
    Csv(const RunConfig& cfg, const std::string& header) {
        buf_ = "# config: " + emit_config_line(cfg) + "\n" + header + "\n";
    }
    void row(std::initializer_list<std::string> cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) buf_ += ',';
            buf_ += c;
            first = false;
        }
        buf_ += '\n';
    }
    const std::string& str() const { return buf_; }

private:
    std::string buf_;
};

class Report {
public:
    explicit Report(const RunConfig& cfg) {
        buf_ = "# effective config\n" + emit_config(cfg) + "# results\n";
    }
    void put(const std::string& key, const std::string& val) {
        buf_ += "result." + key + " = " + val + "\n";
    }
    void put(const std::string& key, double v) { put(key, fmt12(v)); }
    void put(const std::string& key, long long v) { put(key, std::to_string(v)); }
    void put(const std::string& key, int v) { put(key, std::to_string(v)); }
    void put(const std::string& key, bool v) {
        put(key, std::string(v ? "yes" : "no"));
    }
    const std::string& str() const { return buf_; }

private:
    std::string buf_;
};

inline std::string bool_word(bool v) { return v ? "yes" : "no"; }

struct Emitted {
    std::filesystem::path dir;
    std::vector<std::string>* files;
    void file(const std::string& name, const std::string& content) {
        std::filesystem::path p = dir / name;
        write_text_file(p, content);
        files->push_back(p.string());
    }
};

inline double resolve_C(const RunConfig& cfg) {
    if (cfg.kind == ExperimentKind::ScWeight && cfg.sc_C >= 0.0)
        return cfg.sc_C;
    if (cfg.function) return sup_bound(*cfg.function).C;
    return cfg.sc_C >= 0.0 ? cfg.sc_C : 0.0;
}

inline EnergyGrid resolve_grid(const RunConfig& cfg, double C) {
    if (cfg.grid_lo)
        return {*cfg.grid_lo, *cfg.grid_hi, cfg.grid_count};
    return EnergyGrid::for_bound(C, cfg.grid_count);
}

inline LyapParams lyap_params(const RunConfig& cfg) {
    return {cfg.N, cfg.orbits, cfg.seed};
}

// --- per-kind drivers ------------------------------------------------------

inline void run_lyapunov_scan(const RunConfig& cfg, Emitted& em,
                              std::ostream& out) {
    const SamplingFunction& f = *cfg.function;
    Transformation T(cfg.alphas);
    double C = resolve_C(cfg);
    double lo = cfg.grid_lo.value_or(-(2.0 + C));
    double hi = cfg.grid_hi.value_or(2.0 + C);
    int count = cfg.grid_count;

    std::vector<LyapunovEstimate> rows;
    rows.resize(std::size_t(count));
    parallel_for(std::size_t(count), cfg.threads, [&](std::size_t j) {
        double x = lo + (hi - lo) * double(j) / double(count - 1);
        std::complex<double> E(x, cfg.scan_im);
        rows[j] = lyapunov_real(f, E, T, cfg.N, cfg.orbits,
                                split_seed(cfg.seed, j));
    });

    Csv csv(cfg, "energy_re,energy_im,gamma,raw,std_error");
    double gmin = rows[0].value, gmax = rows[0].value;
    for (const auto& r : rows) {
        csv.row({fmt12(r.energy.real()), fmt12(r.energy.imag()),
                 fmt12(r.value), fmt12(r.raw), fmt12(r.std_error)});
        gmin = std::min(gmin, r.value);
        gmax = std::max(gmax, r.value);
    }
    em.file("lyapunov_scan.csv", csv.str());

    Report rep(cfg);
    rep.put("energies", (long long)count);
    rep.put("gamma_min", gmin);
    rep.put("gamma_max", gmax);
    em.file("report.kv", rep.str());

    out << "lyapunov-scan: " << count << " energies in [" << fmt12(lo) << ", "
        << fmt12(hi) << "], N=" << cfg.N << ", orbits=" << cfg.orbits << "\n";
    out << "gamma_hat range: [" << fmt12(gmin) << ", " << fmt12(gmax) << "]\n";
}

inline void run_m_function(const RunConfig& cfg, Emitted& em,
                           std::ostream& out) {
    const SamplingFunction& f = *cfg.function;
    Transformation T(cfg.alphas);
    std::complex<double> E(cfg.energy_re, cfg.energy_im);

    Csv csv(cfg,
            "sample,m_re,m_im,iterations,last_delta,contraction_ratio,"
            "halfplane_violations,converged");
    std::complex<double> sum{0.0, 0.0};
    double log_sum = 0.0;
    long long max_iters = 0, violations = 0;
    int converged = 0;
    for (int i = 0; i < cfg.samples; ++i) {
        Rng rng(split_seed(cfg.seed, std::uint64_t(i)));
        Point w = random_point(rng, T.dim());
        std::complex<double> m;
        long long iters;
        double delta, ratio;
        long long viol = 0;
        bool ok = true;
        try {
            MFunctionResult r =
                m_function(f, E, w, T, cfg.mfun_max_iter, cfg.mfun_tol);
            m = r.value;
            iters = r.iterations;
            delta = r.last_delta;
            ratio = r.contraction_ratio;
            viol = r.halfplane_violations;
        } catch (const MConvergenceError& e) {
            m = e.last_iterate;
            iters = e.iterations;
            delta = e.last_delta;
            ratio = e.contraction_ratio;
            ok = false;
        }
        csv.row({std::to_string(i), fmt12(m.real()), fmt12(m.imag()),
                 std::to_string(iters), fmt12(delta), fmt12(ratio),
                 std::to_string(viol), ok ? "1" : "0"});
        if (ok) {
            sum += m;
            log_sum += std::log(std::abs(m));
            ++converged;
        }
        max_iters = std::max(max_iters, iters);
        violations += viol;
    }
    em.file("m_function.csv", csv.str());

    std::complex<double> mean =
        converged ? sum / double(converged) : std::complex<double>{};
    double gamma_hat = converged ? std::fabs(log_sum / double(converged)) : 0.0;

    Report rep(cfg);
    rep.put("m_mean_re", mean.real());
    rep.put("m_mean_im", mean.imag());
    rep.put("gamma_hat", gamma_hat);
    rep.put("converged", (long long)converged);
    rep.put("max_iterations", max_iters);
    rep.put("halfplane_violations", violations);
    em.file("report.kv", rep.str());

    out << "m-function at E = " << fmt12(E.real()) << " + " << fmt12(E.imag())
        << "i: " << converged << "/" << cfg.samples << " converged\n";
    out << "m_mean = " << fmt12(mean.real()) << " + " << fmt12(mean.imag())
        << "i, gamma_hat = " << fmt12(gamma_hat)
        << ", max_iterations = " << max_iters << "\n";
}

inline std::string node_csv(const RunConfig& cfg, const MeasureEstimate& est,
                            const WeightTable* weights) {
    Csv csv(cfg, weights ? "energy,gamma,raw,std_error,below,failed,weight"
                         : "energy,gamma,raw,std_error,below,failed");
    for (std::size_t i = 0; i < est.table.size(); ++i) {
        const NodeGamma& r = est.table[i];
        if (weights)
            csv.row({fmt12(r.energy), fmt12(r.gamma), fmt12(r.raw),
                     fmt12(r.std_error), r.below ? "1" : "0",
                     r.failed ? "1" : "0", fmt12(weights->values[i])});
        else
            csv.row({fmt12(r.energy), fmt12(r.gamma), fmt12(r.raw),
                     fmt12(r.std_error), r.below ? "1" : "0",
                     r.failed ? "1" : "0"});
    }
    return csv.str();
}

inline void print_m_hat_line(std::ostream& out, double value,
                             double delta_gamma) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "M_hat = %.2f (delta_gamma=%g)\n", value,
                  delta_gamma);
    out << buf;
}

inline void run_measure(const RunConfig& cfg, Emitted& em, std::ostream& out) {
    const SamplingFunction& f = *cfg.function;
    Transformation T(cfg.alphas);
    EnergyGrid grid = resolve_grid(cfg, resolve_C(cfg));
    MeasureEstimate est = estimate_M(f, T, grid, cfg.delta_gamma,
                                     lyap_params(cfg), cfg.threads);

    em.file("measure_nodes.csv", node_csv(cfg, est, nullptr));

    Report rep(cfg);
    rep.put("M_hat", est.value);
    rep.put("delta_gamma", est.delta_gamma);
    rep.put("grid_lo", grid.lo);
    rep.put("grid_hi", grid.hi);
    rep.put("spacing", grid.spacing());
    rep.put("failed_nodes", (long long)est.failed_count);
    em.file("report.kv", rep.str());

    print_m_hat_line(out, est.value, est.delta_gamma);
    out << "grid: " << grid.count << " cells on [" << fmt12(grid.lo) << ", "
        << fmt12(grid.hi) << "], N=" << cfg.N << ", orbits=" << cfg.orbits
        << ", failed=" << est.failed_count << "\n";
}

inline void run_coupling_sweep(const RunConfig& cfg, Emitted& em,
                               std::ostream& out) {
    const SamplingFunction& f = *cfg.function;
    Transformation T(cfg.alphas);
    CouplingResult res =
        coupling_integral(f, T, cfg.coupling_Lambda, cfg.coupling_lambda_count,
                          cfg.grid_count, cfg.delta_gamma, lyap_params(cfg),
                          cfg.threads);

    Csv csv(cfg, "lambda,M_hat,delta_gamma,failed");
    for (const auto& st : res.stages)
        csv.row({fmt12(st.lambda), fmt12(st.estimate.value),
                 fmt12(st.estimate.delta_gamma),
                 std::to_string(st.estimate.failed_count)});
    em.file("coupling.csv", csv.str());

    Report rep(cfg);
    rep.put("integral", res.integral);
    rep.put("stages", (long long)res.stages.size());
    em.file("report.kv", rep.str());

    out << "coupling sweep: " << res.stages.size() << " coupling values up to "
        << fmt12(cfg.coupling_Lambda) << "\n";
    out << "integral of M_hat over [0, " << fmt12(cfg.coupling_Lambda)
        << "] = " << fmt12(res.integral) << "\n";
}

inline void run_approximation(const RunConfig& cfg, Emitted& em,
                              std::ostream& out) {
    const SamplingFunction& f = *cfg.function;
    Transformation T(cfg.alphas);
    ApproxReport rep = approximation_experiment(
        f, cfg.approx_k, cfg.approx_schedule, cfg.approx_n0, T, cfg.grid_count,
        cfg.delta_gamma, lyap_params(cfg), cfg.threads, cfg.approx_horizon,
        cfg.l1_resolution);

    Csv csv(cfg, "stage,n,half_width,l1,l1_bound,M_hat,gap_min,gap_max");
    for (const auto& st : rep.stages)
        csv.row({st.label, std::to_string(st.n), fmt12(st.half_width),
                 fmt12(st.l1), fmt12(st.l1_bound), fmt12(st.estimate.value),
                 fmt12(st.gap_min), fmt12(st.gap_max)});
    em.file("approximation.csv", csv.str());

    for (const auto& st : rep.stages) {
        std::string name = "approx_nodes_";
        for (char c : st.label)
            if (c != '=') name += c;
        name += ".csv";
        em.file(name, node_csv(cfg, st.estimate, &rep.weights));
    }

    {
        Csv wcsv(cfg, "energy,g");
        for (std::size_t i = 0; i < rep.weights.energies.size(); ++i)
            wcsv.row({fmt12(rep.weights.energies[i]),
                      fmt12(rep.weights.values[i])});
        em.file("approx_weights.csv", wcsv.str());
    }

    Report kv(cfg);
    kv.put("k_used", (long long)rep.k_used);
    kv.put("step_sup_error", rep.step_sup_error);
    kv.put("n0", rep.n0);
    kv.put("delta_gamma", rep.delta_gamma);
    kv.put("period_found", rep.nonperiodic.period_found);
    kv.put("l1_strictly_decreasing", rep.l1_strictly_decreasing);
    kv.put("l1_below_bound", rep.l1_below_bound);
    kv.put("trend_ok", rep.trend_ok);
    kv.put("step_bounded", rep.step_bounded);
    kv.put("M_hat_step", rep.stages[0].estimate.value);
    kv.put("M_hat_first", rep.stages.size() > 1 ? rep.stages[1].estimate.value
                                                : 0.0);
    kv.put("M_hat_last", rep.stages.back().estimate.value);
    em.file("report.kv", kv.str());

    out << "approximation: step with " << rep.step.breakpoints.size()
        << " breakpoints, n0=" << rep.n0 << ", stages:";
    for (const auto& st : rep.stages) out << " " << st.label;
    out << "\n";
    if (rep.nonperiodic.period_found > 0)
        out << "warning: symbol sequence period " << rep.nonperiodic.period_found
            << " within horizon " << rep.nonperiodic.horizon << "\n";
    out << "M_hat per stage:";
    for (const auto& st : rep.stages) out << " " << fmt12(st.estimate.value);
    out << " (delta_gamma=" << fmt12(rep.delta_gamma) << ")\n";
    out << "l1 strictly decreasing: " << bool_word(rep.l1_strictly_decreasing)
        << ", l1 below bound: " << bool_word(rep.l1_below_bound)
        << ", trend ok: " << bool_word(rep.trend_ok)
        << ", step bounded: " << bool_word(rep.step_bounded) << "\n";
}

inline void run_sc_weight(const RunConfig& cfg, Emitted& em,
                          std::ostream& out) {
    double C = resolve_C(cfg);
    ConformalTriangle tri = build_triangle(SupBound{C});
    WeightTable table = build_weight_table(tri, cfg.sc_count);

    Csv csv(cfg, "energy,g");
    for (std::size_t i = 0; i < table.energies.size(); ++i)
        csv.row({fmt12(table.energies[i]), fmt12(table.values[i])});
    em.file("weight.csv", csv.str());

    double vmax = 0.0;
    for (double r : tri.vertex_residuals) vmax = std::max(vmax, r);

    Report rep(cfg);
    rep.put("C", C);
    rep.put("half_width", tri.half_width);
    rep.put("vertex_residual_max", vmax);
    rep.put("centroid_residual", tri.centroid_residual);
    rep.put("base_mid_residual", tri.base_mid_residual);
    em.file("report.kv", rep.str());

    out << "triangle map over [" << fmt12(-tri.half_width) << ", "
        << fmt12(tri.half_width) << "]: max vertex residual " << fmt12(vmax)
        << ", centroid residual " << fmt12(tri.centroid_residual) << "\n";
    out << "weight table: " << cfg.sc_count << " energies\n";
}

inline void run_harmonic_check(const RunConfig& cfg, Emitted& em,
                               std::ostream& out) {
    const SamplingFunction& f = *cfg.function;
    Transformation T(cfg.alphas);
    std::complex<double> center(cfg.harmonic_center_re, cfg.harmonic_center_im);
    HarmonicCheckReport rep =
        harmonic_mean_check(f, T, center, cfg.harmonic_radius, cfg.harmonic_K,
                            cfg.samples, cfg.seed, cfg.mfun_max_iter,
                            cfg.mfun_tol);

    Csv csv(cfg,
            "center_re,center_im,radius,K,center_value,circle_average,"
            "discrepancy");
    csv.row({fmt12(rep.center.real()), fmt12(rep.center.imag()),
             fmt12(rep.radius), std::to_string(rep.K),
             fmt12(rep.center_value), fmt12(rep.circle_average),
             fmt12(rep.discrepancy)});
    em.file("harmonic.csv", csv.str());

    Report kv(cfg);
    kv.put("center_value", rep.center_value);
    kv.put("circle_average", rep.circle_average);
    kv.put("discrepancy", rep.discrepancy);
    em.file("report.kv", kv.str());

    out << "harmonic check at " << fmt12(center.real()) << " + "
        << fmt12(center.imag()) << "i, radius " << fmt12(rep.radius) << ", K="
        << rep.K << "\n";
    out << "gamma(center) = " << fmt12(rep.center_value)
        << ", circle average = " << fmt12(rep.circle_average)
        << ", discrepancy = " << fmt12(rep.discrepancy) << "\n";
}

} // namespace detail

// Execute one experiment: write its tables under cfg.out_dir, print the
// summary to `out`.  Table bytes depend only on cfg; wall-clock goes to the
// stream, never into files.
inline RunOutput run(const RunConfig& cfg, std::ostream& out,
                     std::ostream& err) {
    RunOutput ro;
    auto t0 = std::chrono::steady_clock::now();
    try {
        std::filesystem::create_directories(cfg.out_dir);
        detail::Emitted em{cfg.out_dir, &ro.files};
        switch (cfg.kind) {
        case ExperimentKind::LyapunovScan:
            detail::run_lyapunov_scan(cfg, em, out);
            break;
        case ExperimentKind::MFunction:
            detail::run_m_function(cfg, em, out);
            break;
        case ExperimentKind::Measure:
            detail::run_measure(cfg, em, out);
            break;
        case ExperimentKind::CouplingSweep:
            detail::run_coupling_sweep(cfg, em, out);
            break;
        case ExperimentKind::Approximation:
            detail::run_approximation(cfg, em, out);
            break;
        case ExperimentKind::ScWeight:
            detail::run_sc_weight(cfg, em, out);
            break;
        case ExperimentKind::HarmonicCheck:
            detail::run_harmonic_check(cfg, em, out);
            break;
        }
    } catch (const std::exception& e) {
        err << "error (" << kind_name(cfg.kind) << "): " << e.what() << "\n";
        ro.status = 1;
        return ro;
    }
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "wall_seconds = %.2f\n", secs);
    out << buf;
    return ro;
}

} // namespace ergolab
