// Acceptance gate: ten numbered end-to-end checks, one pass/fail line each.
// Every tolerance is stated inline; a nonzero exit counts the failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "ergolab/runner.hpp"

using namespace ergolab;
using Cplx = std::complex<double>;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id,
                name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Stopwatch {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             t0)
            .count();
    }
};

double free_gamma(Cplx z) {
    Cplx r = std::sqrt(z * z - 4.0);
    return std::log(std::max(std::abs((z + r) / 2.0), std::abs((z - r) / 2.0)));
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// 1: real-orbit exponent of the zero potential against the closed form
void criterion_1() {
    SamplingFunction f = constant_function(0.0);
    Transformation T = Transformation::golden();

    Stopwatch w3;
    LyapunovEstimate g3 = lyapunov_real(f, 3.0, T, 1000000, 8, 0);
    double t3 = w3.seconds();
    Stopwatch w1;
    LyapunovEstimate g1 = lyapunov_real(f, 1.0, T, 1000000, 8, 0);
    double t1 = w1.seconds();

    double want = std::log((3.0 + std::sqrt(5.0)) / 2.0);
    double err3 = std::fabs(g3.value - want);
    bool pass = err3 <= 5e-3 && g1.value <= 0.01 && t3 < 5.0 && t1 < 5.0;
    report(1, "free exponent", pass,
           fmt("|gamma(3)-%.10f| = %.3g (tol 5e-3), gamma(1) = %.3g (tol "
               "0.01), %.2fs + %.2fs (tol 5s each)",
               want, err3, g1.value, t3, t1));
}

// 2: fixed points of the half-plane iteration at zero potential
void criterion_2() {
    SamplingFunction f = constant_function(0.0);
    Transformation T = Transformation::golden();
    Point w(0.3);

    MFunctionResult r1 = m_function(f, Cplx(0.0, 1.0), w, T, 100);
    MFunctionResult r2 = m_function(f, Cplx(0.0, 2.0), w, T, 100);
    double e1 = std::abs(r1.value - Cplx(0.0, 1.6180339887));
    double e2 = std::abs(r2.value - Cplx(0.0, 2.4142135624));
    bool pass = e1 <= 1e-8 && e2 <= 1e-8 && r1.iterations <= 100 &&
                r2.iterations <= 100;
    report(2, "fixed points", pass,
           fmt("|m(i)-1.6180339887i| = %.3g, |m(2i)-2.4142135624i| = %.3g "
               "(tol 1e-8), iterations %lld and %lld (tol 100)",
               e1, e2, (long long)r1.iterations, (long long)r2.iterations));
}

// 3: product exponent and fixed-point exponent agree off the real axis
void criterion_3() {
    SamplingFunction f = cosine_function(2.0);
    Transformation T = Transformation::golden();
    std::vector<Cplx> energies = {{1.0, 0.1}, {-1.0, 0.1}, {0.5, 0.2},
                                  {2.0, 0.5}, {3.0, 1.0}};
    Stopwatch total;
    bool pass = true;
    double worst = 0.0, worst_tol = 0.0;
    for (std::size_t j = 0; j < energies.size(); ++j) {
        LyapunovEstimate prod =
            lyapunov_real(f, energies[j], T, 200000, 8, j);
        LyapunovEstimate fix =
            lyapunov_complex(f, energies[j], T, 64, 1000 + j);
        double se = std::sqrt(prod.std_error * prod.std_error +
                              fix.std_error * fix.std_error);
        double tol = std::max(1e-3, 3.0 * se);
        double diff = std::fabs(prod.value - fix.value);
        if (diff > worst) {
            worst = diff;
            worst_tol = tol;
        }
        if (diff > tol) pass = false;
    }
    double secs = total.seconds();
    if (secs >= 60.0) pass = false;
    report(3, "two exponent algorithms", pass,
           fmt("worst |diff| = %.3g (its tol %.3g) over 5 energies, %.1fs "
               "(tol 60s)",
               worst, worst_tol, secs));
}

// 4: strong coupling floors the exponent at ln(coupling)
void criterion_4() {
    SamplingFunction f = scaled(cosine_function(2.0), 3.0);
    Transformation T = Transformation::golden();
    double lo = -8.0, hi = 8.0;
    double min_gamma = 1e300;
    for (int j = 0; j < 100; ++j) {
        double E = lo + (hi - lo) * double(j) / 99.0;
        LyapunovEstimate g = lyapunov_real(f, E, T, 100000, 8, j);
        min_gamma = std::min(min_gamma, g.value);
    }
    double floor = std::log(3.0) - 0.05;
    bool pass = min_gamma >= floor;
    report(4, "coupling floor", pass,
           fmt("min gamma over 100 energies in [-8,8] = %.4f, floor ln 3 - "
               "0.05 = %.4f",
               min_gamma, floor));
}

// 5: measure of the small-exponent set, full band vs empty
void criterion_5() {
    Transformation T = Transformation::golden();
    Stopwatch wa;
    MeasureEstimate free_est =
        estimate_M(constant_function(0.0), T, EnergyGrid::for_bound(0.0, 400),
                   0.05, {100000, 8, 0});
    double ta = wa.seconds();
    Stopwatch wb;
    MeasureEstimate herman_est =
        estimate_M(scaled(cosine_function(2.0), 3.0), T,
                   EnergyGrid::for_bound(6.0, 400), 0.1, {100000, 8, 1});
    double tb = wb.seconds();

    bool pass = std::fabs(free_est.value - 4.0) <= 0.05 &&
                herman_est.value == 0.0 && ta < 300.0 && tb < 300.0;
    report(5, "measure anchors", pass,
           fmt("M_hat(0) = %.2f (want 4.00 +/- 0.05, %.1fs), "
               "M_hat(strong coupling) = %.2f (want 0, %.1fs; tol 300s each)",
               free_est.value, ta, herman_est.value, tb));
}

// 6: coupling sweep of the zero potential integrates to 8
void criterion_6() {
    Transformation T = Transformation::golden();
    CouplingResult res =
        coupling_integral(constant_function(0.0), T, 2.0, 16, 400, 0.05,
                          {20000, 4, 0});
    double err = std::fabs(res.integral - 8.0);
    bool pass = err <= 0.1;
    report(6, "coupling sweep", pass,
           fmt("integral = %.4f over 16 coupling nodes (want 8.0 +/- 0.1)",
               res.integral));
}

// 7: triangle map residuals, weight symmetry and decay, derivative formula
void criterion_7() {
    ConformalTriangle tri = build_triangle(SupBound{0.0});
    double a = tri.half_width;

    double vres = 0.0;
    for (double r : tri.vertex_residuals) vres = std::max(vres, r);

    double sym = 0.0;
    for (double E = 0.1; E < a; E += 0.2)
        sym = std::max(sym,
                       std::fabs(sc_weight(tri, E) - sc_weight(tri, -E)));

    double mid = sc_weight(tri, 0.0);
    double edge = std::max(sc_weight(tri, -a + 1e-3 * 2.0 * a),
                           sc_weight(tri, a - 1e-3 * 2.0 * a));

    double drel = 0.0;
    const double h = 1e-5;
    Rng rng(41);
    for (int i = 0; i < 10; ++i) {
        Cplx z = std::polar(0.6 * rng.uniform01(),
                            2.0 * std::numbers::pi * rng.uniform01());
        Cplx num = (tri.map(z + h) - tri.map(z - h)) / (2.0 * h);
        Cplx an = tri.derivative(z);
        drel = std::max(drel, std::abs(num - an) / std::abs(an));
    }

    bool pass = vres <= 1e-6 && sym <= 1e-8 && edge <= 0.05 * mid &&
                drel <= 1e-6;
    report(7, "triangle map", pass,
           fmt("vertex residual %.2g (tol 1e-6), weight asymmetry %.2g (tol "
               "1e-8), edge/mid = %.4f (tol 0.05), derivative rel err %.2g "
               "(tol 1e-6)",
               vres, sym, edge / mid, drel));
}

// 8: mean value property of the exponent on a disk off the axis
void criterion_8() {
    HarmonicCheckReport closed =
        harmonic_mean_check_fn([](Cplx z) { return free_gamma(z); },
                               Cplx(0.0, 2.0), 1.0, 64);
    SamplingFunction f = constant_function(0.0);
    Transformation T = Transformation::golden();
    HarmonicCheckReport sim =
        harmonic_mean_check(f, T, Cplx(0.0, 2.0), 1.0, 64, 4, 0);
    bool pass = closed.discrepancy <= 1e-6 && sim.discrepancy <= 5e-3;
    report(8, "mean value property", pass,
           fmt("closed-form discrepancy %.3g (tol 1e-6), simulated %.3g "
               "(tol 5e-3)",
               closed.discrepancy, sim.discrepancy));
}

// 9: the headline pipeline: step target, mollified stages, measure trend
void criterion_9() {
    StepFunction s{{0.0, 0.5}, {0.0, 1.5}};
    perturb_values(s, 1);
    Transformation T = Transformation::golden();

    Stopwatch w;
    ApproxReport rep = approximation_experiment(
        SamplingFunction{s}, 0, {16, 64, 256, 1024}, 0, T, 400, 0.05,
        {1000000, 8, 0}, 0, 1000, 2000);
    double secs = w.seconds();

    std::string l1s, ms;
    for (std::size_t i = 1; i < rep.stages.size(); ++i)
        l1s += fmt("%s%.4g", i > 1 ? " > " : "", rep.stages[i].l1);
    for (const auto& st : rep.stages)
        ms += fmt(" %.3f", st.estimate.value);

    double half_window = 0.5 * (rep.grid.hi - rep.grid.lo);
    bool pass = rep.l1_strictly_decreasing && rep.l1_below_bound &&
                rep.trend_ok && rep.step_bounded &&
                rep.nonperiodic.period_found == 0 && secs < 1800.0;
    report(9, "semicontinuity pipeline", pass,
           fmt("l1 %s (decreasing %s, under bound %s), M_hat per stage:%s "
               "(trend %s), M_hat(step) = %.3f <= %.1f: %s, no period: %s, "
               "%.0fs (tol 1800s)",
               l1s.c_str(), rep.l1_strictly_decreasing ? "yes" : "NO",
               rep.l1_below_bound ? "yes" : "NO", ms.c_str(),
               rep.trend_ok ? "yes" : "NO", rep.stages[0].estimate.value,
               half_window, rep.step_bounded ? "yes" : "NO",
               rep.nonperiodic.period_found == 0 ? "yes" : "NO", secs));
}

// 10: invariants: unimodularity, group action, half-plane, determinism
bool rerun_identical(RunConfig cfg, const char* tag, std::string& note) {
    std::filesystem::path dir = std::filesystem::temp_directory_path() /
                                (std::string("ergolab_accept_") + tag);
    std::filesystem::remove_all(dir);
    cfg.out_dir = dir.string();
    std::ostringstream sink1, sink2, esink;
    RunOutput first = run(cfg, sink1, esink);
    if (first.status != 0) {
        note = fmt("%s run failed: %s", tag, esink.str().c_str());
        return false;
    }
    std::map<std::string, std::string> bytes;
    for (const auto& p : first.files) {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        bytes[p] = ss.str();
    }
    RunOutput second = run(cfg, sink2, esink);
    if (second.status != 0) {
        note = fmt("%s rerun failed", tag);
        return false;
    }
    for (const auto& p : second.files) {
        std::ifstream is(p, std::ios::binary);
        std::ostringstream ss;
        ss << is.rdbuf();
        if (bytes.count(p) == 0 || bytes[p] != ss.str()) {
            note = fmt("%s: %s changed between reruns", tag, p.c_str());
            return false;
        }
    }
    std::filesystem::remove_all(dir);
    return true;
}

void criterion_10() {
    SamplingFunction f = cosine_function(2.0);
    Transformation T = Transformation::golden();
    Rng rng(53);

    double det_err = 0.0;
    for (int i = 0; i < 10000; ++i) {
        Point w = random_point(rng, 1);
        Cplx E(8.0 * rng.uniform01() - 4.0, rng.uniform01());
        TransferMatrix m = transfer_matrix(f, E, w);
        det_err = std::max(det_err, std::abs(det(m) - 1.0));
    }

    double law_err = 0.0;
    for (int i = 0; i < 10000; ++i) {
        TransferMatrix A = transfer_matrix(
            f, Cplx(4.0 * rng.uniform01() - 2.0, rng.uniform01()),
            random_point(rng, 1));
        TransferMatrix B = transfer_matrix(
            f, Cplx(4.0 * rng.uniform01() - 2.0, rng.uniform01()),
            random_point(rng, 1));
        Cplx z(2.0 * rng.uniform01() - 1.0, rng.uniform01() + 0.1);
        Cplx lhs = mobius_apply_raw(A * B, z);
        Cplx rhs = mobius_apply_raw(A, mobius_apply_raw(B, z));
        law_err = std::max(law_err,
                           std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
    }

    long long steps = 0, violations = 0;
    for (int s = 0; s < 10; ++s) {
        Rng orng(split_seed(99, std::uint64_t(s)));
        Point w = random_point(orng, 1);
        Cplx E(4.0 * orng.uniform01() - 2.0,
               0.01 + 0.04 * orng.uniform01());
        Cplx z(0.0, 1.0);
        for (int k = 0; k < 100000; ++k) {
            w = T.apply_inverse(w);
            z = mobius_step(z, E - eval(f, w));
            ++steps;
            if (!(z.imag() > 0.0)) ++violations;
        }
    }

    std::string note = "all kinds byte-identical";
    bool det_ok = true;
    {
        RunConfig c;
        c.kind = ExperimentKind::LyapunovScan;
        c.function = cosine_function(2.0);
        c.grid_count = 8;
        c.N = 2000;
        c.orbits = 2;
        det_ok = det_ok && rerun_identical(c, "scan", note);
    }
    {
        RunConfig c;
        c.kind = ExperimentKind::MFunction;
        c.function = constant_function(0.0);
        c.samples = 3;
        det_ok = det_ok && rerun_identical(c, "mfun", note);
    }
    {
        RunConfig c;
        c.kind = ExperimentKind::Measure;
        c.function = cosine_function(2.0);
        c.grid_count = 12;
        c.N = 2000;
        c.orbits = 2;
        det_ok = det_ok && rerun_identical(c, "measure", note);
    }
    {
        RunConfig c;
        c.kind = ExperimentKind::CouplingSweep;
        c.function = constant_function(0.0);
        c.coupling_Lambda = 1.0;
        c.coupling_lambda_count = 2;
        c.grid_count = 10;
        c.N = 2000;
        c.orbits = 2;
        det_ok = det_ok && rerun_identical(c, "coupling", note);
    }
    {
        RunConfig c;
        c.kind = ExperimentKind::Approximation;
        c.function = step_function({0.0, 0.5}, {0.0, 1.5});
        c.approx_schedule = {4};
        c.grid_count = 10;
        c.N = 2000;
        c.orbits = 2;
        c.approx_horizon = 50;
        c.l1_resolution = 500;
        det_ok = det_ok && rerun_identical(c, "approx", note);
    }
    {
        RunConfig c;
        c.kind = ExperimentKind::ScWeight;
        c.sc_C = 0.0;
        c.sc_count = 8;
        det_ok = det_ok && rerun_identical(c, "weight", note);
    }
    {
        RunConfig c;
        c.kind = ExperimentKind::HarmonicCheck;
        c.function = constant_function(0.0);
        c.harmonic_K = 8;
        c.harmonic_radius = 0.5;
        c.samples = 2;
        det_ok = det_ok && rerun_identical(c, "harmonic", note);
    }

    bool pass = det_err <= 1e-12 && law_err <= 1e-12 && violations == 0 &&
                steps >= 1000000 && det_ok;
    report(10, "invariant suite", pass,
           fmt("max |det-1| = %.2g (tol 1e-12), group law err %.2g (tol "
               "1e-12), %lld violations over %lld half-plane steps, "
               "determinism: %s",
               det_err, law_err, violations, steps, note.c_str()));
}

} // namespace

int main() {
    Stopwatch all;
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%d/10 criteria passed in %.0fs\n", 10 - g_failures,
                all.seconds());
    return g_failures;
}
