#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ergolab/cocycle.hpp"
#include "ergolab/dynamics.hpp"
#include "ergolab/parallel.hpp"
#include "ergolab/potentials.hpp"
#include "ergolab/schwarz.hpp"

namespace ergolab {

// Equal cells over [lo, hi], evaluated at cell midpoints.  Counting cells
// whose midpoint estimate falls below a threshold turns a Lebesgue measure
// into a transparent estimator with one-spacing resolution.
struct EnergyGrid {
    double lo = -2.0;
    double hi = 2.0;
    int count = 400;

    double spacing() const { return (hi - lo) / double(count); }
    double node(int j) const { return lo + (double(j) + 0.5) * spacing(); }

    static EnergyGrid for_bound(double C, int count) {
        return {-(2.0 + C), 2.0 + C, count};
    }
};

inline void validate(const EnergyGrid& g) {
    if (!(g.hi > g.lo)) throw std::invalid_argument("EnergyGrid: hi must be > lo");
    if (g.count < 1) throw std::invalid_argument("EnergyGrid: count must be >= 1");
    if (!std::isfinite(g.lo) || !std::isfinite(g.hi))
        throw std::invalid_argument("EnergyGrid: non-finite bounds");
}

struct LyapParams {
    long long N = 100000;
    int orbits = 8;
    std::uint64_t seed = 0;
};

struct NodeGamma {
    double energy = 0.0;
    double gamma = 0.0; // clamped estimate
    double raw = 0.0;
    double std_error = 0.0;
    bool below = false;
    bool failed = false;
};

struct MeasureEstimate {
    double value = 0.0;       // spacing * #below among ok nodes
    double delta_gamma = 0.0; // effective threshold
    EnergyGrid grid;
    LyapParams params;
    std::vector<NodeGamma> table;
    int failed_count = 0;

    // recount at another threshold, same table (monotone in delta)
    double value_at(double delta) const {
        int n = 0;
        for (const auto& t : table)
            if (!t.failed && t.gamma < delta) ++n;
        return grid.spacing() * double(n);
    }
};

// Estimate of the Lebesgue measure of {E : gamma_f(E) = 0} as
// spacing * #{grid nodes with gamma_hat < delta_gamma}.  delta_gamma <= 0
// requests the automatic threshold max(0.05, 5 * median std_error): the
// threshold has to dominate the O(N^-1/2) noise of gamma_hat or the count is
// meaningless.  Node failures are excluded and counted.
inline MeasureEstimate estimate_M(const SamplingFunction& f,
                                  const Transformation& T,
                                  const EnergyGrid& grid, double delta_gamma,
                                  const LyapParams& params,
                                  unsigned threads = 0) {
    validate(grid);
    validate(f);
    double C = sup_bound(f).C;
    const double margin = 2.0;
    if (grid.lo < -(2.0 + C) - margin || grid.hi > 2.0 + C + margin)
        throw std::invalid_argument(
            "estimate_M: grid exceeds [-2-C-2, 2+C+2] for this function");

    MeasureEstimate est;
    est.grid = grid;
    est.params = params;
    est.table.resize(std::size_t(grid.count));

    parallel_for(std::size_t(grid.count), threads, [&](std::size_t j) {
        NodeGamma& row = est.table[j];
        row.energy = grid.node(int(j));
        try {
            LyapunovEstimate g =
                lyapunov_real(f, row.energy, T, params.N, params.orbits,
                              split_seed(params.seed, j));
            row.gamma = g.value;
            row.raw = g.raw;
            row.std_error = g.std_error;
        } catch (const std::exception&) {
            row.failed = true;
        }
    });

    for (const auto& row : est.table)
        if (row.failed) ++est.failed_count;

    double delta = delta_gamma;
    if (!(delta > 0.0)) {
        std::vector<double> errs;
        for (const auto& row : est.table)
            if (!row.failed) errs.push_back(row.std_error);
        double med = 0.0;
        if (!errs.empty()) {
            std::sort(errs.begin(), errs.end());
            med = errs[errs.size() / 2];
        }
        delta = std::max(0.05, 5.0 * med);
    }
    est.delta_gamma = delta;

    int n_below = 0;
    for (auto& row : est.table) {
        row.below = !row.failed && row.gamma < delta;
        if (row.below) ++n_below;
    }
    est.value = grid.spacing() * double(n_below);
    return est;
}

// ---- coupling sweep -------------------------------------------------------

struct CouplingStage {
    double lambda = 0.0;
    MeasureEstimate estimate;
};

struct CouplingResult {
    double integral = 0.0;
    std::vector<CouplingStage> stages;
};

// Trapezoidal quadrature of lambda -> M_hat(lambda * f) over [0, Lambda].
// The lambda = 0 endpoint (the analytically known free case) is excluded;
// the first node sits at Lambda/lambda_count/2 and covers [0, h/2] as a
// rectangle.  Each stage's grid spans [-2-lambda*C, 2+lambda*C].
inline CouplingResult coupling_integral(const SamplingFunction& f,
                                        const Transformation& T, double Lambda,
                                        int lambda_count, int grid_count,
                                        double delta_gamma,
                                        const LyapParams& params,
                                        unsigned threads = 0) {
    if (!(Lambda > 0.0))
        throw std::invalid_argument("coupling_integral: Lambda must be > 0");
    if (lambda_count < 2)
        throw std::invalid_argument(
            "coupling_integral: lambda_count must be >= 2");
    validate(f);

    double C = sup_bound(f).C;
    const double h = Lambda / double(lambda_count);

    std::vector<double> lambdas;
    lambdas.push_back(0.5 * h);
    for (int j = 1; j <= lambda_count; ++j) lambdas.push_back(double(j) * h);

    CouplingResult res;
    res.stages.reserve(lambdas.size());
    for (std::size_t j = 0; j < lambdas.size(); ++j) {
        double lam = lambdas[j];
        SamplingFunction fl = scaled(f, lam);
        EnergyGrid grid = EnergyGrid::for_bound(lam * C, grid_count);
        LyapParams p = params;
        p.seed = split_seed(params.seed, j);
        res.stages.push_back(
            {lam, estimate_M(fl, T, grid, delta_gamma, p, threads)});
    }

    // rectangle over [0, h/2], then trapezoids between successive nodes
    double integral = 0.5 * h * res.stages[0].estimate.value;
    for (std::size_t j = 0; j + 1 < res.stages.size(); ++j) {
        double w = res.stages[j + 1].lambda - res.stages[j].lambda;
        integral += 0.5 * w *
                    (res.stages[j].estimate.value +
                     res.stages[j + 1].estimate.value);
    }
    res.integral = integral;
    return res;
}

// ---- weighted gap integrals -----------------------------------------------

enum class GapMode { Min, Max };

// Riemann sum of min{gamma_new - gamma_ref, 0} * g (or max{.,0} * g) over an
// aligned energy grid; the signed quantity whose smallness certifies that the
// exponent did not drop on the weighted interval.
inline double weighted_gap_integral(const std::vector<NodeGamma>& gamma_new,
                                    const std::vector<NodeGamma>& gamma_ref,
                                    const WeightTable& weights, double spacing,
                                    GapMode mode) {
    if (gamma_new.size() != gamma_ref.size() ||
        gamma_new.size() != weights.energies.size())
        throw std::invalid_argument("weighted_gap_integral: table sizes differ");
    double acc = 0.0;
    for (std::size_t i = 0; i < gamma_new.size(); ++i) {
        if (std::fabs(gamma_new[i].energy - gamma_ref[i].energy) > 1e-9 ||
            std::fabs(gamma_new[i].energy - weights.energies[i]) > 1e-9)
            throw std::invalid_argument(
                "weighted_gap_integral: tables not aligned on energies");
        if (gamma_new[i].failed || gamma_ref[i].failed) continue;
        double d = gamma_new[i].gamma - gamma_ref[i].gamma;
        double clipped = (mode == GapMode::Min) ? std::min(d, 0.0)
                                                : std::max(d, 0.0);
        acc += clipped * weights.values[i] * spacing;
    }
    return acc;
}

// ---- approximation experiment ---------------------------------------------

struct ApproxStage {
    std::string label;  // "step" or "n=<value>"
    long long n = 0;    // 0 for the step stage
    double half_width = 0.0;
    double l1 = 0.0;       // ||s - f_n||_1 by quadrature
    double l1_bound = 0.0; // #breakpoints * 2h * range
    MeasureEstimate estimate;
    double gap_min = 0.0; // weighted signed-gap integrals vs the step stage
    double gap_max = 0.0;
};

struct ApproxReport {
    StepFunction step;
    double step_sup_error = 0.0; // only when built from a continuous f
    int k_used = 0;
    long long n0 = 0;
    NonPeriodicityReport nonperiodic;
    EnergyGrid grid;
    double delta_gamma = 0.0;
    WeightTable weights;
    std::vector<ApproxStage> stages; // stage 0 is the step function itself

    bool l1_strictly_decreasing = false;
    bool l1_below_bound = false;
    bool trend_ok = false;     // last M_hat <= first mollified M_hat + 2 spacing
    bool step_bounded = false; // M_hat(step) <= half the grid length
};

// The approximation pipeline: a finitely-valued step function s (given
// directly, or built from a continuous f by step_approximate), its
// non-periodicity audit, and the mollified sequence f_n -> s in L1 with
// M_hat tracked per stage.  The reported verdicts are trends; no stage
// claims a zero measure.
inline ApproxReport approximation_experiment(
    const SamplingFunction& f, int k, const std::vector<long long>& n_schedule,
    long long n0, const Transformation& T, int grid_count, double delta_gamma,
    const LyapParams& params, unsigned threads = 0, long long horizon = 1000,
    int l1_resolution = 2000) {
    validate(f);
    if (n_schedule.empty())
        throw std::invalid_argument(
            "approximation_experiment: empty n schedule");
    for (std::size_t i = 0; i < n_schedule.size(); ++i) {
        if (n_schedule[i] < 1)
            throw std::invalid_argument(
                "approximation_experiment: n must be positive");
        if (i > 0 && n_schedule[i] <= n_schedule[i - 1])
            throw std::invalid_argument(
                "approximation_experiment: n schedule must be increasing");
    }
    if (grid_count < 2)
        throw std::invalid_argument(
            "approximation_experiment: grid_count must be >= 2");

    ApproxReport rep;
    if (const StepFunction* s = std::get_if<StepFunction>(&f.v)) {
        rep.step = *s;
        rep.k_used = 0;
        rep.step_sup_error = 0.0;
    } else {
        StepApproxResult r = step_approximate(f, k);
        rep.step = std::move(r.step);
        rep.k_used = k;
        rep.step_sup_error = r.sup_error_bound;
    }

    rep.n0 = (n0 > 0) ? n0 : min_legal_offset(rep.step);
    rep.nonperiodic = check_nonperiodic(rep.step, T, horizon, 5, params.seed);

    SamplingFunction step_f{rep.step};
    double C = sup_bound(step_f).C;
    rep.grid = EnergyGrid::for_bound(C, grid_count);

    // weight table on the same nodes, from the triangle over I
    ConformalTriangle tri = build_triangle(SupBound{C});
    std::vector<double> nodes;
    nodes.reserve(std::size_t(grid_count));
    for (int j = 0; j < grid_count; ++j) nodes.push_back(rep.grid.node(j));
    rep.weights = build_weight_table(tri, nodes);

    auto run_stage = [&](const SamplingFunction& g, std::size_t stage_idx) {
        LyapParams p = params;
        p.seed = split_seed(params.seed, stage_idx);
        return estimate_M(g, T, rep.grid, delta_gamma, p, threads);
    };

    ApproxStage st0;
    st0.label = "step";
    st0.estimate = run_stage(step_f, 0);
    rep.delta_gamma = st0.estimate.delta_gamma;
    rep.stages.push_back(std::move(st0));

    for (std::size_t i = 0; i < n_schedule.size(); ++i) {
        long long n = n_schedule[i];
        ApproxStage st;
        st.n = n;
        st.label = "n=" + std::to_string(n);
        SamplingFunction fn = mollify(rep.step, n, rep.n0);
        st.half_width = std::get<Mollified>(fn.v).half_width();
        st.l1 = l1_distance(step_f, fn, l1_resolution);
        st.l1_bound = mollify_l1_bound(rep.step, n, rep.n0);
        st.estimate = run_stage(fn, i + 1);
        st.gap_min = weighted_gap_integral(st.estimate.table,
                                           rep.stages[0].estimate.table,
                                           rep.weights, rep.grid.spacing(),
                                           GapMode::Min);
        st.gap_max = weighted_gap_integral(st.estimate.table,
                                           rep.stages[0].estimate.table,
                                           rep.weights, rep.grid.spacing(),
                                           GapMode::Max);
        rep.stages.push_back(std::move(st));
    }

    rep.l1_strictly_decreasing = true;
    rep.l1_below_bound = true;
    for (std::size_t i = 1; i < rep.stages.size(); ++i) {
        const auto& st = rep.stages[i];
        if (i > 1 && !(st.l1 < rep.stages[i - 1].l1))
            rep.l1_strictly_decreasing = false;
        if (!(st.l1 <= st.l1_bound)) rep.l1_below_bound = false;
    }
    if (rep.stages.size() > 1) {
        double first = rep.stages[1].estimate.value;
        double last = rep.stages.back().estimate.value;
        rep.trend_ok = last <= first + 2.0 * rep.grid.spacing();
    }
    rep.step_bounded =
        rep.stages[0].estimate.value <= 0.5 * (rep.grid.hi - rep.grid.lo);
    return rep;
}

} // namespace ergolab
