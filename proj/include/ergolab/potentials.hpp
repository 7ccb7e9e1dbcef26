#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ergolab/dynamics.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

struct SamplingFunction;

// Finite trigonometric polynomial, separable across torus dimensions:
//   f(w) = constant + sum_d sum_k [ a_{d,k} cos(2 pi k w_d) + b_{d,k} sin(2 pi k w_d) ]
struct TrigPoly {
    double constant = 0.0;
    // cos_coeffs[d][k-1] multiplies cos(2 pi k w_d); same layout for sin
    std::vector<std::vector<double>> cos_coeffs;
    std::vector<std::vector<double>> sin_coeffs;

    int dim() const { return std::max<int>(1, int(cos_coeffs.size())); }
    bool operator==(const TrigPoly&) const = default;
};

// Piecewise-constant on circle arcs.  Arc i runs from breakpoints[i] to
// breakpoints[i+1] (cyclically) and carries values[i]; evaluation is
// right-continuous at each breakpoint.
struct StepFunction {
    std::vector<double> breakpoints; // strictly increasing, in [0,1)
    std::vector<double> values;      // one per arc, same length

    bool operator==(const StepFunction&) const = default;
};

// Tent-kernel average of a step function, kernel half-width 1/(n+n0).
// Always evaluated in closed form; see eval below.
struct Mollified {
    StepFunction base;
    long long n = 1;
    long long n0 = 1;

    double half_width() const { return 1.0 / double(n + n0); }
    bool operator==(const Mollified&) const = default;
};

struct Scaled {
    std::shared_ptr<const SamplingFunction> inner;
    double factor = 1.0;
};

struct SamplingFunction {
    std::variant<TrigPoly, StepFunction, Mollified, Scaled> v;
};

bool operator==(const SamplingFunction& a, const SamplingFunction& b);

inline bool operator==(const Scaled& a, const Scaled& b) {
    return a.factor == b.factor && *a.inner == *b.inner;
}

inline bool operator==(const SamplingFunction& a, const SamplingFunction& b) {
    return a.v == b.v;
}

struct SupBound {
    double C = 0.0;
};

// ---- validation -----------------------------------------------------------

inline void validate(const TrigPoly& f) {
    if (!std::isfinite(f.constant))
        throw std::invalid_argument("TrigPoly: non-finite constant");
    if (f.cos_coeffs.size() != f.sin_coeffs.size())
        throw std::invalid_argument("TrigPoly: cos/sin dimension mismatch");
    if (f.cos_coeffs.size() > std::size_t(kMaxDim))
        throw std::invalid_argument("TrigPoly: more than 3 dimensions");
    for (std::size_t d = 0; d < f.cos_coeffs.size(); ++d)
        for (const auto* list : {&f.cos_coeffs[d], &f.sin_coeffs[d]})
            for (double c : *list)
                if (!std::isfinite(c))
                    throw std::invalid_argument("TrigPoly: non-finite coefficient");
}

inline void validate(const StepFunction& s) {
    if (s.values.empty())
        throw std::invalid_argument("StepFunction: needs at least one arc");
    if (s.breakpoints.size() != s.values.size())
        throw std::invalid_argument(
            "StepFunction: breakpoints and values must have equal length");
    for (std::size_t i = 0; i < s.breakpoints.size(); ++i) {
        double b = s.breakpoints[i];
        if (!(b >= 0.0 && b < 1.0))
            throw std::invalid_argument("StepFunction: breakpoint outside [0,1)");
        if (i > 0 && !(b > s.breakpoints[i - 1]))
            throw std::invalid_argument(
                "StepFunction: breakpoints must be strictly increasing");
        if (!std::isfinite(s.values[i]))
            throw std::invalid_argument("StepFunction: non-finite value");
    }
}

// Smallest arc length, the wrap-around arc included.
inline double min_arc_length(const StepFunction& s) {
    const auto& b = s.breakpoints;
    if (b.size() == 1) return 1.0;
    double m = 1.0 - b.back() + b.front();
    for (std::size_t i = 1; i < b.size(); ++i) m = std::min(m, b[i] - b[i - 1]);
    return m;
}

inline void validate(const Mollified& m) {
    validate(m.base);
    if (m.n < 1 || m.n0 < 1)
        throw std::invalid_argument("Mollified: n and n0 must be positive");
    if (!(m.half_width() < 0.5 * min_arc_length(m.base)))
        throw std::invalid_argument(
            "Mollified: kernel half-width 1/(n+n0) must be below half the "
            "smallest arc length");
}

void validate(const SamplingFunction& f);

inline void validate(const Scaled& s) {
    if (!s.inner) throw std::invalid_argument("Scaled: missing inner function");
    if (!std::isfinite(s.factor))
        throw std::invalid_argument("Scaled: non-finite factor");
    validate(*s.inner);
}

inline void validate(const SamplingFunction& f) {
    std::visit([](const auto& v) { validate(v); }, f.v);
}

// ---- factories ------------------------------------------------------------

inline SamplingFunction constant_function(double c) {
    TrigPoly t;
    t.constant = c;
    t.cos_coeffs.resize(1);
    t.sin_coeffs.resize(1);
    SamplingFunction f{t};
    validate(f);
    return f;
}

// amp * cos(2 pi k w) on the circle
inline SamplingFunction cosine_function(double amp, int k = 1) {
    if (k < 1) throw std::invalid_argument("cosine_function: k must be >= 1");
    TrigPoly t;
    t.cos_coeffs.resize(1);
    t.sin_coeffs.resize(1);
    t.cos_coeffs[0].assign(std::size_t(k), 0.0);
    t.cos_coeffs[0][std::size_t(k - 1)] = amp;
    SamplingFunction f{t};
    validate(f);
    return f;
}

inline SamplingFunction step_function(std::vector<double> breakpoints,
                                      std::vector<double> values) {
    StepFunction s{std::move(breakpoints), std::move(values)};
    validate(s);
    return SamplingFunction{std::move(s)};
}

inline SamplingFunction scaled(SamplingFunction inner, double factor) {
    Scaled s{std::make_shared<SamplingFunction>(std::move(inner)), factor};
    validate(s);
    return SamplingFunction{std::move(s)};
}

// ---- structure queries ----------------------------------------------------

inline int dim(const SamplingFunction& f) {
    struct V {
        int operator()(const TrigPoly& t) const { return t.dim(); }
        int operator()(const StepFunction&) const { return 1; }
        int operator()(const Mollified&) const { return 1; }
        int operator()(const Scaled& s) const { return dim(*s.inner); }
    };
    return std::visit(V{}, f.v);
}

// Certified analytic sup bound, never sampled.  Per-harmonic hypot is a valid
// bound for a*cos + b*sin; step functions take max |value|; mollification is
// a convex average so the bound is inherited.
inline SupBound sup_bound(const SamplingFunction& f) {
    struct V {
        double operator()(const TrigPoly& t) const {
            double c = std::fabs(t.constant);
            for (std::size_t d = 0; d < t.cos_coeffs.size(); ++d) {
                std::size_t n = std::max(t.cos_coeffs[d].size(),
                                         t.sin_coeffs[d].size());
                for (std::size_t k = 0; k < n; ++k) {
                    double a = k < t.cos_coeffs[d].size() ? t.cos_coeffs[d][k] : 0.0;
                    double b = k < t.sin_coeffs[d].size() ? t.sin_coeffs[d][k] : 0.0;
                    c += std::hypot(a, b);
                }
            }
            return c;
        }
        double operator()(const StepFunction& s) const {
            double c = 0.0;
            for (double v : s.values) c = std::max(c, std::fabs(v));
            return c;
        }
        double operator()(const Mollified& m) const { return (*this)(m.base); }
        double operator()(const Scaled& s) const {
            return std::fabs(s.factor) * sup_bound(*s.inner).C;
        }
    };
    return SupBound{std::visit(V{}, f.v)};
}

// Certified Lipschitz bound for the continuous variants (used by the midpoint
// error bound of step_approximate).  Step functions are not Lipschitz.
inline double derivative_bound(const SamplingFunction& f) {
    struct V {
        double operator()(const TrigPoly& t) const {
            double L = 0.0;
            for (std::size_t d = 0; d < t.cos_coeffs.size(); ++d) {
                std::size_t n = std::max(t.cos_coeffs[d].size(),
                                         t.sin_coeffs[d].size());
                for (std::size_t k = 0; k < n; ++k) {
                    double a = k < t.cos_coeffs[d].size() ? t.cos_coeffs[d][k] : 0.0;
                    double b = k < t.sin_coeffs[d].size() ? t.sin_coeffs[d][k] : 0.0;
                    L += 2.0 * std::numbers::pi * double(k + 1) * std::hypot(a, b);
                }
            }
            return L;
        }
        double operator()(const StepFunction&) const {
            throw std::invalid_argument(
                "derivative_bound: step functions are not Lipschitz");
        }
        double operator()(const Mollified& m) const {
            // |f_n'| <= max jump / half-width (the tent weight moves at 1/h)
            const auto& v = m.base.values;
            std::size_t cnt = v.size();
            double jump = 0.0;
            for (std::size_t i = 0; i < cnt; ++i)
                jump = std::max(jump, std::fabs(v[i] - v[(i + cnt - 1) % cnt]));
            return jump / m.half_width();
        }
        double operator()(const Scaled& s) const {
            return std::fabs(s.factor) * derivative_bound(*s.inner);
        }
    };
    return std::visit(V{}, f.v);
}

// ---- evaluation -----------------------------------------------------------

// Index of the arc containing theta (right-continuous convention).
inline std::size_t arc_index(const StepFunction& s, double theta) {
    const auto& b = s.breakpoints;
    if (theta < b.front()) return b.size() - 1; // wrap-around arc
    auto it = std::upper_bound(b.begin(), b.end(), theta);
    return std::size_t(it - b.begin()) - 1;
}

namespace detail {

inline double eval_trig_1d(const std::vector<double>& cosc,
                           const std::vector<double>& sinc, double theta) {
    double acc = 0.0;
    double w = 2.0 * std::numbers::pi * theta;
    std::size_t n = std::max(cosc.size(), sinc.size());
    for (std::size_t k = 0; k < n; ++k) {
        double ang = w * double(k + 1);
        if (k < cosc.size() && cosc[k] != 0.0) acc += cosc[k] * std::cos(ang);
        if (k < sinc.size() && sinc[k] != 0.0) acc += sinc[k] * std::sin(ang);
    }
    return acc;
}

inline double eval_step_1d(const StepFunction& s, double theta) {
    return s.values[arc_index(s, theta)];
}

// Closed-form tent-kernel average against a step function.  With kernel
// half-width h below half the smallest arc, the kernel window around theta
// contains at most one breakpoint b.  Writing t0 = b - theta (signed, wrapped)
// and u = t0/h, the weight of the right arc's value is
//     W(u) = (1-u)^2 / 2         for u in [0,1)
//     W(u) = 1 - (1+u)^2 / 2     for u in (-1,0)
// and f_n(theta) = vL + (vR - vL) W.  No breakpoint in range means f_n = s
// exactly; theta at a breakpoint gives the midpoint (vL+vR)/2.
inline double eval_moll_1d(const Mollified& m, double theta) {
    const auto& b = m.base.breakpoints;
    const auto& vals = m.base.values;
    const std::size_t cnt = b.size();
    const double h = m.half_width();

    // nearest breakpoint, signed wrapped offset t0 = b_j - theta
    auto it = std::lower_bound(b.begin(), b.end(), theta);
    std::size_t right = std::size_t(it - b.begin()) % cnt;
    std::size_t left = (right + cnt - 1) % cnt;
    double tr = b[right] - theta;
    if (tr < 0.0) tr += 1.0;
    double tl = b[left] - theta;
    if (tl > 0.0) tl -= 1.0;

    std::size_t j;
    double t0;
    if (tr <= -tl) {
        j = right;
        t0 = tr;
    } else {
        j = left;
        t0 = tl;
    }
    if (std::fabs(t0) >= h) return eval_step_1d(m.base, theta);

    double u = t0 / h;
    double W = (u >= 0.0) ? 0.5 * (1.0 - u) * (1.0 - u)
                          : 1.0 - 0.5 * (1.0 + u) * (1.0 + u);
    double vR = vals[j];
    double vL = vals[(j + cnt - 1) % cnt];
    return vL + (vR - vL) * W;
}

} // namespace detail

inline double eval(const SamplingFunction& f, const Point& w) {
    struct V {
        const Point& w;
        double operator()(const TrigPoly& t) const {
            if (w.dim != t.dim())
                throw std::invalid_argument("eval: point dimension mismatch");
            double acc = t.constant;
            for (std::size_t d = 0; d < t.cos_coeffs.size(); ++d)
                acc += detail::eval_trig_1d(t.cos_coeffs[d], t.sin_coeffs[d],
                                            w[int(d)]);
            return acc;
        }
        double operator()(const StepFunction& s) const {
            if (w.dim != 1)
                throw std::invalid_argument("eval: point dimension mismatch");
            return detail::eval_step_1d(s, w[0]);
        }
        double operator()(const Mollified& m) const {
            if (w.dim != 1)
                throw std::invalid_argument("eval: point dimension mismatch");
            return detail::eval_moll_1d(m, w[0]);
        }
        double operator()(const Scaled& s) const {
            return s.factor * eval(*s.inner, w);
        }
    };
    return std::visit(V{w}, f.v);
}

// ---- step approximation (finitely many values) ----------------------------

struct StepApproxResult {
    StepFunction step;
    double sup_error_bound = 0.0; // Lipschitz midpoint bound + perturbation
};

// Adds an offset in [0, 1e-9) to every value, each drawn independently from a
// deterministic stream.  Distinct tiny irrational-looking offsets keep the
// values pairwise distinct; combined with an irrational rotation this is what
// makes the symbol sequence non-periodic (check_nonperiodic audits it).
inline void perturb_values(StepFunction& s, std::uint64_t seed = 0) {
    Rng rng(split_seed(0x5eedf00dULL, seed));
    for (double& v : s.values) v += rng.uniform01() * 1e-9;
}

inline bool is_continuous(const SamplingFunction& f) {
    struct V {
        bool operator()(const TrigPoly&) const { return true; }
        bool operator()(const StepFunction&) const { return false; }
        bool operator()(const Mollified&) const { return true; }
        bool operator()(const Scaled& s) const { return is_continuous(*s.inner); }
    };
    return std::visit(V{}, f.v);
}

// Piecewise-constant approximation on k equal arcs, value sampled at each arc
// midpoint and perturbed (see perturb_values).  The sup error bound is
// L/(2k) + 1e-9 with L a certified Lipschitz constant of f.
inline StepApproxResult step_approximate(const SamplingFunction& f, int k) {
    if (k < 2) throw std::invalid_argument("step_approximate: k must be >= 2");
    if (!is_continuous(f))
        throw std::invalid_argument(
            "step_approximate: input must be a continuous variant");
    if (dim(f) != 1)
        throw std::invalid_argument("step_approximate: 1-d functions only");

    double L = derivative_bound(f);
    StepFunction s;
    s.breakpoints.reserve(std::size_t(k));
    s.values.reserve(std::size_t(k));
    for (int j = 0; j < k; ++j) {
        s.breakpoints.push_back(double(j) / double(k));
        s.values.push_back(eval(f, Point((double(j) + 0.5) / double(k))));
    }
    perturb_values(s, std::uint64_t(k));
    validate(s);
    return {std::move(s), L / (2.0 * double(k)) + 1e-9};
}

// ---- non-periodicity audit ------------------------------------------------

struct NonPeriodicityReport {
    long long horizon = 0;
    int starts = 0;
    // smallest p <= horizon that reproduces the whole observed symbol window
    // for at least one start; 0 when none found anywhere
    long long period_found = 0;
    int starts_with_period = 0;
};

namespace detail {

// Extended check that lag p really is a period of the symbol sequence, not a
// near-return.  The window scan alone is fooled by good rational approximants
// of alpha: lag F_16 = 987 of the golden rotation moves every orbit point by
// only |987a - 610| ~ 2.8e-4, so a 2000-symbol window often matches itself
// at that lag even though the sequence is aperiodic.  A lag displacing the
// orbit by d breaks within ~1/(d * breakpoints) further symbols on average,
// so walk two phase trackers offset by p until either a mismatch (candidate
// rejected) or enough steps that the expected number of breakpoint crossings
// exceeds ~24.
inline bool confirm_symbol_period(const StepFunction& s, double al,
                                  double start, long long p,
                                  long long window) {
    double disp = std::fmod(double(p) * al, 1.0);
    if (disp > 0.5) disp = 1.0 - disp;
    long long span = window;
    if (disp > 0.0) {
        double need = 24.0 / (disp * double(s.breakpoints.size()));
        if (need > double(span))
            span = (long long)std::min(need, 2.0e7);
    }
    double a = start, b = start;
    for (long long n = 0; n < p; ++n) {
        b += al;
        if (b >= 1.0) b -= 1.0;
    }
    for (long long n = 0; n < span; ++n) {
        if (arc_index(s, a) != arc_index(s, b)) return false;
        a += al;
        if (a >= 1.0) a -= 1.0;
        b += al;
        if (b >= 1.0) b -= 1.0;
    }
    return true;
}

}  // namespace detail

// Scans the symbol sequence arc_index(s, T^n w) over a window of 2*horizon
// steps for each of several starting points and looks for an exact period
// p <= horizon.  Window matches are then confirmed over a longer stretch
// sized from the lag's orbit displacement, so almost-periods coming from
// close rational approximants of alpha are rejected.  A confirmed period is
// an outcome, not an error: constant functions legitimately report period 1.
inline NonPeriodicityReport check_nonperiodic(const StepFunction& s,
                                              const Transformation& T,
                                              long long horizon,
                                              int starts = 5,
                                              std::uint64_t seed = 0) {
    if (horizon < 2)
        throw std::invalid_argument("check_nonperiodic: horizon must be >= 2");
    if (T.dim() != 1)
        throw std::invalid_argument("check_nonperiodic: circle dynamics only");
    validate(s);

    NonPeriodicityReport rep;
    rep.horizon = horizon;
    rep.starts = starts;

    const long long window = 2 * horizon;
    std::vector<std::uint32_t> sym;
    sym.resize(std::size_t(window));
    for (int si = 0; si < starts; ++si) {
        Rng rng(split_seed(seed, std::uint64_t(si)));
        const double th0 = rng.uniform01();
        double th = th0;
        double al = T.alpha(0);
        for (long long n = 0; n < window; ++n) {
            sym[std::size_t(n)] = std::uint32_t(arc_index(s, th));
            th += al;
            if (th >= 1.0) th -= 1.0;
        }
        for (long long p = 1; p <= horizon; ++p) {
            bool period = true;
            for (long long n = 0; n + p < window; ++n) {
                if (sym[std::size_t(n)] != sym[std::size_t(n + p)]) {
                    period = false;
                    break;
                }
            }
            if (period && detail::confirm_symbol_period(s, al, th0, p, window)) {
                ++rep.starts_with_period;
                if (rep.period_found == 0 || p < rep.period_found)
                    rep.period_found = p;
                break;
            }
        }
    }
    return rep;
}

// ---- mollification --------------------------------------------------------

// Tent-kernel mollification, closed form (no quadrature): the kernel
// max{1/(n+n0) - dist, 0} normalized against Lebesgue measure.  Requires the
// kernel to be narrower than every arc.
inline SamplingFunction mollify(const StepFunction& s, long long n, long long n0) {
    Mollified m{s, n, n0};
    validate(m); // checks kernel width against the smallest arc
    return SamplingFunction{std::move(m)};
}

// Smallest positive n0 such that even n = 1 keeps the kernel legal:
// 1/(1+n0) < (smallest arc)/2.
inline long long min_legal_offset(const StepFunction& s) {
    validate(s);
    double half_arc = 0.5 * min_arc_length(s);
    long long n0 = 1;
    while (1.0 / double(1 + n0) >= half_arc) {
        ++n0;
        if (n0 > 1000000000LL)
            throw std::invalid_argument("min_legal_offset: degenerate arcs");
    }
    return n0;
}

// ---- L1 distance ----------------------------------------------------------

namespace detail {

inline void collect_panel_boundaries(const SamplingFunction& f,
                                     std::vector<double>& out) {
    struct V {
        std::vector<double>& out;
        void operator()(const TrigPoly&) const {}
        void operator()(const StepFunction& s) const {
            for (double b : s.breakpoints) out.push_back(wrap_unit(b));
        }
        void operator()(const Mollified& m) const {
            double h = m.half_width();
            for (double b : m.base.breakpoints) {
                out.push_back(wrap_unit(b));
                out.push_back(wrap_unit(b - h)); // kink points of the closed form
                out.push_back(wrap_unit(b + h));
            }
        }
        void operator()(const Scaled& s) const {
            collect_panel_boundaries(*s.inner, out);
        }
    };
    std::visit(V{out}, f.v);
}

} // namespace detail

// Composite-midpoint integral of |f - g| over the torus.  In one dimension
// every breakpoint and mollification kink becomes a panel boundary, so the
// integrand is smooth inside each panel and the midpoint rule behaves.
// `resolution` is the target number of sample cells per unit length.
inline double l1_distance(const SamplingFunction& f, const SamplingFunction& g,
                          int resolution) {
    if (resolution < 100)
        throw std::invalid_argument("l1_distance: resolution must be >= 100");
    int df = dim(f), dg = dim(g);
    if (df != dg)
        throw std::invalid_argument("l1_distance: dimension mismatch");

    if (df == 1) {
        std::vector<double> cuts;
        cuts.push_back(0.0);
        detail::collect_panel_boundaries(f, cuts);
        detail::collect_panel_boundaries(g, cuts);
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        double total = 0.0;
        std::size_t np = cuts.size();
        for (std::size_t i = 0; i < np; ++i) {
            double a = cuts[i];
            double b = (i + 1 < np) ? cuts[i + 1] : cuts[0] + 1.0;
            double len = b - a;
            if (len <= 0.0) continue;
            int cells = std::max(4, int(std::ceil(double(resolution) * len)));
            double w = len / double(cells);
            for (int c = 0; c < cells; ++c) {
                Point p(a + (double(c) + 0.5) * w);
                total += std::fabs(eval(f, p) - eval(g, p)) * w;
            }
        }
        return total;
    }

    // multi-d: plain product midpoint grid, resolution points per axis
    long long per_axis = resolution;
    double w = 1.0 / double(per_axis);
    double total = 0.0;
    if (df == 2) {
        for (long long i = 0; i < per_axis; ++i)
            for (long long j = 0; j < per_axis; ++j) {
                Point p((double(i) + 0.5) * w, (double(j) + 0.5) * w);
                total += std::fabs(eval(f, p) - eval(g, p)) * w * w;
            }
        return total;
    }
    for (long long i = 0; i < per_axis; ++i)
        for (long long j = 0; j < per_axis; ++j)
            for (long long k = 0; k < per_axis; ++k) {
                Point p((double(i) + 0.5) * w, (double(j) + 0.5) * w,
                        (double(k) + 0.5) * w);
                total += std::fabs(eval(f, p) - eval(g, p)) * w * w * w;
            }
    return total;
}

// Closed-form L1 distance between a step function and its mollification:
// each breakpoint contributes |jump| * h/3.  Used as a test oracle and for
// the analytic kernel-support bound #breakpoints * 2h * range.
inline double mollify_l1_exact(const StepFunction& s, long long n, long long n0) {
    double h = 1.0 / double(n + n0);
    const auto& v = s.values;
    std::size_t cnt = v.size();
    double total = 0.0;
    for (std::size_t i = 0; i < cnt; ++i)
        total += std::fabs(v[i] - v[(i + cnt - 1) % cnt]) * h / 3.0;
    return total;
}

inline double mollify_l1_bound(const StepFunction& s, long long n, long long n0) {
    double h = 1.0 / double(n + n0);
    double lo = s.values.front(), hi = s.values.front();
    for (double v : s.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return double(s.breakpoints.size()) * 2.0 * h * (hi - lo);
}

} // namespace ergolab
