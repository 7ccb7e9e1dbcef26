#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ergolab/dynamics.hpp"
#include "ergolab/potentials.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

// One-step transfer matrix [[E - f(w), -1], [1, 0]]; determinant 1 by
// construction.
struct TransferMatrix {
    std::complex<double> a, b, c, d;
};

inline TransferMatrix transfer_matrix(const SamplingFunction& f,
                                      std::complex<double> E, const Point& w) {
    return {E - eval(f, w), {-1.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}};
}

inline std::complex<double> det(const TransferMatrix& m) {
    return m.a * m.d - m.b * m.c;
}

inline TransferMatrix operator*(const TransferMatrix& x, const TransferMatrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

struct LyapunovEstimate {
    double value = 0.0;     // clamped at 0
    double raw = 0.0;       // unclamped mean, kept as a diagnostic
    double std_error = 0.0; // sample std across orbits / sqrt(orbits)
    long long steps = 0;    // cocycle steps (or m-iterations) per orbit/sample
    int orbits = 0;
    std::complex<double> energy;
};

namespace detail {

// Scaled chains flattened to one factor over a leaf variant, giving the
// cocycle loop a branch-predictable evaluator with no recursion.
struct FlatPotential {
    double scale = 1.0;
    const TrigPoly* trig = nullptr;
    const StepFunction* step = nullptr;
    const Mollified* moll = nullptr;
    const SamplingFunction* whole = nullptr;
    int fdim = 1;

    static FlatPotential make(const SamplingFunction& f) {
        FlatPotential fp;
        fp.whole = &f;
        fp.fdim = dim(f);
        const SamplingFunction* cur = &f;
        while (const Scaled* s = std::get_if<Scaled>(&cur->v)) {
            fp.scale *= s->factor;
            cur = s->inner.get();
        }
        if (auto* t = std::get_if<TrigPoly>(&cur->v)) fp.trig = t;
        else if (auto* s = std::get_if<StepFunction>(&cur->v)) fp.step = s;
        else fp.moll = std::get_if<Mollified>(&cur->v);
        return fp;
    }

    bool fast_1d() const { return fdim == 1 && (trig || step || moll); }

    double eval1(double th) const {
        double v;
        if (step) v = eval_step_1d(*step, th);
        else if (moll) v = eval_moll_1d(*moll, th);
        else {
            v = trig->constant;
            if (!trig->cos_coeffs.empty())
                v += eval_trig_1d(trig->cos_coeffs[0], trig->sin_coeffs[0], th);
        }
        return scale * v;
    }
};

inline double abs_sq(double x) { return x * x; }
inline double abs_sq(const std::complex<double>& z) { return std::norm(z); }

// Forward cocycle product along one orbit: P_N = S(T^{N-1}w) ... S(w),
// renormalized to unit Frobenius norm every 16 steps with the removed scale
// accumulated in log.  Returns (log-scale sum + log of final norm) / N.
template <typename Scalar>
double lyap_orbit(const FlatPotential& fp, const Transformation& T,
                  const Point& start, Scalar E, long long N) {
    Scalar p00(1), p01(0), p10(0), p11(1); // identity
    double acc = 0.0;

    auto renorm = [&](void) {
        double fr = std::sqrt(abs_sq(p00) + abs_sq(p01) + abs_sq(p10) +
                              abs_sq(p11));
        if (!(fr > 0.0) || !std::isfinite(fr))
            throw std::runtime_error("lyapunov: cocycle product degenerated");
        acc += std::log(fr);
        double inv = 1.0 / fr;
        p00 *= inv;
        p01 *= inv;
        p10 *= inv;
        p11 *= inv;
    };

    if (fp.fast_1d()) {
        double th = start[0];
        const double al = T.alpha(0);
        for (long long k = 0; k < N; ++k) {
            double v = fp.eval1(th);
            if (!std::isfinite(v))
                throw std::runtime_error("lyapunov: non-finite potential value");
            Scalar e = E - v;
            Scalar n00 = e * p00 - p10;
            Scalar n01 = e * p01 - p11;
            p10 = p00;
            p11 = p01;
            p00 = n00;
            p01 = n01;
            th += al;
            if (th >= 1.0) th -= 1.0;
            if ((k & 15) == 15) renorm();
        }
    } else {
        Point w = start;
        for (long long k = 0; k < N; ++k) {
            double v = eval(*fp.whole, w);
            if (!std::isfinite(v))
                throw std::runtime_error("lyapunov: non-finite potential value");
            Scalar e = E - v;
            Scalar n00 = e * p00 - p10;
            Scalar n01 = e * p01 - p11;
            p10 = p00;
            p11 = p01;
            p00 = n00;
            p01 = n01;
            w = T.apply(w);
            if ((k & 15) == 15) renorm();
        }
    }

    double fr = std::sqrt(abs_sq(p00) + abs_sq(p01) + abs_sq(p10) + abs_sq(p11));
    return (acc + std::log(fr)) / double(N);
}

inline LyapunovEstimate summarize(const std::vector<double>& vals,
                                  std::complex<double> E, long long steps) {
    LyapunovEstimate est;
    est.energy = E;
    est.steps = steps;
    est.orbits = int(vals.size());
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= double(vals.size());
    double var = 0.0;
    if (vals.size() > 1) {
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= double(vals.size() - 1);
    }
    est.raw = mean;
    est.value = std::max(0.0, mean);
    est.std_error = std::sqrt(var / double(vals.size()));
    return est;
}

} // namespace detail

// Birkhoff-averaged Lyapunov exponent from forward cocycle products over
// `orbits` independent random starts.  Real E runs in real arithmetic; the
// same code path handles complex E.  Deterministic in (inputs, seed).
inline LyapunovEstimate lyapunov_real(const SamplingFunction& f,
                                      std::complex<double> E,
                                      const Transformation& T, long long N,
                                      int orbits, std::uint64_t seed) {
    if (N < 1000)
        throw std::invalid_argument("lyapunov_real: N must be >= 1000");
    if (orbits < 1)
        throw std::invalid_argument("lyapunov_real: orbits must be >= 1");
    validate(f);
    if (dim(f) != T.dim())
        throw std::invalid_argument(
            "lyapunov_real: function and transformation dimension mismatch");

    auto fp = detail::FlatPotential::make(f);
    std::vector<double> vals;
    vals.resize(std::size_t(orbits));
    for (int i = 0; i < orbits; ++i) {
        Rng rng(split_seed(seed, std::uint64_t(i)));
        Point w0 = random_point(rng, T.dim());
        vals[std::size_t(i)] =
            (E.imag() == 0.0)
                ? detail::lyap_orbit<double>(fp, T, w0, E.real(), N)
                : detail::lyap_orbit<std::complex<double>>(fp, T, w0, E, N);
    }
    return detail::summarize(vals, E, N);
}

} // namespace ergolab
