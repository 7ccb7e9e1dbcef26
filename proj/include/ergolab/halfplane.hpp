#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ergolab/cocycle.hpp"
#include "ergolab/dynamics.hpp"
#include "ergolab/potentials.hpp"
#include "ergolab/rng.hpp"

namespace ergolab {

// Point of the open upper half plane.  The constructor is the only gate, so
// holding one is proof of Im > 0.
struct HalfPlanePoint {
    std::complex<double> z;

    explicit HalfPlanePoint(std::complex<double> w) : z(w) {
        if (!(w.imag() > 0.0))
            throw std::invalid_argument(
                "HalfPlanePoint: imaginary part must be positive");
    }
};

inline std::complex<double> mobius_apply_raw(const TransferMatrix& m,
                                             std::complex<double> z) {
    std::complex<double> den = m.c * z + m.d;
    if (std::abs(den) == 0.0)
        throw std::domain_error("mobius_apply: pole hit (cz + d = 0)");
    return (m.a * z + m.b) / den;
}

inline HalfPlanePoint mobius_apply(const TransferMatrix& m, HalfPlanePoint z) {
    return HalfPlanePoint(mobius_apply_raw(m, z.z));
}

// One step of the half-plane recursion z -> (E - v) - 1/z, the Mobius action
// of [[E-v, -1], [1, 0]].  Adds Im E to the imaginary part, so the half plane
// is preserved whenever Im E >= 0.
inline std::complex<double> mobius_step(std::complex<double> z,
                                        std::complex<double> e_minus_v) {
    return e_minus_v - 1.0 / z;
}

// Poincare distance on the upper half plane.
inline double poincare_distance(std::complex<double> z, std::complex<double> w) {
    if (!(z.imag() > 0.0 && w.imag() > 0.0))
        throw std::invalid_argument("poincare_distance: points must be in the "
                                    "upper half plane");
    double q = std::norm(z - w) / (2.0 * z.imag() * w.imag());
    return std::acosh(1.0 + q);
}

struct MFunctionResult {
    std::complex<double> value{0.0, 0.0};
    long long iterations = 0;
    double last_delta = 0.0;
    // quotient of the last two successive differences; near the limit this
    // approaches the modulus of the derivative at the attracting point
    double contraction_ratio = 0.0;
    long long halfplane_violations = 0; // Im <= 0 sightings; should stay 0
};

class MConvergenceError : public std::runtime_error {
public:
    MConvergenceError(const std::string& msg, std::complex<double> last,
                      long long iters, double delta, double ratio)
        : std::runtime_error(msg), last_iterate(last), iterations(iters),
          last_delta(delta), contraction_ratio(ratio) {}

    std::complex<double> last_iterate;
    long long iterations;
    double last_delta;
    double contraction_ratio;
};

// Weyl function at complex energy: the limit over n of the product
// S(T^-1 w) S(T^-2 w) ... S(T^-n w) applied to i.  Each pass appends one
// matrix on the right (the innermost map of the composition), which is what
// makes the sequence converge: prepending instead would make the value wander
// with the ergodic orbit.  The running product is renormalized to unit
// Frobenius norm every step; scalar factors cancel in the Mobius action.
inline MFunctionResult m_function(const SamplingFunction& f,
                                  std::complex<double> E, const Point& w,
                                  const Transformation& T,
                                  long long max_iter = 10000,
                                  double tol = 1e-12) {
    if (!(E.imag() >= 1e-6))
        throw std::invalid_argument("m_function: need Im E >= 1e-6");
    if (max_iter < 1) throw std::invalid_argument("m_function: max_iter < 1");
    if (!(tol > 0.0)) throw std::invalid_argument("m_function: tol <= 0");
    validate(f);
    if (dim(f) != T.dim())
        throw std::invalid_argument("m_function: dimension mismatch");

    const std::complex<double> i01{0.0, 1.0};
    std::complex<double> p00{1.0}, p01{0.0}, p10{0.0}, p11{1.0};
    std::complex<double> m_prev = i01;
    double prev_delta = 0.0;
    MFunctionResult res;

    Point wb = w;
    for (long long k = 1; k <= max_iter; ++k) {
        wb = T.apply_inverse(wb);
        std::complex<double> e = E - eval(f, wb);
        // P <- P * [[e, -1], [1, 0]]
        std::complex<double> n00 = p00 * e + p01;
        std::complex<double> n01 = -p00;
        std::complex<double> n10 = p10 * e + p11;
        std::complex<double> n11 = -p10;
        double fr = std::sqrt(std::norm(n00) + std::norm(n01) + std::norm(n10) +
                              std::norm(n11));
        if (!(fr > 0.0) || !std::isfinite(fr))
            throw MConvergenceError("m_function: product degenerated", m_prev,
                                    k, prev_delta, res.contraction_ratio);
        double inv = 1.0 / fr;
        p00 = n00 * inv;
        p01 = n01 * inv;
        p10 = n10 * inv;
        p11 = n11 * inv;

        std::complex<double> den = p10 * i01 + p11;
        if (std::abs(den) == 0.0)
            throw MConvergenceError("m_function: pole in Mobius action", m_prev,
                                    k, prev_delta, res.contraction_ratio);
        std::complex<double> m = (p00 * i01 + p01) / den;
        if (!(m.imag() > 0.0)) ++res.halfplane_violations;

        double delta = std::abs(m - m_prev);
        res.iterations = k;
        res.last_delta = delta;
        if (prev_delta > 0.0) res.contraction_ratio = delta / prev_delta;
        if (delta < tol) {
            res.value = m;
            return res;
        }
        m_prev = m;
        prev_delta = delta;
    }
    throw MConvergenceError(
        "m_function: no convergence to tol within max_iter", m_prev, max_iter,
        prev_delta, res.contraction_ratio);
}

// Lyapunov exponent at complex energy through the Weyl-function identity:
// average ln |m_w(E)| over random w.  The absolute value of the average is
// reported as the exponent (the free case pins the sign: ln|m(i)| =
// ln((1+sqrt5)/2) > 0); the signed mean stays in `raw`.
inline LyapunovEstimate lyapunov_complex(const SamplingFunction& f,
                                         std::complex<double> E,
                                         const Transformation& T, int samples,
                                         std::uint64_t seed,
                                         long long max_iter = 10000,
                                         double tol = 1e-12) {
    if (!(E.imag() >= 1e-4))
        throw std::invalid_argument("lyapunov_complex: need Im E >= 1e-4");
    if (samples < 1)
        throw std::invalid_argument("lyapunov_complex: samples must be >= 1");

    std::vector<double> vals;
    vals.resize(std::size_t(samples));
    long long total_iters = 0;
    for (int i = 0; i < samples; ++i) {
        Rng rng(split_seed(seed, std::uint64_t(i)));
        Point w = random_point(rng, T.dim());
        MFunctionResult r = m_function(f, E, w, T, max_iter, tol);
        total_iters += r.iterations;
        vals[std::size_t(i)] = std::log(std::abs(r.value));
    }
    LyapunovEstimate est = detail::summarize(vals, E, total_iters);
    est.value = std::fabs(est.raw);
    return est;
}

struct HarmonicCheckReport {
    std::complex<double> center{0.0, 0.0};
    double radius = 0.0;
    int K = 0;
    double center_value = 0.0;
    double circle_average = 0.0;
    double discrepancy = 0.0;
};

// Mean-value comparison for any gamma defined on the upper half plane.
// K-point trapezoidal rule on
// the circle (periodic, so the plain average of K equispaced samples).
template <typename GammaFn>
HarmonicCheckReport harmonic_mean_check_fn(GammaFn&& gamma,
                                           std::complex<double> center,
                                           double radius, int K) {
    if (K < 4) throw std::invalid_argument("harmonic_mean_check: K must be >= 4");
    if (!(radius > 0.0))
        throw std::invalid_argument("harmonic_mean_check: radius must be > 0");
    if (!(center.imag() - radius >= 1e-3))
        throw std::invalid_argument(
            "harmonic_mean_check: disk touches the real axis (need Im center "
            "- radius >= 1e-3)");

    HarmonicCheckReport rep;
    rep.center = center;
    rep.radius = radius;
    rep.K = K;
    rep.center_value = gamma(center);
    double acc = 0.0;
    for (int j = 0; j < K; ++j) {
        double th = 2.0 * std::numbers::pi * double(j) / double(K);
        acc += gamma(center + radius * std::complex<double>(std::cos(th),
                                                            std::sin(th)));
    }
    rep.circle_average = acc / double(K);
    rep.discrepancy = std::fabs(rep.center_value - rep.circle_average);
    return rep;
}

// Same check with gamma evaluated by the simulated m-function machinery.
inline HarmonicCheckReport harmonic_mean_check(const SamplingFunction& f,
                                               const Transformation& T,
                                               std::complex<double> center,
                                               double radius, int K,
                                               int samples, std::uint64_t seed,
                                               long long max_iter = 10000,
                                               double tol = 1e-12) {
    long long idx = 0;
    auto gamma = [&](std::complex<double> z) {
        std::uint64_t s = split_seed(seed, std::uint64_t(idx++));
        return lyapunov_complex(f, z, T, samples, s, max_iter, tol).value;
    };
    return harmonic_mean_check_fn(gamma, center, radius, K);
}

} // namespace ergolab
