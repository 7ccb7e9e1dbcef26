#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace ergolab {

// Gauss-Kronrod 7-15 pair on [a,b].  Returns the Kronrod value, writes
// |K - G| into err.  Standard QUADPACK abscissae/weights.
template <typename F>
std::complex<double> gk15(F&& f, double a, double b, double& err) {
    static const double xk[8] = {
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144838258730,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.0};
    static const double wk[8] = {
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714};
    static const double wg[4] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327};

    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::complex<double> fc = f(mid);
    std::complex<double> kron = wk[7] * fc;
    std::complex<double> gauss = wg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        std::complex<double> lo = f(mid - half * xk[j]);
        std::complex<double> hi = f(mid + half * xk[j]);
        kron += wk[j] * (lo + hi);
        if (j % 2 == 1) gauss += wg[j / 2] * (lo + hi);
    }
    kron *= half;
    gauss *= half;
    err = std::abs(kron - gauss);
    return kron;
}

struct QuadOptions {
    double abs_tol = 1e-10;
    int max_depth = 60;
};

struct QuadStatus {
    double err = 0;        // accumulated error estimate of accepted panels
    bool converged = true; // false if some panel hit max_depth above tolerance
};

namespace detail {

template <typename F>
std::complex<double> adapt_rec(F& f, double a, double b, double tol, int depth,
                               const QuadOptions& opt, QuadStatus& st) {
    double err = 0;
    std::complex<double> v = gk15(f, a, b, err);
    if (err <= tol || depth >= opt.max_depth) {
        st.err += err;
        if (err > tol) st.converged = false;
        return v;
    }
    double mid = 0.5 * (a + b);
    return adapt_rec(f, a, mid, 0.5 * tol, depth + 1, opt, st) +
           adapt_rec(f, mid, b, 0.5 * tol, depth + 1, opt, st);
}

} // namespace detail

// Adaptive bisection driven by the Kronrod-Gauss discrepancy.  Works for any
// f: double -> complex that is integrable on [a,b]; endpoint singularities of
// integrable power type converge too, just slowly (the subdivision marches
// into the endpoint), so keep those behind a substitution when accuracy
// matters.  See schwarz.hpp for an example.
template <typename F>
std::complex<double> integrate_adaptive(F&& f, double a, double b,
                                        const QuadOptions& opt, QuadStatus& st) {
    if (!(b >= a)) throw std::invalid_argument("integrate_adaptive: b < a");
    if (a == b) return {0.0, 0.0};
    return detail::adapt_rec(f, a, b, opt.abs_tol, 0, opt, st);
}

// Line integral of g along the straight segment from p to q in the plane.
template <typename G>
std::complex<double> integrate_segment(G&& g, std::complex<double> p,
                                       std::complex<double> q,
                                       const QuadOptions& opt, QuadStatus& st) {
    std::complex<double> d = q - p;
    auto on_seg = [&](double t) { return g(p + t * d); };
    return d * integrate_adaptive(on_seg, 0.0, 1.0, opt, st);
}

} // namespace ergolab
