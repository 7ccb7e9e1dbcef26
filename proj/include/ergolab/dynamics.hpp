#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ergolab/rng.hpp"

namespace ergolab {

inline constexpr int kMaxDim = 3;

// Canonical representative of x mod 1 in [0,1).  The extra guard catches the
// case where x - floor(x) rounds up to exactly 1.0.
inline double wrap_unit(double x) {
    double y = x - std::floor(x);
    if (y >= 1.0) y -= 1.0;
    if (y < 0.0) y += 1.0;
    return y;
}

// Point on the d-torus, d <= 3, coordinates kept in [0,1).  Fixed-size
// storage: these sit in the innermost loops and must not allocate.
struct Point {
    std::array<double, kMaxDim> c{};
    int dim = 1;

    Point() = default;
    explicit Point(double x) : dim(1) { c[0] = wrap_unit(x); }
    Point(double x, double y) : dim(2) {
        c[0] = wrap_unit(x);
        c[1] = wrap_unit(y);
    }
    Point(double x, double y, double z) : dim(3) {
        c[0] = wrap_unit(x);
        c[1] = wrap_unit(y);
        c[2] = wrap_unit(z);
    }

    double operator[](int i) const { return c[std::size_t(i)]; }
};

inline Point random_point(Rng& rng, int dim) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("random_point: dim must be 1..3");
    Point p;
    p.dim = dim;
    for (int i = 0; i < dim; ++i) p.c[std::size_t(i)] = rng.uniform01();
    return p;
}

// True if x is within tol/q^2 of a rational p/q with q <= max_den.  Walks the
// continued-fraction convergents of x, which are its best rational
// approximations, so nothing is missed.  The 1/q^2 scaling matters: a flat
// threshold would reject well-approximable irrationals (the golden mean has a
// convergent with q = 832040 and error ~6e-13).
inline bool near_rational(double x, long long max_den = 1000000,
                          double tol = 1e-12) {
    double y = x;
    long long p_prev = 1, q_prev = 0; // convergent k-1
    long long p_cur = (long long)std::floor(x), q_cur = 1; // convergent k
    for (int it = 0; it < 64; ++it) {
        double r = y - std::floor(y);
        if (r < 1e-15) break; // expansion terminated at p_cur/q_cur
        y = 1.0 / r;
        long long a = (long long)std::floor(y);
        long long p_next = a * p_cur + p_prev;
        long long q_next = a * q_cur + q_prev;
        if (q_next > max_den || q_next <= 0) break;
        p_prev = p_cur;
        q_prev = q_cur;
        p_cur = p_next;
        q_cur = q_next;
        double err = std::abs(x - double(p_cur) / double(q_cur));
        if (err < tol / (double(q_cur) * double(q_cur))) return true;
    }
    double err = std::abs(x - double(p_cur) / double(q_cur));
    return err < tol / (double(q_cur) * double(q_cur));
}

// Translation by an irrational vector on the d-torus: T(w) = w + alpha mod 1.
// Minimal (hence uniquely ergodic for Lebesgue) when 1, alpha_1, ..., alpha_d
// are rationally independent; the constructor enforces the per-coordinate
// necessary condition by rejecting any alpha_i that is numerically rational.
class Transformation {
public:
    explicit Transformation(const std::vector<double>& alphas) {
        if (alphas.empty() || alphas.size() > std::size_t(kMaxDim))
            throw std::invalid_argument(
                "Transformation: need 1..3 rotation numbers");
        dim_ = int(alphas.size());
        for (int i = 0; i < dim_; ++i) {
            double a = alphas[std::size_t(i)];
            if (!(a > 0.0 && a < 1.0))
                throw std::invalid_argument(
                    "Transformation: rotation number must lie in (0,1), got " +
                    std::to_string(a));
            if (near_rational(a))
                throw std::invalid_argument(
                    "Transformation: rotation number is rational within "
                    "tolerance: " + std::to_string(a));
            alpha_[std::size_t(i)] = a;
        }
    }

    // golden rotation on the circle, the default ergodic base everywhere
    static Transformation golden() {
        return Transformation({(std::sqrt(5.0) - 1.0) / 2.0});
    }

    int dim() const { return dim_; }
    double alpha(int i) const { return alpha_[std::size_t(i)]; }

    Point apply(const Point& w) const {
        check_dim(w);
        Point r = w;
        for (int i = 0; i < dim_; ++i)
            r.c[std::size_t(i)] = wrap_unit(r.c[std::size_t(i)] + alpha_[std::size_t(i)]);
        return r;
    }

    Point apply_inverse(const Point& w) const {
        check_dim(w);
        Point r = w;
        for (int i = 0; i < dim_; ++i)
            r.c[std::size_t(i)] = wrap_unit(r.c[std::size_t(i)] - alpha_[std::size_t(i)]);
        return r;
    }

private:
    void check_dim(const Point& w) const {
        if (w.dim != dim_)
            throw std::invalid_argument("Transformation: point dimension " +
                                        std::to_string(w.dim) + " != " +
                                        std::to_string(dim_));
    }

    std::array<double, kMaxDim> alpha_{};
    int dim_ = 1;
};

struct OrbitSpec {
    Point start;
    long long length = 0; // number of points returned, start included
    bool forward = true;
};

inline std::vector<Point> orbit(const Transformation& T, const OrbitSpec& spec) {
    if (spec.length < 1)
        throw std::invalid_argument("orbit: length must be >= 1");
    std::vector<Point> out;
    out.reserve(std::size_t(spec.length));
    Point w = spec.start;
    out.push_back(w);
    for (long long n = 1; n < spec.length; ++n) {
        w = spec.forward ? T.apply(w) : T.apply_inverse(w);
        out.push_back(w);
    }
    return out;
}

// Max-metric on the torus; per coordinate the circle distance
// min(|dx|, 1-|dx|).  Bounded by 1/2, symmetric, triangle inequality holds
// coordinatewise.
inline double torus_distance(const Point& a, const Point& b) {
    if (a.dim != b.dim)
        throw std::invalid_argument("torus_distance: dimension mismatch");
    double d = 0.0;
    for (int i = 0; i < a.dim; ++i) {
        double dx = std::fabs(a[i] - b[i]);
        double circ = std::min(dx, 1.0 - dx);
        d = std::max(d, circ);
    }
    return d;
}

// Circle (1-d) distance between angles, same convention.
inline double circle_distance(double a, double b) {
    double dx = std::fabs(wrap_unit(a) - wrap_unit(b));
    return std::min(dx, 1.0 - dx);
}

} // namespace ergolab
