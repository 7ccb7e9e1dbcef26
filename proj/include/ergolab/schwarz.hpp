#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "ergolab/format.hpp"
#include "ergolab/potentials.hpp"
#include "ergolab/quadrature.hpp"

namespace ergolab {

// Conformal map Phi from the unit disk onto the equilateral triangle erected
// in the upper half plane over the base segment [-a, a], a = 2 + C, with
//     Phi'(z) = scale * prod_j (1 - z/z_j)^(-2/3).
// The prevertices z_j are the three cube roots of -i: the two base corners
// e^{-i 5pi/6}, e^{-i pi/6} and the apex i.  Phi is evaluated by quadrature
// of Phi' along radial paths; the -2/3 endpoint singularity at a prevertex is
// removed exactly by the substitution u^3 = 1 - zeta/z_j, under which the
// singular factor becomes u^{-2} and cancels against dzeta = -3 z_j u^2 du.
struct ConformalTriangle {
    double C = 0.0;
    double half_width = 2.0; // a = 2 + C
    std::array<std::complex<double>, 3> prevertices{}; // base-left, base-right, apex
    std::array<std::complex<double>, 3> vertices{};    // -a, +a, apex
    std::complex<double> scale{1.0, 0.0};
    std::complex<double> origin{0.0, 0.0}; // Phi(0)
    double path_tol = 1e-8;

    // construction residuals, kept for inspection
    std::array<double, 3> vertex_residuals{};
    double centroid_residual = 0.0;
    double base_mid_residual = 0.0;

    // product form of Phi'/scale (per-factor principal powers)
    std::complex<double> sc_product(std::complex<double> z) const {
        std::complex<double> p{1.0, 0.0};
        for (const auto& zj : prevertices)
            p *= std::pow(1.0 - z / zj, -2.0 / 3.0);
        return p;
    }

    std::complex<double> derivative(std::complex<double> z) const {
        return scale * sc_product(z);
    }

    // integral of the product form from 0 to z along the radius
    std::complex<double> path_integral(std::complex<double> z) const {
        if (z == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};

        QuadOptions opt{0.1 * path_tol, 48};
        QuadStatus st;

        // nearest prevertex in the 1 - z/z_j sense
        int jmin = 0;
        double qmin = 1e300;
        for (int j = 0; j < 3; ++j) {
            double q = std::abs(1.0 - z / prevertices[std::size_t(j)]);
            if (q < qmin) {
                qmin = q;
                jmin = j;
            }
        }

        std::complex<double> result;
        if (qmin >= 0.25) {
            auto f = [this](std::complex<double> zeta) {
                return sc_product(zeta);
            };
            result = integrate_segment(f, {0.0, 0.0}, z, opt, st);
        } else {
            const std::complex<double> zj = prevertices[std::size_t(jmin)];
            std::complex<double> w1 = 1.0 - z / zj;
            // a query at the prevertex itself can round to |w1| ~ eps, and
            // the cube root below would blow that up into a 1e-5 sized stub
            // (the map is Holder-1/3 at corners), so snap onto the corner
            if (std::abs(w1) < 1e-13) w1 = 0.0;
            const double q1 = std::abs(w1);
            std::complex<double> dir =
                (q1 > 0.0) ? w1 / q1 : std::complex<double>(1.0, 0.0);
            const double R = 0.3;
            std::complex<double> zc = zj * (1.0 - R * dir);

            auto f = [this](std::complex<double> zeta) {
                return sc_product(zeta);
            };
            std::complex<double> head =
                integrate_segment(f, {0.0, 0.0}, zc, opt, st);

            // regular part: the two non-singular factors
            auto qp = [this, jmin](std::complex<double> zeta) {
                std::complex<double> p{1.0, 0.0};
                for (int k = 0; k < 3; ++k)
                    if (k != jmin)
                        p *= std::pow(1.0 - zeta / prevertices[std::size_t(k)],
                                      -2.0 / 3.0);
                return p;
            };
            std::complex<double> uc = std::pow(R * dir, 1.0 / 3.0);
            std::complex<double> uz = (q1 > 0.0)
                                          ? std::pow(w1, 1.0 / 3.0)
                                          : std::complex<double>(0.0, 0.0);
            auto g = [&](std::complex<double> u) {
                return qp(zj * (1.0 - u * u * u));
            };
            std::complex<double> tail =
                -3.0 * zj * integrate_segment(g, uc, uz, opt, st);
            result = head + tail;
        }
        if (!st.converged)
            throw std::runtime_error(
                "ConformalTriangle: quadrature failed to meet the path "
                "tolerance");
        return result;
    }

    std::complex<double> map(std::complex<double> z) const {
        return origin + scale * path_integral(z);
    }
};

inline ConformalTriangle build_triangle(SupBound bound, double path_tol = 1e-8) {
    if (!(bound.C >= 0.0))
        throw std::invalid_argument("build_triangle: C must be >= 0");
    if (!(path_tol > 0.0))
        throw std::invalid_argument("build_triangle: path_tol must be > 0");

    ConformalTriangle tri;
    tri.C = bound.C;
    tri.half_width = 2.0 + bound.C;
    tri.path_tol = path_tol;

    const double pi = std::numbers::pi;
    tri.prevertices = {std::polar(1.0, -5.0 * pi / 6.0),
                       std::polar(1.0, -pi / 6.0),
                       std::complex<double>(0.0, 1.0)};
    const double a = tri.half_width;
    tri.vertices = {std::complex<double>(-a, 0.0), std::complex<double>(a, 0.0),
                    std::complex<double>(0.0, a * std::sqrt(3.0))};

    // Solve scale and Phi(0) from the two base corners; the apex, the
    // centroid, and the base midpoint then serve as residual checks.
    std::array<std::complex<double>, 3> A;
    for (int j = 0; j < 3; ++j)
        A[std::size_t(j)] = tri.path_integral(tri.prevertices[std::size_t(j)]);

    tri.scale = 2.0 * a / (A[1] - A[0]);
    tri.origin = -a - tri.scale * A[0];

    for (int j = 0; j < 3; ++j)
        tri.vertex_residuals[std::size_t(j)] =
            std::abs(tri.origin + tri.scale * A[std::size_t(j)] -
                     tri.vertices[std::size_t(j)]);
    tri.centroid_residual =
        std::abs(tri.origin - std::complex<double>(0.0, a / std::sqrt(3.0)));
    tri.base_mid_residual = std::abs(tri.map({0.0, -1.0}));
    return tri;
}

// Parameter of the base-arc point whose image has real part E: bisection on
// theta in (-5pi/6, -pi/6), where Re Phi(e^{i theta}) increases from -a to a.
inline double invert_base(const ConformalTriangle& tri, double E) {
    const double a = tri.half_width;
    if (!(E > -a && E < a))
        throw std::domain_error("invert_base: energy outside the open base");

    const double pi = std::numbers::pi;
    double lo = -5.0 * pi / 6.0;
    double hi = -pi / 6.0;
    auto re_phi = [&](double th) {
        return tri.map(std::polar(1.0, th)).real();
    };
    for (int it = 0; it < 64 && hi - lo > 1e-11; ++it) {
        double mid = 0.5 * (lo + hi);
        if (re_phi(mid) < E)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Boundary weight g(E) = 1/|Phi'| at the base-arc preimage of E.  Positive
// strictly inside I and vanishing (quadratically) at the endpoints, since
// |Phi'| blows up like distance^{-2/3} at the corner prevertices.
inline double sc_weight(const ConformalTriangle& tri, double E) {
    double th = invert_base(tri, E);
    // |Phi'| on the circle via the product form; |1 - i e^{3 i theta}|^{-2/3}
    // is the modulus of the three-factor product
    std::complex<double> z3 =
        std::complex<double>(0.0, 1.0) * std::polar(1.0, 3.0 * th);
    double mod = std::abs(1.0 - z3);
    return std::pow(mod, 2.0 / 3.0) / std::abs(tri.scale);
}

struct WeightTable {
    std::vector<double> energies;
    std::vector<double> values;
};

inline WeightTable build_weight_table(const ConformalTriangle& tri,
                                      const std::vector<double>& energies) {
    WeightTable t;
    t.energies = energies;
    t.values.reserve(energies.size());
    for (double E : energies) t.values.push_back(sc_weight(tri, E));
    return t;
}

inline WeightTable build_weight_table(const ConformalTriangle& tri, int count) {
    if (count < 2)
        throw std::invalid_argument("build_weight_table: count must be >= 2");
    std::vector<double> es;
    es.reserve(std::size_t(count));
    const double a = tri.half_width;
    const double h = 2.0 * a / double(count);
    for (int j = 0; j < count; ++j)
        es.push_back(-a + (double(j) + 0.5) * h);
    return build_weight_table(tri, es);
}

// two-column numeric text export
inline void write_weight_table(const WeightTable& t, std::ostream& os) {
    os << "energy,g\n";
    for (std::size_t i = 0; i < t.energies.size(); ++i)
        os << fmt12(t.energies[i]) << ',' << fmt12(t.values[i]) << '\n';
}

} // namespace ergolab
