// Newton polygons in two distinguished variables (the remaining variables
// act as coefficients), the axes-triangle test for kernel elements and the
// coefficient-degree shape test.
#pragma once

#include "lnd/errors.hpp"
#include "lnd/polynomial.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace lnd {

struct LatticePoint {
    long long x = 0;
    long long y = 0;
    friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
    friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

struct NewtonPolygon {
    std::vector<LatticePoint> points;  // support in (vx, vy) plus the origin
    std::vector<LatticePoint> hull;    // counterclockwise, starts at (0,0)
};

namespace detail {
inline long long cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}
}  // namespace detail

// Strict convex hull (no collinear vertices) by monotone chain.
inline std::vector<LatticePoint> convex_hull(std::vector<LatticePoint> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<LatticePoint> h(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && detail::cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && detail::cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

inline NewtonPolygon newton_polygon(const Polynomial& f, const std::string& vx,
                                    const std::string& vy) {
    if (f.is_zero())
        throw Error(ErrorCode::ZeroPolynomial, "newton polygon of the zero polynomial");
    std::size_t ix = f.var_index(vx), iy = f.var_index(vy);
    std::set<LatticePoint> support;
    support.insert({0, 0});
    for (const auto& [e, c] : f.terms()) support.insert({e[ix], e[iy]});
    NewtonPolygon np;
    np.points.assign(support.begin(), support.end());
    np.hull = convex_hull(np.points);
    return np;
}

struct TriangleCheck {
    bool pass = false;
    long long m = 0;  // leg along the vx axis
    long long n = 0;  // leg along the vy axis
    bool m_divides_n = false;
    bool n_divides_m = false;
    std::string reason;  // populated on fail
};

// Divisibility with the degree-of-a-missing-variable convention:
// 0 | 0 holds, 0 | k fails for k > 0, k | 0 holds.
inline bool divides_deg(long long a, long long b) {
    if (a == 0) return b == 0;
    return b % a == 0;
}

// Passes when the hull is the triangle (0,0), (m,0), (0,n) with m | n or
// n | m. A segment along an axis counts as a zero-length opposite leg; a
// polynomial constant in both variables is rejected outright.
inline TriangleCheck kernel_triangle_check(const NewtonPolygon& np) {
    TriangleCheck out;
    const auto& h = np.hull;
    if (h.size() == 1) {
        out.reason = "constant in both distinguished variables";
        return out;
    }
    if (h.size() == 2) {
        // h[0] is the lexicographic minimum (0,0).
        const LatticePoint& tip = h[1];
        if (tip.y == 0) {
            out.m = tip.x;
            out.n = 0;
        } else if (tip.x == 0) {
            out.m = 0;
            out.n = tip.y;
        } else {
            out.reason = "hull is a segment off the axes";
            return out;
        }
    } else if (h.size() == 3) {
        if (h[0] != LatticePoint{0, 0} || h[1].y != 0 || h[2].x != 0) {
            out.reason = "hull is not a triangle with legs on the axes";
            return out;
        }
        out.m = h[1].x;
        out.n = h[2].y;
    } else {
        out.reason = "hull has more than three vertices";
        return out;
    }
    out.m_divides_n = divides_deg(out.m, out.n);
    out.n_divides_m = divides_deg(out.n, out.m);
    if (!out.m_divides_n && !out.n_divides_m) {
        out.reason = "leg lengths fail the divisibility requirement";
        return out;
    }
    out.pass = true;
    return out;
}

struct GrnpCheck {
    bool pass = false;
    long long q = 0;  // deg_vx / deg_vy
    std::string reason;
};

// With n = deg_vx f > deg_vy f = m and m | n, every term (i, j) must satisfy
// i <= n - j*q and the vy-leading coefficient must be free of vx.
inline GrnpCheck grnp_shape_check(const Polynomial& f, const std::string& vx,
                                  const std::string& vy) {
    NewtonPolygon np = newton_polygon(f, vx, vy);
    TriangleCheck tc = kernel_triangle_check(np);
    if (!tc.pass)
        throw Error(ErrorCode::PreconditionViolation,
                    "kernel_triangle_check fails: " + tc.reason);
    long long n = f.degree_in(vx).value();
    long long m = f.degree_in(vy).value();
    if (!(n > m) || m < 1 || n % m != 0)
        throw Error(ErrorCode::PreconditionViolation,
                    "requires deg_" + vx + " > deg_" + vy + " >= 1 with divisibility");
    GrnpCheck out;
    out.q = n / m;
    std::size_t ix = f.var_index(vx), iy = f.var_index(vy);
    for (const auto& [e, c] : f.terms()) {
        if (e[ix] > n - e[iy] * out.q) {
            out.reason = "term with (" + vx + "," + vy + ") exponents (" +
                         std::to_string(e[ix]) + "," + std::to_string(e[iy]) +
                         ") violates the degree bound";
            return out;
        }
    }
    Polynomial lead = f.coefficient_of(vy, (int)m);
    if (lead.degree_in(vx).value_or(0) != 0) {
        out.reason = "leading " + vy + " coefficient involves " + vx;
        return out;
    }
    out.pass = true;
    return out;
}

}  // namespace lnd
