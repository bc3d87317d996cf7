// Seeded property suite run by the CLI `verify` subcommand and reused by the
// test binaries: random-instance generators for the template families and
// the invariant battery over them.
#pragma once

#include "lnd/derivation.hpp"
#include "lnd/gcd.hpp"
#include "lnd/image_ideal.hpp"
#include "lnd/linear_change.hpp"
#include "lnd/newton.hpp"
#include "lnd/normal_form.hpp"
#include "lnd/parser.hpp"
#include "lnd/rewrite.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace lnd::selfcheck {

class Rng {
public:
    explicit Rng(unsigned long long seed) : eng_(seed) {}

    long long uniform(long long lo, long long hi) {
        return std::uniform_int_distribution<long long>(lo, hi)(eng_);
    }
    bool flip() { return uniform(0, 1) == 1; }

    Rational rational(long long max_num = 4, long long max_den = 3) {
        long long num = uniform(-max_num, max_num);
        long long den = uniform(1, max_den);
        return Rational(num, den);
    }
    Rational nonzero_rational(long long max_num = 4, long long max_den = 3) {
        Rational r = rational(max_num, max_den);
        while (r.is_zero()) r = rational(max_num, max_den);
        return r;
    }

private:
    std::mt19937_64 eng_;
};

inline Polynomial random_polynomial(Rng& rng, const VarListPtr& ring, int max_deg,
                                    int terms) {
    Polynomial p(ring);
    for (int t = 0; t < terms; ++t) {
        ExponentVec e(ring->size(), 0);
        int budget = (int)rng.uniform(0, max_deg);
        for (std::size_t i = 0; i < ring->size() && budget > 0; ++i) {
            int k = (int)rng.uniform(0, budget);
            e[i] = k;
            budget -= k;
        }
        p += Polynomial::monomial(ring, e, rng.rational());
    }
    return p;
}

inline Polynomial random_nonzero_polynomial(Rng& rng, const VarListPtr& ring, int max_deg,
                                            int terms) {
    Polynomial p = random_polynomial(rng, ring, max_deg, terms);
    while (p.is_zero()) p = random_polynomial(rng, ring, max_deg, terms);
    return p;
}

// Homogeneous of the given degree in the first two variables of a 3-variable
// ring; may come out zero.
inline Polynomial random_homogeneous_xy(Rng& rng, const VarListPtr& ring, int deg) {
    Polynomial p(ring);
    for (int k = 0; k <= deg; ++k) {
        if (!rng.flip()) continue;
        p += Polynomial::monomial(ring, ExponentVec{(std::int32_t)(deg - k), (std::int32_t)k, 0},
                                  rng.rational());
    }
    return p;
}

// Lemma 3.3 template: Y^(d+2) + X*f_(d+1)(X,Y) + beta*X^(d+1)*Z.
inline Polynomial triangular_template(Rng& rng, const VarListPtr& ring, int d) {
    Polynomial p = Polynomial::monomial(ring, ExponentVec{0, (std::int32_t)(d + 2), 0},
                                        Rational(1));
    p += Polynomial::variable(ring, (*ring)[0]) * random_homogeneous_xy(rng, ring, d + 1);
    p += Polynomial::monomial(ring, ExponentVec{(std::int32_t)(d + 1), 0, 1},
                              rng.nonzero_rational());
    return p;
}

// Theorem 3.8 template: T^p + sum c_i X^(iq) T^(p-i) + c_p X^(pq-1) Y with
// T = h + X^(q-1) Z and h monic of degree q in Y.
inline Polynomial ntr_template(Rng& rng, const VarListPtr& ring, int p, int q,
                               Polynomial* t_out = nullptr) {
    Polynomial h = Polynomial::monomial(ring, ExponentVec{0, (std::int32_t)q, 0}, Rational(1));
    for (int k = 0; k < q; ++k) {
        if (!rng.flip()) continue;
        h += Polynomial::monomial(ring, ExponentVec{(std::int32_t)(q - k), (std::int32_t)k, 0},
                                  rng.rational(2, 2));
    }
    Polynomial t = h + Polynomial::monomial(ring, ExponentVec{(std::int32_t)(q - 1), 0, 1},
                                            Rational(1));
    Polynomial out = t.pow((unsigned)p);
    for (int i = 1; i <= p - 1; ++i) {
        if (!rng.flip()) continue;
        out += Polynomial::monomial(ring, ExponentVec{(std::int32_t)(i * q), 0, 0},
                                    rng.rational(2, 2)) *
               t.pow((unsigned)(p - i));
    }
    out += Polynomial::monomial(ring, ExponentVec{(std::int32_t)(p * q - 1), 1, 0},
                                rng.nonzero_rational(2, 2));
    if (t_out) *t_out = t;
    return out;
}

inline LinearChange random_invertible(Rng& rng, const VarListPtr& ring) {
    std::size_t n = ring->size();
    while (true) {
        QMat m(n, QVec(n));
        for (auto& row : m)
            for (auto& v : row) v = Rational(rng.uniform(-2, 2));
        if (!determinant(m).is_zero()) return LinearChange(ring, std::move(m));
    }
}

// Invertible change whose first row is a nonzero multiple of X.
inline LinearChange random_scramble_fixing_x(Rng& rng, const VarListPtr& ring) {
    while (true) {
        QMat m(3, QVec(3, Rational(0)));
        m[0][0] = Rational(rng.uniform(1, 3));
        for (std::size_t i = 1; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m[i][j] = Rational(rng.uniform(-2, 2));
        if (!determinant(m).is_zero()) return LinearChange(ring, std::move(m));
    }
}

// Brute-force strict hull: a support point is a vertex iff it is not in the
// convex hull of the others (tested over all segments and triangles).
inline std::vector<LatticePoint> brute_force_hull(const std::vector<LatticePoint>& pts) {
    auto on_segment = [](const LatticePoint& a, const LatticePoint& b,
                         const LatticePoint& p) {
        long long cr = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (cr != 0) return false;
        return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
               std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
    };
    auto sgn = [](long long v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); };
    auto in_triangle = [&](const LatticePoint& a, const LatticePoint& b,
                           const LatticePoint& c, const LatticePoint& p) {
        long long d1 = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        long long d2 = (c.x - b.x) * (p.y - b.y) - (c.y - b.y) * (p.x - b.x);
        long long d3 = (a.x - c.x) * (p.y - c.y) - (a.y - c.y) * (p.x - c.x);
        bool has_neg = sgn(d1) < 0 || sgn(d2) < 0 || sgn(d3) < 0;
        bool has_pos = sgn(d1) > 0 || sgn(d2) > 0 || sgn(d3) > 0;
        return !(has_neg && has_pos);
    };

    std::vector<LatticePoint> vertices;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool inside = false;
        for (std::size_t a = 0; a < pts.size() && !inside; ++a) {
            if (a == i) continue;
            for (std::size_t b = a + 1; b < pts.size() && !inside; ++b) {
                if (b == i) continue;
                if (on_segment(pts[a], pts[b], pts[i])) inside = true;
                for (std::size_t c = b + 1; c < pts.size() && !inside; ++c) {
                    if (c == i) continue;
                    if (in_triangle(pts[a], pts[b], pts[c], pts[i])) inside = true;
                }
            }
        }
        if (!inside) vertices.push_back(pts[i]);
    }
    if (vertices.empty()) return vertices;
    std::sort(vertices.begin(), vertices.end());
    LatticePoint v0 = vertices.front();
    std::sort(vertices.begin() + 1, vertices.end(),
              [&](const LatticePoint& a, const LatticePoint& b) {
                  long long cr = (a.x - v0.x) * (b.y - v0.y) - (a.y - v0.y) * (b.x - v0.x);
                  return cr > 0;
              });
    return vertices;
}

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline PropertyResult run_one(const std::string& name, const std::function<void()>& body) {
    try {
        body();
        return {name, true, ""};
    } catch (const std::exception& e) {
        return {name, false, e.what()};
    }
}

struct Check {
    static void that(bool cond, const std::string& what) {
        if (!cond) throw std::runtime_error(what);
    }
};

}  // namespace detail

inline std::vector<PropertyResult> run_property_suite(unsigned long long seed) {
    using detail::Check;
    std::vector<PropertyResult> results;
    auto ring = make_ring({"X", "Y", "Z"});
    Polynomial x = Polynomial::variable(ring, "X");
    Polynomial y = Polynomial::variable(ring, "Y");
    Polynomial z = Polynomial::variable(ring, "Z");

    results.push_back(detail::run_one("ring axioms", [&] {
        Rng rng(seed + 1);
        for (int it = 0; it < 20; ++it) {
            Polynomial f = random_polynomial(rng, ring, 4, 4);
            Polynomial g = random_polynomial(rng, ring, 4, 4);
            Polynomial h = random_polynomial(rng, ring, 4, 4);
            Check::that((f + g) + h == f + (g + h), "addition associativity");
            Check::that((f * g) * h == f * (g * h), "multiplication associativity");
            Check::that(f * g == g * f, "commutativity");
            Check::that(f * (g + h) == f * g + f * h, "distributivity");
        }
    }));

    results.push_back(detail::run_one("weighted degree is additive on products", [&] {
        Rng rng(seed + 2);
        for (int it = 0; it < 20; ++it) {
            WeightVector w{rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0, 3)};
            Polynomial f = random_nonzero_polynomial(rng, ring, 4, 3);
            Polynomial g = random_nonzero_polynomial(rng, ring, 4, 3);
            Check::that(f.weighted_degree(w).value() + g.weighted_degree(w).value() ==
                            (f * g).weighted_degree(w).value(),
                        "deg(fg) != deg f + deg g");
        }
    }));

    results.push_back(detail::run_one("linear change round trip", [&] {
        Rng rng(seed + 3);
        for (int it = 0; it < 15; ++it) {
            LinearChange c = random_invertible(rng, ring);
            Polynomial f = random_polynomial(rng, ring, 4, 4);
            Check::that(c.inverted().apply(c.apply(f)) == f, "C^-1(C(f)) != f");
        }
    }));

    results.push_back(detail::run_one("slice rewrite round trip", [&] {
        Rng rng(seed + 4);
        auto tring = make_ring({"X", "Y", "T"});
        for (int it = 0; it < 10; ++it) {
            int q = (int)rng.uniform(2, 3);
            Polynomial h = random_homogeneous_xy(rng, ring, q);
            Polynomial t_def =
                h + Polynomial::monomial(ring, ExponentVec{(std::int32_t)(q - 1), 0, 1},
                                         Rational(1));
            Polynomial g = random_polynomial(rng, tring, 3, 4);
            std::map<std::string, Polynomial> back{
                {"X", x}, {"Y", y}, {"T", t_def}};
            Polynomial f = g.substitute(back);
            Check::that(rewrite_in_slice_coordinate(f, t_def, q) == g,
                        "rewrite does not invert substitution");
        }
    }));

    results.push_back(detail::run_one("gcd divides and respects common factors", [&] {
        Rng rng(seed + 5);
        for (int it = 0; it < 10; ++it) {
            Polynomial f = random_nonzero_polynomial(rng, ring, 3, 3);
            Polynomial g = random_nonzero_polynomial(rng, ring, 3, 3);
            Polynomial d = gcd(f, g);
            Check::that(exact_divide(f, d).has_value(), "gcd does not divide f");
            Check::that(exact_divide(g, d).has_value(), "gcd does not divide g");
            Polynomial h = random_nonzero_polynomial(rng, ring, 2, 2);
            Check::that(gcd(f * h, g * h) == normalized_primitive(d * h),
                        "gcd(fh, gh) != gcd(f,g) * h up to normalization");
        }
    }));

    results.push_back(detail::run_one("Leibniz rule", [&] {
        Rng rng(seed + 6);
        for (int it = 0; it < 10; ++it) {
            Derivation d(ring, {random_polynomial(rng, ring, 3, 3),
                                random_polynomial(rng, ring, 3, 3),
                                random_polynomial(rng, ring, 3, 3)});
            Polynomial f = random_polynomial(rng, ring, 3, 3);
            Polynomial g = random_polynomial(rng, ring, 3, 3);
            Check::that(d.apply(f * g) == d.apply(f) * g + f * d.apply(g),
                        "D(fg) != D(f)g + fD(g)");
        }
    }));

    results.push_back(detail::run_one("kernel is factorially closed on products", [&] {
        Rng rng(seed + 7);
        Polynomial p = parse_polynomial("Y^2+X*Z", ring);
        Derivation d = KernelPair{x, p, Rational(1)}.derivation();
        auto ab = make_ring({"A", "B"});
        for (int it = 0; it < 10; ++it) {
            Polynomial fa = random_nonzero_polynomial(rng, ab, 3, 3);
            Polynomial ga = random_nonzero_polynomial(rng, ab, 3, 3);
            std::map<std::string, Polynomial> bind{{"A", x}, {"B", p}};
            Polynomial f = fa.substitute(bind);
            Polynomial g = ga.substitute(bind);
            Check::that(kernel_membership(d, f * g), "product escaped the kernel");
            Check::that(kernel_membership(d, f) && kernel_membership(d, g),
                        "kernel factors escaped the kernel");
        }
    }));

    results.push_back(detail::run_one("deg_D is additive on products", [&] {
        Rng rng(seed + 8);
        Polynomial p = parse_polynomial("(Y^2+X*Z)^2+X^3*Y", ring);
        Derivation d = KernelPair{x, p, Rational(1)}.derivation();
        for (int it = 0; it < 8; ++it) {
            Polynomial f = random_nonzero_polynomial(rng, ring, 2, 2);
            Polynomial g = random_nonzero_polynomial(rng, ring, 2, 2);
            long long df = deg_d(d, f, 64).value.value();
            long long dg = deg_d(d, g, 64).value.value();
            Check::that(deg_d(d, f * g, 128).value.value() == df + dg,
                        "deg_D(fg) != deg_D(f) + deg_D(g)");
        }
    }));

    results.push_back(detail::run_one("Jacobian derivation annihilates its pair", [&] {
        Rng rng(seed + 9);
        for (int it = 0; it < 10; ++it) {
            Polynomial p = random_nonzero_polynomial(rng, ring, 4, 4);
            Derivation d = jacobian_derivation(x, p);
            Check::that(d.apply(x).is_zero(), "Jacobian does not kill x");
            Check::that(d.apply(p).is_zero(), "Jacobian does not kill P");
        }
    }));

    results.push_back(detail::run_one("homogeneous derivations shift degree by d", [&] {
        Rng rng(seed + 10);
        Polynomial p = parse_polynomial("(Y^2+X*Z)^2+X^3*Y", ring);
        Derivation d = KernelPair{x, p, Rational(1)}.derivation();
        long long dd = homogeneity_degree(d, WeightVector{1, 1, 1}).value();
        for (int it = 0; it < 10; ++it) {
            int deg = (int)rng.uniform(1, 4);
            Polynomial f(ring);
            for (int a = 0; a <= deg; ++a)
                for (int b = 0; a + b <= deg; ++b)
                    if (rng.flip())
                        f += Polynomial::monomial(
                            ring,
                            ExponentVec{(std::int32_t)a, (std::int32_t)b,
                                        (std::int32_t)(deg - a - b)},
                            rng.rational());
            if (f.is_zero()) continue;
            Polynomial df = d.apply(f);
            if (df.is_zero()) continue;
            Check::that(df.homogeneity_degree(WeightVector{1, 1, 1}) ==
                            std::optional<long long>(deg + dd),
                        "deg(D(f)) != deg(f) + deg(D)");
        }
    }));

    results.push_back(detail::run_one("convex hull matches brute force", [&] {
        Rng rng(seed + 11);
        for (int it = 0; it < 40; ++it) {
            std::vector<LatticePoint> pts{{0, 0}};
            int extra = (int)rng.uniform(1, 11);
            for (int k = 0; k < extra; ++k)
                pts.push_back({rng.uniform(0, 6), rng.uniform(0, 6)});
            std::sort(pts.begin(), pts.end());
            pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
            auto fast = convex_hull(pts);
            auto brute = brute_force_hull(pts);
            Check::that(fast == brute, "hull mismatch");
        }
    }));

    results.push_back(detail::run_one("newton support ignores coefficient factors", [&] {
        Rng rng(seed + 12);
        for (int it = 0; it < 10; ++it) {
            Polynomial f = random_nonzero_polynomial(rng, ring, 4, 4);
            Polynomial c(ring);
            for (int k = 0; k <= 2; ++k)
                if (rng.flip())
                    c += Polynomial::monomial(ring, ExponentVec{(std::int32_t)k, 0, 0},
                                              rng.rational());
            if (c.is_zero()) c = Polynomial::constant(ring, Rational(2));
            auto a = newton_polygon(f, "Y", "Z");
            auto b = newton_polygon(c * f, "Y", "Z");
            Check::that(a.points == b.points && a.hull == b.hull,
                        "support changed under a coefficient factor");
        }
    }));

    results.push_back(detail::run_one("prime degree forces triangular verdicts", [&] {
        Rng rng(seed + 13);
        for (int d : {1, 3}) {
            for (int it = 0; it < 4; ++it) {
                Polynomial p = triangular_template(rng, ring, d);
                LinearChange s = random_scramble_fixing_x(rng, ring);
                Polynomial ps = s.apply(p);
                Derivation ds = s.apply(KernelPair{x, p, Rational(1)}.derivation());
                auto rep = analyze_normal_form(ds, x, ps);
                Check::that(rep.verdict.kind == VerdictKind::Triangular,
                            "expected a triangular verdict");
                Check::that(rep.verify.degd_y == 1 && rep.verify.degd_z == d + 2,
                            "wrong deg_D profile");
            }
        }
    }));

    results.push_back(detail::run_one("verdict kind is scramble invariant", [&] {
        Rng rng(seed + 14);
        std::vector<Polynomial> instances{
            parse_polynomial("(Y^2+X*Z)^2+X^3*Y", ring),
            parse_polynomial("(Y^3+X^2*Z)^2+X^5*Y", ring),
            triangular_template(rng, ring, 2)};
        for (const auto& p : instances) {
            auto base = analyze_normal_form(KernelPair{x, p, Rational(1)}.derivation(), x, p);
            for (int it = 0; it < 3; ++it) {
                LinearChange s = random_scramble_fixing_x(rng, ring);
                auto rep = analyze_normal_form(
                    s.apply(KernelPair{x, p, Rational(1)}.derivation()), x, s.apply(p));
                Check::that(rep.verdict.kind == base.verdict.kind, "verdict kind changed");
                Check::that(rep.verify.degd_y == base.verify.degd_y &&
                                rep.verify.degd_z == base.verify.degd_z,
                            "deg_D profile changed");
            }
        }
    }));

    results.push_back(detail::run_one("normal form round trip", [&] {
        Rng rng(seed + 15);
        for (int it = 0; it < 6; ++it) {
            Polynomial p = it % 2 == 0 ? ntr_template(rng, ring, 2, 2)
                                       : triangular_template(rng, ring, (int)rng.uniform(0, 2));
            long long deg = p.total_degree().value();
            // A pure power of X is a legal kernel-generator perturbation.
            if (rng.flip())
                p += Polynomial::monomial(ring, ExponentVec{(std::int32_t)deg, 0, 0},
                                          rng.rational(2, 1));
            LinearChange s = random_scramble_fixing_x(rng, ring);
            Polynomial ps = s.apply(p);
            Derivation ds = s.apply(KernelPair{x, p, Rational(1)}.derivation());
            auto rep = analyze_normal_form(ds, x, ps);
            Polynomial rebuilt = rep.total_change.inverted().apply(
                rep.sa.unit *
                (rep.p_final + Polynomial::monomial(ring,
                                                    ExponentVec{(std::int32_t)deg, 0, 0},
                                                    rep.sa.pure_x_coeff)));
            Check::that(rebuilt == ps, "could not rebuild the input kernel generator");
        }
    }));

    results.push_back(detail::run_one("triangular exponent identity", [&] {
        for (long long d = 0; d <= 10; ++d)
            for (long long n = 0; n <= 1000; ++n) {
                long long t = n / (d + 2), r = n % (d + 2);
                Check::that(trf_exponent(n, d) == n * d + t + r,
                            "t(d+1)^2 + r(d+1) != nd + t + r");
            }
    }));

    results.push_back(detail::run_one("exponents are monotone in n", [&] {
        for (long long d = 0; d <= 10; ++d)
            for (long long n = 1; n <= 1000; ++n)
                Check::that(trf_exponent(n, d) >= trf_exponent(n - 1, d),
                            "triangular exponent decreased");
        for (auto [p, q] : std::vector<std::pair<long long, long long>>{
                 {2, 2}, {2, 3}, {3, 2}, {3, 3}, {2, 5}})
            for (long long n = 1; n <= 1000; ++n)
                Check::that(ntrf_exponent(n, p, q) >= ntrf_exponent(n - 1, p, q),
                            "non-triangular exponent decreased");
    }));

    results.push_back(detail::run_one("D-basis tiles the naturals", [&] {
        for (auto spec : {DBasisSpec::triangular(0), DBasisSpec::triangular(3),
                          DBasisSpec::non_triangular(2, 2), DBasisSpec::non_triangular(2, 3),
                          DBasisSpec::non_triangular(3, 3)}) {
            auto basis = enumerate_d_basis(spec, 200);
            for (long long n = 0; n <= 200; ++n)
                Check::that(basis[n].degd == n, "deg_D values do not tile the naturals");
        }
    }));

    results.push_back(detail::run_one("formula matches oracle on samples", [&] {
        Rng rng(seed + 16);
        std::vector<Polynomial> instances{parse_polynomial("Y^2+X*Z", ring),
                                          ntr_template(rng, ring, 2, 2),
                                          triangular_template(rng, ring, 1)};
        for (const auto& p : instances) {
            auto rep = analyze_normal_form(KernelPair{x, p, Rational(1)}.derivation(), x, p);
            for (long long n = 0; n <= 8; ++n) image_ideal(rep.d_final, rep.verdict, n);
        }
    }));

    results.push_back(detail::run_one("print/parse round trip", [&] {
        Rng rng(seed + 17);
        for (int it = 0; it < 25; ++it) {
            Polynomial f = random_polynomial(rng, ring, 5, 5);
            Check::that(parse_polynomial(f.str(), ring) == f, "parse(print(f)) != f");
        }
    }));

    return results;
}

}  // namespace lnd::selfcheck
