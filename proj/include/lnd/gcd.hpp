// Multivariate gcd over the rationals by recursive content/primitive-part
// reduction with univariate subresultant remainder sequences, plus exact
// division and the canonical primitive normalization used throughout.
#pragma once

#include "lnd/errors.hpp"
#include "lnd/polynomial.hpp"
#include "lnd/rational.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

namespace lnd {

// Quotient q with f = q*g, or nullopt when g does not divide f exactly.
inline std::optional<Polynomial> exact_divide(const Polynomial& f, const Polynomial& g) {
    f.require_same_ring(g);
    if (g.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "exact_divide by zero");
    Polynomial q(f.ring());
    Polynomial r = f;
    // Leading terms under the term map's lex order; it is a monomial order,
    // so the leader of r strictly decreases each step.
    const auto& gt = *g.terms().rbegin();
    while (!r.is_zero()) {
        const auto& rt = *r.terms().rbegin();
        ExponentVec e(rt.first.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = rt.first[i] - gt.first[i];
            if (e[i] < 0) return std::nullopt;
        }
        Polynomial t = Polynomial::monomial(f.ring(), e, rt.second / gt.second);
        q += t;
        r -= t * g;
    }
    return q;
}

// Scale f by a rational so its coefficients are coprime integers and the
// graded-lex leading coefficient is positive.
inline Polynomial normalized_primitive(const Polynomial& f) {
    if (f.is_zero()) return f;
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& [e, c] : f.terms()) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
    }
    Rational scale{mpq_class(den_lcm, num_gcd)};
    Polynomial g = scale * f;
    if (g.leading_term().second.sign() < 0) g = -g;
    return g;
}

namespace detail {

inline Polynomial leading_coeff_in(const Polynomial& f, const std::string& v) {
    return f.coefficient_of(v, f.degree_in(v).value());
}

// Pseudo-remainder of a by b with respect to v: lc_v(b)^(da-db+1) * a mod b.
inline Polynomial prem(const Polynomial& a, const Polynomial& b, const std::string& v) {
    int db = b.degree_in(v).value();
    Polynomial lc_b = leading_coeff_in(b, v);
    Polynomial r = a;
    int e = a.degree_in(v).value() - db + 1;
    while (!r.is_zero()) {
        int dr = r.degree_in(v).value();
        if (dr < db) break;
        Polynomial lc_r = r.coefficient_of(v, dr);
        ExponentVec shift(r.nvars(), 0);
        shift[r.var_index(v)] = dr - db;
        Polynomial m = Polynomial::monomial(r.ring(), shift, Rational(1));
        r = lc_b * r - lc_r * m * b;
        --e;
    }
    if (e > 0) r = lc_b.pow((unsigned)e) * r;
    return r;
}

inline Polynomial gcd_rec(const Polynomial& f, const Polynomial& g);

// gcd of the v-coefficients of f (a polynomial not involving v).
inline Polynomial content_in(const Polynomial& f, const std::string& v) {
    Polynomial c(f.ring());
    for (const auto& [k, coeff] : f.coefficients_in(v)) {
        c = c.is_zero() ? normalized_primitive(coeff) : gcd_rec(c, coeff);
        if (c.is_constant()) break;
    }
    return c;
}

inline Polynomial one(const VarListPtr& ring) {
    return Polynomial::constant(ring, Rational(1));
}

inline Polynomial gcd_rec(const Polynomial& f, const Polynomial& g) {
    if (f.is_zero()) return normalized_primitive(g);
    if (g.is_zero()) return normalized_primitive(f);
    if (f.is_constant() || g.is_constant()) return one(f.ring());

    // Main variable: last declared variable occurring in either operand.
    std::string v;
    for (std::size_t i = f.nvars(); i-- > 0;) {
        const std::string& name = f.vars()[i];
        if (f.degree_in(name).value() > 0 || g.degree_in(name).value() > 0) {
            v = name;
            break;
        }
    }

    Polynomial cf = content_in(f, v);
    Polynomial cg = content_in(g, v);
    Polynomial c = gcd_rec(cf, cg);
    Polynomial a = *exact_divide(f, cf);
    Polynomial b = *exact_divide(g, cg);

    if (a.degree_in(v).value() < b.degree_in(v).value()) std::swap(a, b);
    if (b.degree_in(v).value() == 0) return normalized_primitive(c);

    // Subresultant PRS on the primitive parts.
    Polynomial gg = one(f.ring());
    Polynomial h = one(f.ring());
    Polynomial pp_gcd = one(f.ring());
    while (true) {
        int delta = a.degree_in(v).value() - b.degree_in(v).value();
        Polynomial r = prem(a, b, v);
        if (r.is_zero()) {
            pp_gcd = *exact_divide(b, content_in(b, v));
            break;
        }
        if (r.degree_in(v).value() == 0) break;  // coprime primitive parts
        a = b;
        b = *exact_divide(r, gg * h.pow((unsigned)delta));
        gg = leading_coeff_in(a, v);
        if (delta == 1)
            h = gg;
        else if (delta > 1)
            h = *exact_divide(gg.pow((unsigned)delta), h.pow((unsigned)(delta - 1)));
    }
    return normalized_primitive(c * pp_gcd);
}

}  // namespace detail

inline Polynomial gcd(const Polynomial& f, const Polynomial& g) {
    f.require_same_ring(g);
    if (f.is_zero() && g.is_zero())
        throw Error(ErrorCode::ZeroPolynomial, "gcd(0, 0) is undefined");
    return detail::gcd_rec(f, g);
}

}  // namespace lnd
