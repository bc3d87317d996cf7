// Rewriting a polynomial in the slice coordinate T = h(X,Y) + X^(q-1)*Z.
// Solving for Z introduces division by X^(q-1); the substitution is carried
// out with Laurent exponents in X and must end with none of them negative.
#pragma once

#include "lnd/errors.hpp"
#include "lnd/polynomial.hpp"

#include <map>
#include <string>
#include <vector>

namespace lnd {

// The unique g in (X, Y, T) with g(X, Y, t_def) = f, where t_def must have
// the exact shape h(X,Y) + X^(q-1)*Z in f's ring (X, Y, Z).
inline Polynomial rewrite_in_slice_coordinate(const Polynomial& f, const Polynomial& t_def,
                                              int q, const std::string& out_var = "T") {
    if (f.nvars() != 3)
        throw Error(ErrorCode::PreconditionViolation,
                    "rewrite_in_slice_coordinate needs a three-variable ring");
    f.require_same_ring(t_def);
    if (q < 1) throw Error(ErrorCode::PreconditionViolation, "q must be positive");

    const std::string& xv = f.vars()[0];
    const std::string& yv = f.vars()[1];
    const std::string& zv = f.vars()[2];

    // t_def = h + X^(q-1) * Z, monic in Z.
    auto zdeg = t_def.degree_in(zv);
    if (!zdeg || *zdeg != 1)
        throw Error(ErrorCode::PreconditionViolation, "t_def must be linear in " + zv);
    Polynomial zcoef = t_def.coefficient_of(zv, 1);
    ExponentVec xq(3, 0);
    xq[0] = q - 1;
    if (zcoef != Polynomial::monomial(f.ring(), xq, Rational(1)))
        throw Error(ErrorCode::PreconditionViolation,
                    "t_def must equal h(" + xv + "," + yv + ") + " + xv + "^" +
                        std::to_string(q - 1) + "*" + zv);
    Polynomial h = t_def.coefficient_of(zv, 0);
    if (h.degree_in(zv).value_or(0) != 0)
        throw Error(ErrorCode::PreconditionViolation, "t_def has extra " + zv + " terms");

    VarListPtr out_ring = make_ring({xv.c_str(), yv.c_str(), out_var.c_str()});
    Polynomial h_out = h.projected_onto(make_ring({xv.c_str(), yv.c_str()}))
                           .embedded_into(out_ring);
    Polynomial t_minus_h = Polynomial::variable(out_ring, out_var) - h_out;

    std::vector<Polynomial> pow_tmh{Polynomial::constant(out_ring, Rational(1))};
    auto tmh_pow = [&](int e) -> const Polynomial& {
        while ((int)pow_tmh.size() <= e) pow_tmh.push_back(pow_tmh.back() * t_minus_h);
        return pow_tmh[e];
    };

    // Accumulate with X-exponents in Z (cancellation may rescue them).
    std::map<ExponentVec, Rational> laurent;
    for (const auto& [e, c] : f.terms()) {
        int a = e[0], b = e[1], ze = e[2];
        for (const auto& [te, tc] : tmh_pow(ze).terms()) {
            ExponentVec key{(std::int32_t)(a - ze * (q - 1) + te[0]),
                            (std::int32_t)(b + te[1]), te[2]};
            Rational v = c * tc;
            auto it = laurent.find(key);
            if (it == laurent.end()) {
                laurent.emplace(std::move(key), v);
            } else {
                it->second += v;
                if (it->second.is_zero()) laurent.erase(it);
            }
        }
    }

    Polynomial out(out_ring);
    for (const auto& [e, c] : laurent) {
        if (e[0] < 0)
            throw Error(ErrorCode::NonPolynomialRewrite,
                        "negative power of " + xv + " survives the rewrite");
        out.add_term(e, c);
    }
    return out;
}

}  // namespace lnd
