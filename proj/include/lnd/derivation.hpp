// Derivations on polynomial rings, given by their images on the variables
// and extended by the Leibniz rule. Includes Jacobian derivations, deg_D,
// the nilpotency probe, local slices, homogeneity and irreducibility.
#pragma once

#include "lnd/errors.hpp"
#include "lnd/gcd.hpp"
#include "lnd/linalg.hpp"
#include "lnd/polynomial.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace lnd {

class Derivation {
public:
    Derivation(VarListPtr vars, std::vector<Polynomial> images)
        : vars_(std::move(vars)), images_(std::move(images)) {
        if (images_.size() != vars_->size())
            throw VariableMismatch("derivation: one image per variable required");
        for (const auto& im : images_)
            if (*im.ring() != *vars_)
                throw VariableMismatch("derivation: image in a different ring");
    }

    static Derivation zero(VarListPtr vars) {
        std::vector<Polynomial> images(vars->size(), Polynomial::zero(vars));
        return Derivation(std::move(vars), std::move(images));
    }

    const VarList& vars() const { return *vars_; }
    const VarListPtr& ring() const { return vars_; }
    const std::vector<Polynomial>& images() const { return images_; }
    const Polynomial& image(std::size_t i) const { return images_[i]; }
    const Polynomial& image(const std::string& name) const {
        return images_[images_[0].var_index(name)];
    }

    bool is_zero() const {
        for (const auto& im : images_)
            if (!im.is_zero()) return false;
        return true;
    }

    Polynomial apply(const Polynomial& f) const {
        if (*f.ring() != *vars_)
            throw VariableMismatch("derivation applied to a foreign-ring polynomial");
        Polynomial r(f.ring());
        for (std::size_t i = 0; i < vars_->size(); ++i) {
            if (images_[i].is_zero()) continue;
            r += f.partial((*vars_)[i]) * images_[i];
        }
        return r;
    }

    friend bool operator==(const Derivation& a, const Derivation& b) {
        return *a.vars_ == *b.vars_ && a.images_ == b.images_;
    }

private:
    VarListPtr vars_;
    std::vector<Polynomial> images_;
};

// g -> det of the Jacobian of (f1, f2, g) on a three-variable ring.
inline Derivation jacobian_derivation(const Polynomial& f1, const Polynomial& f2) {
    f1.require_same_ring(f2);
    if (f1.nvars() != 3)
        throw Error(ErrorCode::PreconditionViolation,
                    "jacobian derivation needs three variables");
    const VarList& v = f1.vars();
    Polynomial a = f1.partial(v[0]), b = f1.partial(v[1]), c = f1.partial(v[2]);
    Polynomial d = f2.partial(v[0]), e = f2.partial(v[1]), f = f2.partial(v[2]);
    // Cofactors along the third row of [grad f1; grad f2; grad g].
    std::vector<Polynomial> images{b * f - c * e, -(a * f - c * d), a * e - b * d};
    return Derivation(f1.ring(), std::move(images));
}

struct DegDReport {
    std::optional<long long> value;  // nullopt encodes minus infinity (f = 0)
    Polynomial witness;              // last nonzero iterate D^value(f)
};

// Smallest n with D^(n+1) f = 0, plus the witness D^n f.
inline DegDReport deg_d(const Derivation& d, const Polynomial& f, int cap) {
    if (cap < 1) throw Error(ErrorCode::PreconditionViolation, "deg_d cap must be >= 1");
    if (f.is_zero()) return {std::nullopt, f};
    Polynomial cur = f;
    for (long long n = 0; n <= cap; ++n) {
        Polynomial next = d.apply(cur);
        if (next.is_zero()) return {n, cur};
        cur = std::move(next);
    }
    throw Error(ErrorCode::CapExceeded,
                "D^" + std::to_string(cap + 1) + "(f) is still nonzero");
}

struct NilpotencyProbe {
    bool certified;              // every variable terminated within the cap
    std::string offending_var;   // first variable that exceeded the cap
    std::vector<long long> variable_degrees;
};

inline NilpotencyProbe nilpotency_probe(const Derivation& d, int cap) {
    NilpotencyProbe out{true, "", {}};
    for (const auto& name : d.vars()) {
        try {
            auto rep = deg_d(d, Polynomial::variable(d.ring(), name), cap);
            out.variable_degrees.push_back(rep.value.value_or(0));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::CapExceeded) throw;
            out.certified = false;
            out.offending_var = name;
            out.variable_degrees.push_back(-1);
            return out;
        }
    }
    return out;
}

inline bool kernel_membership(const Derivation& d, const Polynomial& f) {
    return d.apply(f).is_zero();
}

struct LocalSliceReport {
    bool is_slice;
    Polynomial witness;  // Dr
};

inline LocalSliceReport is_local_slice(const Derivation& d, const Polynomial& r) {
    Polynomial dr = d.apply(r);
    if (dr.is_zero()) return {false, dr};
    return {d.apply(dr).is_zero(), dr};
}

// Degree d with every nonzero image w-homogeneous of degree w(v) + d;
// nullopt if no such d. The zero derivation reports degree 0.
inline std::optional<long long> homogeneity_degree(const Derivation& drv,
                                                   const WeightVector& w) {
    std::optional<long long> deg;
    for (std::size_t i = 0; i < drv.vars().size(); ++i) {
        const Polynomial& im = drv.image(i);
        if (im.is_zero()) continue;
        auto h = im.homogeneity_degree(w);
        if (!h) return std::nullopt;
        long long d = *h - w[i];
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    return deg ? deg : std::optional<long long>(0);
}

// Over a UFD, irreducibility of D reduces to gcd of the images being a unit.
inline bool is_irreducible(const Derivation& d) {
    if (d.is_zero())
        throw Error(ErrorCode::ZeroDerivation, "irreducibility of the zero derivation");
    Polynomial g = Polynomial::zero(d.ring());
    for (const auto& im : d.images()) {
        if (im.is_zero()) continue;
        g = g.is_zero() ? normalized_primitive(im) : gcd(g, im);
    }
    return g.is_constant();
}

// Basis of the linear forms L with D(L) = 0, via an exact nullspace of the
// coefficient-wise system sum_i a_i D(v_i) = 0.
inline std::vector<Polynomial> linear_kernel_elements(const Derivation& d) {
    std::size_t n = d.vars().size();
    std::set<ExponentVec> monomials;
    for (const auto& im : d.images())
        for (const auto& [e, c] : im.terms()) monomials.insert(e);

    QMat m;
    for (const auto& e : monomials) {
        QVec row(n);
        for (std::size_t i = 0; i < n; ++i) row[i] = d.image(i).coeff(e);
        m.push_back(std::move(row));
    }
    if (m.empty()) m.push_back(QVec(n, Rational(0)));  // zero derivation

    std::vector<Polynomial> basis;
    for (const auto& v : nullspace(std::move(m))) {
        Polynomial form(d.ring());
        for (std::size_t i = 0; i < n; ++i)
            form += v[i] * Polynomial::variable(d.ring(), d.vars()[i]);
        basis.push_back(normalized_primitive(form));
    }
    return basis;
}

// The induced derivation D mod x on the remaining two variables.
inline Derivation reduce_mod_variable(const Derivation& d, const std::string& x) {
    std::size_t xi = d.image(0).var_index(x);
    if (!d.image(xi).is_zero())
        throw Error(ErrorCode::PreconditionViolation,
                    "'" + x + "' is not a kernel variable of D");
    VarList rest;
    for (const auto& v : d.vars())
        if (v != x) rest.push_back(v);
    VarListPtr sub = make_ring(rest);

    std::map<std::string, Polynomial> bind;
    bind[x] = Polynomial::zero(d.ring());
    for (const auto& v : rest) bind[v] = Polynomial::variable(d.ring(), v);

    std::vector<Polynomial> images;
    for (std::size_t i = 0; i < d.vars().size(); ++i) {
        if (i == xi) continue;
        images.push_back(d.image(i).substitute(bind).projected_onto(sub));
    }
    return Derivation(sub, std::move(images));
}

// A kernel pair (x, p) with D = scale * Jacobian(x, p).
struct KernelPair {
    Polynomial x;
    Polynomial p;
    Rational scale{1};

    Derivation derivation() const {
        Derivation delta = jacobian_derivation(x, p);
        std::vector<Polynomial> images;
        for (const auto& im : delta.images()) images.push_back(scale * im);
        return Derivation(delta.ring(), std::move(images));
    }
};

// The scalar c with lhs = c * rhs on all images, if one exists.
inline std::optional<Rational> proportionality_scalar(const Derivation& lhs,
                                                      const Derivation& rhs) {
    std::optional<Rational> c;
    for (std::size_t i = 0; i < lhs.vars().size(); ++i) {
        const Polynomial& a = lhs.image(i);
        const Polynomial& b = rhs.image(i);
        if (b.is_zero()) {
            if (!a.is_zero()) return std::nullopt;
            continue;
        }
        auto bt = b.terms().begin();
        Rational ratio = a.coeff(bt->first) / bt->second;
        if (c && *c != ratio) return std::nullopt;
        if (a != ratio * b) return std::nullopt;
        c = ratio;
    }
    if (!c) c = Rational(1);  // both zero
    return c;
}

}  // namespace lnd
