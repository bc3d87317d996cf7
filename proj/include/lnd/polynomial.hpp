// Sparse multivariate polynomials over the rationals.
//
// A polynomial carries its own ordered variable list; term maps never store
// zero coefficients, so equality of term maps is equality of polynomials.
// Binary operations require identical variable lists.
#pragma once

#include "lnd/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lnd {

using VarList = std::vector<std::string>;
using VarListPtr = std::shared_ptr<const VarList>;
using ExponentVec = std::vector<std::int32_t>;
using WeightVector = std::vector<long long>;

inline VarListPtr make_ring(std::initializer_list<const char*> names) {
    return std::make_shared<const VarList>(names.begin(), names.end());
}
inline VarListPtr make_ring(const VarList& names) {
    return std::make_shared<const VarList>(names);
}

struct VariableMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Polynomial {
public:
    using TermMap = std::map<ExponentVec, Rational>;

    Polynomial() : vars_(make_ring({"X", "Y", "Z"})) {}
    explicit Polynomial(VarListPtr vars) : vars_(std::move(vars)) {}

    static Polynomial zero(VarListPtr vars) { return Polynomial(std::move(vars)); }

    static Polynomial constant(VarListPtr vars, const Rational& c) {
        Polynomial p(std::move(vars));
        if (!c.is_zero()) p.terms_[ExponentVec(p.nvars(), 0)] = c;
        return p;
    }

    static Polynomial variable(VarListPtr vars, const std::string& name) {
        Polynomial p(vars);
        ExponentVec e(p.nvars(), 0);
        e[p.var_index(name)] = 1;
        p.terms_[e] = Rational(1);
        return p;
    }

    static Polynomial monomial(VarListPtr vars, ExponentVec exps, const Rational& c) {
        Polynomial p(std::move(vars));
        if (exps.size() != p.nvars())
            throw VariableMismatch("monomial: exponent vector length mismatch");
        for (auto e : exps)
            if (e < 0) throw std::invalid_argument("monomial: negative exponent");
        if (!c.is_zero()) p.terms_[std::move(exps)] = c;
        return p;
    }

    const VarList& vars() const { return *vars_; }
    const VarListPtr& ring() const { return vars_; }
    std::size_t nvars() const { return vars_->size(); }
    const TermMap& terms() const { return terms_; }

    std::size_t var_index(const std::string& name) const {
        for (std::size_t i = 0; i < vars_->size(); ++i)
            if ((*vars_)[i] == name) return i;
        throw VariableMismatch("unknown variable '" + name + "'");
    }
    bool has_variable(const std::string& name) const {
        for (const auto& v : *vars_)
            if (v == name) return true;
        return false;
    }

    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        if (terms_.size() > 1) return false;
        const auto& e = terms_.begin()->first;
        return std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
    }

    // Constant term as a rational; the whole value if is_constant().
    Rational constant_value() const {
        auto it = terms_.find(ExponentVec(nvars(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational coeff(const ExponentVec& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.same_ring(b) && a.terms_ == b.terms_;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    Polynomial operator-() const {
        Polynomial r(vars_);
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    Polynomial& operator+=(const Polynomial& o) {
        require_same_ring(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        require_same_ring(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.require_same_ring(b);
        Polynomial r(a.vars_);
        ExponentVec e(a.nvars());
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    friend Polynomial operator*(const Rational& c, const Polynomial& p) {
        Polynomial r(p.vars_);
        if (c.is_zero()) return r;
        for (const auto& [e, a] : p.terms_) r.terms_[e] = c * a;
        return r;
    }
    friend Polynomial operator*(const Polynomial& p, const Rational& c) { return c * p; }

    Polynomial pow(unsigned e) const {
        Polynomial result = constant(vars_, Rational(1));
        Polynomial base = *this;
        while (e > 0) {
            if (e & 1u) result = result * base;
            base = (e >>= 1) ? base * base : base;
        }
        return result;
    }

    Polynomial partial(const std::string& name) const {
        std::size_t i = var_index(name);
        Polynomial r(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            ExponentVec d = e;
            d[i] -= 1;
            r.add_term(d, c * Rational(e[i]));
        }
        return r;
    }

    // Max of w·e over terms; nullopt (minus infinity) for the zero polynomial.
    std::optional<long long> weighted_degree(const WeightVector& w) const {
        if (w.size() != nvars())
            throw VariableMismatch("weighted_degree: weight vector length mismatch");
        std::optional<long long> best;
        for (const auto& [e, c] : terms_) {
            long long d = dot(w, e);
            if (!best || d > *best) best = d;
        }
        return best;
    }

    std::optional<long long> total_degree() const {
        return weighted_degree(WeightVector(nvars(), 1));
    }

    std::map<long long, Polynomial> homogeneous_components(const WeightVector& w) const {
        if (w.size() != nvars())
            throw VariableMismatch("homogeneous_components: weight vector length mismatch");
        std::map<long long, Polynomial> comps;
        for (const auto& [e, c] : terms_) {
            long long d = dot(w, e);
            auto it = comps.find(d);
            if (it == comps.end()) it = comps.emplace(d, Polynomial(vars_)).first;
            it->second.terms_[e] = c;
        }
        return comps;
    }

    // The component of highest w-degree; zero polynomial maps to zero.
    Polynomial top_component(const WeightVector& w) const {
        auto comps = homogeneous_components(w);
        if (comps.empty()) return Polynomial(vars_);
        return comps.rbegin()->second;
    }

    // Degree if w-homogeneous (zero counts as homogeneous of any degree -> nullopt).
    std::optional<long long> homogeneity_degree(const WeightVector& w) const {
        auto comps = homogeneous_components(w);
        if (comps.size() != 1) return std::nullopt;
        return comps.begin()->first;
    }
    bool is_homogeneous(const WeightVector& w) const {
        return homogeneous_components(w).size() <= 1;
    }

    std::optional<int> degree_in(const std::string& name) const {
        std::size_t i = var_index(name);
        std::optional<int> best;
        for (const auto& [e, c] : terms_)
            if (!best || e[i] > *best) best = e[i];
        return best;
    }

    // View as a univariate polynomial in `name`: exponent -> coefficient
    // (coefficients live in the same ring with that exponent zeroed).
    std::map<int, Polynomial> coefficients_in(const std::string& name) const {
        std::size_t i = var_index(name);
        std::map<int, Polynomial> out;
        for (const auto& [e, c] : terms_) {
            ExponentVec r = e;
            int k = r[i];
            r[i] = 0;
            auto it = out.find(k);
            if (it == out.end()) it = out.emplace(k, Polynomial(vars_)).first;
            it->second.terms_[std::move(r)] = c;
        }
        return out;
    }

    Polynomial coefficient_of(const std::string& name, int k) const {
        std::size_t i = var_index(name);
        Polynomial r(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[i] != k) continue;
            ExponentVec d = e;
            d[i] = 0;
            r.terms_[std::move(d)] = c;
        }
        return r;
    }

    // Evaluation homomorphism. Bindings must cover every variable occurring in
    // *this and all map into one common ring.
    Polynomial substitute(const std::map<std::string, Polynomial>& bindings) const {
        if (bindings.empty()) {
            if (!is_constant())
                throw VariableMismatch("substitute: bindings must cover all variables");
            return *this;
        }
        VarListPtr target = bindings.begin()->second.vars_;
        for (const auto& [name, value] : bindings)
            if (!value.same_ring(bindings.begin()->second))
                throw VariableMismatch("substitute: bindings disagree on target ring");

        std::vector<const Polynomial*> images(nvars(), nullptr);
        for (std::size_t i = 0; i < nvars(); ++i) {
            auto it = bindings.find((*vars_)[i]);
            if (it != bindings.end()) images[i] = &it->second;
        }
        // Lazily grown power tables, one per variable.
        std::vector<std::vector<Polynomial>> pows(nvars());
        auto power = [&](std::size_t i, int k) -> const Polynomial& {
            auto& table = pows[i];
            if (table.empty()) table.push_back(constant(target, Rational(1)));
            while ((int)table.size() <= k) table.push_back(table.back() * *images[i]);
            return table[k];
        };

        Polynomial acc(target);
        for (const auto& [e, c] : terms_) {
            Polynomial term = constant(target, c);
            for (std::size_t i = 0; i < nvars(); ++i) {
                if (e[i] == 0) continue;
                if (!images[i])
                    throw VariableMismatch("substitute: no binding for variable '" +
                                           (*vars_)[i] + "'");
                term = term * power(i, e[i]);
            }
            acc += term;
        }
        return acc;
    }

    // Re-express in `target` where every variable of *this appears in target
    // under the same name.
    Polynomial embedded_into(const VarListPtr& target) const {
        Polynomial r(target);
        std::vector<std::size_t> pos(nvars());
        for (std::size_t i = 0; i < nvars(); ++i) {
            auto it = std::find(target->begin(), target->end(), (*vars_)[i]);
            if (it == target->end())
                throw VariableMismatch("embedded_into: target ring lacks variable '" +
                                       (*vars_)[i] + "'");
            pos[i] = std::size_t(it - target->begin());
        }
        for (const auto& [e, c] : terms_) {
            ExponentVec d(target->size(), 0);
            for (std::size_t i = 0; i < nvars(); ++i) d[pos[i]] = e[i];
            r.terms_[std::move(d)] = c;
        }
        return r;
    }

    // Project onto a subring; every dropped variable must have exponent zero
    // throughout.
    Polynomial projected_onto(const VarListPtr& target) const {
        Polynomial r(target);
        std::vector<std::optional<std::size_t>> pos(nvars());
        for (std::size_t i = 0; i < nvars(); ++i) {
            auto it = std::find(target->begin(), target->end(), (*vars_)[i]);
            if (it != target->end()) pos[i] = std::size_t(it - target->begin());
        }
        for (const auto& [e, c] : terms_) {
            ExponentVec d(target->size(), 0);
            for (std::size_t i = 0; i < nvars(); ++i) {
                if (pos[i])
                    d[*pos[i]] = e[i];
                else if (e[i] != 0)
                    throw VariableMismatch("projected_onto: variable '" + (*vars_)[i] +
                                           "' occurs but is dropped");
            }
            r.terms_[std::move(d)] = c;
        }
        return r;
    }

    // Print order: total degree descending, ties in ascending lexicographic
    // order of exponent vectors (first declared variable compared first),
    // e.g. Y^4 + 2*X*Y^2*Z + X^2*Z^2 + X^3*Y.
    static bool prints_before(const ExponentVec& a, const ExponentVec& b) {
        long long da = 0, db = 0;
        for (auto x : a) da += x;
        for (auto x : b) db += x;
        if (da != db) return da > db;
        return a < b;
    }

    // Leading term under the print order (the graded-lex leader).
    std::pair<ExponentVec, Rational> leading_term() const {
        if (terms_.empty()) throw std::domain_error("leading_term of zero polynomial");
        auto best = terms_.begin();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
            if (prints_before(it->first, best->first)) best = it;
        return {best->first, best->second};
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::vector<const TermMap::value_type*> order;
        order.reserve(terms_.size());
        for (const auto& t : terms_) order.push_back(&t);
        std::sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
            return prints_before(a->first, b->first);
        });
        std::ostringstream out;
        bool first = true;
        for (const auto* t : order) {
            const Rational& c = t->second;
            Rational a = c.abs();
            if (first) {
                if (c.sign() < 0) out << "-";
                first = false;
            } else {
                out << (c.sign() < 0 ? " - " : " + ");
            }
            std::string mono = monomial_str(t->first);
            if (mono.empty())
                out << a.str();
            else if (a.is_one())
                out << mono;
            else
                out << a.str() << "*" << mono;
        }
        return out.str();
    }

    // Internal: accumulate a term, erasing on cancellation.
    void add_term(const ExponentVec& e, const Rational& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    bool same_ring(const Polynomial& o) const {
        return vars_ == o.vars_ || *vars_ == *o.vars_;
    }
    void require_same_ring(const Polynomial& o) const {
        if (!same_ring(o))
            throw VariableMismatch("polynomial operands live in different rings");
    }

private:
    static long long dot(const WeightVector& w, const ExponentVec& e) {
        long long d = 0;
        for (std::size_t i = 0; i < e.size(); ++i) d += w[i] * e[i];
        return d;
    }

    std::string monomial_str(const ExponentVec& e) const {
        std::string s;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (!s.empty()) s += "*";
            s += (*vars_)[i];
            if (e[i] > 1) s += "^" + std::to_string(e[i]);
        }
        return s;
    }

    VarListPtr vars_;
    TermMap terms_;
};

}  // namespace lnd
