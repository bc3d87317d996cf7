// Invertible linear changes of coordinates. The matrix rows express the new
// variables as linear forms in the old ones; both rings reuse the same
// variable names.
#pragma once

#include "lnd/derivation.hpp"
#include "lnd/errors.hpp"
#include "lnd/linalg.hpp"
#include "lnd/polynomial.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lnd {

class LinearChange {
public:
    LinearChange(VarListPtr ring, QMat matrix)
        : ring_(std::move(ring)), a_(std::move(matrix)) {
        auto inv = inverse(a_);
        if (!inv)
            throw Error(ErrorCode::PreconditionViolation,
                        "coordinate change matrix is singular");
        ainv_ = std::move(*inv);
    }

    static LinearChange identity(VarListPtr ring) {
        std::size_t n = ring->size();
        return LinearChange(std::move(ring), q_identity(n));
    }

    const QMat& matrix() const { return a_; }
    const QMat& inverse_matrix() const { return ainv_; }
    const VarListPtr& ring() const { return ring_; }

    // The new variable i as a linear form in the old variables.
    Polynomial new_variable(std::size_t i) const { return row_poly(a_, i); }
    // The old variable k as a linear form in the new variables.
    Polynomial old_variable(std::size_t k) const { return row_poly(ainv_, k); }

    // Rewrite a polynomial given in old coordinates as one in new coordinates.
    Polynomial apply(const Polynomial& f) const {
        std::map<std::string, Polynomial> bind;
        for (std::size_t k = 0; k < ring_->size(); ++k)
            bind[(*ring_)[k]] = old_variable(k);
        return f.substitute(bind);
    }

    // Conjugate a derivation into new coordinates:
    // D'(new_i) = rewrite(D(sum_j a[i][j] old_j)).
    Derivation apply(const Derivation& d) const {
        std::vector<Polynomial> images;
        for (std::size_t i = 0; i < ring_->size(); ++i) {
            Polynomial im(ring_);
            for (std::size_t j = 0; j < ring_->size(); ++j)
                im += a_[i][j] * d.image(j);
            images.push_back(apply(im));
        }
        return Derivation(ring_, std::move(images));
    }

    LinearChange inverted() const { return LinearChange(ring_, ainv_); }

    // The change applying *this first, then `next`.
    LinearChange then(const LinearChange& next) const {
        return LinearChange(ring_, q_mul(next.a_, a_));
    }

private:
    Polynomial row_poly(const QMat& m, std::size_t i) const {
        Polynomial p(ring_);
        for (std::size_t j = 0; j < ring_->size(); ++j)
            p += m[i][j] * Polynomial::variable(ring_, (*ring_)[j]);
        return p;
    }

    VarListPtr ring_;
    QMat a_;
    QMat ainv_;
};

}  // namespace lnd
