#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "ratsym/complex_linalg.hpp"
#include "ratsym/errors.hpp"
#include "ratsym/measure.hpp"

namespace ratsym {

/// Biorthogonal polynomial data obtained from the unpivoted triangular
/// factorization of the bimoment matrix, diag(h) * Kbar = K * B.
///
/// K is unit lower triangular; row n holds the monic numerator coefficients
/// of P_n, so P_n(x) = (1/sqrt(h_n)) sum_{m<=n} K[n][m] x^m. Kbar is unit
/// upper triangular and the columns of its inverse give S_n the same way.
/// The pair satisfies sum_atoms w P_j(x) S_k(y) = delta_{jk}.
///
/// Index conventions below degree zero follow the series bookkeeping of the
/// dressed generating functions: P_n(x) = S_n(x) = x^n, the transformed
/// values are plain powers mu^{-n-1}, and h_n = 1 for n < 0.
///
/// sqrt_h stores one fixed choice of square-root branch per index (principal
/// branch at construction). Flipping any sqrt_h[n] flips P_n and S_n together
/// and leaves every evaluator output invariant; with_flipped_branch exists so
/// tests can exercise exactly that.
class BiorthoSystem {
public:
    static BiorthoSystem factorize(const BimomentMatrix& b, std::size_t t,
                                   double tiny_rel = 1e-13) {
        if (t < 1 || t > b.size)
            throw precondition_error("factorize: truncation order out of range");
        LDUFactors f = ldu_unpivoted(b.entries, t, tiny_rel);
        BiorthoSystem sys;
        sys.t_ = t;
        sys.h_ = f.d;
        sys.sqrt_h_.resize(t);
        for (std::size_t n = 0; n < t; ++n) {
            sys.sqrt_h_[n] = std::sqrt(f.d[n]);
            // keep h_n bit-identical to the square of the recorded branch
            sys.h_[n] = sys.sqrt_h_[n] * sys.sqrt_h_[n];
        }
        sys.k_ = invert_unit_lower(f.L);
        sys.k_inv_ = std::move(f.L);
        sys.kbar_inv_ = invert_unit_upper(f.U);
        sys.kbar_ = std::move(f.U);
        sys.factorization_residual_ = sys.check_factorization_identity(b);
        return sys;
    }

    std::size_t truncation() const { return t_; }

    cx h(long n) const {
        if (n < 0) return cx{1.0, 0.0};
        require_order(n);
        return h_[static_cast<std::size_t>(n)];
    }
    cx sqrt_h(long n) const {
        if (n < 0) return cx{1.0, 0.0};
        require_order(n);
        return sqrt_h_[static_cast<std::size_t>(n)];
    }

    const CMatrix& K() const { return k_; }
    const CMatrix& Kbar() const { return kbar_; }
    const CMatrix& Kbar_inv() const { return kbar_inv_; }
    const CMatrix& K_inv() const { return k_inv_; }

    /// Residual of diag(h)*Kbar - K*B recorded at factorization time,
    /// relative to the scale of B.
    double build_residual() const { return factorization_residual_; }

    cx eval_P(long n, cx x) const {
        if (n < 0) {
            if (x == cx{}) throw precondition_error("eval_P: zero argument with negative index");
            return ipow(x, n);
        }
        require_order(n);
        const std::size_t un = static_cast<std::size_t>(n);
        cx acc{};
        for (std::size_t m = un + 1; m-- > 0;) acc = acc * x + k_(un, m);
        return acc / sqrt_h_[un];
    }

    cx eval_S(long n, cx y) const {
        if (n < 0) {
            if (y == cx{}) throw precondition_error("eval_S: zero argument with negative index");
            return ipow(y, n);
        }
        require_order(n);
        const std::size_t un = static_cast<std::size_t>(n);
        cx acc{};
        for (std::size_t m = un + 1; m-- > 0;) acc = acc * y + kbar_inv_(m, un);
        return acc / sqrt_h_[un];
    }

    /// Transform of P_n with the pole in y: sum_a w P_n(x_a) / (mu - y_a).
    /// For n < 0 this is the series convention value mu^(-n-1), not a sum.
    cx eval_Ptilde(const Measure& m, long n, cx mu, double eps_pole = 1e-8) const {
        if (n < 0) return ipow(mu, -n - 1);
        require_order(n);
        if (m.min_distance_to_y_support(mu) <= eps_pole)
            throw precondition_error("eval_Ptilde: evaluation point too close to y-support");
        CompensatedSum s;
        for (const Atom& a : m.atoms()) s.add(a.w * eval_P(n, a.x) / (mu - a.y));
        return s.value();
    }

    /// Transform of S_n with the pole in x: sum_a w S_n(y_a) / (eta - x_a).
    cx eval_Stilde(const Measure& m, long n, cx eta, double eps_pole = 1e-8) const {
        if (n < 0) return ipow(eta, -n - 1);
        require_order(n);
        if (m.min_distance_to_x_support(eta) <= eps_pole)
            throw precondition_error("eval_Stilde: evaluation point too close to x-support");
        CompensatedSum s;
        for (const Atom& a : m.atoms()) s.add(a.w * eval_S(n, a.y) / (eta - a.x));
        return s.value();
    }

    /// Max-entry residual of K^{-1} diag(h) - B Kbar^{-1} over the leading
    /// block, normalized by the scale of B. Diagnostic only.
    double check_factorization_identity(const BimomentMatrix& b) const {
        double scale = 0.0;
        for (std::size_t i = 0; i < t_; ++i)
            for (std::size_t j = 0; j < t_; ++j)
                scale = std::max(scale, std::abs(b.entries(i, j)));
        if (scale == 0.0) scale = 1.0;
        double worst = 0.0;
        for (std::size_t i = 0; i < t_; ++i)
            for (std::size_t j = 0; j < t_; ++j) {
                cx lhs = k_inv_(i, j) * h_[j];
                cx rhs{};
                for (std::size_t k = 0; k < t_; ++k) rhs += b.entries(i, k) * kbar_inv_(k, j);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
        return worst / scale;
    }

    BiorthoSystem with_flipped_branch(std::size_t n) const {
        BiorthoSystem sys = *this;
        sys.require_order(static_cast<long>(n));
        sys.sqrt_h_[n] = -sys.sqrt_h_[n];
        return sys;
    }

    /// The system of the measure with x and y exchanged: P and S trade
    /// places, the norms are unchanged.
    BiorthoSystem swapped() const {
        BiorthoSystem sys;
        sys.t_ = t_;
        sys.h_ = h_;
        sys.sqrt_h_ = sqrt_h_;
        sys.k_ = kbar_inv_.transpose();
        sys.k_inv_ = kbar_.transpose();
        sys.kbar_ = k_inv_.transpose();
        sys.kbar_inv_ = k_.transpose();
        sys.factorization_residual_ = factorization_residual_;
        return sys;
    }

private:
    void require_order(long n) const {
        if (n >= static_cast<long>(t_))
            throw precondition_error("biorthogonal order " + std::to_string(n) +
                                     " outside truncation " + std::to_string(t_));
    }

    std::size_t t_ = 0;
    std::vector<cx> h_, sqrt_h_;
    CMatrix k_, k_inv_, kbar_, kbar_inv_;
    double factorization_residual_ = 0.0;
};

} // namespace ratsym
