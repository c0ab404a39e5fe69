#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ratsym/errors.hpp"

namespace ratsym {

using cx = std::complex<double>;

inline bool finite(cx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Neumaier-compensated accumulator, applied per component.
/// Summation order is whatever the caller feeds; results are deterministic
/// for a fixed feed order.
class CompensatedSum {
public:
    void add(cx z) {
        add_part(sr_, cr_, z.real());
        add_part(si_, ci_, z.imag());
    }
    cx value() const { return {sr_ + cr_, si_ + ci_}; }

private:
    static void add_part(double& s, double& c, double v) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double sr_ = 0.0, cr_ = 0.0, si_ = 0.0, ci_ = 0.0;
};

/// Dense row-major complex matrix. Small sizes only; no views, no BLAS.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols, cx fill = cx{0.0, 0.0})
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    cx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    cx operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    CMatrix transpose() const {
        CMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (cx v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Maximum column sum of absolute values (operator 1-norm).
    double norm1() const {
        double m = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cx> a_;
};

inline CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            cx aik = a(i, k);
            if (aik == cx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

/// LU factorization with partial pivoting, kept for determinants, solves and
/// condition estimates of the small case matrices G.
struct LUFactors {
    CMatrix lu;            // packed L (unit diagonal, below) and U (on/above)
    std::vector<std::size_t> perm;
    int perm_sign = 1;
    bool singular = false;
};

inline LUFactors lu_factor(CMatrix a) {
    const std::size_t n = a.rows();
    LUFactors f;
    f.perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) { best = v; p = i; }
        }
        if (best == 0.0) { f.singular = true; continue; }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(f.perm[k], f.perm[p]);
            f.perm_sign = -f.perm_sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            cx m = a(i, k) / a(k, k);
            a(i, k) = m;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

inline cx lu_determinant(const LUFactors& f) {
    if (f.singular) return cx{0.0, 0.0};
    cx d = static_cast<double>(f.perm_sign);
    for (std::size_t i = 0; i < f.lu.rows(); ++i) d *= f.lu(i, i);
    return d;
}

inline cx determinant(const CMatrix& a) {
    if (a.rows() != a.cols()) throw precondition_error("determinant: matrix not square");
    if (a.rows() == 0) return cx{1.0, 0.0};
    return lu_determinant(lu_factor(a));
}

inline std::vector<cx> lu_solve(const LUFactors& f, const std::vector<cx>& b) {
    const std::size_t n = f.lu.rows();
    if (f.singular) throw precondition_error("lu_solve: singular matrix");
    std::vector<cx> pb(n);
    for (std::size_t i = 0; i < n; ++i) pb[i] = b[f.perm[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) pb[i] -= f.lu(i, j) * pb[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) pb[i] -= f.lu(i, j) * pb[j];
        pb[i] /= f.lu(i, i);
    }
    return pb;
}

/// 1-norm condition number via explicit inverse; fine at the sizes used here.
/// Returns +inf for singular input.
inline double condition_number_1(const CMatrix& a) {
    if (a.rows() == 0) return 1.0;
    LUFactors f = lu_factor(a);
    if (f.singular) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.rows();
    CMatrix inv(n, n);
    std::vector<cx> e(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), cx{});
        e[j] = 1.0;
        std::vector<cx> col = lu_solve(f, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return a.norm1() * inv.norm1();
}

/// Unpivoted Doolittle factorization B = L * diag(d) * U with unit-diagonal
/// triangular factors. This is the factorization whose pivots are the
/// ratios of consecutive leading principal minors; pivoting would destroy
/// that correspondence, so a tiny pivot is reported as an error instead.
struct LDUFactors {
    CMatrix L;           // unit lower
    std::vector<cx> d;   // pivots d[k] = det(B_{k+1}) / det(B_k)
    CMatrix U;           // unit upper
};

inline LDUFactors ldu_unpivoted(const CMatrix& b, std::size_t t,
                                double tiny_rel = 1e-13) {
    if (t == 0 || t > b.rows() || t > b.cols())
        throw precondition_error("ldu_unpivoted: order out of range");
    CMatrix m(t, t);
    std::vector<double> row_scale(t, 0.0);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j) {
            m(i, j) = b(i, j);
            row_scale[i] = std::max(row_scale[i], std::abs(b(i, j)));
        }
    LDUFactors f;
    f.L = CMatrix::identity(t);
    f.U = CMatrix::identity(t);
    f.d.resize(t);
    for (std::size_t k = 0; k < t; ++k) {
        cx piv = m(k, k);
        if (!finite(piv) || std::abs(piv) < tiny_rel * row_scale[k] || piv == cx{})
            throw precondition_error("ldu_unpivoted: singular or numerically tiny leading minor at order " +
                                     std::to_string(k + 1));
        f.d[k] = piv;
        for (std::size_t j = k + 1; j < t; ++j) f.U(k, j) = m(k, j) / piv;
        for (std::size_t i = k + 1; i < t; ++i) {
            f.L(i, k) = m(i, k) / piv;
            for (std::size_t j = k + 1; j < t; ++j)
                m(i, j) -= f.L(i, k) * piv * f.U(k, j);
        }
    }
    return f;
}

/// Inverse of a unit lower triangular matrix (forward substitution).
inline CMatrix invert_unit_lower(const CMatrix& l) {
    const std::size_t n = l.rows();
    CMatrix inv = CMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j + 1; i < n; ++i) {
            cx s{};
            for (std::size_t k = j; k < i; ++k) s += l(i, k) * inv(k, j);
            inv(i, j) = -s;
        }
    return inv;
}

/// Inverse of a unit upper triangular matrix (back substitution).
inline CMatrix invert_unit_upper(const CMatrix& u) {
    const std::size_t n = u.rows();
    CMatrix inv = CMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j; i-- > 0;) {
            cx s{};
            for (std::size_t k = i + 1; k <= j; ++k) s += u(i, k) * inv(k, j);
            inv(i, j) = -s;
        }
    return inv;
}

/// Vandermonde product prod_{i>j} (z_i - z_j); 1 for empty or singleton input.
inline cx vandermonde(const std::vector<cx>& z) {
    cx p{1.0, 0.0};
    for (std::size_t i = 1; i < z.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) p *= z[i] - z[j];
    return p;
}

/// Integer power with negative exponents allowed (z != 0 for e < 0).
inline cx ipow(cx z, long e) {
    if (e < 0) {
        if (z == cx{}) throw precondition_error("ipow: zero base with negative exponent");
        return 1.0 / ipow(z, -e);
    }
    cx r{1.0, 0.0};
    while (e > 0) {
        if (e & 1) r *= z;
        z *= z;
        e >>= 1;
    }
    return r;
}

} // namespace ratsym
