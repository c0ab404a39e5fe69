#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ratsym/complex_linalg.hpp"
#include "ratsym/errors.hpp"

namespace ratsym {
namespace wick {

/// Generator kinds of the charged free-fermion Clifford algebra,
/// [f_i, fbar_j]_+ = delta_ij with all same-kind anticommutators zero.
enum class GenKind { f, fbar };

struct Term {
    long index;
    cx coeff;
};

/// Homogeneous linear combination of generators of one kind. Terms are kept
/// sorted by mode index with at most one term per index.
struct LinearCombo {
    GenKind kind = GenKind::f;
    std::vector<Term> terms;

    static LinearCombo single(GenKind k, long index, cx coeff = cx{1.0, 0.0}) {
        return {k, {Term{index, coeff}}};
    }

    void normalize() {
        std::sort(terms.begin(), terms.end(),
                  [](const Term& a, const Term& b) { return a.index < b.index; });
        std::vector<Term> merged;
        for (const Term& t : terms) {
            if (!merged.empty() && merged.back().index == t.index)
                merged.back().coeff += t.coeff;
            else
                merged.push_back(t);
        }
        terms = std::move(merged);
    }
};

/// Single generator f_i or fbar_i, convertible to a one-term combo.
struct Generator {
    GenKind kind = GenKind::f;
    long index = 0;

    LinearCombo combo(cx coeff = cx{1.0, 0.0}) const {
        return LinearCombo::single(kind, index, coeff);
    }
};

/// Vacuum charge, either one overall filling level or a level per component
/// of the even/odd two-component split f^(alpha)_n = f_{2n+alpha-1}.
struct VacuumCharge {
    bool two_component = false;
    int c1 = 0;
    int c2 = 0;

    static VacuumCharge single(int n) { return {false, n, 0}; }
    static VacuumCharge two(int n1, int n2) { return {true, n1, n2}; }

    friend bool operator==(const VacuumCharge& a, const VacuumCharge& b) {
        return a.two_component == b.two_component && a.c1 == b.c1 && a.c2 == b.c2;
    }

    /// Whether <.| f_i fbar_i |.> survives at this filling.
    bool f_fbar_filled(long i) const {
        if (!two_component) return i < c1;
        if ((i & 1L) == 0) return i < 2L * c1;  // component 1, i = 2m
        return i < 2L * c2 + 1;                 // component 2, i = 2m+1
    }
};

inline VacuumCharge bare_vacuum() { return VacuumCharge::single(0); }

/// Ordered product of combos between charged vacua. The expectation value is
/// zero by definition unless the generator counts balance the charge
/// difference; the pairing engine realizes that automatically.
struct FermionWord {
    VacuumCharge left = bare_vacuum();
    VacuumCharge right = bare_vacuum();
    std::vector<LinearCombo> factors;
};

/// Two-point function of two combos against vacua of equal charge:
/// <c| a b |c> via the charge-shifted mode cutoffs. Same-kind pairs vanish.
/// Even- and odd-index matches accumulate separately so the result is
/// bit-identical under the component-2 relabeling that charge_shift_check
/// exercises (within each parity class a shift preserves the index order).
inline cx pair_vev(const LinearCombo& a, const LinearCombo& b,
                   const VacuumCharge& charge, int window = 64) {
    if (std::abs(charge.c1) > window || (charge.two_component && std::abs(charge.c2) > window))
        throw precondition_error("pair_vev: window too small for charge");
    if (a.kind == b.kind) return cx{};
    cx even{}, odd{};
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() && j < b.terms.size()) {
        if (a.terms[i].index < b.terms[j].index) { ++i; continue; }
        if (a.terms[i].index > b.terms[j].index) { ++j; continue; }
        const bool filled = charge.f_fbar_filled(a.terms[i].index);
        const bool survives = (a.kind == GenKind::f) ? filled : !filled;
        if (survives) {
            if ((a.terms[i].index & 1L) == 0)
                even += a.terms[i].coeff * b.terms[j].coeff;
            else
                odd += a.terms[i].coeff * b.terms[j].coeff;
        }
        ++i;
        ++j;
    }
    return even + odd;
}

namespace detail {

/// One-component index of the two-component generator f^(comp)_n.
inline long mode_index(int comp, long n) { return 2 * n + comp - 1; }

inline void append_left_component(std::vector<LinearCombo>& out, int comp, int n) {
    if (n > 0)
        for (long m = 0; m < n; ++m)
            out.push_back(LinearCombo::single(GenKind::fbar, mode_index(comp, m)));
    else
        for (long m = -1; m >= n; --m)
            out.push_back(LinearCombo::single(GenKind::f, mode_index(comp, m)));
}

inline void append_right_component(std::vector<LinearCombo>& out, int comp, int n) {
    if (n > 0)
        for (long m = n - 1; m >= 0; --m)
            out.push_back(LinearCombo::single(GenKind::f, mode_index(comp, m)));
    else
        for (long m = n; m <= -1; ++m)
            out.push_back(LinearCombo::single(GenKind::fbar, mode_index(comp, m)));
}

/// Rewrites charged vacua as generator strings acting on the bare vacuum.
inline std::vector<LinearCombo> expand_word(const FermionWord& w) {
    std::vector<LinearCombo> out;
    if (w.left.two_component) {
        append_left_component(out, 1, w.left.c1);
        append_left_component(out, 2, w.left.c2);
    } else if (w.left.c1 > 0) {
        for (long m = 0; m < w.left.c1; ++m)
            out.push_back(LinearCombo::single(GenKind::fbar, m));
    } else {
        for (long m = -1; m >= w.left.c1; --m)
            out.push_back(LinearCombo::single(GenKind::f, m));
    }
    out.insert(out.end(), w.factors.begin(), w.factors.end());
    if (w.right.two_component) {
        append_right_component(out, 2, w.right.c2);
        append_right_component(out, 1, w.right.c1);
    } else if (w.right.c1 > 0) {
        for (long m = w.right.c1 - 1; m >= 0; --m)
            out.push_back(LinearCombo::single(GenKind::f, m));
    } else {
        for (long m = w.right.c1; m <= -1; ++m)
            out.push_back(LinearCombo::single(GenKind::fbar, m));
    }
    return out;
}

/// Signed sum over perfect pairings of precomputed two-point values:
/// contract the first live factor with each later one, recursing on the
/// rest. Sign rule: partner at (1-based) position t among the live factors
/// contributes (-1)^t.
inline cx pair_recursion(const std::vector<std::size_t>& live, const CMatrix& c) {
    if (live.empty()) return cx{1.0, 0.0};
    cx total{};
    std::vector<std::size_t> rest(live.size() - 2);
    for (std::size_t t = 1; t < live.size(); ++t) {
        const cx cc = c(live[0], live[t]);
        if (cc == cx{}) continue;
        std::size_t r = 0;
        for (std::size_t u = 1; u < live.size(); ++u)
            if (u != t) rest[r++] = live[u];
        total += ((t % 2 == 1) ? cc : -cc) * pair_recursion(rest, c);
    }
    return total;
}

inline cx vev_of_factors(const std::vector<LinearCombo>& factors,
                         const VacuumCharge& charge, int pair_budget, int window) {
    if (factors.size() % 2 != 0) return cx{};
    long nf = 0, nfbar = 0;
    for (const LinearCombo& c : factors) (c.kind == GenKind::f ? nf : nfbar)++;
    if (nf != nfbar) return cx{};
    if (static_cast<long>(factors.size() / 2) > pair_budget)
        throw budget_error("wick pairing: " + std::to_string(factors.size() / 2) +
                           " pairs exceed budget " + std::to_string(pair_budget));
    const std::size_t n = factors.size();
    CMatrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            c(i, j) = pair_vev(factors[i], factors[j], charge, window);
    std::vector<std::size_t> live(n);
    for (std::size_t i = 0; i < n; ++i) live[i] = i;
    return pair_recursion(live, c);
}

} // namespace detail

/// General-pairing VEV. Charged vacua are expanded eagerly into generator
/// strings and paired against the bare vacuum. Odd factor count after
/// expansion gives exactly zero.
inline cx vev_general(const FermionWord& word, int pair_budget = 8, int window = 64) {
    return detail::vev_of_factors(detail::expand_word(word), bare_vacuum(),
                                  pair_budget, window);
}

/// VEV of a word between equal-charge vacua, paired directly with the
/// charge-shifted two-point function instead of expanding the vacua. Equal to
/// vev_general where both apply; kept because its enumeration is structurally
/// identical under charge shifts, which makes the shift invariance exact in
/// floating point as well.
inline cx vev_charged(const FermionWord& word, int pair_budget = 8, int window = 64) {
    if (!(word.left == word.right))
        throw precondition_error("vev_charged: left and right charges must match");
    return detail::vev_of_factors(word.factors, word.left, pair_budget, window);
}

/// Determinant form of Wick's theorem for the block-ordered word
/// <c| w_1 ... w_n wbar_n ... wbar_1 |c>: the determinant of the pair_vev
/// matrix. wbars[j] is the j-th matrix column, i.e. the j-th factor counted
/// from the right end of the word.
inline cx vev_det(const std::vector<LinearCombo>& ws,
                  const std::vector<LinearCombo>& wbars,
                  const VacuumCharge& charge, int window = 64) {
    if (ws.size() != wbars.size())
        throw precondition_error("vev_det: count mismatch between annihilating and creating blocks");
    for (const LinearCombo& c : ws)
        if (c.kind != GenKind::f) throw precondition_error("vev_det: first block must be f-type");
    for (const LinearCombo& c : wbars)
        if (c.kind != GenKind::fbar) throw precondition_error("vev_det: second block must be fbar-type");
    const std::size_t n = ws.size();
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = pair_vev(ws[i], wbars[j], charge, window);
    return determinant(m);
}

/// The word whose vev_general must reproduce vev_det(ws, wbars, charge).
inline FermionWord block_word(const std::vector<LinearCombo>& ws,
                              const std::vector<LinearCombo>& wbars,
                              const VacuumCharge& charge) {
    FermionWord w;
    w.left = w.right = charge;
    w.factors = ws;
    for (std::size_t j = wbars.size(); j-- > 0;) w.factors.push_back(wbars[j]);
    return w;
}

/// Truncated fermionic free fields, one- and two-component.
inline LinearCombo field_f(cx x, int window) {
    if (x == cx{}) throw precondition_error("field_f: zero spectral point");
    LinearCombo c{GenKind::f, {}};
    for (long k = -window; k < window; ++k) c.terms.push_back({k, ipow(x, k)});
    return c;
}
inline LinearCombo field_fbar(cx y, int window) {
    if (y == cx{}) throw precondition_error("field_fbar: zero spectral point");
    LinearCombo c{GenKind::fbar, {}};
    for (long k = -window; k < window; ++k) c.terms.push_back({k, ipow(y, -k - 1)});
    return c;
}
inline LinearCombo field_f2(int comp, cx z, int window) {
    if (z == cx{}) throw precondition_error("field_f2: zero spectral point");
    LinearCombo c{GenKind::f, {}};
    for (long m = -window; m < window; ++m)
        c.terms.push_back({detail::mode_index(comp, m), ipow(z, m)});
    return c;
}
inline LinearCombo field_fbar2(int comp, cx z, int window) {
    if (z == cx{}) throw precondition_error("field_fbar2: zero spectral point");
    LinearCombo c{GenKind::fbar, {}};
    for (long m = -window; m < window; ++m)
        c.terms.push_back({detail::mode_index(comp, m), ipow(z, -m - 1)});
    return c;
}

/// A free field truncated to the mode window, as data: expands to the
/// matching combo. component 0 is the plain one-component field; 1 and 2
/// pick a sector of the even/odd split.
struct TruncatedField {
    GenKind kind = GenKind::f;
    cx point{};
    int window = 64;
    int component = 0;

    LinearCombo combo() const {
        if (component == 0)
            return kind == GenKind::f ? field_f(point, window) : field_fbar(point, window);
        return kind == GenKind::f ? field_f2(component, point, window)
                                  : field_fbar2(component, point, window);
    }
};

/// Truncated <0| f(x) fbar(y) |0> = sum_{n<W} y^n x^{-n-1}, converging to
/// 1/(x-y) inside |y| < |x| with tail bounded by |y/x|^W / (|x|-|y|).
inline cx cauchy_vev(cx x, cx y, int window) {
    if (!(std::abs(y) < std::abs(x)))
        throw precondition_error("cauchy_vev: needs |y| < |x|");
    CompensatedSum s;
    cx term = 1.0 / x;
    const cx ratio = y / x;
    for (int n = 0; n < window; ++n) {
        s.add(term);
        term *= ratio;
    }
    return s.value();
}

inline double cauchy_tail_bound(cx x, cx y, int window) {
    return std::pow(std::abs(y / x), window) / (std::abs(x) - std::abs(y));
}

inline cx vandermonde_product(const std::vector<cx>& z) { return vandermonde(z); }

/// Residual of the n+m point rational VEV identity
/// <n-m| f(x_n)...f(x_1) fbar(y_m)...fbar(y_1) |0> against
/// Delta_n(x) Delta_m(y) / prod (x_i - y_j), with truncated fields.
inline double rational_vev_check(const std::vector<cx>& xs, const std::vector<cx>& ys,
                                 int window = 64, int pair_budget = 8) {
    const long n = static_cast<long>(xs.size()), m = static_cast<long>(ys.size());
    if (n > 4 || m > 4) throw precondition_error("rational_vev_check: counts must be <= 4");
    double min_x = std::numeric_limits<double>::infinity();
    for (cx x : xs) min_x = std::min(min_x, std::abs(x));
    for (cx y : ys)
        if (!(std::abs(y) < min_x / 2))
            throw precondition_error("rational_vev_check: points outside convergence region |y| < min|x|/2");
    FermionWord w;
    w.left = VacuumCharge::single(static_cast<int>(n - m));
    w.right = VacuumCharge::single(0);
    for (long i = n; i-- > 0;) w.factors.push_back(field_f(xs[i], window));
    for (long j = m; j-- > 0;) w.factors.push_back(field_fbar(ys[j], window));
    const cx got = vev_general(w, pair_budget, window);
    cx denom{1.0, 0.0};
    for (cx x : xs)
        for (cx y : ys) denom *= x - y;
    const cx expected = vandermonde(xs) * vandermonde(ys) / denom;
    return std::abs(got - expected);
}

/// Residual of the two-component closed form with its interchange sign
/// (-1)^{m2 (m1 + n1)}.
inline double two_component_check(const std::vector<cx>& x1, const std::vector<cx>& y1,
                                  const std::vector<cx>& x2, const std::vector<cx>& y2,
                                  int window = 64, int pair_budget = 12) {
    const long n1 = static_cast<long>(x1.size()), m1 = static_cast<long>(y1.size());
    const long n2 = static_cast<long>(x2.size()), m2 = static_cast<long>(y2.size());
    if (n1 > 3 || m1 > 3 || n2 > 3 || m2 > 3)
        throw precondition_error("two_component_check: counts must be <= 3");
    FermionWord w;
    w.left = VacuumCharge::two(static_cast<int>(n1 - m1), static_cast<int>(n2 - m2));
    w.right = VacuumCharge::two(0, 0);
    for (long i = n2; i-- > 0;) w.factors.push_back(field_f2(2, x2[i], window));
    for (long i = n1; i-- > 0;) w.factors.push_back(field_f2(1, x1[i], window));
    for (long j = m1; j-- > 0;) w.factors.push_back(field_fbar2(1, y1[j], window));
    for (long j = m2; j-- > 0;) w.factors.push_back(field_fbar2(2, y2[j], window));
    const cx got = vev_general(w, pair_budget, window);
    cx denom{1.0, 0.0};
    for (cx x : x1)
        for (cx y : y1) denom *= x - y;
    for (cx x : x2)
        for (cx y : y2) denom *= x - y;
    const double sgn = (m2 * (m1 + n1)) % 2 == 0 ? 1.0 : -1.0;
    const cx expected = sgn * vandermonde(x1) * vandermonde(y1) * vandermonde(x2) *
                        vandermonde(y2) / denom;
    return std::abs(got - expected);
}

/// Shifts the second-component charges by s and relabels the second-component
/// mode indices to match; the VEV is invariant. For equal left and right
/// charges both sides run through bit-identical arithmetic, so the residual
/// is exactly zero.
inline double charge_shift_check(const FermionWord& word, int s, int pair_budget = 8,
                                 int window = 64) {
    if (!word.left.two_component || !word.right.two_component)
        throw precondition_error("charge_shift_check: needs two-component charges");
    if (std::abs(word.left.c2 + s) > window || std::abs(word.right.c2 + s) > window)
        throw precondition_error("charge_shift_check: window exceeded by shift");
    FermionWord shifted = word;
    shifted.left.c2 += s;
    shifted.right.c2 += s;
    for (LinearCombo& c : shifted.factors) {
        for (Term& t : c.terms)
            if ((t.index & 1L) != 0) t.index += 2L * s;
        c.normalize();  // relabeling may reorder terms across parity classes
    }
    const bool charged = word.left == word.right;
    const cx v1 = charged ? vev_charged(word, pair_budget, window)
                          : vev_general(word, pair_budget, window);
    const cx v2 = charged ? vev_charged(shifted, pair_budget, window)
                          : vev_general(shifted, pair_budget, window);
    return std::abs(v1 - v2);
}

} // namespace wick
} // namespace ratsym
