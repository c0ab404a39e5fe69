#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ratsym/biortho.hpp"
#include "ratsym/complex_linalg.hpp"
#include "ratsym/errors.hpp"
#include "ratsym/insertion.hpp"
#include "ratsym/measure.hpp"

namespace ratsym {

enum class OracleMethod { brute, detN, partition };

struct OracleResult {
    cx value{};
    OracleMethod method = OracleMethod::brute;
    long terms = 0;
};

namespace detail {

inline cx tuple_vandermonde(const std::vector<cx>& v) {
    cx p{1.0, 0.0};
    for (std::size_t i = 1; i < v.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) p *= v[i] - v[j];
    return p;
}

/// Rational factor of the integrand at one point (x, y).
inline cx insertion_factor(const InsertionSpec& spec, cx x, cx y) {
    cx num{1.0, 0.0}, den{1.0, 0.0};
    for (cx p : spec.xi) num *= p - x;
    for (cx p : spec.zeta) num *= p - y;
    for (cx p : spec.eta) den *= p - x;
    for (cx p : spec.mu) den *= p - y;
    return num / den;
}

} // namespace detail

/// The literal N-fold sum over ordered atom tuples, normalized by the same
/// sum without insertions. Both sums share one tuple enumeration so their
/// rounding behaviour matches. With distinct_only the enumeration skips
/// tuples that repeat an atom; those contribute exactly zero through the
/// Vandermonde factors, which a test verifies.
inline OracleResult brute_force_IN(const Measure& m, const InsertionSpec& spec,
                                   long budget = 10'000'000,
                                   bool distinct_only = false) {
    validate_spec(spec, m);
    const std::size_t r = m.size();
    const int n = spec.N;
    double tuples = 1.0;
    for (int i = 0; i < n; ++i) tuples *= static_cast<double>(r);
    if (tuples > static_cast<double>(budget))
        throw budget_error("brute_force_IN: " + std::to_string(static_cast<long long>(tuples)) +
                           " tuples exceed budget " + std::to_string(budget));

    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    std::vector<cx> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
    CompensatedSum num_sum, z_sum;
    long terms = 0;
    bool done = false;
    while (!done) {
        bool skip = false;
        if (distinct_only) {
            for (std::size_t i = 0; i < idx.size() && !skip; ++i)
                for (std::size_t j = i + 1; j < idx.size(); ++j)
                    if (idx[i] == idx[j]) { skip = true; break; }
        }
        if (!skip) {
            cx wprod{1.0, 0.0};
            for (std::size_t i = 0; i < idx.size(); ++i) {
                const Atom& a = m.atoms()[idx[i]];
                wprod *= a.w;
                xs[i] = a.x;
                ys[i] = a.y;
            }
            const cx vv = detail::tuple_vandermonde(xs) * detail::tuple_vandermonde(ys);
            if (vv != cx{}) {
                cx rat{1.0, 0.0};
                for (std::size_t i = 0; i < idx.size(); ++i)
                    rat *= detail::insertion_factor(spec, xs[i], ys[i]);
                num_sum.add(wprod * vv * rat);
                z_sum.add(wprod * vv);
            }
            ++terms;
        }
        // odometer over ordered tuples, last index fastest
        done = true;
        for (std::size_t i = idx.size(); i-- > 0;) {
            if (++idx[i] < r) { done = false; break; }
            idx[i] = 0;
        }
        if (idx.empty()) break;
    }
    const cx z = z_sum.value();
    if (std::abs(z) < 1e-300)
        throw precondition_error("brute_force_IN: normalization sum vanishes (degenerate measure)");
    OracleResult res;
    res.value = num_sum.value() / z;
    res.method = OracleMethod::brute;
    res.terms = terms;
    if (!finite(res.value)) throw precondition_error("brute_force_IN: non-finite value");
    return res;
}

/// The N x N determinant route: ratio of the insertion-modified bimoment
/// determinant to the plain one.
inline OracleResult detN_IN(const Measure& m, const InsertionSpec& spec) {
    validate_spec(spec, m);
    const std::size_t n = static_cast<std::size_t>(spec.N);
    CMatrix modified(n, n), plain(n, n);
    // per-atom power tables
    const std::size_t r = m.size();
    std::vector<std::vector<cx>> xp(r, std::vector<cx>(n)), yp(r, std::vector<cx>(n));
    std::vector<cx> rat(r);
    for (std::size_t a = 0; a < r; ++a) {
        const Atom& at = m.atoms()[a];
        xp[a][0] = yp[a][0] = cx{1.0, 0.0};
        for (std::size_t p = 1; p < n; ++p) {
            xp[a][p] = xp[a][p - 1] * at.x;
            yp[a][p] = yp[a][p - 1] * at.y;
        }
        rat[a] = detail::insertion_factor(spec, at.x, at.y);
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
            CompensatedSum sm, sp;
            for (std::size_t a = 0; a < r; ++a) {
                const cx base = m.atoms()[a].w * xp[a][j] * yp[a][k];
                sm.add(base * rat[a]);
                sp.add(base);
            }
            modified(j, k) = sm.value();
            plain(j, k) = sp.value();
        }
    const cx dplain = determinant(plain);
    if (dplain == cx{} || !finite(cx{1.0, 0.0} / dplain))
        throw precondition_error("detN_IN: singular leading bimoment block");
    OracleResult res;
    res.value = determinant(modified) / dplain;
    res.method = OracleMethod::detN;
    res.terms = static_cast<long>(n * n * r);
    if (!finite(res.value)) throw precondition_error("detN_IN: non-finite value");
    return res;
}

/// The partition normalization by three independent routes: the literal
/// N-fold sum, N! times the bimoment determinant, and N! times the product
/// of the factorization pivots. They must agree.
struct PartitionTriple {
    cx z_brute{};
    cx z_det{};
    cx z_norms{};
};

inline PartitionTriple partition_Z(const Measure& m, int n, long budget = 10'000'000) {
    if (n < 1) throw precondition_error("partition_Z: N must be positive");
    const std::size_t r = m.size();
    double tuples = 1.0;
    for (int i = 0; i < n; ++i) tuples *= static_cast<double>(r);
    if (tuples > static_cast<double>(budget))
        throw budget_error("partition_Z: tuple count exceeds budget");

    double factorial = 1.0;
    for (int i = 2; i <= n; ++i) factorial *= i;

    PartitionTriple out;
    {
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
        std::vector<cx> xs(static_cast<std::size_t>(n)), ys(static_cast<std::size_t>(n));
        CompensatedSum z_sum;
        bool done = false;
        while (!done) {
            cx wprod{1.0, 0.0};
            for (std::size_t i = 0; i < idx.size(); ++i) {
                const Atom& a = m.atoms()[idx[i]];
                wprod *= a.w;
                xs[i] = a.x;
                ys[i] = a.y;
            }
            z_sum.add(wprod * detail::tuple_vandermonde(xs) * detail::tuple_vandermonde(ys));
            done = true;
            for (std::size_t i = idx.size(); i-- > 0;) {
                if (++idx[i] < r) { done = false; break; }
                idx[i] = 0;
            }
        }
        out.z_brute = z_sum.value();
    }
    BimomentMatrix b = bimoment_matrix(m, static_cast<std::size_t>(n));
    out.z_det = factorial * determinant(b.entries);
    BiorthoSystem sys = BiorthoSystem::factorize(b, static_cast<std::size_t>(n));
    cx hprod{1.0, 0.0};
    for (int k = 0; k < n; ++k) hprod *= sys.h(k);
    out.z_norms = factorial * hprod;
    return out;
}

} // namespace ratsym
