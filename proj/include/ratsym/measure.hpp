#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ratsym/complex_linalg.hpp"
#include "ratsym/errors.hpp"

namespace ratsym {

/// One point mass of a coupled complex measure: weight w at (x, y).
struct Atom {
    cx x{};
    cx y{};
    cx w{};
};

/// Finite atomic representation of a coupled measure d mu(x, y).
/// Every double integral against it is an exact finite sum over atoms, taken
/// in the stored atom order with compensated accumulation.
///
/// Construction merges atoms sharing the identical (x, y) pair by summing
/// their weights and drops atoms whose weight is exactly zero; an empty atom
/// list after that is an error.
class Measure {
public:
    Measure(std::vector<Atom> atoms, std::string label)
        : label_(std::move(label)) {
        for (const Atom& a : atoms) {
            if (!finite(a.x) || !finite(a.y) || !finite(a.w))
                throw parse_error("measure '" + label_ + "': non-finite coordinate or weight");
            if (a.w == cx{}) continue;
            bool merged = false;
            for (Atom& b : atoms_) {
                if (b.x == a.x && b.y == a.y) {
                    b.w += a.w;
                    merged = true;
                    break;
                }
            }
            if (!merged) atoms_.push_back(a);
        }
        atoms_.erase(std::remove_if(atoms_.begin(), atoms_.end(),
                                    [](const Atom& a) { return a.w == cx{}; }),
                     atoms_.end());
        if (atoms_.empty())
            throw parse_error("measure '" + label_ + "': empty atom list (possibly after merge)");
    }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::string& label() const { return label_; }
    std::size_t size() const { return atoms_.size(); }

    double min_distance_to_x_support(cx p) const {
        double d = std::numeric_limits<double>::infinity();
        for (const Atom& a : atoms_) d = std::min(d, std::abs(p - a.x));
        return d;
    }
    double min_distance_to_y_support(cx p) const {
        double d = std::numeric_limits<double>::infinity();
        for (const Atom& a : atoms_) d = std::min(d, std::abs(p - a.y));
        return d;
    }
    double max_abs_x() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m = std::max(m, std::abs(a.x));
        return m;
    }
    double max_abs_y() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m = std::max(m, std::abs(a.y));
        return m;
    }

    /// Same measure with roles of x and y exchanged. The mirrored case
    /// formulas are evaluated against this view.
    Measure swapped() const {
        std::vector<Atom> sw;
        sw.reserve(atoms_.size());
        for (const Atom& a : atoms_) sw.push_back({a.y, a.x, a.w});
        return Measure(std::move(sw), label_ + "/swapped");
    }

    Measure with_scaled_weights(cx c) const {
        if (c == cx{}) throw precondition_error("with_scaled_weights: zero scale");
        std::vector<Atom> sc = atoms_;
        for (Atom& a : sc) a.w *= c;
        return Measure(std::move(sc), label_);
    }

private:
    std::vector<Atom> atoms_;
    std::string label_;
};

/// Leading block of the bimoment matrix B[j][k] = sum_a w x^j y^k.
struct BimomentMatrix {
    std::size_t size = 0;
    CMatrix entries;
};

/// Single mixed moment sum_a w x^j y^k, accumulated in atom order.
inline cx bimoment(const Measure& m, std::size_t j, std::size_t k) {
    CompensatedSum s;
    for (const Atom& a : m.atoms())
        s.add(a.w * ipow(a.x, static_cast<long>(j)) * ipow(a.y, static_cast<long>(k)));
    cx v = s.value();
    if (!finite(v))
        throw precondition_error("bimoment: non-finite value at (j,k)=(" + std::to_string(j) +
                                 "," + std::to_string(k) + "); degrees too high for coordinate magnitudes");
    return v;
}

inline BimomentMatrix bimoment_matrix(const Measure& m, std::size_t t) {
    if (t < 1) throw precondition_error("bimoment_matrix: order must be >= 1");
    const std::size_t r = m.size();
    // Power tables once per atom, then a compensated pass per entry.
    std::vector<std::vector<cx>> xp(r, std::vector<cx>(t)), yp(r, std::vector<cx>(t));
    for (std::size_t a = 0; a < r; ++a) {
        xp[a][0] = yp[a][0] = cx{1.0, 0.0};
        for (std::size_t p = 1; p < t; ++p) {
            xp[a][p] = xp[a][p - 1] * m.atoms()[a].x;
            yp[a][p] = yp[a][p - 1] * m.atoms()[a].y;
        }
    }
    BimomentMatrix b;
    b.size = t;
    b.entries = CMatrix(t, t);
    for (std::size_t j = 0; j < t; ++j)
        for (std::size_t k = 0; k < t; ++k) {
            CompensatedSum s;
            for (std::size_t a = 0; a < r; ++a) s.add(m.atoms()[a].w * xp[a][j] * yp[a][k]);
            cx v = s.value();
            if (!finite(v))
                throw precondition_error("bimoment_matrix: non-finite entry at (" +
                                         std::to_string(j) + "," + std::to_string(k) + ")");
            b.entries(j, k) = v;
        }
    return b;
}

/// V(z, t) = sum_n t[n] z^n (t is 0-indexed; empty means V = 0).
inline cx time_potential(cx z, const std::vector<cx>& t) {
    cx v{};
    for (std::size_t n = t.size(); n-- > 0;) v = v * z + t[n];
    return v;
}

/// Reweights every atom by exp(V(x, t1) - V(y, t2)).
inline Measure deform_measure(const Measure& m, const std::vector<cx>& t1,
                              const std::vector<cx>& t2) {
    std::vector<Atom> atoms = m.atoms();
    for (Atom& a : atoms) {
        cx f = std::exp(time_potential(a.x, t1) - time_potential(a.y, t2));
        if (!finite(f))
            throw precondition_error("deform_measure: exponential overflow at atom");
        a.w *= f;
    }
    return Measure(std::move(atoms), m.label() + "/deformed");
}

/// Atoms on the Cartesian product of the node sequences, weighted by the
/// pointwise rule times the per-axis quadrature weights.
inline Measure build_grid_measure(const std::vector<cx>& x_nodes,
                                  const std::vector<cx>& x_weights,
                                  const std::vector<cx>& y_nodes,
                                  const std::vector<cx>& y_weights,
                                  const std::function<cx(cx, cx)>& weight_rule,
                                  std::string label) {
    if (x_nodes.empty() || y_nodes.empty())
        throw parse_error("build_grid_measure: empty node sequence");
    if (x_weights.size() != x_nodes.size() || y_weights.size() != y_nodes.size())
        throw parse_error("build_grid_measure: node/weight length mismatch");
    std::vector<Atom> atoms;
    atoms.reserve(x_nodes.size() * y_nodes.size());
    for (std::size_t i = 0; i < x_nodes.size(); ++i)
        for (std::size_t j = 0; j < y_nodes.size(); ++j) {
            cx f = weight_rule(x_nodes[i], y_nodes[j]);
            if (!finite(f))
                throw precondition_error("build_grid_measure: weight rule non-finite at grid point");
            atoms.push_back({x_nodes[i], y_nodes[j], f * x_weights[i] * y_weights[j]});
        }
    return Measure(std::move(atoms), std::move(label));
}

/// Gauss-Legendre nodes and weights on [a, b], by Newton iteration on the
/// Legendre recurrence.
inline void gauss_legendre(std::size_t n, double a, double b,
                           std::vector<double>& nodes, std::vector<double>& weights) {
    if (n == 0) throw parse_error("gauss_legendre: need at least one node");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    const std::size_t m = (n + 1) / 2;
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < m; ++i) {
        double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * static_cast<double>(k) + 1.0) * z * p1 -
                      static_cast<double>(k) * p2) / (static_cast<double>(k) + 1.0);
            }
            pp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        nodes[i] = mid - half * z;
        nodes[n - 1 - i] = mid + half * z;
        weights[i] = weights[n - 1 - i] = 2.0 * half / ((1.0 - z * z) * pp * pp);
    }
}

} // namespace ratsym
