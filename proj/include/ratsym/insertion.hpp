#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ratsym/complex_linalg.hpp"
#include "ratsym/errors.hpp"
#include "ratsym/measure.hpp"

namespace ratsym {

/// The four insertion-point families of the rational symmetric integrand:
/// zeros xi (in x), zeta (in y) and poles eta (in x), mu (in y), plus the
/// fold count N.
struct InsertionSpec {
    int N = 1;
    std::vector<cx> xi;    // L1 zeros in x
    std::vector<cx> zeta;  // L2 zeros in y
    std::vector<cx> eta;   // M1 poles in x
    std::vector<cx> mu;    // M2 poles in y

    long L1() const { return static_cast<long>(xi.size()); }
    long L2() const { return static_cast<long>(zeta.size()); }
    long M1() const { return static_cast<long>(eta.size()); }
    long M2() const { return static_cast<long>(mu.size()); }
    long N1() const { return N + L1() - M1(); }
    long N2() const { return N + L2() - M2(); }
    bool empty() const { return xi.empty() && zeta.empty() && eta.empty() && mu.empty(); }

    /// The spec seen through the x<->y exchange; evaluating it against the
    /// swapped measure gives the same integral.
    InsertionSpec swapped() const { return {N, zeta, xi, mu, eta}; }
};

/// The six determinant branches, keyed by the signs and ordering of
/// N1 = N+L1-M1 and N2 = N+L2-M2. The trailing m marks the mirrored
/// partner obtained by exchanging the two variable families.
enum class CaseKind { C1, C1m, C2, C2m, C3, C3m };

inline const char* to_string(CaseKind k) {
    switch (k) {
        case CaseKind::C1: return "C1";
        case CaseKind::C1m: return "C1m";
        case CaseKind::C2: return "C2";
        case CaseKind::C2m: return "C2m";
        case CaseKind::C3: return "C3";
        case CaseKind::C3m: return "C3m";
    }
    return "?";
}

struct CaseTag {
    CaseKind kind = CaseKind::C1;
    long N1 = 0;
    long N2 = 0;
};

inline bool case_applies(CaseKind k, long n1, long n2) {
    switch (k) {
        case CaseKind::C1: return n2 >= n1 && n1 >= 0;
        case CaseKind::C1m: return n1 >= n2 && n2 >= 0;
        case CaseKind::C2: return n1 <= 0 && 0 <= n2;
        case CaseKind::C2m: return n2 <= 0 && 0 <= n1;
        case CaseKind::C3: return n1 <= n2 && n2 <= 0;
        case CaseKind::C3m: return n2 <= n1 && n1 <= 0;
    }
    return false;
}

/// All branches whose inequalities hold, in canonical priority order.
inline std::vector<CaseKind> applicable_cases(const InsertionSpec& spec) {
    const long n1 = spec.N1(), n2 = spec.N2();
    std::vector<CaseKind> out;
    for (CaseKind k : {CaseKind::C1, CaseKind::C1m, CaseKind::C2,
                       CaseKind::C2m, CaseKind::C3, CaseKind::C3m})
        if (case_applies(k, n1, n2)) out.push_back(k);
    return out;
}

/// Canonical branch: the first applicable one in priority order
/// C1, C1m, C2, C2m, C3, C3m. At least one always applies.
inline CaseTag classify(const InsertionSpec& spec) {
    std::vector<CaseKind> all = applicable_cases(spec);
    return CaseTag{all.front(), spec.N1(), spec.N2()};
}

/// Validates fold count, pairwise separation within each family, and that
/// the pole families keep clear of the corresponding support coordinates.
inline void validate_spec(const InsertionSpec& spec, const Measure& m,
                          double eps_pole = 1e-8) {
    if (spec.N < 1) throw parse_error("insertion spec: N must be positive");
    auto check_family = [&](const std::vector<cx>& fam, const char* name) {
        for (std::size_t i = 0; i < fam.size(); ++i) {
            if (!finite(fam[i]))
                throw parse_error(std::string("insertion spec: non-finite point in ") + name);
            for (std::size_t j = i + 1; j < fam.size(); ++j)
                if (std::abs(fam[i] - fam[j]) <= eps_pole)
                    throw precondition_error(std::string("insertion spec: coincident points in family ") + name);
        }
    };
    check_family(spec.xi, "xi");
    check_family(spec.zeta, "zeta");
    check_family(spec.eta, "eta");
    check_family(spec.mu, "mu");
    for (cx p : spec.eta)
        if (m.min_distance_to_x_support(p) <= eps_pole)
            throw precondition_error("insertion spec: eta point too close to x-support");
    for (cx p : spec.mu)
        if (m.min_distance_to_y_support(p) <= eps_pole)
            throw precondition_error("insertion spec: mu point too close to y-support");
}

} // namespace ratsym
