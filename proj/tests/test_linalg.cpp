#include <catch2/catch_amalgamated.hpp>

#include "ratsym/complex_linalg.hpp"
#include "ratsym/random.hpp"
#include "support/test_oracles.hpp"

using namespace ratsym;

TEST_CASE("determinant matches cofactor expansion on random complex matrices") {
    Rng rng(12345);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.index(6));
        CMatrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.box(1.0);
        const cx d1 = determinant(a);
        const cx d2 = testsupport::cofactor_det(a);
        REQUIRE(std::abs(d1 - d2) <= 1e-12 * std::max(1.0, std::abs(d2)));
    }
}

TEST_CASE("determinant of the empty matrix is one") {
    CMatrix a(0, 0);
    REQUIRE(determinant(a) == cx{1.0, 0.0});
}

TEST_CASE("lu_solve solves random systems") {
    Rng rng(99);
    const std::size_t n = 5;
    CMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.box(1.0);
    std::vector<cx> x_true(n);
    for (std::size_t i = 0; i < n; ++i) x_true[i] = rng.box(2.0);
    std::vector<cx> b(n);
    for (std::size_t i = 0; i < n; ++i) {
        cx s{};
        for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x_true[j];
        b[i] = s;
    }
    const std::vector<cx> x = lu_solve(lu_factor(a), b);
    for (std::size_t i = 0; i < n; ++i)
        REQUIRE(std::abs(x[i] - x_true[i]) < 1e-10);
}

TEST_CASE("unpivoted LDU reproduces the matrix and its minor ratios") {
    Rng rng(7);
    const std::size_t n = 6;
    CMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = rng.box(1.0) + (i == j ? cx{2.0, 0.0} : cx{});
    const LDUFactors f = ldu_unpivoted(b, n);

    CMatrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = f.d[i];
    const CMatrix prod = f.L * d * f.U;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            REQUIRE(std::abs(prod(i, j) - b(i, j)) < 1e-12 * b.max_abs());

    // pivots are ratios of consecutive leading principal minors
    cx prev{1.0, 0.0};
    for (std::size_t k = 1; k <= n; ++k) {
        const cx mk = testsupport::leading_minor_det(b, k);
        REQUIRE(std::abs(f.d[k - 1] - mk / prev) < 1e-9 * std::abs(mk / prev));
        prev = mk;
    }
}

TEST_CASE("unpivoted LDU rejects a singular leading minor") {
    CMatrix b(2, 2);
    b(0, 0) = 0.0;
    b(0, 1) = 1.0;
    b(1, 0) = 1.0;
    b(1, 1) = 0.0;
    REQUIRE_THROWS_AS(ldu_unpivoted(b, 2), precondition_error);
}

TEST_CASE("triangular inverses invert") {
    Rng rng(21);
    const std::size_t n = 5;
    CMatrix l = CMatrix::identity(n), u = CMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            l(i, j) = rng.box(1.0);
            u(j, i) = rng.box(1.0);
        }
    const CMatrix li = invert_unit_lower(l), ui = invert_unit_upper(u);
    const CMatrix pl = l * li, pu = u * ui;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            REQUIRE(std::abs(pl(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
            REQUIRE(std::abs(pu(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);
        }
}

TEST_CASE("compensated summation survives cancellation-heavy input") {
    CompensatedSum s;
    s.add(cx{1e16, 0.0});
    s.add(cx{1.0, 0.0});
    s.add(cx{-1e16, 0.0});
    REQUIRE(s.value().real() == 1.0);
}

TEST_CASE("vandermonde of empty and singleton families is one") {
    REQUIRE(vandermonde({}) == cx{1.0, 0.0});
    REQUIRE(vandermonde({cx{3.0, 1.0}}) == cx{1.0, 0.0});
}

TEST_CASE("ipow handles negative exponents and rejects zero base") {
    REQUIRE(std::abs(ipow(cx{2.0, 0.0}, -2) - cx{0.25, 0.0}) < 1e-15);
    REQUIRE(ipow(cx{5.0, 0.0}, 0) == cx{1.0, 0.0});
    REQUIRE_THROWS_AS(ipow(cx{}, -1), precondition_error);
}

TEST_CASE("jacobi eigensolver used by the rank checks is sane") {
    CMatrix a(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 1.0;
    a(2, 2) = 2.0;
    a(0, 1) = cx{0.0, 0.5};
    a(1, 0) = cx{0.0, -0.5};
    std::vector<double> ev = testsupport::hermitian_eigenvalues(a);
    std::sort(ev.begin(), ev.end());
    // exact eigenvalues of the 2x2 block: 2 +- sqrt(1.25), plus 2
    REQUIRE(std::abs(ev[0] - (2.0 - std::sqrt(1.25))) < 1e-10);
    REQUIRE(std::abs(ev[1] - 2.0) < 1e-10);
    REQUIRE(std::abs(ev[2] - (2.0 + std::sqrt(1.25))) < 1e-10);
}
