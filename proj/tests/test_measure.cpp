#include <catch2/catch_amalgamated.hpp>

#include "ratsym/io.hpp"
#include "ratsym/measure.hpp"
#include "ratsym/random.hpp"
#include "support/test_oracles.hpp"

using namespace ratsym;

namespace {

Measure random_measure(std::uint64_t seed, std::size_t count) {
    Rng rng(seed);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < count; ++i)
        atoms.push_back({rng.annulus(0.25, 1.2), rng.annulus(0.25, 1.2),
                         rng.annulus(0.3, 1.5)});
    return Measure(std::move(atoms), "random-" + std::to_string(seed));
}

} // namespace

TEST_CASE("single atom document loads") {
    const json doc = json::parse(R"({"label":"one","atoms":[{"x":[2,0],"y":[3,0],"w":[1,0]}]})");
    const Measure m = measure_from_json(doc);
    REQUIRE(m.size() == 1);
    REQUIRE(m.atoms()[0].x == cx{2.0, 0.0});
    REQUIRE(bimoment(m, 1, 2) == cx{18.0, 0.0});
}

TEST_CASE("duplicate atoms cancelling to zero weight is an error") {
    const json doc = json::parse(
        R"({"atoms":[{"x":[1,0],"y":[2,0],"w":[1,0]},{"x":[1,0],"y":[2,0],"w":[-1,0]}]})");
    REQUIRE_THROWS_AS(measure_from_json(doc), parse_error);
}

TEST_CASE("duplicate atoms merge by weight") {
    const json doc = json::parse(
        R"({"atoms":[{"x":[1,0],"y":[2,0],"w":[1,0]},{"x":[1,0],"y":[2,0],"w":[0.5,0]}]})");
    const Measure m = measure_from_json(doc);
    REQUIRE(m.size() == 1);
    REQUIRE(m.atoms()[0].w == cx{1.5, 0.0});
}

TEST_CASE("non-finite input is rejected") {
    std::vector<Atom> atoms{{cx{1.0, 0.0}, cx{2.0, 0.0},
                             cx{std::numeric_limits<double>::infinity(), 0.0}}};
    REQUIRE_THROWS_AS(Measure(std::move(atoms), "bad"), parse_error);
}

TEST_CASE("12-atom measure round-trips bit-identically through JSON") {
    const Measure m = random_measure(424242, 12);
    const json j1 = measure_to_json(m);
    const Measure m2 = measure_from_json(json::parse(j1.dump()));
    REQUIRE(m2.size() == m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        REQUIRE(m.atoms()[i].x == m2.atoms()[i].x);
        REQUIRE(m.atoms()[i].y == m2.atoms()[i].y);
        REQUIRE(m.atoms()[i].w == m2.atoms()[i].w);
    }
}

TEST_CASE("bimoment basics") {
    const Measure m = random_measure(7, 12);
    cx wsum{};
    for (const Atom& a : m.atoms()) wsum += a.w;
    REQUIRE(std::abs(bimoment(m, 0, 0) - wsum) < 1e-14);

    const cx naive = testsupport::naive_bimoment(m, 3, 4);
    REQUIRE(std::abs(bimoment(m, 3, 4) - naive) <= 1e-14 * std::abs(naive));
}

TEST_CASE("bimoment overflow reports degrees too high") {
    const Measure m({{cx{1e200, 0.0}, cx{1.0, 0.0}, cx{1.0, 0.0}}}, "huge");
    REQUIRE_THROWS_AS(bimoment(m, 2, 0), precondition_error);
}

TEST_CASE("bimoment is linear in the weights") {
    const Measure m = random_measure(8, 10);
    const Measure m2 = m.with_scaled_weights(cx{2.0, 0.0});
    for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t k = 0; k < 4; ++k) {
            const cx b = bimoment(m, j, k), b2 = bimoment(m2, j, k);
            REQUIRE(std::abs(b2 - 2.0 * b) <= 4e-16 * std::abs(b2) * static_cast<double>(m.size()));
        }
}

TEST_CASE("bimoment matrix of a single atom is rank one with entries a^j b^k") {
    const Measure m({{cx{0.5, 0.25}, cx{-0.75, 0.5}, cx{1.0, 1.0}}}, "atom");
    const BimomentMatrix b = bimoment_matrix(m, 3);
    for (std::size_t j = 0; j < 3; ++j)
        for (std::size_t k = 0; k < 3; ++k) {
            const cx expect = m.atoms()[0].w * ipow(m.atoms()[0].x, static_cast<long>(j)) *
                              ipow(m.atoms()[0].y, static_cast<long>(k));
            REQUIRE(std::abs(b.entries(j, k) - expect) < 1e-14);
        }
    const std::vector<double> sv = testsupport::singular_values(b.entries);
    REQUIRE(sv[0] > 1e-3);
    REQUIRE(sv[1] < 1e-6 * sv[0]);  // gram-matrix route floors tiny singular values near sqrt(eps)
}

TEST_CASE("bimoment matrix rank is bounded by the atom count") {
    const Measure m = random_measure(99, 3);
    const BimomentMatrix b = bimoment_matrix(m, 6);
    const std::vector<double> sv = testsupport::singular_values(b.entries);
    for (std::size_t i = 3; i < sv.size(); ++i) REQUIRE(sv[i] < 1e-6 * sv[0]);
}

TEST_CASE("leading minors of a generic 12-atom measure are nonsingular up to T=8") {
    const Measure m = random_measure(424242, 12);
    const BimomentMatrix b = bimoment_matrix(m, 8);
    for (std::size_t k = 1; k <= 8; ++k)
        REQUIRE(std::abs(testsupport::leading_minor_det(b.entries, k)) > 0.0);
}

TEST_CASE("grid measure: 2x3 unit grid") {
    const Measure m = build_grid_measure({cx{0.0, 0.0}, cx{1.0, 0.0}},
                                         {cx{1.0, 0.0}, cx{1.0, 0.0}},
                                         {cx{0.0, 0.0}, cx{2.0, 0.0}, cx{4.0, 0.0}},
                                         {cx{1.0, 0.0}, cx{1.0, 0.0}, cx{1.0, 0.0}},
                                         [](cx, cx) { return cx{1.0, 0.0}; }, "grid");
    REQUIRE(m.size() == 6);
    for (const Atom& a : m.atoms()) REQUIRE(a.w == cx{1.0, 0.0});
}

TEST_CASE("grid measure: single node per axis multiplies out") {
    const Measure m = build_grid_measure({cx{2.0, 0.0}}, {cx{0.5, 0.0}},
                                         {cx{3.0, 0.0}}, {cx{0.25, 0.0}},
                                         [](cx x, cx y) { return x * y; }, "single");
    REQUIRE(m.size() == 1);
    REQUIRE(std::abs(m.atoms()[0].w - cx{0.75, 0.0}) < 1e-15);
}

TEST_CASE("gauss-legendre grid with weight e^{xy} integrates e^{xy} over the square") {
    const json doc = json::parse(R"json({
        "label": "gl8",
        "grid": {
            "x_nodes": {"rule": "gauss_legendre", "n": 8, "a": -1.0, "b": 1.0},
            "y_nodes": {"rule": "gauss_legendre", "n": 8, "a": -1.0, "b": 1.0},
            "weight": "exp(x*y)"
        }})json");
    const Measure m = measure_from_json(doc);
    REQUIRE(m.size() == 64);
    const double expected = testsupport::exp_xy_square_integral();
    REQUIRE(std::abs(bimoment(m, 0, 0).real() - expected) < 1e-12);
    REQUIRE(std::abs(bimoment(m, 0, 0).imag()) < 1e-14);
}

TEST_CASE("grid weight rule must stay finite") {
    REQUIRE_THROWS_AS(build_grid_measure({cx{1.0, 0.0}}, {cx{1.0, 0.0}},
                                         {cx{1.0, 0.0}}, {cx{1.0, 0.0}},
                                         [](cx, cx) {
                                             return cx{std::numeric_limits<double>::quiet_NaN(), 0.0};
                                         },
                                         "nan"),
                      precondition_error);
}

TEST_CASE("deform with no times is the identity") {
    const Measure m = random_measure(5, 6);
    const Measure d = deform_measure(m, {}, {});
    for (std::size_t i = 0; i < m.size(); ++i) REQUIRE(m.atoms()[i].w == d.atoms()[i].w);
}

TEST_CASE("deform with t1=(0,1) at x=0 leaves the weight alone") {
    const Measure m({{cx{0.0, 0.0}, cx{5.0, 0.0}, cx{2.0, 0.0}}}, "one");
    const Measure d = deform_measure(m, {cx{0.0, 0.0}, cx{1.0, 0.0}}, {});
    REQUIRE(d.atoms()[0].w == cx{2.0, 0.0});
}

TEST_CASE("deform multiplies by exp(V(x,t1) - V(y,t2))") {
    const Measure m = random_measure(11, 4);
    const std::vector<cx> t1{cx{0.1, 0.0}, cx{0.0, 0.2}};
    const std::vector<cx> t2{cx{0.0, 0.0}, cx{-0.05, 0.1}, cx{0.02, 0.0}};
    const Measure d = deform_measure(m, t1, t2);
    for (std::size_t i = 0; i < m.size(); ++i) {
        const Atom& a = m.atoms()[i];
        const cx expect = a.w * std::exp((t1[0] + t1[1] * a.x) -
                                         (t2[0] + t2[1] * a.y + t2[2] * a.y * a.y));
        REQUIRE(std::abs(d.atoms()[i].w - expect) < 1e-13 * std::abs(expect));
    }
}

TEST_CASE("insertion-spec documents validate their shape") {
    REQUIRE_THROWS_AS(spec_from_json(json::parse(R"({"xi": []})")), parse_error);
    REQUIRE_THROWS_AS(spec_from_json(json::parse(R"({"N": 1.5})")), parse_error);
    REQUIRE_THROWS_AS(spec_from_json(json::parse(R"({"N": 2, "xi": [[1, 2, 3]]})")),
                      parse_error);
    const InsertionSpec s =
        spec_from_json(json::parse(R"({"N": 2, "mu": [[1, -1], 3.5]})"));
    REQUIRE(s.N == 2);
    REQUIRE(s.mu.size() == 2);
    REQUIRE(s.mu[1] == cx{3.5, 0.0});
    REQUIRE(s.xi.empty());
    // round trip
    const InsertionSpec s2 = spec_from_json(json::parse(spec_to_json(s).dump()));
    REQUIRE(s2.mu == s.mu);
}

TEST_CASE("measure documents validate their shape") {
    REQUIRE_THROWS_AS(measure_from_json(json::parse(R"({"label": "x"})")), parse_error);
    REQUIRE_THROWS_AS(measure_from_json(json::parse(R"({"atoms": [{"x": [1,0]}]})")),
                      parse_error);
    REQUIRE_THROWS_AS(
        measure_from_json(json::parse(R"({"grid": {"x_nodes": {"rule": "trapezoid"},
                                                   "y_nodes": [[1,0]]}})")),
        parse_error);
}

TEST_CASE("weight expression parser handles the documented grammar") {
    WeightExpr e1("exp(x*y) + 2*x^2 - y/4");
    const cx x{0.5, 0.1}, y{-0.25, 0.3};
    const cx expect = std::exp(x * y) + 2.0 * x * x - y / 4.0;
    REQUIRE(std::abs(e1(x, y) - expect) < 1e-14);
    WeightExpr e2("one");
    REQUIRE(e2(x, y) == cx{1.0, 0.0});
    WeightExpr e3("i*x");
    REQUIRE(std::abs(e3(x, y) - cx{0.0, 1.0} * x) < 1e-15);
    REQUIRE_THROWS_AS(WeightExpr("exp(x"), parse_error);
    REQUIRE_THROWS_AS(WeightExpr("x + * y"), parse_error);
}
