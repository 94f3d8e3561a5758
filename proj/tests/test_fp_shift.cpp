#include "doctest.h"

#include <cmath>

#include "algdyn/error.hpp"
#include "algdyn/fp_linalg.hpp"
#include "algdyn/fp_shift.hpp"
#include "oracles.hpp"

using namespace algdyn;

namespace {

FpShiftSystem system_of(const char* json) { return FpShiftSystem::from_json(nlohmann::json::parse(json)); }

std::vector<Exponent> relation_of(const FpShiftSystem& sys)
{
    std::vector<Exponent> r;
    for (const auto& [e, c] : sys.generators.front().terms()) r.push_back(e);
    return r;
}

} // namespace

TEST_SUITE("fp_linalg")
{
    TEST_CASE("incremental echelon over F_2 and F_5")
    {
        FpEchelon e2(4, 2);
        CHECK(e2.insert({{0, 1}, {1, 1}}) >= 0);
        CHECK(e2.insert({{1, 1}, {2, 1}}) >= 0);
        CHECK(e2.insert({{0, 1}, {2, 1}}) == -1);   // sum of the first two
        CHECK(e2.rank() == 2);

        FpEchelon e5(3, 5);
        CHECK(e5.insert({{0, 2}, {1, 3}}) >= 0);
        CHECK(e5.insert({{0, 4}, {1, 1}}) == -1);   // 2 * first row
        CHECK(e5.insert({{2, 1}}) >= 0);
        CHECK(e5.rank() == 2);
        CHECK(inverse_mod(3, 7) == 5);
    }
}

TEST_SUITE("fp_shift")
{
    TEST_CASE("window counts against exhaustive enumeration")
    {
        for (const char* json : {R"({"p":2,"d":2,"generators":["1+u+v"]})", R"({"p":2,"d":2,"generators":["1+u+u^2+uv+v^2"]})",
                                 R"({"p":2,"d":2,"generators":["1+u*v+u^2"]})"}) {
            const auto sys = system_of(json);
            for (int w = 1; w <= 4; ++w)
                for (int h = 1; h <= 4; ++h) {
                    INFO(json << " window " << w << "x" << h);
                    const auto wc = window_count(sys, Box{{0, 0}, {w - 1, h - 1}});
                    CHECK(static_cast<int>(wc.free_dimension) == oracle::brute_force_f2_log_count(relation_of(sys), w, h));
                    CHECK(wc.free_dimension + wc.constraint_rank == static_cast<std::size_t>(w * h));
                }
        }
    }

    TEST_CASE("cylinder measures against enumeration on a window")
    {
        const auto sys = system_of(R"({"p":2,"d":2,"generators":["1+u+v"]})");
        const std::vector<std::pair<Exponent, int>> fixed{{{1, 1}, 1}, {{2, 1}, 0}, {{1, 3}, 1}};
        const int all = oracle::brute_force_f2_log_count(relation_of(sys), 4, 4);
        const int some = oracle::brute_force_f2_log_count(relation_of(sys), 4, 4, fixed);
        CylinderSpec cyl;
        for (const auto& [pt, v] : fixed) cyl[pt] = static_cast<std::uint32_t>(v);
        CHECK(cylinder_measure(sys, cyl).value == mpq_class(1, 1 << (all - some)));

        // x_0 + x_{e1} + x_{e2} = 0 on X: this assignment is impossible.
        const CylinderSpec bad{{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}};
        CHECK(cylinder_measure(sys, bad).value == 0);
        const auto m = cylinder_measure(sys, {{{0, 0}, 0}});
        CHECK(m.value == mpq_class(1, 2));
        CHECK(m.history.size() >= 3);
    }

    TEST_CASE("cylinders over F_3")
    {
        const auto sys = system_of(R"({"p":3,"d":2,"generators":["1+u+v"]})");
        CHECK(cylinder_measure(sys, {{{0, 0}, 2}}).value == mpq_class(1, 3));
        CHECK(cylinder_measure(sys, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 1}}).value == mpq_class(1, 9));
        CHECK(cylinder_measure(sys, {{{0, 0}, 1}, {{1, 0}, 1}, {{0, 1}, 2}}).value == 0);
    }

    TEST_CASE("shift of a cylinder")
    {
        const CylinderSpec c{{{0, 0}, 1}, {{2, -1}, 0}};
        const auto s = shift_cylinder(c, {3, 4});
        CHECK(s == CylinderSpec{{{3, 4}, 1}, {{5, 3}, 0}});
    }

    TEST_CASE("Ledrappier mixing defects")
    {
        const auto sys = system_of(R"({"p":2,"d":2,"generators":["1+u+v"]})");
        const CylinderSpec b{{{0, 0}, 0}};
        const auto t = mixing_defect(sys, {{0, 0}, {1, 0}, {0, 1}}, {b}, {1, 2, 3, 4, 8});
        CHECK(t.product_target == mpq_class(1, 8));
        for (const auto& e : t.entries) {
            const bool power_of_two = (e.k & (e.k - 1)) == 0;
            CHECK(e.measured == (power_of_two ? mpq_class(1, 4) : mpq_class(1, 8)));
        }
        const auto pair = mixing_defect(sys, {{0, 0}, {1, 0}}, {b}, {1, 2, 4});
        for (const auto& e : pair.entries) CHECK(e.defect == 0);
        // Conflicting assignments meet in the empty set.
        const auto clash = mixing_defect(sys, {{0, 0}, {1, 0}}, {CylinderSpec{{{0, 0}, 0}}, CylinderSpec{{{-1, 0}, 1}}}, {1});
        CHECK(clash.entries[0].measured == 0);
    }

    TEST_CASE("ideal supports in a small box")
    {
        const auto sys = system_of(R"({"p":2,"d":2,"generators":["1+u+v"]})");
        const auto found = ideal_support_search(sys, Box::cube(2, 3), 3);
        REQUIRE(found.size() == 2);
        CHECK(found[0] == SupportSet{{{0, 0}, {0, 1}, {1, 0}}});
        CHECK(found[1] == SupportSet{{{0, 0}, {0, 2}, {2, 0}}});
        CHECK(ideal_support_search(sys, Box::cube(2, 3), 2).empty());
        CHECK_THROWS_AS(ideal_support_search(sys, Box::cube(2, 65), 3), BudgetError);
    }

    TEST_CASE("every support found is nonmixing")
    {
        const auto sys = system_of(R"({"p":2,"d":2,"generators":["1+u+v"]})");
        const CylinderSpec b{{{0, 0}, 0}};
        for (const auto& s : ideal_support_search(sys, Box::cube(2, 5), 3)) {
            const std::vector<Exponent> shape(s.points.begin(), s.points.end());
            const auto t = mixing_defect(sys, shape, {b}, {1, 2, 4});
            for (const auto& e : t.entries) CHECK(e.defect != 0);
        }
    }

    TEST_CASE("window entropy of a single generator")
    {
        const auto sys = system_of(R"({"p":2,"d":2,"generators":["1+u+v"]})");
        const auto t = window_entropy_trace(sys, {2, 4, 8});
        REQUIRE(t.expected_limit);
        CHECK(*t.expected_limit == 0.0);
        for (const auto& e : t.entries) {
            CHECK(e.free_dimension == static_cast<std::size_t>(2 * e.n - 1));
            CHECK(e.rate == doctest::Approx((2.0 * static_cast<double>(e.n) - 1) * std::log(2.0) / static_cast<double>(e.n * e.n)));
        }
    }

    TEST_CASE("Frobenius dilation")
    {
        const auto f = parse_poly("1+u+v", 2, CoeffRing::prime_field(2));
        CHECK(frobenius_dilate(f, 3) == parse_poly("1+u^8+v^8", 2, CoeffRing::prime_field(2)));
        const auto g = parse_poly("1+2u", 1, CoeffRing::prime_field(3));
        CHECK(frobenius_dilate(g, 1) == parse_poly("1+2u^3", 1, CoeffRing::prime_field(3)));
        CHECK_THROWS_AS(frobenius_dilate(parse_poly("1+u", 1), 1), InputError);
    }

    TEST_CASE("validation")
    {
        CHECK_THROWS_AS(system_of(R"({"p":4,"d":2,"generators":["1+u+v"]})"), InputError);
        CHECK_THROWS_AS(system_of(R"({"p":2,"d":2,"generators":[]})"), InputError);
        CHECK_THROWS_AS(system_of(R"({"p":2,"d":2,"generators":["2+2u"]})"), InputError);
        const auto sys = system_of(R"({"p":2,"d":2,"generators":["1+u+v"]})");
        CHECK(to_json(sys)["p"] == 2);
        CHECK_THROWS_AS(cylinder_measure(sys, {}), InputError);
    }
}

TEST_SUITE("fp_shift examples")
{
    TEST_CASE("window count examples")
    {
        const auto led = system_of(R"({"p":2,"d":2,"generators":["1+u+v"]})");
        const auto w = window_count(led, Box::cube(2, 4));
        CHECK(w.constraint_rank == 9);
        CHECK(w.free_dimension == 7);
        CHECK(w.discrepancy_bound > 0);
        CHECK(window_count(system_of(R"({"p":2,"d":2,"generators":["1"]})"), Box::cube(2, 5)).free_dimension == 0);
        for (int n : {1, 5, 20}) {
            CHECK(window_count(system_of(R"({"p":3,"d":1,"generators":["1+u"]})"), Box::cube(1, n)).free_dimension == 1);
            CHECK(window_count(system_of(R"({"p":2,"d":1,"generators":["1+u"]})"), Box::cube(1, n)).free_dimension == 1);
        }
    }

    TEST_CASE("Ledrappier pair measures and pairwise mixing")
    {
        const auto sys = system_of(R"({"p":2,"d":2,"generators":["1+u+v"]})");
        CHECK(cylinder_measure(sys, {{{0, 0}, 0}, {{2, 0}, 0}}).value == mpq_class(1, 4));
        CHECK(cylinder_measure(sys, {{{0, 0}, 0}, {{2, 0}, 0}, {{0, 2}, 0}}).value == mpq_class(1, 4));
        std::vector<std::int64_t> ks;
        for (std::int64_t k = 2; k <= 64; ++k) ks.push_back(k);
        const CylinderSpec b{{{0, 0}, 0}};
        for (const auto& e : mixing_defect(sys, {{0, 0}, {1, 0}}, {b}, ks).entries) CHECK(e.defect == 0);
        for (const auto& e : mixing_defect(sys, {{0, 0}}, {b}, {1, 5}).entries) CHECK(e.defect == 0);
    }

    TEST_CASE("one-variable supports and Frobenius examples")
    {
        const auto sys = system_of(R"({"p":2,"d":1,"generators":["u-1"]})");
        const auto found = ideal_support_search(sys, Box::cube(1, 4), 2);
        REQUIRE(found.size() == 3);
        for (std::int64_t k = 1; k <= 3; ++k) CHECK(found[static_cast<std::size_t>(k - 1)] == SupportSet{{{0}, {k}}});
        const auto f = parse_poly("1+u+u*v", 2, CoeffRing::prime_field(2));
        CHECK(frobenius_dilate(f, 0) == f);
        CHECK(frobenius_dilate(parse_poly("1+u", 1, CoeffRing::prime_field(3)), 1) == parse_poly("1+u^3", 1, CoeffRing::prime_field(3)));
    }

    TEST_CASE("window entropy of 1+u in one variable")
    {
        const auto t = window_entropy_trace(system_of(R"({"p":2,"d":1,"generators":["1+u"]})"), {1, 2, 8, 64});
        for (const auto& e : t.entries) CHECK(e.rate_over_log_p == mpq_class(1, e.n));
    }
}
