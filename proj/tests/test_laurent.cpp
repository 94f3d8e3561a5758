#include "doctest.h"

#include <cmath>

#include "algdyn/error.hpp"
#include "algdyn/exact_linalg.hpp"
#include "algdyn/grid.hpp"
#include "algdyn/laurent.hpp"
#include "algdyn/number_theory.hpp"
#include "oracles.hpp"

using namespace algdyn;

TEST_SUITE("laurent")
{
    TEST_CASE("parsing the example polynomials")
    {
        const auto f = parse_poly("3-u-u^-1-v-v^-1", 2);
        CHECK(f.size() == 5);
        CHECK(f.coeff({0, 0}) == 3);
        CHECK(f.coeff({-1, 0}) == -1);
        CHECK(f.coeff({0, -1}) == -1);

        const auto g = parse_poly("1+u+u^2+uv+v^2", 2);
        CHECK(g.coeff({1, 1}) == 1);
        CHECK(g.coeff({0, 2}) == 1);

        const auto h = parse_poly("u1^2*u4^-1", 4);
        CHECK(h.coeff({2, 0, 0, -1}) == 1);

        CHECK(parse_poly("2*u-3", 1) == parse_poly("-3+2u", 1));
        CHECK(parse_poly("6/3*u", 1).coeff({1}) == 2);
    }

    TEST_CASE("parse errors carry a position")
    {
        CHECK_THROWS_AS(parse_poly("2*u-", 1), ParseError);
        CHECK_THROWS_AS(parse_poly("1/2*u", 1), InputError);   // not integral over Z
        CHECK_THROWS_AS(parse_poly("u+w", 2), InputError);     // w is not a variable in d = 2
        try {
            parse_poly("1+u+?", 1);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.position() == 4);
        }
    }

    TEST_CASE("fractions over F_p need a unit denominator")
    {
        const auto f = parse_poly("1/2+u", 1, CoeffRing::prime_field(3));
        CHECK(f.coeff({0}) == 2);   // 1/2 = 2 mod 3
        CHECK_THROWS_AS(parse_poly("1/3+u", 1, CoeffRing::prime_field(3)), InputError);
        CHECK_THROWS_AS(CoeffRing::prime_field(4), InputError);
    }

    TEST_CASE("arithmetic")
    {
        const auto f = parse_poly("1+u+v", 2);
        CHECK(f * f == parse_poly("1+2u+2v+u^2+2uv+v^2", 2));
        CHECK(f.pow(3) == f * f * f);
        CHECK((f - f).is_zero());
        CHECK(f.shifted({1, -1}) == parse_poly("u*v^-1+u^2*v^-1+u", 2));
        CHECK(f.l1_norm() == 3.0);
        CHECK(f.min_exponents() == Exponent{0, 0});
        CHECK(f.max_exponents() == Exponent{1, 1});
    }

    TEST_CASE("reduction mod p and Frobenius in characteristic 2")
    {
        const auto f = parse_poly("1+u+v", 2).reduced_mod(2);
        CHECK(f * f == parse_poly("1+u^2+v^2", 2, CoeffRing::prime_field(2)));
        CHECK(parse_poly("3+2u", 1).reduced_mod(2) == LaurentPoly::constant(1, 1, CoeffRing::prime_field(2)));
    }

    TEST_CASE("involute and support")
    {
        const auto f = parse_poly("2+u-3v^2", 2);
        const auto g = involute(f);
        CHECK(g == parse_poly("2+u^-1-3v^-2", 2));
        CHECK(involute(g) == f);
        CHECK(support(g).points == std::set<Exponent>{{0, 0}, {-1, 0}, {0, -2}});
        const SupportSet s{{{3, 1}, {4, 1}, {3, 2}}};
        CHECK(s.canonical() == SupportSet{{{0, 0}, {1, 0}, {0, 1}}});
        CHECK(s.canonical().dilated(2) == SupportSet{{{0, 0}, {2, 0}, {0, 2}}});
    }

    TEST_CASE("exact quotient")
    {
        const auto f = parse_poly("1+u+v", 2), g = parse_poly("2-u^-1", 2);
        const auto q = exact_quotient(f * g, f);
        REQUIRE(q);
        CHECK(*q == g);
        CHECK_FALSE(exact_quotient(f, parse_poly("2+u", 2)));
        CHECK_FALSE(exact_quotient(parse_poly("1+u", 1), LaurentPoly::constant(1, 2)));   // not over Z
        const auto q2 = exact_quotient(parse_poly("1+u", 1, CoeffRing::prime_field(3)),
                                       LaurentPoly::constant(1, 2, CoeffRing::prime_field(3)));
        REQUIRE(q2);
        CHECK(*q2 == parse_poly("2+2u", 1, CoeffRing::prime_field(3)));
    }

    TEST_CASE("JSON round trip")
    {
        const auto f = parse_poly("3-u-u^-1-v-v^-1", 2);
        CHECK(poly_from_json(to_json(f)) == f);
        const auto g = parse_poly("1+u+v", 2, CoeffRing::prime_field(2));
        CHECK(poly_from_json(to_json(g)) == g);
    }
}

TEST_SUITE("grid")
{
    TEST_CASE("values at the four points of Omega_2^2")
    {
        const auto f = parse_poly("1+u+v", 2);
        const auto e = grid_eval(f, GridSpec::square(2, 2));
        REQUIRE(e.values.size() == 4);
        // Row-major: (1,1), (1,-1), (-1,1), (-1,-1).
        const double expected[] = {3, 1, 1, -1};
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(std::abs(e.values[i] - std::complex<double>(expected[i], 0)) < 1e-14);
            CHECK(std::abs(e.values[i] - oracle::evaluate_at(f, {2, 2}, e.spec.unflatten(i))) < 1e-14);
        }
        CHECK(e.certified_zeros == 0);
    }

    TEST_CASE("certified zeros of 1+u+v on Omega_3^2")
    {
        const auto f = parse_poly("1+u+v", 2);
        const auto e = grid_eval(f, GridSpec::square(3, 2));
        CHECK(e.certified_zeros == 2);
        const GridSpec spec = GridSpec::square(3, 2);
        CHECK(e.zero_mask[1 * 3 + 2] == 1);
        CHECK(e.zero_mask[2 * 3 + 1] == 1);
        CHECK(certify_zero(f, spec, {1, 2}) == ZeroCertificate::exact_zero);
        CHECK(certify_zero(f, spec, {0, 0}) == ZeroCertificate::nonzero);
        CHECK(point_order(spec, {1, 2}) == 3);
    }

    TEST_CASE("exponents wrap modulo the grid order")
    {
        const auto f = parse_poly("u^7-2*v^-5", 2);
        const auto e = grid_eval(f, GridSpec{{5, 3}});
        for (std::size_t i = 0; i < e.values.size(); ++i)
            CHECK(std::abs(e.values[i] - oracle::evaluate_at(f, {5, 3}, e.spec.unflatten(i))) < 1e-13);
    }

    TEST_CASE("budget and zero orders are rejected")
    {
        GridOptions small;
        small.max_points = 100;
        CHECK_THROWS_AS(grid_eval(parse_poly("1+u", 1), GridSpec{{101}}, small), BudgetError);
        CHECK_THROWS_AS(GridSpec({{0, 3}}).size(), InputError);
        CHECK_THROWS_AS(grid_eval(parse_poly("1+u", 1), GridSpec::square(4, 2)), InputError);
    }

    TEST_CASE("threads do not change the values")
    {
        const auto f = parse_poly("3-u-u^-1-v-v^-1", 2);
        GridOptions par;
        par.threads = 3;
        const auto a = grid_eval(f, GridSpec::square(60, 2)), b = grid_eval(f, GridSpec::square(60, 2), par);
        CHECK(a.values == b.values);
        CHECK(a.zero_mask == b.zero_mask);
    }
}

TEST_SUITE("number theory and exact linear algebra")
{
    TEST_CASE("cyclotomic polynomials")
    {
        CHECK(cyclotomic_polynomial(1) == ZCoeffs{-1, 1});
        CHECK(cyclotomic_polynomial(6) == ZCoeffs{1, -1, 1});
        CHECK(cyclotomic_polynomial(12) == ZCoeffs{1, 0, -1, 0, 1});
        CHECK(cyclotomic_polynomial(105).size() == 49);
    }

    TEST_CASE("primality and factoring")
    {
        CHECK(is_prime(2));
        CHECK_FALSE(is_prime(1));
        CHECK(is_prime(mpz_class("170141183460469231731687303715884105727")));
        const auto fac = factor_integer(mpz_class("600851475143"));
        REQUIRE(fac.size() == 4);
        CHECK(fac.back().first == 6857);
        CHECK(factor_integer(360) == std::vector<std::pair<mpz_class, unsigned>>{{2, 3}, {3, 2}, {5, 1}});
        CHECK(padic_valuation(48, 2) == 4);
    }

    TEST_CASE("Bareiss determinant against the 2x2 formula")
    {
        IntMatrix m(2, 2);
        m(0, 0) = 7;
        m(0, 1) = -3;
        m(1, 0) = 5;
        m(1, 1) = 11;
        CHECK(bareiss_determinant(m) == 7 * 11 - (-3) * 5);
        IntMatrix z(3, 3);
        z(0, 1) = 1;
        z(1, 2) = 1;
        z(2, 0) = 1;
        CHECK(bareiss_determinant(z) == 1);
    }

    TEST_CASE("rational matrices")
    {
        const auto a = parse_rational_matrix("0,-1;1,6/5");
        CHECK(a(1, 1) == mpq_class(6, 5));
        CHECK(a * inverse(a) == RationalMatrix::identity(2));
        CHECK(rational_matrix_from_json(nlohmann::json::parse(R"([[0,-1],[1,"6/5"]])")) == a);
        CHECK_THROWS_AS(to_integer_matrix(a), InputError);
        CHECK_THROWS_AS(inverse(parse_rational_matrix("1,2;2,4")), InputError);
    }
}

TEST_SUITE("laurent examples")
{
    TEST_CASE("zero, products and identities")
    {
        CHECK(parse_poly("0", 1).is_zero());
        CHECK(parse_poly("u-1", 1) * parse_poly("u+1", 1) == parse_poly("u^2-1", 1));
        const auto f = parse_poly("3-u-u^-1-v-v^-1", 2);
        CHECK(f * LaurentPoly::constant(2, 1) == f);
        CHECK(involute(f) == f);
        CHECK(involute(parse_poly("2*u-3", 1)) == parse_poly("2*u^-1-3", 1));
        CHECK(involute(parse_poly("1+u+v", 2)) == parse_poly("1+u^-1+v^-1", 2));
    }

    TEST_CASE("constants evaluate to themselves")
    {
        const auto e = grid_eval(LaurentPoly::constant(2, -7), GridSpec{{5, 4}});
        for (const auto& z : e.values) CHECK(std::abs(z - std::complex<double>(-7, 0)) < 1e-14);
        CHECK(e.certified_zeros == 0);
    }
}
