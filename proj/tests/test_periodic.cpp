#include "doctest.h"

#include <cmath>

#include "algdyn/error.hpp"
#include "algdyn/mahler_local.hpp"
#include "algdyn/mahler_torus.hpp"
#include "algdyn/periodic.hpp"
#include "oracles.hpp"

using namespace algdyn;

namespace {

IntMatrix cat_map()
{
    IntMatrix a(2, 2);
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 1;
    return a;
}

// Lucas numbers: |det(A^n - I)| = L_n - 1 - (-1)^n for the cat map.
mpz_class lucas_count(std::uint64_t n)
{
    mpz_class a = 2, b = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        const mpz_class c = a + b;
        a = b;
        b = c;
    }
    return a - 1 - (n % 2 ? -1 : 1);
}

} // namespace

TEST_SUITE("periodic")
{
    TEST_CASE("toral counts of the cat map")
    {
        const auto a = cat_map();
        CHECK(toral_periodic_count(a, 1).count == 1);
        CHECK(toral_periodic_count(a, 5).count == 11);
        for (std::uint64_t n = 1; n <= 60; ++n) CHECK(toral_periodic_count(a, n).count == lucas_count(n));
    }

    TEST_CASE("identity has an infinite fixed set")
    {
        const auto c = toral_periodic_count(IntMatrix::identity(3), 4);
        CHECK(c.count == 0);
        CHECK(c.infinite_fixed_set);
    }

    TEST_CASE("growth rate of the cat map")
    {
        const auto t = growth_rate_trace(cat_map(), {10, 20, 50});
        const auto [big, small] = oracle::quadratic_roots(1, -1, -1);
        CHECK(t.target == doctest::Approx(std::log(big)).epsilon(1e-14));
        CHECK(std::abs(t.entries.back().rate - t.target) < 1e-2);
        CHECK_THROWS_AS(growth_rate_trace(cat_map(), {5, 3}), InputError);
    }

    TEST_CASE("block circulant determinant matches Bareiss")
    {
        for (const char* text : {"1+u+v", "3-u-u^-1-v-v^-1", "2+u-v^2+u*v", "5+u+u^-1+v+v^-1"})
            for (std::size_t n = 1; n <= 6; ++n) {
                const auto f = parse_poly(text, 2);
                INFO(text << " n=" << n);
                CHECK(block_circulant_determinant(f, n) == bareiss_determinant(block_circulant_matrix(f, n)));
            }
        const auto g = parse_poly("2*u-3", 1);
        for (std::size_t n = 1; n <= 12; ++n) {
            // prod over n-th roots of unity of (2w - 3) = (-1)^n (3^n - 2^n) up to sign.
            mpz_class expect;
            mpz_ui_pow_ui(expect.get_mpz_t(), 3, n);
            mpz_class two;
            mpz_ui_pow_ui(two.get_mpz_t(), 2, n);
            CHECK(abs(block_circulant_determinant(g, n)) == expect - two);
        }
    }

    TEST_CASE("principal counts for 1+u+v")
    {
        const auto f = parse_poly("1+u+v", 2);
        const auto c2 = principal_periodic_count(f, 2);
        REQUIRE(c2.exact_product);
        CHECK(*c2.exact_product == 3);
        CHECK(c2.component_rate == doctest::Approx(std::log(3.0) / 4));

        const auto c3 = principal_periodic_count(f, 3);
        CHECK(c3.degenerate);
        CHECK(*c3.exact_product == 0);
        CHECK(c3.excluded_points == 2);
        CHECK(std::isinf(c3.log_full_product));
        CHECK(c3.component_rate == doctest::Approx(4 * std::log(3.0) / 9));

        const auto c8 = principal_periodic_count(f, 8);
        CHECK(*c8.exact_product == mpz_class("1343091375"));
        CHECK(*c8.log_gap <= 1e-8);

        // Above the threshold only the floating product is reported.
        PeriodicOptions opts;
        opts.exact_threshold = 16;
        const auto c5 = principal_periodic_count(f, 5, opts);
        CHECK_FALSE(c5.exact_product);
        CHECK(c5.component_rate == riemann_mahler(f, GridSpec::square(5, 2)).value);
    }

    TEST_CASE("growth trace for a polynomial")
    {
        const auto t = growth_rate_trace(parse_poly("2*u-3", 1), {4, 16, 64});
        CHECK(t.target == doctest::Approx(std::log(3.0)));
        CHECK(t.target_method.find("mahler_1d") != std::string::npos);
        const auto csv = to_csv(t);
        CHECK(csv.rfind("n,count_or_log,normalized_rate,target,gap\n", 0) == 0);
    }

    TEST_CASE("log of large integers")
    {
        mpz_class big;
        mpz_ui_pow_ui(big.get_mpz_t(), 10, 5000);
        CHECK(log_abs(big) == doctest::Approx(5000 * std::log(10.0)));
        CHECK(log_abs(mpz_class(-7)) == doctest::Approx(std::log(7.0)));
    }
}

TEST_SUITE("periodic examples")
{
    TEST_CASE("constants and diagonal matrices")
    {
        const auto c = principal_periodic_count(LaurentPoly::constant(2, -6), 1);
        CHECK(*c.exact_product == 6);
        CHECK(c.component_rate == doctest::Approx(std::log(6.0)));
        IntMatrix two(2, 2);
        two(0, 0) = 2;
        two(1, 1) = 2;
        for (std::uint64_t n = 1; n <= 20; ++n) {
            mpz_class expect;
            mpz_ui_pow_ui(expect.get_mpz_t(), 2, n);
            expect -= 1;
            CHECK(toral_periodic_count(two, n).count == expect * expect);
        }
    }

    TEST_CASE("1+u+v rates up to n = 400")
    {
        std::vector<std::size_t> ns;
        for (std::size_t n = 50; n <= 400; n += 25)
            if (n % 3) ns.push_back(n);
        const auto t = growth_rate_trace(parse_poly("1+u+v", 2), ns);
        CHECK(std::abs(t.entries.back().rate - 0.3230) <= 5e-3);
    }

    TEST_CASE("cat map rates on n = 5, 10, ..., 50")
    {
        std::vector<std::size_t> ns;
        for (std::size_t n = 5; n <= 50; n += 5) ns.push_back(n);
        const auto t = growth_rate_trace(cat_map(), ns);
        CHECK(std::abs(t.entries.back().rate - 0.4812118250596) <= 1e-2);
    }
}
