#include "algdyn/number_theory.hpp"

#include <algorithm>
#include <map>
#include <mutex>

#include "algdyn/error.hpp"

namespace algdyn {

namespace {

// Exact division of integer polynomials by a monic divisor.
ZCoeffs divide_monic(ZCoeffs num, const ZCoeffs& den)
{
    const std::size_t dn = den.size() - 1;
    if (num.size() < den.size()) return {0};
    ZCoeffs q(num.size() - dn, 0);
    for (std::size_t i = num.size(); i-- > dn;) {
        mpz_class c = num[i];
        q[i - dn] = c;
        if (c == 0) continue;
        for (std::size_t j = 0; j <= dn; ++j) num[i - dn + j] -= c * den[j];
    }
    return q;
}

mpz_class pollard_brent(const mpz_class& n)
{
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        mpz_class y = 2, x, g = 1, q = 1, ys;
        std::size_t r = 1;
        const std::size_t m = 128;
        auto step = [&](mpz_class& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        while (g == 1) {
            x = y;
            for (std::size_t i = 0; i < r; ++i) step(y);
            std::size_t k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (std::size_t i = 0; i < std::min(m, r - k); ++i) {
                    step(y);
                    q = q * abs(x - y);
                    mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                }
                g = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                step(ys);
                g = gcd(abs(x - ys), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(const mpz_class& n, std::map<mpz_class, unsigned>& out)
{
    if (n == 1) return;
    if (is_prime(n)) {
        ++out[n];
        return;
    }
    mpz_class d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

} // namespace

const ZCoeffs& cyclotomic_polynomial(std::uint64_t n)
{
    static std::mutex mutex;
    static std::map<std::uint64_t, ZCoeffs> cache;
    if (n == 0) throw InputError("cyclotomic polynomial of order 0");
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;

    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d
    ZCoeffs num(n + 1, 0);
    num[0] = -1;
    num[n] = 1;
    std::vector<std::uint64_t> divisors;
    for (std::uint64_t d = 1; d < n; ++d)
        if (n % d == 0) divisors.push_back(d);
    for (auto d : divisors) {
        const ZCoeffs* phi_d;
        if (auto it = cache.find(d); it != cache.end()) {
            phi_d = &it->second;
        } else {
            // Divisors are processed in increasing order, so their own divisors are cached.
            ZCoeffs m(d + 1, 0);
            m[0] = -1;
            m[d] = 1;
            for (std::uint64_t e = 1; e < d; ++e)
                if (d % e == 0) m = divide_monic(m, cache.at(e));
            phi_d = &cache.emplace(d, m).first->second;
        }
        num = divide_monic(num, *phi_d);
    }
    return cache.emplace(n, std::move(num)).first->second;
}

bool is_prime(const mpz_class& n)
{
    if (n < 2) return false;
    static const unsigned small_primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    for (unsigned p : small_primes) {
        if (n == p) return true;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
    }
    static const mpz_class deterministic_bound("3317044064679887385961981");
    if (n >= deterministic_bound) return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;

    mpz_class d = n - 1;
    unsigned s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d /= 2;
        ++s;
    }
    const mpz_class n_minus_1 = n - 1;
    for (unsigned a : small_primes) {
        mpz_class x;
        mpz_class base = a;
        mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
        if (x == 1 || x == n_minus_1) continue;
        bool witness = true;
        for (unsigned r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == n_minus_1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<std::pair<mpz_class, unsigned>> factor_integer(mpz_class n)
{
    n = abs(n);
    if (n == 0) throw InputError("cannot factor 0");
    std::map<mpz_class, unsigned> found;
    for (unsigned long p = 2; p < 10000 && p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            ++found[p];
            n /= p;
        }
    }
    if (n > 1) factor_into(n, found);
    return {found.begin(), found.end()};
}

unsigned padic_valuation(const mpz_class& n, const mpz_class& p)
{
    if (n == 0) throw InputError("valuation of zero");
    mpz_class r;
    return static_cast<unsigned>(mpz_remove(r.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

} // namespace algdyn
