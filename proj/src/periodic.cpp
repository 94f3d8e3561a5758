#include "algdyn/periodic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "algdyn/error.hpp"
#include "algdyn/mahler_local.hpp"
#include "algdyn/mahler_torus.hpp"
#include "algdyn/number_theory.hpp"

namespace algdyn {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 q) { return static_cast<u64>(static_cast<u128>(a) * b % q); }

u64 powmod(u64 a, u64 e, u64 q)
{
    u64 r = 1 % q;
    while (e) {
        if (e & 1) r = mulmod(r, a, q);
        a = mulmod(a, a, q);
        e >>= 1;
    }
    return r;
}

u64 reduce(const mpz_class& c, u64 q)
{
    mpz_class r = c % static_cast<unsigned long>(q);
    if (r < 0) r += static_cast<unsigned long>(q);
    return r.get_ui();
}

// Primitive n-th root of unity mod q, with n | q - 1.
u64 primitive_root_of_unity(u64 n, u64 q)
{
    std::vector<u64> prime_factors;
    for (const auto& [p, e] : factor_integer(mpz_class(static_cast<unsigned long>(n)))) prime_factors.push_back(p.get_ui());
    for (u64 g = 2; g < q; ++g) {
        const u64 w = powmod(g, (q - 1) / n, q);
        bool primitive = true;
        for (u64 p : prime_factors)
            if (powmod(w, n / p, q) == 1) primitive = false;
        if (primitive) return w;
    }
    throw ConsistencyError("no primitive root of unity modulo " + std::to_string(q));
}

// det mod q = product of f over the F_q-points (w^{k_1}, ..., w^{k_d}).
u64 determinant_mod(const LaurentPoly& f, std::size_t n, u64 q)
{
    const std::size_t d = f.dim();
    const u64 w = n == 1 ? 1 : primitive_root_of_unity(n, q);
    std::vector<u64> power(n);
    power[0] = 1;
    for (std::size_t i = 1; i < n; ++i) power[i] = mulmod(power[i - 1], w, q);
    std::vector<std::pair<std::vector<u64>, u64>> terms;
    for (const auto& [e, c] : f.terms()) {
        std::vector<u64> ex(d);
        for (std::size_t j = 0; j < d; ++j) {
            const auto r = e[j] % static_cast<std::int64_t>(n);
            ex[j] = static_cast<u64>(r < 0 ? r + static_cast<std::int64_t>(n) : r);
        }
        terms.emplace_back(ex, reduce(c, q));
    }
    const std::size_t total = GridSpec::square(n, d).size();
    std::vector<std::size_t> idx(d, 0);
    u64 det = 1;
    for (std::size_t flat = 0; flat < total; ++flat) {
        u64 value = 0;
        for (const auto& [ex, c] : terms) {
            u64 angle = 0;
            for (std::size_t j = 0; j < d; ++j) angle = (angle + ex[j] * idx[j]) % n;
            value = (value + mulmod(c, power[angle], q)) % q;
        }
        det = mulmod(det, value, q);
        if (det == 0) return 0;
        for (std::size_t j = d; j-- > 0;) {
            if (++idx[j] < n) break;
            idx[j] = 0;
        }
    }
    return det;
}

std::string count_or_log(const GrowthEntry& e)
{
    if (e.count) return e.count->get_str();
    std::ostringstream os;
    os.precision(17);
    os << e.log_count;
    return os.str();
}

} // namespace

double log_abs(const mpz_class& z)
{
    if (z == 0) return -std::numeric_limits<double>::infinity();
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(std::abs(mant)) + static_cast<double>(exp2) * std::numbers::ln2;
}

PeriodicCountToral toral_periodic_count(const IntMatrix& a, std::uint64_t n)
{
    if (!a.square() || a.rows() == 0) throw InputError("toral automorphism needs a nonempty square matrix");
    if (n == 0) throw InputError("period must be at least 1");
    const mpz_class det = bareiss_determinant(matrix_power(a, n) - IntMatrix::identity(a.rows()));
    PeriodicCountToral c{n, abs(det), det == 0};
    return c;
}

IntMatrix block_circulant_matrix(const LaurentPoly& f, std::size_t n)
{
    if (!f.ring().is_integers()) throw InputError("periodic counts need integer coefficients");
    const GridSpec spec = GridSpec::square(n, f.dim());
    const std::size_t total = spec.size();
    IntMatrix m(total, total);
    // Column xi holds f * u^xi, reduced mod u_j^n - 1.
    for (std::size_t col = 0; col < total; ++col) {
        const auto xi = spec.unflatten(col);
        for (const auto& [e, c] : f.terms()) {
            std::size_t row = 0;
            for (std::size_t j = 0; j < f.dim(); ++j) {
                auto r = (static_cast<std::int64_t>(xi[j]) + e[j]) % static_cast<std::int64_t>(n);
                if (r < 0) r += static_cast<std::int64_t>(n);
                row = row * n + static_cast<std::size_t>(r);
            }
            m(row, col) += c;
        }
    }
    return m;
}

mpz_class block_circulant_determinant(const LaurentPoly& f, std::size_t n)
{
    if (!f.ring().is_integers()) throw InputError("periodic counts need integer coefficients");
    if (n == 0) throw InputError("period must be at least 1");
    const std::size_t total = GridSpec::square(n, f.dim()).size();
    if (f.is_zero()) return 0;

    // Hadamard-type bound: |det| = prod |f(s)| <= ||f||_1^|K|.
    mpz_class l1 = 0;
    for (const auto& [e, c] : f.terms()) l1 += abs(c);
    mpz_class bound;
    mpz_pow_ui(bound.get_mpz_t(), l1.get_mpz_t(), static_cast<unsigned long>(total));

    mpz_class modulus = 1, residue = 0;
    // Primes q = k n + 1 just below 2^62, scanned downward.
    u64 k = ((u64{1} << 62) - 1) / n;
    while (modulus <= 2 * bound) {
        if (k == 0) throw BudgetError("ran out of primes for the modular determinant");
        const u64 q = k * n + 1;
        --k;
        if (!is_prime(mpz_class(static_cast<unsigned long>(q)))) continue;
        const u64 r = determinant_mod(f, n, q);
        // CRT: residue' = residue + modulus * t with residue' = r mod q.
        const u64 cur = reduce(residue, q);
        const u64 inv = powmod(reduce(modulus, q), q - 2, q);
        const u64 t = mulmod((r + q - cur) % q, inv, q);
        residue += modulus * static_cast<unsigned long>(t);
        modulus *= static_cast<unsigned long>(q);
    }
    if (residue > modulus / 2) residue -= modulus;
    return residue;
}

PeriodicCountPrincipal principal_periodic_count(const LaurentPoly& f, std::size_t n, const PeriodicOptions& opts)
{
    if (f.is_zero()) throw InputError("periodic count of the zero polynomial");
    if (n == 0) throw InputError("period must be at least 1");
    const GridSpec spec = GridSpec::square(n, f.dim());
    const auto eval = grid_eval(f, spec, opts.grid);

    PeriodicCountPrincipal out;
    out.n = n;
    out.dim = f.dim();
    out.degenerate = eval.certified_zeros > 0;
    out.excluded_points = eval.certified_zeros;
    if (eval.certified_zeros < eval.values.size()) {
        const auto r = riemann_mahler(eval, opts.grid);
        out.component_rate = r.value;
        out.log_full_product = out.degenerate ? -std::numeric_limits<double>::infinity() : r.log_abs_sum;
    } else {
        out.component_rate = std::numeric_limits<double>::quiet_NaN();
        out.log_full_product = -std::numeric_limits<double>::infinity();
    }

    if (spec.size() <= opts.exact_threshold) {
        const mpz_class det = abs(block_circulant_determinant(f, n));
        out.exact_product = det;
        if ((det == 0) != out.degenerate)
            throw ConsistencyError("exact determinant " + det.get_str() + " disagrees with certified zero count " +
                                   std::to_string(eval.certified_zeros) + " at n=" + std::to_string(n));
        if (det != 0) {
            out.log_gap = std::abs(log_abs(det) - out.log_full_product);
            if (*out.log_gap > opts.tolerance)
                throw ConsistencyError("exact and floating periodic products disagree at n=" + std::to_string(n) +
                                       ": log gap " + std::to_string(*out.log_gap));
        }
    }
    return out;
}

GrowthTrace growth_rate_trace(const IntMatrix& a, const std::vector<std::size_t>& n_list)
{
    if (n_list.empty()) throw InputError("empty period list");
    GrowthTrace t;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (i && n_list[i] <= n_list[i - 1]) throw InputError("period list must be increasing");
        const auto c = toral_periodic_count(a, n_list[i]);
        const double lg = log_abs(c.count);
        t.entries.push_back({n_list[i], c.count, lg, lg / static_cast<double>(n_list[i])});
    }
    t.target = mahler_1d(char_poly_data(to_rational_matrix(a)).cleared).value;
    t.target_method = "mahler_1d(char_poly)";
    return t;
}

GrowthTrace growth_rate_trace(const LaurentPoly& f, const std::vector<std::size_t>& n_list, const PeriodicOptions& opts)
{
    if (n_list.empty()) throw InputError("empty period list");
    GrowthTrace t;
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (i && n_list[i] <= n_list[i - 1]) throw InputError("period list must be increasing");
        PeriodicOptions o = opts;
        o.exact_threshold = 0;   // rates only; the exact path is exercised by principal_periodic_count
        const auto c = principal_periodic_count(f, n_list[i], o);
        t.entries.push_back({n_list[i], std::nullopt, c.log_full_product, c.component_rate});
    }
    if (f.dim() == 1) {
        t.target = mahler_1d(IntPoly::from_laurent(f)).value;
        t.target_method = "mahler_1d";
    } else {
        // Finest square grid of at most 2^22 points, coprime to the torsion orders of U(f).
        std::size_t n = 1;
        while (std::pow(static_cast<double>(n + 1), static_cast<double>(f.dim())) <= static_cast<double>(1 << 22)) ++n;
        const auto sched = square_schedule(f, std::max<std::size_t>(1, n - 12), n, 1, true);
        t.target = riemann_mahler(f, sched.back(), opts.grid).value;
        t.target_method = "riemann_mahler n=" + std::to_string(sched.back().orders.front());
    }
    return t;
}

nlohmann::json to_json(const PeriodicCountToral& c)
{
    return {{"n", c.n}, {"count", c.count.get_str()}, {"infinite_fixed_set", c.infinite_fixed_set}};
}

nlohmann::json to_json(const PeriodicCountPrincipal& c)
{
    nlohmann::json j{{"n", c.n},
                     {"d", c.dim},
                     {"degenerate", c.degenerate},
                     {"component_rate", c.component_rate},
                     {"excluded", c.excluded_points}};
    j["full_product"] = c.degenerate ? nlohmann::json("0")
                        : c.exact_product ? nlohmann::json(c.exact_product->get_str())
                                          : nlohmann::json(nullptr);
    j["log_full_product"] = c.degenerate ? nlohmann::json(nullptr) : nlohmann::json(c.log_full_product);
    j["exact_path"] = c.exact_product.has_value();
    j["log_gap"] = c.log_gap ? nlohmann::json(*c.log_gap) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const GrowthTrace& t)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : t.entries) {
        nlohmann::json row{{"n", e.n}, {"rate", e.rate}, {"gap", std::abs(e.rate - t.target)}};
        row["count"] = e.count ? nlohmann::json(e.count->get_str()) : nlohmann::json(nullptr);
        row["log_count"] = std::isfinite(e.log_count) ? nlohmann::json(e.log_count) : nlohmann::json(nullptr);
        rows.push_back(row);
    }
    return {{"trace", rows}, {"target", t.target}, {"target_method", t.target_method}};
}

std::string to_csv(const GrowthTrace& t)
{
    std::ostringstream os;
    os.precision(17);
    os << "n,count_or_log,normalized_rate,target,gap\n";
    for (const auto& e : t.entries)
        os << e.n << ',' << count_or_log(e) << ',' << e.rate << ',' << t.target << ',' << std::abs(e.rate - t.target)
           << '\n';
    return os.str();
}

} // namespace algdyn
