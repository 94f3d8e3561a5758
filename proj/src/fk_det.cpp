#include "algdyn/fk_det.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "algdyn/error.hpp"
#include "algdyn/mahler_local.hpp"
#include "algdyn/mahler_torus.hpp"

namespace algdyn {

namespace {

std::vector<GroupElement> ball(const GroupSpec& g, std::int64_t r)
{
    std::vector<GroupElement> out;
    if (g.kind == GroupSpec::Kind::heisenberg) {
        for (std::int64_t a = -r; a <= r; ++a)
            for (std::int64_t b = -r; b <= r; ++b)
                for (std::int64_t c = -r * r; c <= r * r; ++c) out.push_back({a, b, c});
        return out;
    }
    GroupElement x(g.d, -r);
    while (true) {
        out.push_back(x);
        std::size_t j = g.d;
        while (j-- > 0) {
            if (++x[j] <= r) break;
            x[j] = -r;
        }
        if (j == static_cast<std::size_t>(-1)) break;
    }
    return out;
}

double ball_size(const GroupSpec& g, std::int64_t r)
{
    const double side = static_cast<double>(2 * r + 1);
    if (g.kind == GroupSpec::Kind::heisenberg) return side * side * static_cast<double>(2 * r * r + 1);
    return std::pow(side, static_cast<double>(g.d));
}

// Coordinates along which the group maps onto Z (a, b for Heisenberg).
std::size_t abelian_coordinates(const GroupSpec& g)
{
    return g.kind == GroupSpec::Kind::heisenberg ? 2 : g.d;
}

} // namespace

LogDetEstimate finite_section_logdet(const GroupRingElement& f, std::int64_t radius, std::size_t max_section)
{
    if (radius < 1) throw InputError("section radius must be at least 1");
    if (f.is_zero()) throw InputError("log det of the zero element is -infinity");
    const GroupSpec& g = f.group();
    if (ball_size(g, radius) > static_cast<double>(max_section))
        throw BudgetError("section of size " + std::to_string(static_cast<std::size_t>(ball_size(g, radius))) +
                          " exceeds budget " + std::to_string(max_section));
    const auto elems = ball(g, radius);
    const std::size_t n = elems.size();
    std::map<GroupElement, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) index.emplace(elems[i], i);

    // M[eta][xi] = sum over gamma with xi gamma = eta of f_gamma.
    std::vector<double> m(n * n, 0.0);
    std::vector<std::size_t> row_nnz(n, 0), col_nnz(n, 0);
    std::size_t truncated_columns = 0;
    for (std::size_t col = 0; col < n; ++col) {
        bool truncated = false;
        for (const auto& [gamma, c] : f.terms()) {
            const auto it = index.find(group_mul(elems[col], gamma, g));
            if (it == index.end()) {
                truncated = true;
                continue;
            }
            double& entry = m[it->second * n + col];
            if (entry == 0.0) {
                ++row_nnz[it->second];
                ++col_nnz[col];
            }
            entry += c.get_d();
        }
        truncated_columns += truncated ? 1 : 0;
    }

    std::vector<double> sigma;
    const bool monomial_pattern = std::all_of(row_nnz.begin(), row_nnz.end(), [](std::size_t k) { return k <= 1; }) &&
                                  std::all_of(col_nnz.begin(), col_nnz.end(), [](std::size_t k) { return k <= 1; });
    if (monomial_pattern) {
        // Generalized partial permutation: singular values are the entry moduli.
        for (double x : m)
            if (x != 0.0) sigma.push_back(std::abs(x));
        sigma.resize(n, 0.0);
        std::sort(sigma.begin(), sigma.end(), std::greater<>());
    } else {
        // f and f* give mutually transposed sections; factor the lexicographically smaller one.
        std::vector<double> mt(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) mt[j * n + i] = m[i * n + j];
        if (std::lexicographical_compare(mt.begin(), mt.end(), m.begin(), m.end())) m.swap(mt);
        sigma.assign(n, 0.0);
        const lapack_int info = LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n),
                                               static_cast<lapack_int>(n), m.data(), static_cast<lapack_int>(n),
                                               sigma.data(), nullptr, 1, nullptr, 1);
        if (info != 0) throw ConvergenceError("singular value computation failed (info " + std::to_string(info) + ")", 0.0);
    }

    LogDetEstimate e;
    e.method = "finite-section";
    e.radius = radius;
    e.section_size = n;
    e.sigma_max = sigma.front();
    e.sigma_floor = 1e-12 * e.sigma_max;
    double sum = 0.0, min_kept = e.sigma_max;
    for (double s : sigma) {
        if (s > e.sigma_floor) {
            sum += std::log(s);
            min_kept = std::min(min_kept, s);
        } else {
            ++e.discarded;
        }
    }
    if (e.discarded == n) throw ConvergenceError("all singular values fall below the floor", 0.0);
    const double inv_n = 1.0 / static_cast<double>(n);
    e.value = sum * inv_n;
    // Heuristic: boundary columns times the log spread, plus discarded mass at the floor.
    e.error_indicator = static_cast<double>(truncated_columns) * inv_n *
                            (std::abs(std::log(e.sigma_max)) + std::abs(std::log(min_kept))) +
                        static_cast<double>(e.discarded) * inv_n * std::abs(std::log(e.sigma_floor));
    return e;
}

bool is_lopsided(const GroupRingElement& f)
{
    const auto e = group_identity(f.group());
    mpz_class rest = 0;
    for (const auto& [g, c] : f.terms())
        if (g != e) rest += abs(c);
    return abs(f.coeff(e)) > rest;
}

LogDetEstimate trace_series_logdet(const GroupRingElement& f, unsigned order)
{
    if (order < 1 || order > max_trace_series_order)
        throw InputError("trace series order must lie in 1.." + std::to_string(max_trace_series_order));
    if (!is_lopsided(f)) throw InputError("f is not lopsided: |f_e| must exceed the sum of the other |f_g|");
    const GroupSpec& spec = f.group();
    const GroupElement e = group_identity(spec);
    const mpz_class fe = f.coeff(e);

    GroupRingElement g(spec);
    mpz_class g_l1 = 0;
    for (const auto& [x, c] : f.terms())
        if (x != e) {
            g.add_term(x, c);
            g_l1 += abs(c);
        }

    // Reachability: an element can return to e in R more steps only if each abelian
    // coordinate x_i satisfies x_i + R lo_i <= 0 <= x_i + R hi_i.
    const std::size_t ab = abelian_coordinates(spec);
    std::vector<std::int64_t> lo(ab, 0), hi(ab, 0);
    bool first = true;
    for (const auto& [x, c] : g.terms()) {
        for (std::size_t i = 0; i < ab; ++i) {
            lo[i] = first ? x[i] : std::min(lo[i], x[i]);
            hi[i] = first ? x[i] : std::max(hi[i], x[i]);
        }
        first = false;
    }

    LogDetEstimate est;
    est.method = "trace-series";
    est.order = order;
    est.series = 0;
    GroupRingElement power(spec);
    power.add_term(e, 1);
    mpz_class fe_power = 1;
    for (unsigned k = 1; k <= order && !g.is_zero(); ++k) {
        const std::int64_t remaining = static_cast<std::int64_t>(order - k);
        GroupRingElement next(spec);
        for (const auto& [x, a] : power.terms())
            for (const auto& [y, b] : g.terms()) {
                GroupElement z = group_mul(x, y, spec);
                bool reachable = true;
                for (std::size_t i = 0; i < ab && reachable; ++i)
                    reachable = z[i] + remaining * lo[i] <= 0 && 0 <= z[i] + remaining * hi[i];
                if (reachable) next.add_term(z, a * b);
            }
        if (next.terms().size() > 5'000'000) throw BudgetError("trace series expansion exceeds 5e6 terms");
        power = std::move(next);
        fe_power *= fe;
        const mpz_class tau = power.coeff(e);
        if (tau != 0) {
            ++est.nonzero_returns;
            mpq_class term(tau, fe_power * k);
            term.canonicalize();
            if (k % 2 == 0) term = -term;
            est.series += term;
        }
        if (power.is_zero()) break;
    }
    const double q = mpq_class(g_l1, abs(fe)).get_d();
    est.tail_bound = std::pow(q, static_cast<double>(order + 1)) / (static_cast<double>(order + 1) * (1.0 - q));
    est.error_indicator = est.tail_bound;
    est.value = std::log(std::abs(fe.get_d())) + est.series.get_d();
    return est;
}

EstimatorComparison compare_estimators(const GroupRingElement& f, std::int64_t radius, unsigned order)
{
    EstimatorComparison c;
    c.finite_section = finite_section_logdet(f, radius);
    try {
        c.trace_series = trace_series_logdet(f, order);
    } catch (const InputError& err) {
        c.trace_series_refusal = err.what();
    }
    if (c.trace_series) c.gap = std::abs(c.finite_section->value - c.trace_series->value);
    if (f.group().kind == GroupSpec::Kind::free_abelian) {
        LaurentPoly p(f.group().d);
        for (const auto& [g, a] : f.terms()) p.add_term(g, a);
        if (p.dim() == 1) {
            c.reference = mahler_1d(IntPoly::from_laurent(p)).value;
            c.reference_method = "mahler_1d";
        } else if (p.dim() <= 3) {
            const std::size_t n = p.dim() == 2 ? 1024 : 96;
            const auto sched = square_schedule(p, n - 12, n, 1, true);
            c.reference = riemann_mahler(p, sched.back()).value;
            c.reference_method = "riemann_mahler n=" + std::to_string(sched.back().orders.front());
        }
    }
    return c;
}

nlohmann::json to_json(const LogDetEstimate& e)
{
    nlohmann::json j{{"method", e.method}, {"value", e.value}, {"error_indicator", e.error_indicator}};
    if (e.method == "finite-section") {
        j["radius"] = e.radius;
        j["section_size"] = e.section_size;
        j["discarded"] = e.discarded;
        j["sigma_max"] = e.sigma_max;
        j["sigma_floor"] = e.sigma_floor;
    } else {
        j["order"] = e.order;
        j["series"] = e.series.get_str();
        j["nonzero_returns"] = e.nonzero_returns;
        j["tail_bound"] = e.tail_bound;
    }
    return j;
}

nlohmann::json to_json(const EstimatorComparison& c)
{
    nlohmann::json j = nlohmann::json::object();
    j["finite_section"] = c.finite_section ? to_json(*c.finite_section) : nlohmann::json(nullptr);
    j["trace_series"] = c.trace_series ? to_json(*c.trace_series) : nlohmann::json(nullptr);
    if (c.trace_series_refusal) j["trace_series_refusal"] = *c.trace_series_refusal;
    j["gap"] = c.gap ? nlohmann::json(*c.gap) : nlohmann::json(nullptr);
    j["reference"] = c.reference ? nlohmann::json(*c.reference) : nlohmann::json(nullptr);
    if (c.reference) j["reference_method"] = c.reference_method;
    return j;
}

} // namespace algdyn
