#include "algdyn/grid.hpp"

#include <fftw3.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include "algdyn/error.hpp"
#include "algdyn/number_theory.hpp"

namespace algdyn {

namespace {

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

std::uint64_t mod_floor(std::int64_t a, std::uint64_t m)
{
    auto r = a % static_cast<std::int64_t>(m);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(m) : r);
}

// Exponent of zeta_L representing each coordinate of the grid point.
std::vector<std::uint64_t> root_exponents(const GridSpec& spec, const std::vector<std::size_t>& index, std::uint64_t order)
{
    std::vector<std::uint64_t> t(spec.dim());
    for (std::size_t j = 0; j < spec.dim(); ++j) {
        const std::uint64_t n = spec.orders[j];
        const std::uint64_t k = index[j] % n;
        const std::uint64_t g = std::gcd(k, n);
        const std::uint64_t o = n / g;
        t[j] = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k / g) * (order / o)) % order);
    }
    return t;
}

// Exponent of zeta_L carried by the monomial u^m at the point.
std::uint64_t monomial_angle(const Exponent& m, const std::vector<std::uint64_t>& t, std::uint64_t order)
{
    unsigned __int128 e = 0;
    for (std::size_t j = 0; j < m.size(); ++j) e += static_cast<unsigned __int128>(mod_floor(m[j], order)) * t[j];
    return static_cast<std::uint64_t>(e % order);
}

template <class Real>
bool clearly_nonzero(const LaurentPoly& f, const std::vector<std::uint64_t>& t, std::uint64_t order, const Real& tolerance)
{
    const Real two_pi = 2 * boost::math::constants::pi<Real>();
    Real re = 0, im = 0;
    for (const auto& [m, c] : f.terms()) {
        const Real angle = two_pi * Real(monomial_angle(m, t, order)) / Real(order);
        const Real coeff(c.get_str());
        re += coeff * cos(angle);
        im += coeff * sin(angle);
    }
    return sqrt(re * re + im * im) > tolerance;
}

} // namespace

std::size_t GridSpec::size() const
{
    if (orders.empty()) throw InputError("grid spec has no dimensions");
    std::size_t total = 1;
    for (auto n : orders) {
        if (n == 0) throw InputError("grid order must be positive");
        if (total > std::numeric_limits<std::size_t>::max() / n) throw BudgetError("grid size overflows");
        total *= n;
    }
    return total;
}

std::vector<std::size_t> GridSpec::unflatten(std::size_t flat) const
{
    std::vector<std::size_t> idx(dim());
    for (std::size_t j = dim(); j-- > 0;) {
        idx[j] = flat % orders[j];
        flat /= orders[j];
    }
    return idx;
}

std::uint64_t point_order(const GridSpec& spec, const std::vector<std::size_t>& index)
{
    std::uint64_t order = 1;
    for (std::size_t j = 0; j < spec.dim(); ++j) {
        const std::uint64_t n = spec.orders[j];
        order = std::lcm(order, n / std::gcd<std::uint64_t>(index[j] % n, n));
    }
    return order;
}

ZeroCertificate certify_zero(const LaurentPoly& f, const GridSpec& spec, const std::vector<std::size_t>& index)
{
    if (f.dim() != spec.dim()) throw InputError("polynomial and grid dimensions differ");
    if (f.is_zero()) return ZeroCertificate::exact_zero;
    const std::uint64_t order = point_order(spec, index);
    const auto t = root_exponents(spec, index, order);

    if (order <= exact_certification_limit) {
        // f(point) = P(zeta_L) with deg P < L; zero iff Phi_L divides P.
        ZCoeffs poly(order, 0);
        for (const auto& [m, c] : f.terms()) poly[monomial_angle(m, t, order)] += c;
        const ZCoeffs& phi = cyclotomic_polynomial(order);
        const std::size_t deg = phi.size() - 1;
        for (std::size_t i = poly.size(); i-- > deg;) {
            if (poly[i] == 0) continue;
            const mpz_class c = poly[i];
            for (std::size_t j = 0; j <= deg; ++j) poly[i - deg + j] -= c * phi[j];
        }
        for (const auto& c : poly)
            if (c != 0) return ZeroCertificate::nonzero;
        return ZeroCertificate::exact_zero;
    }

    using namespace boost::multiprecision;
    const double scale = f.l1_norm() * static_cast<double>(f.size());
    using Medium = number<cpp_bin_float<50>>;
    if (clearly_nonzero<Medium>(f, t, order, Medium(scale) * Medium("1e-45"))) return ZeroCertificate::nonzero;
    if (clearly_nonzero<cpp_bin_float_100>(f, t, order, cpp_bin_float_100(scale) * cpp_bin_float_100("1e-62")))
        return ZeroCertificate::nonzero;
    return ZeroCertificate::precision_zero;
}

GridEvaluation grid_eval(const LaurentPoly& f, const GridSpec& spec, const GridOptions& opts)
{
    if (!f.ring().is_integers()) throw InputError("grid evaluation needs integer coefficients");
    if (f.dim() != spec.dim())
        throw InputError("polynomial dimension " + std::to_string(f.dim()) + " does not match grid dimension " +
                         std::to_string(spec.dim()));
    const std::size_t total = spec.size();
    if (total > opts.max_points)
        throw BudgetError("grid of " + std::to_string(total) + " points exceeds budget of " +
                          std::to_string(opts.max_points));

    auto* buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total));
    if (!buffer) throw BudgetError("cannot allocate grid buffer");
    std::fill_n(reinterpret_cast<double*>(buffer), 2 * total, 0.0);

    // Exponents wrap mod n_j: u_j^{n_j} = 1 on Omega_{n_j}.
    for (const auto& [m, c] : f.terms()) {
        std::size_t flat = 0;
        for (std::size_t j = 0; j < spec.dim(); ++j) flat = flat * spec.orders[j] + mod_floor(m[j], spec.orders[j]);
        buffer[flat][0] += c.get_d();
    }

    std::vector<int> dims(spec.orders.begin(), spec.orders.end());
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);

    GridEvaluation out;
    out.spec = spec;
    out.values.resize(total);
    for (std::size_t i = 0; i < total; ++i) out.values[i] = {buffer[i][0], buffer[i][1]};
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buffer);

    // FFT error is O(eps log|K| ||f||_1); anything far above it is a certified nonzero.
    const double l1 = f.l1_norm();
    const double fft_bound = 64.0 * std::numeric_limits<double>::epsilon() * std::log2(2.0 + static_cast<double>(total)) * l1;
    out.candidate_threshold = std::max(1e-9 * l1, 1e3 * fft_bound);
    out.zero_mask.assign(total, 0);
    for (std::size_t i = 0; i < total; ++i) {
        if (std::abs(out.values[i]) > out.candidate_threshold) continue;
        ++out.candidates_checked;
        const auto cert = certify_zero(f, spec, spec.unflatten(i));
        if (cert == ZeroCertificate::nonzero) continue;
        out.zero_mask[i] = 1;
        ++out.certified_zeros;
        if (cert == ZeroCertificate::precision_zero) ++out.precision_zeros;
    }
    return out;
}

} // namespace algdyn
