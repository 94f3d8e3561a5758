#include "algdyn/mahler_local.hpp"

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "algdyn/error.hpp"

namespace algdyn {

namespace {

using HpReal = boost::multiprecision::cpp_bin_float_100;
using HpComplex = boost::multiprecision::cpp_complex_100;
using QPoly = std::vector<mpq_class>;

// ---- polynomials over Q (low degree first, no trailing zeros; empty is 0) ----

void trim(QPoly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly derivative(const QPoly& a)
{
    QPoly d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<unsigned long>(i));
    trim(d);
    return d;
}

QPoly subtract(QPoly a, const QPoly& b)
{
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

std::pair<QPoly, QPoly> divmod(QPoly a, const QPoly& b)
{
    if (b.empty()) throw InputError("polynomial division by zero");
    QPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, 0);
    const mpq_class lead = b.back();
    while (a.size() >= b.size() && !a.empty()) {
        const std::size_t shift = a.size() - b.size();
        const mpq_class c = a.back() / lead;
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
        trim(a);
    }
    trim(q);
    return {q, a};
}

QPoly monic(QPoly a)
{
    if (a.empty()) return a;
    const mpq_class lead = a.back();
    for (auto& c : a) c /= lead;
    return a;
}

QPoly gcd(QPoly a, QPoly b)
{
    while (!b.empty()) {
        auto r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

QPoly to_q(const IntPoly& f)
{
    QPoly q;
    for (const auto& c : f.coeffs()) q.emplace_back(c);
    return q;
}

IntPoly primitive_part(const QPoly& a)
{
    mpz_class den = 1;
    for (const auto& c : a) den = lcm(den, c.get_den());
    ZCoeffs z;
    mpz_class content = 0;
    for (const auto& c : a) {
        mpz_class v = c.get_num() * (den / c.get_den());
        content = gcd(content, v);
        z.push_back(v);
    }
    if (z.back() < 0) content = -content;
    for (auto& c : z) c /= content;
    return IntPoly(std::move(z));
}

// ---- integer polynomial helpers for the characteristic polynomial ----

ZCoeffs zmul(const ZCoeffs& a, const ZCoeffs& b)
{
    if (a.empty() || b.empty()) return {};
    ZCoeffs c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

ZCoeffs zsub(ZCoeffs a, const ZCoeffs& b)
{
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

// Exact quotient by a monic polynomial.
ZCoeffs zdiv_monic(ZCoeffs a, const ZCoeffs& m)
{
    if (a.empty()) return {};
    const std::size_t dm = m.size() - 1;
    if (a.size() <= dm) throw ConsistencyError("inexact polynomial division in Bareiss step");
    ZCoeffs q(a.size() - dm, 0);
    for (std::size_t i = a.size(); i-- > dm;) {
        const mpz_class c = a[i];
        q[i - dm] = c;
        if (c != 0)
            for (std::size_t j = 0; j <= dm; ++j) a[i - dm + j] -= c * m[j];
    }
    for (std::size_t i = 0; i < dm; ++i)
        if (a[i] != 0) throw ConsistencyError("inexact polynomial division in Bareiss step");
    while (!q.empty() && q.back() == 0) q.pop_back();
    return q;
}

// ---- root refinement ----

template <class C>
void horner(const std::vector<C>& coef, const C& z, C& p, C& dp)
{
    p = coef.back();
    dp = C(0);
    for (std::size_t k = coef.size() - 1; k-- > 0;) {
        dp = dp * z + p;
        p = p * z + coef[k];
    }
}

// One Aberth-Ehrlich sweep; returns the largest relative correction.
template <class C, class R>
R aberth_sweep(const std::vector<C>& coef, std::vector<C>& z)
{
    R worst = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        C p, dp;
        horner(coef, z[i], p, dp);
        if (p == C(0)) continue;
        if (dp == C(0)) {
            z[i] = z[i] * C(R(1) + R(1) / R(1024));
            worst = std::max<R>(worst, R(1));
            continue;
        }
        const C ratio = p / dp;
        C sum = C(0);
        for (std::size_t j = 0; j < z.size(); ++j)
            if (j != i) sum += C(1) / (z[i] - z[j]);
        const C w = ratio / (C(1) - ratio * sum);
        z[i] -= w;
        using std::abs;
        const R scale = std::max<R>(R(1), R(abs(z[i])));
        worst = std::max<R>(worst, R(abs(w)) / scale);
    }
    return worst;
}

std::vector<std::complex<double>> initial_roots(const ZCoeffs& c)
{
    const std::size_t r = c.size() - 1;
    std::vector<std::complex<double>> z;
    const double lead = c.back().get_d();
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t i = 1; i < r; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    for (std::size_t i = 0; i < r; ++i)
        companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(r - 1)) = -c[i].get_d() / lead;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    bool ok = solver.info() == Eigen::Success;
    if (ok) {
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
            std::complex<double> v = solver.eigenvalues()(i);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) ok = false;
            z.push_back(v);
        }
    }
    // Coincident starting points stall Aberth; spread them slightly.
    for (std::size_t i = 0; ok && i < z.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(z[i] - z[j]) < 1e-12 * (1.0 + std::abs(z[i])))
                z[i] += std::polar(1e-6 * (1.0 + std::abs(z[i])), 0.7 + static_cast<double>(i));
    if (!ok) {
        z.clear();
        double radius = 1.0;
        for (std::size_t i = 0; i < r; ++i) radius = std::max(radius, std::abs(c[i].get_d() / lead) + 1.0);
        for (std::size_t i = 0; i < r; ++i)
            z.push_back(std::polar(radius, 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.25) / static_cast<double>(r)));
    }
    return z;
}

// Roots of a squarefree integer polynomial with certified inclusion discs.
std::vector<RootEstimate> squarefree_roots(const IntPoly& g, int precision_bits)
{
    const ZCoeffs& c = g.coeffs();
    const std::size_t r = g.degree();
    std::vector<std::complex<double>> zd = initial_roots(c);
    std::vector<std::complex<double>> cd;
    for (const auto& x : c) cd.emplace_back(x.get_d(), 0.0);
    for (int it = 0; it < 500; ++it)
        if (aberth_sweep<std::complex<double>, double>(cd, zd) < 1e-14) break;

    std::vector<HpComplex> coef;
    for (const auto& x : c) coef.emplace_back(HpReal(x.get_str()), HpReal(0));
    std::vector<HpComplex> z;
    for (auto v : zd) z.emplace_back(HpReal(v.real()), HpReal(v.imag()));

    const HpReal target = ldexp(HpReal(1), -(precision_bits + 100));
    HpReal achieved = 1;
    for (int it = 0; it < 200; ++it) {
        achieved = aberth_sweep<HpComplex, HpReal>(coef, z);
        if (achieved < target) break;
    }

    // Weierstrass inclusion discs D(z_i, r |W_i|), with a Horner rounding bound added to |p(z_i)|.
    const HpReal unit_roundoff = ldexp(HpReal(1), -330);
    const HpReal gamma = HpReal(4 * (r + 2)) * unit_roundoff;
    const HpReal lead = abs(HpReal(c.back().get_str()));
    std::vector<HpReal> radius(r);
    for (std::size_t i = 0; i < r; ++i) {
        HpComplex p, dp;
        horner(coef, z[i], p, dp);
        const HpReal az = abs(z[i]);
        HpReal bound = 0;
        for (std::size_t k = c.size(); k-- > 0;) bound = bound * az + abs(HpReal(c[k].get_str()));
        HpReal denom = lead;
        for (std::size_t j = 0; j < r; ++j)
            if (j != i) denom *= abs(z[i] - z[j]);
        if (denom == 0) throw ConvergenceError("root approximations coincide", 1.0);
        radius[i] = HpReal(r) * (abs(p) + gamma * bound) / denom * HpReal(1.0000001);
    }
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (abs(z[i] - z[j]) <= radius[i] + radius[j])
                throw ConvergenceError("inclusion discs overlap; achieved relative precision " +
                                           std::to_string(achieved.convert_to<double>()),
                                       std::max(radius[i], radius[j]).convert_to<double>());

    const HpReal tolerance = ldexp(HpReal(1), -precision_bits);
    std::vector<RootEstimate> out;
    for (std::size_t i = 0; i < r; ++i) {
        const HpReal modulus = abs(z[i]);
        ModulusClass cls;
        if (modulus - radius[i] > 1)
            cls = ModulusClass::outside;
        else if (modulus + radius[i] < 1)
            cls = ModulusClass::inside;
        else if (radius[i] <= tolerance)
            cls = ModulusClass::on;
        else
            throw ConvergenceError("cannot separate root from the unit circle", radius[i].convert_to<double>());
        RootEstimate est;
        est.value = {z[i].real().convert_to<double>(), z[i].imag().convert_to<double>()};
        est.radius = radius[i].convert_to<double>();
        est.log_abs = modulus == 0 ? -std::numeric_limits<double>::infinity() : log(modulus).convert_to<double>();
        est.cls = cls;
        out.push_back(est);
    }
    return out;
}

} // namespace

IntPoly::IntPoly(ZCoeffs coeffs) : coeffs_(std::move(coeffs))
{
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    if (coeffs_.empty()) throw InputError("the zero polynomial has no Mahler measure");
}

IntPoly::IntPoly(std::initializer_list<long> coeffs)
    : IntPoly([&] {
          ZCoeffs z;
          for (long c : coeffs) z.emplace_back(c);
          return z;
      }())
{
}

IntPoly IntPoly::from_laurent(const LaurentPoly& f)
{
    if (f.dim() != 1) throw InputError("expected a polynomial in one variable");
    if (!f.ring().is_integers()) throw InputError("expected integer coefficients");
    if (f.is_zero()) throw InputError("the zero polynomial has no Mahler measure");
    const std::int64_t lo = f.min_exponents()[0];
    const std::int64_t hi = f.max_exponents()[0];
    ZCoeffs c(static_cast<std::size_t>(hi - lo + 1), 0);
    for (const auto& [e, a] : f.terms()) c[static_cast<std::size_t>(e[0] - lo)] = a;
    return IntPoly(std::move(c));
}

std::string IntPoly::to_string() const
{
    LaurentPoly f(1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) f.add_term({static_cast<std::int64_t>(i)}, coeffs_[i]);
    return f.to_string();
}

IntPoly operator*(const IntPoly& a, const IntPoly& b)
{
    return IntPoly(zmul(a.coeffs_, b.coeffs_));
}

const char* to_string(ModulusClass c)
{
    switch (c) {
    case ModulusClass::inside: return "inside";
    case ModulusClass::on: return "on";
    case ModulusClass::outside: return "outside";
    }
    return "?";
}

std::vector<std::pair<IntPoly, unsigned>> squarefree_decomposition(const IntPoly& f)
{
    std::vector<std::pair<IntPoly, unsigned>> out;
    if (f.degree() == 0) return out;
    // Yun's algorithm over Q.
    const QPoly a = to_q(f);
    const QPoly b = derivative(a);
    const QPoly c = gcd(a, b);
    QPoly w = divmod(a, c).first;
    QPoly y = divmod(b, c).first;
    QPoly z = subtract(y, derivative(w));
    for (unsigned i = 1; w.size() > 1; ++i) {
        QPoly g = gcd(w, z);
        if (g.size() > 1) out.emplace_back(primitive_part(g), i);
        w = divmod(w, g).first;
        y = divmod(z, g).first;
        z = subtract(y, derivative(w));
    }
    return out;
}

std::vector<RootEstimate> roots_with_modulus_class(const IntPoly& f, int precision_bits)
{
    if (f.degree() == 0) throw InputError("a constant polynomial has no roots");
    std::vector<RootEstimate> out;
    for (const auto& [g, mult] : squarefree_decomposition(f)) {
        auto roots = squarefree_roots(g, precision_bits);
        for (unsigned k = 0; k < mult; ++k) out.insert(out.end(), roots.begin(), roots.end());
    }
    return out;
}

MahlerValue mahler_1d(const IntPoly& f)
{
    MahlerValue m{std::log(std::abs(f.leading().get_d())), 0.0, 0, 0};
    if (f.degree() == 0) return m;
    if (!f.leading().fits_slong_p()) {
        // log of a big leading coefficient without overflow
        long exp2 = 0;
        const double mant = mpz_get_d_2exp(&exp2, f.leading().get_mpz_t());
        m.value = std::log(std::abs(mant)) + static_cast<double>(exp2) * std::numbers::ln2;
    }
    for (const auto& root : roots_with_modulus_class(f)) {
        if (root.cls == ModulusClass::outside) {
            m.value += root.log_abs;
            m.error_bound += 1.01 * root.radius / std::exp(root.log_abs);
            ++m.roots_outside;
        } else if (root.cls == ModulusClass::on) {
            ++m.roots_on;
        }
    }
    m.error_bound += 4.0 * std::numeric_limits<double>::epsilon() * (std::abs(m.value) + static_cast<double>(f.degree()));
    return m;
}

CharPolyData char_poly_data(const RationalMatrix& a)
{
    if (!a.square() || a.rows() == 0) throw InputError("characteristic polynomial needs a nonempty square matrix");
    const std::size_t n = a.rows();
    mpz_class den = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) den = lcm(den, a(i, j).get_den());

    // chi_B(x) = det(xI - B) for B = den * A, by fraction-free elimination over Z[x].
    // The pivots are leading principal minors of xI - B, hence monic and nonzero.
    std::vector<ZCoeffs> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const mpz_class b = a(i, j).get_num() * (den / a(i, j).get_den());
            ZCoeffs entry{-b};
            if (i == j) entry.push_back(1);
            while (!entry.empty() && entry.back() == 0) entry.pop_back();
            m[i * n + j] = entry;
        }
    ZCoeffs prev{1};
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const ZCoeffs pivot = m[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                m[i * n + j] = zdiv_monic(zsub(zmul(m[i * n + j], pivot), zmul(m[i * n + k], m[k * n + j])), prev);
            m[i * n + k].clear();
        }
        prev = pivot;
    }
    const ZCoeffs chi_b = m[n * n - 1];

    // chi_A(u) = den^{-n} chi_B(den * u)
    CharPolyData out{{}, 1, IntPoly{1}};
    mpz_class den_power = 1;
    mpz_class den_n;
    mpz_pow_ui(den_n.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(n));
    for (std::size_t k = 0; k <= n; ++k) {
        mpq_class coeff(k < chi_b.size() ? chi_b[k] * den_power : mpz_class(0), den_n);
        coeff.canonicalize();
        out.char_poly.push_back(coeff);
        den_power *= den;
    }
    mpz_class s = 1;
    for (const auto& c : out.char_poly) s = lcm(s, c.get_den());
    ZCoeffs cleared;
    for (const auto& c : out.char_poly) cleared.push_back(c.get_num() * (s / c.get_den()));
    out.clearing_s = s;
    out.cleared = IntPoly(std::move(cleared));
    return out;
}

NewtonPolygonSlopes newton_polygon(const IntPoly& f, const mpz_class& p)
{
    if (!is_prime(p)) throw InputError(p.get_str() + " is not prime");
    const auto& c = f.coeffs();
    const std::size_t r = f.degree();
    struct Point {
        mpz_class x, y;
    };
    std::vector<Point> pts;
    NewtonPolygonSlopes out{p, {}, 0};
    for (std::size_t i = c.size(); i-- > 0;)
        if (c[i] != 0) pts.push_back({mpz_class(static_cast<unsigned long>(r - i)), mpz_class(padic_valuation(c[i], p))});
    for (std::size_t i = 0; i < c.size() && c[i] == 0; ++i) ++out.zero_roots;

    std::vector<Point> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& o = hull[hull.size() - 2];
            const auto& a = hull.back();
            const mpz_class cross = (a.x - o.x) * (pt.y - o.y) - (a.y - o.y) * (pt.x - o.x);
            if (cross > 0) break;
            hull.pop_back();
        }
        hull.push_back(pt);
    }
    for (std::size_t k = 1; k < hull.size(); ++k) {
        const mpz_class dx = hull[k].x - hull[k - 1].x;
        mpq_class slope(hull[k].y - hull[k - 1].y, dx);
        slope.canonicalize();
        out.segments.push_back({slope, static_cast<unsigned>(dx.get_ui())});
    }
    return out;
}

NewtonPolygonSlopes newton_polygon(const CharPolyData& cp, const mpz_class& p)
{
    return newton_polygon(cp.cleared, p);
}

PadicMahler padic_mahler(const IntPoly& f, const mpz_class& p)
{
    const auto polygon = newton_polygon(f, p);
    mpq_class multiplier = 0;
    for (const auto& seg : polygon.segments)
        if (seg.slope < 0) multiplier -= seg.slope * seg.multiplicity;
    return {p, multiplier, multiplier.get_d() * std::log(p.get_d())};
}

LocalEntropyReport solenoid_entropy(const RationalMatrix& a)
{
    LocalEntropyReport report{{}, 0.0, 0.0, char_poly_data(a)};
    const auto& cp = report.char_poly;
    if (cp.char_poly.front() == 0) throw InputError("matrix is not invertible");

    double archimedean = 0.0;
    for (const auto& root : roots_with_modulus_class(cp.cleared)) {
        if (root.cls != ModulusClass::outside) continue;
        archimedean += root.log_abs;
        report.archimedean_error += 1.01 * root.radius / std::exp(root.log_abs);
    }
    if (archimedean > 0.0) report.places.push_back({std::nullopt, 0, archimedean});
    report.total = archimedean;

    // m_p vanishes unless p divides the clearing integer.
    for (const auto& [p, e] : factor_integer(cp.clearing_s)) {
        const auto local = padic_mahler(cp.cleared, p);
        if (local.log_multiplier == 0) continue;
        report.places.push_back({p, local.log_multiplier, local.value});
        report.total += local.value;
    }
    return report;
}

nlohmann::json to_json(const LocalEntropyReport& report)
{
    nlohmann::json places = nlohmann::json::array();
    for (const auto& place : report.places) {
        if (!place.prime)
            places.push_back({{"p", "inf"}, {"value", place.value}});
        else
            places.push_back({{"p", place.prime->get_str()},
                              {"log_multiplier", place.log_multiplier.get_str()},
                              {"value", place.value}});
    }
    nlohmann::json chi = nlohmann::json::array();
    for (const auto& c : report.char_poly.char_poly) chi.push_back(c.get_str());
    return {{"places", places},
            {"total", report.total},
            {"archimedean_error_bound", report.archimedean_error},
            {"clearing_s", report.char_poly.clearing_s.get_str()},
            {"char_poly", chi},
            {"cleared_char_poly", report.char_poly.cleared.to_string()}};
}

} // namespace algdyn
