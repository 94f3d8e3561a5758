#include "algdyn/laurent.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <numeric>
#include <sstream>

#include "algdyn/error.hpp"

namespace algdyn {

CoeffRing CoeffRing::prime_field(std::uint64_t p)
{
    if (p < 2) throw InputError("prime field needs p >= 2, got " + std::to_string(p));
    for (std::uint64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) throw InputError(std::to_string(p) + " is not prime");
    return CoeffRing{p};
}

std::string CoeffRing::name() const
{
    return is_integers() ? "Z" : "F_" + std::to_string(p);
}

SupportSet SupportSet::canonical() const
{
    if (points.empty()) return *this;
    Exponent shift = *points.begin();
    for (auto& x : shift) x = -x;
    return translated(shift);
}

SupportSet SupportSet::translated(const Exponent& by) const
{
    SupportSet out;
    for (auto pt : points) {
        for (std::size_t i = 0; i < pt.size(); ++i) pt[i] += by[i];
        out.points.insert(std::move(pt));
    }
    return out;
}

SupportSet SupportSet::dilated(std::int64_t factor) const
{
    SupportSet out;
    for (auto pt : points) {
        for (auto& x : pt) x *= factor;
        out.points.insert(std::move(pt));
    }
    return out;
}

LaurentPoly::LaurentPoly(std::size_t dim, CoeffRing ring) : dim_(dim), ring_(ring)
{
    if (dim == 0) throw InputError("Laurent polynomial dimension must be >= 1");
}

LaurentPoly LaurentPoly::constant(std::size_t dim, const mpz_class& c, CoeffRing ring)
{
    LaurentPoly f(dim, ring);
    f.add_term(Exponent(dim, 0), c);
    return f;
}

LaurentPoly LaurentPoly::monomial(Exponent e, const mpz_class& c, CoeffRing ring)
{
    LaurentPoly f(e.size(), ring);
    f.add_term(e, c);
    return f;
}

void LaurentPoly::normalize(mpz_class& c) const
{
    if (ring_.is_integers()) return;
    mpz_class p(static_cast<unsigned long>(ring_.p));
    mpz_fdiv_r(c.get_mpz_t(), c.get_mpz_t(), p.get_mpz_t());
}

void LaurentPoly::check_compatible(const LaurentPoly& g) const
{
    if (dim_ != g.dim_)
        throw InputError("dimension mismatch: " + std::to_string(dim_) + " vs " + std::to_string(g.dim_));
    if (!(ring_ == g.ring_))
        throw InputError("coefficient ring mismatch: " + ring_.name() + " vs " + g.ring_.name());
}

mpz_class LaurentPoly::coeff(const Exponent& e) const
{
    auto it = terms_.find(e);
    return it == terms_.end() ? mpz_class(0) : it->second;
}

void LaurentPoly::add_term(const Exponent& e, const mpz_class& c)
{
    if (e.size() != dim_)
        throw InputError("exponent of length " + std::to_string(e.size()) + " in dimension " + std::to_string(dim_));
    auto [it, inserted] = terms_.try_emplace(e, 0);
    it->second += c;
    normalize(it->second);
    if (it->second == 0) terms_.erase(it);
}

LaurentPoly LaurentPoly::operator-() const
{
    LaurentPoly out(dim_, ring_);
    for (const auto& [e, c] : terms_) out.add_term(e, -c);
    return out;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& g)
{
    check_compatible(g);
    for (const auto& [e, c] : g.terms_) add_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& g)
{
    check_compatible(g);
    for (const auto& [e, c] : g.terms_) add_term(e, -c);
    return *this;
}

LaurentPoly operator*(const LaurentPoly& f, const LaurentPoly& g)
{
    f.check_compatible(g);
    LaurentPoly out(f.dim_, f.ring_);
    Exponent e(f.dim_);
    for (const auto& [ef, cf] : f.terms_) {
        for (const auto& [eg, cg] : g.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ef[i] + eg[i];
            out.add_term(e, cf * cg);
        }
    }
    return out;
}

LaurentPoly LaurentPoly::scaled(const mpz_class& c) const
{
    LaurentPoly out(dim_, ring_);
    for (const auto& [e, a] : terms_) out.add_term(e, a * c);
    return out;
}

LaurentPoly LaurentPoly::pow(std::uint64_t k) const
{
    LaurentPoly result = constant(dim_, 1, ring_);
    LaurentPoly base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

LaurentPoly LaurentPoly::shifted(const Exponent& by) const
{
    if (by.size() != dim_) throw InputError("shift vector has wrong length");
    LaurentPoly out(dim_, ring_);
    for (const auto& [e, c] : terms_) {
        Exponent m = e;
        for (std::size_t i = 0; i < dim_; ++i) m[i] += by[i];
        out.terms_.emplace(std::move(m), c);
    }
    return out;
}

Exponent LaurentPoly::min_exponents() const
{
    if (terms_.empty()) return Exponent(dim_, 0);
    Exponent lo = terms_.begin()->first;
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < dim_; ++i) lo[i] = std::min(lo[i], e[i]);
    return lo;
}

Exponent LaurentPoly::max_exponents() const
{
    if (terms_.empty()) return Exponent(dim_, 0);
    Exponent hi = terms_.begin()->first;
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < dim_; ++i) hi[i] = std::max(hi[i], e[i]);
    return hi;
}

double LaurentPoly::l1_norm() const
{
    double s = 0.0;
    for (const auto& [e, c] : terms_) s += std::abs(c.get_d());
    return s;
}

std::complex<double> LaurentPoly::evaluate(std::span<const std::complex<double>> point) const
{
    if (point.size() != dim_) throw InputError("evaluation point has wrong dimension");
    std::complex<double> sum = 0.0;
    for (const auto& [e, c] : terms_) {
        std::complex<double> t = c.get_d();
        for (std::size_t i = 0; i < dim_; ++i) {
            if (e[i] >= 0)
                t *= std::pow(point[i], static_cast<int>(e[i]));
            else
                t /= std::pow(point[i], static_cast<int>(-e[i]));
        }
        sum += t;
    }
    return sum;
}

LaurentPoly LaurentPoly::reduced_mod(std::uint64_t p) const
{
    LaurentPoly out(dim_, CoeffRing::prime_field(p));
    for (const auto& [e, c] : terms_) out.add_term(e, c);
    return out;
}

std::string variable_name(std::size_t index, std::size_t dim)
{
    static const char* small[] = {"u", "v", "w"};
    if (dim <= 3) return small[index];
    return "u" + std::to_string(index + 1);
}

std::string LaurentPoly::to_string() const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        const bool constant_term = std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; });
        mpz_class a = abs(c);
        if (c < 0)
            os << "-";
        else if (!first)
            os << "+";
        bool need_star = false;
        if (constant_term || a != 1) {
            os << a.get_str();
            need_star = true;
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            if (e[i] == 0) continue;
            if (need_star) os << "*";
            os << variable_name(i, dim_);
            if (e[i] != 1) os << "^" << e[i];
            need_star = true;
        }
        first = false;
    }
    return os.str();
}

LaurentPoly involute(const LaurentPoly& f)
{
    LaurentPoly out(f.dim(), f.ring());
    for (const auto& [e, c] : f.terms()) {
        Exponent m = e;
        for (auto& x : m) x = -x;
        out.add_term(m, c);
    }
    return out;
}

SupportSet support(const LaurentPoly& f)
{
    SupportSet s;
    for (const auto& [e, c] : f.terms()) s.points.insert(e);
    return s;
}

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, std::size_t dim, CoeffRing ring)
        : text_(text), dim_(dim), ring_(ring), result_(dim, ring) {}

    LaurentPoly parse()
    {
        skip_ws();
        if (at_end()) throw ParseError("empty polynomial", pos_);
        bool first = true;
        while (true) {
            skip_ws();
            if (at_end()) break;
            int sign = 1;
            if (peek() == '+' || peek() == '-') {
                sign = peek() == '-' ? -1 : 1;
                ++pos_;
                skip_ws();
            } else if (!first) {
                throw ParseError("expected '+' or '-'", pos_);
            }
            parse_term(sign);
            first = false;
        }
        return result_;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void skip_ws()
    {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }

    mpz_class parse_unsigned()
    {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) throw ParseError("expected digits", pos_);
        return mpz_class(std::string(text_.substr(start, pos_ - start)));
    }

    std::int64_t parse_exponent()
    {
        skip_ws();
        bool paren = false;
        if (!at_end() && peek() == '(') {
            paren = true;
            ++pos_;
            skip_ws();
        }
        std::size_t start = pos_;
        if (!at_end() && (peek() == '-' || peek() == '+')) ++pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        std::int64_t value = 0;
        auto first = text_.data() + start;
        if (*first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, text_.data() + pos_, value);
        if (ec != std::errc() || ptr != text_.data() + pos_) throw ParseError("bad exponent", start);
        if (paren) {
            skip_ws();
            if (at_end() || peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
        }
        return value;
    }

    // Returns the variable index, or -1 if no variable starts here.
    int try_variable()
    {
        if (at_end()) return -1;
        std::size_t start = pos_;
        char c = peek();
        if (c == 'u' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            ++pos_;
            std::size_t num_start = pos_;
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
            std::size_t idx = 0;
            std::from_chars(text_.data() + num_start, text_.data() + pos_, idx);
            if (idx < 1 || idx > dim_)
                throw ParseError("variable u" + std::to_string(idx) + " outside dimension " + std::to_string(dim_), start);
            return static_cast<int>(idx - 1);
        }
        int idx = -1;
        if (c == 'u') idx = 0;
        if (c == 'v') idx = 1;
        if (c == 'w') idx = 2;
        if (idx < 0) return -1;
        if (dim_ > 3 || static_cast<std::size_t>(idx) >= dim_)
            throw ParseError(std::string("variable '") + c + "' not available in dimension " + std::to_string(dim_), start);
        ++pos_;
        return idx;
    }

    void parse_term(int sign)
    {
        mpz_class num = 1, den = 1;
        bool have_coeff = false;
        if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            num = parse_unsigned();
            have_coeff = true;
            skip_ws();
            if (!at_end() && peek() == '/') {
                ++pos_;
                skip_ws();
                std::size_t at = pos_;
                den = parse_unsigned();
                if (den == 0) throw ParseError("zero denominator", at);
            }
        }
        Exponent e(dim_, 0);
        bool have_var = false;
        while (true) {
            skip_ws();
            std::size_t before = pos_;
            if (!at_end() && peek() == '*') {
                ++pos_;
                skip_ws();
            }
            int var = try_variable();
            if (var < 0) {
                if (pos_ != before) throw ParseError("expected variable after '*'", pos_);
                break;
            }
            skip_ws();
            std::int64_t power = 1;
            if (!at_end() && peek() == '^') {
                ++pos_;
                power = parse_exponent();
            }
            e[var] += power;
            have_var = true;
        }
        if (!have_coeff && !have_var) throw ParseError("expected term", pos_);
        add(e, sign * num, den, pos_);
    }

    void add(const Exponent& e, const mpz_class& num, const mpz_class& den, std::size_t at)
    {
        if (ring_.is_integers()) {
            if (num % den != 0) throw ParseError("coefficient is not an integer", at);
            result_.add_term(e, num / den);
            return;
        }
        mpz_class p(static_cast<unsigned long>(ring_.p));
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
            throw ParseError("coefficient not reducible in " + ring_.name(), at);
        result_.add_term(e, num * inv);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t dim_;
    CoeffRing ring_;
    LaurentPoly result_;
};

bool deglex_less(const Exponent& a, const Exponent& b)
{
    auto da = std::accumulate(a.begin(), a.end(), std::int64_t{0});
    auto db = std::accumulate(b.begin(), b.end(), std::int64_t{0});
    if (da != db) return da < db;
    return a < b;
}

const LaurentPoly::Terms::value_type& leading_term(const LaurentPoly& f)
{
    auto best = f.terms().begin();
    for (auto it = f.terms().begin(); it != f.terms().end(); ++it)
        if (deglex_less(best->first, it->first)) best = it;
    return *best;
}

} // namespace

LaurentPoly parse_poly(std::string_view text, std::size_t dim, CoeffRing ring)
{
    return PolyParser(text, dim, ring).parse();
}

LaurentPoly poly_from_json(const nlohmann::json& j)
{
    try {
        std::size_t d = j.at("d").get<std::size_t>();
        CoeffRing ring;
        if (j.contains("ring")) {
            std::string r = j.at("ring").get<std::string>();
            if (r == "Z")
                ring = CoeffRing::integers();
            else if (r.rfind("F", 0) == 0)
                ring = CoeffRing::prime_field(j.contains("p") ? j.at("p").get<std::uint64_t>()
                                                             : std::stoull(r.substr(r.find('_') + 1)));
            else
                throw InputError("unknown ring '" + r + "'");
        }
        LaurentPoly f(d, ring);
        for (const auto& t : j.at("terms")) {
            Exponent e = t.at("e").get<Exponent>();
            const auto& c = t.at("c");
            mpz_class coeff = c.is_string() ? mpz_class(c.get<std::string>()) : mpz_class(std::to_string(c.get<long long>()));
            f.add_term(e, coeff);
        }
        return f;
    } catch (const nlohmann::json::exception& ex) {
        throw InputError(std::string("malformed polynomial JSON: ") + ex.what());
    }
}

nlohmann::json to_json(const LaurentPoly& f)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [e, c] : f.terms()) {
        nlohmann::json coeff = c.fits_slong_p() ? nlohmann::json(c.get_si()) : nlohmann::json(c.get_str());
        terms.push_back({{"e", e}, {"c", coeff}});
    }
    nlohmann::json j = {{"d", f.dim()}, {"ring", f.ring().is_integers() ? "Z" : "F_p"}, {"terms", terms}};
    if (!f.ring().is_integers()) j["p"] = f.ring().p;
    return j;
}

std::optional<LaurentPoly> exact_quotient(const LaurentPoly& num, const LaurentPoly& den)
{
    if (den.is_zero()) throw InputError("division by the zero polynomial");
    if (num.dim() != den.dim() || !(num.ring() == den.ring())) throw InputError("exact_quotient: incompatible operands");
    if (num.is_zero()) return num;

    // Strip monomial factors; then divisibility in the Laurent ring is divisibility of polynomials.
    Exponent lo_num = num.min_exponents(), lo_den = den.min_exponents();
    Exponent neg_num = lo_num, neg_den = lo_den;
    for (auto& x : neg_num) x = -x;
    for (auto& x : neg_den) x = -x;
    LaurentPoly r = num.shifted(neg_num);
    const LaurentPoly d = den.shifted(neg_den);
    const auto& [lead_e, lead_c] = leading_term(d);

    LaurentPoly q(num.dim(), num.ring());
    mpz_class inv;
    if (!num.ring().is_integers()) {
        mpz_class p(static_cast<unsigned long>(num.ring().p));
        mpz_invert(inv.get_mpz_t(), lead_c.get_mpz_t(), p.get_mpz_t());
    }
    while (!r.is_zero()) {
        const auto [e, c] = leading_term(r);
        Exponent t(e.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            t[i] = e[i] - lead_e[i];
            if (t[i] < 0) return std::nullopt;
        }
        mpz_class coeff;
        if (num.ring().is_integers()) {
            if (c % lead_c != 0) return std::nullopt;
            coeff = c / lead_c;
        } else {
            coeff = c * inv;
        }
        LaurentPoly term = LaurentPoly::monomial(t, coeff, num.ring());
        q += term;
        r -= term * d;
    }
    Exponent back(lo_num.size());
    for (std::size_t i = 0; i < back.size(); ++i) back[i] = lo_num[i] - lo_den[i];
    return q.shifted(back);
}

} // namespace algdyn
