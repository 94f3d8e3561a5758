#pragma once

// Sparse Laurent polynomials in d commuting variables over Z or F_p.

#include <gmpxx.h>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace algdyn {

/// Exponent vector m of the monomial u^m = u_1^{m_1} ... u_d^{m_d}.
using Exponent = std::vector<std::int64_t>;

/// Coefficient ring marker: the integers (p == 0) or the prime field F_p.
struct CoeffRing {
    std::uint64_t p = 0;

    static CoeffRing integers() { return {}; }
    static CoeffRing prime_field(std::uint64_t p);

    bool is_integers() const { return p == 0; }
    std::string name() const;
    friend bool operator==(const CoeffRing&, const CoeffRing&) = default;
};

/// Finite set of lattice points; for a polynomial, exactly its key set.
struct SupportSet {
    std::set<Exponent> points;

    std::size_t size() const { return points.size(); }
    /// Translate so the lexicographically smallest point sits at the origin.
    SupportSet canonical() const;
    SupportSet translated(const Exponent& by) const;
    SupportSet dilated(std::int64_t factor) const;
    friend bool operator==(const SupportSet&, const SupportSet&) = default;
    friend auto operator<=>(const SupportSet& a, const SupportSet& b) { return a.points <=> b.points; }
};

class LaurentPoly {
public:
    using Terms = std::map<Exponent, mpz_class>;

    explicit LaurentPoly(std::size_t dim, CoeffRing ring = {});

    static LaurentPoly constant(std::size_t dim, const mpz_class& c, CoeffRing ring = {});
    static LaurentPoly monomial(Exponent e, const mpz_class& c = 1, CoeffRing ring = {});

    std::size_t dim() const { return dim_; }
    const CoeffRing& ring() const { return ring_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }

    mpz_class coeff(const Exponent& e) const;
    /// Adds c·u^e, reducing and dropping zero coefficients.
    void add_term(const Exponent& e, const mpz_class& c);

    LaurentPoly operator-() const;
    LaurentPoly& operator+=(const LaurentPoly& g);
    LaurentPoly& operator-=(const LaurentPoly& g);
    friend LaurentPoly operator+(LaurentPoly f, const LaurentPoly& g) { return f += g; }
    friend LaurentPoly operator-(LaurentPoly f, const LaurentPoly& g) { return f -= g; }
    friend LaurentPoly operator*(const LaurentPoly& f, const LaurentPoly& g);
    friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

    LaurentPoly scaled(const mpz_class& c) const;
    LaurentPoly pow(std::uint64_t k) const;
    LaurentPoly shifted(const Exponent& by) const;

    /// Componentwise minimum / maximum exponent over the support (zeros for f = 0).
    Exponent min_exponents() const;
    Exponent max_exponents() const;

    /// Sum of absolute values of the coefficients.
    double l1_norm() const;

    std::complex<double> evaluate(std::span<const std::complex<double>> point) const;

    /// Reduction Z -> F_p.
    LaurentPoly reduced_mod(std::uint64_t p) const;

    std::string to_string() const;

private:
    void normalize(mpz_class& c) const;
    void check_compatible(const LaurentPoly& g) const;

    std::size_t dim_;
    CoeffRing ring_;
    Terms terms_;
};

/// f*(u) = f(u^{-1}): every exponent negated.
LaurentPoly involute(const LaurentPoly& f);

SupportSet support(const LaurentPoly& f);

/// Variable naming: u | u,v | u,v,w | u1..ud.
std::string variable_name(std::size_t index, std::size_t dim);

/// Parses "3-u-u^-1-v-v^-1", "2*u-3", "1+u+u^2+uv+v^2", "u1^2*u4^-1" ...
/// Coefficients are integers or fractions a/b; a fraction must be integral over Z
/// and have a denominator prime to p over F_p.
LaurentPoly parse_poly(std::string_view text, std::size_t dim, CoeffRing ring = {});

/// JSON form {"d":2,"ring":"Z"|"F_p","p":p,"terms":[{"e":[0,0],"c":1},...]}.
LaurentPoly poly_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LaurentPoly& f);

/// Exact quotient num / den in the Laurent ring, or nullopt if den does not divide num.
/// Over Z the quotient must have integer coefficients.
std::optional<LaurentPoly> exact_quotient(const LaurentPoly& num, const LaurentPoly& den);

} // namespace algdyn
