#pragma once

// One-variable Mahler measure (Jensen), p-adic Mahler measure (Newton polygons)
// and the local-global entropy of rational matrices acting on solenoids.

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "algdyn/exact_linalg.hpp"
#include "algdyn/laurent.hpp"
#include "algdyn/number_theory.hpp"

namespace algdyn {

/// c_0 + c_1 u + ... + c_r u^r with c_r != 0.
class IntPoly {
public:
    /// Trailing zero coefficients are dropped; throws InputError for the zero polynomial.
    explicit IntPoly(ZCoeffs coeffs);
    IntPoly(std::initializer_list<long> coeffs);

    /// Shifts a one-variable Laurent polynomial over Z by its lowest exponent.
    static IntPoly from_laurent(const LaurentPoly& f);

    const ZCoeffs& coeffs() const { return coeffs_; }
    std::size_t degree() const { return coeffs_.size() - 1; }
    const mpz_class& leading() const { return coeffs_.back(); }
    std::string to_string() const;

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b);
    friend bool operator==(const IntPoly&, const IntPoly&) = default;

private:
    ZCoeffs coeffs_;
};

enum class ModulusClass { inside, on, outside };
const char* to_string(ModulusClass c);

struct RootEstimate {
    std::complex<double> value;
    double radius;       // certified inclusion radius
    double log_abs;      // log|root| from the extended-precision estimate
    ModulusClass cls;
};

/// Roots listed with multiplicity. Squarefree parts are refined by Aberth iteration
/// in ~330-bit arithmetic and enclosed in disjoint Weierstrass discs; a disc
/// straddling |z| = 1 with radius below 2^-precision_bits is classified "on".
std::vector<RootEstimate> roots_with_modulus_class(const IntPoly& f, int precision_bits = 200);

struct MahlerValue {
    double value;
    double error_bound;
    std::size_t roots_outside;
    std::size_t roots_on;
};

/// m(f) = log|c_r| + sum_{|lambda|>1} log|lambda|.
MahlerValue mahler_1d(const IntPoly& f);

/// Squarefree decomposition f = c * prod g_i^i over Q, factors primitive in Z[u].
std::vector<std::pair<IntPoly, unsigned>> squarefree_decomposition(const IntPoly& f);

struct CharPolyData {
    std::vector<mpq_class> char_poly;  // monic det(uI - A), low degree first
    mpz_class clearing_s;              // least s > 0 with s * char_poly integral
    IntPoly cleared;                   // s * char_poly
};

CharPolyData char_poly_data(const RationalMatrix& a);

struct SlopeSegment {
    mpq_class slope;        // equals the p-adic valuation of the roots on this segment
    unsigned multiplicity;
};

/// Lower convex hull of {(r - i, v_p(c_i))}. With this orientation a segment of
/// slope s carries roots of valuation s, i.e. |root|_p = p^{-s}.
struct NewtonPolygonSlopes {
    mpz_class p;
    std::vector<SlopeSegment> segments;
    unsigned zero_roots = 0;   // roots at 0 (infinite valuation), not on any segment
};

NewtonPolygonSlopes newton_polygon(const IntPoly& f, const mpz_class& p);
NewtonPolygonSlopes newton_polygon(const CharPolyData& cp, const mpz_class& p);

struct PadicMahler {
    mpz_class p;
    mpq_class log_multiplier;  // m_p = log_multiplier * log p
    double value;
};

PadicMahler padic_mahler(const IntPoly& f, const mpz_class& p);

struct PlaceContribution {
    std::optional<mpz_class> prime;   // nullopt is the archimedean place
    mpq_class log_multiplier;         // finite places only
    double value;
};

struct LocalEntropyReport {
    std::vector<PlaceContribution> places;   // nonzero contributions, infinity first
    double total;
    double archimedean_error;
    CharPolyData char_poly;
};

/// Entropy of A in GL(r, Q) on the solenoid: sum over places of m_p(chi_A).
LocalEntropyReport solenoid_entropy(const RationalMatrix& a);

nlohmann::json to_json(const LocalEntropyReport& report);

} // namespace algdyn
