#pragma once

// Periodic-point counts of toral automorphisms and principal actions.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "algdyn/exact_linalg.hpp"
#include "algdyn/grid.hpp"
#include "algdyn/laurent.hpp"

namespace algdyn {

struct PeriodicCountToral {
    std::uint64_t n;
    mpz_class count;                // |det(A^n - I)|
    bool infinite_fixed_set;        // count == 0
};

PeriodicCountToral toral_periodic_count(const IntMatrix& a, std::uint64_t n);

struct PeriodicOptions {
    GridOptions grid;
    /// Exact determinant only for |K| up to this size.
    std::size_t exact_threshold = 4096;
    /// Allowed |log(exact) - log(float)|, i.e. relative disagreement of the products.
    double tolerance = 1e-8;
};

struct PeriodicCountPrincipal {
    std::size_t n = 0;
    std::size_t dim = 0;
    bool degenerate = false;               // f vanishes somewhere on Omega_n^d
    std::optional<mpz_class> exact_product; // |det| of multiplication by f, when |K| <= threshold
    double log_full_product = 0.0;         // floating log of the grid product (-inf when degenerate)
    double component_rate = 0.0;           // m_{Omega_n^d}(f), zero-excluded
    std::size_t excluded_points = 0;
    std::optional<double> log_gap;         // |log exact - log float| when both exist
};

PeriodicCountPrincipal principal_periodic_count(const LaurentPoly& f, std::size_t n, const PeriodicOptions& opts = {});

/// Integer matrix of multiplication by f on Z[u_1..u_d]/(u_j^n - 1), basis in row-major order.
IntMatrix block_circulant_matrix(const LaurentPoly& f, std::size_t n);

/// det of block_circulant_matrix(f, n), computed modulo primes q = 1 mod n (where the matrix
/// is diagonalized by the F_q Fourier transform) and recombined by CRT.
mpz_class block_circulant_determinant(const LaurentPoly& f, std::size_t n);

struct GrowthEntry {
    std::size_t n;
    std::optional<mpz_class> count;   // toral count or exact principal product
    double log_count;
    double rate;
};

struct GrowthTrace {
    std::vector<GrowthEntry> entries;
    double target;
    std::string target_method;
};

GrowthTrace growth_rate_trace(const IntMatrix& a, const std::vector<std::size_t>& n_list);
GrowthTrace growth_rate_trace(const LaurentPoly& f, const std::vector<std::size_t>& n_list,
                              const PeriodicOptions& opts = {});

/// log of a positive big integer without overflow.
double log_abs(const mpz_class& z);

nlohmann::json to_json(const PeriodicCountToral& c);
nlohmann::json to_json(const PeriodicCountPrincipal& c);
nlohmann::json to_json(const GrowthTrace& t);
/// CSV rows n,count_or_log,normalized_rate,target,gap.
std::string to_csv(const GrowthTrace& t);

} // namespace algdyn
