#pragma once

// Evaluation of Laurent polynomials on finite subgroups
// K = Omega_{n_1} x ... x Omega_{n_d} of the d-torus.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "algdyn/laurent.hpp"

namespace algdyn {

struct GridSpec {
    std::vector<std::size_t> orders;

    static GridSpec square(std::size_t n, std::size_t dim) { return {std::vector<std::size_t>(dim, n)}; }

    std::size_t dim() const { return orders.size(); }
    /// |K|; throws on overflow or a zero order.
    std::size_t size() const;
    /// Row-major multi-index (last coordinate fastest) of a flat position.
    std::vector<std::size_t> unflatten(std::size_t flat) const;
    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Knobs shared by all grid computations.
struct GridOptions {
    std::size_t max_points = std::size_t{1} << 26;
    unsigned threads = 1;
    /// Fixed partition used for parallel reductions; results depend on it, not on threads.
    std::size_t slab_points = std::size_t{1} << 16;
};

enum class ZeroCertificate {
    nonzero,       // excluded by the FFT error bound or by exact evaluation
    exact_zero,    // vanishes in Q(zeta_L), L <= 512
    precision_zero // L > 512: |f| below the high-precision evaluation error at 2^-200
};

struct GridEvaluation {
    GridSpec spec;
    std::vector<std::complex<double>> values;
    std::vector<std::uint8_t> zero_mask;
    std::size_t certified_zeros = 0;
    std::size_t precision_zeros = 0;   // subset of certified_zeros decided by high precision
    std::size_t candidates_checked = 0;
    double candidate_threshold = 0.0;  // |f| above this is provably nonzero
};

GridEvaluation grid_eval(const LaurentPoly& f, const GridSpec& spec, const GridOptions& opts = {});

/// Decides whether f vanishes at the grid point with the given multi-index.
ZeroCertificate certify_zero(const LaurentPoly& f, const GridSpec& spec, const std::vector<std::size_t>& index);

/// Multiplicative order of the grid point (lcm of the coordinate orders).
std::uint64_t point_order(const GridSpec& spec, const std::vector<std::size_t>& index);

/// Orders at or below this use exact cyclotomic reduction.
inline constexpr std::uint64_t exact_certification_limit = 512;

} // namespace algdyn
