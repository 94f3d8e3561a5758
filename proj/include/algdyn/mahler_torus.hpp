#pragma once

// Riemann sums m_K(f) of log|f| over finite subgroups K of the torus.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "algdyn/grid.hpp"
#include "algdyn/laurent.hpp"

namespace algdyn {

struct RiemannSumResult {
    GridSpec spec;
    double value = 0.0;           // (1/|K|) * log_abs_sum
    double log_abs_sum = 0.0;     // compensated sum of log|f| over K minus U(f)
    std::size_t excluded_points = 0;
    std::size_t precision_excluded = 0;  // excluded by high-precision evaluation only
    double min_abs_nonzero = 0.0;
    std::size_t slab_points = 0;  // reduction partition; the value is bit-stable for fixed slab_points
};

/// m_K(f) over K = Omega_{n_1} x ... x Omega_{n_d}. Only certified zeros are excluded.
/// Throws InputError when f vanishes on every point of K.
RiemannSumResult riemann_mahler(const LaurentPoly& f, const GridSpec& spec, const GridOptions& opts = {});

/// Same sum from an existing evaluation (shared with periodic-point counting).
RiemannSumResult riemann_mahler(const GridEvaluation& eval, const GridOptions& opts = {});

struct TraceEntry {
    GridSpec spec;
    double value;
    std::size_t excluded;
    std::optional<double> delta;   // value minus previous value
};

struct ConvergenceTrace {
    std::vector<TraceEntry> entries;
    std::optional<double> target;
    double tolerance;
    bool within_tolerance;          // |last delta| <= tolerance; not a convergence claim
    std::string stopping_reason;
};

/// Square grids n = first, first + step, ..., <= last; with avoid_torsion, n sharing a factor
/// with the order of a certified zero found on the small grids n <= 12 are skipped.
std::vector<GridSpec> square_schedule(const LaurentPoly& f, std::size_t first, std::size_t last, std::size_t step,
                                      bool avoid_torsion);

ConvergenceTrace mahler_nd(const LaurentPoly& f, const std::vector<GridSpec>& schedule, double tolerance = 1e-3,
                           std::optional<double> target = std::nullopt, const GridOptions& opts = {});

/// CSV rows "n,value,delta" (first grid order as n).
std::string to_csv(const ConvergenceTrace& trace);

struct ProbeHit {
    std::vector<std::size_t> index;   // k_j: the point (e^{2 pi i k_j / n_j})
    double abs_value;
    bool certified_zero;
};

/// All grid points with |f| <= threshold, in flat index order.
std::vector<ProbeHit> unitary_variety_probe(const LaurentPoly& f, const GridSpec& spec, double threshold,
                                            const GridOptions& opts = {});

/// m(f(u, u^n)) for a two-variable f.
double lawton_slice(const LaurentPoly& f, std::int64_t n);

nlohmann::json to_json(const RiemannSumResult& r);
nlohmann::json to_json(const ConvergenceTrace& t);

} // namespace algdyn
