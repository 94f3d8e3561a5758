#pragma once

// Fuglede-Kadison log-determinant estimates for right convolution by f in Z[Gamma].
// All values are log det = integral of log t against the spectral measure of |rho_f|.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "json.hpp"

#include "algdyn/group_ring.hpp"

namespace algdyn {

struct LogDetEstimate {
    std::string method;        // "finite-section" | "trace-series"
    double value = 0.0;
    double error_indicator = 0.0;

    // finite-section
    std::int64_t radius = 0;
    std::size_t section_size = 0;
    std::size_t discarded = 0;      // singular values at or below sigma_floor
    double sigma_max = 0.0;
    double sigma_floor = 0.0;

    // trace-series
    unsigned order = 0;
    mpq_class series;               // sum_{k<=N} (-1)^{k+1}/k tau(h^k), exact
    std::size_t nonzero_returns = 0; // k with tau(h^k) != 0
    double tail_bound = 0.0;
};

/// Section of rho_f on the ball B_r: the box [-r, r]^d for Z^d, and
/// {|a|, |b| <= r, |c| <= r^2} for the Heisenberg group. Returns (1/|B_r|) sum log sigma_i over
/// sigma_i > 1e-12 sigma_max. The error indicator is heuristic.
LogDetEstimate finite_section_logdet(const GroupRingElement& f, std::int64_t radius, std::size_t max_section = 6000);

/// f = f_e (1 + h) with |f_e| > sum_{g != e} |f_g|; log det = log|f_e| + sum (-1)^{k+1}/k tau(h^k).
/// Refuses (InputError) non-lopsided f and orders outside 1..60.
LogDetEstimate trace_series_logdet(const GroupRingElement& f, unsigned order);

inline constexpr unsigned max_trace_series_order = 60;

bool is_lopsided(const GroupRingElement& f);

struct EstimatorComparison {
    std::optional<LogDetEstimate> finite_section;
    std::optional<LogDetEstimate> trace_series;
    std::optional<std::string> trace_series_refusal;
    std::optional<double> gap;
    std::optional<double> reference;        // Mahler measure, Z^d only
    std::string reference_method;
};

EstimatorComparison compare_estimators(const GroupRingElement& f, std::int64_t radius, unsigned order);

nlohmann::json to_json(const LogDetEstimate& e);
nlohmann::json to_json(const EstimatorComparison& c);

} // namespace algdyn
