#pragma once

// Zero-dimensional algebraic Z^d-actions over F_p: subshifts X of F_p^{Z^d} cut out by
// sum_m g_m x_{n+m} = 0 for every generator g and every n.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "json.hpp"

#include "algdyn/laurent.hpp"

namespace algdyn {

struct FpShiftSystem {
    std::uint64_t p = 2;
    std::size_t d = 1;
    std::vector<LaurentPoly> generators;

    /// Throws InputError unless p is prime and the generators are nonzero polynomials over F_p in d variables.
    void validate() const;

    /// {"p":2,"d":2,"generators":["1+u+v"]}; generators may also be polynomial JSON objects.
    static FpShiftSystem from_json(const nlohmann::json& j);
};

nlohmann::json to_json(const FpShiftSystem& sys);

/// Inclusive lattice box lo <= n <= hi.
struct Box {
    Exponent lo, hi;

    static Box cube(std::size_t d, std::int64_t side);   // [0, side-1]^d
    std::size_t dim() const { return lo.size(); }
    std::size_t size() const;
    bool contains(const Exponent& n) const;
    /// Position of n in lexicographic order (first coordinate slowest).
    std::size_t index(const Exponent& n) const;
    Exponent point(std::size_t index) const;
    Box expanded(std::int64_t by) const;
};

struct WindowCount {
    Box window;
    std::size_t constraint_rows = 0;   // translates of generators inside the window
    std::size_t constraint_rank = 0;
    std::size_t free_dimension = 0;    // solutions on the window = p^free_dimension
    std::size_t discrepancy_bound = 0; // boundary points * largest generator support
};

WindowCount window_count(const FpShiftSystem& sys, const Box& window);

/// Assignments x_n = value (values reduced mod p).
using CylinderSpec = std::map<Exponent, std::uint32_t>;

struct CylinderMeasure {
    mpq_class value;               // p^{-k} or 0
    std::size_t halo = 0;          // first halo of the three agreeing ones
    std::vector<mpq_class> history;  // value at halo, halo + 1, ...
    std::size_t window_points = 0;   // size of the largest window used
};

struct HaloOptions {
    std::size_t halo = 0;
    std::size_t max_halo = 8;          // last halo tried
    std::size_t max_points = 1 << 20;  // window budget
};

/// Haar measure of the cylinder, from rank computations on boxes around its coordinates.
/// Accepted once three consecutive halos agree; otherwise ConvergenceError.
CylinderMeasure cylinder_measure(const FpShiftSystem& sys, const CylinderSpec& cyl, const HaloOptions& opts = {});

/// alpha^m moves the defining coordinates of a cylinder from n to n + m.
CylinderSpec shift_cylinder(const CylinderSpec& cyl, const Exponent& m);

struct MixingDefectEntry {
    std::int64_t k;
    mpq_class measured;   // mu(intersection of alpha^{k n} B_n over n in F); 0 on conflicting assignments
    mpq_class defect;     // measured - product target
    std::size_t halo;
};

struct MixingDefectTrace {
    std::vector<Exponent> shape;
    mpq_class product_target;   // prod of mu(B_n)
    std::vector<MixingDefectEntry> entries;
};

MixingDefectTrace mixing_defect(const FpShiftSystem& sys, const std::vector<Exponent>& shape,
                                const std::vector<CylinderSpec>& cylinders, const std::vector<std::int64_t>& k_list,
                                const HaloOptions& opts = {});

/// Supports (up to translation) of all elements of the span of generator translates inside
/// the box having at most max_support terms. Each is a nonmixing set.
std::vector<SupportSet> ideal_support_search(const FpShiftSystem& sys, const Box& box, std::size_t max_support,
                                             std::size_t subset_budget = 20'000'000);

/// f^{p^k}, by k successive p-th powers.
LaurentPoly frobenius_dilate(const LaurentPoly& f, unsigned k);

struct WindowEntropyEntry {
    std::int64_t n;
    std::size_t free_dimension;
    mpq_class rate_over_log_p;   // free_dimension / n^d
    double rate;                 // rate_over_log_p * log p
    std::size_t discrepancy_bound;
};

struct WindowEntropyTrace {
    std::vector<WindowEntropyEntry> entries;
    std::optional<double> expected_limit;   // 0 for a single generator
};

WindowEntropyTrace window_entropy_trace(const FpShiftSystem& sys, const std::vector<std::int64_t>& n_list);

nlohmann::json to_json(const WindowCount& w);
nlohmann::json to_json(const CylinderMeasure& m);
nlohmann::json to_json(const MixingDefectTrace& t);
nlohmann::json to_json(const WindowEntropyTrace& t);
nlohmann::json to_json(const std::vector<SupportSet>& supports);

} // namespace algdyn
