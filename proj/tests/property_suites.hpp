#pragma once

// Randomized property suites shared by the property binary and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>

namespace suites {

struct Outcome {
    explicit Outcome(std::string n) : name(std::move(n)) {}

    std::string name;
    std::size_t cases = 0;      // cases actually checked (skipped draws excluded)
    std::size_t failures = 0;
    std::string first_failure;

    bool ok() const { return failures == 0; }
    void fail(const std::string& what)
    {
        if (failures++ == 0) first_failure = what;
    }
};

// laurent
Outcome frobenius_support_law(std::uint64_t seed, std::size_t cases);
Outcome involute_involution(std::uint64_t seed, std::size_t cases);
Outcome grid_multiplicativity(std::uint64_t seed, std::size_t cases);
Outcome horner_agreement(std::uint64_t seed, std::size_t cases);

// mahler_local
Outcome local_global_identity(std::uint64_t seed, std::size_t cases);
Outcome mahler_multiplicativity(std::uint64_t seed, std::size_t cases);
Outcome cyclotomic_products(std::uint64_t seed, std::size_t cases);
Outcome padic_vanishing(std::uint64_t seed, std::size_t cases);
Outcome solenoid_conjugacy(std::uint64_t seed, std::size_t cases);

// mahler_torus
Outcome mk_multiplicativity(std::uint64_t seed, std::size_t cases);
Outcome mk_monomial_invariance(std::uint64_t seed, std::size_t cases);
Outcome mk_involute_invariance(std::uint64_t seed, std::size_t cases);

// periodic
Outcome toral_eigenvalue_identity(std::uint64_t seed, std::size_t cases);
Outcome toral_divisibility(std::uint64_t seed, std::size_t cases);
Outcome principal_cross_check(std::uint64_t seed, std::size_t cases);

// fp_shift
Outcome cylinder_measure_form(std::uint64_t seed, std::size_t cases);
Outcome cylinder_shift_invariance(std::uint64_t seed, std::size_t cases);
Outcome cylinder_coordinate_sum(std::uint64_t seed, std::size_t cases);
Outcome frobenius_in_ideal(std::uint64_t seed, std::size_t cases);

// fk_det
Outcome heisenberg_associativity(std::uint64_t seed, std::size_t cases);
Outcome involution_symmetry(std::uint64_t seed, std::size_t cases);
Outcome trace_series_multiplicativity(std::uint64_t seed, std::size_t cases);
Outcome trace_series_vs_torus(std::uint64_t seed, std::size_t cases);

} // namespace suites
