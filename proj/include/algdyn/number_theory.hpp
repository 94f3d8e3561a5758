#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace algdyn {

/// Integer polynomial stored low degree first.
using ZCoeffs = std::vector<mpz_class>;

/// The n-th cyclotomic polynomial Phi_n (cached).
const ZCoeffs& cyclotomic_polynomial(std::uint64_t n);

/// Deterministic Miller-Rabin below 3.3e24 (first 13 prime bases); GMP's BPSW test above.
bool is_prime(const mpz_class& n);

/// Prime factorization of |n| >= 1 as sorted (prime, exponent) pairs.
/// Trial division first, then Pollard-Brent rho on the cofactor.
std::vector<std::pair<mpz_class, unsigned>> factor_integer(mpz_class n);

/// p-adic valuation of a nonzero integer.
unsigned padic_valuation(const mpz_class& n, const mpz_class& p);

} // namespace algdyn
