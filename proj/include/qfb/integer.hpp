#pragma once

// Exact integer helpers on top of GMP: factorization, squarefree parts,
// residue symbols and square roots modulo prime powers.

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace qfb {

using Factorization = std::vector<std::pair<mpz_class, int>>;

/// Composite cofactors above this bound that Pollard rho cannot split raise FactorizationLimit.
void set_factorization_limit(const mpz_class& bound);
mpz_class factorization_limit();

/// Prime factorization of |n| (n != 0), primes ascending.
Factorization factor(const mpz_class& n);

/// Distinct primes dividing |n|.
std::vector<mpz_class> prime_divisors(const mpz_class& n);

/// Signed squarefree kernel: n = s * k^2 with s squarefree.
mpz_class squarefree_part(const mpz_class& n);

bool is_perfect_square(const mpz_class& n);
bool is_rational_square(const mpq_class& q);

/// p-adic valuation of a nonzero rational.
long valuation(const mpq_class& q, const mpz_class& p);
long valuation(const mpz_class& n, const mpz_class& p);

/// Legendre symbol (a|p) for odd prime p, a integer; returns 0 when p | a.
int legendre(const mpz_class& a, const mpz_class& p);

/// a mod m for a rational whose denominator is prime to m, result in [0, m).
mpz_class reduce_mod(const mpq_class& a, const mpz_class& m);

/// A square root of a modulo the odd prime p (a a nonzero square mod p).
mpz_class sqrt_mod_prime(const mpz_class& a, const mpz_class& p);

/// A square root of a modulo p^k, a a unit square at p (for p = 2: a = 1 mod 8).
mpz_class sqrt_mod_prime_power(const mpz_class& a, const mpz_class& p, unsigned k);

/// Least quadratic nonresidue modulo the odd prime p.
std::uint64_t least_nonresidue(std::uint64_t p);

bool is_probable_prime(const mpz_class& n);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

}  // namespace qfb
