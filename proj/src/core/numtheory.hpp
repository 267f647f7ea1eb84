#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <utility>
#include <vector>

namespace irrlab {

std::vector<uint64_t> primes_up_to(uint64_t limit);
// The first `count` primes.
std::vector<uint64_t> first_primes(std::size_t count);
uint64_t next_prime(uint64_t n);  // smallest prime > n

bool is_prime(uint64_t n);
uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);

// Prime factorization as (prime, exponent), ascending.
std::vector<std::pair<uint64_t, int>> factorize(uint64_t n);
std::vector<uint64_t> divisors(uint64_t n);
int mobius(uint64_t n);
bool is_squarefree(uint64_t n);
uint64_t euler_phi(uint64_t n);

// Number of monic irreducible polynomials of degree k over F_p.
mpz_class count_irreducibles(uint64_t p, unsigned k);

// Smallest v with p^v > bound.
unsigned ilog_ceil(uint64_t p, uint64_t bound);

inline int64_t floor_mod(int64_t a, int64_t m) {
  int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace irrlab
