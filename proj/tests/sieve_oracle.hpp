#pragma once

#include <gmpxx.h>

#include "oracles.hpp"

namespace oracle {

// Exact fraction of monic degree-n A over F_p with no irreducible factor I != T
// of degree <= m: mark every multiple I * B of such an I.
inline mpq_class rough_fraction(int64_t p, unsigned n, unsigned m) {
  const uint64_t total = ipow(static_cast<uint64_t>(p), n);
  std::vector<bool> smooth_hit(total, false);
  for (unsigned d = 1; d <= std::min(m, n); ++d)
    for (const Poly& I : irreducibles(p, d)) {
      if (d == 1 && I[0] == 0) continue;  // T itself
      for (uint64_t b = 0; b < ipow(static_cast<uint64_t>(p), n - d); ++b) {
        const Poly A = mul(I, monic(p, n - d, b), p);
        uint64_t idx = 0;
        for (unsigned j = n; j-- > 0;) idx = idx * p + static_cast<uint64_t>(A[j]);
        smooth_hit[idx] = true;
      }
    }
  uint64_t rough = 0;
  for (bool h : smooth_hit) rough += !h;
  mpq_class q(mpz_class(std::to_string(rough)), mpz_class(std::to_string(total)));
  q.canonicalize();
  return q;
}

}  // namespace oracle
