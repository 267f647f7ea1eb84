#include "zpoly.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <mutex>
#include <sstream>

#include "common.hpp"
#include "numtheory.hpp"

namespace irrlab {

ZPoly::ZPoly(std::vector<mpz_class> coeffs) : c_(std::move(coeffs)) { normalize(); }

ZPoly ZPoly::from_ints(const std::vector<int64_t>& coeffs) {
  std::vector<mpz_class> c;
  for (int64_t x : coeffs) c.emplace_back(static_cast<long>(x));
  return ZPoly(std::move(c));
}

ZPoly ZPoly::monomial(std::size_t k, const mpz_class& c) {
  std::vector<mpz_class> v(k + 1, 0);
  v[k] = c;
  return ZPoly(std::move(v));
}

void ZPoly::normalize() {
  while (!c_.empty() && sgn(c_.back()) == 0) c_.pop_back();
}

const mpz_class& ZPoly::coeff(std::size_t i) const {
  static const mpz_class zero = 0;
  return i < c_.size() ? c_[i] : zero;
}

ZPoly ZPoly::operator+(const ZPoly& o) const {
  std::vector<mpz_class> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) + o.coeff(i);
  return ZPoly(std::move(r));
}

ZPoly ZPoly::operator-(const ZPoly& o) const {
  std::vector<mpz_class> r(std::max(c_.size(), o.c_.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = coeff(i) - o.coeff(i);
  return ZPoly(std::move(r));
}

ZPoly ZPoly::operator*(const ZPoly& o) const {
  if (is_zero() || o.is_zero()) return ZPoly();
  std::vector<mpz_class> r(c_.size() + o.c_.size() - 1, 0);
  for (std::size_t i = 0; i < c_.size(); ++i)
    for (std::size_t j = 0; j < o.c_.size(); ++j) mpz_addmul(r[i + j].get_mpz_t(), c_[i].get_mpz_t(), o.c_[j].get_mpz_t());
  return ZPoly(std::move(r));
}

bool ZPoly::divide_exact(const ZPoly& d, ZPoly& quotient) const {
  if (!d.is_monic()) throw DomainError("divisor must be monic");
  if (degree() < d.degree()) {
    quotient = ZPoly();
    return is_zero();
  }
  std::vector<mpz_class> r = c_;
  const auto dd = static_cast<std::size_t>(d.degree());
  std::vector<mpz_class> q(r.size() - dd, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    q[i] = r[i + dd];
    if (sgn(q[i]) == 0) continue;
    for (std::size_t j = 0; j <= dd; ++j) mpz_submul(r[i + j].get_mpz_t(), q[i].get_mpz_t(), d.c_[j].get_mpz_t());
  }
  for (std::size_t i = 0; i < dd; ++i)
    if (sgn(r[i]) != 0) return false;
  quotient = ZPoly(std::move(q));
  return true;
}

mpz_class ZPoly::eval(const mpz_class& x) const {
  mpz_class acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

uint64_t ZPoly::eval_mod(uint64_t x, uint64_t q) const {
  uint64_t acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const uint64_t c = mpz_fdiv_ui(c_[i].get_mpz_t(), q);
    acc = (mulmod(acc, x, q) + c) % q;
  }
  return acc;
}

FpPoly ZPoly::reduce(uint64_t p) const {
  std::vector<uint64_t> c(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) c[i] = mpz_fdiv_ui(c_[i].get_mpz_t(), p);
  return FpPoly(p, std::move(c));
}

ZPoly ZPoly::symmetric_mod(const mpz_class& m) const {
  std::vector<mpz_class> c(c_.size());
  const mpz_class half = m / 2;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    mpz_fdiv_r(c[i].get_mpz_t(), c_[i].get_mpz_t(), m.get_mpz_t());
    if (c[i] > half) c[i] -= m;
  }
  return ZPoly(std::move(c));
}

ZPoly ZPoly::derivative() const {
  if (c_.size() <= 1) return ZPoly();
  std::vector<mpz_class> c(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) c[i - 1] = c_[i] * static_cast<unsigned long>(i);
  return ZPoly(std::move(c));
}

std::string ZPoly::str() const {
  std::string s = "z:";
  if (c_.empty()) return s + "0";
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ',';
    s += c_[i].get_str();
  }
  return s;
}

std::string ZPoly::pretty() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const mpz_class& c = c_[i];
    if (sgn(c) == 0) continue;
    const mpz_class a = abs(c);
    if (first)
      os << (sgn(c) < 0 ? "-" : "");
    else
      os << (sgn(c) < 0 ? " - " : " + ");
    first = false;
    if (i == 0 || a != 1) os << a.get_str();
    if (i >= 1) os << (i == 0 || a != 1 ? "*T" : "T");
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

ZPoly parse_zpoly(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw ParseError("empty polynomial");
  if (s.rfind("z:", 0) == 0) {
    std::vector<mpz_class> c;
    std::stringstream ss(s.substr(2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty() && item[0] == '+') item.erase(0, 1);
      mpz_class v;
      if (item.empty() || v.set_str(item, 10) != 0) throw ParseError("bad coefficient '" + item + "'");
      c.push_back(v);
    }
    return ZPoly(std::move(c));
  }
  std::map<std::size_t, mpz_class> terms;
  std::size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      throw ParseError("expected '+' or '-' at position " + std::to_string(i));
    }
    std::string digits;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
    mpz_class coef = digits.empty() ? mpz_class(1) : mpz_class(digits);
    std::size_t power = 0;
    if (i < s.size() && s[i] == '*') {
      if (digits.empty()) throw ParseError("dangling '*'");
      ++i;
      if (i >= s.size() || (s[i] != 'T' && s[i] != 'x' && s[i] != 'X')) throw ParseError("expected T after '*'");
    }
    if (i < s.size() && (s[i] == 'T' || s[i] == 'x' || s[i] == 'X')) {
      ++i;
      power = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        std::string e;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) e += s[i++];
        if (e.empty() || e.size() > 6) throw ParseError("bad exponent");
        power = std::stoul(e);
      }
    } else if (digits.empty()) {
      throw ParseError("unexpected character in polynomial: '" + std::string(1, i < s.size() ? s[i] : '?') + "'");
    }
    terms[power] += sign * coef;
  }
  std::vector<mpz_class> c(terms.rbegin()->first + 1, 0);
  for (auto& [k, v] : terms) c[k] = v;
  return ZPoly(std::move(c));
}

ZPoly lift(const FpPoly& f) {
  std::vector<mpz_class> c;
  for (uint64_t x : f.coeffs()) c.emplace_back(static_cast<unsigned long>(x));
  return ZPoly(std::move(c));
}

ZPoly cyclotomic(unsigned d) {
  if (d == 0) throw DomainError("cyclotomic index must be positive");
  static std::mutex mu;
  static std::map<unsigned, ZPoly> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it != cache.end()) return it->second;
  }
  ZPoly num = ZPoly::monomial(d) - ZPoly::monomial(0);
  for (uint64_t e : divisors(d)) {
    if (e == d) continue;
    ZPoly q;
    if (!num.divide_exact(cyclotomic(static_cast<unsigned>(e)), q)) throw std::logic_error("cyclotomic division failed");
    num = q;
  }
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(d, num);
  return num;
}

const char* verdict_name(ZVerdict v) {
  switch (v) {
    case ZVerdict::Irreducible:
      return "irreducible";
    case ZVerdict::Reducible:
      return "reducible";
    case ZVerdict::Undecided:
      return "undecided";
  }
  return "undecided";
}

namespace {

// Extended Euclid over F_p: s a + t b = 1 for coprime a, b.
void xgcd(const FpPoly& a, const FpPoly& b, FpPoly& s, FpPoly& t) {
  const uint64_t p = a.p();
  FpPoly r0 = a, r1 = b, s0 = FpPoly::one(p), s1 = FpPoly::zero(p), t0 = FpPoly::zero(p), t1 = FpPoly::one(p);
  while (!r1.is_zero()) {
    FpPoly q, r;
    r0.divmod(r1, q, r);
    r0 = r1;
    r1 = r;
    FpPoly ns = s0 - q * s1, nt = t0 - q * t1;
    s0 = s1;
    s1 = ns;
    t0 = t1;
    t1 = nt;
  }
  if (r0.degree() != 0) throw std::logic_error("xgcd: inputs not coprime");
  const uint64_t inv = r0.inv(r0.lead());
  s = s0.scaled(inv);
  t = t0.scaled(inv);
}

// Lift A = g h mod p to A = G H mod p^k with G, H monic.
void hensel_pair(const ZPoly& A, const FpPoly& g, const FpPoly& h, unsigned k, ZPoly& G, ZPoly& H) {
  const uint64_t p = g.p();
  FpPoly s, t;
  xgcd(g, h, s, t);
  G = lift(g);
  H = lift(h);
  mpz_class pj = p;
  for (unsigned j = 1; j < k; ++j) {
    const ZPoly diff = A - G * H;
    std::vector<mpz_class> e(diff.coeffs().size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = diff.coeffs()[i] / pj;  // exact
    const FpPoly ep = ZPoly(std::move(e)).reduce(p);
    const FpPoly dg = (t * ep) % g;
    const FpPoly dh = (s * ep) % h;
    std::vector<mpz_class> scaled_g, scaled_h;
    for (uint64_t x : dg.coeffs()) scaled_g.push_back(pj * static_cast<unsigned long>(x));
    for (uint64_t x : dh.coeffs()) scaled_h.push_back(pj * static_cast<unsigned long>(x));
    G = G + ZPoly(std::move(scaled_g));
    H = H + ZPoly(std::move(scaled_h));
    pj *= static_cast<unsigned long>(p);
  }
}

void hensel_lift(const ZPoly& A, const std::vector<FpPoly>& factors, unsigned k, const mpz_class& pk,
                 std::vector<ZPoly>& out) {
  if (factors.size() == 1) {
    std::vector<mpz_class> c(A.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) mpz_fdiv_r(c[i].get_mpz_t(), A.coeffs()[i].get_mpz_t(), pk.get_mpz_t());
    out.push_back(ZPoly(std::move(c)));
    return;
  }
  const std::size_t half = factors.size() / 2;
  const uint64_t p = factors[0].p();
  FpPoly g = FpPoly::one(p), h = FpPoly::one(p);
  for (std::size_t i = 0; i < factors.size(); ++i) (i < half ? g : h) = (i < half ? g : h) * factors[i];
  ZPoly G, H;
  hensel_pair(A, g, h, k, G, H);
  hensel_lift(G, {factors.begin(), factors.begin() + static_cast<std::ptrdiff_t>(half)}, k, pk, out);
  hensel_lift(H, {factors.begin() + static_cast<std::ptrdiff_t>(half), factors.end()}, k, pk, out);
}

// Monic gcd over Q, returned with integer coefficients (A monic).
ZPoly rational_gcd(const ZPoly& a, const ZPoly& b) {
  auto to_q = [](const ZPoly& z) {
    std::vector<mpq_class> v;
    for (auto& c : z.coeffs()) v.emplace_back(c);
    return v;
  };
  auto trim = [](std::vector<mpq_class>& v) {
    while (!v.empty() && sgn(v.back()) == 0) v.pop_back();
  };
  std::vector<mpq_class> x = to_q(a), y = to_q(b);
  trim(x);
  trim(y);
  while (!y.empty()) {
    while (x.size() >= y.size() && !x.empty()) {
      const mpq_class f = x.back() / y.back();
      const std::size_t shift = x.size() - y.size();
      for (std::size_t i = 0; i < y.size(); ++i) x[i + shift] -= f * y[i];
      x.pop_back();
      trim(x);
    }
    std::swap(x, y);
  }
  std::vector<mpz_class> out;
  for (auto& c : x) {
    mpq_class m = c / x.back();
    m.canonicalize();
    if (m.get_den() != 1) throw std::logic_error("non-integral monic factor");
    out.push_back(m.get_num());
  }
  return ZPoly(std::move(out));
}

std::vector<bool> degree_set_from_counts(const std::vector<std::pair<unsigned, unsigned>>& counts, unsigned n) {
  std::vector<bool> set(n + 1, false);
  set[0] = true;
  for (auto& [d, c] : counts)
    for (unsigned rep = 0; rep < c; ++rep)
      for (unsigned k = n + 1; k-- > d;)
        if (set[k - d]) set[k] = true;
  return set;
}

}  // namespace

ZIrreducibility irreducible_over_Z(const ZPoly& a, const ZBudget& budget) {
  if (!a.is_monic()) throw DomainError("polynomial must be monic");
  const int n = a.degree();
  if (n < 1) throw DomainError("polynomial must have degree >= 1");
  ZIrreducibility out;
  if (n == 1) {
    out.verdict = ZVerdict::Irreducible;
    out.stage = 0;
    out.reason = "linear";
    return out;
  }
  const mpz_class& a0 = a.coeff(0);
  if (sgn(a0) == 0) {
    out.verdict = ZVerdict::Reducible;
    out.stage = 0;
    out.witness = ZPoly::monomial(1);
    out.reason = "zero constant term";
    return out;
  }

  // Degree sets of squarefree reductions. A proper factor of degree k forces
  // k into every one of them.
  std::vector<bool> allowed(static_cast<std::size_t>(n) + 1, true);
  uint64_t best_prime = 0;
  unsigned best_count = 0;
  bool certified = false;
  {
    uint64_t p = 1;
    for (unsigned scanned = 0; scanned < budget.stage1_scan_limit && out.stage1_primes.size() < budget.stage1_primes;
         ++scanned) {
      p = next_prime(p);
      const FpPoly ap = a.reduce(p);
      if (!is_squarefree(ap)) continue;
      const auto counts = distinct_degree_counts(ap);
      out.stage1_primes.push_back(p);
      unsigned total = 0;
      for (auto& [d, c] : counts) total += c;
      if (best_prime == 0 || total < best_count) {
        best_prime = p;
        best_count = total;
      }
      const auto set = degree_set_from_counts(counts, static_cast<unsigned>(n));
      for (int k = 0; k <= n; ++k) allowed[k] = allowed[k] && set[k];
      bool only_trivial = true;
      for (int k = 1; k < n; ++k) only_trivial = only_trivial && !allowed[k];
      if (only_trivial) {
        certified = true;
        break;
      }
    }
  }
  out.degree_set = allowed;

  // Stage 0: rational roots and cyclotomic factors, restricted to degrees the
  // reductions still allow.
  if (!certified && allowed[1] && mpz_sizeinbase(a0.get_mpz_t(), 2) <= 62) {
    const uint64_t c0 = mpz_class(abs(a0)).get_ui();
    for (uint64_t d : divisors(c0)) {
      for (int sign : {1, -1}) {
        const mpz_class r = sign * mpz_class(static_cast<unsigned long>(d));
        if (sgn(a.eval(r)) == 0) {
          out.verdict = ZVerdict::Reducible;
          out.stage = 0;
          out.witness = ZPoly({-r, mpz_class(1)});
          out.reason = "rational root " + r.get_str();
          return out;
        }
      }
    }
  }
  if (!certified) {
    for (unsigned d = 1; d <= 2u * static_cast<unsigned>(n) * static_cast<unsigned>(n) + 2; ++d) {
      const uint64_t phi = euler_phi(d);
      if (phi >= static_cast<uint64_t>(n) || !allowed[phi]) continue;
      ZPoly q;
      const ZPoly cyc = cyclotomic(d);
      if (a.divide_exact(cyc, q)) {
        out.verdict = ZVerdict::Reducible;
        out.stage = 0;
        out.witness = cyc;
        out.reason = "cyclotomic factor Phi_" + std::to_string(d);
        return out;
      }
    }
  }
  if (certified) {
    out.verdict = ZVerdict::Irreducible;
    out.stage = 1;
    out.reason = "reductions allow no proper factor degree";
    return out;
  }

  // Stage 2.
  if (best_prime == 0) {
    const ZPoly g = rational_gcd(a, a.derivative());
    if (g.degree() >= 1) {
      out.verdict = ZVerdict::Reducible;
      out.stage = 2;
      out.witness = g;
      out.reason = "repeated factor";
      return out;
    }
    out.reason = "no squarefree reduction found";
    return out;
  }
  if (n > budget.max_stage2_degree) {
    out.reason = "degree above the lifting cap";
    return out;
  }
  const uint64_t p = best_prime;
  std::vector<FpPoly> factors;
  for (auto& f : factor(a.reduce(p))) factors.push_back(f.f);
  // Mignotte-type bound: every monic factor has |coefficients| <= 2^n |A|_2.
  mpz_class norm_sq = 0;
  for (auto& c : a.coeffs()) norm_sq += c * c;
  mpz_class bound = sqrt(norm_sq) + 1;
  bound <<= static_cast<unsigned long>(n);
  unsigned k = 1;
  mpz_class pk = p;
  while (pk <= 2 * bound) {
    pk *= static_cast<unsigned long>(p);
    ++k;
  }
  std::vector<ZPoly> lifted;
  hensel_lift(a, factors, k, pk, lifted);
  const std::size_t r = lifted.size();
  std::vector<int> degs;
  for (auto& f : lifted) degs.push_back(f.degree());

  std::vector<std::size_t> pick;
  for (std::size_t size = 1; 2 * size <= r; ++size) {
    pick.resize(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      int deg = 0;
      for (auto i : pick) deg += degs[i];
      if (allowed[deg]) {
        if (++out.recombinations > budget.recombinations) {
          out.reason = "recombination budget exhausted";
          return out;
        }
        mpz_class c = 1;
        for (auto i : pick) c = c * lifted[i].coeff(0) % pk;
        ZPoly single({c});
        c = single.symmetric_mod(pk).coeff(0);
        if (sgn(c) != 0 && a0 % c == 0) {
          ZPoly cand({mpz_class(1)});
          for (auto i : pick) cand = (cand * lifted[i]).symmetric_mod(pk);
          ZPoly q;
          if (a.divide_exact(cand, q)) {
            out.verdict = ZVerdict::Reducible;
            out.stage = 2;
            out.witness = cand;
            out.reason = "factor found by recombination mod " + std::to_string(p) + "^" + std::to_string(k);
            return out;
          }
        }
      }
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == r - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  out.verdict = ZVerdict::Irreducible;
  out.stage = 2;
  out.reason = "no recombination divides";
  return out;
}

}  // namespace irrlab
