#include "partition.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "common.hpp"
#include "numtheory.hpp"

namespace irrlab {

Partition::Partition(std::vector<unsigned> p) : parts(std::move(p)) {
  for (unsigned x : parts)
    if (x == 0) throw DomainError("partition parts must be positive");
  std::sort(parts.begin(), parts.end());
}

unsigned Partition::n() const { return std::accumulate(parts.begin(), parts.end(), 0u); }

std::string Partition::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  os << ')';
  return os.str();
}

Partition parse_partition(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != '(' && c != ')' && c != ' ') s += c;
  std::vector<unsigned> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError("bad partition part '" + item + "'");
    const unsigned long v = std::stoul(item);
    if (v == 0 || v > 1'000'000) throw ParseError("partition parts must lie in [1, 10^6]");
    parts.push_back(static_cast<unsigned>(v));
  }
  if (parts.empty()) throw ParseError("empty partition");
  return Partition(std::move(parts));
}

std::vector<Partition> partitions_of(unsigned n) {
  std::vector<Partition> out;
  std::vector<unsigned> cur;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned rest, unsigned min_part) {
    if (rest == 0) {
      out.emplace_back(cur);
      return;
    }
    for (unsigned k = min_part; k <= rest; ++k) {
      cur.push_back(k);
      rec(rest - k, k);
      cur.pop_back();
    }
  };
  rec(n, 1);
  return out;
}

namespace {

std::map<unsigned, unsigned> counts_of(const Partition& p) {
  std::map<unsigned, unsigned> c;
  for (unsigned x : p.parts) ++c[x];
  return c;
}

}  // namespace

bool is_y_merging(const Partition& sigma, const Partition& rho, unsigned y) {
  if (sigma.n() != rho.n()) throw DomainError("partitions of different integers");
  if (y == 0) throw DomainError("y must be >= 1");
  const auto rc = counts_of(rho);
  std::vector<unsigned> values;
  std::vector<unsigned> remaining;
  for (auto [v, c] : rc) {
    values.push_back(v);
    remaining.push_back(c);
  }
  std::vector<unsigned> parts(sigma.parts.rbegin(), sigma.parts.rend());
  std::set<std::pair<std::size_t, std::vector<unsigned>>> dead;
  std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
    if (i == parts.size()) return std::all_of(remaining.begin(), remaining.end(), [](unsigned c) { return c == 0; });
    if (dead.count({i, remaining})) return false;
    const unsigned s = parts[i];
    for (std::size_t v = 0; v < values.size(); ++v) {
      if (s % values[v]) continue;
      const unsigned k = s / values[v];
      if (k > y || k > remaining[v]) continue;
      remaining[v] -= k;
      const bool ok = rec(i + 1);
      remaining[v] += k;
      if (ok) return true;
    }
    dead.insert({i, remaining});
    return false;
  };
  return rec(0);
}

std::set<Partition> enumerate_mergings(const Partition& rho, unsigned y) {
  if (y == 0) throw DomainError("y must be >= 1");
  if (rho.size() > 20) throw CapExceeded("enumerate_mergings supports at most 20 parts");
  // For each value v of multiplicity c: every partition of c into parts <= y
  // gives merged parts k*v.
  std::vector<std::vector<std::vector<unsigned>>> options;
  for (auto [v, c] : counts_of(rho)) {
    std::vector<std::vector<unsigned>> opts;
    for (const auto& q : partitions_of(c)) {
      if (q.parts.back() > y) continue;
      std::vector<unsigned> merged;
      for (unsigned k : q.parts) merged.push_back(k * v);
      opts.push_back(std::move(merged));
    }
    options.push_back(std::move(opts));
  }
  std::set<Partition> out;
  std::vector<unsigned> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == options.size()) {
      out.insert(Partition(cur));
      return;
    }
    for (const auto& o : options[i]) {
      const std::size_t mark = cur.size();
      cur.insert(cur.end(), o.begin(), o.end());
      rec(i + 1);
      cur.resize(mark);
    }
  };
  rec(0);
  return out;
}

Partition cycle_power(const Partition& sigma, uint64_t m) {
  if (m == 0) throw DomainError("power must be >= 1");
  std::vector<unsigned> out;
  for (unsigned l : sigma.parts) {
    const auto g = static_cast<unsigned>(std::gcd<uint64_t>(l, m));
    for (unsigned i = 0; i < g; ++i) out.push_back(l / g);
  }
  return Partition(std::move(out));
}

namespace {

// Searches for a grouping of cycles into block cycles for r blocks of size s.
class BlockSearch {
 public:
  BlockSearch(const Partition& sigma, unsigned r, unsigned s) : r_(r), s_(s) {
    for (auto [len, c] : counts_of(sigma)) {
      lengths_.push_back(len);
      counts_.push_back(c);
    }
  }

  bool run() { return place(r_); }
  const std::vector<std::pair<unsigned, std::vector<unsigned>>>& grouping() const { return grouping_; }

 private:
  bool place(unsigned blocks_left) {
    // Largest remaining cycle opens the next group.
    int top = -1;
    for (int i = static_cast<int>(lengths_.size()) - 1; i >= 0; --i)
      if (counts_[i]) {
        top = i;
        break;
      }
    if (top < 0) return blocks_left == 0;
    if (blocks_left == 0) return false;
    if (failed_.count({blocks_left, counts_})) return false;
    const unsigned L = lengths_[top];
    for (unsigned rp = 1; rp <= std::min(blocks_left, L); ++rp) {
      if (L % rp || L / rp > s_) continue;
      --counts_[top];
      std::vector<unsigned> members{L};
      if (fill(rp, s_ - L / rp, static_cast<std::size_t>(top), members, blocks_left)) return true;
      ++counts_[top];
    }
    failed_.insert({blocks_left, counts_});
    return false;
  }

  // Adds cycles with index <= i whose length is divisible by rp until the
  // group's quota (in units of rp) is met.
  bool fill(unsigned rp, unsigned quota, std::size_t i, std::vector<unsigned>& members, unsigned blocks_left) {
    if (quota == 0) {
      grouping_.emplace_back(rp, members);
      if (place(blocks_left - rp)) return true;
      grouping_.pop_back();
      return false;
    }
    for (std::size_t j = i + 1; j-- > 0;) {
      const unsigned len = lengths_[j];
      if (!counts_[j] || len % rp || len / rp > quota) continue;
      --counts_[j];
      members.push_back(len);
      const bool ok = fill(rp, quota - len / rp, j, members, blocks_left);
      members.pop_back();
      ++counts_[j];
      if (ok) return true;
    }
    return false;
  }

  unsigned r_, s_;
  std::vector<unsigned> lengths_;
  std::vector<unsigned> counts_;
  std::vector<std::pair<unsigned, std::vector<unsigned>>> grouping_;
  std::set<std::pair<unsigned, std::vector<unsigned>>> failed_;
};

}  // namespace

TransitivityVerdict transitive_overapprox(const Partition& sigma, unsigned n) {
  if (sigma.n() != n) throw DomainError("cycle type does not sum to n");
  TransitivityVerdict v;
  for (unsigned r = 2; r < n; ++r) {
    if (n % r) continue;
    BlockSearch search(sigma, r, n / r);
    if (search.run()) {
      v.blocks = r;
      v.grouping = search.grouping();
      std::ostringstream os;
      os << "block system with " << r << " blocks of size " << n / r << " is compatible";
      v.witness = os.str();
      return v;
    }
  }
  // Smallest support of a non-identity power: g^(L/q) for primes q | L.
  uint64_t L = 1;
  for (unsigned l : sigma.parts) L = std::lcm<uint64_t>(L, l);
  unsigned best = n + 1;
  uint64_t best_m = 0;
  for (auto [q, e] : factorize(L)) {
    const uint64_t m = L / q;
    unsigned support = 0;
    for (unsigned l : sigma.parts)
      if (m % l) support += l;
    if (support < best) {
      best = support;
      best_m = m;
    }
  }
  if (best_m != 0) {
    v.small_power = best_m;
    v.small_support = best;
  }
  // support <= (sqrt(n) - 1)/2  <=>  (2 support + 1)^2 <= n
  const bool excluded = best_m != 0 && static_cast<uint64_t>(2 * best + 1) * (2 * best + 1) <= n;
  std::ostringstream os;
  if (excluded) {
    v.definitely_not = true;
    os << "no block system; g^" << best_m << " has support " << best << " <= (sqrt(n)-1)/2";
  } else if (best_m == 0) {
    os << "no block system; identity permutation";
  } else {
    os << "no block system; smallest non-identity power support " << best << " exceeds (sqrt(n)-1)/2";
  }
  v.witness = os.str();
  return v;
}

void LPParams::validate() const {
  if (!(C >= 1)) throw DomainError("C must be >= 1");
  if (!(t > 0 && t < 1)) throw DomainError("t must lie in (0,1)");
  if (!(kappa > 0 && kappa <= 1)) throw DomainError("kappa must lie in (0,1]");
  if (!(delta > 0 && delta <= 0.1)) throw DomainError("delta must lie in (0,1/10]");
  if (!(theta >= 0)) throw DomainError("theta must be >= 0");
}

bool has_subset_sum(const std::vector<unsigned>& parts, unsigned target) {
  std::vector<bool> reach(target + 1, false);
  reach[0] = true;
  for (unsigned x : parts) {
    if (x > target) continue;
    for (unsigned s = target; s >= x; --s)
      if (reach[s - x]) reach[s] = true;
  }
  return reach[target];
}

PartitionEvents partition_events(const Partition& rho, unsigned n, const LPParams& params) {
  params.validate();
  if (rho.n() != n) throw DomainError("partition does not sum to n");
  PartitionEvents ev;
  const double a = params.alpha();
  const double N = n;
  const double logn = std::log(N);
  ev.gcd_threshold = std::pow(N, params.kappa * a);

  // E1: no two parts (distinct positions) <= n/4 with large gcd.
  ev.e1 = true;
  std::vector<unsigned> small;
  for (unsigned x : rho.parts)
    if (4.0 * x <= N) small.push_back(x);
  for (std::size_t i = 0; i < small.size() && ev.e1; ++i)
    for (std::size_t j = i + 1; j < small.size(); ++j)
      if (std::gcd(small[i], small[j]) >= ev.gcd_threshold) {
        ev.e1 = false;
        break;
      }

  // E2: no subset sum equals nj/r for r | n, 2 <= r <= n^(delta/2).
  std::vector<bool> reach(n + 1, false);
  reach[0] = true;
  for (unsigned x : rho.parts)
    for (unsigned s = n; s >= x; --s)
      if (reach[s - x]) reach[s] = true;
  ev.e2 = true;
  ev.e2_vacuous = true;
  const double rmax = std::pow(N, params.delta / 2);
  for (unsigned r = 2; r <= n && r <= rmax; ++r) {
    if (n % r) continue;
    ev.e2_vacuous = false;
    for (unsigned j = 1; j < r; ++j)
      if (reach[n / r * j]) ev.e2 = false;
  }

  // E3: at least (alpha t / 2) log n parts in [n^(1-alpha), n/log n].
  const double lo3 = std::pow(N, 1 - a), hi3 = N / logn;
  ev.e3_window_empty = std::ceil(lo3) > std::floor(hi3);
  unsigned c3 = 0;
  for (unsigned x : rho.parts)
    if (x >= lo3 && x <= hi3) ++c3;
  ev.e3 = c3 >= a * params.t / 2 * logn;

  // E4: at least (t/4) log n parts k <= sqrt(n)/3 with a prime factor > n^(1/8).
  const double lim4 = std::sqrt(N) / 3, pbound = std::pow(N, 0.125);
  unsigned c4 = 0;
  for (unsigned x : rho.parts) {
    if (x > lim4) continue;
    const auto f = factorize(x);
    if (!f.empty() && static_cast<double>(f.back().first) > pbound) ++c4;
  }
  ev.e4 = c4 >= params.t / 4 * logn;

  // E5: parts in [n^(1-2 alpha), n/log n] exist and have gcd 1.
  const double lo5 = std::pow(N, 1 - 2 * a), hi5 = N / logn;
  ev.e5_window_empty = std::ceil(lo5) > std::floor(hi5);
  unsigned g = 0;
  for (unsigned x : rho.parts)
    if (x >= lo5 && x <= hi5) g = std::gcd(g, x);
  ev.e5 = g == 1;
  return ev;
}

}  // namespace irrlab
