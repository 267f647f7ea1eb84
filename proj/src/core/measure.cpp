#include "measure.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "numtheory.hpp"

namespace irrlab {

Measure Measure::box(int64_t lo, int64_t hi) {
  if (lo > hi) throw DomainError("box measure needs LO <= HI");
  if (static_cast<unsigned __int128>(static_cast<__int128>(hi) - lo) >= (static_cast<unsigned __int128>(1) << 62))
    throw DomainError("box measure is too wide");
  Measure m;
  m.kind_ = Kind::Box;
  m.lo_ = lo;
  m.hi_ = hi;
  m.denom_ = static_cast<unsigned long>(hi - lo + 1);
  return m;
}

Measure Measure::uniform(std::vector<int64_t> atoms) {
  if (atoms.empty()) throw DomainError("measure support is empty");
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  // Contiguous supports are boxes; the closed-form Fourier path applies.
  if (atoms.back() - atoms.front() + 1 == static_cast<int64_t>(atoms.size()))
    return box(atoms.front(), atoms.back());
  Measure m;
  m.kind_ = Kind::Uniform;
  m.atoms_ = std::move(atoms);
  m.lo_ = m.atoms_.front();
  m.hi_ = m.atoms_.back();
  m.denom_ = static_cast<unsigned long>(m.atoms_.size());
  return m;
}

Measure Measure::weighted(std::vector<int64_t> atoms, std::vector<mpq_class> weights) {
  if (atoms.size() != weights.size()) throw DomainError("atom and weight counts differ");
  if (atoms.empty()) throw DomainError("measure support is empty");
  std::map<int64_t, mpq_class> merged;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    weights[i].canonicalize();
    if (sgn(weights[i]) <= 0) throw DomainError("weights must be positive");
    merged[atoms[i]] += weights[i];
  }
  mpq_class total = 0;
  for (auto& [a, w] : merged) total += w;
  if (total != 1) throw DomainError("weights do not sum to 1 (sum is " + total.get_str() + ")");

  Measure m;
  m.kind_ = Kind::Weighted;
  mpz_class denom = 1;
  for (auto& [a, w] : merged) {
    m.atoms_.push_back(a);
    m.weights_.push_back(w);
    mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), w.get_den_mpz_t());
  }
  m.denom_ = denom;
  for (auto& w : m.weights_) m.int_weights_.push_back(w.get_num() * (denom / w.get_den()));
  m.lo_ = m.atoms_.front();
  m.hi_ = m.atoms_.back();
  double acc = 0;
  for (auto& w : m.weights_) {
    acc += w.get_d();
    m.cumulative_.push_back(acc);
  }
  return m;
}

uint64_t Measure::size() const {
  if (kind_ == Kind::Box) return static_cast<uint64_t>(hi_ - lo_) + 1;
  return atoms_.size();
}

int64_t Measure::atom(uint64_t i) const { return kind_ == Kind::Box ? lo_ + static_cast<int64_t>(i) : atoms_.at(i); }

mpq_class Measure::weight(uint64_t i) const {
  if (kind_ == Kind::Weighted) return weights_.at(i);
  return mpq_class(1, denom_);
}

int64_t Measure::min_atom() const { return lo_; }
int64_t Measure::max_atom() const { return hi_; }

mpz_class Measure::int_weight(uint64_t i) const { return kind_ == Kind::Weighted ? int_weights_.at(i) : mpz_class(1); }
mpz_class Measure::weight_denominator() const { return denom_; }

std::vector<mpz_class> Measure::residue_counts(int64_t q) const {
  if (q < 1) throw DomainError("modulus must be positive");
  std::vector<mpz_class> out(static_cast<std::size_t>(q), 0);
  if (kind_ == Kind::Box) {
    const uint64_t n = size();
    const uint64_t full = n / static_cast<uint64_t>(q);
    const uint64_t rem = n % static_cast<uint64_t>(q);
    const int64_t start = floor_mod(lo_, q);
    for (int64_t r = 0; r < q; ++r) {
      const int64_t offset = floor_mod(r - start, q);
      out[r] = static_cast<unsigned long>(full + (static_cast<uint64_t>(offset) < rem ? 1 : 0));
    }
    return out;
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) out[floor_mod(atoms_[i], q)] += int_weight(i);
  return out;
}

mpq_class Measure::residue_mass(int64_t q, int64_t r) const {
  if (q < 2) throw DomainError("residue_mass needs q >= 2");
  auto counts = residue_counts(q);
  mpq_class out(counts[floor_mod(r, q)], denom_);
  out.canonicalize();
  return out;
}

bool Measure::residue_uniform(int64_t q) const {
  auto counts = residue_counts(q);
  return std::all_of(counts.begin(), counts.end(), [&](const mpz_class& c) { return c == counts[0]; });
}

int64_t Measure::sample(Stream& rng) const {
  switch (kind_) {
    case Kind::Box:
      return lo_ + static_cast<int64_t>(rng.below(size()));
    case Kind::Uniform:
      return atoms_[rng.below(atoms_.size())];
    case Kind::Weighted: {
      if (denom_.fits_ulong_p()) {
        uint64_t u = rng.below(denom_.get_ui());
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
          const uint64_t w = int_weights_[i].get_ui();
          if (u < w) return atoms_[i];
          u -= w;
        }
        return atoms_.back();
      }
      const double u = rng.unit();
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      return it == cumulative_.end() ? atoms_.back() : atoms_[it - cumulative_.begin()];
    }
  }
  return lo_;
}

std::string Measure::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Box:
      if (lo_ == hi_)
        os << "delta:" << lo_;
      else
        os << "box:" << lo_ << ".." << hi_;
      break;
    case Kind::Uniform:
      os << "uniform set of " << atoms_.size() << " atoms in [" << lo_ << "," << hi_ << "]";
      break;
    case Kind::Weighted:
      os << "weighted measure on " << atoms_.size() << " atoms in [" << lo_ << "," << hi_ << "]";
      break;
  }
  return os.str();
}

MeasureSequence::MeasureSequence(Measure m, std::string spec)
    : fallback_(std::make_shared<const Measure>(std::move(m))), spec_(std::move(spec)) {}

MeasureSequence::MeasureSequence(std::vector<Measure> explicit_terms, Measure fallback, std::string spec)
    : fallback_(std::make_shared<const Measure>(std::move(fallback))), spec_(std::move(spec)) {
  for (auto& m : explicit_terms) terms_.push_back(std::make_shared<const Measure>(std::move(m)));
}

const Measure& MeasureSequence::at(std::size_t j) const {
  if (!fallback_) throw DomainError("empty measure sequence");
  return j < terms_.size() ? *terms_[j] : *fallback_;
}

std::vector<std::size_t> MeasureSequence::distinct_indices(std::size_t n) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < std::min(n, terms_.size()); ++j) out.push_back(j);
  if (n > terms_.size()) out.push_back(terms_.size());
  return out;
}

namespace {

int64_t parse_int(std::string_view s, const std::string& what) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range) throw ParseError(what + ": integer out of range: " + std::string(s));
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ParseError(what + ": not an integer: '" + std::string(s) + "'");
  return v;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(line);
  }
  return out;
}

std::string file_arg(const std::string& body, const std::string& kind) {
  if (body.size() < 2 || body[0] != '@') throw ParseError(kind + " expects @PATH");
  return body.substr(1);
}

Measure parse_single(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParseError("measure spec lacks a kind prefix: '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string body = spec.substr(colon + 1);
  try {
    if (kind == "box") {
      const auto dots = body.find("..", 1);
      if (dots == std::string::npos) throw ParseError("box expects LO..HI");
      return Measure::box(parse_int(std::string_view(body).substr(0, dots), "box"),
                          parse_int(std::string_view(body).substr(dots + 2), "box"));
    }
    if (kind == "delta") return Measure::point(parse_int(body, "delta"));
    if (kind == "set") {
      std::vector<int64_t> atoms;
      for (auto& line : read_lines(file_arg(body, "set"))) atoms.push_back(parse_int(line, "set"));
      return Measure::uniform(std::move(atoms));
    }
    if (kind == "weighted") {
      std::vector<int64_t> atoms;
      std::vector<mpq_class> weights;
      for (auto& line : read_lines(file_arg(body, "weighted"))) {
        std::istringstream ls(line);
        std::string a, w, extra;
        if (!(ls >> a >> w) || (ls >> extra)) throw ParseError("weighted: expected 'atom num/den': " + line);
        atoms.push_back(parse_int(a, "weighted"));
        mpq_class q;
        if (q.set_str(w, 10) != 0 || w.find_first_not_of("0123456789/-+") != std::string::npos)
          throw ParseError("weighted: bad weight '" + w + "'");
        if (w.find('/') != std::string::npos && sgn(mpz_class(w.substr(w.find('/') + 1))) == 0)
          throw ParseError("weighted: zero denominator");
        q.canonicalize();
        weights.push_back(q);
      }
      return Measure::weighted(std::move(atoms), std::move(weights));
    }
    if (kind == "powers") {
      int64_t s = -1, h = -1;
      std::istringstream fields(body);
      std::string field;
      while (std::getline(fields, field, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ParseError("powers expects s=S,H=H");
        const auto key = field.substr(0, eq);
        const auto v = parse_int(std::string_view(field).substr(eq + 1), "powers");
        if (key == "s")
          s = v;
        else if (key == "H")
          h = v;
        else
          throw ParseError("powers: unknown key '" + key + "'");
      }
      if (s < 1 || h < 1) throw ParseError("powers needs s >= 1 and H >= 1");
      if (h > 10'000'000) throw ParseError("powers: H too large");
      std::vector<int64_t> atoms;
      for (int64_t k = 1; k <= h; ++k) {
        __int128 v = 1;
        for (int64_t e = 0; e < s; ++e) {
          v *= k;
          if (v > (static_cast<__int128>(1) << 62)) throw ParseError("powers: k^s overflows 64 bits");
        }
        atoms.push_back(static_cast<int64_t>(v));
      }
      return Measure::uniform(std::move(atoms));
    }
  } catch (const DomainError& e) {
    throw ParseError(spec + ": " + e.what());
  }
  throw ParseError("unknown measure kind '" + kind + "'");
}

}  // namespace

Measure parse_measure(const std::string& spec) {
  if (spec.rfind("seq:", 0) == 0) throw ParseError("seq: specs describe a sequence, not a single measure");
  return parse_single(spec);
}

MeasureSequence parse_measure_sequence(const std::string& spec) {
  if (spec.rfind("seq:", 0) != 0) return MeasureSequence(parse_single(spec), spec);
  std::vector<Measure> terms;
  std::string rest = spec.substr(4);
  std::size_t start = 0;
  while (true) {
    const auto bar = rest.find('|', start);
    terms.push_back(parse_single(rest.substr(start, bar == std::string::npos ? std::string::npos : bar - start)));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  Measure fallback = terms.back();
  terms.pop_back();
  return MeasureSequence(std::move(terms), std::move(fallback), spec);
}

}  // namespace irrlab

namespace irrlab {

bool residue_uniform_prefix(const MeasureSequence& mus, std::size_t n, int64_t q) {
  for (std::size_t j : mus.distinct_indices(n))
    if (!mus.at(j).residue_uniform(q)) return false;
  return true;
}

}  // namespace irrlab
