#include "parline/f2ring.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

namespace parline::f2 {

namespace {

constexpr unsigned kMaxBound = 32767;

// Sorts and cancels equal monomials in pairs.
void canonicalize(std::vector<Monomial>& terms) {
  std::sort(terms.begin(), terms.end());
  std::size_t out = 0;
  std::size_t i = 0;
  while (i < terms.size()) {
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if ((j - i) % 2 == 1) terms[out++] = terms[i];
    i = j;
  }
  terms.resize(out);
}

Monomial pure_power(std::size_t index, unsigned exponent) {
  Monomial m;
  m.exps[index] = static_cast<std::uint16_t>(exponent);
  return m;
}

void require_same_ring(const Element& a, const Element& b) {
  if (a.ring() == b.ring()) return;
  if (!a.ring()->same_presentation(*b.ring())) {
    throw RingError("ring mismatch: " + a.ring()->name() + " vs " + b.ring()->name());
  }
}

}  // namespace

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial c;
  for (std::size_t i = 0; i < kMaxGenerators; ++i) {
    const unsigned e = unsigned{a.exps[i]} + unsigned{b.exps[i]};
    if (e > std::numeric_limits<std::uint16_t>::max()) {
      throw RingError("monomial exponent overflow");
    }
    c.exps[i] = static_cast<std::uint16_t>(e);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Ring

Ring::Ring(std::string name, std::vector<Generator> generators,
           std::vector<Monomial> zero_ideal, std::vector<QuadraticRewrite> rewrites,
           RingPtr parent, ZeroTest fast_zero)
    : name_(std::move(name)),
      generators_(std::move(generators)),
      zero_ideal_(std::move(zero_ideal)),
      rewrites_(std::move(rewrites)),
      parent_(std::move(parent)),
      fast_zero_(std::move(fast_zero)) {
  if (generators_.size() > kMaxGenerators) {
    throw RingError(name_ + ": too many generators");
  }
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].name.empty()) throw RingError(name_ + ": empty generator name");
    if (generators_[i].degree < 1) throw RingError(name_ + ": generator degree must be >= 1");
    for (std::size_t j = 0; j < i; ++j) {
      if (generators_[j].name == generators_[i].name) {
        throw RingError(name_ + ": duplicate generator " + generators_[i].name);
      }
    }
  }

  std::vector<bool> rewritten(generators_.size(), false);
  for (const auto& rw : rewrites_) {
    if (rw.generator >= generators_.size()) throw RingError(name_ + ": bad rewrite generator");
    if (rewritten[rw.generator]) throw RingError(name_ + ": generator rewritten twice");
    rewritten[rw.generator] = true;
  }

  std::vector<bool> truncated(generators_.size(), false);
  for (const auto& mono : zero_ideal_) {
    if (mono.is_one()) throw RingError(name_ + ": unit in the ideal");
    std::size_t support = 0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < kMaxGenerators; ++i) {
      if (mono.exps[i] == 0) continue;
      if (i >= generators_.size()) throw RingError(name_ + ": relation uses unknown generator");
      if (rewritten[i]) throw RingError(name_ + ": relation involves a rewritten generator");
      ++support;
      last = i;
    }
    if (support == 1) {
      if (mono.exps[last] > kMaxBound) throw RingError(name_ + ": truncation too large");
      truncated[last] = true;
    }
  }

  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (!rewritten[i] && !truncated[i]) {
      throw RingError(name_ + ": generator " + generators_[i].name + " is not nilpotent");
    }
  }

  for (const auto& rw : rewrites_) {
    const int target = 2 * generators_[rw.generator].degree;
    for (const auto& mono : rw.replacement) {
      if (mono.exps[rw.generator] > 1 || !is_normal(mono)) {
        throw RingError(name_ + ": rewrite replacement is not in normal form");
      }
      if (degree(mono) != target) {
        throw RingError(name_ + ": rewrite replacement is not homogeneous");
      }
    }
    if (!std::is_sorted(rw.replacement.begin(), rw.replacement.end()) ||
        std::adjacent_find(rw.replacement.begin(), rw.replacement.end()) !=
            rw.replacement.end()) {
      throw RingError(name_ + ": rewrite replacement is not canonical");
    }
  }

  // Box-corner bound: every nonzero normal monomial lies below the smallest
  // pure truncation of each generator.
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    unsigned max_exp = 1;
    if (!rewritten[i]) {
      max_exp = std::numeric_limits<unsigned>::max();
      for (const auto& mono : zero_ideal_) {
        if (mono.exps[i] > 0 && mono == pure_power(i, mono.exps[i])) {
          max_exp = std::min<unsigned>(max_exp, mono.exps[i] - 1U);
        }
      }
    }
    degree_bound_ += static_cast<int>(max_exp) * generators_[i].degree;
  }
}

RuleKind Ring::kind() const noexcept {
  if (!rewrites_.empty()) return RuleKind::QuadraticRewrite;
  for (const auto& mono : zero_ideal_) {
    std::size_t support = 0;
    for (auto e : mono.exps) support += (e != 0);
    if (support > 1) return RuleKind::MonomialZeroTest;
  }
  return RuleKind::TruncatedPoly;
}

std::optional<std::size_t> Ring::find(std::string_view generator) const {
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].name == generator) return i;
  }
  return std::nullopt;
}

std::size_t Ring::index_of(std::string_view generator) const {
  auto idx = find(generator);
  if (!idx) throw RingError(name_ + ": no generator named " + std::string(generator));
  return *idx;
}

int Ring::degree(const Monomial& mono) const noexcept {
  int d = 0;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    d += static_cast<int>(mono.exps[i]) * generators_[i].degree;
  }
  return d;
}

bool Ring::is_zero(const Monomial& mono) const {
  if (fast_zero_) return fast_zero_(mono);
  return divisible_by_ideal(mono);
}

bool Ring::divisible_by_ideal(const Monomial& mono) const noexcept {
  for (const auto& rel : zero_ideal_) {
    if (rel.divides(mono)) return true;
  }
  return false;
}

bool Ring::is_normal(const Monomial& mono) const {
  for (std::size_t i = generators_.size(); i < kMaxGenerators; ++i) {
    if (mono.exps[i] != 0) return false;
  }
  for (const auto& rw : rewrites_) {
    if (mono.exps[rw.generator] > 1) return false;
  }
  return !is_zero(mono);
}

std::vector<Monomial> Ring::reduce(const Monomial& mono) const {
  for (std::size_t i = generators_.size(); i < kMaxGenerators; ++i) {
    if (mono.exps[i] != 0) throw RingError(name_ + ": monomial uses unknown generator");
  }
  if (is_zero(mono)) return {};
  // Outermost rewrite first: its replacement never reintroduces it beyond
  // exponent one, and inner replacements do not mention it at all.
  for (auto it = rewrites_.rbegin(); it != rewrites_.rend(); ++it) {
    if (mono.exps[it->generator] < 2) continue;
    Monomial rest = mono;
    rest.exps[it->generator] = static_cast<std::uint16_t>(rest.exps[it->generator] - 2);
    const std::vector<Monomial> left = reduce(rest);
    std::vector<Monomial> out;
    out.reserve(left.size() * it->replacement.size());
    for (const auto& a : left) {
      for (const auto& b : it->replacement) {
        const Monomial c = a * b;
        if (is_normal(c)) {
          out.push_back(c);
        } else {
          auto sub = reduce(c);
          out.insert(out.end(), sub.begin(), sub.end());
        }
      }
    }
    canonicalize(out);
    return out;
  }
  return {mono};
}

bool Ring::same_presentation(const Ring& other) const noexcept {
  if (this == &other) return true;
  if (generators_.size() != other.generators_.size()) return false;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (generators_[i].name != other.generators_[i].name ||
        generators_[i].degree != other.generators_[i].degree) {
      return false;
    }
  }
  if (zero_ideal_ != other.zero_ideal_ || rewrites_.size() != other.rewrites_.size()) return false;
  for (std::size_t i = 0; i < rewrites_.size(); ++i) {
    if (rewrites_[i].generator != other.rewrites_[i].generator ||
        rewrites_[i].replacement != other.rewrites_[i].replacement) {
      return false;
    }
  }
  return true;
}

Monomial Ring::monomial(
    std::initializer_list<std::pair<std::string_view, unsigned>> factors) const {
  Monomial m;
  for (const auto& [gen, e] : factors) {
    const std::size_t i = index_of(gen);
    const unsigned total = unsigned{m.exps[i]} + e;
    if (total > std::numeric_limits<std::uint16_t>::max()) throw RingError("exponent overflow");
    m.exps[i] = static_cast<std::uint16_t>(total);
  }
  return m;
}

std::string Ring::format(const Monomial& mono) const {
  std::string out;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    if (mono.exps[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += generators_[i].name;
    if (mono.exps[i] != 1) out += '^' + std::to_string(mono.exps[i]);
  }
  return out.empty() ? "1" : out;
}

// ---------------------------------------------------------------------------
// Element

Element::Element(RingPtr ring) : ring_(std::move(ring)) {
  if (!ring_) throw RingError("null ring");
}

Element::Element(RingPtr ring, const std::vector<Monomial>& monomials) : Element(std::move(ring)) {
  for (const auto& m : monomials) {
    auto r = ring_->reduce(m);
    terms_.insert(terms_.end(), r.begin(), r.end());
  }
  canonicalize(terms_);
}

Element Element::one(RingPtr ring) { return monomial(std::move(ring), Monomial{}); }

Element Element::generator(RingPtr ring, std::string_view name) {
  const std::size_t i = ring->index_of(name);
  return monomial(std::move(ring), pure_power(i, 1));
}

Element Element::monomial(RingPtr ring, const Monomial& mono) {
  return Element(std::move(ring), std::vector<Monomial>{mono});
}

Element Element::from_sorted(RingPtr ring, std::vector<Monomial> sorted_terms) {
  Element e(std::move(ring));
  e.terms_ = std::move(sorted_terms);
  return e;
}

bool Element::is_one() const noexcept { return terms_.size() == 1 && terms_.front().is_one(); }

bool Element::contains(const Monomial& mono) const noexcept {
  return std::binary_search(terms_.begin(), terms_.end(), mono);
}

bool operator==(const Element& a, const Element& b) {
  if (a.ring_ != b.ring_ && !a.ring_->same_presentation(*b.ring_)) return false;
  return a.terms_ == b.terms_;
}

Element& Element::operator+=(const Element& other) {
  *this = add(*this, other);
  return *this;
}

Element& Element::operator*=(const Element& other) {
  *this = mul(*this, other);
  return *this;
}

Element operator+(const Element& p, const Element& q) { return add(p, q); }
Element operator*(const Element& p, const Element& q) { return mul(p, q); }

Element add(const Element& p, const Element& q) {
  require_same_ring(p, q);
  std::vector<Monomial> out;
  out.reserve(p.size() + q.size());
  std::set_symmetric_difference(p.terms().begin(), p.terms().end(), q.terms().begin(),
                                q.terms().end(), std::back_inserter(out));
  return Element::from_sorted(p.ring(), std::move(out));
}

Element mul(const Element& p, const Element& q) {
  require_same_ring(p, q);
  const Ring& ring = *p.ring();
  std::vector<Monomial> out;
  out.reserve(p.size() * q.size());
  for (const auto& a : p.terms()) {
    for (const auto& b : q.terms()) {
      const Monomial c = a * b;
      if (ring.is_normal(c)) {
        out.push_back(c);
      } else {
        auto r = ring.reduce(c);
        out.insert(out.end(), r.begin(), r.end());
      }
    }
  }
  canonicalize(out);
  return Element::from_sorted(p.ring(), std::move(out));
}

Element square(const Element& p) {
  const Ring& ring = *p.ring();
  std::vector<Monomial> out;
  out.reserve(p.size());
  for (const auto& a : p.terms()) {
    const Monomial c = a * a;
    if (ring.is_normal(c)) {
      out.push_back(c);
    } else {
      auto r = ring.reduce(c);
      out.insert(out.end(), r.begin(), r.end());
    }
  }
  canonicalize(out);
  return Element::from_sorted(p.ring(), std::move(out));
}

Element pow(const Element& p, unsigned k) {
  Element result = Element::one(p.ring());
  Element base = p;
  while (k > 0) {
    if (k & 1U) result = result * base;
    k >>= 1U;
    if (k > 0) base = square(base);
  }
  return result;
}

Element invert(const Element& u) {
  const Element one = Element::one(u.ring());
  if (!u.contains(one.terms().front())) {
    throw RingError("invert: constant term is not 1");
  }
  // (1 + p)^{-1} = (1 + p)(1 + p^2)(1 + p^4)... in characteristic 2; the
  // factors stop once p^{2^k} vanishes.
  const Element p = u + one;
  Element result = one;
  Element q = p;
  for (int guard = 0; !q.is_zero(); ++guard) {
    if (guard > 64) throw RingError("invert: element is not nilpotent");
    result = result + result * q;
    q = square(q);
  }
  return result;
}

bool coefficient(const Element& p, const Monomial& mono) {
  if (!p.ring()->is_normal(mono)) {
    throw RingError("coefficient: monomial " + p.ring()->format(mono) +
                    " is not in normal form for " + p.ring()->name());
  }
  return p.contains(mono);
}

Element homogeneous_part(const Element& p, int degree) {
  std::vector<Monomial> out;
  for (const auto& m : p.terms()) {
    if (p.ring()->degree(m) == degree) out.push_back(m);
  }
  return Element::from_sorted(p.ring(), std::move(out));
}

std::optional<int> max_nonzero_degree(const Element& p) {
  std::optional<int> best;
  for (const auto& m : p.terms()) {
    const int d = p.ring()->degree(m);
    if (!best || d > *best) best = d;
  }
  return best;
}

Element product_degree(const Element& p, const Element& q, int degree) {
  require_same_ring(p, q);
  const Ring& ring = *p.ring();
  std::map<int, std::vector<const Monomial*>> by_degree;
  for (const auto& b : q.terms()) by_degree[ring.degree(b)].push_back(&b);
  std::vector<Monomial> out;
  for (const auto& a : p.terms()) {
    auto it = by_degree.find(degree - ring.degree(a));
    if (it == by_degree.end()) continue;
    for (const Monomial* b : it->second) {
      const Monomial c = a * *b;
      if (ring.is_normal(c)) {
        out.push_back(c);
      } else {
        auto r = ring.reduce(c);
        out.insert(out.end(), r.begin(), r.end());
      }
    }
  }
  canonicalize(out);
  return Element::from_sorted(p.ring(), std::move(out));
}

Element embed(const Element& p, const RingPtr& ring) {
  for (const Ring* r = ring.get(); r != nullptr; r = r->parent().get()) {
    if (r->same_presentation(*p.ring())) return Element::from_sorted(ring, p.terms());
  }
  throw RingError("embed: " + p.ring()->name() + " is not a base of " + ring->name());
}

std::string to_string(const Element& p) {
  if (p.is_zero()) return "0";
  const Ring& ring = *p.ring();
  std::vector<Monomial> order = p.terms();
  std::sort(order.begin(), order.end(), [&](const Monomial& a, const Monomial& b) {
    const int da = ring.degree(a);
    const int db = ring.degree(b);
    if (da != db) return da < db;
    return a > b;
  });
  std::string out;
  for (const auto& m : order) {
    if (!out.empty()) out += " + ";
    out += ring.format(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Ring constructors

RingPtr ring_truncated(std::string name,
                       const std::vector<std::tuple<std::string, int, unsigned>>& gens) {
  std::vector<Generator> generators;
  std::vector<Monomial> ideal;
  for (const auto& [gname, degree, bound] : gens) {
    if (bound < 1 || bound > kMaxBound) throw RingError("truncation bound out of range");
    ideal.push_back(pure_power(generators.size(), bound));
    generators.push_back({gname, degree});
  }
  return std::make_shared<const Ring>(std::move(name), std::move(generators), std::move(ideal),
                                      std::vector<QuadraticRewrite>{});
}

RingPtr ring_projective(int m) {
  if (m < 0) throw RingError("ring_projective: m must be >= 0");
  return ring_truncated("projective(m=" + std::to_string(m) + ")",
                        {{"t", 1, static_cast<unsigned>(m) + 1}});
}

RingPtr ring_yhat(int m) {
  if (m < 1) throw RingError("ring_yhat: m must be >= 1");
  if (static_cast<unsigned>(m) + 1 > kMaxBound) throw RingError("ring_yhat: m too large");
  const auto b = static_cast<unsigned>(m) + 1;
  // generators t, y, x at positions 0, 1, 2; x^2 -> y + t x
  Monomial y = pure_power(1, 1);
  Monomial tx;
  tx.exps[0] = 1;
  tx.exps[2] = 1;
  std::vector<Monomial> repl{y, tx};
  std::sort(repl.begin(), repl.end());
  return std::make_shared<const Ring>(
      "yhat(m=" + std::to_string(m) + ")",
      std::vector<Generator>{{"t", 1}, {"y", 2}, {"x", 1}},
      std::vector<Monomial>{pure_power(0, b), pure_power(1, b)},
      std::vector<QuadraticRewrite>{{2, std::move(repl)}});
}

bool ring_z_monomial_is_zero(int m, unsigned i, unsigned j, unsigned k) {
  const auto mm = static_cast<unsigned>(m);
  return i > mm || j > mm || (k >= 1 && i >= 1) || (k >= 1 && j + k >= mm + 1);
}

RingPtr ring_z(int m) {
  if (m < 1) throw RingError("ring_z: m must be >= 1");
  if (static_cast<unsigned>(m) + 1 > kMaxBound) throw RingError("ring_z: m too large");
  const auto b = static_cast<unsigned>(m) + 1;
  // generators t, y, a at positions 0, 1, 2
  std::vector<Monomial> ideal{pure_power(0, b), pure_power(1, b)};
  Monomial ta;
  ta.exps[0] = 1;
  ta.exps[2] = 1;
  ideal.push_back(ta);
  for (unsigned i = 1; i <= b; ++i) {
    Monomial rel;
    rel.exps[1] = static_cast<std::uint16_t>(b - i);
    rel.exps[2] = static_cast<std::uint16_t>(i);
    ideal.push_back(rel);
  }
  ZeroTest test = [m](const Monomial& mono) {
    return ring_z_monomial_is_zero(m, mono.exps[0], mono.exps[1], mono.exps[2]);
  };
  return std::make_shared<const Ring>("z(m=" + std::to_string(m) + ")",
                                      std::vector<Generator>{{"t", 1}, {"y", 2}, {"a", 1}},
                                      std::move(ideal), std::vector<QuadraticRewrite>{}, nullptr,
                                      std::move(test));
}

RingPtr ring_y0(int q, int m) {
  if (q < 0 || m < 0 || q > 14) throw RingError("ring_y0: q, m out of range");
  const unsigned two_q = 1U << static_cast<unsigned>(q);
  if ((static_cast<unsigned>(m) + 1) % two_q != 0) {
    throw RingError("ring_y0: 2^q must divide m+1");
  }
  return ring_truncated("y0(q=" + std::to_string(q) + ",m=" + std::to_string(m) + ")",
                        {{"t0", 1, two_q}, {"s", 1, 2 * static_cast<unsigned>(m) + 2}});
}

RingPtr ring_adjoin_x(const RingPtr& base, int n, std::string name) {
  if (n < 1) throw RingError("ring_adjoin_x: n must be >= 1");
  if (base->find(name)) throw RingError("ring_adjoin_x: base already has a generator " + name);
  auto gens = base->generators();
  const std::size_t idx = gens.size();
  if (idx >= kMaxGenerators) throw RingError("ring_adjoin_x: too many generators");
  gens.push_back({name, 1});
  auto ideal = base->zero_ideal();
  ideal.push_back(pure_power(idx, static_cast<unsigned>(n) + 1));
  return std::make_shared<const Ring>(base->name() + "[" + name + "]/(" + name + "^" +
                                          std::to_string(n + 1) + ")",
                                      std::move(gens), std::move(ideal), base->rewrites(), base);
}

RingPtr ring_proj_bundle(const RingPtr& base, const Element& w1, const Element& w2,
                         std::string name) {
  if (!base->same_presentation(*w1.ring()) || !base->same_presentation(*w2.ring())) {
    throw RingError("ring_proj_bundle: w1, w2 must live in the base ring");
  }
  for (const auto& m : w1.terms()) {
    if (base->degree(m) != 1) throw RingError("ring_proj_bundle: w1 must have degree 1");
  }
  for (const auto& m : w2.terms()) {
    if (base->degree(m) != 2) throw RingError("ring_proj_bundle: w2 must have degree 2");
  }
  if (base->find(name)) throw RingError("ring_proj_bundle: base already has a generator " + name);
  auto gens = base->generators();
  const std::size_t idx = gens.size();
  if (idx >= kMaxGenerators) throw RingError("ring_proj_bundle: too many generators");
  gens.push_back({name, 1});
  // t^2 -> w1 t + w2
  std::vector<Monomial> repl = w2.terms();
  for (auto m : w1.terms()) {
    m.exps[idx] = 1;
    repl.push_back(m);
  }
  std::sort(repl.begin(), repl.end());
  auto rewrites = base->rewrites();
  rewrites.push_back({idx, std::move(repl)});
  return std::make_shared<const Ring>("P(" + base->name() + ")", std::move(gens),
                                      base->zero_ideal(), std::move(rewrites), base);
}

}  // namespace parline::f2
