#include <functional>
#include <cstdint>
#include <random>
#include <vector>

#include "doctest.h"
#include "parline/f2ring.hpp"

using namespace parline::f2;

namespace {

Element gen(const RingPtr& r, std::string_view name) { return Element::generator(r, name); }
Element one(const RingPtr& r) { return Element::one(r); }

// All normal-form monomials, by brute enumeration of the exponent box.
std::vector<Monomial> basis(const Ring& ring) {
  std::vector<unsigned> limit(ring.rank(), 1);
  for (std::size_t i = 0; i < ring.rank(); ++i) {
    for (const auto& rel : ring.zero_ideal()) {
      Monomial pure;
      pure.exps[i] = rel.exps[i];
      if (rel.exps[i] > 0 && rel == pure) limit[i] = rel.exps[i] - 1U;
    }
  }
  std::vector<Monomial> out;
  Monomial cur;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == ring.rank()) {
      if (ring.is_normal(cur)) out.push_back(cur);
      return;
    }
    for (unsigned e = 0; e <= limit[i]; ++e) {
      cur.exps[i] = static_cast<std::uint16_t>(e);
      rec(i + 1);
    }
    cur.exps[i] = 0;
  };
  rec(0);
  return out;
}

Element random_element(const RingPtr& ring, const std::vector<Monomial>& b, std::mt19937_64& rng) {
  std::vector<Monomial> pick;
  for (const auto& m : b) {
    if (rng() % 3 == 0) pick.push_back(m);
  }
  return Element(ring, pick);
}

// Independent model of yhat(m): F2[t, x]/(t^{m+1}, (x^2 + t x)^{m+1}), with
// x-polynomials of degree < 2m+2 whose coefficients are t-bitmasks.
struct YhatModel {
  int m;
  using Poly = std::vector<std::uint64_t>;  // index = x power

  std::uint64_t tmask() const { return (m + 1 >= 64) ? ~0ULL : ((1ULL << (m + 1)) - 1); }

  static std::uint64_t tmul(std::uint64_t a, std::uint64_t b, std::uint64_t mask) {
    std::uint64_t r = 0;
    for (int i = 0; i < 64 && (b >> i); ++i) {
      if ((b >> i) & 1ULL) r ^= (a << i);
    }
    return r & mask;
  }

  Poly raw_mul(const Poly& a, const Poly& b) const {
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] ^= tmul(a[i], b[j], tmask());
    }
    return r;
  }

  // The monic relation (x^2 + t x)^{m+1}.
  Poly relation() const {
    Poly base{0, 0b10, 1};  // t x + x^2
    Poly r{1};
    for (int k = 0; k <= m; ++k) r = raw_mul(r, base);
    return r;
  }

  Poly reduce(Poly p) const {
    const Poly rel = relation();
    const std::size_t deg = 2 * static_cast<std::size_t>(m) + 2;
    if (p.size() < deg) p.resize(deg, 0);
    for (std::size_t i = p.size(); i-- > deg;) {
      const std::uint64_t c = p[i];
      if (!c) continue;
      for (std::size_t k = 0; k <= deg; ++k) p[i - deg + k] ^= tmul(c, rel[k], tmask());
    }
    p.resize(deg, 0);
    return p;
  }

  Poly mul(const Poly& a, const Poly& b) const { return reduce(raw_mul(a, b)); }

  Poly image(const Element& e) const {
    const Ring& ring = *e.ring();
    Poly out(2 * m + 2, 0);
    for (const auto& mono : e.terms()) {
      Poly term{1ULL << mono.exps[ring.index_of("t")]};
      for (unsigned j = 0; j < mono.exps[ring.index_of("y")]; ++j) term = raw_mul(term, Poly{0, 0b10, 1});
      if (mono.exps[ring.index_of("x")]) term = raw_mul(term, Poly{0, 1});
      term = reduce(term);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] ^= term[i];
    }
    return out;
  }
};

}  // namespace

TEST_CASE("ring_projective truncates at t^{m+1}") {
  auto r = ring_projective(2);
  auto t = gen(r, "t");
  CHECK_FALSE((t * t).is_zero());
  CHECK((t * t * t).is_zero());

  auto r0 = ring_projective(0);
  CHECK(gen(r0, "t").is_zero());
  CHECK(one(r0).is_one());

  auto r5 = ring_projective(5);
  auto t5 = gen(r5, "t");
  CHECK_FALSE(pow(t5, 5).is_zero());
  CHECK(pow(t5, 6).is_zero());
  CHECK(r5->kind() == RuleKind::TruncatedPoly);
  CHECK_THROWS_AS(ring_projective(-1), RingError);
}

TEST_CASE("ring_yhat quadratic rewrite") {
  auto r = ring_yhat(3);
  auto t = gen(r, "t");
  auto y = gen(r, "y");
  auto x = gen(r, "x");
  CHECK(r->kind() == RuleKind::QuadraticRewrite);
  CHECK(x * x == y + t * x);
  CHECK(x * (y + t * x) == x * y + t * y + t * t * x);
  CHECK(pow(t, 4).is_zero());
  CHECK(x * (t + x) == y);
  CHECK_THROWS_AS(ring_yhat(0), RingError);
}

TEST_CASE("ring_yhat agrees with the F2[t,x] model") {
  std::mt19937_64 rng(2024);
  for (int m = 1; m <= 5; ++m) {
    auto r = ring_yhat(m);
    const auto b = basis(*r);
    CHECK(b.size() == static_cast<std::size_t>(2 * (m + 1) * (m + 1)));
    YhatModel model{m};
    for (int trial = 0; trial < 40; ++trial) {
      auto p = random_element(r, b, rng);
      auto q = random_element(r, b, rng);
      CHECK(model.image(p * q) == model.mul(model.image(p), model.image(q)));
    }
  }
}

TEST_CASE("ring_yhat normal forms stay in the basis") {
  std::mt19937_64 rng(7);
  const int m = 4;
  auto r = ring_yhat(m);
  const auto b = basis(*r);
  for (int trial = 0; trial < 30; ++trial) {
    auto p = random_element(r, b, rng) * random_element(r, b, rng) * random_element(r, b, rng);
    for (const auto& mono : p.terms()) {
      CHECK(mono.exps[r->index_of("x")] <= 1);
      CHECK(mono.exps[r->index_of("t")] <= m);
      CHECK(mono.exps[r->index_of("y")] <= m);
    }
  }
}

TEST_CASE("ring_z relations") {
  auto r = ring_z(2);
  auto t = gen(r, "t");
  auto y = gen(r, "y");
  auto a = gen(r, "a");
  CHECK(r->kind() == RuleKind::MonomialZeroTest);
  CHECK((t * a).is_zero());
  CHECK_FALSE((y * a).is_zero());
  CHECK((y * y * a).is_zero());
  CHECK_THROWS_AS(ring_z(0), RingError);
}

TEST_CASE("ring_z closed-form zero test matches the relation list") {
  for (int m = 1; m <= 7; ++m) {
    auto r = ring_z(m);
    for (unsigned i = 0; i <= static_cast<unsigned>(m) + 2; ++i) {
      for (unsigned j = 0; j <= static_cast<unsigned>(m) + 2; ++j) {
        for (unsigned k = 0; k <= static_cast<unsigned>(m) + 2; ++k) {
          Monomial mono;
          mono.exps[0] = static_cast<std::uint16_t>(i);
          mono.exps[1] = static_cast<std::uint16_t>(j);
          mono.exps[2] = static_cast<std::uint16_t>(k);
          CHECK(r->divisible_by_ideal(mono) == ring_z_monomial_is_zero(m, i, j, k));
        }
      }
    }
  }
}

TEST_CASE("ring_z graded dimensions match the basis count") {
  for (int m = 1; m <= 8; ++m) {
    auto r = ring_z(m);
    const auto b = basis(*r);
    const int top = 3 * m + 2;
    std::vector<int> ours(top + 1, 0);
    for (const auto& mono : b) ++ours[r->degree(mono)];
    // {t^i y^j} and {y^j a^k : k >= 1, j + k <= m} with deg t = deg a = 1,
    // deg y = 2.
    std::vector<int> expected(top + 1, 0);
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) ++expected[i + 2 * j];
    }
    for (int j = 0; j <= m; ++j) {
      for (int k = 1; j + k <= m; ++k) ++expected[2 * j + k];
    }
    CHECK(ours == expected);
  }
}

TEST_CASE("ring_y0 truncations") {
  auto r = ring_y0(1, 1);
  auto t0 = gen(r, "t0");
  auto s = gen(r, "s");
  CHECK((t0 * t0).is_zero());
  CHECK(pow(s, 4).is_zero());
  CHECK_FALSE((t0 * pow(s, 3)).is_zero());
  CHECK(pow(t0 + s, 2) == s * s);

  auto r00 = ring_y0(0, 0);
  CHECK(gen(r00, "t0").is_zero());

  CHECK_THROWS_AS(ring_y0(1, 2), RingError);

  for (int m = 0; m <= 40; ++m) {
    const int q = __builtin_ctz(static_cast<unsigned>(m + 1));
    auto ry = ring_y0(q, m);
    auto tt = gen(ry, "t0");
    auto ss = gen(ry, "s");
    if (q > 0) CHECK_FALSE(pow(tt, (1U << q) - 1).is_zero());
    CHECK(pow(tt, 1U << q).is_zero());
    CHECK_FALSE(pow(ss, 2 * m + 1).is_zero());
    CHECK(pow(ss, 2 * m + 2).is_zero());
  }
}

TEST_CASE("ring_adjoin_x") {
  auto base = ring_projective(2);
  auto r = ring_adjoin_x(base, 3);
  auto t = gen(r, "t");
  auto x = gen(r, "x");
  CHECK_FALSE((t * t * pow(x, 3)).is_zero());
  CHECK(pow(x, 4).is_zero());
  CHECK((pow(t, 3) * x).is_zero());

  auto r0 = ring_adjoin_x(ring_projective(0), 2);
  CHECK(basis(*r0).size() == 3);

  CHECK_THROWS_AS(ring_adjoin_x(r, 2), RingError);
  CHECK(embed(Element::generator(base, "t"), r) == t);
  CHECK_THROWS_AS(embed(x, base), RingError);
}

TEST_CASE("ring_proj_bundle") {
  auto base = ring_truncated("F2[u]/(u^4)", {{"u", 1, 4}});
  auto u = gen(base, "u");
  {
    auto r = ring_proj_bundle(base, Element::zero(base), Element::zero(base));
    auto t = gen(r, "t");
    CHECK((t * t).is_zero());
  }
  {
    auto r = ring_proj_bundle(base, u, Element::zero(base));
    auto t = gen(r, "t");
    auto uu = embed(u, r);
    CHECK(t * t == uu * t);
    CHECK(pow(t, 3) == uu * uu * t);
  }
  {
    auto gb = ring_truncated("F2[w1,w2]", {{"w1", 1, 10}, {"w2", 2, 10}});
    auto w1 = gen(gb, "w1");
    auto w2 = gen(gb, "w2");
    auto r = ring_proj_bundle(gb, w1, w2);
    auto t = gen(r, "t");
    CHECK(pow(t, 3) == embed(w1 * w1 + w2, r) * t + embed(w1 * w2, r));
    CHECK_THROWS_AS(ring_proj_bundle(gb, w2, w1), RingError);
  }
}

TEST_CASE("add") {
  auto r = ring_yhat(2);
  auto t = gen(r, "t");
  auto y = gen(r, "y");
  auto x = gen(r, "x");
  CHECK((t + x + y) + (t + x + y) == Element::zero(r));
  CHECK((one(r) + t) + t == one(r));
  CHECK((t + y) + (y + x) == t + x);
  CHECK_THROWS_AS(t + gen(ring_projective(2), "t"), RingError);
  // Independent builds of the same presentation interoperate.
  CHECK(t + gen(ring_yhat(2), "t") == Element::zero(r));
}

TEST_CASE("mul") {
  auto r = ring_projective(4);
  auto t = gen(r, "t");
  auto p = one(r) + t + t * t;
  CHECK(one(r) * p == p);
  CHECK((t * pow(t, 4)).is_zero());
}

TEST_CASE("ring axioms on random elements") {
  std::mt19937_64 rng(99);
  const std::vector<RingPtr> rings{ring_projective(5), ring_yhat(2), ring_yhat(3), ring_z(3),
                                   ring_y0(2, 3),
                                   ring_proj_bundle(ring_yhat(1), gen(ring_yhat(1), "x"),
                                                    gen(ring_yhat(1), "y"), "h")};
  for (const auto& r : rings) {
    const auto b = basis(*r);
    for (int trial = 0; trial < 25; ++trial) {
      auto p = random_element(r, b, rng);
      auto q = random_element(r, b, rng);
      auto s = random_element(r, b, rng);
      CHECK(p + q == q + p);
      CHECK((p + q) + s == p + (q + s));
      CHECK((p + p).is_zero());
      CHECK(p * q == q * p);
      CHECK((p * q) * s == p * (q * s));
      CHECK(p * (q + s) == p * q + p * s);
      CHECK(square(p) == p * p);
      CHECK(pow(p, 5) == p * p * p * p * p);
    }
  }
}

TEST_CASE("invert") {
  auto r = ring_projective(2);
  auto t = gen(r, "t");
  CHECK(invert(one(r) + t) == one(r) + t + t * t);
  CHECK(invert(one(r)) == one(r));
  CHECK_THROWS_AS(invert(t), RingError);

  auto ry = ring_yhat(1);
  auto u = one(ry) + gen(ry, "t") + gen(ry, "y");
  CHECK(invert(u) * u == one(ry));

  std::mt19937_64 rng(5);
  for (const auto& ring : {ring_yhat(3), ring_z(4), ring_y0(1, 3), ring_projective(9)}) {
    const auto b = basis(*ring);
    for (int trial = 0; trial < 25; ++trial) {
      auto p = random_element(ring, b, rng);
      if (p.contains(Monomial{})) p += one(ring);
      auto unit = one(ring) + p;
      auto inv = invert(unit);
      CHECK(inv * unit == one(ring));
      // geometric series, summed directly
      Element series = one(ring);
      Element power = p;
      while (!power.is_zero()) {
        series += power;
        power *= p;
      }
      CHECK(inv == series);
    }
  }
}

TEST_CASE("coefficient") {
  auto r = ring_projective(3);
  auto t = gen(r, "t");
  CHECK(coefficient(one(r) + t + t * t, r->monomial({{"t", 1}})));
  CHECK_FALSE(coefficient(Element::zero(r), r->monomial({{"t", 2}})));
  CHECK_THROWS_AS(coefficient(t, r->monomial({{"t", 4}})), RingError);

  // (1+t)^{-1}(1+t+y)^{-1}(1+x) at m=2 contains t^0 y^2 x.
  auto ry = ring_yhat(2);
  auto ty = gen(ry, "t");
  auto s = invert(one(ry) + ty) * invert(one(ry) + ty + gen(ry, "y")) * (one(ry) + gen(ry, "x"));
  CHECK(coefficient(s, ry->monomial({{"y", 2}, {"x", 1}})));
}

TEST_CASE("homogeneous_part and max_nonzero_degree") {
  auto r = ring_projective(6);
  auto t = gen(r, "t");
  CHECK(homogeneous_part(one(r) + t + t * t, 1) == t);
  CHECK(homogeneous_part(Element::zero(r), 3).is_zero());
  for (int m = 0; m <= 10; ++m) {
    auto rm = ring_projective(m);
    CHECK(max_nonzero_degree(invert(one(rm) + gen(rm, "t"))) == m);
  }
  CHECK_FALSE(max_nonzero_degree(Element::zero(r)).has_value());
}

TEST_CASE("product_degree matches the full product") {
  std::mt19937_64 rng(11);
  for (const auto& ring : {ring_yhat(3), ring_z(3)}) {
    const auto b = basis(*ring);
    for (int trial = 0; trial < 10; ++trial) {
      auto p = random_element(ring, b, rng);
      auto q = random_element(ring, b, rng);
      for (int d = 0; d <= ring->degree_bound(); ++d) {
        CHECK(product_degree(p, q, d) == homogeneous_part(p * q, d));
      }
    }
  }
}

TEST_CASE("text form") {
  auto r = ring_yhat(3);
  auto t = gen(r, "t");
  auto y = gen(r, "y");
  auto x = gen(r, "x");
  CHECK(to_string(one(r) + t + t * t * y * x) == "1 + t + t^2*y*x");
  CHECK(to_string(Element::zero(r)) == "0");
  CHECK(to_string(x + t) == "t + x");
}
