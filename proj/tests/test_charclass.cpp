#include <vector>

#include "doctest.h"
#include "parline/charclass.hpp"

using namespace parline;
using namespace parline::charclass;
using f2::Element;

namespace {

// Pascal's triangle mod 2, rows 0..n_max.
std::vector<std::vector<int>> pascal_mod2(int n_max) {
  std::vector<std::vector<int>> rows(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    rows[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) rows[n][k] = (rows[n - 1][k - 1] + rows[n - 1][k]) % 2;
  }
  return rows;
}

Element gen(const f2::RingPtr& r, std::string_view name) { return Element::generator(r, name); }

}  // namespace

TEST_CASE("binom_mod2 against Pascal's triangle") {
  const auto rows = pascal_mod2(64);
  for (int n = 0; n <= 64; ++n) {
    for (int k = 0; k <= 70; ++k) {
      const bool expected = k <= n && rows[n][k] == 1;
      CHECK(binom_mod2(n, k) == expected);
    }
  }
  CHECK(binom_mod2(17, 0));
  CHECK_FALSE(binom_mod2(4, 2));
  CHECK(binom_mod2(5, 4));
}

TEST_CASE("binom_mod2_negative") {
  const auto rows = pascal_mod2(80);
  for (int i = 0; i <= 40; ++i) {
    CHECK(binom_mod2_negative(1, i));
    CHECK(binom_mod2_negative(2, i) == ((i + 1) % 2 == 1));
    for (int a = 1; a <= 40; ++a) {
      CHECK(binom_mod2_negative(a, i) == (rows[a + i - 1][i] == 1));
    }
  }
  CHECK(binom_mod2_negative(7, 0));
  CHECK_THROWS(binom_mod2_negative(0, 3));
}

TEST_CASE("r_of and q_of") {
  CHECK(r_of(1) == 2);
  CHECK(q_of(1) == 1);
  CHECK(r_of(2) == 2);
  CHECK(q_of(2) == 0);
  CHECK(r_of(3) == 3);
  CHECK(q_of(3) == 2);
  for (int m = 0; m <= 300; ++m) {
    const int r = r_of(m);
    const int q = q_of(m);
    CHECK((1 << (r - 1)) <= m + 1);
    CHECK(m + 1 < (1 << r));
    CHECK((m + 1) % (1 << q) == 0);
    CHECK((m + 1) % (1 << (q + 1)) != 0);
  }
}

TEST_CASE("w_minus") {
  auto r = f2::ring_projective(4);
  auto one = Element::one(r);
  auto t = gen(r, "t");
  CHECK(w_minus(BundleClass(1, one + t)) == one + t + t * t + f2::pow(t, 3) + f2::pow(t, 4));
  CHECK(w_minus(BundleClass(0, one)) == one);
  CHECK_THROWS(BundleClass(1, one + t * t));
  CHECK_THROWS(BundleClass(1, t));

  // (1+t)(1+t+x) over yhat: both series routes.
  auto ry = f2::ring_yhat(3);
  auto o = Element::one(ry);
  auto ty = gen(ry, "t");
  auto x = gen(ry, "x");
  auto y = gen(ry, "y");
  auto wm = w_minus(BundleClass(2, (o + ty) * (o + ty + x)));
  CHECK(wm == f2::invert(o + ty) * f2::invert(o + ty + y) * (o + x));
  CHECK(wm * (o + ty) * (o + ty + x) == o);
}

TEST_CASE("series route identity in yhat") {
  for (int m = 1; m <= 20; ++m) {
    auto r = f2::ring_yhat(m);
    auto o = Element::one(r);
    auto t = gen(r, "t");
    auto x = gen(r, "x");
    auto y = gen(r, "y");
    CHECK(o + t + y == (o + t + x) * (o + x));
    CHECK(f2::invert(o + t + y) * (o + x) == f2::invert(o + t + x));
  }
}

TEST_CASE("euler_line_tensor_quotient") {
  auto base = f2::ring_projective(2);
  auto rx = f2::ring_adjoin_x(base, 1);
  CHECK(euler_line_tensor_quotient(Element::zero(base), 1, rx) == gen(rx, "x"));
  CHECK(euler_line_tensor_quotient(gen(base, "t"), 1, rx) == gen(rx, "x") + gen(rx, "t"));

  auto rx4 = f2::ring_adjoin_x(base, 4);
  CHECK(euler_line_tensor_quotient(Element::zero(base), 4, rx4) == f2::pow(gen(rx4, "x"), 4));
  CHECK_THROWS(euler_line_tensor_quotient(gen(base, "t") * gen(base, "t"), 4, rx4));
  CHECK_THROWS(euler_line_tensor_quotient(gen(base, "t"), 1, base));
}

TEST_CASE("umkehr_px") {
  auto base = f2::ring_projective(3);
  for (int n = 1; n <= 5; ++n) {
    auto rx = f2::ring_adjoin_x(base, n);
    auto x = gen(rx, "x");
    CHECK(umkehr_px(f2::pow(x, n), n) == Element::one(base));
    CHECK(umkehr_px(gen(rx, "t") * f2::pow(x, n - 1), n).is_zero());
    CHECK_THROWS(umkehr_px(x, n + 1));
  }
}

TEST_CASE("umkehr_proj_bundle") {
  auto base = f2::ring_truncated("F2[w1,w2]", {{"w1", 1, 8}, {"w2", 2, 8}});
  auto w1 = gen(base, "w1");
  auto w2 = gen(base, "w2");
  auto pb = f2::ring_proj_bundle(base, w1, w2);
  auto t = gen(pb, "t");
  CHECK(umkehr_proj_bundle(t) == Element::one(base));
  CHECK(umkehr_proj_bundle(f2::embed(w2, pb)).is_zero());
  auto wm = w_minus(BundleClass(2, Element::one(base) + w1 + w2));
  for (int n = 1; n <= 6; ++n) {
    CHECK(umkehr_proj_bundle(f2::pow(t, n + 1)) == f2::homogeneous_part(wm, n));
  }
  CHECK_THROWS(umkehr_proj_bundle(w1));
}

TEST_CASE("key exponent 2^r-m-2 stays in [0, m]") {
  for (int m = 1; m <= 4096; ++m) {
    const auto p = parline::charclass::DimensionParams::for_theorem(m);
    const int e = (1 << p.r) - m - 2;
    CHECK(e >= 0);
    CHECK(e <= m);
  }
}

TEST_CASE("check_prelude") {
  auto a = check_prelude(2, 2);
  CHECK(a.passed);
  CHECK(a.detail.find("t^2") != std::string::npos);
  CHECK_FALSE(check_prelude(2, 3).passed);
  CHECK(check_prelude(5, 5).passed);
  for (int m = 1; m <= 12; ++m) {
    for (int n = 1; n <= 12; ++n) CHECK(check_prelude(m, n).passed == (n <= m));
  }
}

TEST_CASE("check_theorem_b examples") {
  auto b1 = check_theorem_b(1);
  CHECK(b1.r == 2);
  CHECK(b1.n == 4);
  CHECK(b1.key_monomial == "t^1*y^1*x");
  CHECK(b1.key_coefficient);
  CHECK(b1.passed);

  auto b2 = check_theorem_b(2);
  CHECK(b2.key_monomial == "t^0*y^2*x");
  CHECK(b2.key_coefficient);
  CHECK(b2.passed);

  auto b3 = check_theorem_b(3);
  CHECK(b3.r == 3);
  CHECK(b3.key_monomial == "t^3*y^3*x");
  CHECK(b3.key_coefficient);
  CHECK(b3.passed);
}

TEST_CASE("theorem_b series coefficients follow Lucas") {
  // coefficient of t^i y^j x^e in (1+t)^{-1}(1+t+y)^{-1}(1+x) is C(-j-2, i).
  for (int m = 1; m <= 12; ++m) {
    auto r = f2::ring_yhat(m);
    auto o = Element::one(r);
    auto t = gen(r, "t");
    auto s = f2::invert(o + t) * f2::invert(o + t + gen(r, "y")) * (o + gen(r, "x"));
    const int r_exp = r_of(m);
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        const bool lucas = binom_mod2_negative(j + 2, i);
        const bool shifted = (1 << r_exp) - j - 2 >= 0 && binom_mod2((1 << r_exp) - j - 2, i);
        CHECK(lucas == shifted);
        for (unsigned e = 0; e <= 1; ++e) {
          auto mono = r->monomial({{"t", i}, {"y", j}, {"x", e}});
          CHECK(f2::coefficient(s, mono) == lucas);
        }
      }
    }
  }
}

TEST_CASE("check_theorem_a") {
  CHECK_FALSE(check_theorem_a(1).passed);
  CHECK_FALSE(check_theorem_a(1).applicable);
  CHECK(check_theorem_a(1).consistent());
  CHECK(check_theorem_a(2).passed);
  CHECK(check_theorem_a(2).key_coefficient);
  auto a5 = check_theorem_a(5);
  CHECK(a5.r == 3);
  CHECK(a5.passed);
  for (int m = 1; m <= 24; ++m) {
    const bool boundary = m + 1 == (1 << (r_of(m) - 1));
    CHECK(check_theorem_a(m).passed == !boundary);
  }
}

TEST_CASE("check_theorem_a_v2") {
  auto a2 = check_theorem_a_v2(2);
  CHECK(a2.key_monomial == "t^1*y^2");
  CHECK(a2.key_coefficient);
  auto a4 = check_theorem_a_v2(4);
  CHECK(a4.key_monomial == "t^3*y^4");
  CHECK(a4.key_coefficient);
  CHECK_THROWS_AS(check_theorem_a_v2(1), std::domain_error);
  CHECK_THROWS_AS(check_theorem_a_v2(3), std::domain_error);

  // (1+t+y)^{-1} coefficients are C(-j-1, i).
  for (int m = 1; m <= 10; ++m) {
    auto r = f2::ring_yhat(m);
    auto w = f2::invert(Element::one(r) + gen(r, "t") + gen(r, "y"));
    for (int i = 0; i <= m; ++i) {
      for (int j = 0; j <= m; ++j) {
        CHECK(f2::coefficient(w, r->monomial({{"t", i}, {"y", j}})) == binom_mod2_negative(j + 1, i));
      }
    }
  }
}

TEST_CASE("check_corollary") {
  auto c2 = check_corollary(2);
  CHECK(c2.key_monomial == "t^0*y^2");
  CHECK(c2.passed);
  auto c1 = check_corollary(1);
  CHECK(c1.key_monomial == "t^1*y^1");
  CHECK(c1.passed);
  auto c6 = check_corollary(6);
  CHECK(c6.key_monomial == "t^0*y^6");
  CHECK(c6.passed);
  CHECK(c6.detail.find("agrees") != std::string::npos);
}

TEST_CASE("check_prop_q") {
  CHECK(prop_q_top_degree(1) == 4);
  CHECK(check_prop_q(1, 4).passed);
  CHECK_FALSE(check_prop_q(1, 5).passed);
  CHECK(prop_q_top_degree(3) == 10);
  CHECK(prop_q_top_degree(2) == 5);
  auto p2 = check_prop_q(2, 5);
  CHECK(p2.q == 0);
  CHECK(p2.passed);
  CHECK(p2.key_monomial == "t0^0*s^5");
  CHECK(p2.key_coefficient);
  for (int m = 1; m <= 12; ++m) {
    const int bound = 2 * m + (1 << q_of(m));
    for (int n = 1; n <= bound + 2; ++n) CHECK(check_prop_q(m, n).passed == (n <= bound));
  }
}

TEST_CASE("hurwitz_radon") {
  // rho(n) for n = 1..16, then powers of two.
  const int table[] = {1, 2, 1, 4, 1, 2, 1, 8, 1, 2, 1, 4, 1, 2, 1, 9};
  for (int n = 1; n <= 16; ++n) CHECK(hurwitz_radon(n) == table[n - 1]);
  CHECK(hurwitz_radon(32) == 10);
  CHECK(hurwitz_radon(64) == 12);
  CHECK(hurwitz_radon(128) == 16);
  CHECK(hurwitz_radon(256) == 17);
  CHECK(hurwitz_radon(3 * 256) == 17);
  // rho(2^{c+4} odd) = rho(2^c odd) + 8
  for (int c = 0; c < 20; ++c) {
    CHECK(hurwitz_radon(std::uint64_t{5} << (c + 4)) == hurwitz_radon(std::uint64_t{5} << c) + 8);
  }
  CHECK(alpha_of(1) == 1);
  CHECK(alpha_of(2) == 0);
  for (int m = 0; m <= 256; ++m) CHECK(alpha_of(m) <= q_of(m));
  auto cmp = compare_hurwitz(15);
  CHECK(cmp.q == 4);
  CHECK(cmp.rho == 9);
  CHECK(cmp.alpha == 4);
  CHECK(cmp.sharp_exponent == 15);
}

TEST_CASE("oracle_umkehr_product") {
  CHECK(oracle_umkehr_product(2, 2, 1, {0, 0}));
  CHECK(oracle_umkehr_product(2, 2, 2, {1, 2}));
  CHECK(oracle_umkehr_product(3, 1, 3, {3, 1}));
  CHECK_THROWS(oracle_umkehr_product(2, 2, 0, {1, 1}));

  // Direct expansion for xi = (t1) + (t2), n = 2: the degree-2 part of
  // (1+t1)^{-1}(1+t2)^{-1} is t1^2 + t1 t2 + t2^2, and the Umkehr side picks
  // out the same three monomials.
  auto base = f2::ring_truncated("b", {{"t1", 1, 3}, {"t2", 1, 3}});
  auto t1 = gen(base, "t1");
  auto t2 = gen(base, "t2");
  auto rx = f2::ring_adjoin_x(base, 2);
  auto lhs = umkehr_px(euler_line_tensor_quotient(t1, 2, rx) * euler_line_tensor_quotient(t2, 2, rx), 2);
  CHECK(lhs == t1 * t1 + t1 * t2 + t2 * t2);
}

TEST_CASE("oracle_umkehr_dual") {
  CHECK(oracle_umkehr_dual(20, 1));
  CHECK(oracle_umkehr_dual(20, 2));
  for (int n = 1; n <= 8; ++n) CHECK(oracle_umkehr_dual(10, n));
  CHECK_FALSE(oracle_umkehr_dual(20, 1, {true}));
  CHECK_FALSE(oracle_umkehr_dual(20, 3, {true}));
}
