#include "parline/charclass.hpp"

#include <bit>
#include <initializer_list>
#include <stdexcept>

namespace parline::charclass {

using f2::Ring;

namespace {

// Report text for a key monomial: the listed generators always carry an
// explicit exponent (so "t^0*y^2"), the others appear only when present.
std::string key_text(const Ring& ring, const Monomial& mono,
                     std::initializer_list<std::string_view> explicit_gens) {
  std::string out;
  for (std::size_t i = 0; i < ring.rank(); ++i) {
    const auto& name = ring.generators()[i].name;
    bool is_explicit = false;
    for (auto g : explicit_gens) is_explicit |= (g == name);
    const unsigned e = mono.exps[i];
    if (!is_explicit && e == 0) continue;
    if (!out.empty()) out += '*';
    out += name;
    if (is_explicit || e != 1) out += '^' + std::to_string(e);
  }
  return out.empty() ? "1" : out;
}

std::vector<std::string> monomial_list(const Element& p) {
  std::vector<std::string> out;
  out.reserve(p.size());
  for (const auto& m : p.terms()) out.push_back(p.ring()->format(m));
  return out;
}

Monomial mono_ty(const Ring& ring, unsigned ti, unsigned yj, unsigned xe) {
  Monomial m;
  m.exps[ring.index_of("t")] = static_cast<std::uint16_t>(ti);
  m.exps[ring.index_of("y")] = static_cast<std::uint16_t>(yj);
  if (xe) m.exps[ring.index_of("x")] = 1;
  return m;
}

bool coefficient_or_zero(const Element& p, const Monomial& mono) {
  return p.ring()->is_normal(mono) && p.contains(mono);
}

void fill_params(VerificationReport& rep, int m) {
  rep.m = m;
  rep.r = r_of(m);
  rep.q = q_of(m);
}

// Degree-by-degree route agreement is used above this size to avoid forming
// dense elements of yhat(m).
constexpr int kFullRouteLimit = 96;

}  // namespace

bool binom_mod2(std::uint64_t n, std::uint64_t k) noexcept { return (n & k) == k; }

bool binom_mod2_negative(std::uint64_t a, std::uint64_t i) {
  if (a < 1) throw std::invalid_argument("binom_mod2_negative: a must be >= 1");
  return binom_mod2(a + i - 1, i);
}

int r_of(int m) {
  if (m < 0) throw std::invalid_argument("r_of: m must be >= 0");
  return std::bit_width(static_cast<unsigned>(m) + 1U);
}

int q_of(int m) {
  if (m < 0) throw std::invalid_argument("q_of: m must be >= 0");
  return std::countr_zero(static_cast<unsigned>(m) + 1U);
}

DimensionParams DimensionParams::for_theorem(int m) {
  DimensionParams p;
  p.m = m;
  p.r = r_of(m);
  p.q = q_of(m);
  p.n = m + (1 << p.r) - 1;
  return p;
}

BundleClass::BundleClass(int rank_, Element total_sw_) : rank(rank_), total_sw(std::move(total_sw_)) {
  if (rank < 0) throw std::invalid_argument("BundleClass: negative rank");
  if (!total_sw.contains(Monomial{})) {
    throw std::invalid_argument("BundleClass: total class must have constant term 1");
  }
  for (const auto& m : total_sw.terms()) {
    if (total_sw.ring()->degree(m) > rank) {
      throw std::invalid_argument("BundleClass: class above the rank is nonzero");
    }
  }
}

Element w_minus(const BundleClass& bundle) { return f2::invert(bundle.total_sw); }

namespace {

// Index of the generator adjoined last, checking that `ring` came from its
// parent by adjoining exactly one generator.
std::size_t adjoined_index(const Ring& ring) {
  if (!ring.parent() || ring.parent()->rank() + 1 != ring.rank()) {
    throw std::invalid_argument(ring.name() + " is not an extension by one generator");
  }
  return ring.rank() - 1;
}

Element coefficient_of_power(const Element& p, std::size_t idx, unsigned power) {
  std::vector<Monomial> out;
  for (auto m : p.terms()) {
    if (m.exps[idx] != power) continue;
    m.exps[idx] = 0;
    out.push_back(m);
  }
  // Dropping a coordinate that is constant on the selection keeps the order.
  return Element::from_sorted(p.ring()->parent(), std::move(out));
}

}  // namespace

Element euler_line_tensor_quotient(const Element& e_line, int n, const RingPtr& ring_x) {
  const std::size_t idx = adjoined_index(*ring_x);
  for (const auto& m : e_line.terms()) {
    if (e_line.ring()->degree(m) != 1) {
      throw std::invalid_argument("euler_line_tensor_quotient: line class must have degree 1");
    }
  }
  if (n < 0) throw std::invalid_argument("euler_line_tensor_quotient: n must be >= 0");
  const Element e = f2::embed(e_line, ring_x);
  const Element x = Element::generator(ring_x, ring_x->generators()[idx].name);
  Element sum = Element::zero(ring_x);
  Element e_pow = Element::one(ring_x);
  for (int j = 0; j <= n; ++j) {
    sum += e_pow * f2::pow(x, static_cast<unsigned>(n - j));
    e_pow *= e;
  }
  return sum;
}

Element umkehr_px(const Element& p, int n) {
  const Ring& ring = *p.ring();
  const std::size_t idx = adjoined_index(ring);
  Monomial top;
  top.exps[idx] = static_cast<std::uint16_t>(n + 1);
  if (n < 1 || !ring.divisible_by_ideal(top)) {
    throw std::invalid_argument("umkehr_px: ring does not truncate x at degree n+1");
  }
  Monomial below = top;
  below.exps[idx] = static_cast<std::uint16_t>(n);
  if (ring.divisible_by_ideal(below)) {
    throw std::invalid_argument("umkehr_px: x^n vanishes in " + ring.name());
  }
  return coefficient_of_power(p, idx, static_cast<unsigned>(n));
}

Element umkehr_proj_bundle(const Element& p) {
  const Ring& ring = *p.ring();
  const std::size_t idx = adjoined_index(ring);
  if (ring.rewrites().empty() || ring.rewrites().back().generator != idx) {
    throw std::invalid_argument("umkehr_proj_bundle: " + ring.name() + " is not a projective bundle");
  }
  return coefficient_of_power(p, idx, 1);
}

// ---------------------------------------------------------------------------

VerificationReport check_prelude(int m, int n) {
  if (m < 1 || n < 1) throw std::invalid_argument("check_prelude: m, n must be >= 1");
  const RingPtr ring = f2::ring_projective(m);
  const Element t = Element::generator(ring, "t");
  const BundleClass bundle(2, Element::one(ring) + t);  // R + lambda
  const Element part = f2::homogeneous_part(w_minus(bundle), n);

  VerificationReport rep;
  rep.check = "prelude";
  fill_params(rep, m);
  rep.n = n;
  Monomial key;
  key.exps[0] = static_cast<std::uint16_t>(n);
  rep.key_monomial = key_text(*ring, key, {"t"});
  rep.key_coefficient = coefficient_or_zero(part, key);
  rep.passed = !part.is_zero();
  rep.expected = n <= m;
  rep.witnesses = monomial_list(part);
  rep.detail = "w_" + std::to_string(n) + "(-(R+lambda)) = " + f2::to_string(part);
  return rep;
}

namespace {

struct YhatSeries {
  RingPtr ring;
  Element one, t, y, x;
  Element inv_1t;   // (1+t)^{-1}
  Element inv_1ty;  // (1+t+y)^{-1}
};

YhatSeries yhat_series(int m) {
  const RingPtr ring = f2::ring_yhat(m);
  YhatSeries s{ring,
               Element::one(ring),
               Element::generator(ring, "t"),
               Element::generator(ring, "y"),
               Element::generator(ring, "x"),
               Element::zero(ring),
               Element::zero(ring)};
  s.inv_1t = f2::invert(s.one + s.t);
  s.inv_1ty = f2::invert(s.one + s.t + s.y);
  return s;
}

// Degree-n part of (1+t)^{-1}(1+t+y)^{-1}(1+x).
Element theorem_b_class(const YhatSeries& s, int n) {
  return f2::product_degree(s.inv_1t * (s.one + s.x), s.inv_1ty, n);
}

// (1+t)^{-1}(1+t+x)^{-1} against (1+t)^{-1}(1+t+y)^{-1}(1+x), using
// 1+t+y = (1+t+x)(1+x).
bool routes_agree(const YhatSeries& s, int m, int n, const Element& class_n) {
  const Element inv_1tx = f2::invert(s.one + s.t + s.x);
  if (m <= kFullRouteLimit) {
    return s.inv_1t * inv_1tx == s.inv_1t * s.inv_1ty * (s.one + s.x);
  }
  return f2::product_degree(s.inv_1t, inv_1tx, n) == class_n;
}

}  // namespace

VerificationReport check_theorem_b(int m) {
  if (m < 1) throw std::invalid_argument("check_theorem_b: m must be >= 1");
  const DimensionParams p = DimensionParams::for_theorem(m);
  const YhatSeries s = yhat_series(m);
  const Element class_n = theorem_b_class(s, p.n);

  VerificationReport rep;
  rep.check = "theorem_b";
  fill_params(rep, m);
  rep.n = p.n;
  // 2^r - m - 2 lies in [0, m] because 2^{r-1} <= m+1 < 2^r.
  const unsigned ti = (1U << p.r) - static_cast<unsigned>(m) - 2U;
  const Monomial key = mono_ty(*s.ring, ti, static_cast<unsigned>(m), 1);
  rep.key_monomial = key_text(*s.ring, key, {"t", "y"});
  rep.key_coefficient = coefficient_or_zero(class_n, key);
  const bool agree = routes_agree(s, m, p.n, class_n);
  rep.passed = !class_n.is_zero() && rep.key_coefficient && agree;
  rep.expected = true;
  rep.witnesses = monomial_list(class_n);
  rep.detail = std::string("w_n(-(lambda (x) (R+mu))) has ") + std::to_string(class_n.size()) +
               " monomials in degree n; series routes " + (agree ? "agree" : "DISAGREE");
  return rep;
}

VerificationReport check_theorem_a(int m) {
  if (m < 1) throw std::invalid_argument("check_theorem_a: m must be >= 1");
  const DimensionParams p = DimensionParams::for_theorem(m);
  const YhatSeries s = yhat_series(m);
  const Element class_n = theorem_b_class(s, p.n);
  const Element with_z = s.t * class_n;  // e(lambda) w_n(...)

  VerificationReport rep;
  rep.check = "theorem_a";
  fill_params(rep, m);
  rep.n = p.n;
  const unsigned ti = (1U << p.r) - static_cast<unsigned>(m) - 1U;
  const Monomial key = mono_ty(*s.ring, ti, static_cast<unsigned>(m), 1);
  rep.key_monomial = key_text(*s.ring, key, {"t", "y"});
  rep.key_coefficient = coefficient_or_zero(with_z, key);
  rep.passed = !with_z.is_zero();
  rep.applicable = !p.boundary();
  rep.expected = rep.applicable;
  rep.witnesses = monomial_list(with_z);
  rep.detail = rep.applicable ? "t * w_n(-(lambda (x) (R+mu))) in degree n+1"
                              : "not applicable: m+1 = 2^(r-1); t * w_n vanishes";
  return rep;
}

VerificationReport check_theorem_a_v2(int m) {
  if (m < 1) throw std::invalid_argument("check_theorem_a_v2: m must be >= 1");
  const DimensionParams p = DimensionParams::for_theorem(m);
  if (p.boundary()) {
    throw std::domain_error("check_theorem_a_v2: m+1 = 2^(r-1) is outside the statement");
  }
  const RingPtr ring = f2::ring_yhat(m);
  const Element one = Element::one(ring);
  const Element w = f2::invert(one + Element::generator(ring, "t") + Element::generator(ring, "y"));
  const Element part = f2::homogeneous_part(w, p.n);

  VerificationReport rep;
  rep.check = "theorem_a_v2";
  fill_params(rep, m);
  rep.n = p.n;
  const unsigned ti = (1U << p.r) - static_cast<unsigned>(m) - 1U;
  const Monomial key = mono_ty(*ring, ti, static_cast<unsigned>(m), 0);
  rep.key_monomial = key_text(*ring, key, {"t", "y"});
  rep.key_coefficient = coefficient_or_zero(part, key);
  rep.passed = rep.key_coefficient && !part.is_zero();
  rep.witnesses = monomial_list(part);
  rep.detail = "w_n(-zeta) lifted to the (t, y) subring";
  return rep;
}

VerificationReport check_corollary(int m) {
  if (m < 1) throw std::invalid_argument("check_corollary: m must be >= 1");
  const DimensionParams p = DimensionParams::for_theorem(m);
  const int degree = p.n - 1;

  const YhatSeries s = yhat_series(m);
  const Element part = f2::product_degree(s.inv_1t, s.inv_1ty, degree);

  // The same class in H*(Z): w(lambda) = 1+t, w(zeta) = 1 + (t+a) + y since
  // det(zeta) = lambda (x) alpha. Its image modulo a must be `part`.
  const RingPtr zr = f2::ring_z(m);
  const Element zone = Element::one(zr);
  const Element zt = Element::generator(zr, "t");
  const Element za = Element::generator(zr, "a");
  const Element zy = Element::generator(zr, "y");
  const Element zpart = f2::product_degree(f2::invert(zone + zt), f2::invert(zone + zt + za + zy), degree);
  std::vector<Monomial> reduced;
  for (const auto& mono : zpart.terms()) {
    if (mono.exps[2] != 0) continue;
    reduced.push_back(mono_ty(*s.ring, mono.exps[0], mono.exps[1], 0));
  }
  const Element image(s.ring, reduced);
  const bool z_agrees = image == part;

  VerificationReport rep;
  rep.check = "corollary";
  fill_params(rep, m);
  rep.n = p.n;
  const unsigned ti = (1U << p.r) - static_cast<unsigned>(m) - 2U;
  const Monomial key = mono_ty(*s.ring, ti, static_cast<unsigned>(m), 0);
  rep.key_monomial = key_text(*s.ring, key, {"t", "y"});
  rep.key_coefficient = coefficient_or_zero(part, key);
  rep.passed = rep.key_coefficient && !part.is_zero() && z_agrees;
  rep.witnesses = monomial_list(part);
  rep.detail = "w_{n-1}(-(lambda+zeta)) modulo a, degree " + std::to_string(degree) +
               (z_agrees ? "; H*(Z) image agrees" : "; H*(Z) image DISAGREES");
  return rep;
}

namespace {

struct Y0Series {
  RingPtr ring;
  Element inv_1t0;
  Element inv_1t0x0;
};

Y0Series y0_series(int m) {
  const RingPtr ring = f2::ring_y0(q_of(m), m);
  const Element one = Element::one(ring);
  const Element t0 = Element::generator(ring, "t0");
  const Element x0 = t0 + Element::generator(ring, "s");
  return {ring, f2::invert(one + t0), f2::invert(one + t0 + x0)};
}

constexpr std::size_t kFullProductLimit = std::size_t{1} << 20;

int top_degree(const Y0Series& s) {
  if (s.inv_1t0.size() * s.inv_1t0x0.size() <= kFullProductLimit) {
    return f2::max_nonzero_degree(s.inv_1t0 * s.inv_1t0x0).value_or(-1);
  }
  for (int d = s.ring->degree_bound(); d >= 0; --d) {
    if (!f2::product_degree(s.inv_1t0, s.inv_1t0x0, d).is_zero()) return d;
  }
  return -1;
}

}  // namespace

int prop_q_top_degree(int m) {
  if (m < 1) throw std::invalid_argument("prop_q_top_degree: m must be >= 1");
  return top_degree(y0_series(m));
}

VerificationReport check_prop_q(int m, int n) {
  if (m < 1 || n < 0) throw std::invalid_argument("check_prop_q: m must be >= 1, n >= 0");
  const Y0Series s = y0_series(m);
  const int q = q_of(m);
  const int bound = 2 * m + (1 << q);
  const Element part = f2::product_degree(s.inv_1t0, s.inv_1t0x0, n);
  const int top = top_degree(s);

  VerificationReport rep;
  rep.check = "prop_q";
  fill_params(rep, m);
  rep.n = n;
  Monomial key;
  key.exps[0] = static_cast<std::uint16_t>((1U << q) - 1U);
  key.exps[1] = static_cast<std::uint16_t>(2 * m + 1);
  rep.key_monomial = key_text(*s.ring, key, {"t0", "s"});
  rep.key_coefficient = coefficient_or_zero(f2::product_degree(s.inv_1t0, s.inv_1t0x0, bound), key);
  rep.passed = !part.is_zero() && top == bound;
  rep.expected = n <= bound;
  rep.witnesses = monomial_list(part);
  rep.detail = "top degree " + std::to_string(top) + ", 2m+2^q = " + std::to_string(bound);
  return rep;
}

std::vector<VerificationReport> class_reports(int m) {
  if (m < 1) throw std::invalid_argument("class_reports: m must be >= 1");
  std::vector<VerificationReport> out;
  out.push_back(check_prelude(m, m));
  out.push_back(check_theorem_b(m));
  out.push_back(check_theorem_a(m));
  if (DimensionParams::for_theorem(m).boundary()) {
    VerificationReport rep;
    rep.check = "theorem_a_v2";
    fill_params(rep, m);
    rep.n = DimensionParams::for_theorem(m).n;
    rep.applicable = false;
    rep.expected = false;
    rep.detail = "not applicable: m+1 = 2^(r-1)";
    out.push_back(std::move(rep));
  } else {
    out.push_back(check_theorem_a_v2(m));
  }
  out.push_back(check_corollary(m));
  out.push_back(check_prop_q(m, 2 * m + (1 << q_of(m))));
  return out;
}

// ---------------------------------------------------------------------------

int hurwitz_radon(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("hurwitz_radon: n must be >= 1");
  const int c = std::countr_zero(n);
  return 8 * (c / 4) + (1 << (c % 4));
}

int alpha_of(int m) {
  if (m < 0) throw std::invalid_argument("alpha_of: m must be >= 0");
  const int rho = hurwitz_radon(static_cast<std::uint64_t>(m) + 1);
  int alpha = 0;
  while ((1 << alpha) + 1 <= rho) ++alpha;
  return alpha;
}

HurwitzComparison compare_hurwitz(int m) {
  HurwitzComparison c;
  c.m = m;
  c.q = q_of(m);
  c.rho = hurwitz_radon(static_cast<std::uint64_t>(m) + 1);
  c.alpha = alpha_of(m);
  c.clifford_exponent = (std::uint64_t{1} << c.alpha) - 1;
  c.sharp_exponent = (std::uint64_t{1} << c.q) - 1;
  return c;
}

// ---------------------------------------------------------------------------

bool oracle_umkehr_product(int m1, int m2, int n, LineSpec lines) {
  if (m1 < 0 || m2 < 0 || n < 1 || lines.first > 3 || lines.second > 3) {
    throw std::invalid_argument("oracle_umkehr_product: bad parameters");
  }
  const RingPtr base = f2::ring_truncated(
      "P^" + std::to_string(m1) + " x P^" + std::to_string(m2),
      {{"t1", 1, static_cast<unsigned>(m1) + 1}, {"t2", 1, static_cast<unsigned>(m2) + 1}});
  const Element t1 = Element::generator(base, "t1");
  const Element t2 = Element::generator(base, "t2");
  auto line = [&](unsigned mask) {
    Element e = Element::zero(base);
    if (mask & 1U) e += t1;
    if (mask & 2U) e += t2;
    return e;
  };
  const Element e1 = line(lines.first);
  const Element e2 = line(lines.second);

  const RingPtr ring_x = f2::ring_adjoin_x(base, n);
  const Element euler = euler_line_tensor_quotient(e1, n, ring_x) *
                        euler_line_tensor_quotient(e2, n, ring_x);
  const Element lhs = umkehr_px(euler, n);

  const Element one = Element::one(base);
  const Element rhs = f2::homogeneous_part(w_minus(BundleClass(2, (one + e1) * (one + e2))), n);
  return lhs == rhs;
}

bool oracle_umkehr_dual(int k, int n, OracleOptions options) {
  if (k < 1 || n < 1) throw std::invalid_argument("oracle_umkehr_dual: k, n must be >= 1");
  const RingPtr base = f2::ring_truncated(
      "F2[w1,w2]/(w1^k,w2^k)", {{"w1", 1, static_cast<unsigned>(k)}, {"w2", 2, static_cast<unsigned>(k)}});
  const Element one = Element::one(base);
  const Element w1 = Element::generator(base, "w1");
  const Element w2 = Element::generator(base, "w2");
  const RingPtr bundle =
      f2::ring_proj_bundle(base, w1, options.mutate_rewrite ? Element::zero(base) : w2);

  const Element t = Element::generator(bundle, "t");
  const Element lhs = f2::pow(t, static_cast<unsigned>(n) + 1);

  const Element wm = w_minus(BundleClass(2, one + w1 + w2));
  const Element wn = f2::homogeneous_part(wm, n);
  const Element wn1 = f2::homogeneous_part(wm, n - 1);
  const Element rhs = f2::embed(wn, bundle) * t + f2::embed(w2 * wn1, bundle);
  return lhs == rhs && umkehr_proj_bundle(lhs) == wn;
}

}  // namespace parline::charclass
