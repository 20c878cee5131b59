#pragma once

// Graded, finite-dimensional commutative algebras over F2 given by a small
// presentation: a monomial ideal (truncations and mixed monomial relations)
// plus optional quadratic rewrites g^2 -> R with R of g-degree at most one.
// Elements are kept in normal form at all times.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace parline::f2 {

inline constexpr std::size_t kMaxGenerators = 8;

class RingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exponent vector indexed by generator position. Unused slots stay zero.
struct Monomial {
  std::array<std::uint16_t, kMaxGenerators> exps{};

  constexpr auto operator<=>(const Monomial&) const = default;

  [[nodiscard]] bool is_one() const noexcept {
    for (auto e : exps) {
      if (e != 0) return false;
    }
    return true;
  }
  /// True if this monomial divides `other`.
  [[nodiscard]] bool divides(const Monomial& other) const noexcept {
    for (std::size_t i = 0; i < kMaxGenerators; ++i) {
      if (exps[i] > other.exps[i]) return false;
    }
    return true;
  }
};

/// Product of monomials as exponent vectors (no reduction).
Monomial operator*(const Monomial& a, const Monomial& b);

struct Generator {
  std::string name;
  int degree = 1;
};

/// g^2 -> replacement, where the replacement is a normal-form sum of
/// monomials that contain g with exponent at most one.
struct QuadraticRewrite {
  std::size_t generator = 0;
  std::vector<Monomial> replacement;
};

enum class RuleKind { TruncatedPoly, MonomialZeroTest, QuadraticRewrite };

/// Closed-form equivalent of membership in the monomial ideal. It must agree
/// with divisibility by the listed ideal generators.
using ZeroTest = std::function<bool(const Monomial&)>;

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// A presented ring. Immutable once built; share through RingPtr.
class Ring {
 public:
  Ring(std::string name, std::vector<Generator> generators,
       std::vector<Monomial> zero_ideal, std::vector<QuadraticRewrite> rewrites,
       RingPtr parent = nullptr, ZeroTest fast_zero = {});

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] const std::vector<Generator>& generators() const noexcept { return generators_; }
  [[nodiscard]] std::size_t rank() const noexcept { return generators_.size(); }
  [[nodiscard]] const std::vector<Monomial>& zero_ideal() const noexcept { return zero_ideal_; }
  [[nodiscard]] const std::vector<QuadraticRewrite>& rewrites() const noexcept { return rewrites_; }
  /// The ring this one was built from by adjoining one generator, if any.
  /// Its generators are a prefix of ours.
  [[nodiscard]] const RingPtr& parent() const noexcept { return parent_; }
  [[nodiscard]] RuleKind kind() const noexcept;

  [[nodiscard]] std::optional<std::size_t> find(std::string_view generator) const;
  [[nodiscard]] std::size_t index_of(std::string_view generator) const;

  [[nodiscard]] int degree(const Monomial& mono) const noexcept;
  /// Upper bound on the degree of any nonzero normal-form monomial.
  [[nodiscard]] int degree_bound() const noexcept { return degree_bound_; }

  /// Membership of the monomial in the monomial part of the ideal.
  [[nodiscard]] bool is_zero(const Monomial& mono) const;
  /// Same, always by divisibility against the listed ideal generators.
  [[nodiscard]] bool divisible_by_ideal(const Monomial& mono) const noexcept;
  /// Nonzero and not rewritable.
  [[nodiscard]] bool is_normal(const Monomial& mono) const;

  /// Normal form of a single monomial as a sorted, duplicate-free term list.
  [[nodiscard]] std::vector<Monomial> reduce(const Monomial& mono) const;

  /// Structural equality (same generators, relations and rewrites).
  [[nodiscard]] bool same_presentation(const Ring& other) const noexcept;

  /// Builds a monomial from (generator, exponent) pairs. No reduction.
  [[nodiscard]] Monomial monomial(
      std::initializer_list<std::pair<std::string_view, unsigned>> factors) const;

  /// Text form "t^2*y*x"; "1" for the unit monomial.
  [[nodiscard]] std::string format(const Monomial& mono) const;

 private:

  std::string name_;
  std::vector<Generator> generators_;
  std::vector<Monomial> zero_ideal_;
  std::vector<QuadraticRewrite> rewrites_;
  RingPtr parent_;
  ZeroTest fast_zero_;
  int degree_bound_ = 0;
};

/// An element of a presented ring: a set of normal-form monomials, each with
/// coefficient one.
class Element {
 public:
  explicit Element(RingPtr ring);
  /// Sums the normal forms of the given monomials (mod 2).
  Element(RingPtr ring, const std::vector<Monomial>& monomials);

  static Element zero(RingPtr ring) { return Element(std::move(ring)); }
  static Element one(RingPtr ring);
  static Element generator(RingPtr ring, std::string_view name);
  static Element monomial(RingPtr ring, const Monomial& mono);
  /// Adopts a strictly ascending list of normal-form monomials as is.
  static Element from_sorted(RingPtr ring, std::vector<Monomial> sorted_terms);

  [[nodiscard]] const RingPtr& ring() const noexcept { return ring_; }
  [[nodiscard]] const std::vector<Monomial>& terms() const noexcept { return terms_; }
  [[nodiscard]] bool is_zero() const noexcept { return terms_.empty(); }
  [[nodiscard]] bool is_one() const noexcept;
  [[nodiscard]] std::size_t size() const noexcept { return terms_.size(); }
  [[nodiscard]] bool contains(const Monomial& mono) const noexcept;

  friend bool operator==(const Element& a, const Element& b);

  Element& operator+=(const Element& other);
  Element& operator*=(const Element& other);

 private:
  RingPtr ring_;
  std::vector<Monomial> terms_;  // strictly ascending
};

Element operator+(const Element& p, const Element& q);
Element operator*(const Element& p, const Element& q);

Element add(const Element& p, const Element& q);
Element mul(const Element& p, const Element& q);
/// p^k by repeated squaring.
Element pow(const Element& p, unsigned k);
/// p^2, computed termwise (Frobenius).
Element square(const Element& p);
/// Inverse of 1 + p for p of strictly positive degree.
Element invert(const Element& u);
bool coefficient(const Element& p, const Monomial& mono);
Element homogeneous_part(const Element& p, int degree);
/// Largest degree with a nonzero homogeneous part; empty for zero.
std::optional<int> max_nonzero_degree(const Element& p);
/// homogeneous_part(p * q, degree) without forming the full product.
Element product_degree(const Element& p, const Element& q, int degree);
/// Image of a parent-ring element under the inclusion into `ring`.
Element embed(const Element& p, const RingPtr& ring);

/// "1 + t + t^2*y*x": terms by ascending degree, then generator order.
std::string to_string(const Element& p);

// Ring constructors.

/// Truncated polynomial ring F2[g_1, ..., g_k]/(g_i^{b_i}).
/// Each entry is (name, degree, nilpotency bound b_i).
RingPtr ring_truncated(std::string name,
                       const std::vector<std::tuple<std::string, int, unsigned>>& gens);
/// F2[t]/(t^{m+1}).
RingPtr ring_projective(int m);
/// F2[t, y, x]/(t^{m+1}, y^{m+1}, x^2 + t x + y).
RingPtr ring_yhat(int m);
/// F2[t, y, a]/(t^{m+1}, y^{m+1}, t a, y^{m+1-i} a^i for 1 <= i <= m+1).
RingPtr ring_z(int m);
/// F2[t0, s]/(t0^{2^q}, s^{2m+2}); requires 2^q | m+1.
RingPtr ring_y0(int q, int m);
/// base[x]/(x^{n+1}).
RingPtr ring_adjoin_x(const RingPtr& base, int n, std::string name = "x");
/// base[t]/(t^2 + w1 t + w2).
RingPtr ring_proj_bundle(const RingPtr& base, const Element& w1, const Element& w2,
                         std::string name = "t");

/// Zero test for ring_z written out as inequalities on (i, j, k) = exponents
/// of (t, y, a).
bool ring_z_monomial_is_zero(int m, unsigned i, unsigned j, unsigned k);

}  // namespace parline::f2
