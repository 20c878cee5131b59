#pragma once

// Numerical search for 4-point configurations of polynomial maps
// R^{m+1} -> R^{n+1} whose image differences are parallel (or whose images are
// affinely / linearly degenerate), plus the constructive 1-D algorithm and a
// local estimate of the solution-set dimension.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parline::witness {

using Vec = std::vector<double>;

class WitnessError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// --- maps ------------------------------------------------------------------

struct Term {
  double c = 0.0;
  std::vector<int> e;  // one exponent per domain coordinate
};

struct BuiltinSpec {
  std::string name;
  int m = 0;
  int n = 0;
  int degree = 0;
  std::uint64_t seed = 0;
};

struct MapDescriptor {
  int domain_dim = 0;
  int codomain_dim = 0;
  std::vector<std::vector<Term>> coords;
  /// Set when the descriptor came from builtin_map.
  std::optional<BuiltinSpec> builtin;

  /// Throws WitnessError on shape violations.
  void validate() const;
  [[nodiscard]] int m() const noexcept { return domain_dim - 1; }
  [[nodiscard]] int n() const noexcept { return codomain_dim - 1; }
};

/// Names: affine_graph(m), parabola, moment(m, n), random_poly(m, n, degree, seed).
MapDescriptor builtin_map(const BuiltinSpec& spec);
/// Exponent vectors of total degree lo..hi in `vars` variables, graded, each
/// degree in descending lexicographic order.
std::vector<std::vector<int>> graded_monomials(int vars, int lo, int hi);

Vec eval_map(const MapDescriptor& f, const Vec& p);

/// FNV-1a 64 of the canonical coordinate JSON, as 16 hex digits.
std::string map_digest(const MapDescriptor& f);

// --- residuals -------------------------------------------------------------

inline constexpr double kZeroEps = 1e-13;

/// Squared sine of the angle between A and B; 0 when either is below zero_eps.
double parallel_residual(const Vec& a, const Vec& b, double zero_eps = kZeroEps);

using Quad = std::array<Vec, 4>;

/// sigma_3^2 / sigma_1^2 of [q1-q0, q2-q0, q3-q0].
double collinear_residual_images(const Quad& q, double zero_eps = kZeroEps);
double collinear_residual(const MapDescriptor& f, const Quad& p, double zero_eps = kZeroEps);
/// sigma_4^2 / sigma_1^2 of the four images, each scaled to unit length
/// (a zero image makes the set dependent).
double lin_dep_residual_vectors(const Quad& w, double zero_eps = kZeroEps);
double lin_dep_residual(const MapDescriptor& f, const Quad& p, double zero_eps = kZeroEps);

/// w -> (1, w) / sqrt(1 + |w|^2).
Vec hemisphere_lift(const Vec& w);

double min_pairwise_distance(const Quad& p);

// --- configurations --------------------------------------------------------

enum class Case { ParallelB, ParallelA, Collinear, LinearDependence, Line1d };

std::string case_name(Case c);
/// Accepts "b"/"a" as short forms of parallel_b/parallel_a.
Case parse_case(const std::string& s);

struct Configuration {
  Vec x;
  Vec u;
  Vec v;
  double delta = 0.25;
};

/// (x + du, x - du, -x + dv, -x - dv).
Quad config_to_points(const Configuration& c);

/// Case (b) points as (x0, x1, y0, y1): pairs {-x+dv, x+du} and {-x-dv, x-du}.
Quad case_b_points(const Configuration& c);
/// Case (a) points as (x0, x1, y0, y1): pairs {x-du, x+du} and {-x-dv, -x+dv}.
Quad case_a_points(const Configuration& c);

double objective_case_b(const Configuration& c, const MapDescriptor& f, double zero_eps = kZeroEps);
/// Throws WitnessError unless |u| = |v| = 1/sqrt(2) to within 1e-9.
double objective_case_a(const Configuration& c, const MapDescriptor& f, double zero_eps = kZeroEps);

// --- records ---------------------------------------------------------------

struct WitnessRecord {
  Case kind = Case::ParallelB;
  bool found = false;
  /// x0, x1, y0, y1 for the parallel cases and line_1d; x0..x3 otherwise.
  Quad points;
  double residual = 0.0;
  double min_pairwise_distance = 0.0;
  bool pair_sets_distinct = false;
  std::optional<Configuration> config;
  std::string map_digest;
  std::uint64_t seed = 0;
  int restarts_used = 0;
  /// "guaranteed" or "exploratory".
  std::string guarantee;
  std::string guarantee_note;
};

/// Residual of the record's points under the case's criterion.
double record_residual(Case kind, const MapDescriptor& f, const Quad& p, double zero_eps = kZeroEps);
/// Smallest distance between the unordered pairs {p0,p1} and {p2,p3}.
double pair_set_distance(const Quad& p);

struct Guarantee {
  bool guaranteed = false;
  std::string note;
};

/// Whether the dimensions of f fall under the existence statement for `kind`.
Guarantee guarantee_for(Case kind, int m, int n);

struct SearchConfig {
  double delta = 0.25;
  double tol = 1e-10;
  int restarts = 50;
  int max_iters = 4000;
  std::uint64_t seed = 0;
  double zero_eps = kZeroEps;
  /// Initial simplex edge length.
  double step = 0.2;
  /// Nelder-Mead coefficients.
  double reflect = 1.0;
  double expand = 2.0;
  double contract = 0.5;
  double shrink = 0.5;
  /// 0 = hardware concurrency. Never affects the result.
  int threads = 0;

  void validate() const;
};

/// Multi-start minimization. Restarts are processed in index order; the
/// returned record is the minimum (residual, index) over restarts 0..k, k the
/// first restart reaching tol (or all restarts when none does).
WitnessRecord search(const MapDescriptor& f, Case kind, const SearchConfig& cfg);

struct VerifyReport {
  bool passed = false;
  double residual = 0.0;
  double stored_residual = 0.0;
  bool residual_consistent = false;
  bool points_match_config = true;
  double min_pairwise_distance = 0.0;
  bool distinctness_ok = false;
  std::string detail;
};

VerifyReport verify_witness(const WitnessRecord& rec, const MapDescriptor& f, double tol,
                            double zero_eps = kZeroEps);

struct Find1dResult {
  WitnessRecord record;
  /// "collinear" or "bisection".
  std::string branch;
  bool ambiguous = false;
  std::string note;
};

/// f : R -> R^2 on [a, b].
Find1dResult find_1d(const MapDescriptor& f, double a, double b, double tol);

struct SingularityConfig {
  int samples = 40;
  double noise = 1e-5;
  double tol = 1e-22;
  double ratio_threshold = 1e-4;
  int max_iters = 20000;
  std::uint64_t seed = 0;
};

struct SingularityEstimate {
  WitnessRecord base;
  int samples = 0;
  int converged = 0;
  std::vector<double> singular_values;  // descending
  int estimated_dim = 0;
  int expected_lower_bound = 0;  // 4(m+1) - (n-1)
  double ratio_threshold = 0.0;
  std::string note;
};

SingularityEstimate estimate_singularity_dim(const MapDescriptor& f, const WitnessRecord& base,
                                             const SingularityConfig& cfg);

}  // namespace parline::witness
