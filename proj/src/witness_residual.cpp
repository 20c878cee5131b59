#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "parline/charclass.hpp"
#include "parline/witness.hpp"

namespace parline::witness {

namespace {

double norm2(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec axpy(const Vec& x, double s, const Vec& y) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + s * y[i];
  return r;
}

Vec neg(const Vec& x) {
  Vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = -x[i];
  return r;
}

void check_shape(const Configuration& c) {
  if (c.x.empty() || c.u.size() != c.x.size() || c.v.size() != c.x.size()) {
    throw WitnessError("configuration vectors x, u, v must share a nonzero dimension");
  }
}

// sigma_k^2 / sigma_1^2 for the columns of `cols`.
double ratio_of(const std::vector<Vec>& cols, std::size_t k, double zero_eps) {
  const auto rows = static_cast<Eigen::Index>(cols.front().size());
  Eigen::MatrixXd d(rows, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) d(i, static_cast<Eigen::Index>(j)) = cols[j][static_cast<std::size_t>(i)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(d);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= zero_eps) return 0.0;
  if (static_cast<std::size_t>(s.size()) < k) return 0.0;
  const double r = s(static_cast<Eigen::Index>(k - 1)) / s(0);
  return r * r;
}

}  // namespace

double parallel_residual(const Vec& a, const Vec& b, double zero_eps) {
  if (a.size() != b.size()) throw WitnessError("parallel_residual: dimension mismatch");
  const double na = norm2(a);
  const double nb = norm2(b);
  if (std::sqrt(na) <= zero_eps || std::sqrt(nb) <= zero_eps) return 0.0;
  // Lagrange identity: |A|^2|B|^2 - <A,B>^2 = sum_{i<j} (A_i B_j - A_j B_i)^2.
  double cross = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const double w = a[i] * b[j] - a[j] * b[i];
      cross += w * w;
    }
  }
  return std::clamp(cross / (na * nb), 0.0, 1.0);
}

double collinear_residual_images(const Quad& q, double zero_eps) {
  std::vector<Vec> cols{sub(q[1], q[0]), sub(q[2], q[0]), sub(q[3], q[0])};
  return ratio_of(cols, 3, zero_eps);
}

double collinear_residual(const MapDescriptor& f, const Quad& p, double zero_eps) {
  return collinear_residual_images({eval_map(f, p[0]), eval_map(f, p[1]), eval_map(f, p[2]), eval_map(f, p[3])},
                                   zero_eps);
}

double lin_dep_residual_vectors(const Quad& w, double zero_eps) {
  std::vector<Vec> cols;
  for (const auto& v : w) {
    const double len = std::sqrt(norm2(v));
    if (len <= zero_eps) return 0.0;
    Vec unit(v);
    for (double& x : unit) x /= len;
    cols.push_back(std::move(unit));
  }
  return ratio_of(cols, 4, zero_eps);
}

double lin_dep_residual(const MapDescriptor& f, const Quad& p, double zero_eps) {
  return lin_dep_residual_vectors({eval_map(f, p[0]), eval_map(f, p[1]), eval_map(f, p[2]), eval_map(f, p[3])},
                                  zero_eps);
}

Vec hemisphere_lift(const Vec& w) {
  const double s = 1.0 / std::sqrt(1.0 + norm2(w));
  Vec out(w.size() + 1);
  out[0] = s;
  for (std::size_t i = 0; i < w.size(); ++i) out[i + 1] = w[i] * s;
  return out;
}

double min_pairwise_distance(const Quad& p) {
  double best = INFINITY;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) best = std::min(best, std::sqrt(norm2(sub(p[i], p[j]))));
  }
  return best;
}

double pair_set_distance(const Quad& p) {
  auto d = [&](int i, int j) { return std::sqrt(norm2(sub(p[i], p[j]))); };
  return std::min(std::max(d(0, 2), d(1, 3)), std::max(d(0, 3), d(1, 2)));
}

std::string case_name(Case c) {
  switch (c) {
    case Case::ParallelB: return "parallel_b";
    case Case::ParallelA: return "parallel_a";
    case Case::Collinear: return "collinear";
    case Case::LinearDependence: return "linear_dependence";
    case Case::Line1d: return "line_1d";
  }
  return "unknown";
}

Case parse_case(const std::string& s) {
  if (s == "b" || s == "parallel_b") return Case::ParallelB;
  if (s == "a" || s == "parallel_a") return Case::ParallelA;
  if (s == "collinear") return Case::Collinear;
  if (s == "linear_dependence") return Case::LinearDependence;
  if (s == "line_1d") return Case::Line1d;
  throw WitnessError("unknown case '" + s + "'");
}

Quad config_to_points(const Configuration& c) {
  check_shape(c);
  const Vec mx = neg(c.x);
  return {axpy(c.x, c.delta, c.u), axpy(c.x, -c.delta, c.u), axpy(mx, c.delta, c.v), axpy(mx, -c.delta, c.v)};
}

Quad case_b_points(const Configuration& c) {
  const Quad q = config_to_points(c);
  return {q[2], q[0], q[3], q[1]};
}

Quad case_a_points(const Configuration& c) {
  const Quad q = config_to_points(c);
  return {q[1], q[0], q[3], q[2]};
}

double record_residual(Case kind, const MapDescriptor& f, const Quad& p, double zero_eps) {
  switch (kind) {
    case Case::ParallelB:
    case Case::ParallelA:
    case Case::Line1d:
      return parallel_residual(sub(eval_map(f, p[1]), eval_map(f, p[0])), sub(eval_map(f, p[3]), eval_map(f, p[2])),
                               zero_eps);
    case Case::Collinear: return collinear_residual(f, p, zero_eps);
    case Case::LinearDependence: return lin_dep_residual(f, p, zero_eps);
  }
  return 0.0;
}

double objective_case_b(const Configuration& c, const MapDescriptor& f, double zero_eps) {
  return record_residual(Case::ParallelB, f, case_b_points(c), zero_eps);
}

double objective_case_a(const Configuration& c, const MapDescriptor& f, double zero_eps) {
  check_shape(c);
  const double want = 1.0 / std::sqrt(2.0);
  if (std::abs(std::sqrt(norm2(c.u)) - want) > 1e-9 || std::abs(std::sqrt(norm2(c.v)) - want) > 1e-9) {
    throw WitnessError("case (a) configuration needs |u| = |v| = 1/sqrt(2)");
  }
  return record_residual(Case::ParallelA, f, case_a_points(c), zero_eps);
}

Guarantee guarantee_for(Case kind, int m, int n) {
  Guarantee g;
  if (kind == Case::Line1d) {
    g.guaranteed = (m == 0 && n == 1);
    g.note = g.guaranteed ? "maps R -> R^2" : "guarantee requires a map R -> R^2";
    return g;
  }
  if (m < 1) {
    g.note = "guarantee requires m >= 1";
    return g;
  }
  const auto p = charclass::DimensionParams::for_theorem(m);
  const int limit = (kind == Case::LinearDependence) ? p.n + 2 : p.n + 1;
  const std::string bound = "n+1 <= " + std::to_string(limit) + " (m+2^r" +
                            std::string(kind == Case::LinearDependence ? "+1" : "") + ")";
  const bool fits = n + 1 <= limit;
  if (!fits) {
    g.note = "guarantee requires " + bound;
    return g;
  }
  if (kind == Case::ParallelA && p.boundary()) {
    g.note = "guarantee requires m+1 != 2^{r-1}";
    return g;
  }
  g.guaranteed = true;
  g.note = "dimensions satisfy " + bound;
  return g;
}

}  // namespace parline::witness
