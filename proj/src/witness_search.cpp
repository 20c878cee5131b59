#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <thread>

#include "parline/witness.hpp"

namespace parline::witness {

namespace {

using Objective = std::function<double(const Vec&)>;
using Projection = std::function<void(Vec&)>;

struct NmParams {
  double step;
  double reflect;
  double expand;
  double contract;
  double shrink;
  int max_iters;
  double target;
};

struct LocalResult {
  Vec z;
  double value = INFINITY;
  int iters = 0;
};

// Nelder-Mead in ambient coordinates; every trial point is projected before
// evaluation. A collapsed simplex is rebuilt around the best vertex.
LocalResult nelder_mead(const Objective& obj, const Projection& project, Vec start, const NmParams& p) {
  const std::size_t d = start.size();
  project(start);
  std::vector<Vec> pts;
  std::vector<double> vals;
  auto build = [&](const Vec& centre, double step) {
    pts.assign(1, centre);
    vals.assign(1, obj(centre));
    for (std::size_t i = 0; i < d; ++i) {
      Vec q = centre;
      q[i] += step;
      project(q);
      pts.push_back(q);
      vals.push_back(obj(q));
    }
  };
  build(start, p.step);

  std::vector<std::size_t> order(d + 1);
  double step = p.step;
  int it = 0;
  for (; it < p.max_iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[d - 1];
    if (vals[best] <= p.target) break;

    double diam = 0.0;
    for (std::size_t i = 0; i <= d; ++i) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s = std::max(s, std::abs(pts[i][k] - pts[best][k]));
      diam = std::max(diam, s);
    }
    if (diam < 1e-15) {
      step = std::max(step * 0.1, 1e-12);
      build(Vec(pts[best]), step);
      continue;
    }

    Vec c(d, 0.0);
    for (std::size_t i : order) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < d; ++k) c[k] += pts[i][k];
    }
    for (double& v : c) v /= static_cast<double>(d);

    auto along = [&](double s) {
      Vec q(d);
      for (std::size_t k = 0; k < d; ++k) q[k] = c[k] + s * (pts[worst][k] - c[k]);
      project(q);
      return q;
    };

    Vec xr = along(-p.reflect);
    const double fr = obj(xr);
    if (fr < vals[best]) {
      Vec xe = along(-p.reflect * p.expand);
      const double fe = obj(xe);
      if (fe < fr) {
        pts[worst] = std::move(xe);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(xr);
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = std::move(xr);
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    Vec xc = along(outside ? -p.reflect * p.contract : p.contract);
    const double fc = obj(xc);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = std::move(xc);
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= d; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < d; ++k) pts[i][k] = pts[best][k] + p.shrink * (pts[i][k] - pts[best][k]);
      project(pts[i]);
      vals[i] = obj(pts[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], vals[best], it};
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    rng_.seed(seq);
  }
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  // Box-Muller; platform-independent unlike std::normal_distribution.
  double gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  std::mt19937_64 rng_;
};

void scale_to(double* p, std::size_t len, double radius) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += p[i] * p[i];
  s = std::sqrt(s);
  if (s == 0.0) {
    p[0] = radius;
    return;
  }
  for (std::size_t i = 0; i < len; ++i) p[i] *= radius / s;
}

// Packed variables z = (x, u, v), each of length dim.
struct Layout {
  Case kind;
  std::size_t dim;

  void project(Vec& z) const {
    scale_to(z.data(), dim, 1.0);
    if (kind == Case::ParallelB) {
      scale_to(z.data() + dim, 2 * dim, 1.0);
    } else {
      const double r = 1.0 / std::sqrt(2.0);
      scale_to(z.data() + dim, dim, r);
      scale_to(z.data() + 2 * dim, dim, r);
    }
  }

  Configuration unpack(const Vec& z, double delta) const {
    Configuration c;
    c.x.assign(z.begin(), z.begin() + static_cast<long>(dim));
    c.u.assign(z.begin() + static_cast<long>(dim), z.begin() + static_cast<long>(2 * dim));
    c.v.assign(z.begin() + static_cast<long>(2 * dim), z.end());
    c.delta = delta;
    return c;
  }
};

Quad points_for(Case kind, const Configuration& c) {
  switch (kind) {
    case Case::ParallelB: return case_b_points(c);
    case Case::ParallelA: return case_a_points(c);
    default: return config_to_points(c);
  }
}

void fill_distinctness(WitnessRecord& rec) {
  rec.min_pairwise_distance = min_pairwise_distance(rec.points);
  rec.pair_sets_distinct = pair_set_distance(rec.points) > kZeroEps;
}

struct RestartOutcome {
  Vec z;
  double value = INFINITY;
};

}  // namespace

void SearchConfig::validate() const {
  if (!(delta > 0.0 && delta < 0.5)) throw WitnessError("delta must lie in (0, 0.5)");
  if (!(tol > 0.0)) throw WitnessError("tol must be positive");
  if (restarts < 1) throw WitnessError("restarts must be at least 1");
  if (max_iters < 1) throw WitnessError("max_iters must be at least 1");
  if (!(zero_eps >= 0.0)) throw WitnessError("zero_eps must be non-negative");
  if (!(step > 0.0)) throw WitnessError("step must be positive");
  if (!(reflect > 0.0 && expand > 1.0 && contract > 0.0 && contract < 1.0 && shrink > 0.0 && shrink < 1.0)) {
    throw WitnessError("simplex coefficients need reflect > 0, expand > 1, 0 < contract, shrink < 1");
  }
  if (threads < 0) throw WitnessError("threads must be non-negative");
}

WitnessRecord search(const MapDescriptor& f, Case kind, const SearchConfig& cfg) {
  f.validate();
  cfg.validate();
  if (kind == Case::Line1d) throw WitnessError("line_1d witnesses come from find_1d, not search");

  const Layout layout{kind, static_cast<std::size_t>(f.domain_dim)};
  const Projection project = [&](Vec& z) { layout.project(z); };
  const Objective obj = [&](const Vec& z) {
    return record_residual(kind, f, points_for(kind, layout.unpack(z, cfg.delta)), cfg.zero_eps);
  };
  const NmParams nm{cfg.step, cfg.reflect, cfg.expand, cfg.contract, cfg.shrink, cfg.max_iters, cfg.tol};

  auto run = [&](int index) {
    Stream s(cfg.seed, 0, static_cast<std::uint64_t>(index));
    Vec z(3 * layout.dim);
    for (double& v : z) v = s.gaussian();
    auto local = nelder_mead(obj, project, std::move(z), nm);
    return RestartOutcome{std::move(local.z), local.value};
  };

  unsigned hw = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads) : std::thread::hardware_concurrency();
  const int batch = static_cast<int>(std::max(1u, hw));
  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  int first_found = -1;
  int done = 0;
  while (done < cfg.restarts && first_found < 0) {
    const int end = std::min(cfg.restarts, done + batch);
    if (end - done == 1) {
      outcomes[static_cast<std::size_t>(done)] = run(done);
    } else {
      std::vector<std::thread> pool;
      for (int i = done; i < end; ++i) {
        pool.emplace_back([&, i] { outcomes[static_cast<std::size_t>(i)] = run(i); });
      }
      for (auto& t : pool) t.join();
    }
    for (int i = done; i < end; ++i) {
      if (outcomes[static_cast<std::size_t>(i)].value <= cfg.tol) {
        first_found = i;
        break;
      }
    }
    done = end;
  }

  const int used = first_found >= 0 ? first_found + 1 : cfg.restarts;
  int pick = 0;
  for (int i = 1; i < used; ++i) {
    if (outcomes[static_cast<std::size_t>(i)].value < outcomes[static_cast<std::size_t>(pick)].value) pick = i;
  }

  WitnessRecord rec;
  rec.kind = kind;
  rec.config = layout.unpack(outcomes[static_cast<std::size_t>(pick)].z, cfg.delta);
  rec.points = points_for(kind, *rec.config);
  rec.residual = record_residual(kind, f, rec.points, cfg.zero_eps);
  rec.found = rec.residual <= cfg.tol;
  fill_distinctness(rec);
  rec.map_digest = map_digest(f);
  rec.seed = cfg.seed;
  rec.restarts_used = used;
  const Guarantee g = guarantee_for(kind, f.m(), f.n());
  rec.guarantee = g.guaranteed ? "guaranteed" : "exploratory";
  rec.guarantee_note = g.note;
  return rec;
}

VerifyReport verify_witness(const WitnessRecord& rec, const MapDescriptor& f, double tol, double zero_eps) {
  f.validate();
  VerifyReport out;
  for (const auto& p : rec.points) {
    if (static_cast<int>(p.size()) != f.domain_dim) throw WitnessError("record points do not match the map's domain");
  }
  if (!rec.map_digest.empty() && rec.map_digest != map_digest(f)) {
    out.detail = "map digest differs from the record; ";
  }
  if (rec.config) {
    const Quad q = points_for(rec.kind, *rec.config);
    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
      if (q[i].size() != rec.points[i].size()) throw WitnessError("record config does not match its points");
      for (std::size_t k = 0; k < q[i].size(); ++k) err = std::max(err, std::abs(q[i][k] - rec.points[i][k]));
    }
    out.points_match_config = err <= 1e-12;
    if (!out.points_match_config) out.detail += "points disagree with config; ";
  }
  out.residual = record_residual(rec.kind, f, rec.points, zero_eps);
  out.stored_residual = rec.residual;
  out.residual_consistent = std::abs(out.residual - rec.residual) <= 1e-12;
  if (!out.residual_consistent) out.detail += "stored residual differs from recomputation; ";
  out.min_pairwise_distance = min_pairwise_distance(rec.points);

  switch (rec.kind) {
    case Case::ParallelB:
      out.distinctness_ok = pair_set_distance(rec.points) > zero_eps;
      if (!out.distinctness_ok) out.detail += "pair sets coincide; ";
      break;
    case Case::Line1d:
      out.distinctness_ok = rec.points[0][0] < rec.points[2][0] && rec.points[2][0] < rec.points[3][0] &&
                            rec.points[3][0] < rec.points[1][0];
      if (!out.distinctness_ok) out.detail += "points are not ordered x0 < y0 < y1 < x1; ";
      break;
    default:
      out.distinctness_ok = out.min_pairwise_distance > zero_eps;
      if (!out.distinctness_ok) out.detail += "points are not pairwise distinct; ";
      break;
  }
  const bool small = out.residual <= tol;
  if (!small) out.detail += "residual above tolerance; ";
  out.passed = small && out.distinctness_ok && out.points_match_config && out.residual_consistent;
  if (out.detail.size() >= 2) out.detail.resize(out.detail.size() - 2);
  return out;
}

Find1dResult find_1d(const MapDescriptor& f, double a, double b, double tol) {
  f.validate();
  if (f.domain_dim != 1 || f.codomain_dim != 2) throw WitnessError("find_1d needs a map R -> R^2");
  if (!(a < b)) throw WitnessError("find_1d needs an interval a < b");
  if (!(tol > 0.0)) throw WitnessError("tol must be positive");

  auto at = [&](double s) { return eval_map(f, Vec{s}); };
  const Vec fa = at(a);
  const Vec fb = at(b);
  const double dx = fb[0] - fa[0];
  const double dy = fb[1] - fa[1];
  const double len = std::hypot(dx, dy);

  Find1dResult out;
  WitnessRecord& rec = out.record;
  rec.kind = Case::Line1d;
  rec.map_digest = map_digest(f);
  const Guarantee g = guarantee_for(Case::Line1d, 0, 1);
  rec.guarantee = g.guaranteed ? "guaranteed" : "exploratory";
  rec.guarantee_note = g.note;

  auto finish = [&](double y0, double y1) {
    rec.points = {Vec{a}, Vec{b}, Vec{y0}, Vec{y1}};
    rec.residual = record_residual(Case::Line1d, f, rec.points);
    rec.found = rec.residual <= tol;
    fill_distinctness(rec);
    return out;
  };
  const double third = (b - a) / 3.0;

  if (len <= kZeroEps) {
    out.branch = "equal_endpoints";
    out.note = "f(a) = f(b); the zero difference is parallel to every vector";
    return finish(a + third, b - third);
  }

  // rho(y) = <f(y) - f(a), e>, e the unit normal of f(b) - f(a).
  const double ex = -dy / len;
  const double ey = dx / len;
  auto rho = [&](double s) {
    const Vec v = at(s);
    return (v[0] - fa[0]) * ex + (v[1] - fa[1]) * ey;
  };

  constexpr int kSamples = 1024;
  double z = a;
  double peak = 0.0;
  for (int i = 1; i < kSamples; ++i) {
    const double s = a + (b - a) * i / kSamples;
    const double r = rho(s);
    if (std::abs(r) > std::abs(peak)) {
      peak = r;
      z = s;
    }
  }
  const double scale = std::max(1.0, len);
  if (std::abs(peak) <= tol * scale) {
    out.branch = "collinear";
    out.note = "sampled image lies on the line through f(a) and f(b)";
    return finish(a + third, b - third);
  }
  if (std::abs(peak) <= 1e3 * tol * scale) {
    out.ambiguous = true;
    out.note = "largest sampled distance from the chord is " + std::to_string(std::abs(peak)) +
               ", close to the collinearity threshold; proceeding with bisection";
  }

  out.branch = "bisection";
  const double c = peak / 2.0;
  auto solve = [&](double lo, double hi) {
    // g(lo) and g(hi) have opposite signs, g = rho - c.
    double glo = rho(lo) - c;
    for (int i = 0; i < 2000; ++i) {
      const double mid = lo + (hi - lo) / 2.0;
      if (mid <= lo || mid >= hi) break;
      const double gm = rho(mid) - c;
      if (gm == 0.0) return mid;
      if ((gm < 0.0) == (glo < 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    return std::abs(rho(lo) - c) <= std::abs(rho(hi) - c) ? lo : hi;
  };
  const double y0 = solve(a, z);
  const double y1 = solve(z, b);
  return finish(y0, y1);
}

SingularityEstimate estimate_singularity_dim(const MapDescriptor& f, const WitnessRecord& base,
                                             const SingularityConfig& cfg) {
  f.validate();
  if (base.kind != Case::Collinear) throw WitnessError("singularity estimate needs a collinear base record");
  if (cfg.samples < 1 || !(cfg.noise > 0.0) || !(cfg.tol > 0.0) || !(cfg.ratio_threshold > 0.0) ||
      cfg.max_iters < 1) {
    throw WitnessError("invalid singularity configuration");
  }
  const VerifyReport check = verify_witness(base, f, 1e-8);
  if (!check.passed) throw WitnessError("base record fails verification: " + check.detail);

  const std::size_t dim = static_cast<std::size_t>(f.domain_dim);
  const std::size_t total = 4 * dim;
  const Objective obj = [&](const Vec& z) {
    Quad q;
    for (std::size_t i = 0; i < 4; ++i) q[i].assign(z.begin() + static_cast<long>(i * dim), z.begin() + static_cast<long>((i + 1) * dim));
    return collinear_residual(f, q);
  };
  const Projection none = [](Vec&) {};

  SingularityEstimate est;
  est.base = base;
  est.samples = cfg.samples;
  est.ratio_threshold = cfg.ratio_threshold;
  est.expected_lower_bound = 4 * (f.m() + 1) - (f.n() - 1);

  Vec centre;
  for (const auto& p : base.points) centre.insert(centre.end(), p.begin(), p.end());
  {
    NmParams polish{cfg.noise, 1.0, 2.0, 0.5, 0.5, cfg.max_iters, cfg.tol};
    auto r = nelder_mead(obj, none, centre, polish);
    if (r.value <= cfg.tol) {
      centre = std::move(r.z);
    } else {
      est.note = "base could not be polished below tol; ";
    }
  }

  std::vector<Vec> disp;
  for (int s = 0; s < cfg.samples; ++s) {
    Stream rng(cfg.seed, 1, static_cast<std::uint64_t>(s));
    Vec z = centre;
    for (double& v : z) v += cfg.noise * rng.gaussian();
    NmParams nm{cfg.noise, 1.0, 2.0, 0.5, 0.5, cfg.max_iters, cfg.tol};
    auto r = nelder_mead(obj, none, std::move(z), nm);
    if (r.value > cfg.tol) continue;
    Vec d(total);
    for (std::size_t k = 0; k < total; ++k) d[k] = r.z[k] - centre[k];
    disp.push_back(std::move(d));
  }
  est.converged = static_cast<int>(disp.size());
  if (est.converged < cfg.samples) {
    est.note += std::to_string(cfg.samples - est.converged) + " of " + std::to_string(cfg.samples) +
                " samples did not converge; ";
  }
  if (disp.size() >= 2) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(disp.size()), static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < disp.size(); ++i) {
      for (std::size_t k = 0; k < total; ++k) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = disp[i][k];
    }
    m.rowwise() -= m.colwise().mean();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const auto& sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i) est.singular_values.push_back(sv(i));
    const double top = est.singular_values.empty() ? 0.0 : est.singular_values.front();
    for (double v : est.singular_values) {
      if (top > 0.0 && v >= cfg.ratio_threshold * top) ++est.estimated_dim;
    }
  }
  if (est.note.size() >= 2) est.note.resize(est.note.size() - 2);
  return est;
}

}  // namespace parline::witness
