// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// when any non-advisory criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "parline/charclass.hpp"
#include "parline/json_io.hpp"
#include "parline/witness.hpp"

namespace cc = parline::charclass;
namespace wt = parline::witness;
namespace io = parline::io;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double limit_s;  // 0 = no limit
  bool advisory;
  std::function<Verdict()> body;
};

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

wt::WitnessRecord run_search(const wt::MapDescriptor& f, wt::Case kind, int restarts, std::uint64_t seed,
                             double tol, int threads = 0) {
  wt::SearchConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.tol = tol;
  cfg.threads = threads;
  return wt::search(f, kind, cfg);
}

}  // namespace

int main() {
  const auto cubic = wt::builtin_map({"random_poly", 1, 4, 3, 42});
  const auto quad = wt::builtin_map({"random_poly", 2, 5, 2, 7});

  std::vector<Criterion> list;

  list.push_back({"pair-set class: key coefficient 1 and degree-n part nonzero, m = 1..64", 10.0, false, [] {
                    for (int m = 1; m <= 64; ++m) {
                      const auto r = cc::check_theorem_b(m);
                      if (!r.key_coefficient || !r.passed) return Verdict{false, "fails at m = " + std::to_string(m)};
                    }
                    return Verdict{true, "64/64"};
                  }});

  list.push_back({"distinct-point class: passes iff m+1 != 2^(r-1), second route agrees, m = 1..64", 10.0, false, [] {
                    int boundary = 0;
                    for (int m = 1; m <= 64; ++m) {
                      const auto p = cc::DimensionParams::for_theorem(m);
                      const auto a = cc::check_theorem_a(m);
                      if (a.passed == p.boundary()) return Verdict{false, "iff fails at m = " + std::to_string(m)};
                      if (p.boundary()) {
                        ++boundary;
                        continue;
                      }
                      const auto v2 = cc::check_theorem_a_v2(m);
                      if (v2.passed != a.passed) return Verdict{false, "routes disagree at m = " + std::to_string(m)};
                    }
                    return Verdict{true, "64/64, " + std::to_string(boundary) + " boundary values"};
                  }});

  list.push_back({"affine-plane class: coefficient 1, m = 1..64", 0.0, false, [] {
                    for (int m = 1; m <= 64; ++m) {
                      const auto r = cc::check_corollary(m);
                      if (!r.key_coefficient || !r.passed) return Verdict{false, "fails at m = " + std::to_string(m)};
                    }
                    return Verdict{true, "64/64"};
                  }});

  list.push_back({"two-point class: passes iff n <= m, 1 <= m, n <= 32", 0.0, false, [] {
                    for (int m = 1; m <= 32; ++m) {
                      for (int n = 1; n <= 32; ++n) {
                        if (cc::check_prelude(m, n).passed != (n <= m)) {
                          return Verdict{false, "fails at m = " + std::to_string(m) + ", n = " + std::to_string(n)};
                        }
                      }
                    }
                    return Verdict{true, "1024/1024"};
                  }});

  list.push_back({"y0 expansion: top degree exactly 2m + 2^q, m+1 = 2..32", 0.0, false, [] {
                    for (int m = 1; m <= 31; ++m) {
                      const int want = 2 * m + (1 << cc::q_of(m));
                      const int top = cc::prop_q_top_degree(m);
                      if (top != want) {
                        return Verdict{false, "m = " + std::to_string(m) + ": " + std::to_string(top) + " != " +
                                                  std::to_string(want)};
                      }
                    }
                    return Verdict{true, "31/31"};
                  }});

  list.push_back({"direct image of the Euler class equals w_n(-xi), m1, m2 <= 5, n <= 8", 60.0, false, [] {
                    int count = 0;
                    for (int m1 = 0; m1 <= 5; ++m1) {
                      for (int m2 = 0; m2 <= 5; ++m2) {
                        for (int n = 1; n <= 8; ++n) {
                          for (unsigned a = 0; a < 4; ++a) {
                            for (unsigned b = 0; b < 4; ++b) {
                              ++count;
                              if (!cc::oracle_umkehr_product(m1, m2, n, {a, b})) {
                                return Verdict{false, "fails at m1=" + std::to_string(m1) + " m2=" +
                                                          std::to_string(m2) + " n=" + std::to_string(n)};
                              }
                            }
                          }
                        }
                      }
                    }
                    return Verdict{true, std::to_string(count) + " instances"};
                  }});

  list.push_back({"projective-bundle identity t^(n+1) = w_n(-xi) t + w2 w_(n-1)(-xi), n <= 16", 0.0, false, [] {
                    for (int n = 1; n <= 16; ++n) {
                      if (!cc::oracle_umkehr_dual(n + 2, n)) return Verdict{false, "fails at n = " + std::to_string(n)};
                    }
                    return Verdict{true, "16/16"};
                  }});

  wt::WitnessRecord rec_b;
  list.push_back({"witness parallel_b: random_poly(1,4,3; seed 42), 200 restarts, seed 7, residual <= 1e-10", 60.0,
                  false, [&] {
                    rec_b = run_search(cubic, wt::Case::ParallelB, 200, 7, 1e-10);
                    const bool ok = rec_b.found && rec_b.residual <= 1e-10 && rec_b.pair_sets_distinct &&
                                    wt::verify_witness(rec_b, cubic, 1e-10).passed;
                    return Verdict{ok, "residual " + fmt(rec_b.residual) + ", restarts " +
                                           std::to_string(rec_b.restarts_used)};
                  }});

  wt::WitnessRecord rec_a;
  list.push_back({"witness parallel_a: random_poly(2,5,2; seed 7), distance >= 0.05, residual <= 1e-8", 300.0, false,
                  [&] {
                    rec_a = run_search(quad, wt::Case::ParallelA, 200, 7, 1e-8);
                    const bool ok = rec_a.found && rec_a.residual <= 1e-8 && rec_a.min_pairwise_distance >= 0.05 &&
                                    wt::verify_witness(rec_a, quad, 1e-8).passed;
                    return Verdict{ok, "residual " + fmt(rec_a.residual) + ", min distance " +
                                           fmt(rec_a.min_pairwise_distance)};
                  }});

  list.push_back({"1-D construction on the parabola over [-2, 2]", 1.0, false, [] {
                    const auto f = wt::builtin_map({"parabola", 0, 0, 0, 0});
                    const auto r = wt::find_1d(f, -2.0, 2.0, 1e-12);
                    const auto& p = r.record.points;
                    const double x0 = p[0][0], x1 = p[1][0], y0 = p[2][0], y1 = p[3][0];
                    const double slope = std::abs((x0 + x1) - (y0 + y1));
                    const bool ok = x0 < y0 && y0 < y1 && y1 < x1 && r.record.residual <= 1e-12 && slope <= 1e-10;
                    return Verdict{ok, "residual " + fmt(r.record.residual) + ", slope gap " + fmt(slope)};
                  }});

  list.push_back({"determinism: repeated searches give byte-identical records", 0.0, false, [&] {
                    const std::string b1 = io::record_to_json(rec_b).dump();
                    const std::string b2 = io::record_to_json(run_search(cubic, wt::Case::ParallelB, 200, 7, 1e-10)).dump();
                    const std::string b3 =
                        io::record_to_json(run_search(cubic, wt::Case::ParallelB, 200, 7, 1e-10, 1)).dump();
                    const std::string a1 = io::record_to_json(rec_a).dump();
                    const std::string a2 = io::record_to_json(run_search(quad, wt::Case::ParallelA, 200, 7, 1e-8, 3)).dump();
                    const bool ok = b1 == b2 && b2 == b3 && a1 == a2;
                    return Verdict{ok, ok ? "parallel_b x3, parallel_a x2 identical" : "records differ"};
                  }});

  list.push_back({"singularity dimension >= 4(m+1)-(n-1) = 5 on the m = 1 cubic", 0.0, true, [&] {
                    const auto base = run_search(cubic, wt::Case::Collinear, 200, 7, 1e-10);
                    if (!base.found) return Verdict{false, "no collinear base record"};
                    const auto est = wt::estimate_singularity_dim(cubic, base, wt::SingularityConfig{});
                    return Verdict{est.estimated_dim >= est.expected_lower_bound,
                                   "estimated " + std::to_string(est.estimated_dim) + ", bound " +
                                       std::to_string(est.expected_lower_bound) + ", converged " +
                                       std::to_string(est.converged) + "/" + std::to_string(est.samples)};
                  }});

  int failures = 0;
  for (const auto& c : list) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt(secs) + " s";
    if (c.limit_s > 0.0) {
      timing += " / limit " + fmt(c.limit_s) + " s";
      if (secs >= c.limit_s) {
        v.ok = false;
        v.detail += "; over time limit";
      }
    }
    if (!v.ok && !c.advisory) ++failures;
    std::printf("%s %s%s: %s (%s)\n", v.ok ? "PASS" : "FAIL", c.advisory ? "[advisory] " : "", c.name.c_str(),
                v.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d criteria, %d failed\n", static_cast<int>(list.size()), failures);
  return failures == 0 ? 0 : 1;
}
