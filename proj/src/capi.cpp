#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "parline/charclass.hpp"
#include "parline/json_io.hpp"
#include "parline/parline.h"
#include "parline/witness.hpp"

#ifndef PARLINE_VERSION_STRING
#define PARLINE_VERSION_STRING "0.0.0"
#endif

struct pl_map {
  parline::witness::MapDescriptor desc;
};

struct pl_record {
  parline::witness::WitnessRecord rec;
};

namespace {

namespace cc = parline::charclass;
namespace wt = parline::witness;
namespace io = parline::io;

thread_local std::string g_error;

pl_status fail(pl_status s, const std::string& what) {
  g_error = what;
  return s;
}

template <class F>
pl_status guarded(F&& body) {
  try {
    g_error.clear();
    return body();
  } catch (const nlohmann::json::parse_error& e) {
    return fail(PL_ERR_PARSE, e.what());
  } catch (const std::domain_error& e) {
    return fail(PL_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PL_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(PL_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(PL_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

wt::SearchConfig to_cpp(const pl_search_config& c) {
  wt::SearchConfig s;
  s.delta = c.delta;
  s.tol = c.tol;
  s.restarts = c.restarts;
  s.max_iters = c.max_iters;
  s.seed = c.seed;
  s.zero_eps = c.zero_eps;
  s.step = c.step;
  s.reflect = c.reflect;
  s.expand = c.expand;
  s.contract = c.contract;
  s.shrink = c.shrink;
  s.threads = c.threads;
  return s;
}

#define PL_REQUIRE(cond) \
  if (!(cond)) return fail(PL_ERR_NULL, "null argument: " #cond)

}  // namespace

extern "C" {

const char* pl_version(void) { return PARLINE_VERSION_STRING; }

const char* pl_last_error(void) { return g_error.c_str(); }

void pl_string_free(char* s) { std::free(s); }

pl_status pl_check(const char* check, int m, int n, char** out_json) {
  PL_REQUIRE(check && out_json);
  return guarded([&] {
    const std::string c = check;
    cc::VerificationReport rep;
    if (c == "prelude") {
      rep = cc::check_prelude(m, n);
    } else if (c == "theorem_b") {
      rep = cc::check_theorem_b(m);
    } else if (c == "theorem_a") {
      rep = cc::check_theorem_a(m);
    } else if (c == "theorem_a_v2") {
      rep = cc::check_theorem_a_v2(m);
    } else if (c == "corollary") {
      rep = cc::check_corollary(m);
    } else if (c == "prop_q") {
      rep = cc::check_prop_q(m, n);
    } else {
      return fail(PL_ERR_INVALID, "unknown check '" + c + "'");
    }
    *out_json = dup(io::report_to_json(rep).dump());
    return PL_OK;
  });
}

pl_status pl_verify_classes(int m, char** out_jsonl, int* all_consistent) {
  PL_REQUIRE(out_jsonl && all_consistent);
  return guarded([&] {
    std::string text;
    bool ok = true;
    for (const auto& rep : cc::class_reports(m)) {
      ok = ok && rep.consistent();
      text += io::report_to_json(rep).dump();
      text += '\n';
    }
    *out_jsonl = dup(text);
    *all_consistent = ok ? 1 : 0;
    return PL_OK;
  });
}

pl_status pl_hurwitz(int m, char** out_json) {
  PL_REQUIRE(out_json);
  return guarded([&] {
    if (m < 1) return fail(PL_ERR_INVALID, "m must be >= 1");
    *out_json = dup(io::hurwitz_to_json(cc::compare_hurwitz(m)).dump());
    return PL_OK;
  });
}

pl_status pl_table_row_compute(int m, pl_table_row* out) {
  PL_REQUIRE(out);
  return guarded([&] {
    const auto p = cc::DimensionParams::for_theorem(m);
    pl_table_row row{};
    row.m = m;
    row.r = p.r;
    row.q = p.q;
    row.n = p.n;
    row.thm_a = cc::check_theorem_a(m).passed ? 1 : 0;
    row.thm_b = cc::check_theorem_b(m).passed ? 1 : 0;
    row.cor = cc::check_corollary(m).passed ? 1 : 0;
    row.prop_q_top = cc::prop_q_top_degree(m);
    *out = row;
    return PL_OK;
  });
}

pl_status pl_prop_q_top_degree(int m, int* out) {
  PL_REQUIRE(out);
  return guarded([&] {
    *out = cc::prop_q_top_degree(m);
    return PL_OK;
  });
}

pl_status pl_oracle_product(int m1, int m2, int n, unsigned first, unsigned second, int* holds) {
  PL_REQUIRE(holds);
  return guarded([&] {
    *holds = cc::oracle_umkehr_product(m1, m2, n, cc::LineSpec{first, second}) ? 1 : 0;
    return PL_OK;
  });
}

pl_status pl_oracle_dual(int k, int n, int mutate_rewrite, int* holds) {
  PL_REQUIRE(holds);
  return guarded([&] {
    cc::OracleOptions opts;
    opts.mutate_rewrite = mutate_rewrite != 0;
    *holds = cc::oracle_umkehr_dual(k, n, opts) ? 1 : 0;
    return PL_OK;
  });
}

pl_status pl_map_from_json(const char* json, pl_map** out) {
  PL_REQUIRE(json && out);
  return guarded([&] {
    auto desc = io::map_from_json(io::Json::parse(json));
    *out = new pl_map{std::move(desc)};
    return PL_OK;
  });
}

pl_status pl_map_builtin(const char* name, int m, int n, int degree, uint64_t seed, pl_map** out) {
  PL_REQUIRE(name && out);
  return guarded([&] {
    auto desc = wt::builtin_map(wt::BuiltinSpec{name, m, n, degree, seed});
    *out = new pl_map{std::move(desc)};
    return PL_OK;
  });
}

void pl_map_free(pl_map* map) { delete map; }

pl_status pl_map_to_json(const pl_map* map, char** out_json) {
  PL_REQUIRE(map && out_json);
  return guarded([&] {
    *out_json = dup(io::map_to_json(map->desc).dump());
    return PL_OK;
  });
}

pl_status pl_map_dims(const pl_map* map, int* domain_dim, int* codomain_dim) {
  PL_REQUIRE(map && domain_dim && codomain_dim);
  *domain_dim = map->desc.domain_dim;
  *codomain_dim = map->desc.codomain_dim;
  return PL_OK;
}

pl_status pl_map_digest(const pl_map* map, char** out) {
  PL_REQUIRE(map && out);
  return guarded([&] {
    *out = dup(wt::map_digest(map->desc));
    return PL_OK;
  });
}

pl_status pl_map_eval(const pl_map* map, const double* p, size_t p_len, double* out, size_t out_len) {
  PL_REQUIRE(map && p && out);
  return guarded([&] {
    if (out_len != static_cast<size_t>(map->desc.codomain_dim)) {
      return fail(PL_ERR_INVALID, "output buffer length must equal codomain_dim");
    }
    const auto v = wt::eval_map(map->desc, wt::Vec(p, p + p_len));
    std::copy(v.begin(), v.end(), out);
    return PL_OK;
  });
}

void pl_search_config_default(pl_search_config* cfg) {
  if (!cfg) return;
  const wt::SearchConfig d;
  *cfg = pl_search_config{d.delta, d.tol,     d.restarts, d.max_iters, d.seed,   d.zero_eps,
                          d.step,  d.reflect, d.expand,   d.contract,  d.shrink, d.threads};
}

void pl_singularity_config_default(pl_singularity_config* cfg) {
  if (!cfg) return;
  const wt::SingularityConfig d;
  *cfg = pl_singularity_config{d.samples, d.noise, d.tol, d.ratio_threshold, d.max_iters, d.seed};
}

pl_status pl_search(const pl_map* map, const char* kase, const pl_search_config* cfg, pl_record** out) {
  PL_REQUIRE(map && kase && cfg && out);
  return guarded([&] {
    auto rec = wt::search(map->desc, wt::parse_case(kase), to_cpp(*cfg));
    *out = new pl_record{std::move(rec)};
    return PL_OK;
  });
}

pl_status pl_record_from_json(const char* json, pl_record** out) {
  PL_REQUIRE(json && out);
  return guarded([&] {
    auto rec = io::record_from_json(io::Json::parse(json));
    *out = new pl_record{std::move(rec)};
    return PL_OK;
  });
}

void pl_record_free(pl_record* rec) { delete rec; }

pl_status pl_record_to_json(const pl_record* rec, char** out_json) {
  PL_REQUIRE(rec && out_json);
  return guarded([&] {
    *out_json = dup(io::record_to_json(rec->rec).dump());
    return PL_OK;
  });
}

pl_status pl_record_found(const pl_record* rec, int* found) {
  PL_REQUIRE(rec && found);
  *found = rec->rec.found ? 1 : 0;
  return PL_OK;
}

pl_status pl_record_residual(const pl_record* rec, double* residual) {
  PL_REQUIRE(rec && residual);
  *residual = rec->rec.residual;
  return PL_OK;
}

pl_status pl_record_guarantee(const pl_record* rec, char** label, char** note) {
  PL_REQUIRE(rec && label && note);
  return guarded([&] {
    *label = dup(rec->rec.guarantee);
    *note = dup(rec->rec.guarantee_note);
    return PL_OK;
  });
}

pl_status pl_verify_witness(const pl_record* rec, const pl_map* map, double tol, int* passed, char** out_json) {
  PL_REQUIRE(rec && map && passed);
  return guarded([&] {
    if (!(tol > 0.0)) return fail(PL_ERR_INVALID, "tol must be positive");
    const auto v = wt::verify_witness(rec->rec, map->desc, tol);
    *passed = v.passed ? 1 : 0;
    if (out_json) *out_json = dup(io::verify_to_json(v).dump());
    return PL_OK;
  });
}

pl_status pl_find_1d(const pl_map* map, double a, double b, double tol, pl_record** out, char** out_json) {
  PL_REQUIRE(map && out);
  return guarded([&] {
    auto r = wt::find_1d(map->desc, a, b, tol);
    if (out_json) *out_json = dup(io::find1d_to_json(r).dump());
    *out = new pl_record{std::move(r.record)};
    return PL_OK;
  });
}

pl_status pl_singularity(const pl_map* map, const pl_record* base, const pl_singularity_config* cfg,
                         char** out_json) {
  PL_REQUIRE(map && base && cfg && out_json);
  return guarded([&] {
    wt::SingularityConfig c;
    c.samples = cfg->samples;
    c.noise = cfg->noise;
    c.tol = cfg->tol;
    c.ratio_threshold = cfg->ratio_threshold;
    c.max_iters = cfg->max_iters;
    c.seed = cfg->seed;
    *out_json = dup(io::singularity_to_json(wt::estimate_singularity_dim(map->desc, base->rec, c)).dump());
    return PL_OK;
  });
}

}  // extern "C"
