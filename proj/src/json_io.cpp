#include "parline/json_io.hpp"

namespace parline::io {

using witness::WitnessError;

namespace {

Json vec_json(const witness::Vec& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

witness::Vec vec_from(const Json& j, const char* what) {
  if (!j.is_array()) throw WitnessError(std::string(what) + " must be an array of numbers");
  witness::Vec v;
  for (const auto& x : j) {
    if (!x.is_number()) throw WitnessError(std::string(what) + " must be an array of numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

template <class T>
T field(const Json& j, const char* key) {
  if (!j.contains(key)) throw WitnessError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw WitnessError(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
T field_or(const Json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

}  // namespace

Json coords_to_json(const witness::MapDescriptor& f) {
  Json out;
  out["domain_dim"] = f.domain_dim;
  out["codomain_dim"] = f.codomain_dim;
  Json coords = Json::array();
  for (const auto& coord : f.coords) {
    Json terms = Json::array();
    for (const auto& t : coord) {
      Json term;
      term["c"] = t.c;
      term["e"] = t.e;
      terms.push_back(std::move(term));
    }
    coords.push_back(std::move(terms));
  }
  out["coords"] = std::move(coords);
  return out;
}

Json map_to_json(const witness::MapDescriptor& f) {
  if (!f.builtin) return coords_to_json(f);
  const auto& b = *f.builtin;
  Json out;
  out["builtin"] = b.name;
  if (b.name == "affine_graph") {
    out["m"] = b.m;
  } else if (b.name == "moment") {
    out["m"] = b.m;
    out["n"] = b.n;
  } else if (b.name == "random_poly") {
    out["m"] = b.m;
    out["n"] = b.n;
    out["degree"] = b.degree;
    out["seed"] = b.seed;
  }
  return out;
}

witness::MapDescriptor map_from_json(const Json& j) {
  if (!j.is_object()) throw WitnessError("map descriptor must be a JSON object");
  if (j.contains("builtin")) {
    witness::BuiltinSpec b;
    b.name = field<std::string>(j, "builtin");
    b.m = field_or<int>(j, "m", 0);
    b.n = field_or<int>(j, "n", 0);
    b.degree = field_or<int>(j, "degree", 0);
    b.seed = field_or<std::uint64_t>(j, "seed", 0);
    return witness::builtin_map(b);
  }
  witness::MapDescriptor f;
  f.domain_dim = field<int>(j, "domain_dim");
  f.codomain_dim = field<int>(j, "codomain_dim");
  const Json& coords = j.contains("coords") ? j.at("coords") : Json();
  if (!coords.is_array()) throw WitnessError("field 'coords' must be an array");
  for (const auto& coord : coords) {
    if (!coord.is_array()) throw WitnessError("each coordinate must be an array of terms");
    std::vector<witness::Term> terms;
    for (const auto& t : coord) {
      if (!t.is_object()) throw WitnessError("each term must be an object {\"c\", \"e\"}");
      witness::Term term;
      term.c = field<double>(t, "c");
      term.e = field<std::vector<int>>(t, "e");
      terms.push_back(std::move(term));
    }
    f.coords.push_back(std::move(terms));
  }
  f.validate();
  return f;
}

Json config_to_json(const witness::Configuration& c) {
  Json out;
  out["x"] = vec_json(c.x);
  out["u"] = vec_json(c.u);
  out["v"] = vec_json(c.v);
  out["delta"] = c.delta;
  return out;
}

Json record_to_json(const witness::WitnessRecord& r) {
  Json out;
  out["case"] = witness::case_name(r.kind);
  out["found"] = r.found;
  Json pts = Json::array();
  for (const auto& p : r.points) pts.push_back(vec_json(p));
  out["points"] = std::move(pts);
  out["residual"] = r.residual;
  out["min_pairwise_distance"] = r.min_pairwise_distance;
  out["pair_sets_distinct"] = r.pair_sets_distinct;
  out["config"] = r.config ? config_to_json(*r.config) : Json();
  out["map_digest"] = r.map_digest;
  out["seed"] = r.seed;
  out["restarts_used"] = r.restarts_used;
  out["guarantee"] = r.guarantee;
  out["guarantee_note"] = r.guarantee_note;
  return out;
}

witness::WitnessRecord record_from_json(const Json& j) {
  if (!j.is_object()) throw WitnessError("witness record must be a JSON object");
  witness::WitnessRecord r;
  r.kind = witness::parse_case(field<std::string>(j, "case"));
  r.found = field_or<bool>(j, "found", false);
  if (!j.contains("points") || !j.at("points").is_array() || j.at("points").size() != 4) {
    throw WitnessError("field 'points' must hold exactly 4 points");
  }
  for (std::size_t i = 0; i < 4; ++i) r.points[i] = vec_from(j.at("points")[i], "points");
  const std::size_t d = r.points[0].size();
  for (const auto& p : r.points) {
    if (p.empty() || p.size() != d) throw WitnessError("record points must share a nonzero dimension");
  }
  r.residual = field<double>(j, "residual");
  r.min_pairwise_distance = field_or<double>(j, "min_pairwise_distance", 0.0);
  r.pair_sets_distinct = field_or<bool>(j, "pair_sets_distinct", false);
  if (j.contains("config") && !j.at("config").is_null()) {
    const Json& c = j.at("config");
    if (!c.is_object()) throw WitnessError("field 'config' must be an object or null");
    witness::Configuration cfg;
    cfg.x = vec_from(c.contains("x") ? c.at("x") : Json(), "config.x");
    cfg.u = vec_from(c.contains("u") ? c.at("u") : Json(), "config.u");
    cfg.v = vec_from(c.contains("v") ? c.at("v") : Json(), "config.v");
    cfg.delta = field<double>(c, "delta");
    if (cfg.x.size() != d || cfg.u.size() != d || cfg.v.size() != d) {
      throw WitnessError("config vectors must match the point dimension");
    }
    r.config = std::move(cfg);
  }
  r.map_digest = field_or<std::string>(j, "map_digest", "");
  r.seed = field_or<std::uint64_t>(j, "seed", 0);
  r.restarts_used = field_or<int>(j, "restarts_used", 0);
  r.guarantee = field_or<std::string>(j, "guarantee", "");
  r.guarantee_note = field_or<std::string>(j, "guarantee_note", "");
  return r;
}

Json report_to_json(const charclass::VerificationReport& r) {
  Json out;
  out["check"] = r.check;
  out["m"] = r.m;
  out["r"] = r.r;
  out["q"] = r.q;
  out["n"] = r.n;
  out["key_monomial"] = r.key_monomial;
  out["key_coefficient"] = r.key_coefficient ? 1 : 0;
  out["passed"] = r.passed;
  out["expected"] = r.expected;
  out["applicable"] = r.applicable;
  out["detail"] = r.detail;
  out["witnesses"] = r.witnesses;
  return out;
}

Json hurwitz_to_json(const charclass::HurwitzComparison& h) {
  Json out;
  out["check"] = "hurwitz_remark";
  out["m"] = h.m;
  out["q"] = h.q;
  out["rho"] = h.rho;
  out["alpha"] = h.alpha;
  out["clifford_exponent"] = h.clifford_exponent;
  out["sharp_exponent"] = h.sharp_exponent;
  return out;
}

Json verify_to_json(const witness::VerifyReport& v) {
  Json out;
  out["passed"] = v.passed;
  out["residual"] = v.residual;
  out["stored_residual"] = v.stored_residual;
  out["residual_consistent"] = v.residual_consistent;
  out["points_match_config"] = v.points_match_config;
  out["min_pairwise_distance"] = v.min_pairwise_distance;
  out["distinctness_ok"] = v.distinctness_ok;
  out["detail"] = v.detail;
  return out;
}

Json find1d_to_json(const witness::Find1dResult& r) {
  Json out;
  out["branch"] = r.branch;
  out["ambiguous"] = r.ambiguous;
  out["note"] = r.note;
  out["record"] = record_to_json(r.record);
  return out;
}

Json singularity_to_json(const witness::SingularityEstimate& s) {
  Json out;
  out["samples"] = s.samples;
  out["converged"] = s.converged;
  out["singular_values"] = s.singular_values;
  out["estimated_dim"] = s.estimated_dim;
  out["expected_lower_bound"] = s.expected_lower_bound;
  out["ratio_threshold"] = s.ratio_threshold;
  out["note"] = s.note;
  out["base"] = record_to_json(s.base);
  return out;
}

}  // namespace parline::io
