#include <cmath>
#include <cstdio>
#include <random>

#include "parline/json_io.hpp"
#include "parline/witness.hpp"

namespace parline::witness {

void MapDescriptor::validate() const {
  if (domain_dim < 1) throw WitnessError("domain_dim must be at least 1");
  if (codomain_dim < 1) throw WitnessError("codomain_dim must be at least 1");
  if (static_cast<int>(coords.size()) != codomain_dim) {
    throw WitnessError("coords has " + std::to_string(coords.size()) + " entries, codomain_dim is " +
                       std::to_string(codomain_dim));
  }
  for (std::size_t i = 0; i < coords.size(); ++i) {
    for (const auto& term : coords[i]) {
      if (static_cast<int>(term.e.size()) != domain_dim) {
        throw WitnessError("coordinate " + std::to_string(i) + ": exponent vector of length " +
                           std::to_string(term.e.size()) + ", expected " + std::to_string(domain_dim));
      }
      for (int k : term.e) {
        if (k < 0) throw WitnessError("negative exponent in coordinate " + std::to_string(i));
      }
      if (!std::isfinite(term.c)) throw WitnessError("non-finite coefficient in coordinate " + std::to_string(i));
    }
  }
}

std::vector<std::vector<int>> graded_monomials(int vars, int lo, int hi) {
  std::vector<std::vector<int>> out;
  if (vars < 1) return out;
  for (int d = lo; d <= hi; ++d) {
    // Compositions of d into `vars` parts, x_0 exponent descending first.
    std::vector<int> e(vars, 0);
    auto rec = [&](auto&& self, int idx, int left) -> void {
      if (idx == vars - 1) {
        e[idx] = left;
        out.push_back(e);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[idx] = k;
        self(self, idx + 1, left - k);
      }
    };
    rec(rec, 0, d);
  }
  return out;
}

namespace {

std::vector<Term> single(double c, std::vector<int> e) { return {Term{c, std::move(e)}}; }

MapDescriptor affine_graph(int m) {
  if (m < 0) throw WitnessError("affine_graph needs m >= 0");
  MapDescriptor f;
  f.domain_dim = m + 1;
  f.codomain_dim = m + 2;
  f.coords.push_back(single(1.0, std::vector<int>(m + 1, 0)));
  for (int i = 0; i <= m; ++i) {
    std::vector<int> e(m + 1, 0);
    e[i] = 1;
    f.coords.push_back(single(1.0, e));
  }
  return f;
}

MapDescriptor moment(int m, int n) {
  if (m < 0 || n < 0) throw WitnessError("moment needs m, n >= 0");
  MapDescriptor f;
  f.domain_dim = m + 1;
  f.codomain_dim = n + 1;
  for (int d = 1; static_cast<int>(f.coords.size()) < n + 1; ++d) {
    for (auto& e : graded_monomials(m + 1, d, d)) {
      if (static_cast<int>(f.coords.size()) == n + 1) break;
      f.coords.push_back(single(1.0, std::move(e)));
    }
  }
  return f;
}

MapDescriptor random_poly(int m, int n, int degree, std::uint64_t seed) {
  if (m < 0 || n < 0 || degree < 0) throw WitnessError("random_poly needs m, n, degree >= 0");
  MapDescriptor f;
  f.domain_dim = m + 1;
  f.codomain_dim = n + 1;
  const auto monos = graded_monomials(m + 1, 0, degree);
  std::mt19937_64 rng(seed);
  for (int i = 0; i <= n; ++i) {
    std::vector<Term> coord;
    coord.reserve(monos.size());
    for (const auto& e : monos) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      coord.push_back(Term{2.0 * u - 1.0, e});
    }
    f.coords.push_back(std::move(coord));
  }
  return f;
}

}  // namespace

MapDescriptor builtin_map(const BuiltinSpec& spec) {
  MapDescriptor f;
  if (spec.name == "affine_graph") {
    f = affine_graph(spec.m);
  } else if (spec.name == "parabola") {
    f = moment(0, 1);
  } else if (spec.name == "moment") {
    f = moment(spec.m, spec.n);
  } else if (spec.name == "random_poly") {
    f = random_poly(spec.m, spec.n, spec.degree, spec.seed);
  } else {
    throw WitnessError("unknown builtin map '" + spec.name + "'");
  }
  f.builtin = spec;
  return f;
}

Vec eval_map(const MapDescriptor& f, const Vec& p) {
  if (static_cast<int>(p.size()) != f.domain_dim) {
    throw WitnessError("point has dimension " + std::to_string(p.size()) + ", map expects " +
                       std::to_string(f.domain_dim));
  }
  Vec out(f.coords.size(), 0.0);
  for (std::size_t i = 0; i < f.coords.size(); ++i) {
    double acc = 0.0;
    for (const auto& term : f.coords[i]) {
      double v = term.c;
      for (std::size_t k = 0; k < p.size(); ++k) {
        for (int j = 0; j < term.e[k]; ++j) v *= p[k];
      }
      acc += v;
    }
    out[i] = acc;
  }
  return out;
}

std::string map_digest(const MapDescriptor& f) {
  const std::string text = io::coords_to_json(f).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace parline::witness
