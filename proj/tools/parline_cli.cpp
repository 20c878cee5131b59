// parline command-line tool. Talks to the library only through parline.h.

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "parline/parline.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

// Raised for bad input discovered after parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Library failure (other than bad input) maps to exit code 1.
struct LibraryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(pl_status s, const std::string& what) {
  if (s == PL_OK) return;
  const std::string msg = what + ": " + pl_last_error();
  if (s == PL_ERR_INVALID || s == PL_ERR_PARSE || s == PL_ERR_NULL) throw UsageError(msg);
  throw LibraryError(msg);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  pl_string_free(s);
  return out;
}

struct MapDeleter {
  void operator()(pl_map* m) const { pl_map_free(m); }
};
struct RecordDeleter {
  void operator()(pl_record* r) const { pl_record_free(r); }
};
using MapPtr = std::unique_ptr<pl_map, MapDeleter>;
using RecordPtr = std::unique_ptr<pl_record, RecordDeleter>;

// --- terminal --------------------------------------------------------------

bool use_color() {
  const char* nc = std::getenv("NO_COLOR");
  if (nc && *nc) return false;
  return ::isatty(STDERR_FILENO) != 0;
}

void note(const std::string& tag, const std::string& text, const char* colour) {
  if (use_color()) {
    std::cerr << "\x1b[" << colour << "m" << tag << "\x1b[0m " << text << "\n";
  } else {
    std::cerr << tag << " " << text << "\n";
  }
}
void info(const std::string& text) { note("info:", text, "36"); }
void warn(const std::string& text) { note("warning:", text, "33"); }
void error_line(const std::string& text) { note("error:", text, "31"); }

// --- JSON config -----------------------------------------------------------

// {"find-witness": {"seed": 7, "restarts": 200}, "table": {...}} with an
// optional flat section for top-level options.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override {
    return "{}";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    Json j;
    try {
      j = Json::parse(input);
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError("config", std::string("malformed JSON config: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config", "JSON config must be an object");
    std::vector<CLI::ConfigItem> items;
    walk(j, {}, items);
    return items;
  }

 private:
  static std::string scalar(const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void walk(const Json& j, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
    for (const auto& [key, value] : j.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        walk(value, next, out);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(value));
      }
      out.push_back(std::move(item));
    }
  }
};

// --- shared option groups --------------------------------------------------

struct MapSource {
  std::string path;
  std::string builtin;
  int m = 1;
  int n = 4;
  int degree = 3;
  std::uint64_t map_seed = 0;

  void add(CLI::App* app) {
    auto* file = app->add_option("--map", path, "Map descriptor JSON file")->check(CLI::ExistingFile);
    auto* b = app->add_option("--builtin", builtin, "Builtin map name")
                  ->check(CLI::IsMember({"affine_graph", "parabola", "moment", "random_poly"}));
    file->excludes(b);
    app->add_option("--m", m, "Builtin: domain dimension minus one")->check(CLI::Range(0, 64));
    app->add_option("--n", n, "Builtin: codomain dimension minus one")->check(CLI::Range(0, 256));
    app->add_option("--degree", degree, "Builtin random_poly: total degree")->check(CLI::Range(0, 16));
    app->add_option("--map-seed", map_seed, "Builtin random_poly: coefficient seed");
  }

  MapPtr load() const {
    pl_map* out = nullptr;
    if (!path.empty()) {
      std::ifstream in(path);
      if (!in) throw UsageError("cannot read map file " + path);
      std::stringstream ss;
      ss << in.rdbuf();
      check(pl_map_from_json(ss.str().c_str(), &out), "map " + path);
    } else if (!builtin.empty()) {
      check(pl_map_builtin(builtin.c_str(), m, n, degree, map_seed, &out), "builtin " + builtin);
    } else {
      throw UsageError("a map source is required: --map FILE or --builtin NAME");
    }
    return MapPtr(out);
  }
};

RecordPtr load_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read record file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  pl_record* rec = nullptr;
  check(pl_record_from_json(ss.str().c_str(), &rec), "record " + path);
  return RecordPtr(rec);
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text << "\n";
}

// Runs job(i) for i in [0, count) on worker threads; results keep index order.
template <class T, class F>
std::vector<T> parallel_map(int count, int threads, F job) {
  std::vector<T> out(static_cast<std::size_t>(count));
  std::vector<std::string> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        out[static_cast<std::size_t>(i)] = job(i);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  };
  const int n = std::max(1, threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (int t = 0; t < std::min(n, count); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (!e.empty()) throw LibraryError(e);
  }
  return out;
}

struct Outcome {
  int code = kOk;
  std::string summary;
  std::optional<std::uint64_t> seed;
};

// --- subcommands -----------------------------------------------------------

struct VerifyClasses {
  int m = 0;
  int m_max = 0;
  int threads = 0;

  Outcome run() const {
    const int lo = m > 0 ? m : 1;
    const int hi = m > 0 ? m : m_max;
    if (hi < 1) throw UsageError("verify-classes needs --m or --m-max");
    struct Row {
      std::string text;
      bool ok = false;
    };
    auto rows = parallel_map<Row>(hi - lo + 1, threads, [&](int i) {
      char* jsonl = nullptr;
      char* hur = nullptr;
      int ok = 0;
      check(pl_verify_classes(lo + i, &jsonl, &ok), "verify-classes");
      check(pl_hurwitz(lo + i, &hur), "hurwitz");
      return Row{take(jsonl) + take(hur) + "\n", ok != 0};
    });
    int bad = 0;
    for (const auto& r : rows) {
      std::cout << r.text;
      if (!r.ok) ++bad;
    }
    std::cout.flush();
    Outcome o;
    o.code = bad == 0 ? kOk : kNegative;
    o.summary = bad == 0 ? "all reports match their predictions"
                         : std::to_string(bad) + " value(s) of m with unexpected reports";
    return o;
  }
};

struct Table {
  int m_max = 64;
  std::string format = "csv";
  int threads = 0;

  Outcome run() const {
    auto rows = parallel_map<pl_table_row>(m_max, threads, [&](int i) {
      pl_table_row row{};
      check(pl_table_row_compute(i + 1, &row), "table");
      return row;
    });
    if (format == "csv") std::cout << "m,r,q,n,thm_a,thm_b,cor,prop_q_top\n";
    for (const auto& r : rows) {
      if (format == "csv") {
        std::cout << r.m << ',' << r.r << ',' << r.q << ',' << r.n << ',' << r.thm_a << ',' << r.thm_b << ','
                  << r.cor << ',' << r.prop_q_top << '\n';
      } else {
        Json j;
        j["m"] = r.m;
        j["r"] = r.r;
        j["q"] = r.q;
        j["n"] = r.n;
        j["thm_a"] = r.thm_a;
        j["thm_b"] = r.thm_b;
        j["cor"] = r.cor;
        j["prop_q_top"] = r.prop_q_top;
        std::cout << j.dump() << '\n';
      }
    }
    std::cout.flush();
    return {kOk, std::to_string(rows.size()) + " rows", std::nullopt};
  }
};

struct Oracles {
  int m1_max = 5;
  int m2_max = 5;
  int n_min = 1;
  int n_max = 8;
  int dual_n_max = 16;
  int dual_k = 0;
  bool mutate = false;
  int threads = 0;

  Outcome run() const {
    if (n_min > n_max) throw UsageError("--n-min must not exceed --n-max");
    struct Instance {
      int m1, m2, n;
      unsigned first, second;
    };
    std::vector<Instance> grid;
    for (int m1 = 0; m1 <= m1_max; ++m1) {
      for (int m2 = 0; m2 <= m2_max; ++m2) {
        for (int n = n_min; n <= n_max; ++n) {
          for (unsigned a = 0; a < 4; ++a) {
            for (unsigned b = 0; b < 4; ++b) grid.push_back({m1, m2, n, a, b});
          }
        }
      }
    }
    auto product = parallel_map<int>(static_cast<int>(grid.size()), threads, [&](int i) {
      const auto& g = grid[static_cast<std::size_t>(i)];
      int holds = 0;
      check(pl_oracle_product(g.m1, g.m2, g.n, g.first, g.second, &holds), "oracle product");
      return holds;
    });
    const int dn_lo = std::min(n_min, dual_n_max);
    auto dual = parallel_map<int>(dual_n_max - dn_lo + 1, threads, [&](int i) {
      const int n = dn_lo + i;
      const int k = dual_k > 0 ? dual_k : n + 2;
      int holds = 0;
      check(pl_oracle_dual(k, n, mutate ? 1 : 0, &holds), "oracle dual");
      return holds;
    });

    int failures = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (product[i]) continue;
      ++failures;
      const auto& g = grid[i];
      Json j;
      j["oracle"] = "umkehr_product";
      j["m1"] = g.m1;
      j["m2"] = g.m2;
      j["n"] = g.n;
      j["first"] = g.first;
      j["second"] = g.second;
      j["holds"] = false;
      std::cout << j.dump() << '\n';
    }
    for (std::size_t i = 0; i < dual.size(); ++i) {
      if (dual[i]) continue;
      ++failures;
      const int n = dn_lo + static_cast<int>(i);
      Json j;
      j["oracle"] = "umkehr_dual";
      j["k"] = dual_k > 0 ? dual_k : n + 2;
      j["n"] = n;
      j["mutate_rewrite"] = mutate;
      j["holds"] = false;
      std::cout << j.dump() << '\n';
    }
    Json summary;
    summary["oracle_summary"] = true;
    summary["product_instances"] = grid.size();
    summary["dual_instances"] = dual.size();
    summary["failures"] = failures;
    std::cout << summary.dump() << '\n';
    std::cout.flush();
    return {failures == 0 ? kOk : kNegative, std::to_string(failures) + " oracle failure(s)", std::nullopt};
  }
};

struct FindWitness {
  MapSource map;
  std::string kase = "b";
  pl_search_config cfg{};
  std::string out;

  FindWitness() { pl_search_config_default(&cfg); }

  Outcome run() const {
    auto f = map.load();
    pl_record* raw = nullptr;
    check(pl_search(f.get(), kase.c_str(), &cfg, &raw), "find-witness");
    RecordPtr rec(raw);
    char* label = nullptr;
    char* why = nullptr;
    check(pl_record_guarantee(rec.get(), &label, &why), "guarantee");
    const std::string lab = take(label);
    const std::string reason = take(why);
    if (lab == "guaranteed") {
      info("guaranteed: " + reason);
    } else {
      warn(reason + "; exploratory search");
    }
    char* text = nullptr;
    check(pl_record_to_json(rec.get(), &text), "record");
    const std::string json = take(text);
    std::cout << json << '\n';
    std::cout.flush();
    write_file(out, json);
    int found = 0;
    double residual = 0.0;
    check(pl_record_found(rec.get(), &found), "record");
    check(pl_record_residual(rec.get(), &residual), "record");
    std::ostringstream s;
    s << (found ? "found" : "not found") << ", residual " << residual;
    return {found ? kOk : kNegative, s.str(), cfg.seed};
  }
};

struct VerifyWitness {
  MapSource map;
  std::string record;
  double tol = 1e-9;

  Outcome run() const {
    auto f = map.load();
    auto rec = load_record(record);
    int passed = 0;
    char* text = nullptr;
    check(pl_verify_witness(rec.get(), f.get(), tol, &passed, &text), "verify-witness");
    std::cout << take(text) << '\n';
    std::cout.flush();
    return {passed ? kOk : kNegative, passed ? "verified" : "verification failed", std::nullopt};
  }
};

struct Find1d {
  MapSource map;
  double a = -1.0;
  double b = 1.0;
  double tol = 1e-12;
  std::string out;

  Outcome run() const {
    auto f = map.load();
    pl_record* raw = nullptr;
    char* text = nullptr;
    check(pl_find_1d(f.get(), a, b, tol, &raw, &text), "find-1d");
    RecordPtr rec(raw);
    const std::string json = take(text);
    const Json parsed = Json::parse(json);
    if (parsed.value("ambiguous", false)) warn(parsed.value("note", std::string()));
    std::cout << json << '\n';
    std::cout.flush();
    if (!out.empty()) {
      char* rt = nullptr;
      check(pl_record_to_json(rec.get(), &rt), "record");
      write_file(out, take(rt));
    }
    int found = 0;
    check(pl_record_found(rec.get(), &found), "record");
    return {found ? kOk : kNegative, parsed.value("branch", std::string()) + (found ? ", found" : ", not found"),
            std::nullopt};
  }
};

struct Singularity {
  MapSource map;
  std::string record;
  pl_singularity_config cfg{};

  Singularity() { pl_singularity_config_default(&cfg); }

  Outcome run() const {
    auto f = map.load();
    auto rec = load_record(record);
    char* text = nullptr;
    check(pl_singularity(f.get(), rec.get(), &cfg, &text), "singularity");
    const std::string json = take(text);
    std::cout << json << '\n';
    std::cout.flush();
    const Json j = Json::parse(json);
    const int est = j.at("estimated_dim").get<int>();
    const int bound = j.at("expected_lower_bound").get<int>();
    const std::string s = "estimated_dim " + std::to_string(est) + ", lower bound " + std::to_string(bound);
    if (est < bound) warn(s + " (advisory)");
    return {est >= bound ? kOk : kNegative, s, cfg.seed};
  }
};

std::string command_echo(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

void emit_manifest(const std::string& command, const Outcome& o, double seconds, const std::string& path) {
  Json m;
  m["tool"] = "parline";
  m["version"] = pl_version();
  m["command"] = command;
  m["seed"] = o.seed ? Json(*o.seed) : Json();
  m["wall_time_s"] = seconds;
  m["exit_code"] = o.code;
  m["outcome"] = o.summary;
  Json line;
  line["manifest"] = m;
  std::cerr << line.dump() << std::endl;
  if (!path.empty()) {
    std::ofstream out(path);
    if (out) out << line.dump() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  const std::string echo = command_echo(argc, argv);
  std::string manifest_path;
  auto finish = [&](const Outcome& o) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit_manifest(echo, o, secs, manifest_path);
    return o.code;
  };

  CLI::App app{"Parallel-line witnesses: mod-2 class checks and numerical searches"};
  app.set_version_flag("--version", std::string(pl_version()));
  app.require_subcommand(1, 1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file supplying any flag; the command line wins");
  app.add_option("--manifest", manifest_path, "Also write the run manifest to this file");

  VerifyClasses vc;
  auto* c_vc = app.add_subcommand("verify-classes", "Run the class checkers for one m or a range");
  auto* o_m = c_vc->add_option("--m", vc.m, "Single m")->check(CLI::Range(1, 4096));
  auto* o_mm = c_vc->add_option("--m-max", vc.m_max, "Every m from 1 to this value")->check(CLI::Range(1, 4096));
  o_m->excludes(o_mm);
  c_vc->add_option("--threads", vc.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  Table tb;
  auto* c_tb = app.add_subcommand("table", "Tabulate the class checks for m = 1..m_max");
  c_tb->add_option("--m-max", tb.m_max, "Largest m")->check(CLI::Range(1, 4096));
  c_tb->add_option("--format", tb.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  c_tb->add_option("--threads", tb.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  Oracles orc;
  auto* c_or = app.add_subcommand("oracles", "Exhaustive direct-image oracle grids");
  c_or->add_option("--m1-max", orc.m1_max, "Largest m1")->check(CLI::Range(0, 32));
  c_or->add_option("--m2-max", orc.m2_max, "Largest m2")->check(CLI::Range(0, 32));
  c_or->add_option("--n-min", orc.n_min, "Smallest n")->check(CLI::Range(1, 64));
  c_or->add_option("--n-max", orc.n_max, "Largest n for the product oracle")->check(CLI::Range(1, 64));
  c_or->add_option("--dual-n-max", orc.dual_n_max, "Largest n for the dual identity")->check(CLI::Range(1, 64));
  c_or->add_option("--dual-k", orc.dual_k, "Truncation of w1, w2 (0 = n+2)")->check(CLI::Range(0, 256));
  c_or->add_flag("--mutate", orc.mutate, "Corrupt the projective-bundle rewrite (negative-path test)");
  c_or->add_option("--threads", orc.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  FindWitness fw;
  auto* c_fw = app.add_subcommand("find-witness", "Multi-start search for a 4-point witness");
  fw.map.add(c_fw);
  c_fw->add_option("--case", fw.kase, "b, a, collinear or linear_dependence")
      ->check(CLI::IsMember({"a", "b", "parallel_a", "parallel_b", "collinear", "linear_dependence"}));
  c_fw->add_option("--seed", fw.cfg.seed, "Search seed");
  c_fw->add_option("--restarts", fw.cfg.restarts, "Number of restarts")->check(CLI::Range(1, 1000000));
  c_fw->add_option("--tol", fw.cfg.tol, "Acceptance threshold")->check(CLI::PositiveNumber);
  c_fw->add_option("--delta", fw.cfg.delta, "Offset scale in (0, 0.5)")->check(CLI::Range(0.0, 0.5));
  c_fw->add_option("--max-iters", fw.cfg.max_iters, "Simplex iterations per restart")->check(CLI::Range(1, 100000000));
  c_fw->add_option("--zero-eps", fw.cfg.zero_eps, "Zero-vector threshold")->check(CLI::NonNegativeNumber);
  c_fw->add_option("--step", fw.cfg.step, "Initial simplex size")->check(CLI::PositiveNumber);
  c_fw->add_option("--threads", fw.cfg.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  c_fw->add_option("--out", fw.out, "Also write the record to this file");

  VerifyWitness vw;
  auto* c_vw = app.add_subcommand("verify-witness", "Recheck a stored witness record");
  vw.map.add(c_vw);
  c_vw->add_option("--record", vw.record, "Record JSON file")->required()->check(CLI::ExistingFile);
  c_vw->add_option("--tol", vw.tol, "Residual threshold")->check(CLI::PositiveNumber);

  Find1d f1;
  auto* c_f1 = app.add_subcommand("find-1d", "Constructive witness for a map R -> R^2");
  f1.map.add(c_f1);
  c_f1->add_option("--a", f1.a, "Interval start");
  c_f1->add_option("--b", f1.b, "Interval end");
  c_f1->add_option("--tol", f1.tol, "Residual threshold")->check(CLI::PositiveNumber);
  c_f1->add_option("--out", f1.out, "Also write the record to this file");

  Singularity sg;
  auto* c_sg = app.add_subcommand("singularity", "Local dimension of the collinear solution set");
  sg.map.add(c_sg);
  c_sg->add_option("--record", sg.record, "Collinear record JSON file")->required()->check(CLI::ExistingFile);
  c_sg->add_option("--samples", sg.cfg.samples, "Perturbed samples")->check(CLI::Range(2, 100000));
  c_sg->add_option("--seed", sg.cfg.seed, "Sampling seed");
  c_sg->add_option("--noise", sg.cfg.noise, "Perturbation scale")->check(CLI::PositiveNumber);
  c_sg->add_option("--ratio", sg.cfg.ratio_threshold, "Singular value ratio threshold")->check(CLI::PositiveNumber);
  c_sg->add_option("--sample-tol", sg.cfg.tol, "Re-minimization target")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return finish({rc == 0 ? kOk : kUsage, rc == 0 ? "help" : "usage error", std::nullopt});
  }

  try {
    Outcome o;
    if (c_vc->parsed()) {
      if (vc.m == 0 && vc.m_max == 0) throw UsageError("verify-classes needs --m or --m-max");
      o = vc.run();
    } else if (c_tb->parsed()) {
      o = tb.run();
    } else if (c_or->parsed()) {
      o = orc.run();
    } else if (c_fw->parsed()) {
      if (!(fw.cfg.delta > 0.0 && fw.cfg.delta < 0.5)) throw UsageError("--delta must lie in (0, 0.5)");
      o = fw.run();
    } else if (c_vw->parsed()) {
      o = vw.run();
    } else if (c_f1->parsed()) {
      o = f1.run();
    } else if (c_sg->parsed()) {
      o = sg.run();
    }
    return finish(o);
  } catch (const UsageError& e) {
    error_line(e.what());
    return finish({kUsage, e.what(), std::nullopt});
  } catch (const std::exception& e) {
    error_line(e.what());
    return finish({kNegative, e.what(), std::nullopt});
  }
}
