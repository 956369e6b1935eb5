#include "cubelab/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "cubelab/cube_averages.hpp"
#include "cubelab/cube_general.hpp"
#include "cubelab/factors.hpp"
#include "cubelab/parallel.hpp"
#include "cubelab/rng.hpp"
#include "cubelab/spectral.hpp"

namespace cubelab {

using nlohmann::json;

std::string_view to_string(Task task) {
  switch (task) {
    case Task::Orbit: return "orbit";
    case Task::Avg: return "avg";
    case Task::WW: return "ww";
    case Task::Seminorm: return "seminorm";
    case Task::Verify: return "verify";
    case Task::Trace: return "trace";
  }
  return "unknown";
}

Task parse_task(std::string_view name) {
  for (Task t : {Task::Orbit, Task::Avg, Task::WW, Task::Seminorm, Task::Verify, Task::Trace})
    if (to_string(t) == name) return t;
  throw Error(ErrorCode::Validation, "task: unknown task '" + std::string(name) + "'");
}

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.system.kind = SystemKind::Rotation;
  cfg.system.alpha = std::sqrt(2.0) - 1.0;
  cfg.system.seed = 42;
  cfg.observables = {{"f", Observable::character(1)}};
  cfg.task = Task::Avg;
  cfg.parameters = {{"k", std::int64_t{2}}, {"N", std::int64_t{64}},
                    {"method", std::string("fast")}, {"seed", std::int64_t{42}}};
  return cfg;
}

// ---------------------------------------------------------------------------
// Parameter access

namespace {

[[noreturn]] void invalid(const std::string& key, const std::string& msg) {
  throw Error(ErrorCode::Validation, key + ": " + msg);
}

const ParamValue* find_param(const ExperimentConfig& cfg, const std::string& key) {
  auto it = cfg.parameters.find(key);
  return it == cfg.parameters.end() ? nullptr : &it->second;
}

bool has(const ExperimentConfig& cfg, const std::string& key) {
  return find_param(cfg, key) != nullptr;
}

std::int64_t as_int(const ParamValue& v, const std::string& key) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (auto* d = std::get_if<double>(&v)) {
    if (*d == std::floor(*d) && std::abs(*d) < 9.0e15) return static_cast<std::int64_t>(*d);
  }
  invalid(key, "expected an integer");
}

std::int64_t get_int(const ExperimentConfig& cfg, const std::string& key) {
  const ParamValue* v = find_param(cfg, key);
  if (v == nullptr) invalid(key, "required for task " + std::string(to_string(cfg.task)));
  return as_int(*v, key);
}

std::int64_t get_int(const ExperimentConfig& cfg, const std::string& key, std::int64_t fallback) {
  const ParamValue* v = find_param(cfg, key);
  return v == nullptr ? fallback : as_int(*v, key);
}

double get_double(const ExperimentConfig& cfg, const std::string& key, double fallback) {
  const ParamValue* v = find_param(cfg, key);
  if (v == nullptr) return fallback;
  if (auto* d = std::get_if<double>(v)) return *d;
  if (auto* i = std::get_if<std::int64_t>(v)) return static_cast<double>(*i);
  invalid(key, "expected a number");
}

std::string get_string(const ExperimentConfig& cfg, const std::string& key,
                       const std::string& fallback) {
  const ParamValue* v = find_param(cfg, key);
  if (v == nullptr) return fallback;
  if (auto* s = std::get_if<std::string>(v)) return *s;
  if (auto* i = std::get_if<std::int64_t>(v)) return std::to_string(*i);
  invalid(key, "expected a string");
}

std::size_t positive(const ExperimentConfig& cfg, const std::string& key) {
  const auto v = get_int(cfg, key);
  if (v < 1) invalid(key, "must be at least 1");
  return static_cast<std::size_t>(v);
}

std::size_t positive(const ExperimentConfig& cfg, const std::string& key, std::int64_t fallback) {
  const auto v = get_int(cfg, key, fallback);
  if (v < 1) invalid(key, "must be at least 1");
  return static_cast<std::size_t>(v);
}

std::uint64_t master_seed(const ExperimentConfig& cfg) {
  const ParamValue* v = find_param(cfg, "seed");
  if (v == nullptr) return cfg.system.seed;
  return static_cast<std::uint64_t>(as_int(*v, "seed"));
}

std::string verify_check(const ExperimentConfig& cfg) { return get_string(cfg, "check", ""); }

// N from "horizons" when present, else the single value "N".
std::vector<std::size_t> horizon_list(const ExperimentConfig& cfg) {
  if (has(cfg, "horizons")) {
    try {
      return parse_horizons(get_string(cfg, "horizons", ""));
    } catch (const Error& e) {
      invalid("horizons", e.what());
    }
  }
  return {positive(cfg, "N")};
}

std::size_t oversample_of(const ExperimentConfig& cfg) {
  const auto v = get_int(cfg, "oversample", 8);
  if (v < 2 || (v & (v - 1)) != 0) invalid("oversample", "must be a power of two >= 2");
  return static_cast<std::size_t>(v);
}

int cube_order(const ExperimentConfig& cfg) {
  const auto k = get_int(cfg, "k", 2);
  if (k < 2 || k > 4) invalid("k", "must lie in 2..4");
  return static_cast<int>(k);
}

// Observable count the task consumes (1 means "first observable only").
std::size_t observables_needed(const ExperimentConfig& cfg) {
  switch (cfg.task) {
    case Task::Avg:
    case Task::Trace: return (std::size_t{1} << cube_order(cfg)) - 1;
    case Task::Verify: {
      const std::string check = verify_check(cfg);
      if (check == "vdc") return 0;
      if (check == "lemma3" || check == "eq1") return 2;
      if (check == "eq10") return 4;
      if (check == "lemma4") {
        const auto k = get_int(cfg, "k", 3);
        if (k < 3 || k > 4) invalid("k", "lemma4 takes k in {3, 4}");
        return std::size_t{1} << (k - 2);
      }
      return 1;
    }
    default: return 1;
  }
}

}  // namespace

std::vector<std::size_t> parse_horizons(std::string_view spec) {
  auto fail = [&](const std::string& why) -> std::vector<std::size_t> {
    throw Error(ErrorCode::Parse, "horizon spec '" + std::string(spec) + "': " + why);
  };
  auto to_size = [&](std::string_view s) -> std::size_t {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail("bad integer '" + std::string(s) + "'");
    return v;
  };
  std::vector<std::size_t> out;
  const auto caret = spec.find("^(");
  if (caret != std::string_view::npos) {
    const auto close = spec.find(')', caret);
    const auto dots = spec.find("..", caret);
    if (close == std::string_view::npos || dots == std::string_view::npos || dots > close)
      fail("expected B^(a..b)");
    const std::size_t base = to_size(spec.substr(0, caret));
    const std::size_t lo = to_size(spec.substr(caret + 2, dots - caret - 2));
    const std::size_t hi = to_size(spec.substr(dots + 2, close - dots - 2));
    if (base < 2 || lo > hi || hi > 62) fail("bad exponent range");
    std::size_t v = 1;
    for (std::size_t e = 0; e < lo; ++e) v *= base;
    for (std::size_t e = lo; e <= hi; ++e, v *= base) out.push_back(v);
  } else {
    std::size_t start = 0;
    while (start <= spec.size()) {
      const auto comma = spec.find(',', start);
      const auto piece = spec.substr(start, comma == std::string_view::npos ? spec.npos : comma - start);
      out.push_back(to_size(piece));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  for (std::size_t j = 0; j < out.size(); ++j)
    if (out[j] == 0 || (j > 0 && out[j] <= out[j - 1])) fail("horizons must be positive and increasing");
  return out;
}

void validate(const ExperimentConfig& cfg) {
  cfg.system.validate();
  const bool external = cfg.system.kind == SystemKind::ExternalSequence;
  if (!external) {
    if (cfg.observables.empty()) invalid("observables", "at least one observable is required");
    for (const auto& o : cfg.observables) {
      try {
        o.observable.validate_for(cfg.system.kind);
      } catch (const Error& e) {
        invalid("observables." + o.name, e.what());
      }
    }
  }

  switch (cfg.task) {
    case Task::Orbit: positive(cfg, "L"); break;
    case Task::Avg: {
      cube_order(cfg);
      const std::string method = get_string(cfg, "method", "fast");
      if (method != "naive" && method != "fast" && method != "both")
        invalid("method", "expected naive, fast or both");
      horizon_list(cfg);
      break;
    }
    case Task::Trace:
      cube_order(cfg);
      if (!has(cfg, "horizons")) invalid("horizons", "required for task trace");
      horizon_list(cfg);
      break;
    case Task::WW:
      horizon_list(cfg);
      oversample_of(cfg);
      break;
    case Task::Seminorm: {
      const auto order = get_int(cfg, "order");
      if (order != 2 && order != 3) invalid("order", "must be 2 or 3");
      positive(cfg, "N");
      positive(cfg, "H");
      if (order == 3) positive(cfg, "H_inner", get_int(cfg, "H"));
      break;
    }
    case Task::Verify: {
      const std::string check = verify_check(cfg);
      if (check == "vdc") {
        positive(cfg, "trials", 1000);
        const auto n = positive(cfg, "N", 256);
        const auto h = positive(cfg, "H", 16);
        if (h >= n) invalid("H", "must be smaller than N");
      } else if (check == "lemma2") {
        positive(cfg, "N");
        positive(cfg, "H");
      } else if (check == "lemma3" || check == "lemma4") {
        horizon_list(cfg);
        oversample_of(cfg);
      } else if (check == "eq1" || check == "eq10") {
        horizon_list(cfg);
        try {
          factor_rules(cfg.system.kind);
        } catch (const Error& e) {
          invalid("system", e.what());
        }
      } else {
        invalid("check", "expected vdc, lemma2, lemma3, lemma4, eq1 or eq10");
      }
      break;
    }
  }

  const std::size_t need = observables_needed(cfg);
  const std::size_t have = cfg.observables.size();
  if (!external && need > 1 && have != 1 && have != need)
    invalid("observables", "task needs 1 or " + std::to_string(need) + " observables, got " +
                               std::to_string(have));
  if (has(cfg, "x0") || has(cfg, "y0")) {
    const double x = get_double(cfg, "x0", 0.0);
    const double y = get_double(cfg, "y0", 0.0);
    if (!(x >= 0.0 && x < 1.0)) invalid("x0", "must lie in [0,1)");
    if (!(y >= 0.0 && y < 1.0)) invalid("y0", "must lie in [0,1)");
  }
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json observable_json(const NamedObservable& no) {
  json terms = json::array();
  for (const Term& t : no.observable.terms) terms.push_back({t.k, t.l, t.c.real(), t.c.imag()});
  json j = {{"name", no.name}, {"terms", terms}, {"meanZero", no.observable.mean_zero}};
  if (no.observable.indicator) j["indicator"] = {no.observable.indicator->a, no.observable.indicator->b};
  return j;
}

NamedObservable observable_from_json(const json& j, std::size_t index) {
  const std::string key = "observables[" + std::to_string(index) + "]";
  if (!j.is_object()) invalid(key, "expected an object");
  NamedObservable out;
  out.name = j.value("name", "f" + std::to_string(index + 1));
  try {
    if (j.contains("expr")) {
      out.observable = parse_observable(j.at("expr").get<std::string>());
    }
    if (j.contains("terms")) {
      for (const auto& t : j.at("terms")) {
        if (!t.is_array() || t.size() < 3 || t.size() > 4) invalid(key + ".terms", "expected [k, l, re, im]");
        const double im = t.size() == 4 ? t[3].get<double>() : 0.0;
        out.observable.terms.push_back(Term{t[0].get<int>(), t[1].get<int>(), cplx(t[2].get<double>(), im)});
      }
    }
    if (j.contains("indicator") && !j.at("indicator").is_null()) {
      const auto& ind = j.at("indicator");
      if (!ind.is_array() || ind.size() != 2) invalid(key + ".indicator", "expected [a, b]");
      out.observable.indicator = Interval{ind[0].get<double>(), ind[1].get<double>()};
    }
    if (j.contains("meanZero")) out.observable.mean_zero = out.observable.mean_zero || j.at("meanZero").get<bool>();
  } catch (const json::exception& e) {
    invalid(key, e.what());
  }
  if (out.observable.terms.empty() && !out.observable.indicator)
    invalid(key, "needs terms, an indicator or an expr");
  return out;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

std::string to_json(const ExperimentConfig& cfg) {
  json params = json::object();
  for (const auto& [k, v] : cfg.parameters) {
    std::visit([&](const auto& x) { params[k] = x; }, v);
  }
  json system = {{"kind", std::string(to_string(cfg.system.kind))},
                 {"alpha", cfg.system.alpha},
                 {"theta", cfg.system.theta},
                 {"seed", cfg.system.seed},
                 {"path", cfg.system.path}};
  json obs = json::array();
  for (const auto& o : cfg.observables) obs.push_back(observable_json(o));
  json j = {{"schema", kConfigSchema},     {"task", std::string(to_string(cfg.task))},
            {"system", system},            {"observables", obs},
            {"parameters", params},        {"output", cfg.output}};
  return j.dump(2);
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, "config line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!j.is_object()) invalid("schema", "config must be a JSON object");
  if (j.value("schema", std::string()) != kConfigSchema)
    invalid("schema", std::string("expected \"") + kConfigSchema + "\"");

  ExperimentConfig cfg;
  try {
    if (!j.contains("task")) invalid("task", "required");
    cfg.task = parse_task(j.at("task").get<std::string>());
    if (j.contains("system")) {
      const auto& s = j.at("system");
      cfg.system.kind = parse_system_kind(s.value("kind", std::string("rotation")));
      cfg.system.alpha = s.value("alpha", 0.0);
      cfg.system.theta = s.value("theta", 0.0);
      cfg.system.seed = s.value("seed", std::uint64_t{0});
      cfg.system.path = s.value("path", std::string());
    }
    if (j.contains("observables")) {
      const auto& arr = j.at("observables");
      if (!arr.is_array()) invalid("observables", "expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) cfg.observables.push_back(observable_from_json(arr[i], i));
    }
    if (j.contains("parameters")) {
      for (const auto& [k, v] : j.at("parameters").items()) {
        if (v.is_number_integer()) {
          cfg.parameters[k] = v.get<std::int64_t>();
        } else if (v.is_number()) {
          cfg.parameters[k] = v.get<double>();
        } else if (v.is_string()) {
          cfg.parameters[k] = v.get<std::string>();
        } else {
          invalid("parameters." + k, "expected a number or string");
        }
      }
    }
    cfg.output = j.value("output", std::string());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Validation, std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

// ---------------------------------------------------------------------------
// Running

namespace {

Point start_point(const ExperimentConfig& cfg) {
  const Point random = random_start(cfg.system.seed);
  return {get_double(cfg, "x0", random.x), get_double(cfg, "y0", random.y)};
}

// `count` orbits of length `len`; a single configured observable is reused.
std::vector<Orbit> make_orbits(const ExperimentConfig& cfg, std::size_t count, std::size_t len) {
  const Point x0 = start_point(cfg);
  std::vector<Orbit> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Observable obs = cfg.observables.empty()
                               ? Observable::constant(1.0)
                               : cfg.observables[cfg.observables.size() == 1 ? 0 : i].observable;
    out.push_back(generate_orbit(cfg.system, obs, x0, len));
  }
  return out;
}

std::vector<Samples> views(const std::vector<Orbit>& orbits) {
  return {orbits.begin(), orbits.end()};
}

std::vector<std::string> orbit_names(const ExperimentConfig& cfg, std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i)
    names.push_back(cfg.observables.empty() ? std::string("external")
                                            : cfg.observables[cfg.observables.size() == 1 ? 0 : i].name);
  return names;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return v.size() >= 2;
}

void run_orbit(const ExperimentConfig& cfg, Report& r) {
  const auto orbits = make_orbits(cfg, 1, positive(cfg, "L"));
  r.columns = {{"n", true}, {"re", false}, {"im", false}};
  for (std::size_t n = 0; n < orbits[0].size(); ++n)
    r.rows.push_back({static_cast<double>(n), orbits[0][n].real(), orbits[0][n].imag()});
}

cplx average_at(int k, const std::vector<Samples>& f, std::size_t n, Method m) {
  if (k == 2) return m == Method::Naive ? cube3_naive(f[0], f[1], f[2], n) : cube3_fast(f[0], f[1], f[2], n);
  if (k == 3) {
    const Seven s{f[0], f[1], f[2], f[3], f[4], f[5], f[6]};
    return m == Method::Naive ? cube7_naive(s, n) : cube7_fast(s, n);
  }
  const CubeSpec spec{k, f};
  return m == Method::Naive ? cubek_naive(spec, n) : cubek_fast(spec, n);
}

void run_trace(const ExperimentConfig& cfg, Report& r) {
  const int k = cube_order(cfg);
  const auto horizons = horizon_list(cfg);
  const std::size_t count = (std::size_t{1} << k) - 1;
  const auto orbits = make_orbits(cfg, count, static_cast<std::size_t>(k) * (horizons.back() - 1) + 1);
  const AverageTrace t = trace(k, views(orbits), horizons, orbit_names(cfg, count));
  r.columns = {{"N", true}, {"re", false}, {"im", false}, {"abs", false}};
  for (std::size_t j = 0; j < t.horizons.size(); ++j)
    r.rows.push_back({static_cast<double>(t.horizons[j]), t.values[j].real(), t.values[j].imag(),
                      std::abs(t.values[j])});
  r.summary.emplace_back("decreasing_trend", decreasing_trend(t) ? 1.0 : 0.0);
}

void run_avg(const ExperimentConfig& cfg, Report& r) {
  if (has(cfg, "horizons")) {
    run_trace(cfg, r);
    return;
  }
  const int k = cube_order(cfg);
  const std::size_t n = positive(cfg, "N");
  const std::size_t count = (std::size_t{1} << k) - 1;
  const auto orbits = make_orbits(cfg, count, static_cast<std::size_t>(k) * (n - 1) + 1);
  const auto f = views(orbits);
  const std::string method = get_string(cfg, "method", "fast");
  if (method == "both") {
    const cplx naive = average_at(k, f, n, Method::Naive);
    const cplx fast = average_at(k, f, n, Method::Fast);
    double bound = 1.0;
    for (const auto& o : orbits) bound *= o.sup_norm();
    const double diff = relative_error(fast, naive, 1e-6 * bound + 1e-300);
    r.columns = {{"N", true},         {"naive_re", false}, {"naive_im", false},
                 {"fast_re", false},  {"fast_im", false},  {"rel_diff", false}};
    r.rows.push_back({static_cast<double>(n), naive.real(), naive.imag(), fast.real(), fast.imag(), diff});
    if (diff > 1e-8) r.failure = "naive and fast evaluators disagree (relative " + format_number(diff) + ")";
  } else {
    const cplx v = average_at(k, f, n, method == "naive" ? Method::Naive : Method::Fast);
    r.columns = {{"N", true}, {"re", false}, {"im", false}, {"abs", false}};
    r.rows.push_back({static_cast<double>(n), v.real(), v.imag(), std::abs(v)});
  }
}

void run_ww(const ExperimentConfig& cfg, Report& r) {
  const auto horizons = horizon_list(cfg);
  const std::size_t os = oversample_of(cfg);
  const auto orbits = make_orbits(cfg, 1, horizons.back());
  r.columns = {{"N", true}, {"oversample", true}, {"value", false}, {"argmax_t", false}};
  std::vector<double> values;
  for (std::size_t n : horizons) {
    const WWStatistic w = ww_sup(orbits[0], n, os);
    r.rows.push_back({static_cast<double>(n), static_cast<double>(os), w.value, w.argmax_t});
    values.push_back(w.value);
  }
  if (values.size() > 1) r.summary.emplace_back("strictly_decreasing", strictly_decreasing(values));
}

void run_seminorm(const ExperimentConfig& cfg, Report& r) {
  const auto order = get_int(cfg, "order");
  const std::size_t n = positive(cfg, "N");
  const std::size_t h = positive(cfg, "H");
  const std::size_t hi = order == 3 ? positive(cfg, "H_inner", static_cast<std::int64_t>(h)) : h;
  const auto orbits = make_orbits(cfg, 1, n + h + (order == 3 ? hi : 0));
  const SeminormEstimate e = order == 2 ? seminorm2(orbits[0], n, h) : seminorm3(orbits[0], n, h, hi);
  r.columns = {{"order", true}, {"N", true}, {"H", true}, {"H_inner", true}, {"value", false}};
  r.rows.push_back({static_cast<double>(order), static_cast<double>(n), static_cast<double>(h),
                    static_cast<double>(hi), e.value});
}

void run_vdc(const ExperimentConfig& cfg, Report& r) {
  const std::size_t trials = positive(cfg, "trials", 1000);
  const std::size_t n = positive(cfg, "N", 256);
  const std::size_t h = positive(cfg, "H", 16);
  const std::uint64_t seed = master_seed(cfg);
  std::vector<BoundPair> results(trials);
  parallel_for(trials, [&](std::size_t i) {
    SplitMix64 gen(trial_seed(seed, i));
    std::vector<cplx> u(n);
    for (auto& x : u) x = gen.complex_uniform();
    results[i] = vdc_bound(u, n, h);
  });
  r.columns = {{"trial", true}, {"lhs", false}, {"rhs", false}, {"ok", true}};
  std::size_t violations = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const bool ok = results[i].lhs <= results[i].rhs;
    violations += ok ? 0 : 1;
    r.rows.push_back({static_cast<double>(i), results[i].lhs, results[i].rhs, ok ? 1.0 : 0.0});
  }
  r.summary.emplace_back("violations", static_cast<double>(violations));
  if (violations > 0) r.failure = std::to_string(violations) + " van der Corput violations";
}

void run_lemma2(const ExperimentConfig& cfg, Report& r) {
  const std::size_t n = positive(cfg, "N");
  const std::size_t h = positive(cfg, "H");
  const auto orbits = make_orbits(cfg, 1, n + h);
  const Lemma2Result res = lemma2_check(orbits[0], n, h);
  r.columns = {{"N", true}, {"H", true}, {"lhs", false}, {"rhs", false}, {"violated", true}};
  r.rows.push_back({static_cast<double>(n), static_cast<double>(h), res.lhs, res.rhs, res.violated ? 1.0 : 0.0});
}

void run_lemma3(const ExperimentConfig& cfg, Report& r) {
  const auto horizons = horizon_list(cfg);
  const std::size_t os = oversample_of(cfg);
  const auto orbits = make_orbits(cfg, 2, 2 * horizons.back() - 1);
  r.columns = {{"N", true}, {"value", false}};
  std::vector<double> values;
  for (std::size_t n : horizons) {
    values.push_back(lemma3_quantity(orbits[0], orbits[1], n, os));
    r.rows.push_back({static_cast<double>(n), values.back()});
  }
  if (values.size() > 1) r.summary.emplace_back("strictly_decreasing", strictly_decreasing(values));
}

void run_lemma4(const ExperimentConfig& cfg, Report& r) {
  const int k = static_cast<int>(get_int(cfg, "k", 3));
  const auto horizons = horizon_list(cfg);
  const std::size_t os = oversample_of(cfg);
  const std::size_t width = std::size_t{1} << (k - 2);
  const auto orbits = make_orbits(cfg, width, static_cast<std::size_t>(k - 1) * (horizons.back() - 1) + 1);
  r.columns = {{"N", true}, {"value", false}};
  std::vector<double> values;
  for (std::size_t n : horizons) {
    values.push_back(lemma4_quantity(k, views(orbits), n, os));
    r.rows.push_back({static_cast<double>(n), values.back()});
  }
  if (values.size() > 1) r.summary.emplace_back("strictly_decreasing", strictly_decreasing(values));
}

const Observable& observable_at(const ExperimentConfig& cfg, std::size_t i) {
  return cfg.observables[cfg.observables.size() == 1 ? 0 : i].observable;
}

void run_eq(const ExperimentConfig& cfg, Report& r, bool ten) {
  const auto horizons = horizon_list(cfg);
  const Point x0 = start_point(cfg);
  r.columns = {{"N", true}, {"raw", false}, {"projected", false}};
  for (std::size_t n : horizons) {
    const SidePair p =
        ten ? eq10_compare(cfg.system,
                           {observable_at(cfg, 0), observable_at(cfg, 1), observable_at(cfg, 2),
                            observable_at(cfg, 3)},
                           x0, n)
            : eq1_compare(cfg.system, observable_at(cfg, 0), observable_at(cfg, 1), x0, n);
    r.rows.push_back({static_cast<double>(n), p.raw, p.projected});
  }
}

}  // namespace

Report run(const ExperimentConfig& cfg) {
  validate(cfg);
  const auto started = std::chrono::steady_clock::now();
  Report r;
  switch (cfg.task) {
    case Task::Orbit: run_orbit(cfg, r); break;
    case Task::Avg: run_avg(cfg, r); break;
    case Task::Trace: run_trace(cfg, r); break;
    case Task::WW: run_ww(cfg, r); break;
    case Task::Seminorm: run_seminorm(cfg, r); break;
    case Task::Verify: {
      const std::string check = verify_check(cfg);
      if (check == "vdc") run_vdc(cfg, r);
      else if (check == "lemma2") run_lemma2(cfg, r);
      else if (check == "lemma3") run_lemma3(cfg, r);
      else if (check == "lemma4") run_lemma4(cfg, r);
      else if (check == "eq1") run_eq(cfg, r, false);
      else run_eq(cfg, r, true);
      break;
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::string task = std::string(to_string(cfg.task));
  if (cfg.task == Task::Verify) task += " " + verify_check(cfg);
  r.metadata = {{"tool", std::string("cubelab ") + kToolVersion},
                {"task", task},
                {"seed", std::to_string(master_seed(cfg))},
                {"config", json::parse(to_json(cfg)).dump()},
                {"wall_clock_s", format_number(elapsed)}};
  return r;
}

void write_report(std::ostream& out, const Report& r) {
  for (const auto& [k, v] : r.metadata) out << "# " << k << ": " << v << '\n';
  for (std::size_t c = 0; c < r.columns.size(); ++c) out << (c ? "," : "") << r.columns[c].name;
  out << '\n';
  for (const auto& row : r.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      if (r.columns[c].integer) {
        out << static_cast<long long>(row[c]);
      } else {
        out << format_number(row[c]);
      }
    }
    out << '\n';
  }
}

std::string summary_line(const ExperimentConfig& cfg, const Report& r) {
  std::ostringstream ss;
  ss << "cubelab " << to_string(cfg.task);
  if (cfg.task == Task::Verify) ss << ' ' << verify_check(cfg);
  ss << ": " << r.rows.size() << " rows";
  for (const auto& [k, v] : r.summary) ss << ", " << k << '=' << v;
  ss << (r.failure ? ", FAILED: " + *r.failure : ", ok");
  return ss.str();
}

int execute(const ExperimentConfig& cfg, std::ostream& out, std::ostream& log) {
  Report r;
  try {
    validate(cfg);
  } catch (const Error& e) {
    log << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    r = run(cfg);
  } catch (const Error& e) {
    log << "cubelab " << to_string(cfg.task) << " failed (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitNumeric;
  }
  if (cfg.output.empty() || cfg.output == "-") {
    write_report(out, r);
  } else {
    std::ofstream file(cfg.output);
    if (!file) {
      log << "usage error: output: cannot write '" << cfg.output << "'\n";
      return kExitUsage;
    }
    write_report(file, r);
  }
  log << summary_line(cfg, r) << '\n';
  return r.failure ? kExitNumeric : kExitOk;
}

}  // namespace cubelab
