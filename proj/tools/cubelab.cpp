// cubelab: command-line front end for the experiment harness.
//
//   cubelab [--config cfg.json] [--out file.csv] [--seed S] [--threads T] <task> [options]
//
// Options given on the command line override the corresponding config keys.

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cubelab/harness.hpp"
#include "cubelab/parallel.hpp"

namespace {

using cubelab::ParamValue;

struct SystemFlags {
  std::optional<std::string> kind;
  std::optional<double> alpha;
  std::optional<double> theta;
  std::optional<std::string> path;
  std::vector<std::string> obs;
};

class Params {
 public:
  void integer(CLI::App* app, const std::string& flags, const std::string& key, const std::string& help) {
    app->add_option_function<std::int64_t>(flags, [this, key](const std::int64_t& v) { values_[key] = v; },
                                           help);
  }
  void real(CLI::App* app, const std::string& flags, const std::string& key, const std::string& help) {
    app->add_option_function<double>(flags, [this, key](const double& v) { values_[key] = v; }, help);
  }
  CLI::Option* text(CLI::App* app, const std::string& flags, const std::string& key,
                    const std::string& help) {
    return app->add_option_function<std::string>(
        flags, [this, key](const std::string& v) { values_[key] = v; }, help);
  }
  const std::map<std::string, ParamValue>& values() const { return values_; }

 private:
  std::map<std::string, ParamValue> values_;
};

std::string default_expression(cubelab::SystemKind kind) {
  switch (kind) {
    case cubelab::SystemKind::Doubling: return "mz:cos(1)";
    case cubelab::SystemKind::SkewProduct: return "e(0,1)";
    default: return "e(1)";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cubelab: multiple ergodic averages, cube averages and uniformity diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string("cubelab ") + cubelab::kToolVersion);

  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
  app.add_option("--config", config_path, "JSON experiment config (schema cubelab.config/1)");
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  app.add_option("--seed", seed, "master seed; also seeds the system");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));

  SystemFlags sys;
  Params params;
  app.add_option("--system", sys.kind, "rotation | doubling | skew | product-rotation | external");
  app.add_option("--alpha", sys.alpha, "rotation angle in [0,1)");
  app.add_option("--theta", sys.theta, "second angle in [0,1)");
  app.add_option("--path", sys.path, "CSV file for the external system");
  app.add_option("--obs", sys.obs, "observable expression, e.g. 'mz:cos(1)' or 'e(0,1)+0.5*e(1)'; repeatable");
  params.real(&app, "--x0", "x0", "start point x coordinate");
  params.real(&app, "--y0", "y0", "start point y coordinate");

  auto* orbit = app.add_subcommand("orbit", "sample an observable along an orbit");
  params.integer(orbit, "--L", "L", "orbit length");

  auto* avg = app.add_subcommand("avg", "cube average M_N over 2^k-1 functions");
  params.integer(avg, "--k", "k", "cube dimension (2..4)");
  params.integer(avg, "--N", "N", "horizon");
  params.text(avg, "--method", "method", "naive | fast | both")
      ->check(CLI::IsMember({"naive", "fast", "both"}));
  params.text(avg, "--trace,--horizons", "horizons", "horizon list, e.g. 2^(6..12) or 64,128");

  auto* trace = app.add_subcommand("trace", "cube averages across a horizon list");
  params.integer(trace, "--k", "k", "cube dimension (2..4)");
  params.text(trace, "--horizons,--trace", "horizons", "horizon list, e.g. 2^(6..12)");

  auto* ww = app.add_subcommand("ww", "Wiener-Wintner sup statistic");
  params.integer(ww, "--N", "N", "horizon");
  params.text(ww, "--horizons", "horizons", "horizon list");
  params.integer(ww, "--oversample", "oversample", "grid oversampling (power of two)");

  auto* semi = app.add_subcommand("seminorm", "order 2 or 3 seminorm estimate");
  params.integer(semi, "--order", "order", "2 or 3");
  params.integer(semi, "--N", "N", "Birkhoff length");
  params.integer(semi, "--H", "H", "outer averaging length");
  params.integer(semi, "--H-inner", "H_inner", "inner averaging length (order 3)");

  auto* verify = app.add_subcommand("verify", "inequality and identity checks");
  params.text(verify, "check", "check", "vdc | lemma2 | lemma3 | lemma4 | eq1 | eq10")
      ->required()
      ->check(CLI::IsMember({"vdc", "lemma2", "lemma3", "lemma4", "eq1", "eq10"}));
  params.integer(verify, "--trials", "trials", "random trials (vdc)");
  params.integer(verify, "--N", "N", "horizon");
  params.integer(verify, "--H", "H", "shift range");
  params.integer(verify, "--k", "k", "cube dimension (lemma4)");
  params.integer(verify, "--oversample", "oversample", "grid oversampling");
  params.text(verify, "--horizons", "horizons", "horizon list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? cubelab::kExitOk : cubelab::kExitUsage;
  }

  cubelab::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = cubelab::load_config(config_path);
    }
    cfg.task = cubelab::parse_task(app.get_subcommands().front()->get_name());

    if (sys.kind) cfg.system.kind = cubelab::parse_system_kind(*sys.kind);
    if (sys.alpha) {
      cfg.system.alpha = *sys.alpha;
    } else if (config_path.empty() && cfg.system.kind != cubelab::SystemKind::ExternalSequence) {
      cfg.system.alpha = 0.6180339887498949;
    }
    if (sys.theta) cfg.system.theta = *sys.theta;
    if (sys.path) cfg.system.path = *sys.path;
    if (!sys.obs.empty()) {
      cfg.observables.clear();
      for (std::size_t i = 0; i < sys.obs.size(); ++i)
        cfg.observables.push_back({"f" + std::to_string(i + 1), cubelab::parse_observable(sys.obs[i])});
    }
    if (cfg.observables.empty() && cfg.system.kind != cubelab::SystemKind::ExternalSequence)
      cfg.observables.push_back(
          {"f1", cubelab::parse_observable(default_expression(cfg.system.kind))});

    for (const auto& [k, v] : params.values()) cfg.parameters[k] = v;
    if (seed) {
      cfg.system.seed = *seed;
      cfg.parameters["seed"] = static_cast<std::int64_t>(*seed);
    }
    if (out_path) cfg.output = *out_path;
  } catch (const cubelab::Error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return cubelab::kExitUsage;
  }

  cubelab::set_thread_count(threads);
  return cubelab::execute(cfg, std::cout, std::cerr);
}
