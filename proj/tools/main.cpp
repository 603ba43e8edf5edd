// dnlsgauge command line: `run <config.json>` for studies, `eval <quantity>` for one-shot values.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dnlsgauge/dnlsgauge.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

int exit_code(dg_status st) {
  switch (st) {
    case DG_OK: return kExitOk;
    case DG_INVALID_ARGUMENT:
    case DG_PARSE_ERROR:
    case DG_IO_ERROR: return kExitInput;
    default: return kExitNumeric;
  }
}

int report(dg_status st) {
  if (st != DG_OK) std::cerr << "dnlsgauge: " << dg_last_error() << "\n";
  return exit_code(st);
}

void print_scalar(double x) { std::printf("%.17g\n", x); }

int print_json(dg_status st, char*& json) {
  if (st != DG_OK) return report(st);
  std::printf("%s\n", json);
  dg_string_free(json);
  return kExitOk;
}

struct Handle {
  dg_spectral* p = nullptr;
  ~Handle() { dg_spectral_destroy(p); }
};

std::optional<std::uint64_t> env_seed() {
  const char* e = std::getenv("DNLSGAUGE_SEED");
  if (!e) return std::nullopt;
  try {
    return std::stoull(e);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauge-transform and Gaussian-measure numerics"};
  app.require_subcommand(1);

  std::string config_path;
  int workers = -1;
  std::string output_dir;
  auto* run = app.add_subcommand("run", "Run a study from a config or manifest JSON");
  run->add_option("config", config_path, "Config or manifest file")->required();
  run->add_option("--workers", workers, "Worker threads (overrides the config)");
  run->add_option("--output-dir", output_dir, "Output directory (overrides the config)");

  std::string quantity, in_path;
  int N = -1, steps = 0, oversample = 16;
  double s = 1.0, alpha = 0.0, radius = 0.0;
  std::uint64_t seed = 0, stream = 0, index = 0;
  auto* ev = app.add_subcommand("eval", "Evaluate one quantity");
  ev->add_option("quantity", quantity, "gauge-potential | gauge-exact | f-n | divergence | logdet | sample")
      ->required()
      ->check(CLI::IsMember({"gauge-potential", "gauge-exact", "f-n", "divergence", "logdet", "sample"}));
  ev->add_option("--in", in_path, "SpectralFunction JSON file");
  ev->add_option("--N", N, "Truncation cutoff (default: input cutoff)");
  ev->add_option("--s", s, "Sobolev index")->capture_default_str();
  ev->add_option("--alpha", alpha, "Flow parameter")->capture_default_str();
  ev->add_option("--steps", steps, "RK4 steps (default: 64 |alpha| max(1, mass))");
  ev->add_option("--oversample", oversample, "Grid oversampling for gauge-exact")->capture_default_str();
  auto* seed_opt = ev->add_option("--seed", seed, "Master seed (default: $DNLSGAUGE_SEED or 0)");
  ev->add_option("--radius", radius, "L2 ball radius for sample (<= 0: unrestricted)");
  ev->add_option("--stream", stream, "Stream id for sample")->capture_default_str();
  ev->add_option("--index", index, "Sample index")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (*run) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "dnlsgauge: cannot open '" << config_path << "'\n";
      return kExitInput;
    }
    std::ostringstream text;
    text << in.rdbuf();
    char* out = nullptr;
    const dg_status st =
        dg_run_study(text.str().c_str(), workers, output_dir.empty() ? nullptr : output_dir.c_str(), &out);
    return print_json(st, out);
  }

  if (quantity == "sample") {
    if (seed_opt->count() == 0) seed = env_seed().value_or(0);
    if (N < 0) {
      std::cerr << "dnlsgauge: eval sample needs --N\n";
      return kExitInput;
    }
    Handle u;
    dg_status st = dg_sample(s, N, radius, seed, stream, index, &u.p);
    if (st != DG_OK) return report(st);
    char* json = nullptr;
    st = dg_spectral_to_json(u.p, &json);
    return print_json(st, json);
  }

  if (in_path.empty()) {
    std::cerr << "dnlsgauge: eval " << quantity << " needs --in\n";
    return kExitInput;
  }
  Handle u;
  if (dg_status st = dg_spectral_load(in_path.c_str(), &u.p); st != DG_OK) return report(st);
  if (N < 0) N = dg_spectral_cutoff(u.p);

  double value = 0.0;
  dg_status st = DG_OK;
  if (quantity == "gauge-potential") {
    Handle out;
    st = dg_gauge_potential(u.p, N, &out.p);
    if (st != DG_OK) return report(st);
    char* json = nullptr;
    st = dg_spectral_to_json(out.p, &json);
    return print_json(st, json);
  }
  if (quantity == "gauge-exact") {
    char* json = nullptr;
    st = dg_gauge_exact(u.p, alpha, oversample, &json);
    return print_json(st, json);
  }
  if (quantity == "f-n") st = dg_f_n(u.p, N, s, &value);
  if (quantity == "divergence") st = dg_divergence(u.p, N, &value);
  if (quantity == "logdet") st = dg_jacobian_log_det(u.p, alpha, N, steps, &value);
  if (st != DG_OK) return report(st);
  print_scalar(value);
  return kExitOk;
}
