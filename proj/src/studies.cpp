#include "dnlsgauge/studies.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/functionals.hpp"
#include "dnlsgauge/mc_harness.hpp"
#include "dnlsgauge/wick.hpp"

namespace dnlsgauge {

const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names{"invariants", "flow-rate", "l2-rate",
                                              "tails",      "density",   "wick-vs-mc"};
  return names;
}

namespace {

Json default_params(const std::string& study, const MeasureSpec& m) {
  if (study == "invariants")
    return Json{{"samples", 3}, {"alpha", 0.5}, {"N", std::max(1, m.cutoff / 2)}, {"stream", 0}};
  if (study == "flow-rate")
    return Json{{"N_list", {4, 8, 16, 32}}, {"alpha", 0.5}, {"samples", 4}, {"stream", 0}};
  if (study == "l2-rate") return Json{{"M_list", {4, 8, 16, 32}}, {"N_ref", 48}};
  if (study == "tails")
    return Json{{"statistic", "f_n"}, {"thresholds", {1.0, 2.0, 4.0, 8.0}}, {"samples", 10000},
                {"s_prime", 0.75},    {"n0", 8},                            {"stream", 0}};
  if (study == "density")
    return Json{{"alphas", {0.1, -0.1, 0.2, -0.2}},
                {"sets", Json::array({Json{{"kind", "everything"}}})},
                {"samples", 10000},
                {"stream", 0}};
  if (study == "wick-vs-mc") return Json{{"N", 8}, {"M", 4}, {"samples", 100000}, {"stream", 0}};
  fail(ErrorKind::InvalidArgument, "unknown study '" + study + "'");
}

Json canonical_set(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    fail(ErrorKind::InvalidArgument, "density: each set needs a string 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  auto num = [&](const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) fail(ErrorKind::InvalidArgument, std::string("density set: '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  if (kind == "everything") return Json{{"kind", kind}};
  if (kind == "sobolev_ball") return Json{{"kind", kind}, {"radius", num("radius", 1.0)}};
  if (kind == "halfspace")
    return Json{{"kind", kind}, {"mode", static_cast<int>(num("mode", 0))}, {"level", num("level", 0.0)}};
  if (kind == "linf_grid_ball")
    return Json{{"kind", kind}, {"radius", num("radius", 1.0)}, {"grid_size", static_cast<int>(num("grid_size", 0))}};
  fail(ErrorKind::InvalidArgument, "density: unknown set kind '" + kind + "'");
}

TestSet test_set_from_json(const Json& j) {
  TestSet t;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "everything") t.kind = TestSet::Kind::Everything;
  if (kind == "sobolev_ball") {
    t.kind = TestSet::Kind::SobolevBall;
    t.radius = j.at("radius").get<double>();
  }
  if (kind == "halfspace") {
    t.kind = TestSet::Kind::HalfSpace;
    t.mode = j.at("mode").get<int>();
    t.level = j.at("level").get<double>();
  }
  if (kind == "linf_grid_ball") {
    t.kind = TestSet::Kind::LinfGridBall;
    t.radius = j.at("radius").get<double>();
    t.grid_size = j.at("grid_size").get<int>();
  }
  return t;
}

void check_type(const Json& given, const Json& dflt, const std::string& key) {
  const bool ok = (dflt.is_number() && given.is_number()) || (dflt.is_string() && given.is_string()) ||
                  (dflt.is_array() && given.is_array());
  if (!ok) fail(ErrorKind::InvalidArgument, "params." + key + " has the wrong type");
  if (dflt.is_number_integer() && !given.is_number_integer())
    fail(ErrorKind::InvalidArgument, "params." + key + " must be an integer");
  if (given.is_array() && given.empty()) fail(ErrorKind::InvalidArgument, "params." + key + " must not be empty");
}

Json resolve_params(const std::string& study, const MeasureSpec& m, const Json& user) {
  Json p = default_params(study, m);
  if (user.is_null()) return p;
  if (!user.is_object()) fail(ErrorKind::InvalidArgument, "params must be an object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    if (!p.contains(it.key()))
      fail(ErrorKind::InvalidArgument, "unknown parameter '" + it.key() + "' for study " + study);
    check_type(it.value(), p[it.key()], it.key());
    p[it.key()] = it.value();
  }
  if (p.contains("sets")) {
    Json sets = Json::array();
    for (const auto& s : p["sets"]) sets.push_back(canonical_set(s));
    p["sets"] = sets;
  }
  for (const char* key : {"samples", "N", "N_ref", "M", "n0"})
    if (p.contains(key)) require(p[key].get<long long>() >= (std::string(key) == "M" ? 0 : 1),
                                 std::string("params.") + key + " out of range");
  if (p.contains("stream")) require(p["stream"].get<long long>() >= 0, "params.stream must be non-negative");
  return p;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string label(const std::string& name, const std::string& key, double v) {
  std::ostringstream o;
  o.precision(17);
  o << name << "[" << key << "=" << v << "]";
  return o.str();
}

std::string label(const std::string& name, std::uint64_t i) { return name + "[" + std::to_string(i) + "]"; }

template <class T>
std::vector<T> list(const Json& p, const char* key) {
  return p.at(key).get<std::vector<T>>();
}

HarnessOptions harness(const StudyConfig& cfg) {
  return {cfg.workers, cfg.params.at("stream").get<std::uint64_t>()};
}

std::vector<CsvRow> run_invariants(const StudyConfig& cfg) {
  const auto& p = cfg.params;
  const auto n = p.at("samples").get<std::uint64_t>();
  const double alpha = p.at("alpha").get<double>();
  const int N = p.at("N").get<int>();
  const auto h = harness(cfg);
  const MeasureSpec& m = cfg.measure;

  struct Inv {
    double drift, frozen, modulus, dual_gap, split_gap, group;
  };
  std::vector<Inv> out(n);
  parallel_for(n, cfg.workers, [&](std::uint64_t i) {
    const auto u = sample_one(m, h.stream_base, i).value;
    const auto flow = gauge_truncated(u, alpha, N, cfg.flow);
    bool frozen = true;
    for (int k = -u.cutoff(); k <= u.cutoff(); ++k)
      if (std::abs(k) > N && !(flow.final_state[k] == u[k])) frozen = false;
    const auto exact = gauge_exact(u, alpha, cfg.flow);
    const int G = cfg.flow.oversample_factor * (2 * u.cutoff() + 1);
    const auto a = evaluate(exact.value, std::max(G, 2 * exact.output_cutoff + 1));
    const auto b = evaluate(u, std::max(G, 2 * exact.output_cutoff + 1));
    double modulus = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) modulus = std::max(modulus, std::abs(std::abs(a[k]) - std::abs(b[k])));
    const int Nd = std::min(N, u.cutoff());
    const double gap = std::abs(divergence_closed_form(u, Nd) - divergence_double_sum(u, Nd));
    const auto split = f_split(u, Nd, m.s, 1e-10);
    const double sgap = std::abs(split.split->f_less + split.split->f_geq - split.value);
    const double group = group_defect(u, alpha, -alpha, N, cfg.flow);
    out[i] = {flow.l2_drift, frozen ? 1.0 : 0.0, modulus, gap, sgap, group};
  });
  std::vector<CsvRow> rows;
  for (std::uint64_t i = 0; i < n; ++i) {
    rows.push_back({label("l2_drift", i), out[i].drift, 0.0, 1});
    rows.push_back({label("frozen_tail", i), out[i].frozen, 0.0, 1});
    rows.push_back({label("exact_modulus_defect", i), out[i].modulus, 0.0, 1});
    rows.push_back({label("divergence_dual_gap", i), out[i].dual_gap, 0.0, 1});
    rows.push_back({label("split_identity_gap", i), out[i].split_gap, 0.0, 1});
    rows.push_back({label("inverse_defect", i), out[i].group, 0.0, 1});
  }
  return rows;
}

std::vector<CsvRow> run_flow_rate(const StudyConfig& cfg) {
  const auto& p = cfg.params;
  const auto n = p.at("samples").get<std::uint64_t>();
  const double alpha = p.at("alpha").get<double>();
  const auto Ns = list<int>(p, "N_list");
  for (int N : Ns) require(N >= 0, "N_list entries must be non-negative");
  const auto h = harness(cfg);
  std::vector<std::vector<double>> d(Ns.size(), std::vector<double>(n));
  parallel_for(n, cfg.workers, [&](std::uint64_t i) {
    const auto u = sample_one(cfg.measure, h.stream_base, i).value;
    for (std::size_t k = 0; k < Ns.size(); ++k) d[k][i] = flow_discrepancy(u, alpha, Ns[k], cfg.flow);
  });
  std::vector<CsvRow> rows;
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < Ns.size(); ++k) {
    const auto e = mean_estimate(d[k]);
    rows.push_back({label("discrepancy", "N", Ns[k]), e.value, e.std_error, n});
    if (Ns[k] > 0 && e.value > 0.0) {
      xs.push_back(Ns[k]);
      ys.push_back(e.value);
    }
  }
  if (xs.size() >= 3) {
    const auto f = rate_fit(xs, ys);
    rows.push_back({"slope", f.slope, f.slope_stderr, xs.size()});
  }
  return rows;
}

std::vector<CsvRow> run_l2_rate(const StudyConfig& cfg) {
  const auto Ms = list<int>(cfg.params, "M_list");
  const int N_ref = cfg.params.at("N_ref").get<int>();
  const auto table = rate_table(cfg.measure.s, Ms, N_ref);
  std::vector<CsvRow> rows;
  std::vector<double> xs, ys;
  for (const auto& r : table) {
    rows.push_back({label("l2_distance", "M", r.M), r.l2_distance, 0.0, 0});
    if (r.M > 0 && r.l2_distance > 0.0) {
      xs.push_back(r.M);
      ys.push_back(r.l2_distance);
    }
  }
  if (xs.size() >= 3) {
    const auto f = rate_fit(xs, ys);
    rows.push_back({"slope", f.slope, f.slope_stderr, xs.size()});
  }
  return rows;
}

std::vector<CsvRow> run_tails(const StudyConfig& cfg) {
  const auto& p = cfg.params;
  Statistic stat;
  stat.kind = parse_statistic_kind(p.at("statistic").get<std::string>());
  stat.s_prime = p.at("s_prime").get<double>();
  stat.n0 = p.at("n0").get<int>();
  const auto n = p.at("samples").get<std::uint64_t>();
  const auto thresholds = list<double>(p, "thresholds");
  const auto curve = tail_curve(stat, cfg.measure, thresholds, n, harness(cfg));
  std::vector<CsvRow> rows;
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    rows.push_back({label("log_survival", "t", thresholds[k]), curve.log_survival[k], 0.0, n});
    rows.push_back({label("log_cp_lo", "t", thresholds[k]), curve.log_cp_lo[k], 0.0, n});
    rows.push_back({label("log_cp_hi", "t", thresholds[k]), curve.log_cp_hi[k], 0.0, n});
  }
  if (cfg.measure.radius) rows.push_back({"r_star", r_star(*cfg.measure.radius, cfg.measure.s), 0.0, 0});
  return rows;
}

std::vector<CsvRow> run_density(const StudyConfig& cfg) {
  const auto& p = cfg.params;
  const auto n = p.at("samples").get<std::uint64_t>();
  const auto alphas = list<double>(p, "alphas");
  std::vector<CsvRow> rows;
  for (const auto& sj : p.at("sets")) {
    const auto set = test_set_from_json(sj);
    for (double a : alphas) {
      const auto r = pushforward_check(set, a, cfg.measure, n, cfg.flow, harness(cfg));
      std::ostringstream tag;
      tag.precision(17);
      tag << "[" << set.describe() << ",alpha=" << a << "]";
      rows.push_back({"lhs" + tag.str(), r.lhs.value, r.lhs.std_error, n});
      rows.push_back({"rhs" + tag.str(), r.rhs.value, r.rhs.std_error, n});
      rows.push_back({"z_score" + tag.str(), r.z_score, 0.0, n});
    }
  }
  if (cfg.measure.radius) rows.push_back({"r_star", r_star(*cfg.measure.radius, cfg.measure.s), 0.0, 0});
  return rows;
}

std::vector<CsvRow> run_wick_vs_mc(const StudyConfig& cfg) {
  const auto& p = cfg.params;
  const int N = p.at("N").get<int>(), M = p.at("M").get<int>();
  const auto n = p.at("samples").get<std::uint64_t>();
  const auto w = second_moment_diff(N, M, cfg.measure.s);
  MeasureSpec m = cfg.measure;
  m.cutoff = std::max(m.cutoff, N);
  Statistic stat{StatisticKind::FDiff, N, M, 0.0, 1};
  const auto e = estimate_power_mean(stat, 2.0, m, n, harness(cfg));
  const double z = e.std_error > 0.0 ? (e.value - w.value) / e.std_error : 0.0;
  return {{"wick_exact", w.value, 0.0, 0},
          {"wick_zzbar_total", w.zzbar_total, 0.0, 0},
          {"wick_zz_total", w.zz_total, 0.0, 0},
          {"mc_estimate", e.value, e.std_error, n},
          {"z_score", z, 0.0, n}};
}

}  // namespace

StudyConfig parse_study_config(const Json& input) {
  if (!input.is_object()) fail(ErrorKind::InvalidArgument, "config must be a JSON object");
  const Json& j = input.contains("resolved_config") ? input.at("resolved_config") : input;
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, "resolved_config must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    static const std::vector<std::string> known{"study", "measure", "flow", "params", "output_dir", "workers"};
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      fail(ErrorKind::InvalidArgument, "unknown config key '" + it.key() + "'");
  }
  StudyConfig cfg;
  if (!j.contains("study") || !j.at("study").is_string())
    fail(ErrorKind::InvalidArgument, "config needs a string 'study'");
  cfg.study = j.at("study").get<std::string>();
  if (std::find(study_names().begin(), study_names().end(), cfg.study) == study_names().end())
    fail(ErrorKind::InvalidArgument, "unknown study '" + cfg.study + "'");
  if (!j.contains("measure")) fail(ErrorKind::InvalidArgument, "config needs a 'measure'");
  Json measure = j.at("measure");
  if (measure.is_object() && !measure.contains("master_seed")) {
    if (const char* env = std::getenv("DNLSGAUGE_SEED")) {
      try {
        measure["master_seed"] = std::stoull(env);
      } catch (const std::exception&) {
        fail(ErrorKind::InvalidArgument, "DNLSGAUGE_SEED is not an unsigned integer");
      }
    }
  }
  cfg.measure = measure_from_json(measure);
  require(cfg.measure.s > 0.5, "studies require s > 1/2");
  cfg.flow = flow_options_from_json(j.contains("flow") ? j.at("flow") : Json());
  cfg.params = resolve_params(cfg.study, cfg.measure, j.contains("params") ? j.at("params") : Json());
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) fail(ErrorKind::InvalidArgument, "output_dir must be a string");
    cfg.output_dir = j.at("output_dir").get<std::string>();
  } else if (const char* env = std::getenv("DNLSGAUGE_OUTPUT_DIR")) {
    cfg.output_dir = env;
  } else {
    cfg.output_dir = "dnlsgauge-out";
  }
  if (j.contains("workers")) {
    if (!j.at("workers").is_number_unsigned() && !(j.at("workers").is_number_integer() && j.at("workers").get<long long>() >= 0))
      fail(ErrorKind::InvalidArgument, "workers must be a non-negative integer");
    cfg.workers = j.at("workers").get<unsigned>();
  }
  return cfg;
}

namespace {

Json hashed_part(const StudyConfig& cfg) {
  return Json{{"study", cfg.study},
              {"measure", to_json(cfg.measure)},
              {"flow", to_json(cfg.flow)},
              {"params", cfg.params}};
}

}  // namespace

Json resolved_config_json(const StudyConfig& cfg) {
  Json j = hashed_part(cfg);
  j["output_dir"] = cfg.output_dir;
  j["workers"] = cfg.workers;
  return j;
}

std::string config_hash(const StudyConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(hashed_part(cfg).dump())));
  return buf;
}

std::vector<CsvRow> run_study(const StudyConfig& cfg) {
  if (cfg.study == "invariants") return run_invariants(cfg);
  if (cfg.study == "flow-rate") return run_flow_rate(cfg);
  if (cfg.study == "l2-rate") return run_l2_rate(cfg);
  if (cfg.study == "tails") return run_tails(cfg);
  if (cfg.study == "density") return run_density(cfg);
  if (cfg.study == "wick-vs-mc") return run_wick_vs_mc(cfg);
  fail(ErrorKind::InvalidArgument, "unknown study '" + cfg.study + "'");
}

std::string render_csv(const StudyConfig& cfg, const std::vector<CsvRow>& rows) {
  const auto hash = config_hash(cfg);
  const auto seed = std::to_string(cfg.measure.master_seed);
  std::string out = "config_hash,statistic,value,stderr,n,seed\n";
  for (const auto& r : rows) {
    // Statistic labels may contain commas; quote them.
    out += hash + ",\"" + r.statistic + "\"," + format_double(r.value) + "," + format_double(r.std_error) + "," +
           std::to_string(r.n) + "," + seed + "\n";
  }
  return out;
}

RunArtifacts run_and_write(const StudyConfig& cfg) {
  const auto rows = run_study(cfg);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create output directory '" + cfg.output_dir + "': " + ec.message());
  RunArtifacts a;
  a.hash = config_hash(cfg);
  a.rows = rows.size();
  const std::string stem = cfg.study + "_" + a.hash;
  a.csv_path = (fs::path(cfg.output_dir) / (stem + ".csv")).string();
  a.manifest_path = (fs::path(cfg.output_dir) / (stem + ".manifest.json")).string();
  write_text_file(a.csv_path, render_csv(cfg, rows));
  Json manifest{{"config_hash", a.hash},
                {"seed", cfg.measure.master_seed},
                {"resolved_config", resolved_config_json(cfg)},
                {"artifacts", Json{{"csv", stem + ".csv"}}},
                {"rows", rows.size()}};
  if (cfg.measure.radius) manifest["r_star"] = r_star(*cfg.measure.radius, cfg.measure.s);
  write_text_file(a.manifest_path, manifest.dump(2) + "\n");
  return a;
}

}  // namespace dnlsgauge
