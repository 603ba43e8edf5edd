#include "dnlsgauge/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dnlsgauge/error.hpp"

namespace dnlsgauge {

namespace {

template <class T>
T get_field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorKind::InvalidArgument, where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidArgument, where + ": bad field '" + key + "': " + e.what());
  }
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json to_json(const SpectralFunction& u) {
  Json coeffs = Json::array();
  for (const auto& z : u.coeffs()) coeffs.push_back(Json::array({z.real(), z.imag()}));
  return Json{{"cutoff", u.cutoff()}, {"coeffs", std::move(coeffs)}};
}

SpectralFunction spectral_from_json(const Json& j) {
  const std::string where = "spectral function";
  const int N = get_field<int>(j, "cutoff", where);
  require(N >= 0, where + ": cutoff must be non-negative");
  if (!j.contains("coeffs") || !j.at("coeffs").is_array())
    fail(ErrorKind::InvalidArgument, where + ": 'coeffs' must be an array");
  const auto& arr = j.at("coeffs");
  if (arr.size() != static_cast<std::size_t>(2 * N + 1))
    fail(ErrorKind::InvalidArgument, where + ": expected " + std::to_string(2 * N + 1) +
                                         " coefficients, got " + std::to_string(arr.size()));
  std::vector<Complex> c;
  c.reserve(arr.size());
  for (const auto& e : arr) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      fail(ErrorKind::InvalidArgument, where + ": each coefficient must be [re, im]");
    c.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return SpectralFunction(N, std::move(c));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for '" + path + "'");
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::Parse, what + ": " + e.what());
  }
}

SpectralFunction read_spectral_file(const std::string& path) {
  return spectral_from_json(parse_json(read_text_file(path), path));
}

Json to_json(const MeasureSpec& spec) {
  Json j{{"s", spec.s}, {"cutoff", spec.cutoff}};
  j["radius"] = spec.radius ? Json(*spec.radius) : Json(nullptr);
  j["master_seed"] = spec.master_seed;
  return j;
}

MeasureSpec measure_from_json(const Json& j) {
  const std::string where = "measure";
  MeasureSpec m;
  m.s = get_field<double>(j, "s", where);
  m.cutoff = get_field<int>(j, "cutoff", where);
  if (j.contains("radius") && !j.at("radius").is_null()) m.radius = get_field<double>(j, "radius", where);
  if (j.contains("master_seed")) m.master_seed = get_field<std::uint64_t>(j, "master_seed", where);
  m.validate();
  return m;
}

Json to_json(const FlowOptions& o) {
  return Json{{"step_count", o.step_count},
              {"oversample_factor", o.oversample_factor},
              {"store_trajectory", o.store_trajectory}};
}

FlowOptions flow_options_from_json(const Json& j) {
  const std::string where = "flow";
  FlowOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, "flow must be an object");
  if (j.contains("step_count")) o.step_count = get_field<int>(j, "step_count", where);
  if (j.contains("oversample_factor")) o.oversample_factor = get_field<int>(j, "oversample_factor", where);
  if (j.contains("store_trajectory")) o.store_trajectory = get_field<bool>(j, "store_trajectory", where);
  o.validate();
  return o;
}

Json to_json(const FlowResult& r) {
  Json j{{"final", to_json(r.final_state)},
         {"l2_drift", r.l2_drift},
         {"divergence_integral", r.divergence_integral}};
  if (!r.trajectory.empty()) {
    Json t = Json::array();
    for (const auto& p : r.trajectory) t.push_back(Json{{"alpha", p.alpha}, {"state", to_json(p.state)}});
    j["trajectory"] = std::move(t);
  }
  return j;
}

Json to_json(const ExactGaugeResult& r) {
  return Json{{"value", to_json(r.value)}, {"output_cutoff", r.output_cutoff}, {"tail_mass", r.tail_mass}};
}

Json to_json(const SampleBatch& b) {
  Json samples = Json::array();
  for (const auto& u : b.samples) samples.push_back(to_json(u));
  return Json{{"spec", to_json(b.spec)},
              {"accepted", b.accepted},
              {"rejected", b.rejected},
              {"samples", std::move(samples)}};
}

Json to_json(const FunctionalValue& v) {
  Json j{{"value", v.value}};
  if (v.split) j["split"] = Json{{"f_less", v.split->f_less}, {"f_geq", v.split->f_geq}};
  j["truncation_error_bound"] = v.truncation_error_bound;
  j["series_terms"] = v.series_terms;
  return j;
}

Json to_json(const LPStats& s) {
  return Json{{"x_blocks", s.x_blocks}, {"y_blocks", s.y_blocks}, {"x_total", s.x_total},
              {"y_total", s.y_total},   {"l_stat", s.l_stat}};
}

Json to_json(const MCEstimate& e) {
  return Json{{"value", e.value},
              {"stderr", e.std_error},
              {"n_samples", e.n_samples},
              {"spec", to_json(e.spec)},
              {"stream_base", e.stream_base}};
}

}  // namespace dnlsgauge
