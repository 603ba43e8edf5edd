#pragma once

#include <string>

#include <json.hpp>

#include "dnlsgauge/functionals.hpp"
#include "dnlsgauge/gauge_flow.hpp"
#include "dnlsgauge/gaussian_measure.hpp"
#include "dnlsgauge/mc_harness.hpp"
#include "dnlsgauge/spectral.hpp"

namespace dnlsgauge {

using Json = nlohmann::ordered_json;

/// {"cutoff": N, "coeffs": [[re, im], ...]} ordered n = -N..N.
Json to_json(const SpectralFunction& u);
SpectralFunction spectral_from_json(const Json& j);

SpectralFunction read_spectral_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Parses text, mapping syntax errors to ErrorKind::Parse.
Json parse_json(const std::string& text, const std::string& what);

Json to_json(const MeasureSpec& spec);
MeasureSpec measure_from_json(const Json& j);

Json to_json(const FlowOptions& opts);
FlowOptions flow_options_from_json(const Json& j);

Json to_json(const FlowResult& r);
Json to_json(const ExactGaugeResult& r);
Json to_json(const SampleBatch& b);
Json to_json(const FunctionalValue& v);
Json to_json(const LPStats& s);
Json to_json(const MCEstimate& e);

/// %.17g, with inf/nan spelled out.
std::string format_double(double x);

}  // namespace dnlsgauge
