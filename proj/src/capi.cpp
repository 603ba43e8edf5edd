#include "dnlsgauge/dnlsgauge.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/functionals.hpp"
#include "dnlsgauge/gauge_flow.hpp"
#include "dnlsgauge/gaussian_measure.hpp"
#include "dnlsgauge/json_io.hpp"
#include "dnlsgauge/studies.hpp"
#include "dnlsgauge/wick.hpp"

struct dg_spectral {
  dnlsgauge::SpectralFunction value;
};

namespace {

thread_local std::string last_error;

dg_status status_of(dnlsgauge::ErrorKind k) {
  using dnlsgauge::ErrorKind;
  switch (k) {
    case ErrorKind::InvalidArgument: return DG_INVALID_ARGUMENT;
    case ErrorKind::Parse: return DG_PARSE_ERROR;
    case ErrorKind::Io: return DG_IO_ERROR;
    case ErrorKind::Numeric: return DG_NUMERIC_ERROR;
    case ErrorKind::Starvation: return DG_STARVATION;
    case ErrorKind::Limit: return DG_LIMIT;
  }
  return DG_INTERNAL;
}

template <class F>
dg_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    return DG_OK;
  } catch (const dnlsgauge::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DG_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DG_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) dnlsgauge::fail(dnlsgauge::ErrorKind::InvalidArgument, std::string(what) + " is NULL");
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const dnlsgauge::Json& j, char** out) {
  need(out, "out_json");
  *out = dup_string(j.dump());
}

dg_spectral* wrap(dnlsgauge::SpectralFunction v) { return new dg_spectral{std::move(v)}; }

int resolve_steps(const dnlsgauge::SpectralFunction& u, double alpha, int N, int step_count) {
  if (step_count > 0) return step_count;
  const double mass = dnlsgauge::l2_norm_sq(dnlsgauge::project(u, std::max(N, 0)));
  return dnlsgauge::recommended_step_count(alpha, std::sqrt(mass));
}

}  // namespace

extern "C" {

const char* dg_last_error(void) { return last_error.c_str(); }

const char* dg_version(void) { return "0.1.0"; }

void dg_string_free(char* s) { delete[] s; }

dg_status dg_spectral_create(int cutoff, const double* coeffs, dg_spectral** out) {
  return guarded([&] {
    need(out, "out");
    dnlsgauge::require(cutoff >= 0, "cutoff must be non-negative");
    std::vector<dnlsgauge::Complex> c(static_cast<std::size_t>(2 * cutoff + 1));
    if (coeffs)
      for (std::size_t i = 0; i < c.size(); ++i) c[i] = {coeffs[2 * i], coeffs[2 * i + 1]};
    *out = wrap(dnlsgauge::SpectralFunction(cutoff, std::move(c)));
  });
}

dg_status dg_spectral_from_json(const char* json, dg_spectral** out) {
  return guarded([&] {
    need(json, "json");
    need(out, "out");
    *out = wrap(dnlsgauge::spectral_from_json(dnlsgauge::parse_json(json, "spectral JSON")));
  });
}

dg_status dg_spectral_load(const char* path, dg_spectral** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = wrap(dnlsgauge::read_spectral_file(path));
  });
}

dg_status dg_spectral_to_json(const dg_spectral* u, char** out_json) {
  return guarded([&] {
    need(u, "u");
    emit(dnlsgauge::to_json(u->value), out_json);
  });
}

void dg_spectral_destroy(dg_spectral* u) { delete u; }

int dg_spectral_cutoff(const dg_spectral* u) { return u ? u->value.cutoff() : -1; }

dg_status dg_spectral_coeff(const dg_spectral* u, int n, double* re, double* im) {
  return guarded([&] {
    need(u, "u");
    need(re, "re");
    need(im, "im");
    const auto z = u->value[n];
    *re = z.real();
    *im = z.imag();
  });
}

dg_status dg_gauge_potential(const dg_spectral* u, int N, dg_spectral** out) {
  return guarded([&] {
    need(u, "u");
    need(out, "out");
    *out = wrap(dnlsgauge::gauge_potential(u->value, N));
  });
}

dg_status dg_gauge_exact(const dg_spectral* u, double alpha, int oversample_factor, char** out_json) {
  return guarded([&] {
    need(u, "u");
    dnlsgauge::FlowOptions o;
    o.oversample_factor = oversample_factor;
    emit(dnlsgauge::to_json(dnlsgauge::gauge_exact(u->value, alpha, o)), out_json);
  });
}

dg_status dg_gauge_truncated(const dg_spectral* u, double alpha, int N, int step_count, int store_trajectory,
                             char** out_json) {
  return guarded([&] {
    need(u, "u");
    dnlsgauge::FlowOptions o;
    o.step_count = resolve_steps(u->value, alpha, N, step_count);
    o.store_trajectory = store_trajectory != 0;
    emit(dnlsgauge::to_json(dnlsgauge::gauge_truncated(u->value, alpha, N, o)), out_json);
  });
}

dg_status dg_f_n(const dg_spectral* u, int N, double s, double* out) {
  return guarded([&] {
    need(u, "u");
    need(out, "out");
    *out = dnlsgauge::f_n(u->value, N, s).value;
  });
}

dg_status dg_f_split(const dg_spectral* u, int N, double s, double tol, char** out_json) {
  return guarded([&] {
    need(u, "u");
    emit(dnlsgauge::to_json(dnlsgauge::f_split(u->value, N, s, tol)), out_json);
  });
}

dg_status dg_divergence(const dg_spectral* u, int N, double* out) {
  return guarded([&] {
    need(u, "u");
    need(out, "out");
    *out = dnlsgauge::divergence(u->value, N);
  });
}

dg_status dg_jacobian_log_det(const dg_spectral* u, double alpha, int N, int step_count, double* out) {
  return guarded([&] {
    need(u, "u");
    need(out, "out");
    dnlsgauge::FlowOptions o;
    o.step_count = resolve_steps(u->value, alpha, N, step_count);
    *out = dnlsgauge::jacobian_log_det(u->value, alpha, N, o);
  });
}

dg_status dg_lp_stats(const dg_spectral* u, int N, double s, double s_prime, int n0, char** out_json) {
  return guarded([&] {
    need(u, "u");
    emit(dnlsgauge::to_json(dnlsgauge::lp_stats(u->value, N, s, s_prime, n0)), out_json);
  });
}

namespace {

dnlsgauge::MeasureSpec make_spec(double s, int cutoff, double radius, uint64_t seed) {
  dnlsgauge::MeasureSpec m;
  m.s = s;
  m.cutoff = cutoff;
  if (radius > 0.0) m.radius = radius;
  m.master_seed = seed;
  m.validate();
  return m;
}

}  // namespace

dg_status dg_sample(double s, int cutoff, double radius, uint64_t master_seed, uint64_t stream_id, uint64_t index,
                    dg_spectral** out) {
  return guarded([&] {
    need(out, "out");
    *out = wrap(dnlsgauge::sample_one(make_spec(s, cutoff, radius, master_seed), stream_id, index).value);
  });
}

dg_status dg_sample_batch_json(double s, int cutoff, double radius, uint64_t master_seed, uint64_t count,
                               uint64_t stream_id, char** out_json) {
  return guarded([&] {
    emit(dnlsgauge::to_json(dnlsgauge::sample(make_spec(s, cutoff, radius, master_seed), count, stream_id)),
         out_json);
  });
}

dg_status dg_second_moment_diff(int N, int M, double s, char** out_json) {
  return guarded([&] {
    const auto w = dnlsgauge::second_moment_diff(N, M, s);
    dnlsgauge::Json perms = dnlsgauge::Json::array();
    for (const auto& p : dnlsgauge::permutations_s4()) perms.push_back(p);
    emit(dnlsgauge::Json{{"value", w.value},
                         {"zzbar_total", w.zzbar_total},
                         {"zz_total", w.zz_total},
                         {"zzbar", w.zzbar},
                         {"zz", w.zz},
                         {"permutations", perms},
                         {"covariance_used", w.covariance_used}},
         out_json);
  });
}

dg_status dg_run_study(const char* config_json, int workers, const char* output_dir, char** out_json) {
  return guarded([&] {
    need(config_json, "config_json");
    auto cfg = dnlsgauge::parse_study_config(dnlsgauge::parse_json(config_json, "study config"));
    if (workers >= 0) cfg.workers = static_cast<unsigned>(workers);
    if (output_dir) cfg.output_dir = output_dir;
    const auto a = dnlsgauge::run_and_write(cfg);
    emit(dnlsgauge::Json{{"config_hash", a.hash},
                         {"csv", a.csv_path},
                         {"manifest", a.manifest_path},
                         {"rows", a.rows}},
         out_json);
  });
}

}  // extern "C"
