#include "dnlsgauge/mc_harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/functionals.hpp"
#include "dnlsgauge/summation.hpp"

namespace dnlsgauge {

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::FN: return "f_n";
    case StatisticKind::FDiff: return "f_diff";
    case StatisticKind::Divergence: return "divergence";
    case StatisticKind::LStat: return "l_stat";
    case StatisticKind::XTotal: return "x_total";
    case StatisticKind::YTotal: return "y_total";
  }
  return "?";
}

StatisticKind parse_statistic_kind(const std::string& name) {
  for (auto k : {StatisticKind::FN, StatisticKind::FDiff, StatisticKind::Divergence, StatisticKind::LStat,
                 StatisticKind::XTotal, StatisticKind::YTotal})
    if (to_string(k) == name) return k;
  fail(ErrorKind::InvalidArgument, "unknown statistic '" + name + "'");
}

double Statistic::evaluate(const SpectralFunction& u, const MeasureSpec& spec) const {
  const int n = N > 0 ? N : spec.cutoff;
  switch (kind) {
    case StatisticKind::FN: return f_n(u, n, spec.s).value;
    case StatisticKind::FDiff: return f_n(u, n, spec.s).value - f_n(u, M, spec.s).value;
    case StatisticKind::Divergence: return divergence(u, n);
    case StatisticKind::LStat: return lp_stats(u, n, spec.s, s_prime, n0).l_stat;
    case StatisticKind::XTotal: return lp_stats(u, n, spec.s, 0.0, 1).x_total;
    case StatisticKind::YTotal: return lp_stats(u, n, spec.s, 0.0, 1).y_total;
  }
  return 0.0;
}

std::string Statistic::name() const {
  std::ostringstream o;
  o << to_string(kind);
  if (N > 0) o << ":N=" << N;
  if (kind == StatisticKind::FDiff) o << ":M=" << M;
  if (kind == StatisticKind::LStat) o << ":s'=" << s_prime << ":n0=" << n0;
  return o.str();
}

void parallel_for(std::uint64_t n, unsigned workers, const std::function<void(std::uint64_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (n == 0) return;
  const std::uint64_t chunk = std::max<std::uint64_t>(1, std::min<std::uint64_t>(256, n / (4ull * workers) + 1));
  std::atomic<std::uint64_t> next{0};
  std::mutex err_mutex;
  std::uint64_t err_index = std::numeric_limits<std::uint64_t>::max();
  std::exception_ptr err;

  auto work = [&] {
    for (;;) {
      const std::uint64_t start = next.fetch_add(chunk);
      if (start >= n) return;
      const std::uint64_t stop = std::min(n, start + chunk);
      for (std::uint64_t i = start; i < stop; ++i) {
        try {
          fn(i);
        } catch (...) {
          // Keep the failure with the lowest index so the reported error does
          // not depend on scheduling.
          std::lock_guard lock(err_mutex);
          if (i < err_index) {
            err_index = i;
            err = std::current_exception();
          }
          break;
        }
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (err) std::rethrow_exception(err);
}

std::vector<double> sample_values(const MeasureSpec& spec, std::uint64_t n, const HarnessOptions& opts,
                                  const std::function<double(const SpectralFunction&)>& f) {
  spec.validate();
  std::vector<double> out(n);
  parallel_for(n, opts.workers, [&](std::uint64_t i) {
    out[i] = f(sample_one(spec, opts.stream_base, i).value);
  });
  return out;
}

MCEstimate mean_estimate(const std::vector<double>& values) {
  MCEstimate e;
  e.n_samples = values.size();
  if (values.empty()) return e;
  CompensatedSum sum;
  for (double v : values) sum += v;
  const double mean = sum.value() / static_cast<double>(values.size());
  CompensatedSum sq;
  for (double v : values) sq += (v - mean) * (v - mean);
  e.value = mean;
  if (values.size() > 1) {
    const double var = sq.value() / static_cast<double>(values.size() - 1);
    e.std_error = std::sqrt(var / static_cast<double>(values.size()));
  }
  return e;
}

MCEstimate estimate_power_mean(const Statistic& stat, double p, const MeasureSpec& spec, std::uint64_t n,
                               const HarnessOptions& opts) {
  require(std::isfinite(p) && p >= 1.0, "moment order p must be >= 1");
  require(n >= 100, "need at least 100 samples");
  const auto values = sample_values(spec, n, opts, [&](const SpectralFunction& u) {
    return std::pow(std::abs(stat.evaluate(u, spec)), p);
  });
  auto e = mean_estimate(values);
  e.spec = spec;
  e.stream_base = opts.stream_base;
  return e;
}

MCEstimate estimate_moment(const Statistic& stat, double p, const MeasureSpec& spec, std::uint64_t n,
                           const HarnessOptions& opts) {
  auto e = estimate_power_mean(stat, p, spec, n, opts);
  const double m = e.value;
  if (m > 0.0) {
    e.value = std::pow(m, 1.0 / p);
    e.std_error = e.std_error * std::pow(m, 1.0 / p - 1.0) / p;
  } else {
    e.value = 0.0;
    e.std_error = 0.0;
  }
  return e;
}

ConfidenceInterval clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence) {
  require(n >= 1 && k <= n, "clopper_pearson needs 0 <= k <= n, n >= 1");
  require(confidence > 0.0 && confidence < 1.0, "confidence must be in (0, 1)");
  const double a = 0.5 * (1.0 - confidence);
  const double kd = static_cast<double>(k), nd = static_cast<double>(n);
  const double lo = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1.0, a);
  const double hi = k == n ? 1.0 : boost::math::ibeta_inv(kd + 1.0, nd - kd, 1.0 - a);
  return {lo, hi};
}

TailCurve tail_curve_from_values(const std::vector<double>& abs_values, const std::vector<double>& thresholds) {
  require(!thresholds.empty(), "tail_curve needs thresholds");
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    require(thresholds[i] > thresholds[i - 1], "tail_curve thresholds must be increasing");
  require(!abs_values.empty(), "tail_curve needs samples");
  std::vector<double> sorted = abs_values;
  std::sort(sorted.begin(), sorted.end());
  TailCurve c;
  c.thresholds = thresholds;
  c.n_samples = sorted.size();
  const double n = static_cast<double>(sorted.size());
  for (double t : thresholds) {
    const auto k = static_cast<std::uint64_t>(sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), t));
    const auto ci = clopper_pearson(k, sorted.size());
    c.counts.push_back(k);
    c.log_survival.push_back(std::log(static_cast<double>(k) / n));
    c.log_cp_lo.push_back(std::log(ci.lo));
    c.log_cp_hi.push_back(std::log(ci.hi));
  }
  return c;
}

TailCurve tail_curve(const Statistic& stat, const MeasureSpec& spec, const std::vector<double>& thresholds,
                     std::uint64_t n, const HarnessOptions& opts) {
  require(n >= 10000, "tail_curve needs at least 1e4 samples");
  const auto values = sample_values(spec, n, opts, [&](const SpectralFunction& u) {
    return std::abs(stat.evaluate(u, spec));
  });
  return tail_curve_from_values(values, thresholds);
}

bool TestSet::contains(const SpectralFunction& u, int N, double s) const {
  switch (kind) {
    case Kind::Everything: return true;
    case Kind::SobolevBall: return std::sqrt(sobolev_seminorm_sq(project(u, N), SobolevIndex(s))) <= radius;
    case Kind::HalfSpace: return u[mode].real() >= level;
    case Kind::LinfGridBall: {
      const int g = grid_size > 0 ? grid_size : 4 * (2 * N + 1);
      const auto v = evaluate(project(u, N), g);
      return std::all_of(v.begin(), v.end(), [&](Complex z) { return std::abs(z) <= radius; });
    }
  }
  return false;
}

std::string TestSet::describe() const {
  std::ostringstream o;
  o.precision(17);
  switch (kind) {
    case Kind::Everything: o << "everything"; break;
    case Kind::SobolevBall: o << "sobolev_ball(r=" << radius << ")"; break;
    case Kind::HalfSpace: o << "halfspace(k=" << mode << ",c=" << level << ")"; break;
    case Kind::LinfGridBall: o << "linf_grid_ball(r=" << radius << ",grid=" << grid_size << ")"; break;
  }
  return o.str();
}

double log_jacobian_weight(const SpectralFunction& u, double alpha, const MeasureSpec& spec,
                           const FlowOptions& flow) {
  FlowOptions o = flow;
  o.store_trajectory = false;
  const auto r = gauge_truncated(u, alpha, spec.cutoff, o);
  return r.divergence_integral + log_density_finite(r.final_state, spec) - log_density_finite(u, spec);
}

PushforwardResult pushforward_check(const TestSet& set, double alpha, const MeasureSpec& spec, std::uint64_t n,
                                    const FlowOptions& flow, const HarnessOptions& opts) {
  spec.validate();
  flow.validate();
  require(n >= 1, "pushforward_check needs samples");
  FlowOptions o = flow;
  o.store_trajectory = false;
  const int N = spec.cutoff;
  std::vector<double> lhs(n), rhs(n), diff(n);
  parallel_for(n, opts.workers, [&](std::uint64_t i) {
    const auto u = sample_one(spec, opts.stream_base, i).value;
    const auto back = gauge_truncated(u, -alpha, N, o).final_state;
    lhs[i] = set.contains(back, N, spec.s) ? 1.0 : 0.0;
    rhs[i] = set.contains(u, N, spec.s) ? std::exp(log_jacobian_weight(u, alpha, spec, o)) : 0.0;
    diff[i] = lhs[i] - rhs[i];
  });
  PushforwardResult r;
  r.lhs = mean_estimate(lhs);
  r.rhs = mean_estimate(rhs);
  for (auto* e : {&r.lhs, &r.rhs}) {
    e->spec = spec;
    e->stream_base = opts.stream_base;
  }
  const auto d = mean_estimate(diff);
  r.z_score = d.std_error > 0.0 ? d.value / d.std_error : 0.0;
  return r;
}

RateFit rate_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "rate_fit: x and y differ in length");
  require(x.size() >= 3, "rate_fit needs at least 3 points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
      fail(ErrorKind::InvalidArgument, "rate_fit needs positive finite data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  require(sxx > 0.0, "rate_fit needs at least two distinct x values");
  RateFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (f.intercept + f.slope * lx[i]);
    ssr += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  f.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  return f;
}

double r_star(double R, double s) {
  require(R > 0.0 && std::isfinite(R), "R must be positive");
  require(s > 0.5 && std::isfinite(s), "R* needs s > 1/2");
  return std::max(std::pow(R, 2.0 / (2.0 * s - 1.0)), std::pow(R, 2.0 * (2.0 * s - 1.0)));
}

}  // namespace dnlsgauge
