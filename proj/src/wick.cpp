#include "dnlsgauge/wick.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "dnlsgauge/error.hpp"
#include "dnlsgauge/summation.hpp"

namespace dnlsgauge {

double pair_moment(int n, double s) {
  if (n == 0) return 1.0;
  return 1.0 / (1.0 + std::pow(std::abs(static_cast<double>(n)), 2.0 * s));
}

namespace {

double moment_rec(std::span<const int> a, std::vector<int>& b, std::vector<bool>& used, std::size_t i,
                  const Covariance& cov) {
  if (i == a.size()) return 1.0;
  double total = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (used[j] || b[j] != a[i]) continue;
    used[j] = true;
    total += cov(a[i]) * moment_rec(a, b, used, i + 1, cov);
    used[j] = false;
  }
  return total;
}

}  // namespace

double gaussian_moment(std::span<const int> a, std::span<const int> b, const Covariance& cov) {
  if (a.size() != b.size()) return 0.0;
  std::vector<int> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return 0.0;
  std::vector<int> bv(b.begin(), b.end());
  std::vector<bool> used(b.size(), false);
  return moment_rec(a, bv, used, 0, cov);
}

const std::array<std::array<int, 4>, 24>& permutations_s4() {
  static const auto table = [] {
    std::array<std::array<int, 4>, 24> t{};
    std::array<int, 4> p{1, 2, 3, 4};
    std::size_t i = 0;
    do t[i++] = p;
    while (std::next_permutation(p.begin(), p.end()));
    return t;
  }();
  return table;
}

int permutation_index(const std::array<int, 4>& sigma) {
  const auto& t = permutations_s4();
  for (std::size_t i = 0; i < t.size(); ++i)
    if (t[i] == sigma) return static_cast<int>(i);
  return -1;
}

namespace {

// Variables of the two tuples: n1 n2 m1 m2 | n3 n4 m3 m4.
enum Var { N1 = 0, N2, M1, M2, N3, N4, M3, M4 };

struct Tables {
  int N;
  int M;
  std::vector<double> pw;   // |n|^{2s}, index |n|
  std::vector<double> cov;  // index n + N

  double c(int n) const { return cov[static_cast<std::size_t>(n + N)]; }
  double weight(int a, int b) const { return pw[static_cast<std::size_t>(std::abs(b))] / (b - a); }
  bool outside_m(int a, int b, int c2, int d) const {
    return std::max({std::abs(a), std::abs(b), std::abs(c2), std::abs(d)}) > M;
  }
};

// Contribution of one contraction pattern: u-slot variables `uslot`, conj slots
// `bslot`, conj slot j paired with u-slot sigma[j] - 1.
double contract(const Tables& T, const std::array<int, 4>& uslot, const std::array<int, 4>& bslot,
                const std::array<int, 4>& sigma) {
  std::array<int, 8> cls{};
  for (int j = 0; j < 4; ++j) {
    cls[static_cast<std::size_t>(bslot[static_cast<std::size_t>(j)])] = j;
    cls[static_cast<std::size_t>(uslot[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)] - 1)])] = j;
  }
  if (cls[N1] == cls[M1] || cls[N3] == cls[M3]) return 0.0;

  std::array<int, 4> e1{}, e2{};
  e1[static_cast<std::size_t>(cls[N1])] += 1;
  e1[static_cast<std::size_t>(cls[N2])] += 1;
  e1[static_cast<std::size_t>(cls[M1])] -= 1;
  e1[static_cast<std::size_t>(cls[M2])] -= 1;
  e2[static_cast<std::size_t>(cls[N3])] += 1;
  e2[static_cast<std::size_t>(cls[N4])] += 1;
  e2[static_cast<std::size_t>(cls[M3])] -= 1;
  e2[static_cast<std::size_t>(cls[M4])] -= 1;
  auto trivial = [](const std::array<int, 4>& e) {
    return std::all_of(e.begin(), e.end(), [](int x) { return x == 0; });
  };
  const int N = T.N;

  if (trivial(e1) && trivial(e2)) {
    // Each tuple only contracts internally: the sum factorises. Terms are
    // added in (v, -v) pairs so the odd factors cancel exactly.
    auto factor = [&](int a, int b, int c2, int d) {
      // a, b, c2, d: the tuple's variables (n, n', m, m') in the order of the weight.
      const int ca = cls[static_cast<std::size_t>(a)];
      int cb = -1;
      for (int v : {b, c2, d})
        if (cls[static_cast<std::size_t>(v)] != ca) cb = cls[static_cast<std::size_t>(v)];
      if (cb < 0) fail(ErrorKind::Numeric, "wick: malformed internal contraction");
      std::array<int, 4> val{};
      auto term = [&](int x, int y) {
        val[static_cast<std::size_t>(ca)] = x;
        val[static_cast<std::size_t>(cb)] = y;
        const int vn = val[static_cast<std::size_t>(cls[static_cast<std::size_t>(a)])];
        const int vn2 = val[static_cast<std::size_t>(cls[static_cast<std::size_t>(b)])];
        const int vm = val[static_cast<std::size_t>(cls[static_cast<std::size_t>(c2)])];
        const int vm2 = val[static_cast<std::size_t>(cls[static_cast<std::size_t>(d)])];
        if (vn == vm || !T.outside_m(vn, vn2, vm, vm2)) return 0.0;
        return T.weight(vn, vm) * T.c(x) * T.c(y);
      };
      CompensatedSum acc;
      for (int x = 0; x <= N; ++x)
        for (int y = (x == 0 ? 0 : -N); y <= N; ++y) {
          if (x == 0 && y == 0) {
            acc += term(0, 0);
            continue;
          }
          acc += term(x, y) + term(-x, -y);
        }
      return acc.value();
    };
    const double s1 = factor(N1, N2, M1, M2);
    if (s1 == 0.0) return 0.0;
    return s1 * factor(N3, N4, M3, M4);
  }

  // Solve the first non-trivial momentum equation for one class, enumerate the
  // remaining three and test the other equation.
  const auto& solve = trivial(e1) ? e2 : e1;
  const auto& check = trivial(e1) ? e1 : e2;
  int r = 0;
  while (solve[static_cast<std::size_t>(r)] == 0) ++r;
  std::array<int, 3> freec{};
  for (int j = 0, k = 0; j < 4; ++j)
    if (j != r) freec[static_cast<std::size_t>(k++)] = j;

  CompensatedSum acc;
  std::array<int, 4> v{};
  const int cr = solve[static_cast<std::size_t>(r)];
  for (int x = -N; x <= N; ++x) {
    v[static_cast<std::size_t>(freec[0])] = x;
    for (int y = -N; y <= N; ++y) {
      v[static_cast<std::size_t>(freec[1])] = y;
      for (int z = -N; z <= N; ++z) {
        v[static_cast<std::size_t>(freec[2])] = z;
        int rest = 0;
        for (int j : freec) rest += solve[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
        const int vr = -rest * cr;  // cr is +-1
        if (vr < -N || vr > N) continue;
        v[static_cast<std::size_t>(r)] = vr;
        int chk = 0;
        for (int j = 0; j < 4; ++j) chk += check[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
        if (chk != 0) continue;
        auto val = [&](Var var) { return v[static_cast<std::size_t>(cls[var])]; };
        const int n1 = val(N1), n2 = val(N2), m1 = val(M1), m2 = val(M2);
        const int n3 = val(N3), n4 = val(N4), m3 = val(M3), m4 = val(M4);
        if (n1 == m1 || n3 == m3) continue;
        if (!T.outside_m(n1, n2, m1, m2) || !T.outside_m(n3, n4, m3, m4)) continue;
        acc += T.weight(n1, m1) * T.weight(n3, m3) * T.c(v[0]) * T.c(v[1]) * T.c(v[2]) * T.c(v[3]);
      }
    }
  }
  return acc.value();
}

}  // namespace

WickMoment second_moment_diff(int N, int M, double s, const Covariance* cov_override) {
  require(M >= 0 && M <= N, "second_moment_diff needs 0 <= M <= N");
  require(N <= kWickMaxCutoff, "second_moment_diff: N=" + std::to_string(N) +
                                   " exceeds the complexity guard " + std::to_string(kWickMaxCutoff));
  require(std::isfinite(s) && s > 0.0, "s must be positive");

  WickMoment out;
  {
    std::ostringstream d;
    d << (cov_override ? "override" : "exact 1/(1+|n|^{2s})") << ", s=" << s;
    out.covariance_used = d.str();
  }
  if (M == N) return out;

  Tables T{N, M, {}, {}};
  T.pw.resize(static_cast<std::size_t>(N) + 1);
  for (int n = 0; n <= N; ++n) T.pw[static_cast<std::size_t>(n)] = n == 0 ? 0.0 : std::pow(static_cast<double>(n), 2.0 * s);
  T.cov.resize(static_cast<std::size_t>(2 * N + 1));
  for (int n = -N; n <= N; ++n)
    T.cov[static_cast<std::size_t>(n + N)] = cov_override ? (*cov_override)(n) : pair_moment(n, s);

  // z conj(z): u-slots n1 n2 m3 m4, conj slots m1 m2 n3 n4.
  // z z:       u-slots n1 n2 n3 n4, conj slots m1 m2 m3 m4.
  const std::array<int, 4> zzbar_u{N1, N2, M3, M4}, zzbar_b{M1, M2, N3, N4};
  const std::array<int, 4> zz_u{N1, N2, N3, N4}, zz_b{M1, M2, M3, M4};
  const auto& perms = permutations_s4();
  CompensatedSum a, b;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    out.zzbar[i] = 2.0 * contract(T, zzbar_u, zzbar_b, perms[i]);
    out.zz[i] = 2.0 * contract(T, zz_u, zz_b, perms[i]);
    a += out.zzbar[i];
    b += out.zz[i];
  }
  out.zzbar_total = a.value();
  out.zz_total = b.value();
  CompensatedSum total;
  total += out.zzbar_total;
  total += out.zz_total;
  out.value = total.value();
  return out;
}

std::vector<RateRow> rate_table(double s, const std::vector<int>& M_list, int N_ref) {
  require(!M_list.empty(), "rate_table needs at least one M");
  std::vector<RateRow> rows;
  for (int M : M_list) {
    require(M <= N_ref, "rate_table: M must not exceed N_ref");
    const double v = second_moment_diff(N_ref, M, s).value;
    rows.push_back({M, std::sqrt(std::max(0.0, v))});
  }
  return rows;
}

std::string rate_table_csv(double s, int N_ref, const std::vector<RateRow>& rows) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "# s=%.17g,N_ref=%d\nM,l2_distance\n", s, N_ref);
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", r.M, r.l2_distance);
    out += buf;
  }
  return out;
}

}  // namespace dnlsgauge
