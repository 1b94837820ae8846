// Rank statistics and vector similarity computed the slow way.
#ifndef PICTOPIPE_TESTS_ORACLES_STATS_ORACLE_H_
#define PICTOPIPE_TESTS_ORACLES_STATS_ORACLE_H_

#include <cmath>
#include <cstdlib>
#include <vector>

namespace oracle {

// 1-based average ranks by counting smaller and equal values.
inline std::vector<long double> ranks(const std::vector<double>& v) {
  std::vector<long double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    long less = 0, equal = 0;
    for (double w : v) {
      if (w < v[i]) ++less;
      if (w == v[i]) ++equal;
    }
    out[i] = 1.0L + less + (equal - 1) / 2.0L;
  }
  return out;
}

inline long double pearson(const std::vector<long double>& a,
                           const std::vector<long double>& b) {
  long double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= a.size();
  mb /= b.size();
  long double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

inline long double spearman_rho(const std::vector<double>& x,
                                const std::vector<double>& y) {
  return pearson(ranks(x), ranks(y));
}

namespace detail {
inline void permute(std::vector<long double>& cur, std::vector<bool>& used,
                    const std::vector<long double>& pool,
                    const std::vector<long double>& rx, long double observed,
                    long& extreme, long& total) {
  if (cur.size() == pool.size()) {
    ++total;
    if (std::fabs(pearson(rx, cur)) >= observed - 1e-9L) ++extreme;
    return;
  }
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    cur.push_back(pool[i]);
    permute(cur, used, pool, rx, observed, extreme, total);
    cur.pop_back();
    used[i] = false;
  }
}
}  // namespace detail

// Two-sided p: share of all n! orderings of y's ranks at least as extreme.
inline double spearman_exact_p(const std::vector<double>& x,
                               const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const long double observed = std::fabs(pearson(rx, ry));
  std::vector<long double> cur;
  std::vector<bool> used(ry.size(), false);
  long extreme = 0, total = 0;
  detail::permute(cur, used, ry, rx, observed, extreme, total);
  return static_cast<double>(static_cast<long double>(extreme) / total);
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  long double dot = 0, nu = 0, nv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<long double>(u[i]) * v[i];
    nu += static_cast<long double>(u[i]) * u[i];
    nv += static_cast<long double>(v[i]) * v[i];
  }
  if (nu == 0 || nv == 0) return 0.0;
  return static_cast<double>(dot / (std::sqrt(nu) * std::sqrt(nv)));
}

}  // namespace oracle

#endif  // PICTOPIPE_TESTS_ORACLES_STATS_ORACLE_H_
