#include "gqn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "gqn/rng.hpp"

namespace gqn {

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t ia = 0, ib = 0;
  double d = 0;
  while (ia < a.size() && ib < b.size()) {
    const double x = std::min(a[ia], b[ib]);
    while (ia < a.size() && a[ia] <= x) ++ia;
    while (ib < b.size() && b[ib] <= x) ++ib;
    d = std::max(d, std::fabs(double(ia) / a.size() - double(ib) / b.size()));
  }
  return d;
}

double wasserstein1(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("w1: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  // area between empirical CDFs over the merged breakpoints
  std::size_t ia = 0, ib = 0;
  double w = 0, prev = std::min(a[0], b[0]);
  while (ia < a.size() || ib < b.size()) {
    const double xa = ia < a.size() ? a[ia] : std::numeric_limits<double>::infinity();
    const double xb = ib < b.size() ? b[ib] : std::numeric_limits<double>::infinity();
    const double x = std::min(xa, xb);
    w += std::fabs(double(ia) / a.size() - double(ib) / b.size()) * (x - prev);
    prev = x;
    while (ia < a.size() && a[ia] == x) ++ia;
    while (ib < b.size() && b[ib] == x) ++ib;
  }
  return w;
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double mid = 0.5 * double(i + j) + 1.0;  // average 1-based rank
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = mid;
    i = j + 1;
  }
  return r;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("pearson: need paired samples of size >= 2");
  const double n = double(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0 || sbb == 0) return 0;
  return sab / std::sqrt(saa * sbb);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(ranks(a), ranks(b));
}

double percentile(std::vector<double> v, double p) {
  if (v.empty()) throw std::invalid_argument("percentile: empty sample");
  if (p < 0 || p > 1) throw std::invalid_argument("percentile: p in [0,1]");
  std::sort(v.begin(), v.end());
  const double pos = p * double(v.size() - 1);
  const std::size_t lo = std::size_t(pos);
  if (lo + 1 >= v.size()) return v.back();
  const double frac = pos - double(lo);
  return v[lo] * (1 - frac) + v[lo + 1] * frac;
}

namespace {

std::vector<double> resample(const std::vector<double>& v,
                             std::mt19937_64& eng) {
  std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
  std::vector<double> out(v.size());
  for (auto& x : out) x = v[pick(eng)];
  return out;
}

Estimate bootstrap_impl(const TwoSampleStat& stat, const std::vector<double>& a,
                        const std::vector<double>& b, std::uint64_t seed,
                        int resamples, bool paired) {
  Estimate e;
  e.value = stat(a, b);
  auto eng = make_engine(SeedSpec{seed, 0, 0x626f6f74ULL});
  std::vector<double> stats(resamples);
  std::vector<double> ra(a.size()), rb(b.size());
  std::uniform_int_distribution<std::size_t> pa(0, a.size() - 1);
  std::uniform_int_distribution<std::size_t> pb(0, b.size() - 1);
  for (int r = 0; r < resamples; ++r) {
    if (paired) {
      for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t k = pa(eng);
        ra[i] = a[k];
        rb[i] = b[k];
      }
    } else {
      for (auto& x : ra) x = a[pa(eng)];
      for (auto& x : rb) x = b[pb(eng)];
    }
    stats[r] = stat(ra, rb);
  }
  const double m =
      std::accumulate(stats.begin(), stats.end(), 0.0) / double(resamples);
  double s2 = 0;
  for (double x : stats) s2 += (x - m) * (x - m);
  e.se = std::sqrt(s2 / double(resamples - 1));
  return e;
}

}  // namespace

Estimate bootstrap_two_sample(const TwoSampleStat& stat,
                              const std::vector<double>& a,
                              const std::vector<double>& b, std::uint64_t seed,
                              int resamples) {
  return bootstrap_impl(stat, a, b, seed, resamples, false);
}

Estimate bootstrap_paired(const TwoSampleStat& stat,
                          const std::vector<double>& a,
                          const std::vector<double>& b, std::uint64_t seed,
                          int resamples) {
  if (a.size() != b.size())
    throw std::invalid_argument("bootstrap_paired: size mismatch");
  return bootstrap_impl(stat, a, b, seed, resamples, true);
}

double sup_oscillation(const SamplePath& p, double zeta) {
  if (zeta < p.dt)
    throw std::invalid_argument("sup_oscillation: grid coarser than zeta");
  const std::size_t w = std::size_t(std::floor(zeta / p.dt + 1e-9));
  std::deque<std::size_t> maxq, minq;
  double best = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (!maxq.empty() && p.values[maxq.back()] <= p.values[i]) maxq.pop_back();
    maxq.push_back(i);
    while (!minq.empty() && p.values[minq.back()] >= p.values[i]) minq.pop_back();
    minq.push_back(i);
    while (maxq.front() + w < i) maxq.pop_front();
    while (minq.front() + w < i) minq.pop_front();
    best = std::max(best, p.values[maxq.front()] - p.values[minq.front()]);
  }
  return best;
}

}  // namespace gqn
