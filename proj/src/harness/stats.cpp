#include "izosga/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace izosga::harness {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double standard_error(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  return sample_stddev(xs) / std::sqrt(static_cast<double>(xs.size()));
}

double pooled_standard_error(std::span<const double> a, std::span<const double> b) {
  return std::hypot(standard_error(a), standard_error(b));
}

SignTest sign_test_greater(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sign test needs paired samples");
  SignTest out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) ++out.positives;
    else if (a[i] < b[i]) ++out.negatives;
  }
  const int n = out.positives + out.negatives;
  if (n == 0) return out;
  const boost::math::binomial_distribution<double> bin(n, 0.5);
  out.p_value = out.positives == 0 ? 1.0 : boost::math::cdf(boost::math::complement(bin, out.positives - 1));
  return out;
}

PairedT paired_t_greater(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("paired t-test needs >= 2 pairs");
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  PairedT out;
  out.mean_difference = mean(d);
  const double se = standard_error(d);
  if (se == 0.0) {
    out.t_statistic = out.mean_difference > 0 ? INFINITY : (out.mean_difference < 0 ? -INFINITY : 0.0);
    out.p_value = out.mean_difference > 0 ? 0.0 : 1.0;
    return out;
  }
  out.t_statistic = out.mean_difference / se;
  const boost::math::students_t dist(static_cast<double>(d.size() - 1));
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.t_statistic));
  return out;
}

namespace {

std::vector<double> ranks(std::span<const double> x) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman needs >= 2 pairs");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = mean(rx), my = mean(ry);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace izosga::harness
