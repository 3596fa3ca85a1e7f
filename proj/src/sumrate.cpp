#include "izosga/sumrate.hpp"

#include <cmath>
#include <limits>

namespace izosga {

namespace {

// Below this the signal term is treated as zero, which keeps 0/sigma^2 exact.
constexpr double kSignalFloor = std::numeric_limits<double>::min();

void check_dims(const CMat& w, const EffectiveChannel& channel, const NetworkConfig& config) {
  if (w.rows() != channel.antennas() || w.cols() != channel.users() ||
      channel.users() != config.num_users)
    throw ConfigError("precoder / channel / config dimension mismatch");
}

}  // namespace

double sinr(const CMat& w, const CVec& h, Index k, double noise_variance) {
  if (h.size() != w.rows() || k < 0 || k >= w.cols())
    throw ConfigError("sinr: dimension mismatch");
  const Eigen::RowVectorXcd a = h.adjoint() * w;
  const double signal = std::norm(a[k]);
  if (signal < kSignalFloor) return 0.0;
  double interference = 0.0;
  for (Index j = 0; j < a.size(); ++j)
    if (j != k) interference += std::norm(a[j]);
  return signal / (interference + noise_variance);
}

SumrateValue sumrate(const CMat& w, const EffectiveChannel& channel, const NetworkConfig& config) {
  check_dims(w, channel, config);
  SumrateValue out;
  out.per_user_sinr.resize(config.num_users);
  for (Index k = 0; k < config.num_users; ++k) {
    const double s = sinr(w, channel.h.col(k), k, config.noise_variances[k]);
    out.per_user_sinr[k] = s;
    out.value += config.sumrate_weights[k] * std::log2(1.0 + s);
  }
  return out;
}

CVec cogradient(const CMat& w, const EffectiveChannel& channel, const NetworkConfig& config) {
  check_dims(w, channel, config);
  const Index M = channel.antennas();
  const Index K = channel.users();
  CVec g(M * K);
  for (Index k = 0; k < K; ++k) {
    const CVec h = channel.h.col(k);
    const Eigen::RowVectorXcd a = h.adjoint() * w;  // a_j = h^H w_j
    const double noise = config.noise_variances[k];
    const double signal = std::norm(a[k]);
    double interf = noise;
    for (Index j = 0; j < K; ++j)
      if (j != k) interf += std::norm(a[j]);
    const double total = interf + signal;
    // R h = sum_j w_j (w_j^H h) = sum_j w_j conj(a_j)
    const CVec r_all_h = w * a.adjoint();
    const CVec r_own_h = w.col(k) * std::conj(a[k]);
    CVec gk = r_all_h / total - (r_all_h - r_own_h) / interf;
    if (signal < kSignalFloor) gk.setZero();
    g.segment(k * M, M) = (config.sumrate_weights[k] / kLn2) * gk;
  }
  return g;
}

}  // namespace izosga
