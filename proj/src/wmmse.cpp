#include "izosga/wmmse.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace izosga {

std::string_view to_string(WmmseInit init) {
  switch (init) {
    case WmmseInit::Mrt: return "mrt";
    case WmmseInit::WarmStart: return "warm_start";
    case WmmseInit::Random: return "random";
  }
  return "unknown";
}

WmmseInit parse_wmmse_init(std::string_view text) {
  if (text == "mrt") return WmmseInit::Mrt;
  if (text == "warm_start") return WmmseInit::WarmStart;
  if (text == "random") return WmmseInit::Random;
  throw ConfigError("unknown WMMSE init '" + std::string(text) + "'");
}

CMat mrt_precoder(const EffectiveChannel& channel, double power_budget) {
  const double per_user = std::sqrt(power_budget / static_cast<double>(channel.users()));
  CMat w = CMat::Zero(channel.antennas(), channel.users());
  for (Index k = 0; k < channel.users(); ++k) {
    const double n = channel.h.col(k).norm();
    if (n > 0.0) w.col(k) = channel.h.col(k) * (per_user / n);
  }
  return w;
}

CMat random_precoder(Index antennas, Index users, double power_budget, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMat w(antennas, users);
  for (Index c = 0; c < users; ++c)
    for (Index r = 0; r < antennas; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      w(r, c) = Complex(re, im);
    }
  return w * std::sqrt(power_budget / w.squaredNorm());
}

namespace {

constexpr int kBisectionSteps = 60;
constexpr int kMaxBracketDoublings = 2000;

}  // namespace

CMat wmmse_sweep(const CMat& w, const EffectiveChannel& channel, const NetworkConfig& config) {
  const Index M = channel.antennas();
  const Index K = channel.users();
  const CMat& h = channel.h;
  const CMat a = h.adjoint() * w;  // a(k, j) = h_k^H w_j

  CMat A = CMat::Zero(M, M);
  CMat B(M, K);
  for (Index k = 0; k < K; ++k) {
    const double signal = std::norm(a(k, k));
    double interf = config.noise_variances[k];
    for (Index j = 0; j < K; ++j)
      if (j != k) interf += std::norm(a(k, j));
    const double total = interf + signal;
    const Complex u = a(k, k) / total;    // MMSE receiver
    const double weight = total / interf; // 1 / MSE_k
    const double c = config.sumrate_weights[k] * weight;
    A.noalias() += (c * std::norm(u)) * h.col(k) * h.col(k).adjoint();
    B.col(k) = (c * u) * h.col(k);
  }

  Eigen::SelfAdjointEigenSolver<CMat> eig(A);
  if (eig.info() != Eigen::Success) throw NumericalError("WMMSE: eigendecomposition failed");
  const RVec& d = eig.eigenvalues();
  const CMat& q = eig.eigenvectors();
  const CMat coeff = q.adjoint() * B;
  const double d_max = d.cwiseAbs().maxCoeff();
  const double threshold = 1e-12 * d_max;

  // Restrict to the range of A; B lies there by construction.
  std::vector<Index> active;
  RVec mass(M);
  for (Index i = 0; i < M; ++i) {
    mass[i] = coeff.row(i).squaredNorm();
    if (d[i] > threshold) active.push_back(i);
  }
  auto power_at = [&](double nu) {
    double p = 0.0;
    for (Index i : active) p += mass[i] / ((d[i] + nu) * (d[i] + nu));
    return p;
  };

  const double budget = config.power_budget;
  double nu = 0.0;
  const double p0 = power_at(0.0);
  if (!std::isfinite(p0)) throw NumericalError("WMMSE: non-finite precoder power");
  if (p0 > budget) {
    double lo = 0.0;
    double hi = std::max(d_max, 1e-300) * 1e-6;
    int doublings = 0;
    while (!(power_at(hi) <= budget)) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > kMaxBracketDoublings || !std::isfinite(hi))
        throw NumericalError("WMMSE: power multiplier search failed to bracket a root");
    }
    for (int step = 0; step < kBisectionSteps; ++step) {
      const double mid = 0.5 * (lo + hi);
      if (power_at(mid) > budget) lo = mid;
      else hi = mid;
    }
    nu = hi;
  }

  CMat scaled = CMat::Zero(M, K);
  for (Index i : active) scaled.row(i) = coeff.row(i) / (d[i] + nu);
  return q * scaled;
}

OracleReport wmmse_solve(const EffectiveChannel& channel, const NetworkConfig& config,
                         const OracleConfig& oracle, const Precoder* warm_start) {
  if (oracle.max_iterations < 1) throw ConfigError("WMMSE needs max_iterations >= 1");
  if (!channel.h.allFinite()) throw NumericalError("WMMSE: non-finite channel");

  OracleReport report;
  report.precoder.power_budget = config.power_budget;
  CMat w;
  if (oracle.init == WmmseInit::WarmStart && warm_start != nullptr) {
    if (!warm_start->feasible()) throw ConfigError("WMMSE warm start is infeasible");
    w = warm_start->w;
  } else if (oracle.init == WmmseInit::Random) {
    w = random_precoder(channel.antennas(), channel.users(), config.power_budget,
                        oracle.random_seed);
  } else {
    w = mrt_precoder(channel, config.power_budget);
  }

  double current = sumrate(w, channel, config).value;
  report.sumrate_trace.push_back(current);
  for (int it = 0; it < oracle.max_iterations; ++it) {
    w = wmmse_sweep(w, channel, config);
    const double next = sumrate(w, channel, config).value;
    report.sumrate_trace.push_back(next);
    ++report.iterations_used;
    const double improvement = (next - current) / std::max(std::abs(current), 1e-300);
    current = next;
    if (oracle.objective_tolerance > 0.0 && improvement < oracle.objective_tolerance) break;
  }
  report.precoder.w = std::move(w);
  report.achieved_sumrate = current;
  return report;
}

OracleReport reference_solve(const EffectiveChannel& channel, const NetworkConfig& config,
                             const GapConfig& gap) {
  OracleConfig oracle;
  oracle.max_iterations = gap.reference_budget;
  OracleReport best = wmmse_solve(channel, config, oracle);
  oracle.init = WmmseInit::Random;
  for (int r = 0; r < gap.restarts; ++r) {
    oracle.random_seed = mix_seed(gap.seed, static_cast<std::uint64_t>(r));
    OracleReport candidate = wmmse_solve(channel, config, oracle);
    if (candidate.achieved_sumrate > best.achieved_sumrate) best = std::move(candidate);
  }
  return best;
}

double measure_gap(const EffectiveChannel& channel, const NetworkConfig& config,
                   const Precoder& candidate, const GapConfig& gap) {
  if (!candidate.feasible()) throw ConfigError("measure_gap: candidate precoder is infeasible");
  const double reference = reference_solve(channel, config, gap).achieved_sumrate;
  const double value = sumrate(candidate.w, channel, config).value;
  return std::max(0.0, reference - value);
}

}  // namespace izosga
