#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "izosga/sumrate.hpp"

namespace izosga {

enum class WmmseInit { Mrt, WarmStart, Random };

std::string_view to_string(WmmseInit init);
WmmseInit parse_wmmse_init(std::string_view text);

struct OracleConfig {
  int max_iterations = 10;          // one iteration = one (u, lambda, W) sweep
  double objective_tolerance = 0.0; // relative improvement threshold, 0 = off
  WmmseInit init = WmmseInit::Mrt;
  std::uint64_t random_seed = 0;    // used by WmmseInit::Random
};

struct OracleReport {
  Precoder precoder;
  double achieved_sumrate = 0.0;
  int iterations_used = 0;
  std::vector<double> sumrate_trace;  // F(W_0), F(W_1), ..., F(W_n)
  std::optional<double> suboptimality_gap;
};

/// Matched-filter directions with equal per-user power P / K.
CMat mrt_precoder(const EffectiveChannel& channel, double power_budget);

/// Gaussian directions scaled to full power.
CMat random_precoder(Index antennas, Index users, double power_budget, std::uint64_t seed);

/// One WMMSE sweep: MMSE receivers, MSE weights, then the power-constrained
/// weighted least-squares precoder. The Lagrange multiplier is found by
/// bisection; throws NumericalError if no feasible multiplier can be bracketed.
CMat wmmse_sweep(const CMat& w, const EffectiveChannel& channel, const NetworkConfig& config);

/// Runs up to `oracle.max_iterations` sweeps. `warm_start` is used when given
/// and the init strategy is WarmStart (it must be feasible).
OracleReport wmmse_solve(const EffectiveChannel& channel, const NetworkConfig& config,
                         const OracleConfig& oracle, const Precoder* warm_start = nullptr);

struct GapConfig {
  int reference_budget = 200;
  int restarts = 8;
  std::uint64_t seed = 0;
};

/// Best of one MRT-initialized solve and `restarts` random-init solves, each
/// with `reference_budget` sweeps.
OracleReport reference_solve(const EffectiveChannel& channel, const NetworkConfig& config,
                             const GapConfig& gap);

/// max(0, F_ref - F(candidate)); an estimate of the objective gap of `candidate`.
double measure_gap(const EffectiveChannel& channel, const NetworkConfig& config,
                   const Precoder& candidate, const GapConfig& gap);

}  // namespace izosga
