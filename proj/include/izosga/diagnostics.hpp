#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "izosga/channel.hpp"
#include "izosga/irs.hpp"
#include "izosga/ledger.hpp"

namespace izosga {

struct MoreauConfig {
  double lambda = 10.0;          // envelope parameter
  int prox_iterations = 200;     // projected-gradient budget of the prox solve
  double prox_step = 0.05;       // initial step; adapted by backtracking
  double tolerance_abs = 5e-4;   // on the prox gradient-mapping norm
  double tolerance_rel = 5e-2;   // relative to the returned estimate
  int samples = 64;              // N_omega common random numbers
  int reference_budget = 200;    // WMMSE sweeps per inner solve
  double smoothing = 1e-4;       // mu of the coordinate probes
};

/// A differentiable objective f to be maximized.
struct SmoothObjective {
  std::function<double(const RVec&)> value;
  std::function<RVec(const RVec&)> gradient;
};

struct MoreauEstimate {
  double value = 0.0;          // lambda * ||theta - theta_hat||
  RVec prox_point;             // theta_hat
  int iterations = 0;
  double mapping_norm = 0.0;   // final prox gradient-mapping norm
  double lambda = 0.0;
  int samples = 0;
};

/// Solves min_{x in box} -f(x) + lambda/2 ||center - x||^2 by projected
/// gradient with Armijo backtracking, and returns lambda ||center - x*||,
/// the gradient norm of the Moreau envelope of -f + indicator(box).
/// Throws NumericalError when the gradient mapping stays above tolerance
/// after cfg.prox_iterations steps.
MoreauEstimate moreau_grad_norm(const SmoothObjective& objective, const RVec& center,
                                const ParamBox& box, const MoreauConfig& cfg);

/// Sample-average objective f_hat(theta) = mean_i max_W F(W, H(theta, omega_i))
/// over a frozen set of states, with the inner max solved by a fixed-budget
/// WMMSE. The gradient uses the two-point probe estimator along every
/// coordinate direction, which makes it deterministic.
class SampledObjective {
 public:
  SampledObjective(const ChannelModel& model, const IrsModel& irs,
                   std::vector<StateOfNature> samples, int wmmse_budget, double smoothing);

  double value(const RVec& theta) const;
  RVec gradient(const RVec& theta) const;
  std::size_t size() const { return samples_.size(); }

  SmoothObjective as_objective() const;

 private:
  const ChannelModel* model_;
  const IrsModel* irs_;
  std::vector<StateOfNature> samples_;  // sorted by seed_tag
  int budget_;
  double smoothing_;
};

/// Draws cfg.samples states from `sample_seed` and estimates the Moreau
/// gradient norm of the network objective at theta.
MoreauEstimate moreau_grad_norm(const ChannelModel& model, const IrsModel& irs, const RVec& theta,
                                const MoreauConfig& cfg, std::uint64_t sample_seed);

std::vector<StateOfNature> draw_states(const ChannelModel& model, std::uint64_t seed, int count);

}  // namespace izosga
