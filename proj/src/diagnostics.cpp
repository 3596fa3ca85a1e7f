#include "izosga/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "izosga/sumrate.hpp"
#include "izosga/wmmse.hpp"
#include "izosga/zo_gradient.hpp"

namespace izosga {

MoreauEstimate moreau_grad_norm(const SmoothObjective& objective, const RVec& center,
                                const ParamBox& box, const MoreauConfig& cfg) {
  if (!(cfg.lambda > 0.0)) throw ConfigError("Moreau lambda must be > 0");
  if (cfg.prox_iterations < 1) throw ConfigError("prox iteration budget must be >= 1");
  if (!box.contains(center)) throw ConfigError("Moreau center outside the feasible box");

  const double lambda = cfg.lambda;
  auto psi = [&](const RVec& x, double f) { return -f + 0.5 * lambda * (center - x).squaredNorm(); };

  RVec x = center;
  double fx = objective.value(x);
  double step = cfg.prox_step;
  MoreauEstimate out;
  out.lambda = lambda;

  for (int it = 0; it < cfg.prox_iterations; ++it) {
    const RVec grad = -objective.gradient(x) + lambda * (x - center);
    const double psi_x = psi(x, fx);

    // Convergence is judged with the gradient mapping at unit scale.
    const RVec mapped = box.project(x - grad / lambda);
    out.mapping_norm = lambda * (x - mapped).norm();
    out.iterations = it;
    const double estimate = lambda * (center - x).norm();
    if (out.mapping_norm <= cfg.tolerance_abs + cfg.tolerance_rel * estimate) {
      out.value = estimate;
      out.prox_point = x;
      return out;
    }

    for (int backtrack = 0;; ++backtrack) {
      const RVec trial = box.project(x - step * grad);
      const RVec diff = trial - x;
      const double f_trial = objective.value(trial);
      const double bound = psi_x + grad.dot(diff) + diff.squaredNorm() / (2.0 * step);
      if (psi(trial, f_trial) <= bound + 1e-14 * std::abs(psi_x) || backtrack >= 60) {
        x = trial;
        fx = f_trial;
        break;
      }
      step *= 0.5;
    }
    step *= 1.5;
  }
  throw NumericalError("Moreau prox solve did not converge (gradient mapping " +
                       std::to_string(out.mapping_norm) + ")");
}

SampledObjective::SampledObjective(const ChannelModel& model, const IrsModel& irs,
                                   std::vector<StateOfNature> samples, int wmmse_budget,
                                   double smoothing)
    : model_(&model), irs_(&irs), samples_(std::move(samples)), budget_(wmmse_budget),
      smoothing_(smoothing) {
  if (samples_.empty()) throw ConfigError("sampled objective needs at least one state");
  std::stable_sort(samples_.begin(), samples_.end(),
                   [](const StateOfNature& a, const StateOfNature& b) {
                     return a.seed_tag < b.seed_tag;
                   });
}

double SampledObjective::value(const RVec& theta) const {
  OracleConfig oracle;
  oracle.max_iterations = budget_;
  std::size_t clamps = 0;
  const CVec gamma = irs_->probe_reflection(theta, clamps);
  double sum = 0.0;
  for (const StateOfNature& omega : samples_)
    sum += wmmse_solve(effective_channel(gamma, omega), model_->config(), oracle).achieved_sumrate;
  return sum / static_cast<double>(samples_.size());
}

RVec SampledObjective::gradient(const RVec& theta) const {
  OracleConfig oracle;
  oracle.max_iterations = budget_;
  const NetworkConfig& config = model_->config();
  std::size_t clamps = 0;
  const CVec gamma = irs_->probe_reflection(theta, clamps);
  const Index dim = theta.size();
  RVec sum = RVec::Zero(dim);
  RVec basis = RVec::Zero(dim);
  for (const StateOfNature& omega : samples_) {
    const EffectiveChannel channel = effective_channel(gamma, omega);
    const OracleReport report = wmmse_solve(channel, config, oracle);
    const CVec g = cogradient(report.precoder.w, channel, config);
    for (Index s = 0; s < dim; ++s) {
      basis[s] = 1.0;
      const ProbePair probes = channel_probe_pair(*irs_, theta, omega, basis, smoothing_);
      sum += quasi_gradient(probes.plus, probes.minus, basis, smoothing_, g);
      basis[s] = 0.0;
    }
  }
  return sum / static_cast<double>(samples_.size());
}

SmoothObjective SampledObjective::as_objective() const {
  return {[this](const RVec& t) { return value(t); },
          [this](const RVec& t) { return gradient(t); }};
}

std::vector<StateOfNature> draw_states(const ChannelModel& model, std::uint64_t seed, int count) {
  OmegaStream stream(model, seed);
  std::vector<StateOfNature> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(stream.next());
  return out;
}

MoreauEstimate moreau_grad_norm(const ChannelModel& model, const IrsModel& irs, const RVec& theta,
                                const MoreauConfig& cfg, std::uint64_t sample_seed) {
  if (cfg.samples < 1) throw ConfigError("Moreau sample budget must be >= 1");
  const SampledObjective objective(model, irs, draw_states(model, sample_seed, cfg.samples),
                                   cfg.reference_budget, cfg.smoothing);
  MoreauEstimate est = moreau_grad_norm(objective.as_objective(), theta, irs.box(), cfg);
  est.samples = cfg.samples;
  return est;
}

}  // namespace izosga
