#include "izosga/zo_gradient.hpp"

#include <cmath>
#include <stdexcept>

namespace izosga {

RVec draw_probe(std::mt19937_64& rng, Index dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RVec u(dim);
  for (Index i = 0; i < dim; ++i) u[i] = normal(rng);
  return u;
}

ProbePair channel_probe_pair(const IrsModel& irs, const RVec& theta, const StateOfNature& omega,
                             const RVec& direction, double mu) {
  if (direction.size() != theta.size())
    throw ConfigError("probe direction and theta differ in dimension");
  ProbePair pair;
  const RVec step = mu * direction;
  pair.plus = effective_channel(irs.probe_reflection(theta + step, pair.clamp_events), omega);
  pair.minus = effective_channel(irs.probe_reflection(theta - step, pair.clamp_events), omega);
  return pair;
}

double probe_coefficient(const EffectiveChannel& plus, const EffectiveChannel& minus, double mu,
                         const CVec& cogradient) {
  if (plus.seed_tag != minus.seed_tag)
    throw std::logic_error("channel probes were evaluated on different states of nature");
  if (!(mu > 0.0)) throw ConfigError("smoothing parameter must be > 0");
  const auto zp = plus.stacked();
  const auto zm = minus.stacked();
  if (zp.size() != cogradient.size() || zm.size() != cogradient.size())
    throw ConfigError("probe / co-gradient dimension mismatch");
  double acc = 0.0;
  for (Index i = 0; i < cogradient.size(); ++i) {
    const Complex delta = (zp[i] - zm[i]) / (2.0 * mu);
    acc += delta.real() * cogradient[i].real() + delta.imag() * cogradient[i].imag();
  }
  return kRealCompositeFactor * acc;
}

RVec quasi_gradient(const EffectiveChannel& plus, const EffectiveChannel& minus,
                    const RVec& direction, double mu, const CVec& cogradient) {
  return probe_coefficient(plus, minus, mu, cogradient) * direction;
}

double smoothing_for_horizon(double c_smoothing, Index stacked_dim, long horizon) {
  return c_smoothing / std::sqrt(static_cast<double>(stacked_dim) * static_cast<double>(horizon));
}

RateParameters rate_parameters(double tolerance, Index dimension, Index stacked_dim,
                               double c_horizon, double c_smoothing) {
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be > 0");
  RateParameters out;
  out.horizon = static_cast<long>(
      std::ceil(c_horizon * std::sqrt(static_cast<double>(dimension)) * std::pow(tolerance, -4.0)));
  out.smoothing = smoothing_for_horizon(c_smoothing, stacked_dim, out.horizon);
  return out;
}

}  // namespace izosga
