#pragma once

#include <cstddef>
#include <random>

#include "izosga/channel.hpp"
#include "izosga/irs.hpp"

namespace izosga {

/// Factor of the real-composite chain rule dF = 2 Re(g^H dz). Every
/// estimator below takes it from here.
inline constexpr double kRealCompositeFactor = 2.0;

struct ProbeConfig {
  double smoothing = 1e-3;  // mu
  int batch_size = 1;       // probe directions averaged per outer iteration
};

/// U ~ N(0, I) of length `dim`.
RVec draw_probe(std::mt19937_64& rng, Index dim);

struct ProbePair {
  EffectiveChannel plus;   // H(theta + mu U, omega)
  EffectiveChannel minus;  // H(theta - mu U, omega)
  std::size_t clamp_events = 0;
};

/// Both probes reuse the single state `omega`. The probe points may leave the
/// parameter box and are evaluated unprojected (see IrsModel::probe_reflection).
ProbePair channel_probe_pair(const IrsModel& irs, const RVec& theta, const StateOfNature& omega,
                             const RVec& direction, double mu);

/// Scalar 2 (Re(delta)^T Re(g) + Im(delta)^T Im(g)) with
/// delta = (vec(plus) - vec(minus)) / (2 mu).
double probe_coefficient(const EffectiveChannel& plus, const EffectiveChannel& minus, double mu,
                         const CVec& cogradient);

/// Sample quasi-gradient D = probe_coefficient(...) * U. Always parallel to U.
/// Throws std::logic_error when the probes come from different states.
RVec quasi_gradient(const EffectiveChannel& plus, const EffectiveChannel& minus,
                    const RVec& direction, double mu, const CVec& cogradient);

/// Parameter choices T = ceil(c_T sqrt(S) eps^-4) and mu = c_mu / sqrt(M_U T).
struct RateParameters {
  long horizon = 0;
  double smoothing = 0.0;
};

RateParameters rate_parameters(double tolerance, Index dimension, Index stacked_dim,
                               double c_horizon, double c_smoothing);

/// mu = c_mu / sqrt(M_U T) for a given horizon.
double smoothing_for_horizon(double c_smoothing, Index stacked_dim, long horizon);

}  // namespace izosga
