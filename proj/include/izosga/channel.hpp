#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "izosga/irs.hpp"
#include "izosga/network.hpp"

namespace izosga {

/// One draw of all intermediate channels.
struct StateOfNature {
  CMat ap_irs;      // G, S x M
  CMat irs_user;    // columns h_{r,k}, S x K
  CMat direct;      // columns h_{d,k}, M x K
  std::uint64_t seed_tag = 0;
};

/// Effective channel H(theta, omega); column k is h_k (M x K). Column-major
/// storage makes `data()` the stacked vector vec(H) of length M*K.
struct EffectiveChannel {
  CMat h;
  std::uint64_t seed_tag = 0;

  Index antennas() const { return h.rows(); }
  Index users() const { return h.cols(); }
  Eigen::Map<const CVec> stacked() const { return {h.data(), h.size()}; }
};

/// Frozen large-scale description of one deployment: concrete node
/// positions, pathloss gains and line-of-sight components. Small-scale
/// fading is drawn per state of nature on top of it.
class ChannelModel {
 public:
  /// `user_positions` must hold K points; use resolve_user_positions to build
  /// them from the geometry. Throws ConfigError on coincident nodes.
  ChannelModel(const NetworkConfig& config, std::vector<Vec3> user_positions);

  const NetworkConfig& config() const { return config_; }
  const std::vector<Vec3>& user_positions() const { return users_; }

  /// Amplitude gains sqrt(PL) per link class; direct/irs-user are per user.
  double ap_irs_gain() const { return ap_irs_gain_; }
  const RVec& irs_user_gain() const { return irs_user_gain_; }
  const RVec& direct_gain() const { return direct_gain_; }

  /// Deterministic in `seed_tag`.
  StateOfNature sample(std::uint64_t seed_tag) const;

  /// A state with every IRS-side link set to zero (h_{r,k} = 0).
  static StateOfNature without_irs_links(StateOfNature omega);

 private:
  NetworkConfig config_;
  std::vector<Vec3> users_;
  double ap_irs_gain_ = 0.0;
  RVec irs_user_gain_;
  RVec direct_gain_;
  CMat ap_irs_los_;    // unit-gain LoS part of G
  CMat irs_user_los_;  // unit-gain LoS part of h_{r,k}
  CMat direct_los_;    // unit-gain LoS part of h_{d,k}
};

/// Places the K receivers: the fixed list when configured, otherwise
/// uniformly in the horizontal disc using `geometry_seed`.
std::vector<Vec3> resolve_user_positions(const NetworkConfig& config,
                                         std::uint64_t geometry_seed);

/// Sequential source of i.i.d. states of nature. Draw i carries
/// seed_tag = mix(stream_seed, i), so any draw is reproducible on its own.
class OmegaStream {
 public:
  OmegaStream(const ChannelModel& model, std::uint64_t stream_seed)
      : model_(&model), seed_(stream_seed) {}

  StateOfNature next();
  std::uint64_t draws() const { return counter_; }

 private:
  const ChannelModel* model_;
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Array response of a half-wavelength array with elements at integer grid
/// offsets (n1, n2) along axes (e1, e2), toward unit direction `dir`.
CVec array_response(const std::vector<std::array<double, 2>>& grid, const Vec3& e1,
                    const Vec3& e2, const Vec3& dir);

/// Factor S = rows * cols with rows <= cols and rows as large as possible.
std::array<Index, 2> planar_layout(Index elements);

/// h_k = G^H Diag(gamma) h_{r,k} + h_{d,k} for every user.
EffectiveChannel effective_channel(const CVec& reflection, const StateOfNature& omega);

/// Convenience overload: strict reflection of theta under `irs`.
EffectiveChannel effective_channel(const IrsModel& irs, const RVec& theta,
                                   const StateOfNature& omega);

/// SplitMix64 finalizer used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace izosga
