#pragma once

#include <array>
#include <vector>

#include "izosga/types.hpp"

namespace izosga {

using Vec3 = Eigen::Vector3d;

/// Large-scale parameters of one link class (AP-IRS, IRS-user or AP-user).
///
/// The pathloss follows the log-distance law PL(d) = C0 (d / d0)^(-exponent),
/// and the small-scale part is Rician with linear factor `rician_factor`
/// (0 is Rayleigh, +inf is pure line of sight).
struct LinkParams {
  double rician_factor = 0.0;
  double pathloss_exponent = 2.0;

  friend bool operator==(const LinkParams&, const LinkParams&) = default;
};

struct ChannelParams {
  LinkParams ap_irs{db_to_linear(10.0), 2.2};
  LinkParams irs_user{db_to_linear(10.0), 2.8};
  LinkParams ap_user{0.0, 3.5};
  double reference_gain = db_to_linear(-30.0);  // C0
  double reference_distance = 1.0;              // d0, meters

  double pathloss(const LinkParams& link, double distance) const;

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

enum class UserPlacement { Fixed, RandomDisc };

/// Node positions in meters. The AP is a uniform linear array along the y
/// axis; the IRS is a uniform planar array in the y-z plane (a wall facing
/// the x direction). Both use half-wavelength element spacing.
struct Geometry {
  Vec3 ap_position{0.0, 0.0, 10.0};
  Vec3 irs_position{100.0, 8.0, 5.0};
  UserPlacement placement = UserPlacement::RandomDisc;
  Vec3 disc_center{98.0, 0.0, 1.5};
  double disc_radius = 6.0;
  std::vector<Vec3> user_positions;  // used when placement == Fixed

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

/// Static problem dimensions and physics.
struct NetworkConfig {
  Index num_antennas = 4;      // M
  Index num_users = 4;         // K
  Index num_irs_elements = 64; // S
  double power_budget = 1.0;   // P, watts
  RVec noise_variances;        // sigma_k^2, watts, size K
  RVec sumrate_weights;        // alpha_k, size K
  Geometry geometry;
  ChannelParams channel;

  /// M * K, the length of the vectorized effective channel.
  Index stacked_dim() const { return num_antennas * num_users; }

  /// Number of scalar links S*M + S*K + M*K composing the cascaded channel.
  Index cascaded_link_count() const;

  /// Throws ConfigError when any invariant is violated.
  void validate() const;
};

/// Builds a config with uniform noise variance and unit weights.
NetworkConfig make_network(Index antennas, Index users, Index irs_elements,
                           double power_watts, double noise_watts);

}  // namespace izosga
