#include "izosga/network.hpp"

#include <cmath>
#include <string>

namespace izosga {

double ChannelParams::pathloss(const LinkParams& link, double distance) const {
  return reference_gain * std::pow(distance / reference_distance, -link.pathloss_exponent);
}

Index NetworkConfig::cascaded_link_count() const {
  return num_irs_elements * num_antennas + num_irs_elements * num_users +
         num_antennas * num_users;
}

namespace {

void check_link(const LinkParams& link, const char* name) {
  if (!(link.rician_factor >= 0.0))
    throw ConfigError(std::string("rician factor of ") + name + " must be >= 0");
  if (!std::isfinite(link.pathloss_exponent) || link.pathloss_exponent < 0.0)
    throw ConfigError(std::string("pathloss exponent of ") + name + " must be finite and >= 0");
}

}  // namespace

void NetworkConfig::validate() const {
  if (num_antennas < 1 || num_users < 1 || num_irs_elements < 1)
    throw ConfigError("num_antennas, num_users and num_irs_elements must all be >= 1");
  if (!(power_budget > 0.0) || !std::isfinite(power_budget))
    throw ConfigError("power_budget must be a finite positive number");
  if (noise_variances.size() != num_users)
    throw ConfigError("noise_variances must have one entry per user");
  if (sumrate_weights.size() != num_users)
    throw ConfigError("sumrate_weights must have one entry per user");
  for (Index k = 0; k < num_users; ++k) {
    if (!(noise_variances[k] > 0.0) || !std::isfinite(noise_variances[k]))
      throw ConfigError("noise variances must be finite and > 0");
    if (!(sumrate_weights[k] > 0.0) || !std::isfinite(sumrate_weights[k]))
      throw ConfigError("sumrate weights must be finite and > 0");
  }
  check_link(channel.ap_irs, "ap_irs");
  check_link(channel.irs_user, "irs_user");
  check_link(channel.ap_user, "ap_user");
  if (!(channel.reference_gain > 0.0) || !(channel.reference_distance > 0.0))
    throw ConfigError("reference gain and distance must be > 0");
  if (geometry.placement == UserPlacement::Fixed &&
      static_cast<Index>(geometry.user_positions.size()) != num_users)
    throw ConfigError("fixed placement needs exactly num_users user positions");
  if (geometry.placement == UserPlacement::RandomDisc && !(geometry.disc_radius >= 0.0))
    throw ConfigError("disc_radius must be >= 0");
}

NetworkConfig make_network(Index antennas, Index users, Index irs_elements,
                           double power_watts, double noise_watts) {
  NetworkConfig cfg;
  cfg.num_antennas = antennas;
  cfg.num_users = users;
  cfg.num_irs_elements = irs_elements;
  cfg.power_budget = power_watts;
  cfg.noise_variances = RVec::Constant(users, noise_watts);
  cfg.sumrate_weights = RVec::Ones(users);
  return cfg;
}

}  // namespace izosga
