#pragma once

#include <cmath>
#include <random>

#include "izosga/channel.hpp"
#include "izosga/network.hpp"
#include "izosga/sumrate.hpp"

namespace testing_support {

using namespace izosga;

inline CMat gaussian(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  CMat m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline NetworkConfig random_network(std::mt19937_64& rng, Index m, Index k) {
  NetworkConfig c = make_network(m, k, 1, uniform(rng, 0.5, 10.0), 1.0);
  for (Index i = 0; i < k; ++i) {
    c.noise_variances[i] = uniform(rng, 0.05, 1.0);
    c.sumrate_weights[i] = uniform(rng, 0.5, 2.0);
  }
  return c;
}

inline CMat full_power(CMat w, double p) { return w * std::sqrt(p / w.squaredNorm()); }

inline StateOfNature random_state(std::mt19937_64& rng, Index m, Index k, Index s, std::uint64_t tag = 1) {
  return {gaussian(rng, s, m), gaussian(rng, s, k), gaussian(rng, m, k), tag};
}

// A small network with desk pathloss and noise, users at fixed spots.
inline NetworkConfig unit_network(Index m, Index k, Index s) {
  NetworkConfig c = make_network(m, k, s, 1.0, 1e-11);
  c.geometry.placement = UserPlacement::Fixed;
  for (Index i = 0; i < k; ++i)
    c.geometry.user_positions.push_back(Vec3(95.0 + static_cast<double>(i), -2.0, 1.5));
  return c;
}

}  // namespace testing_support
