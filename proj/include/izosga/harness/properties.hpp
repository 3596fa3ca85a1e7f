#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace izosga::harness {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Each check builds its own random instances from `seed` and compares the
// library against an independent computation.

/// Co-gradient vs Richardson-extrapolated central differences; max relative error < 1e-6.
PropertyResult check_cogradient(int instances, int directions, std::uint64_t seed);

/// Mean of D over `draws` probes on H(theta) = B theta + b (S = 16, mu = 1e-4):
/// cosine > 0.99 and relative norm error < 3% against the exact gradient.
PropertyResult check_zo_affine(long draws, std::uint64_t seed);

/// Exact expectation of D (Gauss-Hermite quadrature, coordinatewise) on the
/// phase map: bias shrinks >= 3.5x per halving of mu. On a quadratic map the
/// central difference is exact and the bias must vanish.
PropertyResult check_zo_bias(std::uint64_t seed);

/// D is parallel to U to 1e-12.
PropertyResult check_probe_collinearity(int draws, std::uint64_t seed);

/// Every WMMSE sweep is an ascent step within 1e-9 relative.
PropertyResult check_wmmse_ascent(int instances, std::uint64_t seed);

/// K = 1: WMMSE reaches alpha log2(1 + P ||h||^2 / sigma^2) within 1e-8 relative.
PropertyResult check_wmmse_single_user(int instances, std::uint64_t seed);

/// (M, K) = (2, 2): WMMSE >= 99% of a multi-start finite-difference ascent.
PropertyResult check_wmmse_bruteforce(int instances, std::uint64_t seed);

/// S M + S K + M K = 38192 at (M, K, S) = (6, 32, 1000).
PropertyResult check_link_count();

/// Moreau gradient norm of f = -||x - c||^2 / 2 with lambda = 2, S = 8, within 5%.
PropertyResult check_moreau_quadratic(std::uint64_t seed);

/// The suite run by `selftest`; `quick` uses reduced sample sizes.
std::vector<PropertyResult> property_suite(bool quick);

}  // namespace izosga::harness
