#pragma once

#include "izosga/channel.hpp"
#include "izosga/network.hpp"

namespace izosga {

/// Transmit precoder W (M x K, column k serves user k) with its budget.
struct Precoder {
  CMat w;
  double power_budget = 1.0;

  double power() const { return w.squaredNorm(); }
  /// ||W||_F^2 <= P (1 + 1e-9).
  bool feasible() const { return power() <= power_budget * (1.0 + 1e-9); }
};

struct SumrateValue {
  double value = 0.0;  // bps/Hz
  RVec per_user_sinr;
};

/// |h^H w_k|^2 / (sum_{j != k} |h^H w_j|^2 + noise).
double sinr(const CMat& w, const CVec& h, Index k, double noise_variance);

/// sum_k alpha_k log2(1 + SINR_k).
SumrateValue sumrate(const CMat& w, const EffectiveChannel& channel, const NetworkConfig& config);

/// Wirtinger co-gradient g = dF/dz* at z = vec(H), stacked per user (M*K).
///
/// Convention: for a complex perturbation dz, dF = 2 Re(g^H dz). For user k,
///   g_k = alpha_k / ln 2 * [ R_all h_k / T_k - R_int h_k / I_k ],
/// where R_all = sum_j w_j w_j^H, R_int excludes j = k, T_k = h_k^H R_all h_k + sigma_k^2
/// and I_k = h_k^H R_int h_k + sigma_k^2.
CVec cogradient(const CMat& w, const EffectiveChannel& channel, const NetworkConfig& config);

}  // namespace izosga
