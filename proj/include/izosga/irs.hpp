#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "izosga/types.hpp"

namespace izosga {

enum class Parametrization { IdealPhase, PhaseAmplitude, Varactor };

std::string_view to_string(Parametrization kind);
Parametrization parse_parametrization(std::string_view text);

/// Equivalent circuit of one varactor-loaded element: an inductance L1 in
/// parallel with a series branch (L2, tunable C, loss R), reflecting against
/// free-space impedance Z0.
struct VaractorCircuit {
  double frequency_hz = 2.4e9;
  double l1 = 4.0e-9;
  double l2 = 0.7e-9;
  double r_loss = 1.0;
  double z0 = 377.0;
  double c_min_pf = 0.5;
  double c_max_pf = 1.5;

  Complex impedance(double capacitance_pf) const;
  /// Gamma(C) = (Z(C) - Z0) / (Z(C) + Z0).
  Complex reflection(double capacitance_pf) const;

  friend bool operator==(const VaractorCircuit&, const VaractorCircuit&) = default;
};

/// Per-coordinate closed box; the feasible parameter set.
struct ParamBox {
  RVec lower;
  RVec upper;

  Index size() const { return lower.size(); }
  bool contains(const RVec& theta) const;
  /// Euclidean projection, i.e. a coordinate-wise clamp.
  RVec project(const RVec& theta) const;
  RVec midpoint() const { return 0.5 * (lower + upper); }
};

/// Describes how the real parameter vector theta maps onto the complex
/// reflection coefficients of the surface.
///
/// IdealPhase:     theta = phases (size S), gamma_s = exp(j theta_s).
/// PhaseAmplitude: theta = [phases; amplitudes] (size 2S), gamma_s = A_s exp(j phi_s).
/// Varactor:       theta = capacitances in pF (size S), gamma_s = Gamma(C_s).
class IrsModel {
 public:
  IrsModel() = default;
  IrsModel(Parametrization kind, Index elements, VaractorCircuit circuit = {});

  Parametrization kind() const { return kind_; }
  Index elements() const { return elements_; }
  Index dimension() const;
  const VaractorCircuit& circuit() const { return circuit_; }
  const ParamBox& box() const { return box_; }

  /// Default starting point: zero phases, unit amplitudes, mid-range capacitance.
  RVec default_theta() const;

  /// Strict evaluation; throws ConfigError when theta lies outside the box.
  CVec reflection(const RVec& theta) const;

  /// Evaluation for smoothing probes, which may leave the box. Phases are
  /// used as given. Amplitudes and capacitances are clamped, and each clamped
  /// coordinate increments `clamp_events`.
  CVec probe_reflection(const RVec& theta, std::size_t& clamp_events) const;

 private:
  CVec evaluate(const RVec& theta) const;

  Parametrization kind_ = Parametrization::IdealPhase;
  Index elements_ = 0;
  VaractorCircuit circuit_;
  ParamBox box_;
};

}  // namespace izosga
