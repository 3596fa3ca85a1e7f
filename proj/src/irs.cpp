#include "izosga/irs.hpp"

#include <algorithm>
#include <cmath>

namespace izosga {

std::string_view to_string(Parametrization kind) {
  switch (kind) {
    case Parametrization::IdealPhase: return "ideal_phase";
    case Parametrization::PhaseAmplitude: return "phase_amplitude";
    case Parametrization::Varactor: return "varactor";
  }
  return "unknown";
}

Parametrization parse_parametrization(std::string_view text) {
  if (text == "ideal_phase") return Parametrization::IdealPhase;
  if (text == "phase_amplitude") return Parametrization::PhaseAmplitude;
  if (text == "varactor") return Parametrization::Varactor;
  throw ConfigError("unknown IRS parametrization '" + std::string(text) + "'");
}

Complex VaractorCircuit::impedance(double capacitance_pf) const {
  const double omega = 2.0 * kPi * frequency_hz;
  const Complex j(0.0, 1.0);
  const double c = capacitance_pf * 1e-12;
  const Complex branch = j * omega * l2 + 1.0 / (j * omega * c) + r_loss;
  const Complex shunt = j * omega * l1;
  return shunt * branch / (shunt + branch);
}

Complex VaractorCircuit::reflection(double capacitance_pf) const {
  const Complex z = impedance(capacitance_pf);
  return (z - z0) / (z + z0);
}

bool ParamBox::contains(const RVec& theta) const {
  if (theta.size() != lower.size()) return false;
  return (theta.array() >= lower.array()).all() && (theta.array() <= upper.array()).all();
}

RVec ParamBox::project(const RVec& theta) const {
  return theta.cwiseMax(lower).cwiseMin(upper);
}

IrsModel::IrsModel(Parametrization kind, Index elements, VaractorCircuit circuit)
    : kind_(kind), elements_(elements), circuit_(circuit) {
  if (elements < 1) throw ConfigError("IRS needs at least one element");
  const Index dim = dimension();
  box_.lower.resize(dim);
  box_.upper.resize(dim);
  switch (kind_) {
    case Parametrization::IdealPhase:
      box_.lower.setConstant(-2.0 * kPi);
      box_.upper.setConstant(2.0 * kPi);
      break;
    case Parametrization::PhaseAmplitude:
      box_.lower.head(elements).setConstant(-2.0 * kPi);
      box_.upper.head(elements).setConstant(2.0 * kPi);
      box_.lower.tail(elements).setConstant(0.0);
      box_.upper.tail(elements).setConstant(1.0);
      break;
    case Parametrization::Varactor:
      if (!(circuit_.c_min_pf > 0.0) || !(circuit_.c_max_pf > circuit_.c_min_pf))
        throw ConfigError("varactor capacitance range must satisfy 0 < c_min < c_max");
      box_.lower.setConstant(circuit_.c_min_pf);
      box_.upper.setConstant(circuit_.c_max_pf);
      break;
  }
}

Index IrsModel::dimension() const {
  return kind_ == Parametrization::PhaseAmplitude ? 2 * elements_ : elements_;
}

RVec IrsModel::default_theta() const {
  RVec theta = RVec::Zero(dimension());
  if (kind_ == Parametrization::PhaseAmplitude) theta.tail(elements_).setOnes();
  if (kind_ == Parametrization::Varactor) theta = box_.midpoint();
  return theta;
}

CVec IrsModel::evaluate(const RVec& theta) const {
  CVec gamma(elements_);
  switch (kind_) {
    case Parametrization::IdealPhase:
      for (Index s = 0; s < elements_; ++s) gamma[s] = std::polar(1.0, theta[s]);
      break;
    case Parametrization::PhaseAmplitude:
      for (Index s = 0; s < elements_; ++s)
        gamma[s] = std::polar(theta[elements_ + s], theta[s]);
      break;
    case Parametrization::Varactor:
      for (Index s = 0; s < elements_; ++s) gamma[s] = circuit_.reflection(theta[s]);
      break;
  }
  return gamma;
}

CVec IrsModel::reflection(const RVec& theta) const {
  if (theta.size() != dimension())
    throw ConfigError("IRS parameter vector has the wrong dimension");
  if (!box_.contains(theta)) throw ConfigError("IRS parameters outside the feasible box");
  return evaluate(theta);
}

CVec IrsModel::probe_reflection(const RVec& theta, std::size_t& clamp_events) const {
  if (theta.size() != dimension())
    throw ConfigError("IRS parameter vector has the wrong dimension");
  if (kind_ == Parametrization::IdealPhase) return evaluate(theta);

  RVec clamped = theta;
  const Index first = kind_ == Parametrization::PhaseAmplitude ? elements_ : 0;
  for (Index i = first; i < clamped.size(); ++i) {
    const double v = std::clamp(clamped[i], box_.lower[i], box_.upper[i]);
    if (v != clamped[i]) {
      ++clamp_events;
      clamped[i] = v;
    }
  }
  return evaluate(clamped);
}

}  // namespace izosga
