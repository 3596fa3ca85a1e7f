#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "izosga/diagnostics.hpp"
#include "izosga/irs.hpp"
#include "izosga/network.hpp"
#include "izosga/optimizer.hpp"

namespace izosga::harness {

enum class Scale { Desk, Paper };

std::string to_string(Scale scale);
Scale parse_scale(const std::string& text);

/// Flat "section.key" -> value store. Sections: network, geometry, channel,
/// irs, optimizer, diagnostics, experiment.
using KeyValues = std::map<std::string, std::string>;

/// Reads an INI-style file. Throws ConfigError on I/O or syntax errors.
KeyValues read_config_file(const std::string& path);
std::string write_config_text(const KeyValues& values);

struct ExperimentSettings {
  std::uint64_t seed = 1;
  int replications = 1;
  Scale scale = Scale::Desk;
  int jobs = 1;
  std::vector<int> budgets{1, 2, 3, 5, 10, 20, 50};
  std::vector<int> schedule_a{20, 10, 7, 6, 5};
  std::vector<int> schedule_b{20, 5, 4, 3, 2};
  long schedule_period = 1600;
  double varactor_step_size = 5e-4;
};

/// Fully resolved configuration of one experiment.
struct ResolvedConfig {
  NetworkConfig network;
  Parametrization parametrization = Parametrization::IdealPhase;
  VaractorCircuit circuit;
  IzosgaConfig optimizer;
  MoreauConfig moreau;
  ExperimentSettings experiment;

  IrsModel irs() const { return IrsModel(parametrization, network.num_irs_elements, circuit); }
};

/// Scale defaults: desk (M, K, S, T, period) = (4, 4, 64, 5000, 1600) and
/// paper (6, 32, 1000, 32000, 8000).
ResolvedConfig scale_defaults(Scale scale);

/// Applies `values` on top of the defaults of the scale named in
/// "experiment.scale" (desk when absent). Unknown keys are rejected.
/// Powers and variances accept "<x> dBm", "<x> W" or a bare number (watts);
/// Rician factors and reference gain accept "<x> dB", "inf" or a linear value.
ResolvedConfig resolve(const KeyValues& values);

/// Every resolved value, with floats at 17 significant digits, such that
/// resolve(to_key_values(c)) reproduces c.
KeyValues to_key_values(const ResolvedConfig& config);

/// Parses a unit-suffixed power ("30 dBm", "1e-3 W", "0.5").
double parse_power(const std::string& text);

}  // namespace izosga::harness
