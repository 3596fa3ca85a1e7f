#include "izosga/harness/config_file.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "izosga/zo_gradient.hpp"

namespace izosga::harness {

std::string to_string(Scale scale) { return scale == Scale::Paper ? "paper" : "desk"; }

Scale parse_scale(const std::string& text) {
  if (text == "desk") return Scale::Desk;
  if (text == "paper") return Scale::Paper;
  throw ConfigError("unknown scale '" + text + "' (expected desk or paper)");
}

KeyValues read_config_file(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("cannot read config '" + path + "': " + e.message());
  }
  KeyValues out;
  for (const auto& [section, body] : tree) {
    if (body.empty()) throw ConfigError("config key '" + section + "' outside of any section");
    for (const auto& [key, value] : body) out[section + "." + key] = value.data();
  }
  return out;
}

std::string write_config_text(const KeyValues& values) {
  std::ostringstream os;
  std::string current;
  for (const auto& [full, value] : values) {
    const auto dot = full.find('.');
    const std::string section = full.substr(0, dot);
    if (section != current) {
      os << (current.empty() ? "" : "\n") << '[' << section << "]\n";
      current = section;
    }
    os << full.substr(dot + 1) << " = " << value << '\n';
  }
  return os.str();
}

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

double parse_double(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + raw + "'");
  }
}

long parse_long(const std::string& raw) {
  const double v = parse_double(raw);
  if (v != std::floor(v) || std::abs(v) > 9e15) throw ConfigError("expected an integer, got '" + raw + "'");
  return static_cast<long>(v);
}

bool parse_bool(const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("expected a boolean, got '" + raw + "'");
}

std::vector<std::string> split(const std::string& s, const char* sep) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, s, boost::algorithm::is_any_of(sep));
  for (auto& p : parts) p = trim(p);
  return parts;
}

std::vector<int> parse_int_list(const std::string& raw) {
  std::vector<int> out;
  for (const auto& p : split(raw, ",")) out.push_back(static_cast<int>(parse_long(p)));
  return out;
}

std::string int_list(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

Vec3 parse_vec3(const std::string& raw) {
  const auto parts = split(raw, ",");
  if (parts.size() != 3) throw ConfigError("expected x,y,z, got '" + raw + "'");
  return {parse_double(parts[0]), parse_double(parts[1]), parse_double(parts[2])};
}

std::string vec3(const Vec3& v) { return fmt(v.x()) + "," + fmt(v.y()) + "," + fmt(v.z()); }

// "<x> dB" -> linear, "inf" -> +inf, bare number -> linear.
double parse_ratio(const std::string& raw) {
  const std::string s = trim(raw);
  if (boost::algorithm::iends_with(s, "dB")) return db_to_linear(parse_double(s.substr(0, s.size() - 2)));
  return parse_double(s);
}

struct Pending {
  std::string noise = "-80 dBm";
  std::string weights = "1";
  std::string smoothing = "auto";
  double smoothing_constant = 1.0;
  std::string tolerance;
  double horizon_constant = 1.0;
};

struct Field {
  const char* key;
  std::function<void(ResolvedConfig&, Pending&, const std::string&)> set;
  std::function<std::string(const ResolvedConfig&)> get;
};

std::string per_user(const RVec& v) {
  std::string s;
  for (Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

RVec broadcast(const std::string& raw, Index users, bool power) {
  const auto parts = split(raw, ",");
  auto value = [&](const std::string& p) { return power ? parse_power(p) : parse_double(p); };
  if (parts.size() == 1) return RVec::Constant(users, value(parts[0]));
  if (static_cast<Index>(parts.size()) != users)
    throw ConfigError("per-user list needs 1 or num_users entries: '" + raw + "'");
  RVec out(users);
  for (Index k = 0; k < users; ++k) out[k] = value(parts[static_cast<std::size_t>(k)]);
  return out;
}

using R = ResolvedConfig;
using P = Pending;
using S = std::string;

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      // network
      {"network.num_antennas", [](R& c, P&, const S& v) { c.network.num_antennas = parse_long(v); },
       [](const R& c) { return std::to_string(c.network.num_antennas); }},
      {"network.num_users", [](R& c, P&, const S& v) { c.network.num_users = parse_long(v); },
       [](const R& c) { return std::to_string(c.network.num_users); }},
      {"network.num_irs_elements",
       [](R& c, P&, const S& v) { c.network.num_irs_elements = parse_long(v); },
       [](const R& c) { return std::to_string(c.network.num_irs_elements); }},
      {"network.power_budget", [](R& c, P&, const S& v) { c.network.power_budget = parse_power(v); },
       [](const R& c) { return fmt(c.network.power_budget) + " W"; }},
      {"network.noise_variance", [](R&, P& p, const S& v) { p.noise = v; },
       [](const R& c) { return per_user(c.network.noise_variances); }},
      {"network.sumrate_weights", [](R&, P& p, const S& v) { p.weights = v; },
       [](const R& c) { return per_user(c.network.sumrate_weights); }},
      // geometry
      {"geometry.ap_position",
       [](R& c, P&, const S& v) { c.network.geometry.ap_position = parse_vec3(v); },
       [](const R& c) { return vec3(c.network.geometry.ap_position); }},
      {"geometry.irs_position",
       [](R& c, P&, const S& v) { c.network.geometry.irs_position = parse_vec3(v); },
       [](const R& c) { return vec3(c.network.geometry.irs_position); }},
      {"geometry.user_placement",
       [](R& c, P&, const S& v) {
         const S t = trim(v);
         if (t == "random_disc") c.network.geometry.placement = UserPlacement::RandomDisc;
         else if (t == "fixed") c.network.geometry.placement = UserPlacement::Fixed;
         else throw ConfigError("user_placement must be random_disc or fixed");
       },
       [](const R& c) {
         return S(c.network.geometry.placement == UserPlacement::Fixed ? "fixed" : "random_disc");
       }},
      {"geometry.disc_center",
       [](R& c, P&, const S& v) { c.network.geometry.disc_center = parse_vec3(v); },
       [](const R& c) { return vec3(c.network.geometry.disc_center); }},
      {"geometry.disc_radius",
       [](R& c, P&, const S& v) { c.network.geometry.disc_radius = parse_double(v); },
       [](const R& c) { return fmt(c.network.geometry.disc_radius); }},
      {"geometry.user_positions",
       [](R& c, P&, const S& v) {
         c.network.geometry.user_positions.clear();
         if (trim(v).empty()) return;
         for (const auto& p : split(v, ";")) c.network.geometry.user_positions.push_back(parse_vec3(p));
       },
       [](const R& c) {
         S s;
         const auto& u = c.network.geometry.user_positions;
         for (std::size_t i = 0; i < u.size(); ++i) s += (i ? "; " : "") + vec3(u[i]);
         return s;
       }},
      // channel
      {"channel.rician_ap_irs",
       [](R& c, P&, const S& v) { c.network.channel.ap_irs.rician_factor = parse_ratio(v); },
       [](const R& c) { return fmt(c.network.channel.ap_irs.rician_factor); }},
      {"channel.rician_irs_user",
       [](R& c, P&, const S& v) { c.network.channel.irs_user.rician_factor = parse_ratio(v); },
       [](const R& c) { return fmt(c.network.channel.irs_user.rician_factor); }},
      {"channel.rician_ap_user",
       [](R& c, P&, const S& v) { c.network.channel.ap_user.rician_factor = parse_ratio(v); },
       [](const R& c) { return fmt(c.network.channel.ap_user.rician_factor); }},
      {"channel.pathloss_exponent_ap_irs",
       [](R& c, P&, const S& v) { c.network.channel.ap_irs.pathloss_exponent = parse_double(v); },
       [](const R& c) { return fmt(c.network.channel.ap_irs.pathloss_exponent); }},
      {"channel.pathloss_exponent_irs_user",
       [](R& c, P&, const S& v) { c.network.channel.irs_user.pathloss_exponent = parse_double(v); },
       [](const R& c) { return fmt(c.network.channel.irs_user.pathloss_exponent); }},
      {"channel.pathloss_exponent_ap_user",
       [](R& c, P&, const S& v) { c.network.channel.ap_user.pathloss_exponent = parse_double(v); },
       [](const R& c) { return fmt(c.network.channel.ap_user.pathloss_exponent); }},
      {"channel.reference_gain",
       [](R& c, P&, const S& v) { c.network.channel.reference_gain = parse_ratio(v); },
       [](const R& c) { return fmt(c.network.channel.reference_gain); }},
      {"channel.reference_distance",
       [](R& c, P&, const S& v) { c.network.channel.reference_distance = parse_double(v); },
       [](const R& c) { return fmt(c.network.channel.reference_distance); }},
      // irs
      {"irs.parametrization",
       [](R& c, P&, const S& v) { c.parametrization = parse_parametrization(trim(v)); },
       [](const R& c) { return S(to_string(c.parametrization)); }},
      {"irs.frequency_hz", [](R& c, P&, const S& v) { c.circuit.frequency_hz = parse_double(v); },
       [](const R& c) { return fmt(c.circuit.frequency_hz); }},
      {"irs.l1", [](R& c, P&, const S& v) { c.circuit.l1 = parse_double(v); },
       [](const R& c) { return fmt(c.circuit.l1); }},
      {"irs.l2", [](R& c, P&, const S& v) { c.circuit.l2 = parse_double(v); },
       [](const R& c) { return fmt(c.circuit.l2); }},
      {"irs.r_loss", [](R& c, P&, const S& v) { c.circuit.r_loss = parse_double(v); },
       [](const R& c) { return fmt(c.circuit.r_loss); }},
      {"irs.z0", [](R& c, P&, const S& v) { c.circuit.z0 = parse_double(v); },
       [](const R& c) { return fmt(c.circuit.z0); }},
      {"irs.c_min_pf", [](R& c, P&, const S& v) { c.circuit.c_min_pf = parse_double(v); },
       [](const R& c) { return fmt(c.circuit.c_min_pf); }},
      {"irs.c_max_pf", [](R& c, P&, const S& v) { c.circuit.c_max_pf = parse_double(v); },
       [](const R& c) { return fmt(c.circuit.c_max_pf); }},
      // optimizer
      {"optimizer.step_size", [](R& c, P&, const S& v) { c.optimizer.step_size = parse_double(v); },
       [](const R& c) { return fmt(c.optimizer.step_size); }},
      {"optimizer.step_decay", [](R& c, P&, const S& v) { c.optimizer.step_decay = parse_bool(v); },
       [](const R& c) { return S(c.optimizer.step_decay ? "true" : "false"); }},
      {"optimizer.smoothing", [](R&, P& p, const S& v) { p.smoothing = trim(v); },
       [](const R& c) { return fmt(c.optimizer.probe.smoothing); }},
      {"optimizer.smoothing_constant",
       [](R&, P& p, const S& v) { p.smoothing_constant = parse_double(v); }, nullptr},
      {"optimizer.tolerance", [](R&, P& p, const S& v) { p.tolerance = trim(v); }, nullptr},
      {"optimizer.horizon_constant",
       [](R&, P& p, const S& v) { p.horizon_constant = parse_double(v); }, nullptr},
      {"optimizer.probe_batch",
       [](R& c, P&, const S& v) { c.optimizer.probe.batch_size = static_cast<int>(parse_long(v)); },
       [](const R& c) { return std::to_string(c.optimizer.probe.batch_size); }},
      {"optimizer.horizon", [](R& c, P&, const S& v) { c.optimizer.horizon = parse_long(v); },
       [](const R& c) { return std::to_string(c.optimizer.horizon); }},
      {"optimizer.wmmse_schedule",
       [](R& c, P&, const S& v) { c.optimizer.schedule = BudgetSchedule::parse(trim(v)); },
       [](const R& c) { return c.optimizer.schedule.to_string(); }},
      {"optimizer.return_rule",
       [](R& c, P&, const S& v) { c.optimizer.return_rule = parse_return_rule(trim(v)); },
       [](const R& c) { return S(to_string(c.optimizer.return_rule)); }},
      {"optimizer.theta_init",
       [](R& c, P&, const S& v) { c.optimizer.theta_init = parse_theta_init(trim(v)); },
       [](const R& c) { return S(to_string(c.optimizer.theta_init)); }},
      {"optimizer.warm_start", [](R& c, P&, const S& v) { c.optimizer.warm_start = parse_bool(v); },
       [](const R& c) { return S(c.optimizer.warm_start ? "true" : "false"); }},
      {"optimizer.wmmse_tolerance",
       [](R& c, P&, const S& v) { c.optimizer.wmmse_tolerance = parse_double(v); },
       [](const R& c) { return fmt(c.optimizer.wmmse_tolerance); }},
      {"optimizer.ma_window",
       [](R& c, P&, const S& v) { c.optimizer.ma_window = static_cast<int>(parse_long(v)); },
       [](const R& c) { return std::to_string(c.optimizer.ma_window); }},
      {"optimizer.gap_cadence", [](R& c, P&, const S& v) { c.optimizer.gap_cadence = parse_long(v); },
       [](const R& c) { return std::to_string(c.optimizer.gap_cadence); }},
      {"optimizer.gap_reference_budget",
       [](R& c, P&, const S& v) { c.optimizer.gap.reference_budget = static_cast<int>(parse_long(v)); },
       [](const R& c) { return std::to_string(c.optimizer.gap.reference_budget); }},
      {"optimizer.gap_restarts",
       [](R& c, P&, const S& v) { c.optimizer.gap.restarts = static_cast<int>(parse_long(v)); },
       [](const R& c) { return std::to_string(c.optimizer.gap.restarts); }},
      // diagnostics
      {"diagnostics.lambda", [](R& c, P&, const S& v) { c.moreau.lambda = parse_double(v); },
       [](const R& c) { return fmt(c.moreau.lambda); }},
      {"diagnostics.prox_iterations",
       [](R& c, P&, const S& v) { c.moreau.prox_iterations = static_cast<int>(parse_long(v)); },
       [](const R& c) { return std::to_string(c.moreau.prox_iterations); }},
      {"diagnostics.prox_step", [](R& c, P&, const S& v) { c.moreau.prox_step = parse_double(v); },
       [](const R& c) { return fmt(c.moreau.prox_step); }},
      {"diagnostics.tolerance_abs",
       [](R& c, P&, const S& v) { c.moreau.tolerance_abs = parse_double(v); },
       [](const R& c) { return fmt(c.moreau.tolerance_abs); }},
      {"diagnostics.tolerance_rel",
       [](R& c, P&, const S& v) { c.moreau.tolerance_rel = parse_double(v); },
       [](const R& c) { return fmt(c.moreau.tolerance_rel); }},
      {"diagnostics.samples",
       [](R& c, P&, const S& v) { c.moreau.samples = static_cast<int>(parse_long(v)); },
       [](const R& c) { return std::to_string(c.moreau.samples); }},
      {"diagnostics.reference_budget",
       [](R& c, P&, const S& v) { c.moreau.reference_budget = static_cast<int>(parse_long(v)); },
       [](const R& c) { return std::to_string(c.moreau.reference_budget); }},
      {"diagnostics.smoothing", [](R& c, P&, const S& v) { c.moreau.smoothing = parse_double(v); },
       [](const R& c) { return fmt(c.moreau.smoothing); }},
      // experiment
      {"experiment.scale", [](R& c, P&, const S& v) { c.experiment.scale = parse_scale(trim(v)); },
       [](const R& c) { return to_string(c.experiment.scale); }},
      {"experiment.seed",
       [](R& c, P&, const S& v) { c.experiment.seed = std::stoull(trim(v)); },
       [](const R& c) { return std::to_string(c.experiment.seed); }},
      {"experiment.replications",
       [](R& c, P&, const S& v) { c.experiment.replications = static_cast<int>(parse_long(v)); },
       [](const R& c) { return std::to_string(c.experiment.replications); }},
      {"experiment.jobs",
       [](R& c, P&, const S& v) { c.experiment.jobs = static_cast<int>(parse_long(v)); },
       [](const R& c) { return std::to_string(c.experiment.jobs); }},
      {"experiment.budgets", [](R& c, P&, const S& v) { c.experiment.budgets = parse_int_list(v); },
       [](const R& c) { return int_list(c.experiment.budgets); }},
      {"experiment.schedule_a",
       [](R& c, P&, const S& v) { c.experiment.schedule_a = parse_int_list(v); },
       [](const R& c) { return int_list(c.experiment.schedule_a); }},
      {"experiment.schedule_b",
       [](R& c, P&, const S& v) { c.experiment.schedule_b = parse_int_list(v); },
       [](const R& c) { return int_list(c.experiment.schedule_b); }},
      {"experiment.schedule_period",
       [](R& c, P&, const S& v) { c.experiment.schedule_period = parse_long(v); },
       [](const R& c) { return std::to_string(c.experiment.schedule_period); }},
      {"experiment.varactor_step_size",
       [](R& c, P&, const S& v) { c.experiment.varactor_step_size = parse_double(v); },
       [](const R& c) { return fmt(c.experiment.varactor_step_size); }},
  };
  return table;
}

}  // namespace

double parse_power(const std::string& raw) {
  const std::string s = trim(raw);
  if (boost::algorithm::iends_with(s, "dBm")) return dbm_to_watts(parse_double(s.substr(0, s.size() - 3)));
  if (boost::algorithm::ends_with(s, "W")) return parse_double(s.substr(0, s.size() - 1));
  return parse_double(s);
}

ResolvedConfig scale_defaults(Scale scale) {
  ResolvedConfig c;
  c.experiment.scale = scale;
  if (scale == Scale::Desk) {
    c.network = make_network(4, 4, 64, dbm_to_watts(30.0), dbm_to_watts(-80.0));
    c.optimizer.horizon = 5000;
    c.experiment.schedule_period = 1600;
    c.optimizer.gap_cadence = 50;
  } else {
    c.network = make_network(6, 32, 1000, dbm_to_watts(30.0), dbm_to_watts(-80.0));
    c.optimizer.horizon = 32000;
    c.experiment.schedule_period = 8000;
    c.optimizer.gap_cadence = 500;
  }
  c.optimizer.step_size = 0.05;
  c.optimizer.schedule = BudgetSchedule::constant(10);
  c.optimizer.probe.smoothing =
      smoothing_for_horizon(1.0, c.network.stacked_dim(), c.optimizer.horizon);
  return c;
}

ResolvedConfig resolve(const KeyValues& values) {
  for (const auto& [key, value] : values) {
    bool known = false;
    for (const Field& f : fields()) known = known || key == f.key;
    if (!known) throw ConfigError("unknown config key '" + key + "'");
  }
  Scale scale = Scale::Desk;
  if (const auto it = values.find("experiment.scale"); it != values.end())
    scale = parse_scale(trim(it->second));

  ResolvedConfig c = scale_defaults(scale);
  Pending pending;
  for (const Field& f : fields()) {
    const auto it = values.find(f.key);
    if (it == values.end()) continue;
    try {
      f.set(c, pending, it->second);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(f.key) + ": " + e.what());
    }
  }

  const Index users = c.network.num_users;
  c.network.noise_variances = broadcast(pending.noise, users, true);
  c.network.sumrate_weights = broadcast(pending.weights, users, false);

  const Index stacked = c.network.stacked_dim();
  if (!pending.tolerance.empty()) {
    const IrsModel irs = c.irs();
    const RateParameters rate = rate_parameters(parse_double(pending.tolerance), irs.dimension(),
                                                stacked, pending.horizon_constant,
                                                pending.smoothing_constant);
    c.optimizer.horizon = rate.horizon;
    c.optimizer.probe.smoothing = rate.smoothing;
  } else if (pending.smoothing == "auto") {
    c.optimizer.probe.smoothing =
        smoothing_for_horizon(pending.smoothing_constant, stacked, c.optimizer.horizon);
  } else {
    c.optimizer.probe.smoothing = parse_double(pending.smoothing);
  }

  c.network.validate();
  c.optimizer.validate();
  if (c.experiment.replications < 1) throw ConfigError("experiment.replications must be >= 1");
  if (c.experiment.jobs < 1) throw ConfigError("experiment.jobs must be >= 1");
  if (c.experiment.budgets.empty()) throw ConfigError("experiment.budgets must not be empty");
  (void)c.irs();
  return c;
}

KeyValues to_key_values(const ResolvedConfig& config) {
  KeyValues out;
  for (const Field& f : fields())
    if (f.get) out[f.key] = f.get(config);
  return out;
}

}  // namespace izosga::harness
