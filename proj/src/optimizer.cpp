#include "izosga/optimizer.hpp"

#include <charconv>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace izosga {

namespace {

int parse_int(std::string_view s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError("invalid integer '" + std::string(s) + "' in budget schedule");
  return v;
}

std::vector<int> parse_int_list(std::string_view s) {
  std::vector<int> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(parse_int(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

BudgetSchedule::BudgetSchedule(Kind kind, long period, std::vector<int> budgets)
    : kind_(kind), period_(period), budgets_(std::move(budgets)) {
  if (budgets_.empty()) throw ConfigError("budget schedule needs at least one value");
  for (int b : budgets_)
    if (b < 1) throw ConfigError("WMMSE budgets must be >= 1");
  if (kind_ == Kind::Piecewise && period_ < 1)
    throw ConfigError("piecewise schedule period must be >= 1");
}

BudgetSchedule BudgetSchedule::constant(int budget) { return {Kind::Constant, 0, {budget}}; }

BudgetSchedule BudgetSchedule::piecewise(long period, std::vector<int> budgets) {
  return {Kind::Piecewise, period, std::move(budgets)};
}

BudgetSchedule BudgetSchedule::list(std::vector<int> budgets) {
  return {Kind::List, 0, std::move(budgets)};
}

BudgetSchedule BudgetSchedule::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return constant(parse_int(text));
  const std::string_view kind = text.substr(0, colon);
  std::string_view rest = text.substr(colon + 1);
  if (kind == "constant") return constant(parse_int(rest));
  if (kind == "list") return list(parse_int_list(rest));
  if (kind == "piecewise") {
    const auto sep = rest.find(':');
    if (sep == std::string_view::npos)
      throw ConfigError("piecewise schedule must look like piecewise:PERIOD:B0,B1,...");
    return piecewise(parse_int(rest.substr(0, sep)), parse_int_list(rest.substr(sep + 1)));
  }
  throw ConfigError("unknown budget schedule '" + std::string(text) + "'");
}

int BudgetSchedule::at(long t) const {
  if (t < 0) throw std::out_of_range("negative outer iteration index");
  switch (kind_) {
    case Kind::Constant: return budgets_.front();
    case Kind::Piecewise: {
      const auto idx = static_cast<std::size_t>(t / period_);
      return budgets_[std::min(idx, budgets_.size() - 1)];
    }
    case Kind::List:
      if (static_cast<std::size_t>(t) >= budgets_.size())
        throw std::out_of_range("outer iteration past the end of the budget list");
      return budgets_[static_cast<std::size_t>(t)];
  }
  return budgets_.front();
}

std::string BudgetSchedule::to_string() const {
  std::ostringstream os;
  auto join = [&] {
    for (std::size_t i = 0; i < budgets_.size(); ++i) os << (i ? "," : "") << budgets_[i];
  };
  switch (kind_) {
    case Kind::Constant: os << "constant:" << budgets_.front(); break;
    case Kind::Piecewise: os << "piecewise:" << period_ << ':'; join(); break;
    case Kind::List: os << "list:"; join(); break;
  }
  return os.str();
}

std::string_view to_string(ReturnRule rule) {
  switch (rule) {
    case ReturnRule::UniformRandom: return "uniform_random";
    case ReturnRule::FinalIterate: return "final";
    case ReturnRule::BestTracked: return "best";
  }
  return "unknown";
}

ReturnRule parse_return_rule(std::string_view text) {
  if (text == "uniform_random") return ReturnRule::UniformRandom;
  if (text == "final") return ReturnRule::FinalIterate;
  if (text == "best") return ReturnRule::BestTracked;
  throw ConfigError("unknown return rule '" + std::string(text) + "'");
}

std::string_view to_string(ThetaInit init) {
  return init == ThetaInit::Random ? "random" : "default";
}

ThetaInit parse_theta_init(std::string_view text) {
  if (text == "default") return ThetaInit::Default;
  if (text == "random") return ThetaInit::Random;
  throw ConfigError("unknown theta init '" + std::string(text) + "'");
}

void IzosgaConfig::validate() const {
  if (!(step_size >= 0.0) || !std::isfinite(step_size)) throw ConfigError("step_size must be >= 0");
  if (!(probe.smoothing > 0.0)) throw ConfigError("smoothing must be > 0");
  if (probe.batch_size < 1) throw ConfigError("probe batch size must be >= 1");
  if (horizon < 0) throw ConfigError("horizon must be >= 0");
  if (ma_window < 1) throw ConfigError("moving-average window must be >= 1");
  if (gap_cadence < 0) throw ConfigError("gap cadence must be >= 0");
  schedule.at(horizon);  // defined on the whole horizon
}

SeedBundle SeedBundle::derive(std::uint64_t master, std::uint64_t replication) {
  const std::uint64_t base = mix_seed(master, replication);
  SeedBundle s;
  s.omega = mix_seed(base, 1);
  s.probe = mix_seed(base, 2);
  s.selection = mix_seed(base, 3);
  s.geometry = mix_seed(base, 4);
  s.init = mix_seed(base, 5);
  s.gap = mix_seed(base, 6);
  return s;
}

RVec project_theta(const RVec& theta, const ParamBox& box) { return box.project(theta); }

RVec random_theta(const ParamBox& box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RVec theta(box.size());
  for (Index i = 0; i < box.size(); ++i)
    theta[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unit(rng);
  return theta;
}

RunResult run(const ChannelModel& model, const IrsModel& irs, const IzosgaConfig& opt,
              const SeedBundle& seeds, StateSource source) {
  opt.validate();
  const NetworkConfig& config = model.config();
  if (irs.elements() != config.num_irs_elements)
    throw ConfigError("IRS element count differs from num_irs_elements");

  OmegaStream stream(model, seeds.omega);
  if (!source) source = [&stream] { return stream.next(); };
  std::mt19937_64 probe_rng(seeds.probe);

  RunResult result;
  result.ledger = ErrorLedger(opt.gap_cadence);
  RVec theta = opt.theta_init == ThetaInit::Random ? random_theta(irs.box(), seeds.init)
                                                   : irs.default_theta();
  if (!irs.box().contains(theta)) throw ConfigError("initial theta outside the feasible box");
  result.theta_initial = theta;

  long selected = opt.horizon;
  if (opt.return_rule == ReturnRule::UniformRandom) {
    std::mt19937_64 select_rng(seeds.selection);
    selected = std::uniform_int_distribution<long>(0, opt.horizon)(select_rng);
  }
  result.selected_t = selected;

  OracleConfig oracle;
  oracle.objective_tolerance = opt.wmmse_tolerance;
  oracle.init = opt.warm_start ? WmmseInit::WarmStart : WmmseInit::Mrt;
  std::optional<Precoder> previous;

  std::vector<double> sumrates;
  sumrates.reserve(static_cast<std::size_t>(opt.horizon + 1));
  double best_ma = -std::numeric_limits<double>::infinity();
  result.trace.reserve(static_cast<std::size_t>(opt.horizon + 1));

  for (long t = 0; t <= opt.horizon; ++t) {
    const StateOfNature omega = source();
    const EffectiveChannel channel = effective_channel(irs, theta, omega);
    oracle.max_iterations = opt.schedule.at(t);
    const OracleReport report =
        wmmse_solve(channel, config, oracle, previous ? &*previous : nullptr);
    if (opt.warm_start) previous = report.precoder;

    IterateRecord rec;
    rec.t = t;
    rec.sumrate = report.achieved_sumrate;
    rec.wmmse_iters = report.iterations_used;
    rec.theta_norm = theta.norm();
    if (opt.record_thetas) rec.theta = theta;

    sumrates.push_back(rec.sumrate);
    const std::size_t n = sumrates.size();
    const std::size_t w = std::min<std::size_t>(n, static_cast<std::size_t>(opt.ma_window));
    double window_sum = 0.0;
    for (std::size_t i = n - w; i < n; ++i) window_sum += sumrates[i];
    rec.sumrate_ma = window_sum / static_cast<double>(w);

    if (result.ledger.due(t)) {
      GapConfig gap = opt.gap;
      gap.seed = mix_seed(seeds.gap, static_cast<std::uint64_t>(t));
      const double estimate = measure_gap(channel, config, report.precoder, gap);
      rec.gap_estimate = estimate;
      result.ledger.track(t, estimate);
    } else {
      result.ledger.mark_skipped(t);
    }

    if (opt.return_rule != ReturnRule::BestTracked && t == selected) result.theta_out = theta;
    if (opt.return_rule == ReturnRule::BestTracked && rec.sumrate_ma > best_ma) {
      best_ma = rec.sumrate_ma;
      result.theta_out = theta;
      result.selected_t = t;
    }

    if (opt.learn && t < opt.horizon) {
      const CVec g = cogradient(report.precoder.w, channel, config);
      RVec direction_sum = RVec::Zero(theta.size());
      for (int b = 0; b < opt.probe.batch_size; ++b) {
        const RVec u = draw_probe(probe_rng, theta.size());
        const ProbePair probes =
            channel_probe_pair(irs, theta, omega, u, opt.probe.smoothing);
        rec.clamp_events += probes.clamp_events;
        direction_sum += quasi_gradient(probes.plus, probes.minus, u, opt.probe.smoothing, g);
      }
      const RVec d = direction_sum / static_cast<double>(opt.probe.batch_size);
      if (!d.allFinite()) throw NumericalError("non-finite quasi-gradient at t = " + std::to_string(t));
      const double eta =
          opt.step_decay ? opt.step_size / std::sqrt(static_cast<double>(t + 1)) : opt.step_size;
      theta = project_theta(theta + eta * d, irs.box());
    }
    result.trace.push_back(std::move(rec));
  }
  result.theta_final = theta;
  return result;
}

RunResult run(const NetworkConfig& config, const IrsModel& irs, const IzosgaConfig& opt,
              const SeedBundle& seeds) {
  const ChannelModel model(config, resolve_user_positions(config, seeds.geometry));
  return run(model, irs, opt, seeds);
}

}  // namespace izosga
