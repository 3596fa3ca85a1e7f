#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "izosga/channel.hpp"
#include "izosga/irs.hpp"
#include "izosga/ledger.hpp"
#include "izosga/wmmse.hpp"
#include "izosga/zo_gradient.hpp"

namespace izosga {

/// WMMSE iteration budget per outer iteration.
///
/// Text form: "constant:B", "piecewise:PERIOD:B0,B1,..." (B_i on
/// [i*PERIOD, (i+1)*PERIOD), the last value holding afterwards) or
/// "list:B0,B1,..." (one entry per outer iteration).
class BudgetSchedule {
 public:
  static BudgetSchedule constant(int budget);
  static BudgetSchedule piecewise(long period, std::vector<int> budgets);
  static BudgetSchedule list(std::vector<int> budgets);
  static BudgetSchedule parse(std::string_view text);

  BudgetSchedule() : BudgetSchedule(constant(10)) {}

  /// Throws std::out_of_range for t < 0 or t past the end of a list schedule.
  int at(long t) const;
  std::string to_string() const;
  long period() const { return period_; }
  const std::vector<int>& budgets() const { return budgets_; }

 private:
  enum class Kind { Constant, Piecewise, List };
  BudgetSchedule(Kind kind, long period, std::vector<int> budgets);

  Kind kind_;
  long period_;
  std::vector<int> budgets_;
};

enum class ReturnRule { UniformRandom, FinalIterate, BestTracked };
enum class ThetaInit { Default, Random };

std::string_view to_string(ReturnRule rule);
ReturnRule parse_return_rule(std::string_view text);
std::string_view to_string(ThetaInit init);
ThetaInit parse_theta_init(std::string_view text);

struct IzosgaConfig {
  double step_size = 0.01;    // eta
  bool step_decay = false;    // eta / sqrt(t + 1) when set
  ProbeConfig probe;
  long horizon = 5000;        // T; iterations t = 0..T
  BudgetSchedule schedule;
  ReturnRule return_rule = ReturnRule::FinalIterate;
  ThetaInit theta_init = ThetaInit::Default;
  bool learn = true;          // false: keep theta_0 fixed (WMMSE-only baseline)
  bool warm_start = false;    // warm-start WMMSE from the previous precoder
  double wmmse_tolerance = 0.0;
  int ma_window = 200;
  long gap_cadence = 0;       // 0 disables oracle-gap measurement
  GapConfig gap;
  bool record_thetas = false;

  void validate() const;
};

/// Independent randomness sources of one replication.
struct SeedBundle {
  std::uint64_t omega = 0;
  std::uint64_t probe = 0;
  std::uint64_t selection = 0;
  std::uint64_t geometry = 0;
  std::uint64_t init = 0;
  std::uint64_t gap = 0;

  /// Derives every stream from (master, replication).
  static SeedBundle derive(std::uint64_t master, std::uint64_t replication);
};

struct IterateRecord {
  long t = 0;
  double sumrate = 0.0;
  double sumrate_ma = 0.0;
  int wmmse_iters = 0;
  std::optional<double> gap_estimate;
  std::size_t clamp_events = 0;
  double theta_norm = 0.0;
  RVec theta;  // filled only when IzosgaConfig::record_thetas is set
};

struct RunResult {
  RVec theta_out;
  long selected_t = 0;
  RVec theta_initial;
  RVec theta_final;
  std::vector<IterateRecord> trace;
  ErrorLedger ledger;
};

/// Euclidean projection onto the box.
RVec project_theta(const RVec& theta, const ParamBox& box);

/// Supplies the state of nature for each outer iteration.
using StateSource = std::function<StateOfNature()>;

/// Projected zeroth-order quasi-gradient ascent over the IRS parameters with
/// a WMMSE inner oracle. Runs iterations t = 0..T. Each iteration draws one
/// state, solves the inner problem at theta_t with the scheduled budget,
/// estimates D from two probes on the same state and steps
/// theta_{t+1} = proj(theta_t + eta D).
///
/// When `source` is empty the states come from OmegaStream(model, seeds.omega).
RunResult run(const ChannelModel& model, const IrsModel& irs, const IzosgaConfig& opt,
              const SeedBundle& seeds, StateSource source = {});

/// Builds the channel model from `config` (user drop from seeds.geometry).
RunResult run(const NetworkConfig& config, const IrsModel& irs, const IzosgaConfig& opt,
              const SeedBundle& seeds);

/// Uniform point in the box drawn from `seed`.
RVec random_theta(const ParamBox& box, std::uint64_t seed);

}  // namespace izosga
