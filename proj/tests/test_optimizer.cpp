#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "izosga/optimizer.hpp"
#include "support.hpp"

using namespace izosga;
using namespace testing_support;

namespace {

// Active-set solve of min ||x - y||^2 over a box: free every coordinate, then
// fix violators at their bound until the free solution is feasible.
RVec active_set_projection(const RVec& y, const ParamBox& box) {
  const Index n = y.size();
  std::vector<int> state(static_cast<std::size_t>(n), 0);  // -1 lower, 0 free, +1 upper
  RVec x(n);
  for (int round = 0; round <= n; ++round) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      const auto s = static_cast<std::size_t>(i);
      x[i] = state[s] == 0 ? y[i] : (state[s] < 0 ? box.lower[i] : box.upper[i]);
      if (state[s] == 0 && x[i] < box.lower[i]) state[s] = -1, changed = true;
      if (state[s] == 0 && x[i] > box.upper[i]) state[s] = 1, changed = true;
    }
    if (!changed) break;
  }
  return x;
}

IzosgaConfig small_config(long horizon) {
  IzosgaConfig c;
  c.horizon = horizon;
  c.step_size = 0.05;
  c.probe.smoothing = 1e-2;
  c.schedule = BudgetSchedule::constant(3);
  c.ma_window = 5;
  return c;
}

}  // namespace

TEST_CASE("projection") {
  const IrsModel irs(Parametrization::IdealPhase, 8);
  const RVec inside = RVec::LinSpaced(8, -6.0, 6.0);
  CHECK(project_theta(inside, irs.box()) == inside);
  RVec y = RVec::Zero(8);
  y[0] = 3.0 * kPi;
  y[1] = -5.0 * kPi;
  const RVec p = project_theta(y, irs.box());
  CHECK(p[0] == 2.0 * kPi);
  CHECK(p[1] == -2.0 * kPi);

  std::mt19937_64 rng(41);
  const IrsModel mixed(Parametrization::PhaseAmplitude, 4);
  for (int n = 0; n < 200; ++n) {
    RVec v(8);
    for (Index i = 0; i < 8; ++i) v[i] = uniform(rng, -10.0, 10.0);
    const ParamBox& box = n % 2 ? mixed.box() : irs.box();
    CHECK((project_theta(v, box) - active_set_projection(v, box)).norm() <= 1e-12);
    CHECK(box.contains(project_theta(v, box)));
  }
}

TEST_CASE("budget schedules") {
  const BudgetSchedule a = BudgetSchedule::piecewise(8000, {20, 10, 7, 6, 5});
  const BudgetSchedule b = BudgetSchedule::piecewise(8000, {20, 5, 4, 3, 2});
  CHECK(a.at(0) == 20);
  CHECK(a.at(7999) == 20);
  CHECK(a.at(8000) == 10);
  CHECK(a.at(16000) == 7);
  CHECK(a.at(1000000) == 5);
  CHECK(b.at(16000) == 4);
  CHECK(BudgetSchedule::constant(7).at(123456) == 7);
  const BudgetSchedule l = BudgetSchedule::list({3, 1, 4});
  CHECK(l.at(2) == 4);
  CHECK_THROWS_AS(l.at(3), std::out_of_range);
  CHECK_THROWS_AS(a.at(-1), std::out_of_range);

  for (const char* text : {"constant:10", "piecewise:1600:20,10,7,6,5", "list:1,2,3"})
    CHECK(BudgetSchedule::parse(text).to_string() == text);
  CHECK(BudgetSchedule::parse("4").to_string() == "constant:4");
  CHECK_THROWS_AS(BudgetSchedule::parse("piecewise:10"), ConfigError);
  CHECK_THROWS_AS(BudgetSchedule::parse("constant:0"), ConfigError);
  CHECK_THROWS_AS(BudgetSchedule::parse("geometric:2"), ConfigError);
  CHECK_THROWS_AS(BudgetSchedule::parse("list:1,x"), ConfigError);
}

TEST_CASE("enum names round-trip") {
  for (auto r : {ReturnRule::UniformRandom, ReturnRule::FinalIterate, ReturnRule::BestTracked})
    CHECK(parse_return_rule(to_string(r)) == r);
  for (auto i : {ThetaInit::Default, ThetaInit::Random}) CHECK(parse_theta_init(to_string(i)) == i);
  CHECK_THROWS_AS(parse_return_rule("last"), ConfigError);
}

TEST_CASE("a list schedule must cover the horizon") {
  IzosgaConfig c = small_config(3);
  c.schedule = BudgetSchedule::list({1, 2, 3});
  CHECK_THROWS(c.validate());
  c.schedule = BudgetSchedule::list({1, 2, 3, 4});
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("T = 0 records one iteration and does not step") {
  const NetworkConfig net = unit_network(2, 2, 8);
  const IrsModel irs(Parametrization::IdealPhase, 8);
  const RunResult r = run(net, irs, small_config(0), SeedBundle::derive(1, 0));
  CHECK(r.trace.size() == 1);
  CHECK(r.theta_final == r.theta_initial);
  CHECK(r.theta_out == r.theta_initial);
}

TEST_CASE("iterations run t = 0..T with the scheduled budgets") {
  const NetworkConfig net = unit_network(2, 2, 8);
  const IrsModel irs(Parametrization::IdealPhase, 8);
  IzosgaConfig c = small_config(9);
  c.schedule = BudgetSchedule::piecewise(4, {3, 2, 1});
  const RunResult r = run(net, irs, c, SeedBundle::derive(2, 0));
  REQUIRE(r.trace.size() == 10);
  for (long t = 0; t <= 9; ++t) {
    CHECK(r.trace[static_cast<std::size_t>(t)].t == t);
    CHECK(r.trace[static_cast<std::size_t>(t)].wmmse_iters == c.schedule.at(t));
  }
  // trailing moving average
  const auto& tr = r.trace;
  CHECK(tr[9].sumrate_ma ==
        doctest::Approx((tr[5].sumrate + tr[6].sumrate + tr[7].sumrate + tr[8].sumrate + tr[9].sumrate) / 5));
  CHECK(tr[1].sumrate_ma == doctest::Approx((tr[0].sumrate + tr[1].sumrate) / 2));
}

TEST_CASE("without IRS links theta never moves and the trace equals the fixed-theta run") {
  const NetworkConfig net = unit_network(2, 2, 8);
  const IrsModel irs(Parametrization::IdealPhase, 8);
  const ChannelModel model(net, net.geometry.user_positions);
  const SeedBundle seeds = SeedBundle::derive(3, 0);
  auto source_for = [&](OmegaStream& s) {
    return [&s] { return ChannelModel::without_irs_links(s.next()); };
  };
  IzosgaConfig c = small_config(30);
  c.theta_init = ThetaInit::Random;
  OmegaStream s1(model, seeds.omega), s2(model, seeds.omega);
  const RunResult learned = run(model, irs, c, seeds, source_for(s1));
  c.learn = false;
  const RunResult fixed = run(model, irs, c, seeds, source_for(s2));
  CHECK(learned.theta_final == learned.theta_initial);
  REQUIRE(learned.trace.size() == fixed.trace.size());
  for (std::size_t i = 0; i < fixed.trace.size(); ++i)
    CHECK(learned.trace[i].sumrate == fixed.trace[i].sumrate);
}

TEST_CASE("zero step size keeps theta fixed") {
  const NetworkConfig net = unit_network(2, 2, 8);
  const IrsModel irs(Parametrization::IdealPhase, 8);
  IzosgaConfig c = small_config(20);
  c.step_size = 0.0;
  c.theta_init = ThetaInit::Random;
  const RunResult r = run(net, irs, c, SeedBundle::derive(4, 0));
  CHECK(r.theta_final == r.theta_initial);
  for (const auto& rec : r.trace) CHECK(rec.theta_norm == r.theta_initial.norm());
}

TEST_CASE("same seeds give bit-identical runs") {
  const NetworkConfig net = unit_network(3, 2, 16);
  const IrsModel irs(Parametrization::PhaseAmplitude, 16);
  IzosgaConfig c = small_config(25);
  c.probe.batch_size = 2;
  c.return_rule = ReturnRule::UniformRandom;
  const RunResult a = run(net, irs, c, SeedBundle::derive(5, 1));
  const RunResult b = run(net, irs, c, SeedBundle::derive(5, 1));
  CHECK(a.theta_final == b.theta_final);
  CHECK(a.selected_t == b.selected_t);
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].sumrate == b.trace[i].sumrate);
  const RunResult other = run(net, irs, c, SeedBundle::derive(5, 2));
  CHECK_FALSE(other.theta_final == a.theta_final);
}

TEST_CASE("iterates stay feasible for every parametrization") {
  for (auto kind : {Parametrization::IdealPhase, Parametrization::PhaseAmplitude, Parametrization::Varactor}) {
    const NetworkConfig net = unit_network(2, 3, 8);
    const IrsModel irs(kind, 8);
    IzosgaConfig c = small_config(40);
    c.step_size = kind == Parametrization::Varactor ? 0.05 : 1.0;  // large steps hit the bounds
    c.record_thetas = true;
    const RunResult r = run(net, irs, c, SeedBundle::derive(6, 0));
    for (const auto& rec : r.trace) CHECK(irs.box().contains(rec.theta));
    CHECK(irs.box().contains(r.theta_final));
    CHECK((r.theta_final - r.theta_initial).norm() > 1e-3);
  }
}

TEST_CASE("return rules") {
  const NetworkConfig net = unit_network(2, 2, 8);
  const IrsModel irs(Parametrization::IdealPhase, 8);
  IzosgaConfig c = small_config(30);
  c.record_thetas = true;

  c.return_rule = ReturnRule::FinalIterate;
  RunResult r = run(net, irs, c, SeedBundle::derive(7, 0));
  CHECK(r.selected_t == 30);
  CHECK(r.theta_out == r.theta_final);
  CHECK(r.trace.back().theta == r.theta_final);

  c.return_rule = ReturnRule::UniformRandom;
  r = run(net, irs, c, SeedBundle::derive(7, 0));
  CHECK(r.selected_t >= 0);
  CHECK(r.selected_t <= 30);
  CHECK(r.theta_out == r.trace[static_cast<std::size_t>(r.selected_t)].theta);

  c.return_rule = ReturnRule::BestTracked;
  r = run(net, irs, c, SeedBundle::derive(7, 0));
  const auto best = std::max_element(r.trace.begin(), r.trace.end(),
                                     [](const auto& a, const auto& b) { return a.sumrate_ma < b.sumrate_ma; });
  CHECK(r.selected_t == best->t);
  CHECK(r.theta_out == best->theta);
}

TEST_CASE("oracle gaps are tracked on the cadence") {
  const NetworkConfig net = unit_network(2, 2, 8);
  const IrsModel irs(Parametrization::IdealPhase, 8);
  IzosgaConfig c = small_config(20);
  c.gap_cadence = 5;
  c.gap.reference_budget = 50;
  c.gap.restarts = 1;
  const RunResult r = run(net, irs, c, SeedBundle::derive(8, 0));
  CHECK(r.ledger.count() == 5);  // t = 0, 5, 10, 15, 20
  CHECK(r.ledger.skipped() == 16);
  for (const auto& rec : r.trace) CHECK(rec.gap_estimate.has_value() == (rec.t % 5 == 0));
  CHECK(r.ledger.mean() == doctest::Approx(r.ledger.recomputed_mean()).epsilon(1e-14));
}

TEST_CASE("a non-finite state of nature surfaces as a numerical error") {
  const NetworkConfig net = unit_network(2, 2, 8);
  const IrsModel irs(Parametrization::IdealPhase, 8);
  const ChannelModel model(net, net.geometry.user_positions);
  OmegaStream stream(model, 9);
  int calls = 0;
  auto source = [&] {
    StateOfNature s = stream.next();
    if (++calls == 4) s.direct(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
    return s;
  };
  CHECK_THROWS_AS(run(model, irs, small_config(10), SeedBundle::derive(9, 0), source), NumericalError);
}

TEST_CASE("invalid configurations are rejected") {
  const NetworkConfig net = unit_network(2, 2, 8);
  IzosgaConfig c = small_config(5);
  c.step_size = -1.0;
  CHECK_THROWS_AS(run(net, IrsModel(Parametrization::IdealPhase, 8), c, SeedBundle::derive(1, 0)), ConfigError);
  CHECK_THROWS_AS(run(net, IrsModel(Parametrization::IdealPhase, 4), small_config(5), SeedBundle::derive(1, 0)),
                  ConfigError);
}

TEST_CASE("seed bundles separate streams and replications") {
  const SeedBundle a = SeedBundle::derive(1, 0), b = SeedBundle::derive(1, 1), c = SeedBundle::derive(1, 0);
  CHECK(a.omega == c.omega);
  CHECK(a.omega != b.omega);
  CHECK(a.omega != a.probe);
  CHECK(a.geometry != a.init);
}
