// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--out DIR] [--jobs J]
//
// Desk-scale experiments use master seed 1 and are shared between criteria
// 4-9. The decision rules below were fixed before the runs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "izosga/diagnostics.hpp"
#include "izosga/harness/experiment.hpp"
#include "izosga/harness/properties.hpp"
#include "izosga/harness/stats.hpp"
#include "izosga/harness/trace_io.hpp"

using namespace izosga;
using namespace izosga::harness;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr int kReps = 20;
constexpr int kMoreauReps = 10;
constexpr double kAlpha = 0.05;

std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  int id;
  bool passed;
  std::string detail;
};

std::vector<Outcome> outcomes;

void report(int id, bool passed, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, passed ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  outcomes.push_back({id, passed, detail});
}

std::string describe(const std::vector<PropertyResult>& rs) {
  std::string s;
  for (const auto& r : rs)
    s += fmt("%s[%s %.1fs: %s] ", s.empty() ? "" : "", r.name.c_str(), r.seconds, r.detail.c_str());
  return s;
}

bool all_passed(const std::vector<PropertyResult>& rs) {
  return std::all_of(rs.begin(), rs.end(), [](const auto& r) { return r.passed; });
}

double total_seconds(const std::vector<PropertyResult>& rs) {
  double s = 0;
  for (const auto& r : rs) s += r.seconds;
  return s;
}

std::string sign_str(const SignTest& s) {
  return fmt("%d+/%d- p=%.4f", s.positives, s.negatives, s.p_value);
}

const CurveOutput& curve(const ExperimentOutput& out, const std::string& name) {
  for (const auto& c : out.curves)
    if (c.name == name) return c;
  throw std::runtime_error("missing curve " + name);
}

std::vector<double> difference(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

// Per-replication mean raw sumrate over [from, to).
std::vector<double> window_means(const std::vector<std::vector<TraceRow>>& traces, long from, long to) {
  std::vector<double> out;
  for (const auto& tr : traces) {
    double sum = 0;
    long n = 0;
    for (const TraceRow& r : tr)
      if (r.t >= from && r.t < to) sum += r.sumrate, ++n;
    out.push_back(sum / static_cast<double>(n));
  }
  return out;
}

std::vector<std::vector<TraceRow>> load_traces(const fs::path& dir, const CurveOutput& c) {
  std::vector<std::vector<TraceRow>> out;
  for (const auto& f : c.trace_files) out.push_back(read_trace_csv((dir / f).string()));
  return out;
}

ResolvedConfig desk_config(std::vector<int> budgets, int jobs) {
  ResolvedConfig c = resolve({});
  c.experiment.seed = kSeed;
  c.experiment.replications = kReps;
  c.experiment.jobs = jobs;
  c.experiment.budgets = std::move(budgets);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string out = "acceptance_out";
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  app.add_option("--out", out, "scratch directory for experiment artifacts");
  app.add_option("--jobs", jobs, "concurrent replications")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  const fs::path root(out);
  fs::create_directories(root);

  // 1. co-gradient
  {
    const std::vector<PropertyResult> rs{check_cogradient(100, 10, 101)};
    const double t = total_seconds(rs);
    report(1, all_passed(rs) && t < 10.0, describe(rs) + fmt("total %.1fs (limit 10s)", t));
  }

  // 2. ZO estimator
  {
    const std::vector<PropertyResult> rs{check_zo_affine(100000, 202), check_zo_bias(303)};
    const double t = total_seconds(rs);
    report(2, all_passed(rs) && t < 30.0, describe(rs) + fmt("total %.1fs (limit 30s)", t));
  }

  // 3. WMMSE
  {
    const std::vector<PropertyResult> rs{check_wmmse_ascent(500, 505), check_wmmse_single_user(100, 606),
                                         check_wmmse_bruteforce(20, 707)};
    const double t = total_seconds(rs);
    report(3, all_passed(rs) && t < 120.0, describe(rs) + fmt("total %.1fs (limit 120s)", t));
  }

  // 4. Oracle-gap ordering over 100 states at the desk network (replication 0
  // geometry, default theta). Gaps are taken against one multi-start
  // reference per state; budgets 1 > 5 and 5 > 20 by paired one-sided sign
  // tests at 0.025 each (95% jointly).
  {
    const auto t0 = std::chrono::steady_clock::now();
    const ResolvedConfig c = desk_config({1, 5, 20}, jobs);
    const SeedBundle seeds = SeedBundle::derive(kSeed, 0);
    const ChannelModel model(c.network, resolve_user_positions(c.network, seeds.geometry));
    const IrsModel irs = c.irs();
    OmegaStream stream(model, seeds.omega);
    const int budgets[3] = {1, 5, 20};
    std::vector<double> gaps[3];
    for (int i = 0; i < 100; ++i) {
      const EffectiveChannel ch = effective_channel(irs, irs.default_theta(), stream.next());
      GapConfig gc;
      gc.seed = mix_seed(seeds.gap, static_cast<std::uint64_t>(i));
      const double ref = reference_solve(ch, c.network, gc).achieved_sumrate;
      for (int b = 0; b < 3; ++b) {
        OracleConfig oc;
        oc.max_iterations = budgets[b];
        gaps[b].push_back(std::max(0.0, ref - wmmse_solve(ch, c.network, oc).achieved_sumrate));
      }
    }
    const SignTest s15 = sign_test_greater(gaps[0], gaps[1]);
    const SignTest s520 = sign_test_greater(gaps[1], gaps[2]);
    const double e1 = mean(gaps[0]), e5 = mean(gaps[1]), e20 = mean(gaps[2]);
    const double t = seconds_since(t0);
    const bool ok = e1 > e5 && e5 > e20 && s15.p_value < 0.025 && s520.p_value < 0.025 && t < 120.0;
    report(4, ok,
           fmt("eps_bar(1)=%.4g eps_bar(5)=%.4g eps_bar(20)=%.4g; 1>5: %s; 5>20: %s; %.1fs (limit 120s)", e1,
               e5, e20, sign_str(s15).c_str(), sign_str(s520).c_str(), t));
  }

  // Desk sweep shared by criteria 5-9.
  const auto sweep_start = std::chrono::steady_clock::now();
  const ResolvedConfig sweep_cfg = desk_config({1, 2, 3, 5, 10, 20}, jobs);
  const fs::path sweep_dir = root / "sweep";
  const ExperimentOutput sweep = execute(build_plan("sweep", sweep_cfg), sweep_cfg, sweep_dir.string(), true);
  const double sweep_seconds = seconds_since(sweep_start);

  auto final_ma = [&](const std::string& name) { return curve(sweep, name).final_ma; };

  // 5. Ordering baseline(1) < iZoSGA(1) < iZoSGA(5) on mean final moving
  // average, and |iZoSGA(5) - iZoSGA(20)| <= pooled standard error.
  {
    const auto base = final_ma("baseline_b1"), z1 = final_ma("izosga_b1"), z5 = final_ma("izosga_b5"),
               z20 = final_ma("izosga_b20");
    const double mb = mean(base), m1 = mean(z1), m5 = mean(z5), m20 = mean(z20);
    const double pse = pooled_standard_error(z5, z20);
    const bool order = mb < m1 && m1 < m5;
    const bool close = std::abs(m5 - m20) <= pse;
    std::string eps;
    for (int b : {1, 5, 20}) eps += fmt(" %d:%.4g", b, mean(curve(sweep, "izosga_b" + std::to_string(b)).epsilon_bar));
    report(5, order && close && sweep_seconds < 900.0,
           fmt("baseline=%.3f iZoSGA(1)=%.3f iZoSGA(5)=%.3f iZoSGA(20)=%.3f; ordering %s; |5-20|=%.3f vs pooled "
               "SE %.3f (%s); run-ledger eps_bar%s; sweep %.0fs (limit 900s)",
               mb, m1, m5, m20, order ? "holds" : "violated", std::abs(m5 - m20), pse,
               close ? "within" : "outside", eps.c_str(), sweep_seconds));
  }

  // 6. Budget threshold: the smallest swept budget whose mean final moving
  // average is within one pooled SE of iZoSGA(20). At every switch the mean raw
  // sumrate of the 200 iterations before and after is compared by a one-sided
  // sign test (drop = before > after) at 0.05.
  {
    const std::vector<int> swept{1, 2, 3, 5, 10, 20};
    const auto z20 = final_ma("izosga_b20");
    int threshold = 20;
    for (int b : swept) {
      const auto zb = final_ma("izosga_b" + std::to_string(b));
      if (mean(zb) >= mean(z20) - pooled_standard_error(zb, z20)) {
        threshold = b;
        break;
      }
    }
    const fs::path dir = root / "schedule";
    const ExperimentOutput sched = execute(build_plan("schedule", sweep_cfg), sweep_cfg, dir.string(), true);
    const long period = sweep_cfg.experiment.schedule_period, horizon = sweep_cfg.optimizer.horizon;

    auto switches = [&](const std::string& name, const std::vector<int>& budgets, bool& any_drop,
                        bool& drop_below) {
      const auto traces = load_traces(dir, curve(sched, name));
      std::string s;
      any_drop = drop_below = false;
      for (std::size_t k = 1; k < budgets.size() && static_cast<long>(k) * period < horizon; ++k) {
        const long at = static_cast<long>(k) * period;
        const auto before = window_means(traces, at - 200, at);
        const auto after = window_means(traces, at, std::min(at + 200, horizon + 1));
        const SignTest st = sign_test_greater(before, after);
        const bool drop = st.p_value < kAlpha;
        any_drop = any_drop || drop;
        if (budgets[k] < threshold) drop_below = drop_below || drop;
        s += fmt(" t=%ld %d->%d: %.3f->%.3f %s%s;", at, budgets[k - 1], budgets[k], mean(before), mean(after),
                 sign_str(st).c_str(), drop ? " DROP" : "");
      }
      return s;
    };
    bool a_drop = false, a_below = false, b_drop = false, b_below = false;
    const std::string sa = switches("schedule_a", sweep_cfg.experiment.schedule_a, a_drop, a_below);
    const std::string sb = switches("schedule_b", sweep_cfg.experiment.schedule_b, b_drop, b_below);
    report(6, !a_drop && b_below,
           fmt("threshold budget %d; schedule A%s schedule B%s A smooth: %s, B drop below threshold: %s", threshold,
               sa.c_str(), sb.c_str(), a_drop ? "no" : "yes", b_below ? "yes" : "no"));
  }

  // 7. Varactor at budget 10 against its random-capacitance baseline: sign
  // test at 0.05 and mean gain above two pooled SE. Its per-replication gain
  // is compared with the ideal-phase gain (izosga_b10 - baseline_b10, same
  // seeds): smaller mean and one-sided sign test at 0.05.
  ExperimentOutput varactor;
  {
    ResolvedConfig vc = sweep_cfg;
    vc.experiment.budgets = {10};
    const fs::path dir = root / "varactor";
    varactor = execute(build_plan("varactor", vc), vc, dir.string(), true);
    const auto v = curve(varactor, "varactor_b10").final_ma, vb = curve(varactor, "varactor_baseline_b10").final_ma;
    const auto gain_v = difference(v, vb);
    const auto gain_i = difference(final_ma("izosga_b10"), final_ma("baseline_b10"));
    const SignTest sv = sign_test_greater(v, vb);
    const double pse = pooled_standard_error(v, vb);
    const bool significant = sv.p_value < kAlpha && mean(gain_v) > 2.0 * pse;
    const SignTest sg = sign_test_greater(gain_i, gain_v);
    const bool smaller = mean(gain_v) < mean(gain_i) && sg.p_value < kAlpha;
    report(7, significant && smaller,
           fmt("varactor %.3f vs baseline %.3f (gain %.3f, 2 pooled SE %.3f, %s); ideal-phase gain %.3f; ideal > "
               "varactor gain %s",
               mean(v), mean(vb), mean(gain_v), 2.0 * pse, sign_str(sv).c_str(), mean(gain_i),
               sign_str(sg).c_str()));
  }

  // 8. Closed-form quadratic, then the Moreau estimate at theta_0 and at
  // theta_T of iZoSGA(10) on replications 0-9: start > end by one-sided sign
  // test at 0.05. Samples and geometry follow `izosga diagnose`.
  {
    const PropertyResult q = check_moreau_quadratic(808);
    std::vector<double> start, end;
    const IrsModel irs = sweep_cfg.irs();
    for (int r = 0; r < kMoreauReps; ++r) {
      const SeedBundle seeds = SeedBundle::derive(kSeed, static_cast<std::uint64_t>(r));
      const ChannelModel model(sweep_cfg.network, resolve_user_positions(sweep_cfg.network, seeds.geometry));
      const std::uint64_t sample_seed = mix_seed(seeds.gap, 0x6d6f7265ULL);
      char name[32];
      std::snprintf(name, sizeof name, "theta_%03d.txt", r);
      const RVec theta_t = read_theta((sweep_dir / "izosga_b10" / name).string());
      start.push_back(moreau_grad_norm(model, irs, irs.default_theta(), sweep_cfg.moreau, sample_seed).value);
      end.push_back(moreau_grad_norm(model, irs, theta_t, sweep_cfg.moreau, sample_seed).value);
    }
    const SignTest st = sign_test_greater(start, end);
    report(8, q.passed && st.p_value < kAlpha,
           fmt("quadratic: %s (%s); Moreau start %.4f -> end %.4f over %d reps, start > end %s", q.detail.c_str(),
               q.passed ? "ok" : "off", mean(start), mean(end), kMoreauReps, sign_str(st).c_str()));
  }

  // 9. Structure.
  {
    const PropertyResult links = check_link_count();
    const PropertyResult col = check_probe_collinearity(1000, 404);

    // every recorded iterate of one ideal-phase and one varactor run, plus
    // every returned theta on disk
    bool feasible = true;
    long checked = 0;
    for (auto kind : {Parametrization::IdealPhase, Parametrization::Varactor}) {
      const IrsModel irs(kind, sweep_cfg.network.num_irs_elements, sweep_cfg.circuit);
      IzosgaConfig opt = sweep_cfg.optimizer;
      opt.record_thetas = true;
      opt.gap_cadence = 0;
      if (kind == Parametrization::Varactor) opt.step_size = sweep_cfg.experiment.varactor_step_size;
      const RunResult r = run(sweep_cfg.network, irs, opt, SeedBundle::derive(kSeed, 0));
      for (const auto& rec : r.trace) feasible = feasible && irs.box().contains(rec.theta), ++checked;
    }
    for (const auto& [dir, kind] : {std::pair{sweep_dir, Parametrization::IdealPhase},
                                    std::pair{root / "varactor", Parametrization::Varactor}}) {
      const IrsModel irs(kind, sweep_cfg.network.num_irs_elements, sweep_cfg.circuit);
      for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.path().filename().string().rfind("theta_", 0) == 0)
          feasible = feasible && irs.box().contains(read_theta(e.path().string())), ++checked;
    }

    // manifest replay of a small baseline experiment
    ResolvedConfig rc = sweep_cfg;
    rc.experiment.replications = 3;
    rc.experiment.seed = 7;
    const fs::path src = root / "replay_src", dst = root / "replay_dst";
    fs::remove_all(dst);
    const ExperimentOutput first = execute(build_plan("baseline", rc), rc, src.string(), false);
    replay(first.manifest_path, dst.string());
    bool identical = true;
    long files = 0;
    for (const auto& e : fs::recursive_directory_iterator(src)) {
      if (!e.is_regular_file() || e.path().filename() == "manifest.json") continue;
      const fs::path other = dst / fs::relative(e.path(), src);
      identical = identical && fs::exists(other) && read_text(e.path().string()) == read_text(other.string());
      ++files;
    }
    report(9, links.passed && col.passed && feasible && identical,
           fmt("%s; %s; %ld thetas feasible: %s; replay %ld files byte-identical: %s", links.detail.c_str(),
               col.detail.c_str(), checked, feasible ? "yes" : "no", files, identical ? "yes" : "no"));
  }

  std::string text;
  int failed = 0;
  for (const Outcome& o : outcomes) {
    text += fmt("criterion %d: %s  ", o.id, o.passed ? "PASS" : "FAIL") + o.detail + "\n";
    failed += o.passed ? 0 : 1;
  }
  write_text((root / "acceptance_report.txt").string(), text);
  std::printf("%zu criteria, %d failed\n", outcomes.size(), failed);
  return failed == 0 ? 0 : 1;
}
