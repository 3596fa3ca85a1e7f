#include "izosga/harness/properties.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>

#include "izosga/channel.hpp"
#include "izosga/diagnostics.hpp"
#include "izosga/sumrate.hpp"
#include "izosga/wmmse.hpp"
#include "izosga/zo_gradient.hpp"

namespace izosga::harness {

namespace {

std::string printf_string(const char* fmt, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c);
  return buf;
}

PropertyResult timed(const std::string& name, const std::function<void(PropertyResult&)>& body) {
  PropertyResult r;
  r.name = name;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

CMat gaussian_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  CMat m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

NetworkConfig random_network(std::mt19937_64& rng, Index m, Index k) {
  NetworkConfig c = make_network(m, k, 1, uniform(rng, 0.5, 10.0), 1.0);
  for (Index i = 0; i < k; ++i) {
    c.noise_variances[i] = uniform(rng, 0.05, 1.0);
    c.sumrate_weights[i] = uniform(rng, 0.5, 2.0);
  }
  return c;
}

CMat scaled_to_power(CMat w, double power) { return w * std::sqrt(power / w.squaredNorm()); }

// Probabilists' Gauss-Hermite rule by Golub-Welsch: nodes and weights summing to 1.
void gauss_hermite(int n, RVec& nodes, RVec& weights) {
  RMat jacobi = RMat::Zero(n, n);
  for (int i = 1; i < n; ++i) jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(static_cast<double>(i));
  Eigen::SelfAdjointEigenSolver<RMat> es(jacobi);
  nodes = es.eigenvalues();
  weights = es.eigenvectors().row(0).transpose().array().square();
}

}  // namespace

PropertyResult check_cogradient(int instances, int directions, std::uint64_t seed) {
  return timed("cogradient_vs_finite_difference", [&](PropertyResult& r) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int n = 0; n < instances; ++n) {
      const Index m = 1 + static_cast<Index>(rng() % 4), k = 1 + static_cast<Index>(rng() % 4);
      const NetworkConfig cfg = random_network(rng, m, k);
      const CMat w = scaled_to_power(gaussian_matrix(rng, m, k), cfg.power_budget);
      EffectiveChannel ch{gaussian_matrix(rng, m, k), 0};
      const CVec g = cogradient(w, ch, cfg);
      auto f_along = [&](const CMat& dz, double t) {
        EffectiveChannel p{ch.h + t * dz, 0};
        return sumrate(w, p, cfg).value;
      };
      for (int d = 0; d < directions; ++d) {
        const CMat dz = gaussian_matrix(rng, m, k);
        const Eigen::Map<const CVec> dzv(dz.data(), dz.size());
        const double analytic = 2.0 * g.dot(dzv).real();  // dot conjugates g
        auto central = [&](double h) { return (f_along(dz, h) - f_along(dz, -h)) / (2.0 * h); };
        const double h = 1e-3;
        const double fd = (4.0 * central(h / 2) - central(h)) / 3.0;
        worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-12));
      }
    }
    r.passed = worst < 1e-6;
    r.detail = printf_string("max relative error %.3e over %.0f directional checks", worst,
                             static_cast<double>(instances) * directions);
  });
}

PropertyResult check_zo_affine(long draws, std::uint64_t seed) {
  return timed("zo_estimator_affine_channel", [&](PropertyResult& r) {
    std::mt19937_64 rng(seed);
    const Index m = 2, k = 2, s = 16;
    const double mu = 1e-4;
    const CMat b_mat = gaussian_matrix(rng, m * k, s);
    const CVec b_vec = gaussian_matrix(rng, m * k, 1);
    const CVec g = gaussian_matrix(rng, m * k, 1);
    RVec theta(s);
    for (Index i = 0; i < s; ++i) theta[i] = uniform(rng, -1.0, 1.0);
    auto channel = [&](const RVec& x) {
      CVec v = b_mat * x.cast<Complex>() + b_vec;
      return EffectiveChannel{Eigen::Map<const CMat>(v.data(), m, k), 7};
    };
    const RVec exact = 2.0 * (b_mat.real().transpose() * g.real() + b_mat.imag().transpose() * g.imag());
    RVec sum = RVec::Zero(s);
    std::mt19937_64 probe_rng(seed ^ 0x5a5a5a5aULL);
    for (long i = 0; i < draws; ++i) {
      const RVec u = draw_probe(probe_rng, s);
      sum += quasi_gradient(channel(theta + mu * u), channel(theta - mu * u), u, mu, g);
    }
    const RVec mean = sum / static_cast<double>(draws);
    const double cosine = mean.dot(exact) / (mean.norm() * exact.norm());
    const double norm_err = std::abs(mean.norm() - exact.norm()) / exact.norm();
    r.passed = cosine > 0.99 && norm_err < 0.03;
    r.detail = printf_string("cosine %.5f, norm error %.3f%% over %.0f draws", cosine, 100 * norm_err,
                             static_cast<double>(draws));
  });
}

PropertyResult check_zo_bias(std::uint64_t seed) {
  return timed("zo_estimator_bias_vs_smoothing", [&](PropertyResult& r) {
    std::mt19937_64 rng(seed);
    const Index m = 2, k = 2, s = 8;
    StateOfNature omega{gaussian_matrix(rng, s, m), gaussian_matrix(rng, s, k), gaussian_matrix(rng, m, k), 11};
    const IrsModel irs(Parametrization::IdealPhase, s);
    const CVec g = gaussian_matrix(rng, m * k, 1);
    RVec theta(s);
    for (Index i = 0; i < s; ++i) theta[i] = uniform(rng, -kPi, kPi);

    // d/dtheta_s of 2 Re(g^H vec H): H(m,k) gets j e^{j theta_s} conj(G(s,m)) Hr(s,k).
    RVec exact(s);
    for (Index i = 0; i < s; ++i) {
      Complex acc = 0.0;
      for (Index kk = 0; kk < k; ++kk)
        for (Index mm = 0; mm < m; ++mm)
          acc += std::conj(g[kk * m + mm]) * Complex(0, 1) * std::polar(1.0, theta[i]) *
                 std::conj(omega.ap_irs(i, mm)) * omega.irs_user(i, kk);
      exact[i] = 2.0 * acc.real();
    }

    RVec nodes, weights;
    gauss_hermite(48, nodes, weights);
    // Cross terms vanish in expectation (odd in U_r), so E[D]_r only needs U = x e_r.
    auto expected_d = [&](double mu, const std::function<ProbePair(const RVec&)>& probes) {
      RVec e = RVec::Zero(s);
      for (Index c = 0; c < s; ++c)
        for (Index q = 0; q < nodes.size(); ++q) {
          RVec u = RVec::Zero(s);
          u[c] = nodes[q];
          const ProbePair p = probes(u);
          e[c] += weights[q] * quasi_gradient(p.plus, p.minus, u, mu, g)[c];
        }
      return e;
    };

    std::vector<double> bias;
    for (double mu : {0.4, 0.2, 0.1, 0.05}) {
      const RVec e = expected_d(mu, [&](const RVec& u) { return channel_probe_pair(irs, theta, omega, u, mu); });
      bias.push_back((e - exact).norm());
    }
    double min_ratio = 1e300;
    for (std::size_t i = 1; i < bias.size(); ++i) min_ratio = std::min(min_ratio, bias[i - 1] / bias[i]);

    // Quadratic map z(x) = b + B x + Q(x, x): the central difference is exact.
    const CMat b_lin = gaussian_matrix(rng, m * k, s);
    std::vector<CMat> quad;
    for (Index i = 0; i < m * k; ++i) quad.push_back(gaussian_matrix(rng, s, s));
    auto qchannel = [&](const RVec& x) {
      CVec v = b_lin * x.cast<Complex>();
      for (Index i = 0; i < m * k; ++i) v[i] += x.cast<Complex>().dot(quad[i] * x.cast<Complex>());
      return EffectiveChannel{Eigen::Map<const CMat>(v.data(), m, k), 3};
    };
    RVec qexact(s);
    for (Index c = 0; c < s; ++c) {
      CVec dz = b_lin.col(c);
      for (Index i = 0; i < m * k; ++i)
        dz[i] += (quad[i].row(c) * theta.cast<Complex>())(0) + (quad[i].col(c).transpose() * theta.cast<Complex>())(0);
      qexact[c] = 2.0 * (dz.real().dot(g.real()) + dz.imag().dot(g.imag()));
    }
    const double mu_q = 0.3;
    const RVec qe = expected_d(mu_q, [&](const RVec& u) {
      return ProbePair{qchannel(theta + mu_q * u), qchannel(theta - mu_q * u), 0};
    });
    const double qbias = (qe - qexact).norm() / qexact.norm();

    r.passed = min_ratio >= 3.5 && qbias < 1e-10;
    r.detail = printf_string("phase map: min bias reduction per halving %.3fx; quadratic map relative bias %.1e",
                             min_ratio, qbias);
  });
}

PropertyResult check_probe_collinearity(int draws, std::uint64_t seed) {
  return timed("quasi_gradient_collinear_with_probe", [&](PropertyResult& r) {
    std::mt19937_64 rng(seed);
    const Index m = 3, k = 2, s = 32;
    const IrsModel irs(Parametrization::IdealPhase, s);
    double worst = 0.0;
    for (int n = 0; n < draws; ++n) {
      StateOfNature omega{gaussian_matrix(rng, s, m), gaussian_matrix(rng, s, k), gaussian_matrix(rng, m, k),
                          static_cast<std::uint64_t>(n)};
      const CVec g = gaussian_matrix(rng, m * k, 1);
      RVec theta(s);
      for (Index i = 0; i < s; ++i) theta[i] = uniform(rng, -kPi, kPi);
      const RVec u = draw_probe(rng, s);
      const ProbePair p = channel_probe_pair(irs, theta, omega, u, 1e-3);
      const RVec d = quasi_gradient(p.plus, p.minus, u, 1e-3, g);
      if (d.norm() == 0.0) continue;
      const double cosine = std::abs(d.dot(u)) / (d.norm() * u.norm());
      const RVec residual = d - (d.dot(u) / u.squaredNorm()) * u;
      worst = std::max({worst, 1.0 - cosine, residual.norm() / d.norm()});
    }
    r.passed = worst <= 1e-12;
    r.detail = printf_string("max deviation from collinearity %.2e", worst);
  });
}

PropertyResult check_wmmse_ascent(int instances, std::uint64_t seed) {
  return timed("wmmse_monotone_ascent", [&](PropertyResult& r) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    long sweeps = 0;
    for (int n = 0; n < instances; ++n) {
      const Index m = 1 + static_cast<Index>(rng() % 6), k = 1 + static_cast<Index>(rng() % 6);
      const NetworkConfig cfg = random_network(rng, m, k);
      const EffectiveChannel ch{gaussian_matrix(rng, m, k), 0};
      OracleConfig oc;
      oc.max_iterations = 40;
      oc.init = (n % 2 == 0) ? WmmseInit::Random : WmmseInit::Mrt;
      oc.random_seed = rng();
      const OracleReport rep = wmmse_solve(ch, cfg, oc);
      for (std::size_t i = 1; i < rep.sumrate_trace.size(); ++i) {
        const double prev = rep.sumrate_trace[i - 1];
        worst = std::max(worst, (prev - rep.sumrate_trace[i]) / std::max(std::abs(prev), 1e-300));
        ++sweeps;
      }
      if (!rep.precoder.feasible()) worst = std::max(worst, 1.0);
    }
    r.passed = worst <= 1e-9;
    r.detail = printf_string("largest relative decrease %.2e over %.0f sweeps", std::max(worst, 0.0),
                             static_cast<double>(sweeps));
  });
}

PropertyResult check_wmmse_single_user(int instances, std::uint64_t seed) {
  return timed("wmmse_single_user_closed_form", [&](PropertyResult& r) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int n = 0; n < instances; ++n) {
      const Index m = 1 + static_cast<Index>(rng() % 8);
      const NetworkConfig cfg = random_network(rng, m, 1);
      const EffectiveChannel ch{gaussian_matrix(rng, m, 1), 0};
      OracleConfig oc;
      oc.max_iterations = 300;
      oc.init = (n % 2 == 0) ? WmmseInit::Random : WmmseInit::Mrt;
      oc.random_seed = rng();
      const double optimum = cfg.sumrate_weights[0] *
                             std::log2(1.0 + cfg.power_budget * ch.h.squaredNorm() / cfg.noise_variances[0]);
      const double got = wmmse_solve(ch, cfg, oc).achieved_sumrate;
      worst = std::max(worst, std::abs(got - optimum) / optimum);
    }
    r.passed = worst <= 1e-8;
    r.detail = printf_string("max relative deviation %.2e", worst);
  });
}

PropertyResult check_wmmse_bruteforce(int instances, std::uint64_t seed) {
  return timed("wmmse_vs_multistart_bruteforce", [&](PropertyResult& r) {
    std::mt19937_64 rng(seed);
    const Index m = 2, k = 2;
    double worst = 1e300, worst_single = 1e300;
    for (int n = 0; n < instances; ++n) {
      const NetworkConfig cfg = random_network(rng, m, k);
      const EffectiveChannel ch{gaussian_matrix(rng, m, k), 0};
      const double radius = std::sqrt(cfg.power_budget);

      // Finite-difference projected ascent over the 8 real coordinates of W.
      auto value = [&](const RVec& x) {
        CMat w(m, k);
        for (Index i = 0; i < m * k; ++i) w.data()[i] = Complex(x[2 * i], x[2 * i + 1]);
        return sumrate(w, ch, cfg).value;
      };
      auto project = [&](RVec x) {
        const double nrm = x.norm();
        return nrm > radius ? RVec(x * (radius / nrm)) : x;
      };
      double best = -1e300;
      std::normal_distribution<double> nd(0.0, 1.0);
      for (int start = 0; start < 50; ++start) {
        RVec x(2 * m * k);
        for (Index i = 0; i < x.size(); ++i) x[i] = nd(rng);
        x = x * (radius / x.norm());
        double fx = value(x), step = 0.1 * radius;
        for (int it = 0; it < 400 && step > 1e-12; ++it) {
          RVec grad(x.size());
          for (Index i = 0; i < x.size(); ++i) {
            RVec xp = x, xm = x;
            xp[i] += 1e-7;
            xm[i] -= 1e-7;
            grad[i] = (value(xp) - value(xm)) / 2e-7;
          }
          for (;;) {
            const RVec cand = project(x + step * grad / std::max(grad.norm(), 1e-300));
            const double fc = value(cand);
            if (fc > fx) {
              x = cand;
              fx = fc;
              step *= 1.5;
              break;
            }
            step *= 0.5;
            if (step < 1e-12) break;
          }
        }
        best = std::max(best, fx);
      }
      // Multi-start WMMSE (MRT plus random inits); a single MRT start can stop
      // at a local maximum on a few percent of instances.
      GapConfig gc;
      gc.reference_budget = 500;
      gc.restarts = 8;
      gc.seed = rng();
      const OracleReport multi = reference_solve(ch, cfg, gc);
      OracleConfig oc;
      oc.max_iterations = 500;
      const double single = wmmse_solve(ch, cfg, oc).achieved_sumrate;
      worst = std::min(worst, multi.achieved_sumrate / best);
      worst_single = std::min(worst_single, single / best);
    }
    r.passed = worst >= 0.99;
    r.detail = printf_string("worst multi-start WMMSE / brute-force ratio %.5f (single MRT start %.5f) over %.0f instances",
                             worst, worst_single, static_cast<double>(instances));
  });
}

PropertyResult check_link_count() {
  return timed("cascaded_link_count_6_32_1000", [&](PropertyResult& r) {
    const NetworkConfig cfg = make_network(6, 32, 1000, 1.0, 1e-11);
    const auto n = cfg.cascaded_link_count();
    r.passed = n == 38192;
    r.detail = "S*M + S*K + M*K = " + std::to_string(n);
  });
}

PropertyResult check_moreau_quadratic(std::uint64_t seed) {
  return timed("moreau_quadratic_closed_form", [&](PropertyResult& r) {
    std::mt19937_64 rng(seed);
    const Index s = 8;
    const double lambda = 2.0;
    RVec peak(s), center(s);
    for (Index i = 0; i < s; ++i) {
      peak[i] = uniform(rng, -5.0, 5.0);
      center[i] = uniform(rng, -5.0, 5.0);
    }
    const ParamBox box{RVec::Constant(s, -100.0), RVec::Constant(s, 100.0)};
    SmoothObjective f{[&](const RVec& x) { return -0.5 * (x - peak).squaredNorm(); },
                      [&](const RVec& x) { return RVec(peak - x); }};
    MoreauConfig cfg;
    cfg.lambda = lambda;
    cfg.prox_iterations = 500;
    const MoreauEstimate est = moreau_grad_norm(f, center, box, cfg);
    const double analytic = lambda * (center - peak).norm() / (1.0 + lambda);
    const double err = std::abs(est.value - analytic) / analytic;
    r.passed = err < 0.05;
    r.detail = printf_string("estimate %.6f vs analytic %.6f (%.2e relative)", est.value, analytic, err);
  });
}

std::vector<PropertyResult> property_suite(bool quick) {
  return {
      check_cogradient(quick ? 20 : 100, quick ? 5 : 10, 101),
      check_zo_affine(quick ? 50000 : 100000, 202),
      check_zo_bias(303),
      check_probe_collinearity(quick ? 200 : 1000, 404),
      check_wmmse_ascent(quick ? 50 : 500, 505),
      check_wmmse_single_user(quick ? 20 : 100, 606),
      check_wmmse_bruteforce(quick ? 3 : 20, 707),
      check_link_count(),
      check_moreau_quadratic(808),
  };
}

}  // namespace izosga::harness
