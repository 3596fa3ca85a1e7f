#include "doctest.h"

#include <cmath>

#include "izosga/sumrate.hpp"
#include "support.hpp"

using namespace izosga;
using namespace testing_support;

namespace {

// Straight-from-definition sumrate in long double.
long double reference_sumrate(const CMat& w, const CMat& h, const NetworkConfig& cfg) {
  using LC = std::complex<long double>;
  long double total = 0.0L;
  for (Index k = 0; k < h.cols(); ++k) {
    long double signal = 0.0L, interference = 0.0L;
    for (Index j = 0; j < w.cols(); ++j) {
      LC a = 0.0L;
      for (Index m = 0; m < h.rows(); ++m)
        a += std::conj(LC(h(m, k).real(), h(m, k).imag())) * LC(w(m, j).real(), w(m, j).imag());
      (j == k ? signal : interference) += std::norm(a);
    }
    const long double sinr = signal / (interference + cfg.noise_variances[k]);
    total += cfg.sumrate_weights[k] * std::log2(1.0L + sinr);
  }
  return total;
}

}  // namespace

TEST_CASE("SINR scalar examples") {
  CMat w(1, 2);
  w << 1.0, 1.0;
  const CVec h = CVec::Ones(1);
  CHECK(sinr(w, h, 0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

  CMat w0 = w;
  w0(0, 0) = 0.0;
  CHECK(sinr(w0, h, 0, 1.0) == 0.0);

  std::mt19937_64 rng(1);
  const CMat single = gaussian(rng, 3, 1);
  const CVec hh = gaussian(rng, 3, 1);
  CHECK(sinr(single, hh, 0, 0.3) == doctest::Approx(std::norm(hh.dot(single.col(0))) / 0.3).epsilon(1e-13));
}

TEST_CASE("sumrate closed forms") {
  std::mt19937_64 rng(2);
  NetworkConfig cfg = make_network(3, 1, 1, 2.5, 0.4);
  const EffectiveChannel ch{gaussian(rng, 3, 1), 0};
  CHECK(sumrate(CMat::Zero(3, 1), ch, cfg).value == 0.0);
  const CMat mrt = std::sqrt(cfg.power_budget) * ch.h / ch.h.norm();
  CHECK(sumrate(mrt, ch, cfg).value ==
        doctest::Approx(std::log2(1.0 + 2.5 * ch.h.squaredNorm() / 0.4)).epsilon(1e-13));
}

TEST_CASE("sumrate matches an extended-precision re-evaluation") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 50; ++n) {
    const NetworkConfig cfg = random_network(rng, 2, 2);
    const CMat w = full_power(gaussian(rng, 2, 2), cfg.power_budget);
    const EffectiveChannel ch{gaussian(rng, 2, 2), 0};
    const double got = sumrate(w, ch, cfg).value;
    const long double ref = reference_sumrate(w, ch.h, cfg);
    CHECK(std::abs(static_cast<long double>(got) - ref) <= 1e-12L * std::max(1.0L, std::abs(ref)));
  }
}

TEST_CASE("co-gradient of the zero precoder vanishes") {
  std::mt19937_64 rng(4);
  const NetworkConfig cfg = random_network(rng, 3, 3);
  const EffectiveChannel ch{gaussian(rng, 3, 3), 0};
  const CVec g = cogradient(CMat::Zero(3, 3), ch, cfg);
  CHECK(g.size() == 9);
  CHECK(g.norm() == 0.0);
}

TEST_CASE("co-gradient single user, scalar closed form") {
  // F = alpha log2(1 + |h^* w|^2 / s2); dF/dh^* = alpha/ln2 * w w^* h / (s2 + |h^* w|^2).
  NetworkConfig cfg = make_network(1, 1, 1, 1.0, 0.7);
  cfg.sumrate_weights[0] = 1.3;
  const Complex h(0.4, -1.1), w(0.8, 0.25);
  CMat wm(1, 1);
  wm(0, 0) = w;
  const EffectiveChannel ch{CMat::Constant(1, 1, h), 0};
  const Complex expect = 1.3 / kLn2 * w * std::conj(w) * h / (0.7 + std::norm(std::conj(h) * w));
  const CVec g = cogradient(wm, ch, cfg);
  CHECK(std::abs(g[0] - expect) < 1e-14);
}

TEST_CASE("co-gradient satisfies the finite-difference identity") {
  std::mt19937_64 rng(5);
  const double tau = 1e-6;
  double worst = 0.0;
  for (int n = 0; n < 100; ++n) {
    const Index m = 1 + static_cast<Index>(rng() % 4), k = 1 + static_cast<Index>(rng() % 4);
    const NetworkConfig cfg = random_network(rng, m, k);
    const CMat w = full_power(gaussian(rng, m, k), cfg.power_budget);
    const EffectiveChannel ch{gaussian(rng, m, k), 0};
    const CVec g = cogradient(w, ch, cfg);
    const double f = sumrate(w, ch, cfg).value;
    for (int d = 0; d < 10; ++d) {
      const CMat delta = gaussian(rng, m, k);
      const Eigen::Map<const CVec> dv(delta.data(), delta.size());
      const EffectiveChannel plus{ch.h + tau * delta, 0}, minus{ch.h - tau * delta, 0};
      const double fd = (sumrate(w, plus, cfg).value - sumrate(w, minus, cfg).value) / (2 * tau);
      const double analytic = 2.0 * g.dot(dv).real();
      worst = std::max(worst, std::abs(analytic - fd) / (std::abs(f) + 1.0));
    }
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("SINR is invariant to joint scaling of channel and noise amplitude") {
  std::mt19937_64 rng(6);
  const CMat w = gaussian(rng, 4, 3);
  const CMat h = gaussian(rng, 4, 3);
  const double c = 3.7;
  for (Index k = 0; k < 3; ++k) {
    const double a = sinr(w, h.col(k), k, 0.2);
    const double b = sinr(w, c * h.col(k), k, 0.2 * c * c);
    CHECK(b == doctest::Approx(a).epsilon(1e-13));
  }
}

TEST_CASE("more noise strictly lowers SINR; sumrate is nonnegative") {
  std::mt19937_64 rng(7);
  const CMat w = gaussian(rng, 2, 2);
  const CVec h = gaussian(rng, 2, 1);
  CHECK(sinr(w, h, 1, 0.5) < sinr(w, h, 1, 0.4));
  for (int n = 0; n < 20; ++n) {
    const NetworkConfig cfg = random_network(rng, 3, 2);
    const EffectiveChannel ch{gaussian(rng, 3, 2), 0};
    const auto v = sumrate(gaussian(rng, 3, 2), ch, cfg);
    CHECK(v.value >= 0.0);
    CHECK(v.per_user_sinr.size() == 2);
  }
}

TEST_CASE("precoder feasibility has a relative slack of 1e-9") {
  Precoder p{CMat::Constant(2, 2, Complex(0.5, 0.0)), 1.0};
  CHECK(p.power() == doctest::Approx(1.0));
  CHECK(p.feasible());
  p.w *= 1.0 + 1e-8;
  CHECK_FALSE(p.feasible());
}
