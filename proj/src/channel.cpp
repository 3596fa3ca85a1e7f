#include "izosga/channel.hpp"

#include <cmath>
#include <limits>

namespace izosga {

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::array<Index, 2> planar_layout(Index elements) {
  Index rows = static_cast<Index>(std::sqrt(static_cast<double>(elements)));
  while (rows > 1 && elements % rows != 0) --rows;
  return {rows, elements / rows};
}

CVec array_response(const std::vector<std::array<double, 2>>& grid, const Vec3& e1,
                    const Vec3& e2, const Vec3& dir) {
  const double c1 = e1.dot(dir);
  const double c2 = e2.dot(dir);
  CVec a(static_cast<Index>(grid.size()));
  for (std::size_t n = 0; n < grid.size(); ++n)
    a[static_cast<Index>(n)] = std::polar(1.0, kPi * (grid[n][0] * c1 + grid[n][1] * c2));
  return a;
}

namespace {

const Vec3 kAxisY{0.0, 1.0, 0.0};
const Vec3 kAxisZ{0.0, 0.0, 1.0};

std::vector<std::array<double, 2>> linear_grid(Index n) {
  std::vector<std::array<double, 2>> grid;
  for (Index m = 0; m < n; ++m) grid.push_back({static_cast<double>(m), 0.0});
  return grid;
}

std::vector<std::array<double, 2>> planar_grid(Index n) {
  const auto [rows, cols] = planar_layout(n);
  std::vector<std::array<double, 2>> grid;
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r)
      grid.push_back({static_cast<double>(r), static_cast<double>(c)});
  return grid;
}

double checked_distance(const Vec3& a, const Vec3& b, const char* what) {
  const double d = (a - b).norm();
  if (!(d > 1e-9) || !std::isfinite(d))
    throw ConfigError(std::string("coincident node positions: ") + what);
  return d;
}

struct RicianSplit {
  double los;
  double nlos;
};

RicianSplit rician_split(double kappa) {
  if (std::isinf(kappa)) return {1.0, 0.0};
  return {std::sqrt(kappa / (1.0 + kappa)), std::sqrt(1.0 / (1.0 + kappa))};
}

// Fills `out` with gain * (los_w * los + nlos_w * CN(0, 1)), column by column.
void draw_rician(CMat& out, const CMat& los, const Eigen::Ref<const RVec>& col_gain,
                 RicianSplit split, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  out.resize(los.rows(), los.cols());
  for (Index c = 0; c < los.cols(); ++c) {
    for (Index r = 0; r < los.rows(); ++r) {
      Complex v = split.los * los(r, c);
      if (split.nlos > 0.0) {
        const double re = normal(rng);
        const double im = normal(rng);
        v += split.nlos * Complex(re, im);
      }
      out(r, c) = col_gain[c] * v;
    }
  }
}

}  // namespace

std::vector<Vec3> resolve_user_positions(const NetworkConfig& config,
                                         std::uint64_t geometry_seed) {
  const Geometry& geo = config.geometry;
  if (geo.placement == UserPlacement::Fixed) return geo.user_positions;
  std::mt19937_64 rng(mix_seed(geometry_seed, 0x6e6f6465ULL));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec3> users;
  for (Index k = 0; k < config.num_users; ++k) {
    const double r = geo.disc_radius * std::sqrt(unit(rng));
    const double phi = 2.0 * kPi * unit(rng);
    users.push_back(geo.disc_center + Vec3(r * std::cos(phi), r * std::sin(phi), 0.0));
  }
  return users;
}

ChannelModel::ChannelModel(const NetworkConfig& config, std::vector<Vec3> user_positions)
    : config_(config), users_(std::move(user_positions)) {
  config_.validate();
  const Index M = config_.num_antennas;
  const Index K = config_.num_users;
  const Index S = config_.num_irs_elements;
  if (static_cast<Index>(users_.size()) != K)
    throw ConfigError("user position count does not match num_users");

  const Vec3& ap = config_.geometry.ap_position;
  const Vec3& irs = config_.geometry.irs_position;
  const auto ap_grid = linear_grid(M);
  const auto irs_grid = planar_grid(S);
  const ChannelParams& ch = config_.channel;

  const double d_ap_irs = checked_distance(ap, irs, "AP and IRS");
  ap_irs_gain_ = std::sqrt(ch.pathloss(ch.ap_irs, d_ap_irs));
  const Vec3 ap_to_irs = (irs - ap) / d_ap_irs;
  ap_irs_los_ = array_response(irs_grid, kAxisY, kAxisZ, -ap_to_irs) *
                array_response(ap_grid, kAxisY, kAxisZ, ap_to_irs).adjoint();

  irs_user_gain_.resize(K);
  direct_gain_.resize(K);
  irs_user_los_.resize(S, K);
  direct_los_.resize(M, K);
  for (Index k = 0; k < K; ++k) {
    const Vec3& u = users_[static_cast<std::size_t>(k)];
    const double d_ru = checked_distance(irs, u, "IRS and user");
    const double d_du = checked_distance(ap, u, "AP and user");
    irs_user_gain_[k] = std::sqrt(ch.pathloss(ch.irs_user, d_ru));
    direct_gain_[k] = std::sqrt(ch.pathloss(ch.ap_user, d_du));
    irs_user_los_.col(k) = array_response(irs_grid, kAxisY, kAxisZ, (u - irs) / d_ru);
    direct_los_.col(k) = array_response(ap_grid, kAxisY, kAxisZ, (u - ap) / d_du);
  }
}

StateOfNature ChannelModel::sample(std::uint64_t seed_tag) const {
  std::mt19937_64 rng(seed_tag);
  const ChannelParams& ch = config_.channel;
  StateOfNature omega;
  omega.seed_tag = seed_tag;
  const RVec g_gain = RVec::Constant(config_.num_antennas, ap_irs_gain_);
  draw_rician(omega.ap_irs, ap_irs_los_, g_gain, rician_split(ch.ap_irs.rician_factor), rng);
  draw_rician(omega.irs_user, irs_user_los_, irs_user_gain_,
              rician_split(ch.irs_user.rician_factor), rng);
  draw_rician(omega.direct, direct_los_, direct_gain_, rician_split(ch.ap_user.rician_factor),
              rng);
  return omega;
}

StateOfNature ChannelModel::without_irs_links(StateOfNature omega) {
  omega.irs_user.setZero();
  return omega;
}

StateOfNature OmegaStream::next() { return model_->sample(mix_seed(seed_, counter_++)); }

EffectiveChannel effective_channel(const CVec& reflection, const StateOfNature& omega) {
  const Index S = omega.ap_irs.rows();
  if (reflection.size() != S || omega.irs_user.rows() != S ||
      omega.direct.rows() != omega.ap_irs.cols() || omega.direct.cols() != omega.irs_user.cols())
    throw ConfigError("effective_channel: dimension mismatch");
  EffectiveChannel out;
  out.seed_tag = omega.seed_tag;
  out.h = omega.direct;
  out.h.noalias() += omega.ap_irs.adjoint() * (reflection.asDiagonal() * omega.irs_user);
  return out;
}

EffectiveChannel effective_channel(const IrsModel& irs, const RVec& theta,
                                   const StateOfNature& omega) {
  return effective_channel(irs.reflection(theta), omega);
}

}  // namespace izosga
