#include "hprec/channel.hpp"

#include <cmath>
#include <fstream>
#include <string>

#include "hprec/errors.hpp"

namespace hprec {

void ChannelConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw ConfigInvalid(std::string(name) + " must be >= 1");
  };
  positive(n_bs, "n_bs");
  positive(n_ms, "n_ms");
  positive(k_subcarriers, "k_subcarriers");
  positive(cp_length, "cp_length");
  positive(n_clusters, "n_clusters");
  positive(rays_per_cluster, "rays_per_cluster");
  if (cp_length >= k_subcarriers) throw ConfigInvalid("cp_length must be < k_subcarriers");
  if (!(angle_spread_deg > 0.0) || !std::isfinite(angle_spread_deg))
    throw ConfigInvalid("angle_spread_deg must be positive");
  if (!(sample_period > 0.0) || !std::isfinite(sample_period))
    throw ConfigInvalid("sample_period must be positive");
}

std::size_t PathSet::ray_count() const {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.size();
  return n;
}

CVector ula_response(double angle, int n) {
  CVector a(n);
  const double phase = kPi * std::sin(angle);
  for (int m = 0; m < n; ++m) a(m) = std::polar(1.0, phase * m);
  return a;
}

namespace {

// Inverse-CDF Laplacian draw with scale b; rejects the single point where the
// log would diverge.
double laplacian(Rng& rng, double scale) {
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  for (;;) {
    const double u = uni(rng);
    const double tail = 1.0 - 2.0 * std::abs(u);
    if (tail <= 0.0) continue;
    return -scale * std::copysign(1.0, u) * std::log(tail);
  }
}

}  // namespace

PathSet sample_paths(const ChannelConfig& config, Rng& rng) {
  config.validate();
  std::uniform_real_distribution<double> center(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> delay(0.0, config.cp_length * config.sample_period);
  // Unit-variance circular Gaussian: each quadrature has variance 1/2.
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  const double spread = config.angle_spread_deg * kPi / 180.0;

  PathSet paths;
  paths.clusters.resize(config.n_clusters);
  for (auto& cluster : paths.clusters) {
    const double aoa_center = center(rng);
    const double aod_center = center(rng);
    cluster.reserve(config.rays_per_cluster);
    for (int r = 0; r < config.rays_per_cluster; ++r) {
      Ray ray;
      ray.aoa = aoa_center + laplacian(rng, spread);
      ray.aod = aod_center + laplacian(rng, spread);
      const double re = gauss(rng);
      const double im = gauss(rng);
      ray.gain = cd(re, im);
      ray.delay = delay(rng);
      cluster.push_back(ray);
    }
  }
  return paths;
}

ChannelRealization freq_response(const PathSet& paths, const ChannelConfig& config) {
  config.validate();
  const int K = config.k_subcarriers;
  const double n_rays = static_cast<double>(paths.ray_count());
  if (n_rays == 0) throw InvalidArgument("path set is empty");
  const double gamma = std::sqrt(config.n_bs * config.n_ms / n_rays);
  const double norm = 1.0 / std::sqrt(static_cast<double>(config.n_bs) * config.n_ms);

  ChannelRealization out;
  out.config = config;
  out.source = paths;
  out.h.assign(K, CMatrix::Zero(config.n_ms, config.n_bs));

  for (const auto& cluster : paths.clusters) {
    for (const auto& ray : cluster) {
      // Rank-one spatial signature, shared by every subcarrier.
      const CMatrix outer = (ula_response(ray.aoa, config.n_ms) *
                             ula_response(ray.aod, config.n_bs).adjoint()) *
                            (gamma * norm);
      const double step = -2.0 * kPi * ray.delay / (K * config.sample_period);
      for (int k = 0; k < K; ++k) {
        out.h[k] += (ray.gain * std::polar(1.0, step * k)) * outer;
      }
    }
  }
  return out;
}

ChannelRealization generate_channel(const ChannelConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  return freq_response(sample_paths(config, rng), config);
}

nlohmann::json channel_to_json(const ChannelRealization& channel) {
  nlohmann::json j;
  j["n_ms"] = channel.n_ms();
  j["n_bs"] = channel.n_bs();
  j["k_subcarriers"] = channel.subcarriers();
  auto& h = j["h"] = nlohmann::json::array();
  for (const auto& hk : channel.h) {
    std::vector<double> flat;
    flat.reserve(2 * hk.size());
    for (Eigen::Index r = 0; r < hk.rows(); ++r) {
      for (Eigen::Index c = 0; c < hk.cols(); ++c) {
        flat.push_back(hk(r, c).real());
        flat.push_back(hk(r, c).imag());
      }
    }
    h.push_back(std::move(flat));
  }
  auto& rays = j["rays"] = nlohmann::json::array();
  for (std::size_t l = 0; l < channel.source.clusters.size(); ++l) {
    for (const auto& ray : channel.source.clusters[l]) {
      rays.push_back({{"cluster", l},
                      {"gain", {ray.gain.real(), ray.gain.imag()}},
                      {"delay", ray.delay},
                      {"aod", ray.aod},
                      {"aoa", ray.aoa}});
    }
  }
  return j;
}

void write_channel_json(const ChannelRealization& channel, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string());
  os << channel_to_json(channel).dump() << '\n';
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace hprec
