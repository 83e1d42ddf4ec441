#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "hprec/types.hpp"

namespace hprec {

// Wideband clustered link between a BS ULA and an MS ULA.
struct ChannelConfig {
  int n_bs = 32;
  int n_ms = 16;
  int k_subcarriers = 512;
  int cp_length = 128;
  int n_clusters = 6;
  int rays_per_cluster = 5;
  // Scale parameter b of the per-ray Laplacian angle offset, in degrees.
  double angle_spread_deg = 10.0;
  // Only delay / sample_period matters, so 1.0 is a fine normalization.
  double sample_period = 1.0;

  // Throws ConfigInvalid.
  void validate() const;

  bool operator==(const ChannelConfig&) const = default;
};

struct Ray {
  cd gain;
  double delay = 0.0;  // seconds, in [0, cp_length * sample_period]
  double aod = 0.0;    // BS side, radians
  double aoa = 0.0;    // MS side, radians

  bool operator==(const Ray&) const = default;
};

struct PathSet {
  std::vector<std::vector<Ray>> clusters;

  std::size_t ray_count() const;
  bool operator==(const PathSet&) const = default;
};

struct ChannelRealization {
  std::vector<CMatrix> h;  // K matrices, each n_ms x n_bs
  PathSet source;
  ChannelConfig config;

  int subcarriers() const { return static_cast<int>(h.size()); }
  int n_ms() const { return config.n_ms; }
  int n_bs() const { return config.n_bs; }
};

// Half-wavelength ULA response, entry m = exp(j*pi*m*sin(angle)), unit modulus.
CVector ula_response(double angle, int n);

PathSet sample_paths(const ChannelConfig& config, Rng& rng);

// H[k] = sqrt(n_bs*n_ms/(L*R)) * sum_rays alpha * exp(-j*2*pi*k*tau/(K*Ts))
//        * a_ms(aoa) a_bs(aod)^*, with a_* the 1/sqrt(n)-normalized responses.
ChannelRealization freq_response(const PathSet& paths, const ChannelConfig& config);

// Convenience: seed an engine, sample paths, synthesize.
ChannelRealization generate_channel(const ChannelConfig& config, std::uint64_t seed);

// Debug dump; each H[k] is a flat row-major list of interleaved re/im pairs.
nlohmann::json channel_to_json(const ChannelRealization& channel);
void write_channel_json(const ChannelRealization& channel, const std::filesystem::path& path);

}  // namespace hprec
