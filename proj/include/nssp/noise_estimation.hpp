// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Silence detection, the recursively smoothed noise magnitude spectrum, and
// the low-band tracking factor that rescales it between silence updates.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "nssp/error.hpp"
#include "nssp/signal_core.hpp"

namespace nssp {

inline constexpr double kEpsilon = 1e-12;

struct NoiseTrackerConfig {
  std::size_t n_init_silence = 8;
  double forgetting = 0.167;
  double mu = 0.1;
  double low_band_lo_hz = 0.0;
  double low_band_hi_hz = 50.0;
  double vad_threshold_db = 3.0;
  double alpha_min = 0.0;
  double alpha_max = 10.0;

  void validate(int sample_rate_hz) const {
    using detail::require;
    require(n_init_silence >= 1, ErrorKind::Config,
            "tracker: n_init_silence >= 1 violated");
    require(forgetting >= 0.0 && forgetting <= 1.0, ErrorKind::Config,
            "tracker: 0 <= forgetting <= 1 violated");
    require(mu > 0.0, ErrorKind::Config, "tracker: mu > 0 violated");
    require(low_band_lo_hz >= 0.0 && low_band_lo_hz < low_band_hi_hz,
            ErrorKind::Config, "tracker: 0 <= low_band_lo_hz < low_band_hi_hz violated");
    require(low_band_hi_hz <= sample_rate_hz / 2.0, ErrorKind::Config,
            "tracker: low_band_hi_hz <= sample_rate/2 violated");
    require(alpha_min >= 0.0 && alpha_min <= alpha_max, ErrorKind::Config,
            "tracker: 0 <= alpha_min <= alpha_max violated");
    require(std::isfinite(vad_threshold_db), ErrorKind::Config,
            "tracker: vad_threshold_db must be finite");
  }

  friend bool operator==(const NoiseTrackerConfig&,
                         const NoiseTrackerConfig&) = default;
};

/// Running noise magnitude spectrum (fft_len bins).
struct NoiseEstimate {
  std::vector<double> mag;
  std::size_t frames_absorbed = 0;
  bool initialized = false;
};

namespace detail {

inline double mean_of(std::span<const double> v) {
  if (v.empty()) return 0.0;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace detail

/// Log-energy ratio detector against the current noise estimate.
inline bool is_silence(std::span<const double> frame_mag,
                       const NoiseEstimate& noise,
                       const NoiseTrackerConfig& cfg) {
  const double ratio = detail::mean_of(frame_mag) /
                       std::max(detail::mean_of(noise.mag), kEpsilon);
  // log10(0) = -inf, which compares below any finite threshold.
  return 20.0 * std::log10(ratio) < cfg.vad_threshold_db;
}

inline NoiseEstimate absorb_initial(const NoiseEstimate& noise,
                                    std::span<const std::vector<double>> frame_mags,
                                    const NoiseTrackerConfig& cfg) {
  detail::require(!noise.initialized, ErrorKind::InvalidArgument,
                  "absorb_initial: estimate already initialized");
  detail::require(frame_mags.size() == cfg.n_init_silence,
                  ErrorKind::InvalidArgument,
                  "absorb_initial: expected " + std::to_string(cfg.n_init_silence) +
                      " frames, got " + std::to_string(frame_mags.size()));
  const std::size_t bins = frame_mags.front().size();
  NoiseEstimate out;
  out.mag.assign(bins, 0.0);
  for (const auto& m : frame_mags) {
    detail::require(m.size() == bins, ErrorKind::InvalidArgument,
                    "absorb_initial: frame magnitude lengths differ");
    for (std::size_t k = 0; k < bins; ++k) out.mag[k] += m[k];
  }
  const double inv = 1.0 / static_cast<double>(frame_mags.size());
  for (auto& v : out.mag) v *= inv;
  out.frames_absorbed = frame_mags.size();
  out.initialized = true;
  return out;
}

/// First-order recursive smoothing toward a silence frame's magnitude.
inline NoiseEstimate update_noise(const NoiseEstimate& noise,
                                  std::span<const double> silence_mag,
                                  const NoiseTrackerConfig& cfg) {
  detail::require(noise.initialized, ErrorKind::InvalidArgument,
                  "update_noise: estimate not initialized");
  detail::require(silence_mag.size() == noise.mag.size(),
                  ErrorKind::InvalidArgument, "update_noise: length mismatch");
  NoiseEstimate out = noise;
  const double v = cfg.forgetting;
  for (std::size_t k = 0; k < out.mag.size(); ++k) {
    detail::require(silence_mag[k] >= 0.0, ErrorKind::InvalidArgument,
                    "update_noise: negative magnitude");
    out.mag[k] = v * noise.mag[k] + (1.0 - v) * silence_mag[k];
  }
  ++out.frames_absorbed;
  return out;
}

/// One-sided bins whose center frequency lies in [lo_hz, hi_hz].
inline std::vector<std::size_t> low_band_bins(const NoiseTrackerConfig& cfg,
                                              const FrameLayout& layout,
                                              int sample_rate_hz) {
  std::vector<std::size_t> bins;
  const double bin_hz = static_cast<double>(sample_rate_hz) /
                        static_cast<double>(layout.fft_len);
  for (std::size_t k = 0; k <= layout.fft_len / 2; ++k) {
    const double f = static_cast<double>(k) * bin_hz;
    if (f >= cfg.low_band_lo_hz && f <= cfg.low_band_hi_hz) bins.push_back(k);
  }
  detail::require(!bins.empty(), ErrorKind::Config,
                  "tracking band contains no bins (narrower than one bin)");
  return bins;
}

/// Ratio of noisy to estimated-noise magnitude in the low band, scaled by mu
/// and clamped to [alpha_min, alpha_max].
inline double tracking_factor(std::span<const double> noisy_mag,
                              const NoiseEstimate& noise,
                              const NoiseTrackerConfig& cfg,
                              const FrameLayout& layout, int sample_rate_hz) {
  detail::require(noise.initialized, ErrorKind::InvalidArgument,
                  "tracking_factor: estimate not initialized");
  detail::require(noisy_mag.size() == noise.mag.size() &&
                      noisy_mag.size() == layout.fft_len,
                  ErrorKind::InvalidArgument, "tracking_factor: length mismatch");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k : low_band_bins(cfg, layout, sample_rate_hz)) {
    num += noisy_mag[k];
    den += noise.mag[k];
  }
  const double alpha = cfg.mu * num / std::max(den, kEpsilon);
  return std::clamp(alpha, cfg.alpha_min, cfg.alpha_max);
}

}  // namespace nssp
