// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Objective evaluation: noise mixing at a target SNR, overall and segmental
// SNR, improvement reports, and dB spectrogram matrices.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "nssp/error.hpp"
#include "nssp/noise_estimation.hpp"
#include "nssp/signal_core.hpp"

namespace nssp {

struct MetricsConfig {
  std::size_t frame_len = 256;
  std::size_t hop = 128;
  double segsnr_min_db = -10.0;
  double segsnr_max_db = 35.0;
  double overall_snr_max_db = 99.0;
  double silent_frame_energy = 1e-10;

  void validate() const {
    detail::require(frame_len > 0 && hop > 0, ErrorKind::Config,
                    "metrics: frame_len > 0 and hop > 0 required");
    detail::require(segsnr_min_db < segsnr_max_db, ErrorKind::Config,
                    "metrics: segsnr_min_db < segsnr_max_db violated");
  }

  friend bool operator==(const MetricsConfig&, const MetricsConfig&) = default;
};

struct MetricsReport {
  double overall_snr_noisy_db = 0.0;
  double overall_snr_enhanced_db = 0.0;
  double overall_snr_improvement_db = 0.0;
  double segsnr_noisy_db = 0.0;
  double segsnr_enhanced_db = 0.0;
  double segsnr_improvement_db = 0.0;
  std::size_t n_frames = 0;
};

struct SpectrogramMatrix {
  std::vector<std::vector<double>> values;  // [bin][frame], dB
  double bin_hz = 0.0;
  double hop_s = 0.0;

  std::size_t bins() const { return values.size(); }
  std::size_t frames() const { return values.empty() ? 0 : values.front().size(); }
};

struct MixResult {
  Waveform noisy;
  Waveform scaled_noise;
  double gain = 0.0;
  std::size_t noise_offset = 0;
};

namespace detail {

inline double mean_square(const std::vector<double>& x, std::size_t begin,
                          std::size_t len) {
  double acc = 0.0;
  for (std::size_t i = 0; i < len; ++i) acc += x[begin + i] * x[begin + i];
  return acc / static_cast<double>(len);
}

inline void require_same_length(const Waveform& a, const Waveform& b,
                                const char* who) {
  require(a.size() == b.size(), ErrorKind::InvalidArgument,
          std::string(who) + ": length mismatch (" + std::to_string(a.size()) +
              " vs " + std::to_string(b.size()) + ")");
}

}  // namespace detail

/// Adds a gain-scaled noise segment so that the clean-to-noise power ratio
/// equals snr_db. The segment starts at seed_offset modulo the slack.
inline MixResult mix_components(const Waveform& clean, const Waveform& noise,
                                double snr_db, std::int64_t seed_offset = 0) {
  using detail::require;
  require(clean.sample_rate_hz() == noise.sample_rate_hz(),
          ErrorKind::InvalidArgument,
          "mix_at_snr: sample rate mismatch (" +
              std::to_string(clean.sample_rate_hz()) + " vs " +
              std::to_string(noise.sample_rate_hz()) + ")");
  require(!clean.empty(), ErrorKind::InvalidArgument, "mix_at_snr: empty clean signal");
  require(noise.size() >= clean.size(), ErrorKind::InvalidArgument,
          "mix_at_snr: noise shorter than clean");
  require(std::isfinite(snr_db), ErrorKind::InvalidArgument,
          "mix_at_snr: snr_db must be finite");

  const auto slack = static_cast<std::int64_t>(noise.size() - clean.size() + 1);
  const auto offset = static_cast<std::size_t>(((seed_offset % slack) + slack) % slack);
  const double p_clean = detail::mean_square(clean.samples(), 0, clean.size());
  const double p_noise = detail::mean_square(noise.samples(), offset, clean.size());
  require(p_clean > 0.0, ErrorKind::Degenerate, "mix_at_snr: clean signal has zero power");
  require(p_noise > 0.0, ErrorKind::Degenerate, "mix_at_snr: noise segment has zero power");

  const double gain = std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));
  std::vector<double> scaled(clean.size());
  std::vector<double> mixed(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    scaled[i] = gain * noise[offset + i];
    mixed[i] = clean[i] + scaled[i];
  }
  return MixResult{Waveform(std::move(mixed), clean.sample_rate_hz()),
                   Waveform(std::move(scaled), clean.sample_rate_hz()), gain, offset};
}

inline Waveform mix_at_snr(const Waveform& clean, const Waveform& noise,
                           double snr_db, std::int64_t seed_offset = 0) {
  return mix_components(clean, noise, snr_db, seed_offset).noisy;
}

inline double overall_snr(const Waveform& clean, const Waveform& test,
                          double max_db = 99.0) {
  detail::require_same_length(clean, test, "overall_snr");
  double signal = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double e = clean[i] - test[i];
    signal += clean[i] * clean[i];
    error += e * e;
  }
  detail::require(signal > 0.0, ErrorKind::Degenerate,
                  "overall_snr: clean signal has zero power");
  return std::min(10.0 * std::log10(signal / std::max(error, kEpsilon)), max_db);
}

struct SegSnrResult {
  double mean_db = 0.0;
  std::size_t n_frames = 0;
};

/// Mean of per-frame clamped SNRs over full frames whose clean energy
/// reaches the silence threshold.
inline SegSnrResult seg_snr_detail(const Waveform& clean, const Waveform& test,
                                   const MetricsConfig& cfg) {
  detail::require_same_length(clean, test, "seg_snr");
  cfg.validate();
  double total = 0.0;
  std::size_t kept = 0;
  for (std::size_t start = 0; start + cfg.frame_len <= clean.size();
       start += cfg.hop) {
    double signal = 0.0;
    double error = 0.0;
    for (std::size_t n = start; n < start + cfg.frame_len; ++n) {
      const double e = clean[n] - test[n];
      signal += clean[n] * clean[n];
      error += e * e;
    }
    if (signal < cfg.silent_frame_energy) continue;
    const double snr = 10.0 * std::log10(signal / std::max(error, kEpsilon));
    total += std::clamp(snr, cfg.segsnr_min_db, cfg.segsnr_max_db);
    ++kept;
  }
  detail::require(kept > 0, ErrorKind::Degenerate,
                  "seg_snr: no non-silent frames to evaluate");
  return {total / static_cast<double>(kept), kept};
}

inline double seg_snr(const Waveform& clean, const Waveform& test,
                      std::size_t frame_len, std::size_t hop) {
  MetricsConfig cfg;
  cfg.frame_len = frame_len;
  cfg.hop = hop;
  return seg_snr_detail(clean, test, cfg).mean_db;
}

inline MetricsReport improvement_report(const Waveform& clean, const Waveform& noisy,
                                        const Waveform& enhanced,
                                        const MetricsConfig& cfg = {}) {
  detail::require_same_length(clean, noisy, "improvement_report");
  detail::require_same_length(clean, enhanced, "improvement_report");
  MetricsReport r;
  r.overall_snr_noisy_db = overall_snr(clean, noisy, cfg.overall_snr_max_db);
  r.overall_snr_enhanced_db = overall_snr(clean, enhanced, cfg.overall_snr_max_db);
  r.overall_snr_improvement_db = r.overall_snr_enhanced_db - r.overall_snr_noisy_db;
  const auto seg_noisy = seg_snr_detail(clean, noisy, cfg);
  const auto seg_enh = seg_snr_detail(clean, enhanced, cfg);
  r.segsnr_noisy_db = seg_noisy.mean_db;
  r.segsnr_enhanced_db = seg_enh.mean_db;
  r.segsnr_improvement_db = r.segsnr_enhanced_db - r.segsnr_noisy_db;
  r.n_frames = seg_noisy.n_frames;
  return r;
}

inline SpectrogramMatrix spectrogram(const Waveform& signal, const FrameLayout& layout,
                                     double db_floor = -80.0) {
  layout.validate();
  detail::require(signal.size() > layout.frame_len, ErrorKind::InvalidArgument,
                  "spectrogram: signal must be longer than frame_len");
  const auto seq = frame_signal(signal, layout);
  const auto window = make_window(layout.window, layout.frame_len);
  const std::size_t bins = layout.num_bins_one_sided();
  const double floor_mag = std::pow(10.0, db_floor / 20.0);

  SpectrogramMatrix m;
  m.bin_hz = static_cast<double>(signal.sample_rate_hz()) /
             static_cast<double>(layout.fft_len);
  m.hop_s = static_cast<double>(layout.hop) / signal.sample_rate_hz();
  m.values.assign(bins, std::vector<double>(seq.size(), db_floor));
  for (std::size_t t = 0; t < seq.size(); ++t) {
    const auto spec = forward_spectrum(seq.frames[t], layout, window);
    for (std::size_t k = 0; k < bins; ++k) {
      const double mag = std::abs(spec.bins[k]);
      m.values[k][t] = mag > floor_mag ? 20.0 * std::log10(mag) : db_floor;
    }
  }
  return m;
}

/// First line `bin_hz,<v>,hop_s,<v>`, then one row per bin, one column per
/// frame, fixed 6-decimal formatting.
inline void write_spectrogram_csv(std::ostream& os, const SpectrogramMatrix& m) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "bin_hz,%.6f,hop_s,%.6f\n", m.bin_hz, m.hop_s);
  os << buf;
  for (const auto& row : m.values) {
    for (std::size_t t = 0; t < row.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.6f", row[t]);
      if (t) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace nssp
