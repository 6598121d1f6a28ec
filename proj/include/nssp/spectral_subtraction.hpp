// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nssp/error.hpp"
#include "nssp/noise_estimation.hpp"
#include "nssp/signal_core.hpp"

namespace nssp {

struct SubtractionParams {
  double beta_floor = 0.1;
  NoiseTrackerConfig tracker;
  FrameLayout layout1{96, 48, 256, WindowKind::Hamming};

  void validate(int sample_rate_hz) const {
    detail::require(beta_floor >= 0.0 && beta_floor < 1.0, ErrorKind::Config,
                    "step1: 0 <= beta_floor < 1 violated");
    layout1.validate();
    tracker.validate(sample_rate_hz);
  }

  friend bool operator==(const SubtractionParams&,
                         const SubtractionParams&) = default;
};

/// |Z| = |Y| - alpha |D| where positive, beta |Y| otherwise.
inline std::vector<double> subtract_magnitude(std::span<const double> noisy_mag,
                                              std::span<const double> noise_mag,
                                              double alpha, double beta_floor) {
  detail::require(noisy_mag.size() == noise_mag.size(),
                  ErrorKind::InvalidArgument,
                  "subtract_magnitude: length mismatch");
  std::vector<double> out(noisy_mag.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double h = noisy_mag[k] - alpha * noise_mag[k];
    out[k] = h > 0.0 ? h : beta_floor * noisy_mag[k];
  }
  return out;
}

/// New magnitudes, noisy phase. A zero-magnitude noisy bin has phase 0.
inline Spectrum recombine_with_noisy_phase(std::span<const double> z_mag,
                                           const Spectrum& noisy) {
  detail::require(z_mag.size() == noisy.bins.size(), ErrorKind::InvalidArgument,
                  "recombine_with_noisy_phase: length mismatch");
  Spectrum out{std::vector<Complex>(z_mag.size()), noisy.layout};
  for (std::size_t k = 0; k < z_mag.size(); ++k) {
    const double phase = noisy.bins[k] == Complex{} ? 0.0 : std::arg(noisy.bins[k]);
    out.bins[k] = std::polar(z_mag[k], phase);
  }
  return out;
}

/// Per-frame diagnostics from the step-1 fold.
struct Step1Trace {
  std::vector<double> alpha;     // NaN for pass-through initialization frames
  std::vector<bool> silence;
  NoiseEstimate final_noise;
};

inline std::size_t step1_min_samples(const SubtractionParams& params) {
  return params.tracker.n_init_silence * params.layout1.hop +
         params.layout1.frame_len;
}

/// Magnitude compensation over a whole utterance. The first n_init_silence
/// frames seed the noise estimate and pass through unmodified; afterwards
/// each frame is classified, silence frames update the estimate, and the
/// tracking factor is recomputed for every frame.
inline Waveform enhance_step1(const Waveform& noisy,
                              const SubtractionParams& params,
                              Step1Trace* trace = nullptr) {
  params.validate(noisy.sample_rate_hz());
  const auto& tracker = params.tracker;
  const auto& layout = params.layout1;
  detail::require(noisy.size() >= step1_min_samples(params), ErrorKind::Degenerate,
                  "enhance_step1: input too short to initialize noise (need " +
                      std::to_string(step1_min_samples(params)) + " samples, got " +
                      std::to_string(noisy.size()) + ")");
  // Validates the band before any frame is processed.
  (void)low_band_bins(tracker, layout, noisy.sample_rate_hz());

  NoiseEstimate noise;
  std::vector<std::vector<double>> init_mags;
  init_mags.reserve(tracker.n_init_silence);
  if (trace) *trace = Step1Trace{};

  Waveform z = analyze_modify_synthesize(
      noisy, layout, [&](std::size_t index, Spectrum spec) -> Spectrum {
        auto mag = spec.magnitudes();
        if (index < tracker.n_init_silence) {
          init_mags.push_back(std::move(mag));
          if (init_mags.size() == tracker.n_init_silence) {
            noise = absorb_initial(noise, init_mags, tracker);
          }
          if (trace) {
            trace->alpha.push_back(std::nan(""));
            trace->silence.push_back(true);
          }
          return spec;
        }
        const bool silent = is_silence(mag, noise, tracker);
        if (silent) noise = update_noise(noise, mag, tracker);
        const double alpha =
            tracking_factor(mag, noise, tracker, layout, noisy.sample_rate_hz());
        if (trace) {
          trace->alpha.push_back(alpha);
          trace->silence.push_back(silent);
        }
        const auto z_mag = subtract_magnitude(mag, noise.mag, alpha, params.beta_floor);
        return recombine_with_noisy_phase(z_mag, spec);
      });
  if (trace) trace->final_noise = noise;
  return z;
}

}  // namespace nssp
