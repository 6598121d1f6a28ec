// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Analysis-modification-synthesis substrate: windows, framing, per-frame
// DFT, and window-power normalized overlap-add.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nssp/detail/fft.hpp"
#include "nssp/error.hpp"

namespace nssp {

using Complex = std::complex<double>;

/// Mono time-domain signal. Samples are finite and the rate is positive.
class Waveform {
 public:
  Waveform() = default;

  Waveform(std::vector<double> samples, int sample_rate_hz)
      : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz) {
    detail::require(sample_rate_hz_ > 0, ErrorKind::InvalidArgument,
                    "waveform: sample_rate_hz must be positive");
    for (double s : samples_) {
      detail::require(std::isfinite(s), ErrorKind::InvalidArgument,
                      "waveform: samples must be finite");
    }
  }

  const std::vector<double>& samples() const noexcept { return samples_; }
  int sample_rate_hz() const noexcept { return sample_rate_hz_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  double duration_s() const {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

 private:
  std::vector<double> samples_;
  int sample_rate_hz_ = 8000;
};

enum class WindowKind { Hamming, GriffinLimModifiedHanning, Rectangular };

inline std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Hamming: return "hamming";
    case WindowKind::GriffinLimModifiedHanning: return "griffin_lim_hanning";
    case WindowKind::Rectangular: return "rectangular";
  }
  return "?";
}

inline WindowKind parse_window_kind(const std::string& name) {
  if (name == "hamming") return WindowKind::Hamming;
  if (name == "griffin_lim_hanning") return WindowKind::GriffinLimModifiedHanning;
  if (name == "rectangular") return WindowKind::Rectangular;
  detail::fail(ErrorKind::Config,
               "unknown window '" + name +
                   "' (expected hamming|griffin_lim_hanning|rectangular)");
}

struct FrameLayout {
  std::size_t frame_len = 256;
  std::size_t hop = 128;
  std::size_t fft_len = 256;
  WindowKind window = WindowKind::Hamming;

  /// Throws ErrorKind::Config naming the violated constraint.
  void validate() const {
    detail::require(hop > 0, ErrorKind::Config, "layout: hop must be > 0");
    detail::require(hop <= frame_len, ErrorKind::Config,
                    "layout: hop <= frame_len violated");
    detail::require(frame_len >= 2, ErrorKind::Config,
                    "layout: frame_len >= 2 violated");
    detail::require(frame_len <= fft_len, ErrorKind::Config,
                    "layout: frame_len <= fft_len violated");
    detail::require(fft_len % 2 == 0, ErrorKind::Config,
                    "layout: fft_len must be even");
  }

  std::size_t num_bins_one_sided() const { return fft_len / 2 + 1; }

  friend bool operator==(const FrameLayout&, const FrameLayout&) = default;
};

/// Complex bins of one frame, fft_len long.
struct Spectrum {
  std::vector<Complex> bins;
  FrameLayout layout;

  std::size_t size() const noexcept { return bins.size(); }

  std::vector<double> magnitudes() const {
    std::vector<double> mag(bins.size());
    for (std::size_t k = 0; k < bins.size(); ++k) mag[k] = std::abs(bins[k]);
    return mag;
  }
};

/// Unwindowed frames. Frame i starts at sample i * hop; the tail is zero-padded.
struct FrameSequence {
  std::vector<std::vector<double>> frames;
  FrameLayout layout;
  std::size_t original_len = 0;
  int sample_rate_hz = 8000;

  std::size_t size() const noexcept { return frames.size(); }
};

inline std::vector<double> make_window(WindowKind kind, std::size_t frame_len) {
  detail::require(frame_len >= 2, ErrorKind::InvalidArgument,
                  "make_window: frame_len must be >= 2");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> w(frame_len, 1.0);
  const double n_len = static_cast<double>(frame_len);
  switch (kind) {
    case WindowKind::Hamming:
      for (std::size_t n = 0; n < frame_len; ++n) {
        w[n] = 0.54 - 0.46 * std::cos(two_pi * static_cast<double>(n) /
                                      (n_len - 1.0));
      }
      break;
    case WindowKind::GriffinLimModifiedHanning: {
      const double c = 2.0 / std::sqrt(4.0 * 0.25 + 2.0 * 0.25);
      for (std::size_t n = 0; n < frame_len; ++n) {
        w[n] = c * (0.5 - 0.5 * std::cos(two_pi * (static_cast<double>(n) + 0.5) /
                                         n_len));
      }
      break;
    }
    case WindowKind::Rectangular:
      break;
  }
  return w;
}

/// Number of frames for a signal of `len` samples: one per start position
/// 0, hop, 2*hop, ... strictly below `len`.
inline std::size_t frame_count(std::size_t len, std::size_t hop) {
  return len == 0 ? 0 : (len + hop - 1) / hop;
}

inline FrameSequence frame_signal(const Waveform& signal,
                                  const FrameLayout& layout) {
  layout.validate();
  detail::require(!signal.empty(), ErrorKind::InvalidArgument,
                  "frame_signal: empty signal");
  const auto& x = signal.samples();
  FrameSequence seq;
  seq.layout = layout;
  seq.original_len = x.size();
  seq.sample_rate_hz = signal.sample_rate_hz();
  const std::size_t count = frame_count(x.size(), layout.hop);
  seq.frames.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t start = i * layout.hop;
    std::vector<double> frame(layout.frame_len, 0.0);
    for (std::size_t n = 0; n < layout.frame_len && start + n < x.size(); ++n) {
      frame[n] = x[start + n];
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

/// Windows the frame, zero-pads it to fft_len and returns its DFT.
inline Spectrum forward_spectrum(std::span<const double> frame,
                                 const FrameLayout& layout,
                                 std::span<const double> window) {
  detail::require(frame.size() == layout.frame_len, ErrorKind::InvalidArgument,
                  "forward_spectrum: frame length != frame_len");
  detail::require(window.size() == layout.frame_len, ErrorKind::InvalidArgument,
                  "forward_spectrum: window length != frame_len");
  std::vector<double> padded(layout.fft_len, 0.0);
  for (std::size_t n = 0; n < frame.size(); ++n) padded[n] = frame[n] * window[n];
  return Spectrum{detail::real_dft(padded), layout};
}

inline Spectrum forward_spectrum(std::span<const double> frame,
                                 const FrameLayout& layout) {
  layout.validate();
  const auto window = make_window(layout.window, layout.frame_len);
  return forward_spectrum(frame, layout, window);
}

/// Real part of the inverse DFT, truncated to frame_len. No synthesis window.
inline std::vector<double> inverse_frame(const Spectrum& spectrum) {
  const auto& layout = spectrum.layout;
  detail::require(spectrum.bins.size() == layout.fft_len,
                  ErrorKind::InvalidArgument,
                  "inverse_frame: bin count != fft_len");
  const auto time = detail::inverse_dft(spectrum.bins);
  std::vector<double> frame(layout.frame_len);
  for (std::size_t n = 0; n < layout.frame_len; ++n) frame[n] = time[n].real();
  return frame;
}

inline constexpr double kOlaNormFloor = 1e-10;

/// Weighted overlap-add: each frame is multiplied by the synthesis window,
/// summed at stride hop, and divided by the accumulated squared window
/// wherever that sum exceeds kOlaNormFloor. The floor sits below the squared
/// edge sample of the modified Hanning window (about 3.8e-9 at 256 points).
inline Waveform overlap_add(const FrameSequence& seq) {
  detail::require(!seq.frames.empty(), ErrorKind::InvalidArgument,
                  "overlap_add: empty frame list");
  const auto& layout = seq.layout;
  layout.validate();
  const auto window = make_window(layout.window, layout.frame_len);
  const std::size_t span_len =
      (seq.frames.size() - 1) * layout.hop + layout.frame_len;
  std::vector<double> acc(span_len, 0.0);
  std::vector<double> norm(span_len, 0.0);
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    const auto& frame = seq.frames[i];
    detail::require(frame.size() == layout.frame_len, ErrorKind::InvalidArgument,
                    "overlap_add: frame length != frame_len");
    const std::size_t start = i * layout.hop;
    for (std::size_t n = 0; n < layout.frame_len; ++n) {
      acc[start + n] += window[n] * frame[n];
      norm[start + n] += window[n] * window[n];
    }
  }
  std::vector<double> out(seq.original_len, 0.0);
  for (std::size_t n = 0; n < out.size() && n < span_len; ++n) {
    if (norm[n] > kOlaNormFloor) out[n] = acc[n] / norm[n];
  }
  return Waveform(std::move(out), seq.sample_rate_hz);
}

/// Frame, transform, apply `modify` to each spectrum in order, invert and
/// overlap-add. `modify(index, spectrum) -> Spectrum`.
///
/// The signal is left-padded with frame_len - hop zeros so every input sample
/// is covered away from the tapered frame edges; the padding is dropped from
/// the output, which has the input's length.
template <typename Modifier>
Waveform analyze_modify_synthesize(const Waveform& signal,
                                   const FrameLayout& layout,
                                   Modifier&& modify) {
  layout.validate();
  detail::require(!signal.empty(), ErrorKind::InvalidArgument,
                  "analyze_modify_synthesize: empty signal");
  const std::size_t lead = layout.frame_len - layout.hop;
  std::vector<double> padded(lead, 0.0);
  padded.insert(padded.end(), signal.samples().begin(), signal.samples().end());

  FrameSequence seq = frame_signal(Waveform(std::move(padded), signal.sample_rate_hz()),
                                   layout);
  const auto window = make_window(layout.window, layout.frame_len);
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    Spectrum spec = forward_spectrum(seq.frames[i], layout, window);
    seq.frames[i] = inverse_frame(modify(i, std::move(spec)));
  }
  const Waveform full = overlap_add(seq);
  const auto& out = full.samples();
  return Waveform(std::vector<double>(out.begin() + static_cast<std::ptrdiff_t>(lead), out.end()),
                  signal.sample_rate_hz());
}

}  // namespace nssp
