// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// SNR-dependent phase spectrum compensation. A real, anti-symmetric offset is
// added to each conjugate pair before taking its angle; low-energy pairs are
// driven toward opposition and cancel when the real part is resynthesized.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nssp/error.hpp"
#include "nssp/noise_estimation.hpp"
#include "nssp/signal_core.hpp"

namespace nssp {

inline constexpr double kPiCubed = std::numbers::pi * std::numbers::pi * std::numbers::pi;

enum class PsiMode { SnrDependent, Constant };

/// Scope of the a posteriori SNR driving psi. PerFrame averages the per-bin
/// values over the frame before inverting.
enum class NuScope { PerBin, PerFrame };

struct PhaseParams {
  FrameLayout layout2{256, 192, 256, WindowKind::GriffinLimModifiedHanning};
  double psi_max = kPiCubed;
  double nu_floor = 1e-8;
  PsiMode psi_mode = PsiMode::SnrDependent;
  double psi_constant = 0.0;  // used when psi_mode == Constant
  NuScope nu_scope = NuScope::PerBin;

  void validate() const {
    layout2.validate();
    detail::require(layout2.fft_len >= 4, ErrorKind::Config,
                    "step2: fft_len >= 4 violated");
    detail::require(psi_max > 0.0, ErrorKind::Config, "step2: psi_max > 0 violated");
    detail::require(nu_floor > 0.0, ErrorKind::Config, "step2: nu_floor > 0 violated");
    detail::require(std::isfinite(psi_constant), ErrorKind::Config,
                    "step2: psi constant must be finite");
  }

  friend bool operator==(const PhaseParams&, const PhaseParams&) = default;
};

struct CompensationFrame {
  std::vector<double> lambda;
  double v_rms = 0.0;
  std::vector<double> psi;
  std::vector<double> phi;
};

/// +1 on the positive-frequency half, -1 on the negative half, 0 at DC and
/// Nyquist.
inline std::vector<double> lambda_weights(std::size_t fft_len) {
  detail::require(fft_len % 2 == 0 && fft_len >= 4, ErrorKind::InvalidArgument,
                  "lambda_weights: fft_len must be even and >= 4");
  std::vector<double> lambda(fft_len, 0.0);
  const std::size_t half = fft_len / 2;
  for (std::size_t k = 1; k < half; ++k) lambda[k] = 1.0;
  for (std::size_t k = half + 1; k < fft_len; ++k) lambda[k] = -1.0;
  return lambda;
}

inline double rms_magnitude(std::span<const Complex> bins) {
  detail::require(!bins.empty(), ErrorKind::InvalidArgument,
                  "rms_magnitude: empty spectrum");
  double power = 0.0;
  for (const auto& b : bins) power += std::norm(b);
  return std::sqrt(power / static_cast<double>(bins.size()));
}

inline double rms_magnitude(const Spectrum& spectrum) {
  return rms_magnitude(std::span<const Complex>(spectrum.bins));
}

inline std::vector<double> psi_per_bin(std::span<const double> z_mag, double v_rms,
                                       const PhaseParams& params) {
  detail::require(v_rms >= 0.0, ErrorKind::InvalidArgument,
                  "psi_per_bin: v_rms must be >= 0");
  if (params.psi_mode == PsiMode::Constant) {
    return std::vector<double>(z_mag.size(), params.psi_constant);
  }
  const double ref_power = std::max(v_rms * v_rms, kEpsilon);
  std::vector<double> nu(z_mag.size());
  for (std::size_t k = 0; k < z_mag.size(); ++k) {
    nu[k] = std::max(z_mag[k] * z_mag[k] / ref_power, params.nu_floor);
  }
  if (params.nu_scope == NuScope::PerFrame && !nu.empty()) {
    const double frame_nu = std::max(detail::mean_of(nu), params.nu_floor);
    std::fill(nu.begin(), nu.end(), frame_nu);
  }
  std::vector<double> psi(z_mag.size());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    psi[k] = std::min(kPiCubed / nu[k], params.psi_max);
  }
  return psi;
}

inline CompensationFrame compensation_frame(const Spectrum& z,
                                            const PhaseParams& params) {
  CompensationFrame cf;
  cf.lambda = lambda_weights(z.bins.size());
  cf.v_rms = rms_magnitude(z);
  cf.psi = psi_per_bin(z.magnitudes(), cf.v_rms, params);
  cf.phi.resize(z.bins.size());
  for (std::size_t k = 0; k < cf.phi.size(); ++k) {
    cf.phi[k] = cf.psi[k] * cf.lambda[k] * cf.v_rms;
  }
  return cf;
}

/// Keeps each bin's magnitude and takes the angle of (bin + phi[k]).
inline Spectrum apply_phase_offset(const Spectrum& z, std::span<const double> phi) {
  detail::require(phi.size() == z.bins.size(), ErrorKind::InvalidArgument,
                  "apply_phase_offset: length mismatch");
  Spectrum out{std::vector<Complex>(z.bins.size()), z.layout};
  for (std::size_t k = 0; k < z.bins.size(); ++k) {
    if (phi[k] == 0.0) {
      out.bins[k] = z.bins[k];
      continue;
    }
    const Complex shifted = z.bins[k] + phi[k];
    out.bins[k] = std::polar(std::abs(z.bins[k]), std::arg(shifted));
  }
  return out;
}

inline Spectrum compensate_spectrum(const Spectrum& z, const PhaseParams& params) {
  const auto cf = compensation_frame(z, params);
  return apply_phase_offset(z, cf.phi);
}

inline Waveform enhance_step2(const Waveform& z, const PhaseParams& params) {
  params.validate();
  return analyze_modify_synthesize(
      z, params.layout2,
      [&](std::size_t, Spectrum spec) { return compensate_spectrum(spec, params); });
}

}  // namespace nssp
