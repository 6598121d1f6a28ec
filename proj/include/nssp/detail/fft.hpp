// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace nssp::detail {

// FFTW's planner is not thread-safe but executing an existing plan on new
// arrays is, so plans are created once per size under a lock and shared.
// FFTW_UNALIGNED lets us execute on std::vector storage directly.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans plans;
    return plans;
  }

  fftw_plan r2c(std::size_t n) { return get(n, Kind::R2C); }
  fftw_plan c2c_backward(std::size_t n) { return get(n, Kind::C2CBackward); }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

 private:
  enum class Kind { R2C, C2CBackward };

  FftPlans() = default;
  ~FftPlans() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, Kind kind) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, kind);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int len = static_cast<int>(n);
    fftw_plan plan = nullptr;
    if (kind == Kind::R2C) {
      std::vector<double> in(n);
      std::vector<std::complex<double>> out(n / 2 + 1);
      plan = fftw_plan_dft_r2c_1d(
          len, in.data(), reinterpret_cast<fftw_complex*>(out.data()), flags);
    } else {
      std::vector<std::complex<double>> in(n), out(n);
      plan = fftw_plan_dft_1d(len, reinterpret_cast<fftw_complex*>(in.data()),
                              reinterpret_cast<fftw_complex*>(out.data()),
                              FFTW_BACKWARD, flags);
    }
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mu_;
  std::map<std::pair<std::size_t, Kind>, fftw_plan> plans_;
};

/// Full n-point DFT of a real sequence. The upper half is filled from the
/// lower half by conjugation, so the result is exactly conjugate symmetric.
inline std::vector<std::complex<double>> real_dft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(n);
  fftw_execute_dft_r2c(FftPlans::instance().r2c(n), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  for (std::size_t k = n / 2 + 1; k < n; ++k) out[k] = std::conj(out[n - k]);
  return out;
}

/// Normalized inverse DFT: (1/n) sum_k X[k] e^{+j2pi nk/n}.
inline std::vector<std::complex<double>> inverse_dft(
    std::span<const std::complex<double>> spec) {
  const std::size_t n = spec.size();
  std::vector<std::complex<double>> in(spec.begin(), spec.end());
  std::vector<std::complex<double>> out(n);
  fftw_execute_dft(FftPlans::instance().c2c_backward(n),
                   reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace nssp::detail
