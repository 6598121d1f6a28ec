// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "catch_amalgamated.hpp"

#include <cmath>
#include <cstring>

#include "nssp/spectral_subtraction.hpp"
#include "test_support.hpp"

using namespace nssp;
using namespace nssp::testing;
using Catch::Approx;

namespace {

// Bin-by-bin reference for the subtraction rule, written without the library.
struct ScalarSubtraction {
  double value;
  bool floored;
};

ScalarSubtraction subtract_one(double noisy, double noise, double alpha, double beta) {
  const double h = noisy - alpha * noise;
  if (h > 0.0) return {h, false};
  return {beta * noisy, true};
}

double band_energy_db(const std::vector<double>& x, std::size_t begin, std::size_t end) {
  double e = 0.0;
  for (std::size_t i = begin; i < end; ++i) e += x[i] * x[i];
  return 10.0 * std::log10(e);
}

}  // namespace

TEST_CASE("subtract_magnitude examples", "[step1][subtract]") {
  const std::vector<double> noisy{1.0};
  CHECK(subtract_magnitude(noisy, std::vector<double>{0.3}, 1.0, 0.1)[0] ==
        Approx(0.7).margin(1e-15));
  CHECK(subtract_magnitude(noisy, std::vector<double>{1.5}, 1.0, 0.1)[0] ==
        Approx(0.1).margin(1e-15));
  SECTION("exact zero difference takes the floor") {
    CHECK(subtract_magnitude(noisy, std::vector<double>{1.0}, 1.0, 0.1)[0] == 0.1);
  }
  SECTION("length mismatch") {
    CHECK_THROWS_AS(subtract_magnitude(noisy, std::vector<double>{1.0, 2.0}, 1.0, 0.1),
                    Error);
  }
}

TEST_CASE("subtract_magnitude matches the scalar rule on random vectors",
          "[step1][subtract][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> alpha_dist(0.0, 10.0);
  std::uniform_real_distribution<double> beta_dist(0.0, 0.99);
  std::size_t floored = 0, positive = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const auto noisy = uniform_vector(129, 3 * trial, 0.0, 2.0);
    const auto noise = uniform_vector(129, 3 * trial + 1, 0.0, 1.0);
    const double alpha = alpha_dist(rng);
    const double beta = beta_dist(rng);
    const auto out = subtract_magnitude(noisy, noise, alpha, beta);
    for (std::size_t k = 0; k < out.size(); ++k) {
      const auto ref = subtract_one(noisy[k], noise[k], alpha, beta);
      REQUIRE(out[k] == ref.value);
      CHECK(out[k] >= 0.0);
      CHECK(out[k] <= std::max(noisy[k], beta * noisy[k]));
      ref.floored ? ++floored : ++positive;
    }
  }
  // Both branches must actually be exercised.
  CHECK(floored > 1000);
  CHECK(positive > 1000);
}

TEST_CASE("raising alpha never raises an unfloored bin", "[step1][subtract][property]") {
  for (std::uint64_t trial = 0; trial < 200; ++trial) {
    const auto noisy = uniform_vector(64, 500 + trial, 0.0, 2.0);
    const auto noise = uniform_vector(64, 900 + trial, 0.0, 1.0);
    const double beta = 0.1;
    auto prev = subtract_magnitude(noisy, noise, 0.0, beta);
    for (double alpha = 0.25; alpha <= 5.0; alpha += 0.25) {
      const auto cur = subtract_magnitude(noisy, noise, alpha, beta);
      for (std::size_t k = 0; k < cur.size(); ++k) {
        const bool floored = cur[k] == beta * noisy[k];
        CHECK((cur[k] <= prev[k] || floored));
      }
      prev = cur;
    }
  }
}

TEST_CASE("recombine_with_noisy_phase", "[step1][recombine]") {
  const FrameLayout lay{16, 8, 16, WindowKind::Hamming};
  const auto noisy = forward_spectrum(white_noise(16, 31), lay);

  SECTION("unchanged magnitudes reproduce the spectrum") {
    const auto out = recombine_with_noisy_phase(noisy.magnitudes(), noisy);
    for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(out.bins[k] - noisy.bins[k]) < 1e-15);
  }
  SECTION("zero magnitudes give a zero spectrum") {
    const auto out = recombine_with_noisy_phase(std::vector<double>(16, 0.0), noisy);
    for (const auto& b : out.bins) CHECK(b == Complex{});
  }
  SECTION("polar decomposition of each bin") {
    const auto z_mag = uniform_vector(16, 77, 0.1, 3.0);
    const auto out = recombine_with_noisy_phase(z_mag, noisy);
    for (std::size_t k = 0; k < 16; ++k) {
      const double ref_phase = std::atan2(noisy.bins[k].imag(), noisy.bins[k].real());
      CHECK(std::abs(std::abs(out.bins[k]) - z_mag[k]) < 1e-12);
      CHECK(std::abs(std::arg(out.bins[k]) - ref_phase) < 1e-12);
    }
  }
  SECTION("a zero-magnitude noisy bin takes phase zero") {
    Spectrum zero{std::vector<Complex>(16), lay};
    const auto out = recombine_with_noisy_phase(std::vector<double>(16, 2.0), zero);
    for (const auto& b : out.bins) CHECK(b == Complex(2.0, 0.0));
  }
}

TEST_CASE("enhance_step1 on stationary noise removes energy", "[step1][driver]") {
  const SubtractionParams params;
  int lowered = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Waveform noisy(white_noise(8000, 4000 + seed, 0.1), 8000);
    const auto z = enhance_step1(noisy, params);
    REQUIRE(z.size() == noisy.size());
    if (energy(z.samples()) < energy(noisy.samples())) ++lowered;
  }
  CHECK(lowered >= 48);
}

TEST_CASE("enhance_step1 keeps a strong tone", "[step1][driver]") {
  const int rate = 8000;
  const std::size_t lead = 2400, body = 8000;
  auto x = white_noise(lead + body, 55, 1e-4);
  const auto t = tone(body, 1000.0, rate, 0.5);
  for (std::size_t i = 0; i < body; ++i) x[lead + i] += t[i];
  const Waveform noisy(x, rate);
  const auto z = enhance_step1(noisy, SubtractionParams{});
  // Skip the onset so only the steady tone is measured.
  const std::size_t begin = lead + 480, end = lead + body - 96;
  const double drop = band_energy_db(x, begin, end) - band_energy_db(z.samples(), begin, end);
  CHECK(std::abs(drop) < 1.0);
}

TEST_CASE("enhance_step1 edge cases", "[step1][driver]") {
  const SubtractionParams params;
  SECTION("digital silence stays silent") {
    const auto z = enhance_step1(Waveform(std::vector<double>(4000, 0.0), 8000), params);
    for (double v : z.samples()) CHECK(v == 0.0);
  }
  SECTION("too short to initialize the noise estimate") {
    const std::size_t need = 8 * 48 + 96;
    CHECK(step1_min_samples(params) == need);
    try {
      enhance_step1(Waveform(std::vector<double>(need - 1, 0.1), 8000), params);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Degenerate);
    }
    CHECK_NOTHROW(enhance_step1(Waveform(white_noise(need, 1, 0.1), 8000), params));
  }
  SECTION("bitwise deterministic") {
    const Waveform noisy(white_noise(6000, 91, 0.2), 8000);
    const auto a = enhance_step1(noisy, params);
    const auto b = enhance_step1(noisy, params);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.samples().data(), b.samples().data(),
                      a.size() * sizeof(double)) == 0);
  }
  SECTION("trace records pass-through and tracked frames") {
    Step1Trace trace;
    const Waveform noisy(white_noise(4800, 13, 0.1), 8000);
    enhance_step1(noisy, params, &trace);
    const std::size_t frames = frame_count(4800 + 48, 48);
    REQUIRE(trace.alpha.size() == frames);
    for (std::size_t i = 0; i < 8; ++i) CHECK(std::isnan(trace.alpha[i]));
    for (std::size_t i = 8; i < frames; ++i) {
      CHECK(trace.alpha[i] >= 0.0);
      CHECK(trace.alpha[i] <= 10.0);
    }
    CHECK(trace.final_noise.initialized);
  }
  SECTION("invalid floor is rejected") {
    SubtractionParams bad;
    bad.beta_floor = 1.0;
    CHECK_THROWS_AS(enhance_step1(Waveform(white_noise(4000, 2), 8000), bad), Error);
  }
}
