// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "catch_amalgamated.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

#include "nssp/wav.hpp"
#include "test_support.hpp"

using namespace nssp;
using namespace nssp::testing;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "nssp_wav_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string error_text(const std::vector<std::uint8_t>& bytes, ErrorKind expected) {
  try {
    parse_wav(bytes, "probe.wav");
  } catch (const Error& e) {
    CHECK(e.kind() == expected);
    return e.what();
  }
  FAIL("parse_wav accepted a bad file");
  return {};
}

void poke_u16(std::vector<std::uint8_t>& b, std::size_t at, std::uint16_t v) {
  b[at] = static_cast<std::uint8_t>(v);
  b[at + 1] = static_cast<std::uint8_t>(v >> 8);
}

std::vector<double> on_grid(std::size_t n, std::uint64_t seed) {
  auto x = uniform_vector(n, seed, -32768.0, 32767.0);
  for (auto& v : x) v = std::round(v) / 32768.0;
  return x;
}

}  // namespace

TEST_CASE("WAV header and sample scaling", "[wav]") {
  const auto path = scratch("header.wav");
  write_wav(path, Waveform(std::vector<double>(8000, 0.25), 8000));
  CHECK(std::filesystem::file_size(path) == 44 + 2 * 8000);
  const auto w = read_wav(path);
  CHECK(w.size() == 8000);
  CHECK(w.sample_rate_hz() == 8000);
  CHECK(w[0] == 0.25);

  auto bytes = encode_wav(Waveform({0.0}, 16000));
  poke_u16(bytes, 44, 32767);
  CHECK(parse_wav(bytes)[0] == 32767.0 / 32768.0);
  CHECK(std::abs(parse_wav(bytes)[0] - 0.99997) < 1e-5);
  CHECK(parse_wav(bytes).sample_rate_hz() == 16000);
}

TEST_CASE("WAV quantization saturates", "[wav]") {
  CHECK(quantize_sample(2.0) == 32767);
  CHECK(quantize_sample(1.0) == 32767);
  CHECK(quantize_sample(-1.0) == -32768);
  CHECK(quantize_sample(-3.0) == -32768);
  CHECK(quantize_sample(0.0) == 0);
  CHECK(quantize_sample(0.5 / 32768.0) == 1);  // round half away from zero
}

TEST_CASE("WAV round trip is bitwise on the 16-bit grid", "[wav]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Waveform x(on_grid(1000 + 37 * seed, seed), 8000);
    const auto path = scratch("roundtrip.wav");
    write_wav(path, x);
    const auto y = read_wav(path);
    CHECK(y.samples() == x.samples());
  }
}

TEST_CASE("WAV parser skips unknown chunks", "[wav]") {
  auto bytes = encode_wav(Waveform({0.5, -0.5}, 8000));
  const std::vector<std::uint8_t> list{'L', 'I', 'S', 'T', 3, 0, 0, 0, 'a', 'b', 'c', 0};
  bytes.insert(bytes.begin() + 36, list.begin(), list.end());
  CHECK(parse_wav(bytes).samples() == std::vector<double>{0.5, -0.5});
}

TEST_CASE("unsupported WAV fields are named", "[wav][errors]") {
  const auto good = encode_wav(Waveform({0.1, 0.2}, 8000));
  auto b = good;
  poke_u16(b, 20, 3);
  CHECK(error_text(b, ErrorKind::Format).find("audio_format") != std::string::npos);
  b = good;
  poke_u16(b, 22, 2);
  CHECK(error_text(b, ErrorKind::Format).find("num_channels") != std::string::npos);
  b = good;
  poke_u16(b, 34, 24);
  CHECK(error_text(b, ErrorKind::Format).find("bits_per_sample") != std::string::npos);
}

TEST_CASE("malformed WAV reports a byte offset", "[wav][errors]") {
  const auto good = encode_wav(Waveform({0.1, 0.2}, 8000));
  auto b = good;
  b[8] = 'X';
  CHECK(error_text(b, ErrorKind::Format).find("at byte 8") != std::string::npos);
  b = good;
  b.resize(46);  // data chunk claims 4 bytes, only 2 present
  CHECK(error_text(b, ErrorKind::Format).find("at byte 36") != std::string::npos);
  CHECK(error_text({'R', 'I', 'F'}, ErrorKind::Format).find("at byte 3") != std::string::npos);
}

TEST_CASE("WAV I/O failures", "[wav][errors]") {
  try {
    read_wav(scratch("does_not_exist.wav"));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  CHECK_THROWS_AS(write_wav(scratch("no_such_dir") / "x.wav", Waveform({0.0}, 8000)), Error);
}
