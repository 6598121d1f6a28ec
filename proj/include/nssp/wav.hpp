// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// RIFF/WAVE PCM 16-bit mono reader and writer.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "nssp/error.hpp"
#include "nssp/signal_core.hpp"

namespace nssp {

namespace detail {

inline std::uint32_t read_u32le(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) | (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

inline std::uint16_t read_u16le(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

inline void put_u32le(std::vector<std::uint8_t>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u16le(std::vector<std::uint8_t>& b, std::uint16_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
}

[[noreturn]] inline void wav_parse_error(const std::string& path, std::size_t offset,
                                         const std::string& what) {
  fail(ErrorKind::Format,
       path + ": malformed WAV at byte " + std::to_string(offset) + ": " + what);
}

[[noreturn]] inline void wav_unsupported(const std::string& path, const std::string& field,
                                         long long value, const std::string& expected) {
  fail(ErrorKind::Format, path + ": unsupported WAV " + field + " = " +
                              std::to_string(value) + " (expected " + expected + ")");
}

}  // namespace detail

inline Waveform parse_wav(const std::vector<std::uint8_t>& bytes,
                          const std::string& name = "<memory>") {
  using detail::read_u16le;
  using detail::read_u32le;
  using detail::wav_parse_error;

  if (bytes.size() < 12) wav_parse_error(name, bytes.size(), "truncated RIFF header");
  if (std::memcmp(bytes.data(), "RIFF", 4) != 0)
    wav_parse_error(name, 0, "missing RIFF tag");
  if (std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    wav_parse_error(name, 8, "missing WAVE tag");

  bool have_fmt = false;
  std::uint32_t sample_rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::size_t chunk_at = pos;
    const std::uint32_t size = read_u32le(bytes, pos + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0) {
      if (size < 16 || body + 16 > bytes.size())
        wav_parse_error(name, chunk_at, "fmt chunk too short");
      const std::uint16_t format = read_u16le(bytes, body);
      const std::uint16_t channels = read_u16le(bytes, body + 2);
      sample_rate = read_u32le(bytes, body + 4);
      const std::uint16_t bits = read_u16le(bytes, body + 14);
      if (format != 1) detail::wav_unsupported(name, "audio_format", format, "1 (PCM)");
      if (channels != 1) detail::wav_unsupported(name, "num_channels", channels, "1");
      if (bits != 16) detail::wav_unsupported(name, "bits_per_sample", bits, "16");
      if (sample_rate == 0) wav_parse_error(name, body + 4, "zero sample rate");
      have_fmt = true;
    } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
      if (!have_fmt) wav_parse_error(name, chunk_at, "data chunk before fmt chunk");
      if (body + size > bytes.size())
        wav_parse_error(name, chunk_at, "data chunk extends past end of file");
      if (size % 2 != 0) wav_parse_error(name, chunk_at, "odd data chunk size");
      std::vector<double> samples(size / 2);
      for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto v = static_cast<std::int16_t>(read_u16le(bytes, body + 2 * i));
        samples[i] = static_cast<double>(v) / 32768.0;
      }
      return Waveform(std::move(samples), static_cast<int>(sample_rate));
    }
    pos = body + size + (size & 1u);
  }
  wav_parse_error(name, pos, have_fmt ? "no data chunk" : "no fmt chunk");
}

inline Waveform read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) detail::fail(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_wav(bytes, path.string());
}

/// Samples are clamped to [-1, 1) and rounded onto the 16-bit grid.
inline std::int16_t quantize_sample(double s) {
  const double scaled = std::round(s * 32768.0);
  return static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
}

inline std::vector<std::uint8_t> encode_wav(const Waveform& signal) {
  const auto n = static_cast<std::uint32_t>(signal.size());
  const std::uint32_t data_bytes = 2 * n;
  const auto rate = static_cast<std::uint32_t>(signal.sample_rate_hz());
  std::vector<std::uint8_t> b;
  b.reserve(44 + data_bytes);
  b.insert(b.end(), {'R', 'I', 'F', 'F'});
  detail::put_u32le(b, 36 + data_bytes);
  b.insert(b.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  detail::put_u32le(b, 16);
  detail::put_u16le(b, 1);          // PCM
  detail::put_u16le(b, 1);          // mono
  detail::put_u32le(b, rate);
  detail::put_u32le(b, rate * 2);   // byte rate
  detail::put_u16le(b, 2);          // block align
  detail::put_u16le(b, 16);
  b.insert(b.end(), {'d', 'a', 't', 'a'});
  detail::put_u32le(b, data_bytes);
  for (double s : signal.samples()) {
    detail::put_u16le(b, static_cast<std::uint16_t>(quantize_sample(s)));
  }
  return b;
}

inline void write_wav(const std::filesystem::path& path, const Waveform& signal) {
  const auto bytes = encode_wav(signal);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) detail::fail(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) detail::fail(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

}  // namespace nssp
