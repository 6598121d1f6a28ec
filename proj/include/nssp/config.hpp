// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Enhancer configuration: defaults, flat `key = value` text format, and
// validation of every sub-configuration.

#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "nssp/error.hpp"
#include "nssp/evaluation.hpp"
#include "nssp/phase_compensation.hpp"
#include "nssp/signal_core.hpp"
#include "nssp/spectral_subtraction.hpp"

namespace nssp {

struct EnhancerConfig {
  int sample_rate_hz = 8000;
  SubtractionParams step1;
  PhaseParams step2;
  MetricsConfig metrics;
  double spectrogram_db_floor = -80.0;

  void validate() const {
    auto section = [](const char* name, auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.what());
      }
    };
    detail::require(sample_rate_hz > 0, ErrorKind::Config,
                    "sample_rate_hz > 0 violated");
    section("step1", [&] { step1.validate(sample_rate_hz); });
    section("step2", [&] { step2.validate(); });
    section("metrics", [&] { metrics.validate(); });
    detail::require(std::isfinite(spectrogram_db_floor), ErrorKind::Config,
                    "spectrogram.db_floor must be finite");
  }

  friend bool operator==(const EnhancerConfig&, const EnhancerConfig&) = default;
};

namespace detail {

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_number(std::size_t v) { return std::to_string(v); }
inline std::string format_number(int v) { return std::to_string(v); }

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(std::string_view key, std::string_view text) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  require(res.ec == std::errc{} && res.ptr == text.data() + text.size() &&
              std::isfinite(v),
          ErrorKind::Config,
          std::string(key) + ": expected a finite number, got '" + std::string(text) + "'");
  return v;
}

template <typename Int>
Int parse_integer(std::string_view key, std::string_view text) {
  Int v{};
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  require(res.ec == std::errc{} && res.ptr == text.data() + text.size(),
          ErrorKind::Config,
          std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  return v;
}

}  // namespace detail

inline std::string format_psi_mode(const PhaseParams& p) {
  if (p.psi_mode == PsiMode::SnrDependent) return "snr";
  return "constant:" + detail::format_number(p.psi_constant);
}

/// Accepts `snr` or `constant:<lambda>`.
inline void apply_psi_mode(PhaseParams& p, std::string_view text) {
  if (text == "snr") {
    p.psi_mode = PsiMode::SnrDependent;
    return;
  }
  constexpr std::string_view prefix = "constant:";
  detail::require(text.substr(0, prefix.size()) == prefix, ErrorKind::Config,
                  "psi_mode: expected 'snr' or 'constant:<lambda>', got '" +
                      std::string(text) + "'");
  p.psi_mode = PsiMode::Constant;
  p.psi_constant = detail::parse_double("psi_mode", text.substr(prefix.size()));
}

namespace detail {

struct ConfigField {
  std::function<std::string(const EnhancerConfig&)> get;
  std::function<void(EnhancerConfig&, std::string_view key, std::string_view)> set;
};

// Accessors take a mutable config; the getter side only reads through them.
template <typename Accessor>
ConfigField field(Accessor accessor) {
  return ConfigField{
      [accessor](const EnhancerConfig& c) {
        return format_number(accessor(const_cast<EnhancerConfig&>(c)));
      },
      [accessor](EnhancerConfig& c, std::string_view key, std::string_view v) {
        auto& ref = accessor(c);
        using V = std::remove_reference_t<decltype(ref)>;
        if constexpr (std::is_floating_point_v<V>) {
          ref = parse_double(key, v);
        } else {
          ref = parse_integer<V>(key, v);
        }
      }};
}

template <typename Accessor>
ConfigField window_field(Accessor accessor) {
  return ConfigField{
      [accessor](const EnhancerConfig& c) {
        return to_string(accessor(const_cast<EnhancerConfig&>(c)));
      },
      [accessor](EnhancerConfig& c, std::string_view, std::string_view v) {
        accessor(c) = parse_window_kind(std::string(v));
      }};
}

// Ordered as serialized.
inline const std::vector<std::pair<std::string, ConfigField>>& config_fields() {
  static const std::vector<std::pair<std::string, ConfigField>> fields = {
      {"sample_rate_hz", field([](EnhancerConfig& c) -> int& { return c.sample_rate_hz; })},
      {"step1.frame_len",
       field([](EnhancerConfig& c) -> std::size_t& { return c.step1.layout1.frame_len; })},
      {"step1.hop", field([](EnhancerConfig& c) -> std::size_t& { return c.step1.layout1.hop; })},
      {"step1.fft_len",
       field([](EnhancerConfig& c) -> std::size_t& { return c.step1.layout1.fft_len; })},
      {"step1.window",
       window_field([](EnhancerConfig& c) -> WindowKind& { return c.step1.layout1.window; })},
      {"step1.beta_floor", field([](EnhancerConfig& c) -> double& { return c.step1.beta_floor; })},
      {"step1.forgetting",
       field([](EnhancerConfig& c) -> double& { return c.step1.tracker.forgetting; })},
      {"step1.mu", field([](EnhancerConfig& c) -> double& { return c.step1.tracker.mu; })},
      {"step1.n_init_silence",
       field([](EnhancerConfig& c) -> std::size_t& { return c.step1.tracker.n_init_silence; })},
      {"step1.low_band_lo_hz",
       field([](EnhancerConfig& c) -> double& { return c.step1.tracker.low_band_lo_hz; })},
      {"step1.low_band_hi_hz",
       field([](EnhancerConfig& c) -> double& { return c.step1.tracker.low_band_hi_hz; })},
      {"step1.vad_threshold_db",
       field([](EnhancerConfig& c) -> double& { return c.step1.tracker.vad_threshold_db; })},
      {"step1.alpha_min",
       field([](EnhancerConfig& c) -> double& { return c.step1.tracker.alpha_min; })},
      {"step1.alpha_max",
       field([](EnhancerConfig& c) -> double& { return c.step1.tracker.alpha_max; })},
      {"step2.frame_len",
       field([](EnhancerConfig& c) -> std::size_t& { return c.step2.layout2.frame_len; })},
      {"step2.hop", field([](EnhancerConfig& c) -> std::size_t& { return c.step2.layout2.hop; })},
      {"step2.fft_len",
       field([](EnhancerConfig& c) -> std::size_t& { return c.step2.layout2.fft_len; })},
      {"step2.window",
       window_field([](EnhancerConfig& c) -> WindowKind& { return c.step2.layout2.window; })},
      {"step2.psi_mode",
       ConfigField{[](const EnhancerConfig& c) { return format_psi_mode(c.step2); },
                   [](EnhancerConfig& c, std::string_view, std::string_view v) {
                     apply_psi_mode(c.step2, v);
                   }}},
      {"step2.nu_scope",
       ConfigField{[](const EnhancerConfig& c) {
                     return std::string(c.step2.nu_scope == NuScope::PerBin ? "per_bin"
                                                                            : "per_frame");
                   },
                   [](EnhancerConfig& c, std::string_view key, std::string_view v) {
                     if (v == "per_bin") {
                       c.step2.nu_scope = NuScope::PerBin;
                     } else if (v == "per_frame") {
                       c.step2.nu_scope = NuScope::PerFrame;
                     } else {
                       fail(ErrorKind::Config, std::string(key) +
                                                   ": expected per_bin|per_frame, got '" +
                                                   std::string(v) + "'");
                     }
                   }}},
      {"step2.psi_max", field([](EnhancerConfig& c) -> double& { return c.step2.psi_max; })},
      {"step2.nu_floor", field([](EnhancerConfig& c) -> double& { return c.step2.nu_floor; })},
      {"metrics.frame_len",
       field([](EnhancerConfig& c) -> std::size_t& { return c.metrics.frame_len; })},
      {"metrics.hop", field([](EnhancerConfig& c) -> std::size_t& { return c.metrics.hop; })},
      {"metrics.segsnr_min_db",
       field([](EnhancerConfig& c) -> double& { return c.metrics.segsnr_min_db; })},
      {"metrics.segsnr_max_db",
       field([](EnhancerConfig& c) -> double& { return c.metrics.segsnr_max_db; })},
      {"metrics.overall_snr_max_db",
       field([](EnhancerConfig& c) -> double& { return c.metrics.overall_snr_max_db; })},
      {"spectrogram.db_floor",
       field([](EnhancerConfig& c) -> double& { return c.spectrogram_db_floor; })},
  };
  return fields;
}

}  // namespace detail

/// One `key = value` line per field, in a fixed order.
inline std::string serialize_config(const EnhancerConfig& cfg) {
  std::string out;
  for (const auto& [key, f] : detail::config_fields()) {
    out += key;
    out += " = ";
    out += f.get(cfg);
    out += '\n';
  }
  return out;
}

/// Applies overrides from `text` on top of `base` and validates the result.
inline EnhancerConfig parse_config(std::string_view text, EnhancerConfig base = {}) {
  const auto& fields = detail::config_fields();
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    detail::require(eq != std::string_view::npos, ErrorKind::Config,
                    "config line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    auto it = std::find_if(fields.begin(), fields.end(),
                           [&](const auto& f) { return f.first == key; });
    detail::require(it != fields.end(), ErrorKind::Config,
                    "config line " + std::to_string(line_no) + ": unknown key '" +
                        std::string(key) + "'");
    it->second.set(base, key, value);
  }
  base.validate();
  return base;
}

inline EnhancerConfig load_config(const std::optional<std::filesystem::path>& path) {
  if (!path) {
    EnhancerConfig cfg;
    cfg.validate();
    return cfg;
  }
  std::ifstream in(*path);
  if (!in) detail::fail(ErrorKind::Io, "cannot open config '" + path->string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace nssp
