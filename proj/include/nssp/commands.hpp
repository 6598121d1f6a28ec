// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// File-level operations behind the `nssp` command line tool.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nssp/config.hpp"
#include "nssp/error.hpp"
#include "nssp/evaluation.hpp"
#include "nssp/phase_compensation.hpp"
#include "nssp/spectral_subtraction.hpp"
#include "nssp/wav.hpp"

namespace nssp {

/// Magnitude compensation followed by phase compensation.
inline Waveform enhance(const Waveform& noisy, const EnhancerConfig& cfg) {
  const Waveform z = enhance_step1(noisy, cfg.step1);
  return enhance_step2(z, cfg.step2);
}

inline constexpr const char* kBatchCsvHeader =
    "file_id,noise_id,snr_db,segsnr_impr_db,ovl_snr_impr_db,pesq_external";

inline constexpr const char* kEvalCsvHeader =
    "overall_snr_noisy_db,overall_snr_enhanced_db,ovl_snr_impr_db,"
    "segsnr_noisy_db,segsnr_enhanced_db,segsnr_impr_db,n_frames,pesq_external";

struct BatchResultRow {
  std::string file_id;
  std::string noise_id;
  double snr_db = 0.0;
  double segsnr_improvement_db = 0.0;
  double overall_snr_improvement_db = 0.0;
  std::optional<double> pesq_external;
};

struct ManifestEntry {
  std::filesystem::path clean;
  std::filesystem::path noise;
  std::vector<double> snrs_db;
};

namespace detail {

inline std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

/// Writes to a sibling temp file and renames it over `path`.
inline void write_file_atomic(const std::filesystem::path& path,
                              const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open '" + tmp.string() + "' for writing");
    out << contents;
    out.flush();
    if (!out) fail(ErrorKind::Io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorKind::Io, "cannot rename temp file onto '" + path.string() + "'");
  }
}

}  // namespace detail

inline std::string format_batch_row(const BatchResultRow& r) {
  return r.file_id + ',' + r.noise_id + ',' + detail::fixed6(r.snr_db) + ',' +
         detail::fixed6(r.segsnr_improvement_db) + ',' +
         detail::fixed6(r.overall_snr_improvement_db) + ',' +
         (r.pesq_external ? detail::fixed6(*r.pesq_external) : std::string());
}

inline std::string format_batch_csv(const std::vector<BatchResultRow>& rows) {
  std::string out = std::string(kBatchCsvHeader) + '\n';
  for (const auto& r : rows) out += format_batch_row(r) + '\n';
  return out;
}

inline std::string format_eval_csv(const MetricsReport& r) {
  using detail::fixed6;
  return std::string(kEvalCsvHeader) + '\n' + fixed6(r.overall_snr_noisy_db) + ',' +
         fixed6(r.overall_snr_enhanced_db) + ',' + fixed6(r.overall_snr_improvement_db) +
         ',' + fixed6(r.segsnr_noisy_db) + ',' + fixed6(r.segsnr_enhanced_db) + ',' +
         fixed6(r.segsnr_improvement_db) + ',' + std::to_string(r.n_frames) + ",\n";
}

/// Manifest lines: `clean_path noise_path snr[,snr...] [snr ...]`. Blank lines
/// and `#` comments are skipped; relative paths resolve against `base_dir`.
inline std::vector<ManifestEntry> parse_manifest(std::string_view text,
                                                 const std::filesystem::path& base_dir) {
  std::vector<ManifestEntry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream tokens(raw);
    std::string clean, noise;
    if (!(tokens >> clean)) continue;
    const std::string where = "manifest line " + std::to_string(line_no);
    detail::require(static_cast<bool>(tokens >> noise), ErrorKind::Format,
                    where + ": expected 'clean_path noise_path snr_list'");
    ManifestEntry e{resolve(clean), resolve(noise), {}};
    std::string tok;
    while (tokens >> tok) {
      std::replace(tok.begin(), tok.end(), ',', ' ');
      std::istringstream parts(tok);
      std::string part;
      while (parts >> part) {
        try {
          e.snrs_db.push_back(detail::parse_double("snr", part));
        } catch (const Error&) {
          detail::fail(ErrorKind::Format, where + ": bad SNR value '" + part + "'");
        }
      }
    }
    detail::require(!e.snrs_db.empty(), ErrorKind::Format, where + ": no SNR values");
    entries.push_back(std::move(e));
  }
  detail::require(!entries.empty(), ErrorKind::Format, "manifest has no entries");
  return entries;
}

inline void cmd_enhance(const std::filesystem::path& in_path,
                        const std::filesystem::path& out_path, const EnhancerConfig& cfg) {
  write_wav(out_path, enhance(read_wav(in_path), cfg));
}

inline void cmd_mix(const std::filesystem::path& clean_path,
                    const std::filesystem::path& noise_path, double snr_db,
                    const std::filesystem::path& out_path, std::int64_t seed_offset = 0) {
  const auto clean = read_wav(clean_path);
  const auto noise = read_wav(noise_path);
  detail::require(clean.sample_rate_hz() == noise.sample_rate_hz(), ErrorKind::Format,
                  "sample rate mismatch: " + clean_path.string() + " is " +
                      std::to_string(clean.sample_rate_hz()) + " Hz, " +
                      noise_path.string() + " is " +
                      std::to_string(noise.sample_rate_hz()) + " Hz");
  write_wav(out_path, mix_at_snr(clean, noise, snr_db, seed_offset));
}

inline MetricsReport cmd_eval(const std::filesystem::path& clean_path,
                              const std::filesystem::path& noisy_path,
                              const std::filesystem::path& enhanced_path,
                              const std::filesystem::path& csv_out,
                              const EnhancerConfig& cfg) {
  const auto report = improvement_report(read_wav(clean_path), read_wav(noisy_path),
                                         read_wav(enhanced_path), cfg.metrics);
  detail::write_file_atomic(csv_out, format_eval_csv(report));
  return report;
}

inline void cmd_spectrogram(const std::filesystem::path& in_path,
                            const std::filesystem::path& csv_out, const EnhancerConfig& cfg) {
  const auto m = spectrogram(read_wav(in_path), cfg.step2.layout2, cfg.spectrogram_db_floor);
  std::ostringstream os;
  write_spectrogram_csv(os, m);
  detail::write_file_atomic(csv_out, os.str());
}

/// Runs mix -> enhance -> eval for every (clean, noise, snr) cell. Cells run
/// on up to `threads` workers; rows come back in manifest order.
inline std::vector<BatchResultRow> run_batch(const std::vector<ManifestEntry>& entries,
                                             const EnhancerConfig& cfg,
                                             unsigned threads = 0) {
  struct Cell {
    std::size_t entry;
    double snr_db;
  };
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (double snr : entries[i].snrs_db) cells.push_back({i, snr});
  }

  // Decode every file up front so format errors surface before any work.
  std::vector<Waveform> cleans, noises;
  for (const auto& e : entries) {
    cleans.push_back(read_wav(e.clean));
    noises.push_back(read_wav(e.noise));
    detail::require(cleans.back().sample_rate_hz() == noises.back().sample_rate_hz(),
                    ErrorKind::Format,
                    "sample rate mismatch between '" + e.clean.string() + "' and '" +
                        e.noise.string() + "'");
  }

  std::vector<BatchResultRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      try {
        const auto& cell = cells[c];
        const auto& e = entries[cell.entry];
        const auto& clean = cleans[cell.entry];
        const auto noisy = mix_at_snr(clean, noises[cell.entry], cell.snr_db);
        const auto enhanced = enhance(noisy, cfg);
        const auto report = improvement_report(clean, noisy, enhanced, cfg.metrics);
        rows[c] = BatchResultRow{e.clean.stem().string(), e.noise.stem().string(),
                                 cell.snr_db, report.segsnr_improvement_db,
                                 report.overall_snr_improvement_db, std::nullopt};
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

inline std::vector<BatchResultRow> cmd_batch(const std::filesystem::path& manifest_path,
                                             const std::filesystem::path& csv_out,
                                             const EnhancerConfig& cfg, unsigned threads = 0) {
  std::ifstream in(manifest_path);
  if (!in) detail::fail(ErrorKind::Io, "cannot open manifest '" + manifest_path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto entries = parse_manifest(ss.str(), manifest_path.parent_path());
  const auto rows = run_batch(entries, cfg, threads);
  detail::write_file_atomic(csv_out, format_batch_csv(rows));
  return rows;
}

}  // namespace nssp
