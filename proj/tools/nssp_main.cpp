// Copyright 2026 The NSSP Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// nssp: enhance, mix, eval, spectrogram and batch front end.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nssp/nssp.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFormat = 3;
constexpr int kExitNumeric = 4;

int exit_code_for(nssp::ErrorKind kind) {
  switch (kind) {
    case nssp::ErrorKind::InvalidArgument:
    case nssp::ErrorKind::Config: return kExitUsage;
    case nssp::ErrorKind::Format: return kExitFormat;
    case nssp::ErrorKind::Degenerate: return kExitNumeric;
    case nssp::ErrorKind::Io: return kExitIo;
  }
  return kExitIo;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-step speech enhancement and evaluation harness"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string psi_mode;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--psi-mode", psi_mode, "phase compensation: snr | constant:<lambda>");

  std::string in_path, out_path, clean_path, noise_path, noisy_path, enhanced_path,
      csv_path, manifest_path;
  double snr_db = 0.0;
  std::int64_t offset = 0;
  unsigned threads = 0;

  auto* enhance = app.add_subcommand("enhance", "enhance a noisy WAV file");
  enhance->add_option("input", in_path, "noisy input WAV")->required();
  enhance->add_option("output", out_path, "enhanced output WAV")->required();

  auto* mix = app.add_subcommand("mix", "add noise to clean speech at a target SNR");
  mix->add_option("clean", clean_path, "clean WAV")->required();
  mix->add_option("noise", noise_path, "noise WAV (at least as long as clean)")->required();
  mix->add_option("snr_db", snr_db, "target SNR in dB")->required();
  mix->add_option("output", out_path, "noisy output WAV")->required();
  mix->add_option("--offset", offset, "noise start offset (wraps around the slack)");

  auto* eval = app.add_subcommand("eval", "SegSNR and overall SNR improvement");
  eval->add_option("clean", clean_path, "clean WAV")->required();
  eval->add_option("noisy", noisy_path, "noisy WAV")->required();
  eval->add_option("enhanced", enhanced_path, "enhanced WAV")->required();
  eval->add_option("csv", csv_path, "output CSV")->required();

  auto* spec = app.add_subcommand("spectrogram", "dB magnitude spectrogram as CSV");
  spec->add_option("input", in_path, "input WAV")->required();
  spec->add_option("csv", csv_path, "output CSV")->required();

  auto* batch = app.add_subcommand("batch", "mix -> enhance -> eval over a manifest");
  batch->add_option("manifest", manifest_path, "manifest: clean noise snr,snr,...")->required();
  batch->add_option("csv", csv_path, "output CSV")->required();
  batch->add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    auto cfg = nssp::load_config(config_path.empty()
                                     ? std::nullopt
                                     : std::optional<std::filesystem::path>(config_path));
    if (!psi_mode.empty()) {
      nssp::apply_psi_mode(cfg.step2, psi_mode);
      cfg.validate();
    }

    if (*enhance) {
      nssp::cmd_enhance(in_path, out_path, cfg);
    } else if (*mix) {
      nssp::cmd_mix(clean_path, noise_path, snr_db, out_path, offset);
    } else if (*eval) {
      const auto r = nssp::cmd_eval(clean_path, noisy_path, enhanced_path, csv_path, cfg);
      std::cout << "segsnr_impr_db=" << r.segsnr_improvement_db
                << " ovl_snr_impr_db=" << r.overall_snr_improvement_db << '\n';
    } else if (*spec) {
      nssp::cmd_spectrogram(in_path, csv_path, cfg);
    } else if (*batch) {
      const auto rows = nssp::cmd_batch(manifest_path, csv_path, cfg, threads);
      std::cout << rows.size() << " rows written to " << csv_path << '\n';
    }
  } catch (const nssp::Error& e) {
    std::cerr << "nssp: " << nssp::to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "nssp: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}
