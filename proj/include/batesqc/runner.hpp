#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include "batesqc/image.hpp"
#include "batesqc/manifest.hpp"
#include "batesqc/ocr.hpp"
#include "batesqc/postproc.hpp"
#include "batesqc/validate.hpp"

namespace batesqc {

struct ManifestSource {
  std::filesystem::path path;
  LoadOptions options;
};

struct OutputConfig {
  std::optional<std::filesystem::path> json_path;
  std::optional<std::filesystem::path> csv_path;
  std::optional<std::filesystem::path> dump_regions_dir;
};

struct JobConfig {
  ManifestSource manifest;
  /// Base directory for relative image paths; empty means the manifest's
  /// directory when run_job loads the manifest itself.
  std::filesystem::path images_dir;
  /// Band height, split and clamping; the band itself comes from each page.
  RegionSpec region;
  PreprocessOptions preprocess;
  OcrBackendConfig ocr;
  /// An empty prefix or zero width is taken from the manifest.
  CorrectionConfig correction{.expected_prefix = {}, .expected_width = 0};
  int workers = 1;
  int batch_size = 16;
  bool check_manifest_gaps = false;
  /// Progress line on stderr every N pages; 0 disables.
  std::size_t progress_every = 0;
  OutputConfig output;

  void validate() const;
};

/// Loads the manifest and runs every page through crop -> split -> OCR ->
/// correction -> comparison. Per-page failures become OcrFailure findings;
/// only FatalConfig aborts the job.
ValidationReport run_job(const JobConfig& cfg);

/// As above with an already-loaded manifest.
ValidationReport run_job(const JobConfig& cfg, const ProductionManifest& manifest);

/// Exit codes for emit_report and the CLI.
inline constexpr int kExitClean = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitFindings = 2;

/// Writes the configured JSON/CSV outputs. Returns kExitClean when every
/// finding is a Match, kExitFindings otherwise and kExitFatal (with a
/// diagnostic on stderr) when an output cannot be written.
int emit_report(const ValidationReport& report, const JobConfig& cfg);

/// Canonical serialization: fixed key order, findings already sorted.
std::string report_to_json(const ValidationReport& report);
std::string report_to_csv(const ValidationReport& report);

}  // namespace batesqc
