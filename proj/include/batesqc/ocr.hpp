#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "batesqc/image.hpp"

namespace batesqc {

struct OcrResult {
  std::string raw_text;  // exactly as the engine produced it
  std::string engine_id;
  std::int64_t duration_ms = 0;
};

enum class BackendKind { ExternalCommand, Scripted };

/// Maps region fingerprints to the text the scripted engine returns.
using OcrScript = std::map<std::string, std::string>;

inline constexpr std::string_view kDefaultOcrCommand = "tesseract {input} stdout --psm 6";

struct OcrBackendConfig {
  BackendKind kind = BackendKind::ExternalCommand;
  std::string command_template = std::string(kDefaultOcrCommand);
  std::shared_ptr<const OcrScript> script;
  int timeout_ms = 60000;
  /// Environment variables handed to the engine process. Empty means the
  /// full parent environment is inherited.
  std::vector<std::string> env_passthrough = {"PATH",   "HOME",   "LANG",
                                              "LC_ALL", "TMPDIR", "TESSDATA_PREFIX",
                                              "OMP_THREAD_LIMIT"};
  /// Where region temp files go; empty selects the system temp directory.
  std::filesystem::path temp_dir;

  /// Throws InvalidArgument when the invariants do not hold.
  void validate() const;
};

/// Key used by the scripted backend:
///   <image stem>[#<page>][@top]-<left|right>
/// e.g. "p1-right" for the bottom-right corner of p1.tif.
std::string region_fingerprint(const PageImage& region);
std::string region_fingerprint(std::string_view source_path, std::size_t page_index, Band band,
                               Corner corner);

/// Single-owner recognizer; never share one instance between threads.
class OcrEngine {
 public:
  virtual ~OcrEngine() = default;
  virtual OcrResult recognize(const PageImage& region) = 0;
  virtual const std::string& id() const = 0;
};

/// Throws BackendUnavailable when the external binary cannot be found and
/// InvalidArgument for an invalid config.
std::unique_ptr<OcrEngine> make_engine(const OcrBackendConfig& cfg);

/// Splits a command template into argv, honoring single and double quotes.
std::vector<std::string> split_command(std::string_view command);

/// Script files are a flat JSON object of fingerprint -> text.
OcrScript load_ocr_script(const std::filesystem::path& path);
void save_ocr_script(const std::filesystem::path& path, const OcrScript& script);

}  // namespace batesqc
