#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "batesqc/bates.hpp"
#include "batesqc/manifest.hpp"
#include "batesqc/ocr.hpp"

namespace batesqc {

enum class FaultKind { ConfMissing, OmitBates, WrongBates, DoubleStamp };

std::string_view to_string(FaultKind kind) noexcept;

struct FaultRates {
  double omit_bates = 0.0;
  double wrong_bates = 0.0;
  double double_stamp = 0.0;
};

struct CorpusSpec {
  std::uint64_t seed = 0;
  std::size_t pages = 1;
  std::string prefix = "ABC";
  int width = 7;
  Separator separator = Separator::None;
  std::uint64_t start_value = 1;
  int page_width = 1275;
  int page_height = 1650;
  std::vector<std::string> conf_vocabulary = {"CONFIDENTIAL"};
  double conf_missing_rate = 0.0;
  FaultRates fault_rates;
  /// Prefix of the older endorsement drawn on double-stamped pages.
  std::string double_stamp_prefix = "PRV";
  int workers = 1;

  /// Throws InvalidArgument.
  void validate() const;
};

struct FaultRecord {
  std::size_t page_index = 0;
  std::string bates;  // the page's intended (manifest) number
  FaultKind kind = FaultKind::ConfMissing;
  std::string detail;
};

struct Corpus {
  ProductionManifest manifest;
  std::vector<FaultRecord> ledger;
  /// Text actually drawn in each corner, keyed by region fingerprint;
  /// usable directly as a scripted OCR backend.
  OcrScript rendered_text;
};

/// Deterministic per-page fault selection. For a fixed (seed, tag) the
/// number of selected pages among the first n is floor(n * rate + phase)
/// for a seed-derived phase in [0, 1), so it is always within one page of
/// n * rate, and adding pages never changes earlier selections.
bool fault_selected(std::uint64_t seed, std::string_view tag, std::size_t index, double rate);

/// Renders the corpus into out_dir: one PNG per page, manifest.csv,
/// ledger.json and ocr_script.json. Identical specs produce identical bytes.
Corpus generate_corpus(const CorpusSpec& spec, const std::filesystem::path& out_dir);

/// Deterministic 64-bit mixing used for all seeded choices.
std::uint64_t mix64(std::uint64_t x) noexcept;

enum class Corruption { Newlines, Space, ZeroToO, PrefixExtraO };

inline constexpr std::array<Corruption, 4> kAllCorruptions = {
    Corruption::Newlines, Corruption::Space, Corruption::ZeroToO, Corruption::PrefixExtraO};

std::string_view to_string(Corruption c) noexcept;

/// Applies one instance of the OCR error pattern to a valid rendered Bates
/// string at a seed-chosen position. ZeroToO is a no-op when the digits
/// contain no zero.
std::string corrupt_ocr_text(std::string_view text, Corruption pattern, std::uint64_t seed);

/// Applies several distinct patterns. Positions are chosen against the
/// original string, and patterns are applied in the fixed order
/// ZeroToO, PrefixExtraO, Space, Newlines.
std::string corrupt_ocr_text(std::string_view text, std::span<const Corruption> patterns,
                             std::uint64_t seed);

}  // namespace batesqc
