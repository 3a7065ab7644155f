#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "batesqc/bates.hpp"

namespace batesqc {

/// What the corrector knows about the production: the endorsed prefix, digit
/// width and separator, plus the confidentiality designations in use.
struct CorrectionConfig {
  std::string expected_prefix;
  int expected_width = 1;
  Separator separator = Separator::None;
  std::vector<std::string> conf_vocabulary = {"CONFIDENTIAL"};
  double conf_max_distance = 0.2;
  /// Double-stamp scanning accepts any alphabetic prefix when set, otherwise
  /// only expected_prefix.
  bool double_stamp_any_prefix = true;

  /// Uppercases and deduplicates the vocabulary; throws InvalidArgument on
  /// an empty prefix/vocabulary or out-of-range threshold.
  void normalize();
};

enum class CorrectionFailure { EmptyText, PrefixNotFound, WidthMismatch, Unparseable };

std::string_view to_string(CorrectionFailure failure) noexcept;

/// Rule identifiers recorded in StampExtraction::applied_rules.
namespace rule {
inline constexpr std::string_view kWhitespace = "whitespace";
inline constexpr std::string_view kPrefixAnchor = "prefix-anchor";
inline constexpr std::string_view kOToZero = "o-to-zero";
inline constexpr std::string_view kWidthRepair = "width-repair";
inline constexpr std::string_view kSeparator = "separator";
}  // namespace rule

struct StampExtraction {
  std::string raw_text;
  std::optional<BatesNumber> corrected;
  std::optional<std::string> conf_match;
  std::vector<std::string> applied_rules;
  std::optional<CorrectionFailure> failure;
};

/// Drops every whitespace character (newlines included).
std::string normalize_whitespace(std::string_view text);

/// Anchors on the leftmost occurrence of the expected prefix, maps O/o to 0
/// in the digit zone and drops surplus leading zeros beyond the expected
/// width. Throws Error(PrefixNotFound).
std::string repair_digits(std::string_view text, const CorrectionConfig& cfg);

/// Full pipeline: whitespace -> prefix anchor -> O/0 -> width repair ->
/// parse -> prefix/width validation. Never throws; failures are reported
/// in the result with the raw text retained.
StampExtraction correct(std::string_view raw, const CorrectionConfig& cfg);

/// Closest vocabulary entry by Levenshtein distance over the uppercased,
/// whitespace-free text, if its normalized distance is within
/// cfg.conf_max_distance. Ties go to the earlier vocabulary entry.
std::optional<std::string> match_confidentiality(std::string_view raw,
                                                 const CorrectionConfig& cfg);

std::size_t levenshtein(std::string_view a, std::string_view b);

/// Every non-overlapping Bates-shaped token in the text that corrects to
/// the configured width, scanning left to right.
std::vector<BatesNumber> find_bates_tokens(std::string_view raw, const CorrectionConfig& cfg);

}  // namespace batesqc
