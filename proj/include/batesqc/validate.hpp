#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "batesqc/manifest.hpp"
#include "batesqc/postproc.hpp"

namespace batesqc {

/// Declaration order is the report's kind order.
enum class FindingKind {
  Match,
  BatesMismatch,
  BatesNotExtracted,
  MissingConfidentiality,
  ConfidentialityMismatch,
  SequenceGap,
  DoubleStamp,
  OcrFailure,
};

inline constexpr std::array<FindingKind, 8> kAllFindingKinds = {
    FindingKind::Match,
    FindingKind::BatesMismatch,
    FindingKind::BatesNotExtracted,
    FindingKind::MissingConfidentiality,
    FindingKind::ConfidentialityMismatch,
    FindingKind::SequenceGap,
    FindingKind::DoubleStamp,
    FindingKind::OcrFailure,
};

std::string_view to_string(FindingKind kind) noexcept;

/// Exactly one of these per page.
bool is_primary_kind(FindingKind kind) noexcept;

struct Finding {
  FindingKind kind = FindingKind::Match;
  std::optional<std::size_t> page;  // manifest index; absent only for SequenceGap
  std::optional<std::string> expected;
  std::optional<std::string> observed;
  std::optional<std::string> image;
  std::string detail;
  /// Primary findings only: the raw engine text equalled the expected
  /// string byte for byte.
  bool raw_exact = false;
};

struct ValidationReport {
  std::size_t total_pages = 0;
  double raw_match_rate = 1.0;
  double corrected_match_rate = 1.0;
  double conf_missing_rate = 0.0;
  std::vector<Finding> findings;
  std::array<std::size_t, kAllFindingKinds.size()> per_kind_counts{};

  std::size_t count(FindingKind kind) const {
    return per_kind_counts[static_cast<std::size_t>(kind)];
  }
};

/// Findings for one page: one primary Bates finding plus at most one
/// confidentiality finding.
std::vector<Finding> compare_page(const PageRecord& rec, const StampExtraction& bates_ext,
                                  const StampExtraction& conf_ext, std::size_t page_index = 0);

/// Values in [first, last] absent from `observed`, ascending. Throws
/// RangeInvalid when first > last or any number is from another series.
std::vector<BatesNumber> detect_gaps(const std::vector<BatesNumber>& observed,
                                     const BatesNumber& first, const BatesNumber& last);

/// True when the right-corner text holds two or more Bates tokens.
bool detect_double_stamp(std::string_view right_corner_raw, const CorrectionConfig& cfg);

/// Sorts findings (page order, then kind; gaps last by value) and computes
/// the rates. Throws InconsistentInput when the primary findings do not
/// cover exactly `total_pages` distinct pages.
ValidationReport summarize(std::vector<Finding> findings, std::size_t total_pages);

}  // namespace batesqc
