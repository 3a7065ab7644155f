#include "batesqc/validate.hpp"

#include <algorithm>
#include <tuple>

#include "batesqc/error.hpp"

namespace batesqc {

std::string_view to_string(FindingKind kind) noexcept {
  switch (kind) {
    case FindingKind::Match: return "Match";
    case FindingKind::BatesMismatch: return "BatesMismatch";
    case FindingKind::BatesNotExtracted: return "BatesNotExtracted";
    case FindingKind::MissingConfidentiality: return "MissingConfidentiality";
    case FindingKind::ConfidentialityMismatch: return "ConfidentialityMismatch";
    case FindingKind::SequenceGap: return "SequenceGap";
    case FindingKind::DoubleStamp: return "DoubleStamp";
    case FindingKind::OcrFailure: return "OcrFailure";
  }
  return "Unknown";
}

bool is_primary_kind(FindingKind kind) noexcept {
  return kind == FindingKind::Match || kind == FindingKind::BatesMismatch ||
         kind == FindingKind::BatesNotExtracted || kind == FindingKind::OcrFailure;
}

std::vector<Finding> compare_page(const PageRecord& rec, const StampExtraction& bates_ext,
                                  const StampExtraction& conf_ext, std::size_t page_index) {
  std::vector<Finding> out;
  const std::string expected = render_bates(rec.bates);

  Finding bates;
  bates.page = page_index;
  bates.expected = expected;
  bates.image = rec.image_path;
  bates.raw_exact = bates_ext.raw_text == expected;
  if (bates_ext.corrected) {
    const std::string observed = render_bates(*bates_ext.corrected);
    bates.observed = observed;
    bates.kind = observed == expected ? FindingKind::Match : FindingKind::BatesMismatch;
    if (!bates_ext.applied_rules.empty()) {
      std::string rules;
      for (const auto& r : bates_ext.applied_rules) rules += (rules.empty() ? "" : ",") + r;
      bates.detail = "rules: " + rules;
    }
  } else {
    const CorrectionFailure why = bates_ext.failure.value_or(CorrectionFailure::Unparseable);
    bates.kind = why == CorrectionFailure::EmptyText ? FindingKind::BatesNotExtracted
                                                     : FindingKind::BatesMismatch;
    if (why != CorrectionFailure::EmptyText) bates.observed = bates_ext.raw_text;
    bates.detail = std::string(to_string(why));
  }
  out.push_back(std::move(bates));

  if (rec.expected_confidentiality) {
    if (!conf_ext.conf_match) {
      Finding f;
      f.kind = FindingKind::MissingConfidentiality;
      f.page = page_index;
      f.expected = expected;
      f.image = rec.image_path;
      f.detail = "expected " + *rec.expected_confidentiality;
      if (!conf_ext.raw_text.empty()) f.observed = conf_ext.raw_text;
      out.push_back(std::move(f));
    } else if (*conf_ext.conf_match != *rec.expected_confidentiality) {
      Finding f;
      f.kind = FindingKind::ConfidentialityMismatch;
      f.page = page_index;
      f.expected = expected;
      f.observed = *conf_ext.conf_match;
      f.image = rec.image_path;
      f.detail = "expected " + *rec.expected_confidentiality;
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<BatesNumber> detect_gaps(const std::vector<BatesNumber>& observed,
                                     const BatesNumber& first, const BatesNumber& last) {
  if (!same_series(first, last)) {
    throw Error(ErrorCode::RangeInvalid, "range endpoints are from different series");
  }
  if (first.value > last.value) {
    throw Error(ErrorCode::RangeInvalid,
                render_bates(first) + " is after " + render_bates(last));
  }
  std::vector<std::uint64_t> values;
  values.reserve(observed.size());
  for (const BatesNumber& b : observed) {
    if (!same_series(b, first)) {
      throw Error(ErrorCode::RangeInvalid, render_bates(b) + " is not in the range's series");
    }
    if (b.value >= first.value && b.value <= last.value) values.push_back(b.value);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<BatesNumber> gaps;
  BatesNumber cursor = first;
  auto emit_until = [&](std::uint64_t stop) {
    for (; cursor.value < stop; ++cursor.value) gaps.push_back(cursor);
  };
  for (std::uint64_t v : values) {
    emit_until(v);
    cursor.value = v + 1;
  }
  if (cursor.value <= last.value) emit_until(last.value + 1);
  return gaps;
}

bool detect_double_stamp(std::string_view right_corner_raw, const CorrectionConfig& cfg) {
  return find_bates_tokens(right_corner_raw, cfg).size() >= 2;
}

ValidationReport summarize(std::vector<Finding> findings, std::size_t total_pages) {
  ValidationReport report;
  report.total_pages = total_pages;

  std::vector<int> primary_seen(total_pages, 0);
  std::size_t raw_matches = 0;
  for (const Finding& f : findings) {
    if (f.kind == FindingKind::SequenceGap) {
      if (f.page || !f.expected) {
        throw Error(ErrorCode::InconsistentInput, "gap findings carry an expected value and no page");
      }
    } else if (!f.page) {
      throw Error(ErrorCode::InconsistentInput,
                  std::string(to_string(f.kind)) + " finding without a page");
    } else if (*f.page >= total_pages) {
      throw Error(ErrorCode::InconsistentInput, "finding refers to page beyond total");
    }
    if (is_primary_kind(f.kind)) {
      if (++primary_seen[*f.page] > 1) {
        throw Error(ErrorCode::InconsistentInput,
                    "page " + std::to_string(*f.page) + " has more than one Bates outcome");
      }
      if (f.kind == FindingKind::Match && f.raw_exact) ++raw_matches;
    }
    ++report.per_kind_counts[static_cast<std::size_t>(f.kind)];
  }
  for (std::size_t p = 0; p < total_pages; ++p) {
    if (primary_seen[p] != 1) {
      throw Error(ErrorCode::InconsistentInput,
                  "page " + std::to_string(p) + " has no Bates outcome");
    }
  }

  if (total_pages > 0) {
    const auto n = static_cast<double>(total_pages);
    report.raw_match_rate = static_cast<double>(raw_matches) / n;
    report.corrected_match_rate = static_cast<double>(report.count(FindingKind::Match)) / n;
    report.conf_missing_rate =
        static_cast<double>(report.count(FindingKind::MissingConfidentiality)) / n;
  }

  std::stable_sort(findings.begin(), findings.end(), [](const Finding& a, const Finding& b) {
    const bool a_gap = !a.page;
    const bool b_gap = !b.page;
    if (a_gap != b_gap) return b_gap;
    if (!a_gap) return std::tie(*a.page, a.kind) < std::tie(*b.page, b.kind);
    return std::tie(a.expected, a.detail) < std::tie(b.expected, b.detail);
  });
  report.findings = std::move(findings);
  return report;
}

}  // namespace batesqc
