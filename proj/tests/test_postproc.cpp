#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "batesqc/error.hpp"
#include "batesqc/postproc.hpp"
#include "batesqc/synth.hpp"

namespace batesqc {
namespace {

CorrectionConfig config(const std::string& prefix, int width, Separator sep = Separator::None) {
  CorrectionConfig cfg;
  cfg.expected_prefix = prefix;
  cfg.expected_width = width;
  cfg.separator = sep;
  cfg.normalize();
  return cfg;
}

BatesNumber random_bates(std::mt19937_64& rng) {
  static const std::string letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  BatesNumber b;
  const int prefix_len = 1 + static_cast<int>(rng() % 4);
  for (int i = 0; i < prefix_len; ++i) b.prefix += letters[rng() % letters.size()];
  b.separator = static_cast<Separator>(rng() % 4);
  b.width = 1 + static_cast<int>(rng() % 12);
  // Favour short values so digit zones carry zeros.
  const std::uint64_t limit = width_limit(b.width);
  b.value = (rng() % 2 == 0) ? rng() % std::min<std::uint64_t>(limit, 1000) : rng() % limit;
  return b;
}

TEST(NormalizeWhitespace, Examples) {
  EXPECT_EQ(normalize_whitespace("\nABC000123\n"), "ABC000123");
  EXPECT_EQ(normalize_whitespace("ABC 000123"), "ABC000123");
  EXPECT_EQ(normalize_whitespace("ABC000123"), "ABC000123");
  EXPECT_EQ(normalize_whitespace(" \tA B\r\nC "), "ABC");
}

TEST(RepairDigits, Examples) {
  const auto cfg = config("ABC", 6);
  EXPECT_EQ(repair_digits("ABCO00123", cfg), "ABC000123");
  EXPECT_EQ(repair_digits("ABCO000123", cfg), "ABC000123");
  EXPECT_EQ(repair_digits("ABC000123", cfg), "ABC000123");
  EXPECT_EQ(repair_digits("xxABCo0o123", cfg), "ABC000123");
}

TEST(RepairDigits, PrefixNotFound) {
  try {
    repair_digits("A8C000123", config("ABC", 6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PrefixNotFound);
  }
}

TEST(Correct, Examples) {
  const auto cfg = config("ABC", 6);
  const StampExtraction a = correct("\nABC OO0123\n", cfg);
  ASSERT_TRUE(a.corrected);
  EXPECT_FALSE(a.failure);
  EXPECT_EQ(render_bates(*a.corrected), "ABC000123");
  EXPECT_EQ(a.applied_rules, (std::vector<std::string>{"whitespace", "o-to-zero"}));
  EXPECT_EQ(a.raw_text, "\nABC OO0123\n");

  const StampExtraction empty = correct("", cfg);
  EXPECT_EQ(empty.failure, CorrectionFailure::EmptyText);
  EXPECT_FALSE(empty.corrected);

  const StampExtraction bad = correct("ABC00B123", cfg);
  EXPECT_EQ(bad.failure, CorrectionFailure::Unparseable);
  EXPECT_EQ(bad.raw_text, "ABC00B123");
}

TEST(Correct, FailureReasons) {
  const auto cfg = config("ABC", 6);
  EXPECT_EQ(correct(" \n ", cfg).failure, CorrectionFailure::EmptyText);
  EXPECT_EQ(correct("A8C000123", cfg).failure, CorrectionFailure::PrefixNotFound);
  EXPECT_EQ(correct("ABC00123", cfg).failure, CorrectionFailure::WidthMismatch);
  EXPECT_EQ(correct("ABC1000123", cfg).failure, CorrectionFailure::WidthMismatch);
  EXPECT_EQ(correct("ABC", cfg).failure, CorrectionFailure::Unparseable);
}

TEST(Correct, RuleRecording) {
  const auto cfg = config("ABC", 6);
  EXPECT_TRUE(correct("ABC000123", cfg).applied_rules.empty());
  EXPECT_EQ(correct("ABCO000123", cfg).applied_rules,
            (std::vector<std::string>{"o-to-zero", "width-repair"}));
  EXPECT_EQ(correct("1ABC000123", cfg).applied_rules, (std::vector<std::string>{"prefix-anchor"}));
  const auto dashed = config("ABC", 6, Separator::Dash);
  const StampExtraction d = correct("ABC000123", dashed);
  ASSERT_TRUE(d.corrected);
  EXPECT_EQ(render_bates(*d.corrected), "ABC-000123");
  EXPECT_EQ(d.applied_rules, (std::vector<std::string>{"separator"}));
  EXPECT_TRUE(correct("ABC-000123", dashed).applied_rules.empty());
  EXPECT_EQ(correct("ABCO-000123", dashed).applied_rules,
            (std::vector<std::string>{"o-to-zero", "width-repair"}));
}

TEST(CorrectionConfig, Normalize) {
  CorrectionConfig cfg;
  cfg.expected_prefix = "ABC";
  cfg.conf_vocabulary = {"confidential", "CONFIDENTIAL", "Highly Confidential"};
  cfg.normalize();
  EXPECT_EQ(cfg.conf_vocabulary, (std::vector<std::string>{"CONFIDENTIAL", "HIGHLY CONFIDENTIAL"}));
  CorrectionConfig empty_prefix;
  EXPECT_THROW(empty_prefix.normalize(), Error);
  CorrectionConfig bad_threshold;
  bad_threshold.expected_prefix = "A";
  bad_threshold.conf_max_distance = 1.0;
  EXPECT_THROW(bad_threshold.normalize(), Error);
  CorrectionConfig no_vocab;
  no_vocab.expected_prefix = "A";
  no_vocab.conf_vocabulary.clear();
  EXPECT_THROW(no_vocab.normalize(), Error);
}

class Inversion : public ::testing::TestWithParam<std::vector<Corruption>> {};

TEST_P(Inversion, CorrectRecoversOriginal) {
  const std::vector<Corruption> patterns = GetParam();
  std::mt19937_64 rng(0xB47E5 + patterns.size() * 31 + static_cast<int>(patterns.front()));
  int effective = 0;
  for (int i = 0; i < 1000; ++i) {
    const BatesNumber b = random_bates(rng);
    const std::string text = render_bates(b);
    const std::string raw = corrupt_ocr_text(text, patterns, rng());
    if (raw != text) {
      ++effective;
    }
    const auto cfg = config(b.prefix, b.width, b.separator);
    const StampExtraction ex = correct(raw, cfg);
    ASSERT_TRUE(ex.corrected) << "raw '" << raw << "' failed: " << to_string(*ex.failure);
    ASSERT_EQ(*ex.corrected, b) << "raw '" << raw << "'";
    ASSERT_EQ(render_bates(*ex.corrected), text);
  }
  EXPECT_GT(effective, 0);
}

std::vector<std::vector<Corruption>> all_compositions() {
  std::vector<std::vector<Corruption>> out;
  const std::size_t n = kAllCorruptions.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<Corruption> set;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) set.push_back(kAllCorruptions[i]);
    }
    if (set.size() <= 3) out.push_back(set);
  }
  return out;
}

std::string composition_name(const ::testing::TestParamInfo<std::vector<Corruption>>& info) {
  std::string name;
  for (Corruption c : info.param) {
    std::string part(to_string(c));
    part.erase(std::remove(part.begin(), part.end(), '_'), part.end());
    name += (name.empty() ? "" : "_") + part;
  }
  return name;
}

INSTANTIATE_TEST_SUITE_P(Patterns, Inversion, ::testing::ValuesIn(all_compositions()),
                         composition_name);

std::string random_raw(std::mt19937_64& rng, const std::string& prefix) {
  static const std::string alphabet = "0123456789OoO0 \n-_AB";
  std::string s;
  const int pre = static_cast<int>(rng() % 3);
  for (int i = 0; i < pre; ++i) s += alphabet[rng() % alphabet.size()];
  if (rng() % 5 != 0) s += prefix;
  const int len = static_cast<int>(rng() % 12);
  for (int i = 0; i < len; ++i) s += alphabet[rng() % alphabet.size()];
  return s;
}

TEST(Correct, Idempotence) {
  std::mt19937_64 rng(77);
  int succeeded = 0;
  for (int i = 0; i < 5000; ++i) {
    const int width = 1 + static_cast<int>(rng() % 6);
    const Separator sep = static_cast<Separator>(rng() % 4);
    const auto cfg = config("ABC", width, sep);
    const std::string raw = random_raw(rng, "ABC");
    const StampExtraction first = correct(raw, cfg);
    ASSERT_NE(first.corrected.has_value(), first.failure.has_value());
    if (!first.corrected) continue;
    ++succeeded;
    const StampExtraction again = correct(render_bates(*first.corrected), cfg);
    ASSERT_TRUE(again.corrected) << raw;
    EXPECT_EQ(*again.corrected, *first.corrected) << raw;
    EXPECT_FALSE(again.failure);
  }
  EXPECT_GT(succeeded, 100);
}

TEST(Correct, NeverFabricatesDigits) {
  std::mt19937_64 rng(91);
  for (int i = 0; i < 5000; ++i) {
    const int width = 1 + static_cast<int>(rng() % 6);
    const auto cfg = config("ABC", width, static_cast<Separator>(rng() % 4));
    const std::string raw = random_raw(rng, "ABC");
    const StampExtraction ex = correct(raw, cfg);
    if (!ex.corrected) continue;
    std::map<char, int> available;
    for (char c : raw) {
      if (c >= '0' && c <= '9') ++available[c];
      if (c == 'O' || c == 'o') ++available['0'];
    }
    const std::string rendered = render_bates(*ex.corrected);
    for (char c : rendered.substr(rendered.size() - static_cast<std::size_t>(width))) {
      ASSERT_GT(available[c]--, 0) << "digit '" << c << "' fabricated from '" << raw << "'";
    }
  }
}

TEST(Levenshtein, MatchesNaiveOracle) {
  const std::function<std::size_t(std::string_view, std::string_view)> naive =
      [&](std::string_view a, std::string_view b) -> std::size_t {
    if (a.empty()) return b.size();
    if (b.empty()) return a.size();
    const std::size_t cost = a.back() == b.back() ? 0 : 1;
    return std::min({naive(a.substr(0, a.size() - 1), b) + 1,
                     naive(a, b.substr(0, b.size() - 1)) + 1,
                     naive(a.substr(0, a.size() - 1), b.substr(0, b.size() - 1)) + cost});
  };
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    std::string a;
    std::string b;
    for (std::size_t k = rng() % 7; k > 0; --k) a += static_cast<char>('a' + rng() % 3);
    for (std::size_t k = rng() % 7; k > 0; --k) b += static_cast<char>('a' + rng() % 3);
    ASSERT_EQ(levenshtein(a, b), naive(a, b)) << a << " / " << b;
  }
  EXPECT_EQ(levenshtein("C0NFIDENTIAL", "CONFIDENTIAL"), 1u);
  EXPECT_EQ(levenshtein("", "abc"), 3u);
}

TEST(MatchConfidentiality, Examples) {
  const auto cfg = config("ABC", 6);
  EXPECT_EQ(match_confidentiality("CONFIDENTIAL", cfg), "CONFIDENTIAL");
  EXPECT_EQ(match_confidentiality("C0NFIDENTIAL", cfg), "CONFIDENTIAL");
  EXPECT_EQ(match_confidentiality("", cfg), std::nullopt);
  EXPECT_EQ(match_confidentiality("confidential\n", cfg), "CONFIDENTIAL");
  EXPECT_EQ(match_confidentiality("PUBLIC", cfg), std::nullopt);
}

TEST(MatchConfidentiality, ThresholdAndTies) {
  auto cfg = config("ABC", 6);
  cfg.conf_vocabulary = {"AAAB", "AAAC"};
  cfg.conf_max_distance = 0.25;
  EXPECT_EQ(match_confidentiality("AAAD", cfg), "AAAB");
  cfg.conf_vocabulary = {"AAAC", "AAAB"};
  EXPECT_EQ(match_confidentiality("AAAD", cfg), "AAAC");
  cfg.conf_max_distance = 0.2;
  EXPECT_EQ(match_confidentiality("AAAD", cfg), std::nullopt);

  auto multi = config("ABC", 6);
  multi.conf_vocabulary = {"CONFIDENTIAL", "HIGHLY CONFIDENTIAL"};
  multi.normalize();
  EXPECT_EQ(match_confidentiality("HIGHLY CONFIDENTIAL", multi), "HIGHLY CONFIDENTIAL");
  EXPECT_EQ(match_confidentiality("HIGHLYCONFIDENTIAL", multi), "HIGHLY CONFIDENTIAL");
  EXPECT_EQ(match_confidentiality("CONFIDENTAL", multi), "CONFIDENTIAL");
}

TEST(MatchConfidentiality, InsensitiveToInternalWhitespace) {
  auto cfg = config("ABC", 6);
  cfg.conf_vocabulary = {"CONFIDENTIAL", "HIGHLY CONFIDENTIAL", "ATTORNEYS EYES ONLY"};
  cfg.normalize();
  std::mt19937_64 rng(17);
  const std::vector<std::string> samples = {"CONFIDENTIAL", "C0NFIDENTIAL", "HIGHLYCONFIDENTIAL",
                                            "ATTORNEYSEYESONLY", "CONFIDENTALX", "XYZ"};
  for (const std::string& base : samples) {
    const auto reference = match_confidentiality(base, cfg);
    for (int i = 0; i < 200; ++i) {
      std::string noisy;
      for (char c : base) {
        if (rng() % 3 == 0) noisy += " \n\t"[rng() % 3];
        noisy += c;
      }
      ASSERT_EQ(match_confidentiality(noisy, cfg), reference) << "'" << noisy << "'";
    }
  }
}

}  // namespace
}  // namespace batesqc
