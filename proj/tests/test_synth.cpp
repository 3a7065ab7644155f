#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include <json.hpp>

#include "batesqc/error.hpp"
#include "batesqc/font.hpp"
#include "batesqc/image_io.hpp"
#include "batesqc/synth.hpp"
#include "test_util.hpp"

namespace batesqc {
namespace {

using testing::TempDir;

CorpusSpec small_spec(std::uint64_t seed, std::size_t pages) {
  CorpusSpec spec;
  spec.seed = seed;
  spec.pages = pages;
  spec.page_width = 425;
  spec.page_height = 550;
  return spec;
}

std::set<std::size_t> ledger_pages(const Corpus& c, FaultKind kind) {
  std::set<std::size_t> out;
  for (const auto& f : c.ledger) {
    if (f.kind == kind) out.insert(f.page_index);
  }
  return out;
}

bool corner_blank(const PageImage& page, Corner corner) {
  RegionSpec spec;
  const auto [left, right] = split_corners(crop_band(page, spec), spec.split);
  const PageImage& img = corner == Corner::Left ? left : right;
  return std::all_of(img.pixels.begin(), img.pixels.end(), [](std::uint8_t p) { return p == 255; });
}

TEST(FaultSelected, CountWithinOnePage) {
  for (std::uint64_t seed : {0ull, 1ull, 42ull, 999ull}) {
    for (double rate : {0.0, 0.001, 0.08, 0.2, 0.5, 0.97, 1.0}) {
      std::size_t hits = 0;
      for (std::size_t n = 1; n <= 3000; ++n) {
        hits += fault_selected(seed, "conf_missing", n - 1, rate) ? 1 : 0;
        ASSERT_LE(std::abs(static_cast<double>(hits) - static_cast<double>(n) * rate), 1.0)
            << "seed " << seed << " rate " << rate << " n " << n;
      }
    }
  }
}

TEST(FaultSelected, DependsOnTagAndSeed) {
  std::size_t differ_tag = 0;
  std::size_t differ_seed = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    differ_tag += fault_selected(1, "a", i, 0.3) != fault_selected(1, "b", i, 0.3);
    differ_seed += fault_selected(1, "a", i, 0.3) != fault_selected(2, "a", i, 0.3);
  }
  EXPECT_GT(differ_tag, 0u);
  EXPECT_GT(differ_seed, 0u);
}

TEST(GenerateCorpus, ConfMissingExample) {
  TempDir dir("synth");
  CorpusSpec spec = small_spec(42, 10);
  spec.conf_missing_rate = 0.2;
  const Corpus c = generate_corpus(spec, dir.path());
  ASSERT_EQ(c.manifest.pages.size(), 10u);
  const auto missing = ledger_pages(c, FaultKind::ConfMissing);
  EXPECT_LE(std::abs(static_cast<double>(missing.size()) - 2.0), 1.0);
  EXPECT_EQ(c.ledger.size(), missing.size());
  for (std::size_t i = 0; i < 10; ++i) {
    const auto& rec = c.manifest.pages[i];
    ASSERT_TRUE(std::filesystem::exists(dir / rec.image_path));
    const PageImage page = read_image(dir / rec.image_path);
    EXPECT_EQ(page.width, 425);
    EXPECT_EQ(page.height, 550);
    EXPECT_EQ(corner_blank(page, Corner::Left), missing.count(i) == 1) << "page " << i;
    EXPECT_FALSE(corner_blank(page, Corner::Right));
    EXPECT_EQ(rec.expected_confidentiality, "CONFIDENTIAL");
  }
}

TEST(GenerateCorpus, NoFaults) {
  TempDir dir("synth");
  const Corpus c = generate_corpus(small_spec(7, 12), dir.path());
  EXPECT_TRUE(c.ledger.empty());
  for (std::size_t i = 0; i < c.manifest.pages.size(); ++i) {
    const auto& rec = c.manifest.pages[i];
    EXPECT_EQ(rec.bates, (BatesNumber{"ABC", Separator::None, i + 1, 7}));
    const PageImage page = read_image(dir / rec.image_path);
    EXPECT_FALSE(corner_blank(page, Corner::Left));
    EXPECT_FALSE(corner_blank(page, Corner::Right));
    const std::string stem = std::filesystem::path(rec.image_path).stem().string();
    EXPECT_EQ(c.rendered_text.at(stem + "-right"), render_bates(rec.bates));
    EXPECT_EQ(c.rendered_text.at(stem + "-left"), "CONFIDENTIAL");
  }
  const auto ledger = nlohmann::json::parse(testing::read_file(dir / "ledger.json"));
  EXPECT_EQ(ledger["seed"], 7);
  EXPECT_EQ(ledger["pages"], 12);
  EXPECT_TRUE(ledger["faults"].empty());
}

TEST(GenerateCorpus, Deterministic) {
  TempDir a("synth");
  TempDir b("synth");
  CorpusSpec spec = small_spec(5, 15);
  spec.conf_missing_rate = 0.1;
  spec.fault_rates = {0.1, 0.1, 0.1};
  generate_corpus(spec, a.path());
  spec.workers = 3;
  generate_corpus(spec, b.path());
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
    names.push_back(entry.path().filename().string());
  }
  std::sort(names.begin(), names.end());
  ASSERT_EQ(names.size(), 15u + 3u);
  for (const auto& name : names) {
    ASSERT_TRUE(std::filesystem::exists(b / name)) << name;
    EXPECT_EQ(testing::read_file(a / name), testing::read_file(b / name)) << name;
  }
}

TEST(GenerateCorpus, LedgerCompleteness) {
  TempDir faulty_dir("synth");
  TempDir clean_dir("synth");
  CorpusSpec spec = small_spec(11, 60);
  spec.conf_vocabulary = {"CONFIDENTIAL", "HIGHLY CONFIDENTIAL"};
  spec.conf_missing_rate = 0.08;
  spec.fault_rates = {0.05, 0.05, 0.05};
  const Corpus faulty = generate_corpus(spec, faulty_dir.path());
  CorpusSpec clean_spec = spec;
  clean_spec.conf_missing_rate = 0.0;
  clean_spec.fault_rates = {};
  const Corpus clean = generate_corpus(clean_spec, clean_dir.path());
  ASSERT_FALSE(faulty.ledger.empty());

  std::set<std::size_t> in_ledger;
  for (const auto& f : faulty.ledger) {
    in_ledger.insert(f.page_index);
    EXPECT_EQ(f.bates, render_bates(faulty.manifest.pages[f.page_index].bates));
  }
  for (std::size_t i = 0; i < spec.pages; ++i) {
    const auto& rec = faulty.manifest.pages[i];
    EXPECT_EQ(rec.bates, clean.manifest.pages[i].bates);
    EXPECT_EQ(rec.expected_confidentiality, clean.manifest.pages[i].expected_confidentiality);
    const bool differs = testing::read_file(faulty_dir / rec.image_path) !=
                         testing::read_file(clean_dir / rec.image_path);
    EXPECT_EQ(differs, in_ledger.count(i) == 1) << "page " << i;
    const std::string stem = std::filesystem::path(rec.image_path).stem().string();
    const bool text_differs =
        faulty.rendered_text.at(stem + "-right") != render_bates(rec.bates) ||
        faulty.rendered_text.at(stem + "-left") != *rec.expected_confidentiality;
    EXPECT_EQ(text_differs, in_ledger.count(i) == 1) << "page " << i;
  }
  // Omitted stamps suppress wrong/double faults on the same page.
  for (std::size_t p : ledger_pages(faulty, FaultKind::OmitBates)) {
    EXPECT_EQ(ledger_pages(faulty, FaultKind::WrongBates).count(p), 0u);
    EXPECT_EQ(ledger_pages(faulty, FaultKind::DoubleStamp).count(p), 0u);
  }
  const auto json = nlohmann::json::parse(testing::read_file(faulty_dir / "ledger.json"));
  EXPECT_EQ(json["faults"].size(), faulty.ledger.size());
}

TEST(GenerateCorpus, AddingPagesKeepsEarlierFaults) {
  TempDir a("synth");
  TempDir b("synth");
  CorpusSpec spec = small_spec(3, 20);
  spec.conf_missing_rate = 0.15;
  spec.fault_rates = {0.05, 0.1, 0.1};
  const Corpus shorter = generate_corpus(spec, a.path());
  spec.pages = 40;
  const Corpus longer = generate_corpus(spec, b.path());
  std::vector<std::pair<std::size_t, FaultKind>> first;
  std::vector<std::pair<std::size_t, FaultKind>> prefix_of_second;
  for (const auto& f : shorter.ledger) first.emplace_back(f.page_index, f.kind);
  for (const auto& f : longer.ledger) {
    if (f.page_index < 20) prefix_of_second.emplace_back(f.page_index, f.kind);
  }
  EXPECT_EQ(first, prefix_of_second);
}

TEST(GenerateCorpus, DefaultGlyphHeight) {
  CorpusSpec spec;
  const int scale = std::max(1, static_cast<int>(std::lround(spec.page_height / 412.0)));
  EXPECT_GE(font::text_height(scale), 24);
}

TEST(GenerateCorpus, InvalidSpec) {
  TempDir dir("synth");
  CorpusSpec spec = small_spec(1, 0);
  EXPECT_THROW(generate_corpus(spec, dir.path()), Error);
  spec.pages = 10;
  spec.conf_missing_rate = 1.5;
  EXPECT_THROW(generate_corpus(spec, dir.path()), Error);
  spec.conf_missing_rate = 0;
  spec.width = 1;
  EXPECT_THROW(generate_corpus(spec, dir.path()), Error);
  spec.width = 7;
  spec.prefix = "abc";
  EXPECT_THROW(generate_corpus(spec, dir.path()), Error);
}

TEST(CorruptOcrText, Examples) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::string spaced = corrupt_ocr_text("ABC000123", Corruption::Space, seed);
    ASSERT_EQ(spaced.size(), 10u);
    EXPECT_EQ(std::count(spaced.begin(), spaced.end(), ' '), 1);
    EXPECT_NE(spaced.front(), ' ');
    EXPECT_NE(spaced.back(), ' ');
    std::string without = spaced;
    without.erase(std::remove(without.begin(), without.end(), ' '), without.end());
    EXPECT_EQ(without, "ABC000123");

    const std::string o = corrupt_ocr_text("ABC000123", Corruption::ZeroToO, seed);
    EXPECT_EQ(std::count(o.begin(), o.end(), 'O'), 1);
    EXPECT_EQ(o.substr(0, 3), "ABC");
    EXPECT_EQ(o.substr(6), "123");

    EXPECT_EQ(corrupt_ocr_text("ABC111111", Corruption::ZeroToO, seed), "ABC111111");
    EXPECT_EQ(corrupt_ocr_text("ABC000123", Corruption::PrefixExtraO, seed), "ABCO000123");
    EXPECT_EQ(corrupt_ocr_text("ABC-000123", Corruption::PrefixExtraO, seed), "ABCO-000123");

    const std::string nl = corrupt_ocr_text("ABC000123", Corruption::Newlines, seed);
    EXPECT_TRUE(nl == "\nABC000123" || nl == "ABC000123\n" || nl == "\nABC000123\n") << nl;
  }
}

TEST(CorruptOcrText, SeedDeterministic) {
  const Corruption all3[] = {Corruption::Space, Corruption::ZeroToO, Corruption::Newlines};
  EXPECT_EQ(corrupt_ocr_text("XY0000042", all3, 9), corrupt_ocr_text("XY0000042", all3, 9));
  std::set<std::string> variants;
  for (std::uint64_t s = 0; s < 40; ++s) variants.insert(corrupt_ocr_text("XY0000042", all3, s));
  EXPECT_GT(variants.size(), 5u);
}

}  // namespace
}  // namespace batesqc
