#include <gtest/gtest.h>

#include "batesqc/error.hpp"
#include "batesqc/manifest.hpp"
#include "test_util.hpp"

namespace batesqc {
namespace {

using testing::TempDir;

ErrorCode load_error(std::string_view bytes, LoadOptions opts = {}) {
  try {
    parse_manifest(bytes, opts, "fixture");
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

TEST(LoadManifest, CsvTwoPages) {
  TempDir dir("csv");
  testing::write_file(dir / "m.csv",
                      "BEGBATES,IMAGE,CONF\nABC0000001,p1.tif,CONFIDENTIAL\nABC0000002,p2.tif,\n");
  const ProductionManifest m = load_manifest(dir / "m.csv", {});
  ASSERT_EQ(m.pages.size(), 2u);
  EXPECT_EQ(m.prefix, "ABC");
  EXPECT_EQ(m.width, 7);
  EXPECT_EQ(m.pages[0].image_path, "p1.tif");
  EXPECT_EQ(m.pages[0].expected_confidentiality, "CONFIDENTIAL");
  EXPECT_FALSE(m.pages[1].expected_confidentiality.has_value());
  EXPECT_EQ(m.pages[1].stamp_bands, std::vector<Band>{Band::Bottom});
}

TEST(LoadManifest, CsvQuotingAndSorting) {
  const ProductionManifest m = parse_manifest(
      "\xEF\xBB\xBF" "begbates , Image,Conf\r\n"
      "ABC0000003,\"dir, with comma/p3.tif\",\"HIGHLY \"\"SPECIAL\"\"\"\r\n"
      "\r\n"
      "ABC0000001,p1.tif,confidential\r\n",
      {});
  ASSERT_EQ(m.pages.size(), 2u);
  EXPECT_EQ(m.pages[0].bates.value, 1u);
  EXPECT_EQ(m.pages[0].expected_confidentiality, "CONFIDENTIAL");
  EXPECT_EQ(m.pages[1].image_path, "dir, with comma/p3.tif");
  EXPECT_EQ(m.pages[1].expected_confidentiality, "HIGHLY \"SPECIAL\"");
}

TEST(LoadManifest, DatCp1252) {
  LoadOptions opts;
  opts.format = LoadFormat::Dat;
  const std::string dat = "\xFE" "BEGBATES\xFE\x14\xFE" "IMAGE\xFE\r\n"
                          "\xFE" "ABC0000001\xFE\x14\xFE./p1.tif\xFE\r\n";
  const ProductionManifest m = parse_manifest(dat, opts);
  ASSERT_EQ(m.pages.size(), 1u);
  EXPECT_EQ(render_bates(m.pages[0].bates), "ABC0000001");
  EXPECT_EQ(m.pages[0].image_path, "./p1.tif");
}

TEST(LoadManifest, DatUtf8WithEmptyQualifiedField) {
  LoadOptions opts;
  opts.format = LoadFormat::Dat;
  const std::string thorn = "\xC3\xBE";
  const std::string dat = thorn + "BEGBATES" + thorn + "\x14" + thorn + "CONF" + thorn + "\x14" +
                          thorn + "IMAGE" + thorn + "\n" + thorn + "ABC0000001" + thorn + "\x14" +
                          thorn + thorn + "\x14" + thorn + "img\\p1.tif" + thorn + "\n";
  const ProductionManifest m = parse_manifest(dat, opts);
  ASSERT_EQ(m.pages.size(), 1u);
  EXPECT_FALSE(m.pages[0].expected_confidentiality);
  EXPECT_EQ(m.pages[0].image_path, "img/p1.tif");
}

TEST(LoadManifest, DatCp1252ConvertsValues) {
  LoadOptions opts;
  opts.format = LoadFormat::Dat;
  opts.encoding = TextEncoding::Windows1252;
  const std::string dat = "\xFE" "BEGBATES\xFE\x14\xFE" "IMAGE\xFE\x14\xFE" "CONF\xFE\n"
                          "\xFE" "ABC0000001\xFE\x14\xFE" "caf\xE9.tif\xFE\x14\xFE\x93" "X\x94\xFE\n";
  const ProductionManifest m = parse_manifest(dat, opts);
  EXPECT_EQ(m.pages[0].image_path, "caf\xC3\xA9.tif");
  EXPECT_EQ(m.pages[0].expected_confidentiality, "\xE2\x80\x9CX\xE2\x80\x9D");
}

TEST(LoadManifest, OptCrossReference) {
  LoadOptions opts;
  opts.format = LoadFormat::Opt;
  const ProductionManifest m = parse_manifest(
      "ABC0000001,VOL001,IMAGES\\001\\ABC0000001.tif,Y,,,2\n"
      "ABC0000002,VOL001,IMAGES\\001\\ABC0000002.tif,,,,\n"
      "ABC0000003,VOL001,IMAGES\\001\\ABC0000003.tif,Y,,,1\n",
      opts);
  ASSERT_EQ(m.pages.size(), 3u);
  EXPECT_EQ(m.pages[1].image_path, "IMAGES/001/ABC0000002.tif");
  EXPECT_EQ(m.pages[1].doc_id, "ABC0000001");
  EXPECT_EQ(m.pages[2].doc_id, "ABC0000003");
}

TEST(LoadManifest, SharedMultipageImageGetsPageIndexes) {
  LoadOptions opts;
  opts.format = LoadFormat::Opt;
  const ProductionManifest m = parse_manifest(
      "ABC0000001,V,doc.tif,Y,,,2\nABC0000002,V,doc.tif,,,,\n", opts);
  EXPECT_EQ(m.pages[0].image_page, 0u);
  EXPECT_EQ(m.pages[1].image_page, 1u);
}

TEST(LoadManifest, BandsColumn) {
  const ProductionManifest m =
      parse_manifest("BEGBATES,IMAGE,BANDS\nA01,a.png,both\nA02,b.png,top\nA03,c.png,\n", {});
  EXPECT_EQ(m.pages[0].stamp_bands, (std::vector<Band>{Band::Bottom, Band::Top}));
  EXPECT_EQ(m.pages[1].stamp_bands, std::vector<Band>{Band::Top});
  EXPECT_EQ(m.pages[2].stamp_bands, std::vector<Band>{Band::Bottom});
}

TEST(LoadManifest, DuplicateBates) {
  EXPECT_EQ(load_error("BEGBATES,IMAGE\nABC0000001,a.tif\nABC0000001,b.tif\n"),
            ErrorCode::DuplicateBates);
}

TEST(LoadManifest, MixedPrefixOrWidth) {
  EXPECT_EQ(load_error("BEGBATES,IMAGE\nABC0000001,a.tif\nABD0000002,b.tif\n"),
            ErrorCode::MixedPrefix);
  EXPECT_EQ(load_error("BEGBATES,IMAGE\nABC0000001,a.tif\nABC00002,b.tif\n"),
            ErrorCode::MixedPrefix);
}

TEST(LoadManifest, MissingColumn) {
  EXPECT_EQ(load_error("BATES,IMAGE\nABC0000001,a.tif\n"), ErrorCode::MissingColumn);
  EXPECT_EQ(load_error(""), ErrorCode::MissingColumn);
}

TEST(LoadManifest, ParseErrorCarriesLineNumber) {
  try {
    parse_manifest("BEGBATES,IMAGE\nABC0000001,a.tif\nABC0000002\n", {}, "m.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("m.csv:3"), std::string::npos) << e.what();
  }
}

TEST(LoadManifest, EveryMalformedFixtureYieldsTypedError) {
  const std::pair<const char*, ErrorCode> fixtures[] = {
      {"BEGBATES,IMAGE\nABC0000001,\"a.tif\n", ErrorCode::ParseError},
      {"BEGBATES,IMAGE\nABC0000001,\"a\"x.tif\n", ErrorCode::ParseError},
      {"BEGBATES,IMAGE\nABC0000001,a\"b.tif\n", ErrorCode::ParseError},
      {"BEGBATES,IMAGE\n123ABC,a.tif\n", ErrorCode::ParseError},
      {"BEGBATES,IMAGE\nABC0000001.001,a.tif\n", ErrorCode::ParseError},
      {"BEGBATES,IMAGE\nABC0000001,\n", ErrorCode::ParseError},
      {"BEGBATES,IMAGE\nABC0000001,a.tif,extra\n", ErrorCode::ParseError},
      {"BEGBATES,IMAGE,BANDS\nABC0000001,a.tif,sideways\n", ErrorCode::ParseError},
      {"IMAGE\na.tif\n", ErrorCode::MissingColumn},
  };
  for (const auto& [bytes, code] : fixtures) EXPECT_EQ(load_error(bytes), code) << bytes;

  LoadOptions opt;
  opt.format = LoadFormat::Opt;
  EXPECT_EQ(load_error("ABC0000001,VOL\n", opt), ErrorCode::ParseError);
  LoadOptions dat;
  dat.format = LoadFormat::Dat;
  EXPECT_EQ(load_error("\xFE" "BEGBATES\xFE\x14\xFE" "IMAGE\xFE\n\xFE" "ABC0000001\xFE\x14\xFE" "a.tif\n",
                       dat),
            ErrorCode::ParseError);
}

TEST(LoadManifest, MissingFileIsIoError) {
  try {
    load_manifest("/nonexistent/m.csv", {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IoError);
  }
}

TEST(LoadManifest, CustomFieldMap) {
  LoadOptions opts;
  opts.fields.bates = "BegDoc";
  opts.fields.image = "Path";
  opts.fields.confidentiality = "Designation";
  const ProductionManifest m =
      parse_manifest("BEGDOC,PATH,DESIGNATION\nX-001,a.png,Confidential\n", opts);
  EXPECT_EQ(m.separator, Separator::Dash);
  EXPECT_EQ(m.pages[0].expected_confidentiality, "CONFIDENTIAL");
}

}  // namespace
}  // namespace batesqc
