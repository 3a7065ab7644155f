#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "batesqc/bates.hpp"

namespace batesqc {

enum class Band { Bottom, Top };

std::string_view to_string(Band band) noexcept;

struct PageRecord {
  BatesNumber bates;
  std::string image_path;
  std::string doc_id;
  std::optional<std::string> expected_confidentiality;
  std::vector<Band> stamp_bands = {Band::Bottom};
  /// Page within a multi-page image file; 0 for single-page files.
  std::size_t image_page = 0;
};

struct ProductionManifest {
  std::vector<PageRecord> pages;
  std::string prefix;
  int width = 0;
  Separator separator = Separator::None;
};

enum class LoadFormat { Csv, Dat, Opt };
enum class TextEncoding { Auto, Utf8, Windows1252 };

LoadFormat parse_load_format(std::string_view name);

/// Header names bound to the fields we consume. Matching is
/// case-insensitive and ignores surrounding whitespace. Optional columns
/// that are absent from the header are simply not read.
struct FieldMap {
  std::string bates = "BEGBATES";
  std::string image = "IMAGE";
  std::string confidentiality = "CONF";
  std::string doc_id = "DOCID";
  std::string bands = "BANDS";
};

struct LoadOptions {
  LoadFormat format = LoadFormat::Csv;
  FieldMap fields;
  BatesGrammar grammar;
  TextEncoding encoding = TextEncoding::Auto;
  std::vector<Band> default_bands = {Band::Bottom};
};

/// Loads and validates a production load file. Errors: ParseError (with
/// 1-based line number), DuplicateBates, MixedPrefix, MissingColumn,
/// IoError.
ProductionManifest load_manifest(const std::filesystem::path& path, const LoadOptions& options);

/// Same as load_manifest over in-memory bytes; `origin` names the source in
/// error messages.
ProductionManifest parse_manifest(std::string_view bytes, const LoadOptions& options,
                                  std::string_view origin = "<memory>");

/// Builds a manifest from records: sorts by value and enforces uniqueness
/// and a shared prefix/width.
ProductionManifest make_manifest(std::vector<PageRecord> pages);

/// Windows-1252 to UTF-8.
std::string cp1252_to_utf8(std::string_view bytes);

}  // namespace batesqc
